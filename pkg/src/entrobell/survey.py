"""Monte Carlo survey engine: sample state families, evaluate measures,
aggregate coincidence statistics and participation-ratio sweeps.

Determinism contract: record ``i`` is computed from the RNG substream
derived from ``(seed, i)`` and records are returned ordered by ``i``, so
the output is bit-identical for every ``worker_count``.

Flag semantics (stored on every record when the inputs are available):

* ``entropic_violated`` — some conditional entropy is below ``-1e-12``;
* ``entangled`` — concurrence above ``1e-12`` (two qubits only; left
  unset for three and four qubits, where no tractable mixed-state
  entanglement measure exists);
* ``nonlocal`` — the state's Bell maximum exceeds the classical bound
  by more than ``1e-9`` (CHSH for two qubits, the three-party operator
  for three, the recursion operator for four).

Family sampling measures:

* ``haar_simplex`` — eigenvalues Lebesgue-uniform on the simplex,
  eigenbasis Haar-random (``states.random_density``);
* ``bell_diagonal`` — Bell-basis weights obtained by normalizing four
  independent U[0,1] draws by their sum.  This is the ensemble that
  reproduces the target coincidence triple (0.836 / 0.994 / 0.842);
  Lebesgue-uniform weights give ~0.54 / 0.96 / 0.58 instead and are
  decisively excluded.
* ``fixed_ratio`` — exact participation-ratio sampler
  (``states.random_fixed_ratio``) at ``config.ratio``;
* ``werner_sweep`` — deterministic grid of GHZ/identity mixtures with
  weight ``i / (sample_count - 1)``.
"""

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .bell import (
    CHSH_CLASSICAL_BOUND,
    MABK_CLASSICAL_BOUNDS,
    MERMIN_CLASSICAL_BOUND,
    VIOLATION_SLACK,
    chsh_envelope,
    chsh_max,
    mabk_max,
    mermin_envelope,
    mermin_max,
)
from .correlations import concurrence, geometric_discord, quantum_discord
from .entropic import LN2, entropic_report
from .errors import MissingMeasure, UnsupportedMeasure
from .states import (
    bell_diagonal,
    participation_ratio,
    random_density,
    random_fixed_ratio,
    substream,
    werner_ghz,
)

ENTANGLEMENT_TOL = 1e-12

MEASURES = (
    "entropic",
    "concurrence",
    "discord",
    "geometric_discord",
    "chsh",
    "mermin",
    "mabk",
)
_MEASURE_QUBITS = {
    "entropic": (2, 3, 4),
    "concurrence": (2,),
    "discord": (2,),
    "geometric_discord": (2,),
    "chsh": (2,),
    "mermin": (3,),
    "mabk": (2, 3, 4),
}
FAMILIES = ("haar_simplex", "bell_diagonal", "fixed_ratio", "werner_sweep")

PAIRS = ("entropic-entanglement", "entropic-bell", "entanglement-bell")
_PAIR_FLAGS = {
    "entropic-entanglement": ("entropic_violated", "entangled"),
    "entropic-bell": ("entropic_violated", "nonlocal_"),
    "entanglement-bell": ("entangled", "nonlocal_"),
}

# Bell measures eligible to set the nonlocal flag, in preference order,
# with the classical bound each is compared against.
_BELL_FLAG_SOURCES = {
    2: (("chsh", CHSH_CLASSICAL_BOUND), ("mabk", MABK_CLASSICAL_BOUNDS[2])),
    3: (("mermin", MERMIN_CLASSICAL_BOUND), ("mabk", MABK_CLASSICAL_BOUNDS[3])),
    4: (("mabk", MABK_CLASSICAL_BOUNDS[4]),),
}

CSV_COLUMNS = (
    "state_id",
    "n_qubits",
    "R",
    "lambda_max",
    "min_conditional_nats",
    "min_conditional_ln2",
    "concurrence",
    "discord",
    "geometric_discord",
    "chsh_max",
    "mermin_max",
    "mabk_max",
    "entropic_violated",
    "entangled",
    "nonlocal",
)
STATS_COLUMNS = ("R", "pair", "probability", "sample_count", "wilson_low", "wilson_high")

Z_95 = 1.959963984540054  # two-sided 95% normal quantile


@dataclass(frozen=True)
class SurveyConfig:
    """One survey run: what to sample, what to measure, how to persist.

    ``subsample`` maps a measure name to a stride k: that measure is then
    evaluated only on records whose index is a multiple of k (the other
    records carry no value for it).  ``ratio`` is required by — and only
    allowed for — the fixed_ratio family.
    """

    n_qubits: int
    sample_count: int
    state_family: str
    measures: tuple
    seed: int = 0
    worker_count: int = 1
    ratio: float = None
    subsample: tuple = ()
    output_path: str = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.n_qubits not in (2, 3, 4):
            raise ValueError(f"n_qubits={self.n_qubits!r} not in (2, 3, 4)")
        if not isinstance(self.sample_count, int) or self.sample_count < 1:
            raise ValueError(f"sample_count={self.sample_count!r} must be >= 1")
        if self.state_family not in FAMILIES:
            raise ValueError(f"unknown state family {self.state_family!r}")
        object.__setattr__(self, "measures", tuple(self.measures))
        for measure in self.measures:
            if measure not in MEASURES:
                raise UnsupportedMeasure(f"unknown measure {measure!r}")
            if self.n_qubits not in _MEASURE_QUBITS[measure]:
                raise UnsupportedMeasure(
                    f"measure {measure!r} is not defined for {self.n_qubits} qubits"
                )
        if self.state_family == "bell_diagonal" and self.n_qubits != 2:
            raise ValueError("bell_diagonal family requires n_qubits=2")
        if self.state_family == "fixed_ratio":
            if self.ratio is None:
                raise ValueError("fixed_ratio family requires a ratio")
        elif self.ratio is not None:
            raise ValueError(f"ratio only applies to fixed_ratio, not {self.state_family!r}")
        if not isinstance(self.worker_count, int) or self.worker_count < 1:
            raise ValueError(f"worker_count={self.worker_count!r} must be >= 1")
        object.__setattr__(self, "subsample", tuple(self.subsample))
        for entry in self.subsample:
            measure, stride = entry
            if measure not in self.measures:
                raise UnsupportedMeasure(
                    f"subsample stride for {measure!r}, which is not being measured"
                )
            if not isinstance(stride, int) or stride < 1:
                raise ValueError(f"subsample stride {stride!r} must be a positive integer")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"output format {self.output_format!r} not in ('csv', 'json')")

    def stride(self, measure):
        return dict(self.subsample).get(measure, 1)

    def metadata(self):
        return {
            "n_qubits": self.n_qubits,
            "sample_count": self.sample_count,
            "state_family": self.state_family,
            "measures": list(self.measures),
            "seed": self.seed,
            "worker_count": self.worker_count,
            "ratio": self.ratio,
            "subsample": {m: k for m, k in self.subsample},
        }


@dataclass(frozen=True)
class SurveyRecord:
    """Everything evaluated for one sampled state.

    Measure fields hold None when the measure was not requested (or was
    skipped by a subsample stride); flags hold None when the inputs they
    depend on are absent.  ``nonlocal_`` carries a trailing underscore
    only because of the Python keyword; it is exported as "nonlocal".
    """

    state_id: int
    n_qubits: int
    ratio: float
    lambda_max: float
    min_conditional: float = None
    concurrence: float = None
    discord: float = None
    geometric_discord: float = None
    chsh_max: float = None
    mermin_max: float = None
    mabk_max: float = None
    entropic_violated: bool = None
    entangled: bool = None
    nonlocal_: bool = None

    @property
    def min_conditional_ln2(self):
        if self.min_conditional is None:
            return None
        return self.min_conditional / LN2


@dataclass(frozen=True)
class CoincidenceStats:
    """Agreement probability for one pair of flags, with its Wilson CI."""

    pair: str
    probability: float
    sample_count: int
    wilson_low: float
    wilson_high: float

    @property
    def interval(self):
        return (self.wilson_low, self.wilson_high)


@dataclass(frozen=True)
class SweepRow:
    """Coincidence statistics at one fixed participation ratio."""

    ratio: float
    stats: tuple

    def stat(self, pair):
        for s in self.stats:
            if s.pair == pair:
                return s
        raise MissingMeasure(f"no statistics for pair {pair!r} at R={self.ratio}")


@dataclass(frozen=True)
class EnvelopeReport:
    """Worst excess of sampled Bell maxima over the analytic envelope."""

    envelope: str
    sample_count: int
    max_excess: float
    tolerance: float

    @property
    def within_tolerance(self):
        return self.max_excess <= self.tolerance


def _sample_state(config, index, rng):
    family = config.state_family
    if family == "haar_simplex":
        return random_density(config.n_qubits, rng)
    if family == "bell_diagonal":
        u = rng.random(4)
        return bell_diagonal(tuple(u / u.sum()))
    if family == "fixed_ratio":
        return random_fixed_ratio(config.n_qubits, config.ratio, rng)
    count = config.sample_count
    weight = 1.0 if count == 1 else index / (count - 1)
    return werner_ghz(config.n_qubits, weight)


def sample_states(config):
    """The states a survey over ``config`` would evaluate, in index order."""
    return [
        _sample_state(config, i, substream(config.seed, i))
        for i in range(config.sample_count)
    ]


def measure_state(state, measures, state_id=0):
    """Evaluate the given measures on one state and build its record."""
    n = state.n_qubits
    for measure in measures:
        if measure not in MEASURES:
            raise UnsupportedMeasure(f"unknown measure {measure!r}")
        if n not in _MEASURE_QUBITS[measure]:
            raise UnsupportedMeasure(f"measure {measure!r} is not defined for {n} qubits")
    values = {
        "state_id": state_id,
        "n_qubits": n,
        "ratio": float(participation_ratio(state)),
        "lambda_max": float(np.linalg.eigvalsh(state.matrix)[-1]),
    }
    if "entropic" in measures:
        report = entropic_report(state)
        values["min_conditional"] = float(report.min_conditional)
        values["entropic_violated"] = bool(report.violated)
    if "concurrence" in measures:
        values["concurrence"] = float(concurrence(state))
        values["entangled"] = bool(values["concurrence"] > ENTANGLEMENT_TOL)
    if "discord" in measures:
        values["discord"] = float(quantum_discord(state))
    if "geometric_discord" in measures:
        values["geometric_discord"] = float(geometric_discord(state))
    if "chsh" in measures:
        values["chsh_max"] = float(chsh_max(state).value)
    if "mermin" in measures:
        values["mermin_max"] = float(mermin_max(state).value)
    if "mabk" in measures:
        values["mabk_max"] = float(mabk_max(state, n).value)
    for measure, bound in _BELL_FLAG_SOURCES[n]:
        value = values.get(f"{measure}_max")
        if value is not None:
            values["nonlocal_"] = bool(value > bound + VIOLATION_SLACK)
            break
    return SurveyRecord(**values)


def _evaluate_record(config, index):
    rng = substream(config.seed, index)
    state = _sample_state(config, index, rng)
    active = tuple(
        m for m in config.measures if index % config.stride(m) == 0
    )
    return measure_state(state, active, state_id=index)


def _evaluate_star(args):
    return _evaluate_record(*args)


def _run_records(config):
    indices = range(config.sample_count)
    if config.worker_count == 1:
        return [_evaluate_record(config, i) for i in indices]
    chunk = max(1, config.sample_count // (config.worker_count * 8))
    with ProcessPoolExecutor(max_workers=config.worker_count) as pool:
        return list(
            pool.map(_evaluate_star, ((config, i) for i in indices), chunksize=chunk)
        )


def run_survey(config):
    """Sample, measure, and (if configured) persist; records ordered by id."""
    records = _run_records(config)
    if config.output_path is not None:
        export(records, config.output_path, config.output_format, config.metadata())
    return records


def _wilson_interval(successes, total):
    p = successes / total
    z2 = Z_95 * Z_95
    denom = 1.0 + z2 / total
    center = (p + z2 / (2.0 * total)) / denom
    half = Z_95 * math.sqrt(p * (1.0 - p) / total + z2 / (4.0 * total * total)) / denom
    # mathematically the interval always contains p; keep that exact in
    # floating point, where cancellation at p=0 or p=1 can miss by ~1e-17
    return min(p, max(0.0, center - half)), max(p, min(1.0, center + half))


def coincidence(records, pair):
    """Fraction of records where the two flags of ``pair`` agree."""
    if pair not in _PAIR_FLAGS:
        raise ValueError(f"unknown pair {pair!r}; expected one of {PAIRS}")
    name_a, name_b = _PAIR_FLAGS[pair]
    records = list(records)
    if not records:
        raise MissingMeasure("no records to aggregate")
    agreements = 0
    for record in records:
        a = getattr(record, name_a)
        b = getattr(record, name_b)
        if a is None or b is None:
            raise MissingMeasure(
                f"record {record.state_id} lacks a flag needed for {pair!r}"
            )
        agreements += a == b
    total = len(records)
    low, high = _wilson_interval(agreements, total)
    return CoincidenceStats(
        pair=pair,
        probability=agreements / total,
        sample_count=total,
        wilson_low=low,
        wilson_high=high,
    )


def available_pairs(records):
    out = []
    for pair in PAIRS:
        name_a, name_b = _PAIR_FLAGS[pair]
        if all(
            getattr(r, name_a) is not None and getattr(r, name_b) is not None
            for r in records
        ):
            out.append(pair)
    return out


def ratio_sweep(config, r_grid, per_point):
    """Coincidence statistics at each fixed participation ratio in the grid."""
    rows = []
    for r in r_grid:
        point = replace(
            config,
            state_family="fixed_ratio",
            ratio=float(r),
            sample_count=per_point,
            output_path=None,
        )
        records = _run_records(point)
        pairs = available_pairs(records)
        if not pairs:
            raise MissingMeasure("sweep records carry no complete flag pair")
        rows.append(
            SweepRow(
                ratio=float(r),
                stats=tuple(coincidence(records, pair) for pair in pairs),
            )
        )
    return rows


_ENVELOPES = {
    "chsh": (chsh_envelope, "chsh_max", (1.0, 4.0), 1e-6),
    "mermin": (mermin_envelope, "mermin_max", (1.0, 8.0), 5e-3),
}


def envelope_check(records, envelope):
    """Worst excess of the recorded Bell maxima over the analytic envelope.

    Records without the relevant value (e.g. skipped by a subsample
    stride) are ignored; if none carries it, MissingMeasure is raised.
    """
    if envelope not in _ENVELOPES:
        raise ValueError(f"unknown envelope {envelope!r}; expected 'chsh' or 'mermin'")
    fn, attr, (lo, hi), tolerance = _ENVELOPES[envelope]
    excesses = []
    for record in records:
        value = getattr(record, attr)
        if value is None:
            continue
        clamped = min(max(record.ratio, lo), hi)
        excesses.append(value - fn(clamped))
    if not excesses:
        raise MissingMeasure(f"no record carries a value for the {envelope} envelope")
    return EnvelopeReport(
        envelope=envelope,
        sample_count=len(excesses),
        max_excess=max(excesses),
        tolerance=tolerance,
    )


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return "%.17g" % value


def _record_row(record):
    return [
        _format_cell(v)
        for v in (
            record.state_id,
            record.n_qubits,
            record.ratio,
            record.lambda_max,
            record.min_conditional,
            record.min_conditional_ln2,
            record.concurrence,
            record.discord,
            record.geometric_discord,
            record.chsh_max,
            record.mermin_max,
            record.mabk_max,
            record.entropic_violated,
            record.entangled,
            record.nonlocal_,
        )
    ]


def _stats_rows(items):
    rows = []
    for item in items:
        if isinstance(item, SweepRow):
            for s in item.stats:
                rows.append((item.ratio, s))
        else:
            rows.append((None, item))
    return [
        [
            _format_cell(ratio),
            stat.pair,
            _format_cell(stat.probability),
            _format_cell(stat.sample_count),
            _format_cell(stat.wilson_low),
            _format_cell(stat.wilson_high),
        ]
        for ratio, stat in rows
    ]


def record_as_dict(record):
    return {
        column: getattr(record, attr)
        for column, attr in zip(
            CSV_COLUMNS,
            (
                "state_id",
                "n_qubits",
                "ratio",
                "lambda_max",
                "min_conditional",
                "min_conditional_ln2",
                "concurrence",
                "discord",
                "geometric_discord",
                "chsh_max",
                "mermin_max",
                "mabk_max",
                "entropic_violated",
                "entangled",
                "nonlocal_",
            ),
        )
    }


def export(items, path, fmt="csv", metadata=None):
    """Write records (or coincidence/sweep statistics) to csv or json.

    CSV is the figure-ready flat table (header always present, blanks for
    absent values); json additionally carries the metadata mapping.
    """
    items = list(items)
    is_stats = bool(items) and isinstance(items[0], (CoincidenceStats, SweepRow))
    if fmt == "csv":
        with open(path, "w", encoding="ascii", newline="") as fh:
            writer = csv.writer(fh)
            if is_stats:
                writer.writerow(STATS_COLUMNS)
                writer.writerows(_stats_rows(items))
            else:
                writer.writerow(CSV_COLUMNS)
                writer.writerows(_record_row(r) for r in items)
        return
    if fmt != "json":
        raise ValueError(f"unknown export format {fmt!r}")
    if is_stats:
        body = []
        for item in items:
            if isinstance(item, SweepRow):
                for s in item.stats:
                    body.append({"R": item.ratio, **_stat_dict(s)})
            else:
                body.append({"R": None, **_stat_dict(item)})
        doc = {"metadata": metadata or {}, "stats": body}
    else:
        doc = {"metadata": metadata or {}, "records": [record_as_dict(r) for r in items]}
    with open(path, "w", encoding="ascii") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def _stat_dict(stat):
    return {
        "pair": stat.pair,
        "probability": stat.probability,
        "sample_count": stat.sample_count,
        "wilson_low": stat.wilson_low,
        "wilson_high": stat.wilson_high,
    }


def _parse_cell(text, kind):
    if text == "":
        return None
    if kind is bool:
        if text == "true":
            return True
        if text == "false":
            return False
        raise ValueError(f"bad boolean cell {text!r}")
    return kind(text)


def _record_from_values(values):
    return SurveyRecord(
        state_id=values["state_id"],
        n_qubits=values["n_qubits"],
        ratio=values["R"],
        lambda_max=values["lambda_max"],
        min_conditional=values["min_conditional_nats"],
        concurrence=values["concurrence"],
        discord=values["discord"],
        geometric_discord=values["geometric_discord"],
        chsh_max=values["chsh_max"],
        mermin_max=values["mermin_max"],
        mabk_max=values["mabk_max"],
        entropic_violated=values["entropic_violated"],
        entangled=values["entangled"],
        nonlocal_=values["nonlocal"],
    )


_COLUMN_KINDS = {
    "state_id": int,
    "n_qubits": int,
    "R": float,
    "lambda_max": float,
    "min_conditional_nats": float,
    "min_conditional_ln2": float,
    "concurrence": float,
    "discord": float,
    "geometric_discord": float,
    "chsh_max": float,
    "mermin_max": float,
    "mabk_max": float,
    "entropic_violated": bool,
    "entangled": bool,
    "nonlocal": bool,
}


def load_records(path, fmt=None):
    """Read a record table written by :func:`export` (format by extension)."""
    if fmt is None:
        fmt = "json" if str(path).endswith(".json") else "csv"
    if fmt == "json":
        with open(path, "r", encoding="ascii") as fh:
            doc = json.load(fh)
        return [_record_from_values(dict(row)) for row in doc["records"]]
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {header!r}")
        records = []
        for raw in reader:
            values = {
                column: _parse_cell(cell, _COLUMN_KINDS[column])
                for column, cell in zip(CSV_COLUMNS, raw)
            }
            records.append(_record_from_values(values))
    return records


__all__ = [
    "CSV_COLUMNS",
    "ENTANGLEMENT_TOL",
    "FAMILIES",
    "MEASURES",
    "PAIRS",
    "STATS_COLUMNS",
    "CoincidenceStats",
    "EnvelopeReport",
    "SurveyConfig",
    "SurveyRecord",
    "SweepRow",
    "available_pairs",
    "coincidence",
    "envelope_check",
    "export",
    "load_records",
    "measure_state",
    "record_as_dict",
    "sample_states",
    "ratio_sweep",
    "run_survey",
]
