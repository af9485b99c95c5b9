"""Command-line interface: generate state files, measure single states,
run surveys and ratio sweeps, and print the analytic threshold table.

Exit codes: 0 success; 2 bad arguments or unreadable inputs; 3 numeric
failure (an optimizer or sampler that could not certify its result).
The ENTROBELL_WORKERS environment variable supplies the default worker
count and is honored only when --workers is absent.
"""

import argparse
import json
import os
import sys

from .bell import chsh_envelope, mermin_envelope, werner_mabk_threshold
from .entropic import implied_max_ratio, single_eigenvalue_bound
from .errors import EntrobellError, OptimizerFailure, SamplerStalled
from .states import read_state, write_state
from .survey import (
    FAMILIES,
    MEASURES,
    SurveyConfig,
    available_pairs,
    coincidence,
    export,
    measure_state,
    ratio_sweep,
    record_as_dict,
    run_survey,
    sample_states,
)

WORKERS_ENV = "ENTROBELL_WORKERS"

_DEFAULT_MEASURES = {
    2: ("entropic", "concurrence", "chsh"),
    3: ("entropic", "mermin"),
    4: ("entropic", "mabk"),
}
_SINGLE_STATE_MEASURES = {
    2: ("entropic", "concurrence", "discord", "geometric_discord", "chsh"),
    3: ("entropic", "mermin", "mabk"),
    4: ("entropic", "mabk"),
}


def _measure_list(text):
    measures = tuple(part.strip() for part in text.split(",") if part.strip())
    for measure in measures:
        if measure not in MEASURES:
            raise argparse.ArgumentTypeError(
                f"unknown measure {measure!r}; choose from {', '.join(MEASURES)}"
            )
    return measures


def _ratio_grid(text):
    try:
        grid = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid {text!r} is not a comma-separated float list")
    if not grid:
        raise argparse.ArgumentTypeError("empty ratio grid")
    return grid


def _worker_count(args):
    if args.workers is not None:
        return args.workers
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        count = int(raw)
    except ValueError:
        raise EntrobellError(f"{WORKERS_ENV}={raw!r} is not an integer")
    return max(1, count)


def _cmd_generate(args):
    config = SurveyConfig(
        n_qubits=args.qubits,
        sample_count=args.count,
        state_family=args.family,
        measures=(),
        seed=args.seed,
        ratio=args.ratio,
    )
    os.makedirs(args.out, exist_ok=True)
    for index, state in enumerate(sample_states(config)):
        write_state(os.path.join(args.out, f"state_{index:05d}.json"), state)
    print(f"wrote {config.sample_count} state files to {args.out}")
    return 0


def _cmd_measure(args):
    state = read_state(args.infile)
    measures = args.measures or _SINGLE_STATE_MEASURES[state.n_qubits]
    record = measure_state(state, measures)
    print(json.dumps(record_as_dict(record), indent=1))
    return 0


def _cmd_survey(args):
    config = SurveyConfig(
        n_qubits=args.qubits,
        sample_count=args.samples,
        state_family=args.family,
        measures=args.measures or _DEFAULT_MEASURES[args.qubits],
        seed=args.seed,
        worker_count=_worker_count(args),
        ratio=args.ratio,
        output_path=args.out,
        output_format=args.format,
    )
    records = run_survey(config)
    print(f"wrote {len(records)} records to {args.out}")
    for pair in available_pairs(records):
        stats = coincidence(records, pair)
        print(
            f"{stats.pair}: {stats.probability:.4f} "
            f"[{stats.wilson_low:.4f}, {stats.wilson_high:.4f}] "
            f"(n={stats.sample_count})"
        )
    return 0


def _cmd_sweep(args):
    config = SurveyConfig(
        n_qubits=args.qubits,
        sample_count=args.per_point,
        state_family="fixed_ratio",
        measures=args.measures or _DEFAULT_MEASURES[args.qubits],
        seed=args.seed,
        worker_count=_worker_count(args),
        ratio=args.grid[0],
    )
    rows = ratio_sweep(config, args.grid, args.per_point)
    fmt = "json" if str(args.out).endswith(".json") else "csv"
    export(rows, args.out, fmt, config.metadata())
    print(f"wrote {len(rows)} sweep rows to {args.out}")
    for row in rows:
        parts = ", ".join(f"{s.pair}={s.probability:.4f}" for s in row.stats)
        print(f"R={row.ratio:g}: {parts}")
    return 0


def _cmd_thresholds(args):
    print("analytic thresholds")
    print(f"  three-qubit locality bound      R1 = 32/11 = {32.0 / 11.0:.12f}")
    print(f"  three-qubit entanglement bound  R2 = 25/4  = {25.0 / 4.0:.12f}")
    for n in (4, 6, 8):
        print(
            f"  GHZ/identity mixing threshold   p_c({n}) = "
            f"{werner_mabk_threshold(n):.12f}"
        )
    print("largest-eigenvalue ceilings (no entropic violation at or below)")
    for n in (2, 3, 4):
        print(
            f"  n={n}: lambda* = {single_eigenvalue_bound(n):.12f}, "
            f"implied max R = {implied_max_ratio(n):.12f}"
        )
    print("two-qubit CHSH ceiling vs participation ratio")
    for ratio in (1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0):
        print(f"  R={ratio:>4g}: {chsh_envelope(ratio):.12f}")
    print("three-qubit ceiling vs participation ratio")
    for ratio in (1.0, 2.0, 32.0 / 11.0, 4.0, 6.0, 8.0):
        print(f"  R={ratio:>18.15g}: {mermin_envelope(ratio):.12f}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="entrobell",
        description="mixedness, entanglement, and nonlocality surveys for 2-4 qubits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample states and write them as files")
    gen.add_argument("--qubits", type=int, required=True, choices=(2, 3, 4))
    gen.add_argument("--count", type=int, required=True)
    gen.add_argument("--family", required=True, choices=FAMILIES)
    gen.add_argument("--ratio", type=float, default=None)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="output directory")
    gen.set_defaults(handler=_cmd_generate)

    mea = sub.add_parser("measure", help="evaluate one state file")
    mea.add_argument("--in", dest="infile", required=True)
    mea.add_argument("--measures", type=_measure_list, default=None)
    mea.set_defaults(handler=_cmd_measure)

    srv = sub.add_parser("survey", help="run a Monte Carlo survey")
    srv.add_argument("--qubits", type=int, required=True, choices=(2, 3, 4))
    srv.add_argument("--samples", type=int, required=True)
    srv.add_argument("--family", required=True, choices=FAMILIES)
    srv.add_argument("--measures", type=_measure_list, default=None)
    srv.add_argument("--ratio", type=float, default=None)
    srv.add_argument("--seed", type=int, default=0)
    srv.add_argument("--out", required=True)
    srv.add_argument("--workers", type=int, default=None)
    srv.add_argument("--format", choices=("csv", "json"), default="csv")
    srv.set_defaults(handler=_cmd_survey)

    swp = sub.add_parser("sweep", help="coincidence statistics on a ratio grid")
    swp.add_argument("--qubits", type=int, required=True, choices=(2, 3, 4))
    swp.add_argument("--grid", type=_ratio_grid, required=True)
    swp.add_argument("--per-point", dest="per_point", type=int, required=True)
    swp.add_argument("--measures", type=_measure_list, default=None)
    swp.add_argument("--seed", type=int, default=0)
    swp.add_argument("--out", required=True)
    swp.add_argument("--workers", type=int, default=None)
    swp.set_defaults(handler=_cmd_sweep)

    thr = sub.add_parser("thresholds", help="print the analytic threshold table")
    thr.set_defaults(handler=_cmd_thresholds)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (OptimizerFailure, SamplerStalled) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except EntrobellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
