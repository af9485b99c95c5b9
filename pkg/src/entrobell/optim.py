"""Derivative-free minimizers: Nelder-Mead simplex, simulated annealing,
and a combined multi-start driver.

The two algorithms are deliberately independent search strategies — the
simplex walk is deterministic and local, the annealer is stochastic and
can escape local minima — so running both and comparing their best
values gives a confidence check on global optimality. All randomness
flows from explicit seeds through counter-based streams; nothing touches
global RNG state, and repeated calls are bit-identical.

Coordinates flagged periodic are treated as angles with period 2*pi:
every candidate point is folded before evaluation, so an objective sees
identical arguments at theta and theta + 2*pi.
"""

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ObjectiveSpec:
    """A scalar function of a real vector, to be minimized.

    Parameters
    ----------
    dimension : int
        Number of coordinates.
    evaluate : callable
        Maps a length-``dimension`` float array to a float. Must be
        deterministic for a fixed input.
    bounds : tuple of (low, high) pairs, optional
        Box constraints; candidate points are projected onto the box
        before evaluation. Also used to scale initial steps and to seed
        multi-start points.
    periodic : tuple of bool, optional
        Coordinates flagged True wrap modulo 2*pi instead of being
        clipped; their natural box is [0, 2*pi).
    """

    dimension: int
    evaluate: Callable[[np.ndarray], float]
    bounds: Optional[Tuple[Tuple[float, float], ...]] = None
    periodic: Optional[Tuple[bool, ...]] = None

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if self.bounds is not None:
            bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
            if len(bounds) != self.dimension:
                raise ValueError("bounds length does not match dimension")
            if any(hi <= lo for lo, hi in bounds):
                raise ValueError("each bound must satisfy low < high")
            object.__setattr__(self, "bounds", bounds)
        if self.periodic is not None:
            periodic = tuple(bool(f) for f in self.periodic)
            if len(periodic) != self.dimension:
                raise ValueError("periodic length does not match dimension")
            object.__setattr__(self, "periodic", periodic)
        # Precomputed masks so canonical() stays cheap in inner loops.
        mask = np.array(self.periodic or [False] * self.dimension)
        low = np.full(self.dimension, -np.inf)
        high = np.full(self.dimension, np.inf)
        if self.bounds is not None:
            for i, (lo, hi) in enumerate(self.bounds):
                if not mask[i]:
                    low[i], high[i] = lo, hi
        object.__setattr__(self, "_wrap_mask", mask)
        object.__setattr__(self, "_clip_low", low)
        object.__setattr__(self, "_clip_high", high)
        object.__setattr__(self, "_any_wrap", bool(mask.any()))
        object.__setattr__(self, "_any_clip", bool(np.isfinite(low).any() or np.isfinite(high).any()))

    def canonical(self, point):
        """Fold periodic coordinates mod 2*pi and project onto the box."""
        out = np.array(point, dtype=float)
        if self._any_wrap:
            np.mod(out, TWO_PI, out=out, where=self._wrap_mask)
        if self._any_clip:
            np.clip(out, self._clip_low, self._clip_high, out=out)
        return out

    def value(self, point):
        """Evaluate at the canonical representative of ``point``."""
        return float(self.evaluate(self.canonical(point)))

    def seed_box(self):
        """Per-coordinate interval used for initial steps and restarts."""
        box = []
        for i in range(self.dimension):
            if self.bounds is not None:
                box.append(self.bounds[i])
            elif self.periodic is not None and self.periodic[i]:
                box.append((0.0, TWO_PI))
            else:
                box.append((-1.0, 1.0))
        return tuple(box)


@dataclass(frozen=True)
class OptimOptions:
    """Budgets, tolerances, and the annealing schedule.

    ``max_evals`` and ``tolerance`` govern the simplex; the annealer runs
    its fixed schedule of ``epochs`` x ``steps_per_epoch`` Metropolis
    steps with the temperature multiplied by ``cooling_factor`` after
    each epoch. ``seed`` drives every stochastic choice.
    """

    restarts: int = 32
    max_evals: int = 4000
    tolerance: float = 1e-10
    seed: int = 0
    initial_temperature: float = 1.0
    cooling_factor: float = 0.95
    epochs: int = 200
    steps_per_epoch: int = 50

    def __post_init__(self):
        if self.restarts < 1 or self.max_evals < 1 or self.epochs < 1 or self.steps_per_epoch < 1:
            raise ValueError("restarts, max_evals, epochs, steps_per_epoch must be positive")
        if self.tolerance <= 0 or self.initial_temperature <= 0:
            raise ValueError("tolerance and initial_temperature must be positive")
        if not 0.0 < self.cooling_factor < 1.0:
            raise ValueError(f"cooling_factor {self.cooling_factor} outside (0, 1)")


@dataclass(frozen=True)
class OptimResult:
    """Outcome of a single minimizer run.

    ``history`` records the best value seen after each objective
    evaluation, so it is non-increasing by construction. ``exhausted``
    is True when the evaluation budget ran out before the convergence
    test passed (the best point so far is still returned).
    """

    point: np.ndarray
    value: float
    evaluations: int
    exhausted: bool
    history: np.ndarray


@dataclass(frozen=True)
class TwofoldResult:
    """Outcome of the two-route search.

    ``agreement`` is the absolute difference between the best multi-start
    simplex value and the (locally polished) annealing value; callers use
    it as a global-optimality confidence gate.
    """

    point: np.ndarray
    value: float
    agreement: float
    amoeba: OptimResult
    annealing: OptimResult

    @property
    def evaluations(self):
        return self.amoeba.evaluations + self.annealing.evaluations


def _rng(seed, stream):
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(stream)])
    return np.random.Generator(np.random.Philox(key=key))


def nelder_mead(spec, start, opts=None):
    """Minimize with the reflect/expand/contract/shrink simplex walk.

    Deterministic: no randomness is involved. Converges when the simplex
    diameter (max-norm spread of the vertices) drops below
    ``opts.tolerance``, or stops with ``exhausted=True`` at
    ``opts.max_evals`` evaluations.
    """
    opts = opts or OptimOptions()
    start = np.asarray(start, dtype=float)
    if start.shape != (spec.dimension,):
        raise ValueError(f"start shape {start.shape} does not match dimension {spec.dimension}")

    widths = np.array([hi - lo for lo, hi in spec.seed_box()])
    history = []
    best_so_far = [np.inf]

    def evaluate(x):
        v = spec.value(x)
        best_so_far[0] = min(best_so_far[0], v)
        history.append(best_so_far[0])
        return v

    # Initial simplex: the start plus one step along each coordinate.
    n = spec.dimension
    simplex = np.tile(start, (n + 1, 1))
    for i in range(n):
        simplex[i + 1, i] += 0.1 * widths[i]
    values = np.array([evaluate(p) for p in simplex])

    while True:
        order = np.argsort(values, kind="stable")
        simplex = simplex[order]
        values = values[order]
        diameter = np.abs(simplex[1:] - simplex[0]).max()
        if diameter < opts.tolerance:
            exhausted = False
            break
        if len(history) >= opts.max_evals:
            exhausted = True
            break

        centroid = simplex[:-1].sum(axis=0) / n
        reflected = centroid + (centroid - simplex[-1])
        f_reflected = evaluate(reflected)
        if f_reflected < values[0]:
            expanded = centroid + 2.0 * (centroid - simplex[-1])
            f_expanded = evaluate(expanded)
            if f_expanded < f_reflected:
                simplex[-1], values[-1] = expanded, f_expanded
            else:
                simplex[-1], values[-1] = reflected, f_reflected
        elif f_reflected < values[-2]:
            simplex[-1], values[-1] = reflected, f_reflected
        else:
            if f_reflected < values[-1]:
                contracted = centroid + 0.5 * (reflected - centroid)
            else:
                contracted = centroid + 0.5 * (simplex[-1] - centroid)
            f_contracted = evaluate(contracted)
            if f_contracted < min(f_reflected, values[-1]):
                simplex[-1], values[-1] = contracted, f_contracted
            else:  # shrink toward the best vertex
                for i in range(1, n + 1):
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                    values[i] = evaluate(simplex[i])

    best = int(np.argmin(values))
    return OptimResult(
        point=spec.canonical(simplex[best]),
        value=float(values[best]),
        evaluations=len(history),
        exhausted=exhausted,
        history=np.array(history),
    )


def simulated_annealing(spec, start, opts=None, stream=1):
    """Minimize with Metropolis annealing under geometric cooling.

    Proposals are Gaussian steps whose scale shrinks proportionally to
    the temperature, so early epochs roam the seed box and late epochs
    refine locally. The best point ever visited is returned, so the
    result never exceeds the start value. Deterministic for a fixed
    ``opts.seed``.
    """
    opts = opts or OptimOptions()
    start = np.asarray(start, dtype=float)
    if start.shape != (spec.dimension,):
        raise ValueError(f"start shape {start.shape} does not match dimension {spec.dimension}")
    rng = _rng(opts.seed, stream)
    base_scale = np.array([0.5 * (hi - lo) for lo, hi in spec.seed_box()])

    current = spec.canonical(start)
    current_value = spec.value(current)
    best, best_value = current.copy(), current_value
    history = [best_value]

    temperature = opts.initial_temperature
    for _ in range(opts.epochs):
        scale = base_scale * (temperature / opts.initial_temperature)
        for _ in range(opts.steps_per_epoch):
            candidate = current + scale * rng.standard_normal(spec.dimension)
            candidate_value = spec.value(candidate)
            delta = candidate_value - current_value
            if delta <= 0 or rng.random() < np.exp(-delta / temperature):
                current = spec.canonical(candidate)
                current_value = candidate_value
            if candidate_value < best_value:
                best, best_value = spec.canonical(candidate), candidate_value
            history.append(best_value)
        temperature *= opts.cooling_factor

    return OptimResult(
        point=best,
        value=best_value,
        evaluations=len(history),
        exhausted=False,
        history=np.array(history),
    )


def restart_points(spec, count):
    """Deterministic spread of ``count`` start points over the seed box.

    When ``count`` is a perfect d-th power k^d the points form the
    regular k-per-axis grid of cell centres; otherwise they follow an
    additive Weyl recurrence (irrational rotations by sqrt-prime
    fractions), which is a standard low-discrepancy sequence.
    """
    box = spec.seed_box()
    lo = np.array([b[0] for b in box])
    width = np.array([b[1] - b[0] for b in box])
    d = spec.dimension

    k = round(count ** (1.0 / d))
    for candidate in (k - 1, k, k + 1):
        if candidate >= 1 and candidate**d == count:
            axes = [(np.arange(candidate) + 0.5) / candidate for _ in range(d)]
            return [lo + width * np.array(cell) for cell in itertools.product(*axes)]

    primes = []
    value = 2
    while len(primes) < d:
        if all(value % p for p in primes):
            primes.append(value)
        value += 1
    alpha = np.sqrt(np.array(primes, dtype=float)) % 1.0
    return [lo + width * ((0.5 + (m + 1) * alpha) % 1.0) for m in range(count)]


def twofold_search(spec, opts=None):
    """Run multi-start Nelder-Mead and simulated annealing; keep the best.

    The simplex route restarts from ``opts.restarts`` spread-out points
    (ties between restarts are broken by the lowest restart index). The
    annealing route starts from the centre of the seed box and its end
    point is polished by one local simplex run, so the two routes are
    compared basin-to-basin rather than penalizing the annealer's finite
    final temperature. ``agreement`` is the absolute difference of the
    two route values.
    """
    opts = opts or OptimOptions()

    best_amoeba = None
    for point in restart_points(spec, opts.restarts):
        result = nelder_mead(spec, point, opts)
        if best_amoeba is None or result.value < best_amoeba.value:
            best_amoeba = result

    box = spec.seed_box()
    centre = np.array([(lo + hi) / 2.0 for lo, hi in box])
    rough = simulated_annealing(spec, centre, opts)
    polished = nelder_mead(spec, rough.point, opts)
    annealing = OptimResult(
        point=polished.point,
        value=min(rough.value, polished.value),
        evaluations=rough.evaluations + polished.evaluations,
        exhausted=polished.exhausted,
        history=np.concatenate([rough.history, polished.history]),
    )

    if annealing.value < best_amoeba.value:
        winner_point, winner_value = annealing.point, annealing.value
    else:
        winner_point, winner_value = best_amoeba.point, best_amoeba.value
    return TwofoldResult(
        point=winner_point,
        value=winner_value,
        agreement=abs(best_amoeba.value - annealing.value),
        amoeba=best_amoeba,
        annealing=annealing,
    )
