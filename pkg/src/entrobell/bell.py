"""Nonlocality tests for two, three, and four qubits.

Operator constructors build the standard two-setting-per-observer Bell
operators: the four-term two-qubit form, the four-term three-qubit form,
and the family generated by the two-setting recursion (which reproduces
the two-qubit operator as its base case). Maxima over observer settings
come either from the closed form available for two qubits or from the
multi-start simplex + annealing search in :mod:`entrobell.optim`, and
the analytic envelopes bound those maxima as a function of the
participation ratio.

Conventions
-----------
Settings are ordered ``(a_1, b_1, a_2, b_2, ...)``: observer ``j``
measures spin along ``a_j`` or ``b_j``, and observer 1 acts on the
leftmost tensor factor. Each direction is a unit 3-vector,
``(sin(theta) cos(phi), sin(theta) sin(phi), cos(theta))`` when built
from angles. Classical (local-hidden-variable) bounds are 2, 2, and 4
for two, three, and four observers; the recursion step that grows an
odd-size operator carries factor 1 and the step that grows an even-size
operator carries factor 1/2, which is exactly the normalization that
preserves those bounds (verified by exhaustive corner enumeration in
the tests).
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from .correlations import bloch_decompose
from .errors import BadRatio, BadSettings, OptimizerFailure, UnsupportedSize
from .linalg import PAULIS, kron
from .optim import ObjectiveSpec, OptimOptions, nelder_mead, twofold_search
from .states import DensityMatrix

__all__ = [
    "BellResult",
    "MeasurementSettings",
    "CHSH_CLASSICAL_BOUND",
    "GHZ4_RECURSION_MAX",
    "MABK_CLASSICAL_BOUNDS",
    "MERMIN_CLASSICAL_BOUND",
    "TSIRELSON_BOUND",
    "VIOLATION_SLACK",
    "chsh_envelope",
    "chsh_max",
    "chsh_operator",
    "horodecki_m",
    "mabk_max",
    "mabk_operator",
    "mermin_envelope",
    "mermin_max",
    "mermin_operator",
    "werner_mabk_threshold",
]

TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)
CHSH_CLASSICAL_BOUND = 2.0
MERMIN_CLASSICAL_BOUND = 2.0
#: Deterministic-assignment bounds of the recursion-built operators,
#: confirmed by exhaustive enumeration over all sign choices.
MABK_CLASSICAL_BOUNDS = {2: 2.0, 3: 2.0, 4: 4.0}
#: Strict slack above the classical bound before a state counts as
#: violating; boundary states classify as local.
VIOLATION_SLACK = 1e-9
#: Largest four-party recursion value over settings on the GHZ state,
#: measured by a dense multi-start / evolutionary pre-build search;
#: the measured number agrees with 8*sqrt(2) to 1e-14.
GHZ4_RECURSION_MAX = 8.0 * math.sqrt(2.0)

UNIT_NORM_TOL = 1e-12
#: Cross-route gate for the two-qubit optimizer, where the closed form
#: pins the landscape; disagreement beyond this raises OptimizerFailure.
CHSH_AGREEMENT_TOL = 1e-3
#: Gate between the fast contraction objective and the dense-operator
#: re-evaluation of the winning settings; a larger gap means the two
#: independent arithmetic routes computed different quantities.
REEVALUATION_TOL = 1e-8

_SETTINGS_PER_PARTY = 2
_SUPPORTED_PARTIES = (2, 3, 4)

_DEFAULT_OPTIONS = {
    2: OptimOptions(restarts=32, max_evals=1000, tolerance=1e-8, seed=0),
    3: OptimOptions(restarts=32, max_evals=1000, tolerance=1e-8, seed=0),
    4: OptimOptions(restarts=32, max_evals=1500, tolerance=1e-8, seed=0),
}
_POLISH_EVALS = {2: 3000, 3: 3000, 4: 4000}

_TENSOR_SUBSCRIPTS = {
    2: "abcd,uca,vdb->uv",
    3: "abcdef,uda,veb,wfc->uvw",
    4: "abcdefgh,uea,vfb,wgc,xhd->uvwx",
}


@dataclass(frozen=True)
class MeasurementSettings:
    """Measurement directions, ordered ``(a_1, b_1, a_2, b_2, ...)``.

    Each entry is a unit 3-vector; observer ``j`` owns the pair at
    positions ``2j`` and ``2j+1``. Two to four observers are supported.
    """

    vectors: Tuple[np.ndarray, ...]

    def __post_init__(self):
        try:
            vectors = tuple(np.asarray(v, dtype=float).reshape(3) for v in self.vectors)
        except (TypeError, ValueError) as exc:
            raise BadSettings(f"settings must be 3-vectors: {exc}") from None
        count = len(vectors)
        if count != _SETTINGS_PER_PARTY * (count // _SETTINGS_PER_PARTY) or count // 2 not in _SUPPORTED_PARTIES:
            raise BadSettings(
                f"expected 2 vectors per observer for 2-4 observers, got {count} vectors"
            )
        for i, v in enumerate(vectors):
            norm = math.sqrt(float(v @ v))
            if abs(norm - 1.0) > UNIT_NORM_TOL:
                raise BadSettings(f"vector {i} has norm {norm!r}, expected 1 within {UNIT_NORM_TOL}")
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def from_angles(cls, angles):
        """Build unit vectors from ``(theta_1, phi_1, theta_2, phi_2, ...)``."""
        angles = np.asarray(angles, dtype=float).reshape(-1)
        if angles.size % 2 != 0:
            raise BadSettings(f"need an even number of angles, got {angles.size}")
        return cls(vectors=tuple(_vectors_from_angles(angles)))

    @property
    def n_parties(self):
        return len(self.vectors) // _SETTINGS_PER_PARTY

    def pair(self, party):
        """The two directions of observer ``party`` (zero-based)."""
        return self.vectors[2 * party], self.vectors[2 * party + 1]

    def as_array(self):
        """All vectors stacked into shape ``(2 * n_parties, 3)``."""
        return np.stack(self.vectors)


@dataclass(frozen=True)
class BellResult:
    """Outcome of a settings search: the maximum and where it is reached."""

    value: float
    settings: MeasurementSettings
    classical_bound: float

    @property
    def violated(self):
        """True when the value clears the classical bound by more than the slack."""
        return self.value > self.classical_bound + VIOLATION_SLACK


def _vectors_from_angles(angles):
    theta = angles[0::2]
    phi = angles[1::2]
    sin_theta = np.sin(theta)
    out = np.empty((theta.size, 3))
    out[:, 0] = sin_theta * np.cos(phi)
    out[:, 1] = sin_theta * np.sin(phi)
    out[:, 2] = np.cos(theta)
    return out


def _pauli_dot(vector):
    return vector[0] * PAULIS[0] + vector[1] * PAULIS[1] + vector[2] * PAULIS[2]


def _state_matrix(state, n_parties):
    """Dense matrix of ``state``, required to describe ``n_parties`` qubits."""
    if isinstance(state, DensityMatrix):
        if state.n_qubits != n_parties:
            raise UnsupportedSize(
                f"state has {state.n_qubits} qubits, expected {n_parties}"
            )
        return state.matrix
    matrix = np.asarray(state, dtype=complex)
    dim = 2**n_parties
    if matrix.shape != (dim, dim):
        raise UnsupportedSize(f"expected a {dim}x{dim} matrix, got {matrix.shape}")
    return matrix


def _correlation_tensor(matrix, n_parties):
    """Spin-correlation tensor: entry ``u..w`` is the expectation of the
    corresponding Pauli string (x, y, z on each site)."""
    reshaped = matrix.reshape((2,) * (2 * n_parties))
    operands = [PAULIS] * n_parties
    return np.einsum(_TENSOR_SUBSCRIPTS[n_parties], reshaped, *operands).real


def _require_parties(settings, n_parties, label):
    if not isinstance(settings, MeasurementSettings):
        settings = MeasurementSettings(vectors=tuple(settings))
    if settings.n_parties != n_parties:
        raise BadSettings(
            f"{label} needs {2 * n_parties} vectors, got {2 * settings.n_parties}"
        )
    return settings


# --- operator constructors -------------------------------------------------

def chsh_operator(settings):
    """Two-qubit operator ``A1 B1 + A1 B2 + A2 B1 - A2 B2`` (tensor products)."""
    settings = _require_parties(settings, 2, "chsh_operator")
    a1, b1 = settings.pair(0)
    a2, b2 = settings.pair(1)
    first_a, first_b = _pauli_dot(a1), _pauli_dot(b1)
    second_a, second_b = _pauli_dot(a2), _pauli_dot(b2)
    return (
        kron(first_a, second_a)
        + kron(first_a, second_b)
        + kron(first_b, second_a)
        - kron(first_b, second_b)
    )


def mermin_operator(settings):
    """Three-qubit operator with one all-``a`` term minus the three
    single-``a`` terms."""
    settings = _require_parties(settings, 3, "mermin_operator")
    a1, b1 = settings.pair(0)
    a2, b2 = settings.pair(1)
    a3, b3 = settings.pair(2)

    def triple(u, v, w):
        return kron(kron(_pauli_dot(u), _pauli_dot(v)), _pauli_dot(w))

    return (
        triple(a1, a2, a3)
        - triple(a1, b2, b3)
        - triple(b1, a2, b3)
        - triple(b1, b2, a3)
    )


def mabk_operator(n_parties, settings):
    """Recursion-built operator on 2-4 qubits.

    Growing from the last observer inward, each step maps the pair
    ``(B, B')`` (the operator and its all-settings-exchanged partner) to
    ``f * [(P + Q) (x) B + (P - Q) (x) B']`` where ``P``/``Q`` are the new
    observer's two spin operators and ``f`` is 1 for an odd-size operand
    and 1/2 for an even-size one. The base case equals
    :func:`chsh_operator`, and the deterministic-assignment bounds come
    out as 2, 2, 4.
    """
    if n_parties not in _SUPPORTED_PARTIES:
        raise UnsupportedSize(f"n_parties must be one of {_SUPPORTED_PARTIES}, got {n_parties}")
    settings = _require_parties(settings, n_parties, "mabk_operator")

    last_a, last_b = settings.pair(n_parties - 1)
    plain, swapped = _pauli_dot(last_a), _pauli_dot(last_b)
    size = 1
    for party in range(n_parties - 2, -1, -1):
        a_j, b_j = settings.pair(party)
        first = _pauli_dot(a_j)
        second = _pauli_dot(b_j)
        factor = 1.0 if size % 2 == 1 else 0.5
        total = first + second
        diff = first - second
        plain, swapped = (
            factor * (kron(total, plain) + kron(diff, swapped)),
            factor * (kron(total, swapped) - kron(diff, plain)),
        )
        size += 1
    return plain


@lru_cache(maxsize=None)
def _recursion_table(n_parties):
    """Nonzero terms of the recursion operator as (flat indices, signs).

    Index bit ``j`` (most significant = observer 1) selects ``b_j`` over
    ``a_j``. Runs the same recursion as :func:`mabk_operator` on symbolic
    strings; every surviving coefficient is exactly +-1.
    """
    plain = {(0,): 1.0}
    swapped = {(1,): 1.0}
    size = 1
    while size < n_parties:
        factor = 1.0 if size % 2 == 1 else 0.5
        next_plain = {}
        next_swapped = {}
        for bits in set(plain) | set(swapped):
            coeff = plain.get(bits, 0.0)
            coeff_swapped = swapped.get(bits, 0.0)
            next_plain[(0,) + bits] = factor * (coeff + coeff_swapped)
            next_plain[(1,) + bits] = factor * (coeff - coeff_swapped)
            next_swapped[(0,) + bits] = factor * (coeff_swapped - coeff)
            next_swapped[(1,) + bits] = factor * (coeff_swapped + coeff)
        plain = {k: v for k, v in next_plain.items() if v != 0.0}
        swapped = {k: v for k, v in next_swapped.items() if v != 0.0}
        size += 1
    flat = []
    signs = []
    for bits, coeff in sorted(plain.items()):
        index = 0
        for bit in bits:
            index = 2 * index + bit
        flat.append(index)
        signs.append(coeff)
    return np.array(flat), np.array(signs)


#: Terms of the three-qubit operator of :func:`mermin_operator` in the
#: same flat-index encoding: (a1 a2 a3) minus the three one-``a`` terms.
_MERMIN_TABLE = (np.array([0, 3, 5, 6]), np.array([1.0, -1.0, -1.0, -1.0]))
_CHSH_TABLE = (np.array([0, 1, 2, 3]), np.array([1.0, 1.0, 1.0, -1.0]))


# --- settings searches -----------------------------------------------------

def _make_objective(tensor, n_parties, table):
    """Fast evaluator: settings angles -> operator expectation.

    Contracts the precomputed correlation tensor with the six/eight/
    twelve direction vectors through a chain of small matrix products;
    equals the dense ``trace(rho @ operator)`` route to float precision.
    """
    flat_index, signs = table
    sin, cos = np.sin, np.cos

    if n_parties == 2:
        def value(angles):
            theta = angles[0::2]
            phi = angles[1::2]
            sin_theta = sin(theta)
            vecs = np.empty((4, 3))
            vecs[:, 0] = sin_theta * cos(phi)
            vecs[:, 1] = sin_theta * sin(phi)
            vecs[:, 2] = cos(theta)
            grid = vecs[0:2] @ tensor @ vecs[2:4].T
            return float(grid.reshape(4)[flat_index] @ signs)

        return value

    if n_parties == 3:
        flattened = np.ascontiguousarray(tensor.reshape(3, 9))

        def value(angles):
            theta = angles[0::2]
            phi = angles[1::2]
            sin_theta = sin(theta)
            vecs = np.empty((6, 3))
            vecs[:, 0] = sin_theta * cos(phi)
            vecs[:, 1] = sin_theta * sin(phi)
            vecs[:, 2] = cos(theta)
            partial = (vecs[0:2] @ flattened).reshape(2, 3, 3)
            third = vecs[4:6].T
            low = (vecs[2:4] @ partial[0]) @ third
            high = (vecs[2:4] @ partial[1]) @ third
            grid = np.concatenate([low.reshape(4), high.reshape(4)])
            return float(grid[flat_index] @ signs)

        return value

    flattened = np.ascontiguousarray(tensor.reshape(3, 27))

    def value(angles):
        theta = angles[0::2]
        phi = angles[1::2]
        sin_theta = sin(theta)
        vecs = np.empty((8, 3))
        vecs[:, 0] = sin_theta * cos(phi)
        vecs[:, 1] = sin_theta * sin(phi)
        vecs[:, 2] = cos(theta)
        partial = (vecs[0:2] @ flattened).reshape(2, 3, 9)
        second = vecs[2:4]
        third = vecs[4:6]
        fourth = vecs[6:8].T
        left = (second @ partial[0]).reshape(2, 3, 3)
        right = (second @ partial[1]).reshape(2, 3, 3)
        grid = np.concatenate([
            ((third @ left[0]) @ fourth).reshape(4),
            ((third @ left[1]) @ fourth).reshape(4),
            ((third @ right[0]) @ fourth).reshape(4),
            ((third @ right[1]) @ fourth).reshape(4),
        ])
        return float(grid[flat_index] @ signs)

    return value


def _maximize_settings(tensor, n_parties, table, options):
    """Hybrid search for the settings maximizing the expectation.

    Runs the grid-seeded multi-start simplex plus one annealing pass,
    then polishes the winner with a tight simplex run. Returns the
    maximizing angles, the achieved value, and the cross-route spread.
    """
    objective = _make_objective(tensor, n_parties, table)
    dimension = 2 * _SETTINGS_PER_PARTY * n_parties
    spec = ObjectiveSpec(
        dimension=dimension,
        evaluate=lambda angles: -objective(angles),
        periodic=(True,) * dimension,
    )
    options = options or _DEFAULT_OPTIONS[n_parties]
    rough = twofold_search(spec, options)
    polish_options = OptimOptions(
        restarts=1,
        max_evals=_POLISH_EVALS[n_parties],
        tolerance=1e-10,
        seed=options.seed,
    )
    polished = nelder_mead(spec, rough.point, polish_options)
    winner = polished if polished.value <= rough.value else rough
    return -winner.value, winner.point, rough.agreement


def _searched_result(state, n_parties, table, build_operator, classical_bound, options):
    """Shared tail of the optimizer-driven maxima.

    The winning settings are re-evaluated through the dense operator
    constructor; the reported value is that dense trace, so re-running
    the constructor on the returned settings reproduces it exactly. A
    gap beyond ``REEVALUATION_TOL`` between the contraction route and
    the dense route means the search arithmetic is inconsistent.
    """
    matrix = _state_matrix(state, n_parties)
    tensor = _correlation_tensor(matrix, n_parties)
    value, angles, _ = _maximize_settings(tensor, n_parties, table, options)
    if not math.isfinite(value):
        raise OptimizerFailure(f"settings search returned {value!r}")
    settings = MeasurementSettings.from_angles(angles)
    dense_value = float(np.einsum("ij,ji->", matrix, build_operator(settings)).real)
    if abs(dense_value - value) > REEVALUATION_TOL:
        raise OptimizerFailure(
            f"contraction route gives {value!r} but the dense operator gives "
            f"{dense_value!r}; routes disagree beyond {REEVALUATION_TOL}"
        )
    return BellResult(value=dense_value, settings=settings, classical_bound=classical_bound)


def horodecki_m(state):
    """Sum of the two largest eigenvalues of ``T^t T`` for a two-qubit state.

    ``T`` is the 3x3 spin-correlation block; the settings maximum of the
    two-qubit operator equals ``2 sqrt(M)`` and the state admits a
    violation exactly when ``M > 1``.
    """
    tensor = bloch_decompose(state).T
    singular = np.linalg.svd(tensor, compute_uv=False)
    return float(singular[0] ** 2 + singular[1] ** 2)


def _closed_form_settings(tensor):
    """Settings achieving ``2 sqrt(M)``, from the SVD of the correlation block.

    Observer 1 takes the two top left singular directions; observer 2
    mixes the two top right singular directions with the angle set by
    the singular-value ratio.
    """
    left, singular, right = np.linalg.svd(tensor)
    mix = math.atan2(singular[1], singular[0])
    cos_mix, sin_mix = math.cos(mix), math.sin(mix)
    return MeasurementSettings(vectors=(
        left[:, 0],
        left[:, 1],
        cos_mix * right[0] + sin_mix * right[1],
        cos_mix * right[0] - sin_mix * right[1],
    ))


def chsh_max(state, method="closed_form", options=None):
    """Maximum two-qubit operator expectation over all settings.

    ``method="closed_form"`` evaluates ``2 sqrt(M)`` with the settings
    realizing it; ``method="optimize"`` runs the eight-angle hybrid
    search. The two agree within 1e-3 (the optimizer route raises
    :class:`OptimizerFailure` when its two internal routes drift past
    that same gate).
    """
    matrix = _state_matrix(state, 2)
    if method == "closed_form":
        tensor = _correlation_tensor(matrix, 2)
        singular = np.linalg.svd(tensor, compute_uv=False)
        value = 2.0 * math.sqrt(singular[0] ** 2 + singular[1] ** 2)
        settings = _closed_form_settings(tensor)
        return BellResult(value=value, settings=settings, classical_bound=CHSH_CLASSICAL_BOUND)
    if method == "optimize":
        tensor = _correlation_tensor(matrix, 2)
        value, angles, agreement = _maximize_settings(tensor, 2, _CHSH_TABLE, options)
        if not math.isfinite(value):
            raise OptimizerFailure(f"settings search returned {value!r}")
        if agreement > CHSH_AGREEMENT_TOL:
            raise OptimizerFailure(
                f"search routes disagree by {agreement!r} (> {CHSH_AGREEMENT_TOL})"
            )
        settings = MeasurementSettings.from_angles(angles)
        dense_value = float(np.einsum("ij,ji->", matrix, chsh_operator(settings)).real)
        if abs(dense_value - value) > REEVALUATION_TOL:
            raise OptimizerFailure(
                f"contraction route gives {value!r} but the dense operator gives "
                f"{dense_value!r}; routes disagree beyond {REEVALUATION_TOL}"
            )
        return BellResult(value=dense_value, settings=settings, classical_bound=CHSH_CLASSICAL_BOUND)
    raise ValueError(f"method must be 'closed_form' or 'optimize', got {method!r}")


def mermin_max(state, options=None):
    """Maximum three-qubit operator expectation over the twelve angles."""
    return _searched_result(
        state, 3, _MERMIN_TABLE, mermin_operator, MERMIN_CLASSICAL_BOUND, options
    )


def mabk_max(state, n_parties, options=None):
    """Maximum of the recursion-built operator over ``4 * n_parties`` angles."""
    if n_parties not in _SUPPORTED_PARTIES:
        raise UnsupportedSize(f"n_parties must be one of {_SUPPORTED_PARTIES}, got {n_parties}")
    return _searched_result(
        state,
        n_parties,
        _recursion_table(n_parties),
        lambda settings: mabk_operator(n_parties, settings),
        MABK_CLASSICAL_BOUNDS[n_parties],
        options,
    )


# --- participation-ratio envelopes ----------------------------------------

def chsh_envelope(ratio):
    """Largest two-qubit maximum attainable at participation ratio ``ratio``.

    Piecewise in the ratio: ``sqrt(8 / R)`` up to ``R = 2`` and
    ``4 sqrt((4 - R) / (4 R))`` beyond, continuous at the joint; 2*sqrt(2)
    at a pure state, the classical bound 2 at ``R = 2``, and 0 at the
    maximally mixed end ``R = 4``.
    """
    ratio = float(ratio)
    if not 1.0 <= ratio <= 4.0:
        raise BadRatio(f"two-qubit participation ratio must lie in [1, 4], got {ratio!r}")
    if ratio <= 2.0:
        return math.sqrt(8.0 / ratio)
    return 4.0 * math.sqrt((4.0 - ratio) / (4.0 * ratio))


def mermin_envelope(ratio):
    """Largest three-qubit maximum attainable at participation ratio ``ratio``.

    Equals ``4 sqrt((8 - R) / (7 R))``: 4 at a pure state, the classical
    bound 2 exactly at ``R = 32/11``, and 0 at the maximally mixed end
    ``R = 8``.
    """
    ratio = float(ratio)
    if not 1.0 <= ratio <= 8.0:
        raise BadRatio(f"three-qubit participation ratio must lie in [1, 8], got {ratio!r}")
    return 4.0 * math.sqrt((8.0 - ratio) / (7.0 * ratio))


def werner_mabk_threshold(n_parties):
    """Mixing weight above which the GHZ/identity mixture turns nonlocal.

    For the n-party mixture ``p * GHZ + (1 - p) * identity / 2^n`` the
    identity contributes nothing to any recursion-operator expectation,
    so the threshold is the classical bound divided by the pure-GHZ
    maximum. At four parties that is ``4 / GHZ4_RECURSION_MAX``; each
    added observer multiplies the attainable GHZ maximum by sqrt(2)
    while the classical bound doubles only per added pair (both
    established on the 2-, 3-, and 4-party operators), so the threshold
    halves with each additional pair of observers and tends to zero.
    """
    if not isinstance(n_parties, (int, np.integer)) or isinstance(n_parties, bool):
        raise UnsupportedSize(f"n_parties must be an even integer >= 4, got {n_parties!r}")
    if n_parties < 4 or n_parties % 2 != 0:
        raise UnsupportedSize(f"n_parties must be an even integer >= 4, got {n_parties}")
    base = MABK_CLASSICAL_BOUNDS[4] / GHZ4_RECURSION_MAX
    return base * 2.0 ** (-(n_parties - 4) / 2.0)
