"""Density-matrix construction and random-state sampling.

Random mixed states are drawn from the product measure "Haar on the
eigenvectors x Lebesgue-uniform on the eigenvalue simplex".  Fixed-purity
sampling restricts the simplex factor to the sphere of constant
participation ratio R = 1/Tr(rho^2); for two qubits this uses the regular
tetrahedron embedding of the eigenvalue simplex, for three and four qubits
the same construction carried out in the Sum(lambda)=1 hyperplane.

All samplers take an explicit ``numpy.random.Generator``; nothing in this
module touches global random state.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadRatio,
    BadWeight,
    NotHermitian,
    NotDensityMatrix,
    OutsideTetrahedron,
    SamplerStalled,
    StateFormatError,
    UnsupportedSize,
)
from .linalg import hermiticity_defect

TRACE_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-12
MAX_REJECTION_ATTEMPTS = 10**6

# ---------------------------------------------------------------------------
# density matrix container
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityMatrix:
    """An n-qubit state: a 2^n x 2^n Hermitian, PSD, unit-trace matrix.

    Constructors in this module produce valid instances by construction;
    use :meth:`from_matrix` (or :meth:`validate`) for untrusted input.
    """

    n_qubits: int
    matrix: np.ndarray

    @property
    def dim(self):
        return 2**self.n_qubits

    @classmethod
    def from_matrix(cls, matrix, tol=TRACE_TOL):
        matrix = np.asarray(matrix, dtype=complex)
        dim = matrix.shape[0]
        n = int(round(np.log2(dim))) if dim > 0 else 0
        if matrix.shape != (dim, dim) or 2**n != dim or not 2 <= n <= 4:
            raise UnsupportedSize(f"expected a 4/8/16-dim square matrix, got {matrix.shape}")
        state = cls(n_qubits=n, matrix=matrix)
        state.validate(tol=tol)
        return state

    def validate(self, tol=TRACE_TOL):
        """Check Hermiticity, unit trace, and positivity at tolerance."""
        defect = hermiticity_defect(self.matrix)
        if defect > tol:
            raise NotHermitian(f"hermiticity defect {defect:.3e}")
        trace = self.matrix.trace()
        if abs(trace - 1.0) > max(tol, 1e-12):
            raise NotDensityMatrix(f"trace {trace} is not 1")
        smallest = float(np.linalg.eigvalsh(self.matrix)[0])
        if smallest < EIGENVALUE_FLOOR:
            raise NotDensityMatrix(f"negative eigenvalue {smallest:.3e}")
        return self


def participation_ratio(state):
    """R = 1/Tr(rho^2); ranges over [1, 2^n]."""
    m = state.matrix if isinstance(state, DensityMatrix) else np.asarray(state)
    purity = float(np.vdot(m, m).real)  # Tr(rho rho†) = Tr(rho^2) for Hermitian rho
    return 1.0 / purity


# ---------------------------------------------------------------------------
# named states
# ---------------------------------------------------------------------------

# Bell basis, columns ordered (Phi+, Phi-, Psi+, Psi-).
BELL_VECTORS = np.array(
    [
        [1, 1, 0, 0],
        [0, 0, 1, 1],
        [0, 0, 1, -1],
        [1, -1, 0, 0],
    ],
    dtype=complex,
) / np.sqrt(2.0)


def ghz(n_qubits):
    """GHZ state (|0...0> + |1...1>)/sqrt(2) as a density matrix."""
    if n_qubits not in (2, 3, 4):
        raise UnsupportedSize(f"n_qubits={n_qubits} not in (2, 3, 4)")
    dim = 2**n_qubits
    vec = np.zeros(dim, dtype=complex)
    vec[0] = vec[-1] = 1.0 / np.sqrt(2.0)
    return DensityMatrix(n_qubits, np.outer(vec, vec.conj()))


def maximally_mixed(n_qubits):
    """The state I/2^n."""
    if n_qubits not in (2, 3, 4):
        raise UnsupportedSize(f"n_qubits={n_qubits} not in (2, 3, 4)")
    dim = 2**n_qubits
    return DensityMatrix(n_qubits, np.eye(dim, dtype=complex) / dim)


def werner2(p):
    """Two-qubit mixture p |Phi+><Phi+| + (1-p) I/4."""
    if not 0.0 <= p <= 1.0:
        raise BadWeight(f"mixing weight p={p} outside [0, 1]")
    phi = BELL_VECTORS[:, 0]
    return DensityMatrix(2, p * np.outer(phi, phi.conj()) + (1.0 - p) * np.eye(4) / 4.0)


def werner3(x):
    """Three-qubit mixture x |GHZ><GHZ| + (1-x) I/8."""
    if not 0.0 <= x <= 1.0:
        raise BadWeight(f"mixing weight x={x} outside [0, 1]")
    g = ghz(3).matrix
    return DensityMatrix(3, x * g + (1.0 - x) * np.eye(8) / 8.0)


def werner_ghz(n_qubits, p):
    """GHZ-based Werner-type mixture p |GHZ_n><GHZ_n| + (1-p) I/2^n."""
    if not 0.0 <= p <= 1.0:
        raise BadWeight(f"mixing weight p={p} outside [0, 1]")
    dim = 2**n_qubits
    return DensityMatrix(n_qubits, p * ghz(n_qubits).matrix + (1.0 - p) * np.eye(dim) / dim)


def bell_diagonal(weights):
    """State diagonal in the Bell basis with the given four weights.

    Weight order is (Phi+, Phi-, Psi+, Psi-).
    """
    w = np.asarray(weights, dtype=float)
    if w.shape != (4,):
        raise BadWeight(f"expected 4 weights, got shape {w.shape}")
    if w.min() < -TRACE_TOL or abs(w.sum() - 1.0) > 1e-12:
        raise BadWeight(f"weights {w} must be nonnegative and sum to 1")
    w = np.clip(w, 0.0, None)
    rho = (BELL_VECTORS * w) @ BELL_VECTORS.conj().T
    return DensityMatrix(2, rho)


# ---------------------------------------------------------------------------
# random sampling: Haar x uniform-simplex measure
# ---------------------------------------------------------------------------


def substream(seed, index):
    """Counter-based RNG stream for record ``index`` of a run seeded ``seed``.

    Streams for distinct (seed, index) pairs are independent, and the
    stream depends only on the pair -- not on how many other streams were
    created -- so parallel surveys are reproducible for any worker count.
    """
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(index)])
    return np.random.Generator(np.random.Philox(key=key))


def haar_unitary(dim, rng):
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))  # fix the phase ambiguity of QR


def random_simplex_point(dim, rng):
    """Lebesgue-uniform point on the (dim-1)-simplex via sorted spacings."""
    cuts = np.sort(rng.random(dim - 1))
    return np.diff(cuts, prepend=0.0, append=1.0)


def random_density(n_qubits, rng):
    """Random state: uniform-simplex spectrum conjugated by a Haar unitary."""
    if n_qubits not in (2, 3, 4):
        raise UnsupportedSize(f"n_qubits={n_qubits} not in (2, 3, 4)")
    dim = 2**n_qubits
    spectrum = random_simplex_point(dim, rng)
    u = haar_unitary(dim, rng)
    return DensityMatrix(n_qubits, (u * spectrum) @ u.conj().T)


# ---------------------------------------------------------------------------
# fixed participation ratio: tetrahedron geometry (two qubits)
# ---------------------------------------------------------------------------


class TetrahedronGeometry:
    """Regular tetrahedron whose points map affinely to 4-point spectra.

    A spectrum lambda corresponds to the point r with
    ``lambda_i = 2 (r . vertex_i) + 1/4``; spheres about the origin are
    surfaces of constant purity, ``|r|^2 = Sum(lambda^2)/2 - 1/8``.
    """

    vertices = np.array(
        [
            [-1.0 / (2.0 * np.sqrt(3.0)), -0.5, -0.25 * np.sqrt(2.0 / 3.0)],
            [1.0 / np.sqrt(3.0), 0.0, -0.25 * np.sqrt(2.0 / 3.0)],
            [-1.0 / (2.0 * np.sqrt(3.0)), 0.5, -0.25 * np.sqrt(2.0 / 3.0)],
            [0.0, 0.0, 0.75 * np.sqrt(2.0 / 3.0)],
        ]
    )
    # insphere (touches faces), midsphere (touches edges), circumsphere radii
    face_radius = 0.25 * np.sqrt(2.0 / 3.0)
    edge_radius = np.sqrt(2.0) / 4.0
    vertex_radius = np.sqrt(6.0) / 4.0


TETRAHEDRON = TetrahedronGeometry()


def simplex_to_eigenvalues(point):
    """Map a point of the eigenvalue tetrahedron to its 4-point spectrum.

    Raises OutsideTetrahedron if any implied weight is below -1e-12.
    """
    point = np.asarray(point, dtype=float)
    if point.shape != (3,):
        raise OutsideTetrahedron(f"expected a 3-vector, got shape {point.shape}")
    lam = 2.0 * (TETRAHEDRON.vertices @ point) + 0.25
    if lam.min() < EIGENVALUE_FLOOR:
        raise OutsideTetrahedron(f"point {point} maps to weights {lam}")
    return np.clip(lam, 0.0, None)


def ratio_to_radius(ratio):
    """Tetrahedron radius of the constant-R sphere: sqrt(1/(2R) - 1/8)."""
    if not 1.0 <= ratio <= 4.0:
        raise BadRatio(f"ratio {ratio} outside [1, 4]")
    return np.sqrt(max(0.0, 1.0 / (2.0 * ratio) - 0.125))


def tetrahedron_region(ratio):
    """Sampling region for a two-qubit ratio: 1, 2 or 3.

    Region 1 (R in [3,4]): sphere inside the insphere, no rejection.
    Region 2 (R in [2,3)): sphere crosses the faces, rejection needed.
    Region 3 (R in [1,2)): sphere beyond the edges; only caps around the
    vertices remain inside.
    """
    if not 1.0 <= ratio <= 4.0:
        raise BadRatio(f"ratio {ratio} outside [1, 4]")
    if ratio >= 3.0:
        return 1
    if ratio >= 2.0:
        return 2
    return 3


def region3_polar_cut(radius):
    """cos(theta_c) bounding the vertex cap in region 3.

    Largest root of 3 r^2 w^2 - sqrt(3/2) r w + 3/8 - 2 r^2 = 0; at this
    polar angle the constant-purity sphere crosses the tetrahedron edges
    adjoining the top vertex, so the sphere-inside-tetrahedron cap around
    that vertex lies entirely in cos(theta) >= w.
    """
    a = 3.0 * radius**2
    b = -np.sqrt(1.5) * radius
    c = 0.375 - 2.0 * radius**2
    disc = b * b - 4.0 * a * c
    w = (-b + np.sqrt(max(0.0, disc))) / (2.0 * a)
    return min(w, 1.0)


def _spectrum_fixed_ratio_2(ratio, rng):
    radius = ratio_to_radius(ratio)
    region = tetrahedron_region(ratio)
    if radius == 0.0:
        return np.full(4, 0.25)
    for _ in range(MAX_REJECTION_ATTEMPTS):
        if region == 3:
            w_cut = region3_polar_cut(radius)
            w = w_cut + (1.0 - w_cut) * rng.random()
        else:
            w = 2.0 * rng.random() - 1.0
        phi = 2.0 * np.pi * rng.random()
        s = np.sqrt(max(0.0, 1.0 - w * w))
        point = radius * np.array([s * np.cos(phi), s * np.sin(phi), w])
        lam = 2.0 * (TETRAHEDRON.vertices @ point) + 0.25
        if lam.min() >= EIGENVALUE_FLOOR:
            return np.clip(lam, 0.0, None)
    raise SamplerStalled(f"no admissible spectrum after {MAX_REJECTION_ATTEMPTS} draws (R={ratio})")


# ---------------------------------------------------------------------------
# fixed participation ratio: hyperplane construction (three, four qubits)
# ---------------------------------------------------------------------------


def _zero_sum_basis(dim):
    """Orthonormal rows spanning {x in R^dim : Sum(x) = 0} (Helmert basis)."""
    basis = np.zeros((dim - 1, dim))
    for k in range(1, dim):
        basis[k - 1, :k] = 1.0
        basis[k - 1, k] = -float(k)
        basis[k - 1] /= np.sqrt(k * (k + 1.0))
    return basis


_ZERO_SUM_BASIS = {d: _zero_sum_basis(d) for d in (3, 7, 8, 15, 16)}


def _uniform_zero_sum_direction(dim, rng):
    g = rng.standard_normal(dim - 1)
    x = g @ _ZERO_SUM_BASIS[dim]
    return x / np.linalg.norm(x)


def _spectrum_fixed_ratio_rejection(dim, ratio, rng, max_attempts=MAX_REJECTION_ATTEMPTS):
    """Plain rejection reference: uniform directions, redraw outside the simplex.

    Exact but exponentially slow in ``dim`` at small R; kept as the
    cross-validation oracle for :func:`_spectrum_fixed_ratio_general`.
    """
    radius = np.sqrt(max(0.0, 1.0 / ratio - 1.0 / dim))
    center = np.full(dim, 1.0 / dim)
    if radius == 0.0:
        return center.copy()
    for _ in range(max_attempts):
        x = _uniform_zero_sum_direction(dim, rng)
        lam = center + radius * x
        if lam.min() >= EIGENVALUE_FLOOR:
            return np.clip(lam, 0.0, None)
    raise SamplerStalled(f"no admissible spectrum after {max_attempts} draws (R={ratio})")


def _coordinate_intervals(m, s, q):
    """Admissible values for one coordinate of a nonnegative m-point
    spectrum with sum ``s`` and sum of squares ``q``.

    A value lam is admissible iff the remaining m-1 coordinates can still
    form a nonnegative spectrum with sum s-lam and sum of squares
    q-lam^2, i.e. (s-lam)^2/(m-1) <= q-lam^2 <= (s-lam)^2.  The left
    inequality is |t| <= 1 in polar terms (always attainable); the right
    one carves out the open gap between (s -+ sqrt(2q-s^2))/2 whenever
    2q > s^2: either this coordinate is the dominant one or it stays
    small enough to leave room for a later spike.
    """
    lo, hi = 0.0, s
    if 2.0 * q > s * s:
        half = np.sqrt(2.0 * q - s * s)
        g_lo = 0.5 * (s - half)
        g_hi = 0.5 * (s + half)
        return [(lo, g_lo), (g_hi, hi)]
    return [(lo, hi)]


# --- feasible-fraction tables -----------------------------------------------
#
# For the uniform law on the sphere {sum lam = s, sum lam^2 = q} of an
# m-coordinate spectrum, one coordinate has polar marginal
# ~ (1-t^2)^((m-4)/2), and conditioned on it the rest is uniform on the
# reduced sphere.  The chance that a uniform point on the sphere is
# nonnegative therefore obeys a one-dimensional recursion in the scale
# invariant v = q/s^2 (v ranges over [1/m, 1]):
#
#   G_m(v) = E_t[ 1{lam(t) admissible} * G_{m-1}(v'(t)) ],
#   v'(t)  = (v - lam^2) / (1 - lam)^2   at s = 1,
#
# with G_2 = 1 on [1/2, 1] (both points of the final 0-sphere are
# nonnegative there) and G_m = 1 below the insphere value v = 1/(m-1).
# Sampling the exact conditional density (1-t^2)^((m-4)/2) * G_{m-1}(v')
# level by level draws the uniform law on the sphere-simplex intersection
# directly -- no rejection, no dead ends -- which is what makes fixed-R
# sampling tractable at dimensions 8 and 16 where plain rejection stalls.
# The tables are deterministic, so reproducibility rests on the caller's
# generator alone.

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(96)
_TABLE_V_POINTS = 1200
_LOG_G_FLOOR = -800.0
_feasible_fraction_interpolants = {}


def _log_beta_norm(a):
    """log of Z(a) = Integral_{-1}^{1} (1-t^2)^(a-1) dt."""
    from scipy.special import gammaln

    return 0.5 * np.log(np.pi) + gammaln(a) - gammaln(a + 0.5)


def _island_bounds(m, v):
    """Admissible t-intervals at s=1 for scale invariant(s) ``v`` (array).

    Returns (t0_lo, t0_hi, t1_lo, t1_hi) arrays; the second island
    collapses to an empty interval (lo=hi) when 2v <= 1.
    """
    v = np.asarray(v, dtype=float)
    mu = 1.0 / m
    scale = np.sqrt((m - 1.0) / m) * np.sqrt(np.maximum(v - mu, 0.0))
    scale = np.maximum(scale, 1e-300)
    gapped = 2.0 * v > 1.0
    half = np.sqrt(np.maximum(2.0 * v - 1.0, 0.0))
    g_lo = 0.5 * (1.0 - half)
    g_hi = 0.5 * (1.0 + half)
    lo0 = np.maximum(-1.0, (0.0 - mu) / scale)
    hi_full = np.minimum(1.0, (1.0 - mu) / scale)
    hi0 = np.where(gapped, np.minimum(hi_full, (g_lo - mu) / scale), hi_full)
    lo1 = np.where(gapped, np.maximum(lo0, (g_hi - mu) / scale), hi_full)
    hi1 = np.where(gapped, hi_full, hi_full)
    hi0 = np.clip(np.maximum(hi0, lo0), -1.0, 1.0)
    lo1 = np.clip(lo1, -1.0, 1.0)
    hi1 = np.clip(np.maximum(hi1, lo1), -1.0, 1.0)
    return lo0, hi0, lo1, hi1


def _eval_log_g(m, v):
    """log G_m on array ``v``, from the cached tables (m >= 2)."""
    v = np.asarray(v, dtype=float)
    if m == 2:
        ok = (v >= 0.5 - 1e-12) & (v <= 1.0 + 1e-12)
        return np.where(ok, 0.0, -np.inf)
    interp = _feasible_fraction_interpolants[m]
    out = np.full(v.shape, -np.inf)
    lo_v = 1.0 / (m - 1.0)
    hi_v = interp.x[-1]
    out[v <= lo_v] = 0.0
    mid = (v > lo_v) & (v <= hi_v)
    if np.any(mid):
        out[mid] = np.minimum(interp(v[mid]), 0.0)
    return out


def _build_feasible_fraction_table(m):
    """Tabulate log G_m by quadrature of the level recursion."""
    from scipy.interpolate import PchipInterpolator

    lo_v = 1.0 / (m - 1.0)
    n_main = _TABLE_V_POINTS
    main = lo_v + (1.0 - lo_v) * (np.arange(0, n_main) / n_main)
    near_one = 1.0 - np.geomspace(1e-9, (1.0 - lo_v) / n_main, 60)
    v_nodes = np.unique(np.concatenate([main, near_one]))
    lo0, hi0, lo1, hi1 = _island_bounds(m, v_nodes)
    if m == 3:
        # density ~ (1-t^2)^(-1/2): island masses are exact arc lengths
        arcs = (np.arcsin(hi0) - np.arcsin(lo0)) + (np.arcsin(hi1) - np.arcsin(lo1))
        fraction = np.clip(arcs / np.pi, 0.0, 1.0)
        with np.errstate(divide="ignore"):
            log_g = np.where(fraction > 0.0, np.log(np.maximum(fraction, 1e-320)), _LOG_G_FLOOR)
        return PchipInterpolator(v_nodes, np.maximum(log_g, _LOG_G_FLOOR), extrapolate=False)
    mu = 1.0 / m
    gamma_rho = np.sqrt((m - 1.0) / m) * np.sqrt(np.maximum(v_nodes - mu, 0.0))
    a = 0.5 * (m - 2.0)
    log_z = _log_beta_norm(a)
    total = np.zeros_like(v_nodes)
    for t_lo, t_hi in ((lo0, hi0), (lo1, hi1)):
        width = 0.5 * (t_hi - t_lo)
        centre = 0.5 * (t_hi + t_lo)
        t = centre[:, None] + width[:, None] * _GAUSS_NODES[None, :]
        lam = mu + gamma_rho[:, None] * t
        lam = np.clip(lam, 0.0, 1.0 - 1e-300)
        v_next = (v_nodes[:, None] - lam * lam) / (1.0 - lam) ** 2
        v_next = np.clip(v_next, 1.0 / (m - 1.0), 1.0)
        integrand = (np.maximum(1.0 - t * t, 0.0)) ** (a - 1.0) * np.exp(
            _eval_log_g(m - 1, v_next)
        )
        total += width * (integrand @ _GAUSS_WEIGHTS)
    with np.errstate(divide="ignore"):
        log_g = np.where(total > 0.0, np.log(np.maximum(total, 1e-320)) - log_z, _LOG_G_FLOOR)
    log_g = np.minimum(log_g, 0.0)
    log_g = np.maximum(log_g, _LOG_G_FLOOR)
    return PchipInterpolator(v_nodes, log_g, extrapolate=False)


def _ensure_feasible_fraction_tables(max_m):
    for m in range(3, max_m + 1):
        if m not in _feasible_fraction_interpolants:
            _feasible_fraction_interpolants[m] = _build_feasible_fraction_table(m)


_LEVEL_GRID = 256


def _sample_level(m, s, q, rng):
    """Draw one coordinate of the uniform sphere-simplex law at state
    (m, s, q), by inverse CDF of the exact conditional on its islands."""
    mu = s / m
    spread_sq = q - s * s / m
    if spread_sq <= 1e-30:
        return mu
    scale = np.sqrt((m - 1.0) / m) * np.sqrt(spread_sq)
    a = 0.5 * (m - 2.0)
    v = q / (s * s)
    if m == 3:
        # density ~ (1-t^2)^(-1/2): uniform in the angle phi = arcsin(t)
        phis = []
        for lo, hi in _coordinate_intervals(m, s, q):
            t_lo = max(-1.0, (lo - mu) / scale)
            t_hi = min(1.0, (hi - mu) / scale)
            if t_hi > t_lo:
                phis.append((np.arcsin(t_lo), np.arcsin(t_hi)))
        if not phis:
            return mu
        lengths = np.array([p1 - p0 for p0, p1 in phis])
        pick = rng.random() * lengths.sum()
        for (p0, p1), ell in zip(phis, lengths):
            if pick <= ell or (p0, p1) == phis[-1]:
                return mu + scale * np.sin(p0 + min(pick, ell))
            pick -= ell
    lo0, hi0, lo1, hi1 = _island_bounds(m, np.array([v]))
    islands = [(lo0[0], hi0[0]), (lo1[0], hi1[0])]
    grids, cdfs, masses = [], [], []
    for t_lo, t_hi in islands:
        if t_hi - t_lo <= 1e-15:
            grids.append(None)
            cdfs.append(None)
            masses.append(0.0)
            continue
        t = np.linspace(t_lo, t_hi, _LEVEL_GRID)
        lam = np.clip(mu + scale * t, 0.0, s * (1.0 - 1e-16))
        v_next = (q - lam * lam) / (s - lam) ** 2
        v_next = np.clip(v_next, 1.0 / (m - 1.0), 1.0)
        dens = np.maximum(1.0 - t * t, 0.0) ** (a - 1.0) * np.exp(
            _eval_log_g(m - 1, v_next)
        )
        cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(t))])
        grids.append(t)
        cdfs.append(cdf)
        masses.append(cdf[-1])
    total = sum(masses)
    if total <= 0.0:
        # underflowing conditional (extreme spike): widest island midpoint
        widest = max(islands, key=lambda ab: ab[1] - ab[0])
        return mu + scale * 0.5 * (widest[0] + widest[1])
    pick = rng.random() * total
    if grids[0] is None:
        idx = 1
    elif grids[1] is None or pick <= masses[0]:
        idx = 0
    else:
        idx = 1
        pick -= masses[0]
    t = np.interp(min(pick, masses[idx]), cdfs[idx], grids[idx])
    return mu + scale * t


def _spectrum_fixed_ratio_general(dim, ratio, rng):
    """Spectrum with fixed purity, uniform on the constant-purity sphere
    restricted to the eigenvalue simplex, for dim > 4.

    Plain rejection of uniform sphere directions (the dim=4 approach)
    collapses in high dimension, so coordinates are drawn sequentially
    from their exact conditionals, using the tabulated feasible-fraction
    recursion; every draw completes to a valid spectrum.  A final random
    permutation makes exchangeability exact regardless of quadrature
    resolution.
    """
    _ensure_feasible_fraction_tables(dim - 1)
    lam = np.empty(dim)
    s, q = 1.0, 1.0 / ratio
    for level in range(dim - 2):
        value = min(max(_sample_level(dim - level, s, q, rng), 0.0), s)
        lam[level] = value
        s -= value
        q = max(q - value * value, 0.0)
    half = np.sqrt(max(0.0, 2.0 * q - s * s))
    first = 0.5 * (s + half) if rng.random() < 0.5 else 0.5 * (s - half)
    lam[dim - 2] = first
    lam[dim - 1] = s - first
    return np.clip(lam[rng.permutation(dim)], 0.0, None)


def random_fixed_ratio(n_qubits, ratio, rng):
    """Random state with participation ratio fixed to ``ratio`` exactly.

    The spectrum is uniform on the constant-purity sphere restricted to
    the eigenvalue simplex; the eigenbasis is an independent Haar unitary.
    """
    if n_qubits not in (2, 3, 4):
        raise UnsupportedSize(f"n_qubits={n_qubits} not in (2, 3, 4)")
    dim = 2**n_qubits
    if not 1.0 <= ratio <= dim:
        raise BadRatio(f"ratio {ratio} outside [1, {dim}]")
    if n_qubits == 2:
        spectrum = _spectrum_fixed_ratio_2(ratio, rng)
    else:
        spectrum = _spectrum_fixed_ratio_general(dim, ratio, rng)
    u = haar_unitary(dim, rng)
    return DensityMatrix(n_qubits, (u * spectrum) @ u.conj().T)


# ---------------------------------------------------------------------------
# state files
# ---------------------------------------------------------------------------


def _format_float(x):
    return format(float(x), ".17g")


def write_state(path, state):
    """Write a state file: n_qubits plus the matrix as [re, im] pairs.

    Floats carry 17 significant digits, enough to round-trip exactly.
    """
    m = state.matrix
    rows = []
    for i in range(m.shape[0]):
        cells = ", ".join(
            f"[{_format_float(m[i, j].real)}, {_format_float(m[i, j].imag)}]"
            for j in range(m.shape[1])
        )
        rows.append(f"    [{cells}]")
    body = ",\n".join(rows)
    text = f'{{\n  "n_qubits": {state.n_qubits},\n  "matrix": [\n{body}\n  ]\n}}\n'
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


def read_state(path):
    """Read and validate a state file written by :func:`write_state`."""
    with open(path, "r", encoding="ascii") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StateFormatError(f"{path}: not valid structured text ({exc})") from None
    if not isinstance(doc, dict) or "n_qubits" not in doc or "matrix" not in doc:
        raise StateFormatError(f"{path}: missing n_qubits/matrix fields")
    n = doc["n_qubits"]
    if not isinstance(n, int) or not 2 <= n <= 4:
        raise StateFormatError(f"{path}: unsupported n_qubits {n!r}")
    dim = 2**n
    raw = doc["matrix"]
    try:
        arr = np.asarray(raw, dtype=float)
    except (ValueError, TypeError):
        raise StateFormatError(f"{path}: matrix entries must be [re, im] pairs") from None
    if arr.shape != (dim, dim, 2):
        raise StateFormatError(f"{path}: matrix shape {arr.shape} != ({dim}, {dim}, 2)")
    matrix = arr[..., 0] + 1j * arr[..., 1]
    try:
        return DensityMatrix.from_matrix(matrix)
    except (NotHermitian, NotDensityMatrix, UnsupportedSize) as exc:
        raise StateFormatError(f"{path}: {exc}") from None
