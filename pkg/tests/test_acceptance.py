"""Acceptance suite: one test per release criterion, at stated tolerance.

Each criterion is a single test so `pytest -v` prints one pass/fail line
per criterion.  Scaled Monte Carlo targets use 10^5 samples with widened
binomial tolerances; property checks are exhaustive at their stated
sizes.  Slow criteria state their own runtime budgets and assert them.
"""

import math
import time

import numpy as np
import pytest

from entrobell.bell import (
    MeasurementSettings,
    chsh_envelope,
    chsh_max,
    chsh_operator,
    horodecki_m,
    mabk_max,
    mabk_operator,
    mermin_envelope,
    mermin_max,
)
from entrobell.correlations import (
    MeasurementBasis,
    bloch_decompose,
    discord_grid_minimum,
    geometric_discord,
    quantum_discord,
)
from entrobell.entropic import entropic_report, implied_max_ratio, single_eigenvalue_bound
from entrobell.linalg import IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z, kron
from entrobell.states import (
    TETRAHEDRON,
    DensityMatrix,
    bell_diagonal,
    ghz,
    maximally_mixed,
    participation_ratio,
    random_density,
    random_fixed_ratio,
    simplex_to_eigenvalues,
    substream,
    werner3,
)
from entrobell.survey import SurveyConfig, coincidence, envelope_check, ratio_sweep, run_survey


def _unit_vectors(rng, count):
    vecs = rng.normal(size=(count, 3))
    return vecs / np.linalg.norm(vecs, axis=1)[:, None]


@pytest.fixture(scope="module")
def haar_survey():
    config = SurveyConfig(
        n_qubits=2,
        sample_count=100_000,
        state_family="haar_simplex",
        measures=("entropic", "concurrence", "chsh"),
        seed=101,
    )
    start = time.perf_counter()
    records = run_survey(config)
    elapsed = time.perf_counter() - start
    return records, elapsed


def test_criterion_01_haar_coincidence(haar_survey):
    records, elapsed = haar_survey
    got = {
        pair: coincidence(records, pair).probability
        for pair in ("entropic-entanglement", "entropic-bell", "entanglement-bell")
    }
    assert abs(got["entropic-entanglement"] - 0.643) <= 0.01, got
    assert abs(got["entropic-bell"] - 0.994) <= 0.005, got
    assert abs(got["entanglement-bell"] - 0.646) <= 0.01, got
    assert elapsed <= 180.0, f"single-threaded survey took {elapsed:.1f}s (> 3 min)"


def test_criterion_02_bell_diagonal_coincidence():
    records = run_survey(
        SurveyConfig(
            n_qubits=2,
            sample_count=100_000,
            state_family="bell_diagonal",
            measures=("entropic", "concurrence", "chsh"),
            seed=102,
        )
    )
    got = {
        pair: coincidence(records, pair).probability
        for pair in ("entropic-entanglement", "entropic-bell", "entanglement-bell")
    }
    assert abs(got["entropic-entanglement"] - 0.836) <= 0.01, got
    assert abs(got["entropic-bell"] - 0.994) <= 0.005, got
    assert abs(got["entanglement-bell"] - 0.842) <= 0.01, got


def test_criterion_03_mixedness_forces_classical_and_local():
    rng = substream(103, 0)
    for ratio in (2.0, 2.5, 3.0, 3.5):
        entropic_violations = 0
        bell_capable = 0
        for _ in range(100_000):
            state = random_fixed_ratio(2, ratio, rng)
            entropic_violations += entropic_report(state).violated
            bell_capable += horodecki_m(state) > 1.0
        assert entropic_violations == 0, f"R={ratio}: {entropic_violations} violations"
        assert bell_capable == 0, f"R={ratio}: {bell_capable} states with M > 1"


def test_criterion_04_optimizer_matches_closed_form():
    worst = 0.0
    for index in range(1000):
        state = random_density(2, substream(104, index))
        optimized = chsh_max(state, method="optimize").value
        closed = 2.0 * math.sqrt(horodecki_m(state))
        worst = max(worst, abs(optimized - closed))
    assert worst <= 1e-3, f"worst |optimizer - closed form| = {worst:.3e}"


def test_criterion_05_chsh_envelope(haar_survey):
    records, _ = haar_survey
    report = envelope_check(records, "chsh")
    assert report.max_excess <= 1e-6, f"max excess {report.max_excess:.3e}"
    assert chsh_envelope(1.0) == 2.0 * math.sqrt(2.0)
    assert chsh_envelope(2.0) == 2.0
    assert chsh_envelope(4.0) == 0.0


def test_criterion_06_mermin_suite():
    start = time.perf_counter()
    assert abs(mermin_max(ghz(3)).value - 4.0) <= 1e-3
    for weight in (0.3, 0.6, 0.9):
        assert abs(mermin_max(werner3(weight)).value - 4.0 * weight) <= 1e-3
    assert mermin_envelope(32.0 / 11.0) == 2.0
    checked = 0
    index = 0
    worst = 0.0
    while checked < 1000:
        state = random_density(3, substream(106, index))
        index += 1
        if participation_ratio(state) < 2.91:
            continue
        checked += 1
        value = mermin_max(state).value
        worst = max(worst, value)
        assert value <= 2.0 + 1e-3, f"state {index - 1}: mermin {value:.6f}"
    elapsed = time.perf_counter() - start
    assert elapsed <= 1200.0, f"mermin suite took {elapsed:.0f}s (> 20 min)"


def test_criterion_07_mabk_suite():
    rng = substream(107, 0)
    worst_gap = 0.0
    for _ in range(20):
        vectors = tuple(_unit_vectors(rng, 4))
        settings = MeasurementSettings(vectors=vectors)
        gap = np.abs(mabk_operator(2, settings) - chsh_operator(settings)).max()
        worst_gap = max(worst_gap, gap)
    assert worst_gap <= 1e-12, f"recursion vs CHSH operator gap {worst_gap:.3e}"

    checked = 0
    for ratio in (4.0, 5.5, 7.0, 10.0, 13.0):
        for _ in range(20):
            state = random_fixed_ratio(4, ratio, rng)
            value = mabk_max(state, 4).value
            assert value <= 4.0 + 1e-3, f"R={ratio}: mabk {value:.6f}"
            checked += 1
    assert checked == 100

    assert abs(mabk_max(maximally_mixed(4), 4).value) <= 1e-9


def _random_qubit(rng):
    direction = rng.normal(size=3)
    direction *= rng.random() ** (1.0 / 3.0) / np.linalg.norm(direction)
    return 0.5 * (
        IDENTITY_2
        + direction[0] * SIGMA_X
        + direction[1] * SIGMA_Y
        + direction[2] * SIGMA_Z
    )


def _measured_side_classical(rng):
    basis = MeasurementBasis(rng.uniform(0.0, np.pi), rng.uniform(0.0, 2.0 * np.pi))
    proj0, proj1 = basis.projectors()
    weight = rng.uniform(0.05, 0.95)
    matrix = weight * kron(_random_qubit(rng), proj0) + (1.0 - weight) * kron(
        _random_qubit(rng), proj1
    )
    return DensityMatrix.from_matrix(matrix)


def test_criterion_08_discord_suite():
    product = kron(np.diag([0.7, 0.3]), np.diag([0.2, 0.8]))
    assert quantum_discord(product) <= 1e-6

    phi_plus = bell_diagonal((1.0, 0.0, 0.0, 0.0))
    assert abs(quantum_discord(phi_plus) - math.log(2.0)) <= 1e-4
    assert abs(discord_grid_minimum(phi_plus) - math.log(2.0)) <= 1e-4

    worst = 0.0
    for index in range(1000):
        state = _measured_side_classical(substream(108, index))
        worst = max(worst, quantum_discord(state))
    assert worst <= 1e-5, f"worst discord on zero-discord constructions {worst:.3e}"


def test_criterion_09_geometric_discord():
    worst = 0.0
    for index in range(1000):
        state = random_density(2, substream(109, index))
        decomposition = bloch_decompose(state)
        x, y, tensor = decomposition.x, decomposition.y, decomposition.T
        lam_max = float(np.linalg.eigvalsh(np.outer(x, x) + tensor @ tensor.T)[-1])
        second_form = (
            1.0 / participation_ratio(state) - 0.25 - 0.25 * (float(y @ y) + lam_max)
        )
        worst = max(worst, abs(geometric_discord(state) - second_form))
    assert worst <= 1e-10, f"worst gap between the two closed forms {worst:.3e}"

    assert abs(geometric_discord(bell_diagonal((1.0, 0.0, 0.0, 0.0))) - 0.5) <= 1e-10

    rng = substream(109, 5000)
    for _ in range(100):
        weight = rng.uniform(0.05, 0.95)
        classical_quantum = weight * kron(np.diag([1.0, 0.0]), _random_qubit(rng)) + (
            1.0 - weight
        ) * kron(np.diag([0.0, 1.0]), _random_qubit(rng))
        assert geometric_discord(classical_quantum) <= 1e-10


def test_criterion_10_fixed_ratio_generator():
    assert abs(TETRAHEDRON.face_radius - 0.25 * math.sqrt(2.0 / 3.0)) < 1e-16
    assert abs(TETRAHEDRON.edge_radius - math.sqrt(2.0) / 4.0) < 1e-16
    assert abs(TETRAHEDRON.vertex_radius - math.sqrt(6.0) / 4.0) < 1e-16

    vertex_spectrum = simplex_to_eigenvalues(TETRAHEDRON.vertices[3])
    assert np.allclose(vertex_spectrum, [0.0, 0.0, 0.0, 1.0], atol=1e-14)

    rng = substream(110, 0)
    grid = (1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0, 3.5, 3.9)
    worst = 0.0
    for ratio in grid:
        for _ in range(1000):
            state = random_fixed_ratio(2, ratio, rng)
            purity = float(np.trace(state.matrix @ state.matrix).real)
            worst = max(worst, abs(purity - 1.0 / ratio))
    assert worst <= 1e-12, f"worst |purity - 1/R| = {worst:.3e}"


def test_criterion_11_transcendental_bound():
    assert abs(single_eigenvalue_bound(3) - 0.90909) <= 1e-4
    assert abs(implied_max_ratio(3) - 1.2) <= 0.05


def test_criterion_12_coincidence_plateau():
    config = SurveyConfig(
        n_qubits=2,
        sample_count=10_000,
        state_family="fixed_ratio",
        measures=("entropic", "chsh"),
        seed=112,
        ratio=2.0,
    )
    grid = [2.0, 2.2, 2.4, 2.6, 2.8, 3.0]
    rows = ratio_sweep(config, grid, per_point=10_000)
    for row in rows:
        probability = row.stat("entropic-bell").probability
        assert probability == 1.0, f"R={row.ratio}: coincidence {probability}"
