"""Entropy and conditional-entropy contracts.

Frozen expectations were computed by an independent root-finding and
eigenvalue script before this module existed.
"""

import numpy as np
import pytest

from entrobell.entropic import (
    LN2,
    entropic_report,
    implied_max_ratio,
    single_eigenvalue_bound,
    von_neumann_entropy,
)
from entrobell.linalg import kron
from entrobell.states import (
    DensityMatrix,
    bell_diagonal,
    ghz,
    maximally_mixed,
    random_density,
    substream,
    werner2,
)


class TestEntropy:
    def test_pure_states_have_zero_entropy(self):
        for n in (2, 3, 4):
            assert abs(von_neumann_entropy(ghz(n))) < 1e-12

    def test_maximally_mixed(self):
        for n in (2, 3, 4):
            expected = n * LN2
            assert abs(von_neumann_entropy(maximally_mixed(n)) - expected) < 1e-12

    def test_additive_on_products(self):
        rng = substream(30, 0)
        a = random_density(2, rng).matrix
        b = random_density(2, rng).matrix
        joint = von_neumann_entropy(kron(a, b))
        assert abs(joint - von_neumann_entropy(a) - von_neumann_entropy(b)) < 1e-12

    def test_known_two_point_spectrum(self):
        rho = np.diag([0.75, 0.25, 0.0, 0.0]).astype(complex)
        expected = -(0.75 * np.log(0.75) + 0.25 * np.log(0.25))
        assert abs(von_neumann_entropy(rho) - expected) < 1e-14

    def test_invariant_under_conjugation(self):
        from entrobell.states import haar_unitary

        rng = substream(30, 1)
        state = random_density(3, rng)
        u = haar_unitary(8, rng)
        rotated = u @ state.matrix @ u.conj().T
        assert abs(von_neumann_entropy(rotated) - von_neumann_entropy(state)) < 1e-11


class TestReport:
    def test_ghz_violates_everywhere(self):
        for n in (2, 3, 4):
            report = entropic_report(ghz(n))
            assert report.violated
            assert len(report.entries) == 2**n - 2
            for entry in report.entries:
                # every reduction of GHZ is mixed with entropy >= ln 2
                assert entry.conditional <= -LN2 + 1e-12
            assert abs(report.min_conditional + LN2) < 1e-12
            assert abs(report.min_conditional_ln2 + 1.0) < 1e-12

    def test_maximally_mixed_never_violates(self):
        for n in (2, 3, 4):
            report = entropic_report(maximally_mixed(n))
            assert not report.violated
            # smallest conditional keeps one qubit less than everything
            assert abs(report.min_conditional - LN2) < 1e-12

    def test_both_sides_present_and_labeled(self):
        report = entropic_report(ghz(3))
        kept_sets = {e.kept for e in report.entries}
        assert (0,) in kept_sets and (1, 2) in kept_sets
        assert (1,) in kept_sets and (0, 2) in kept_sets
        entry = report.entry((0, 2))
        assert abs(entry.reduced_entropy - LN2) < 1e-12
        with pytest.raises(KeyError):
            report.entry((0, 1, 2))

    def test_werner_threshold(self):
        # S(rho_w) hits ln 2 at p = 0.747613833446 (frozen oracle root)
        assert not entropic_report(werner2(0.73)).violated
        assert entropic_report(werner2(0.76)).violated

    def test_bell_diagonal_example(self):
        report = entropic_report(bell_diagonal([0.7, 0.3, 0.0, 0.0]))
        total = -(0.7 * np.log(0.7) + 0.3 * np.log(0.3))
        assert abs(report.total_entropy - total) < 1e-12
        # one-qubit reductions of Bell-diagonal states are maximally mixed
        assert abs(report.min_conditional - (total - LN2)) < 1e-12
        assert report.violated

    def test_classical_diagonal_state_is_safe(self):
        rng = substream(31, 0)
        for _ in range(20):
            probs = rng.dirichlet(np.ones(8))
            state = DensityMatrix.from_matrix(np.diag(probs).astype(complex))
            assert not entropic_report(state).violated


class TestDominantEigenvalueBound:
    def test_frozen_roots(self):
        assert abs(single_eigenvalue_bound(2) - 0.806693797004) < 1e-9
        assert abs(single_eigenvalue_bound(3) - 0.909093363447) < 1e-9
        assert abs(single_eigenvalue_bound(4) - 0.955681393494) < 1e-9

    def test_three_qubit_value_to_published_precision(self):
        assert abs(single_eigenvalue_bound(3) - 0.90909) < 1e-4

    def test_root_satisfies_equation(self):
        for n in (2, 3, 4):
            lam = single_eigenvalue_bound(n)
            assert abs(lam * np.log(lam) + np.log(2.0) / 2**n) < 1e-14

    def test_protection_boundary(self):
        # below lam*: (lam^lam)^(2^n) <= 1/2, the sufficient condition for
        # the subsystem inequalities; above lam*: the guarantee is gone
        for n in (2, 3, 4):
            dim = 2**n
            lam = single_eigenvalue_bound(n)
            assert (lam - 1e-9) ** ((lam - 1e-9) * dim) < 0.5
            assert (lam + 1e-9) ** ((lam + 1e-9) * dim) > 0.5

    def test_implied_ratio_frozen(self):
        assert abs(implied_max_ratio(2) - 1.507816570490) < 1e-9
        assert abs(implied_max_ratio(3) - 1.208267472662) < 1e-9
        assert abs(implied_max_ratio(4) - 1.094741240428) < 1e-9
