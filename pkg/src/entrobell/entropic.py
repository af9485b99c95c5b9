"""Von Neumann entropy and subsystem-entropy (conditional) inequalities.

For a classical mixture the entropy of the whole is never below the
entropy of any reduction, so every conditional entropy
``S(rho) - S(rho_kept)`` is nonnegative.  Entangled states can push a
conditional below zero; :func:`entropic_report` evaluates every
bipartition of the register, in both directions, and flags a state as a
violator when the smallest conditional is decisively negative.

Entropies are in nats throughout; reports also expose values divided by
ln 2 for bit-denominated comparisons.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.optimize import brentq

from .states import DensityMatrix
from .linalg import partial_trace

LN2 = float(np.log(2.0))

# Decision threshold for calling a conditional entropy negative: well
# above eigenvalue noise (~1e-15) and far below any physical violation,
# which is O(ln 2) for the states of interest.
VIOLATION_TOL = 1e-12


def von_neumann_entropy(matrix):
    """S(rho) = -Tr(rho ln rho) in nats.

    Eigenvalues within -1e-12 of zero are treated as exact zeros (their
    entropy contribution vanishes continuously); genuinely negative
    spectra are the caller's responsibility to reject.
    """
    m = matrix.matrix if isinstance(matrix, DensityMatrix) else np.asarray(matrix)
    lams = np.linalg.eigvalsh(m)
    lams = np.clip(lams.real, 0.0, None)
    nonzero = lams[lams > 0.0]
    return float(-np.sum(nonzero * np.log(nonzero)))


@dataclass(frozen=True)
class BipartitionEntropy:
    """Conditional entropy for one side of one bipartition.

    ``kept`` lists the qubit indices that were NOT traced out;
    ``conditional`` is S(rho) - S(rho_kept) in nats.
    """

    kept: tuple
    reduced_entropy: float
    conditional: float

    @property
    def conditional_ln2(self):
        return self.conditional / LN2


@dataclass(frozen=True)
class EntropicReport:
    """All conditional entropies of a state, and the violation verdict."""

    n_qubits: int
    total_entropy: float
    entries: tuple
    min_conditional: float
    violated: bool

    @property
    def min_conditional_ln2(self):
        return self.min_conditional / LN2

    def entry(self, kept):
        kept = tuple(kept)
        for e in self.entries:
            if e.kept == kept:
                return e
        raise KeyError(f"no bipartition side {kept}")


def entropic_report(state, tol=VIOLATION_TOL):
    """Evaluate S(rho) - S(rho_kept) for every proper subset of qubits.

    Both sides of each bipartition appear as separate entries, labeled by
    the kept subset, so the report shows which reduction drives a
    violation.  ``violated`` is True when the minimum conditional is
    below ``-tol``.
    """
    n = state.n_qubits
    total = von_neumann_entropy(state)
    entries = []
    for size in range(1, n):
        for kept in combinations(range(n), size):
            reduced = partial_trace(state.matrix, kept, n_qubits=n)
            s_kept = von_neumann_entropy(reduced)
            entries.append(
                BipartitionEntropy(
                    kept=kept,
                    reduced_entropy=s_kept,
                    conditional=total - s_kept,
                )
            )
    min_conditional = min(e.conditional for e in entries)
    return EntropicReport(
        n_qubits=n,
        total_entropy=total,
        entries=tuple(entries),
        min_conditional=min_conditional,
        violated=bool(min_conditional < -tol),
    )


def single_eigenvalue_bound(n_qubits):
    """Dominant-eigenvalue threshold of the single-factor relaxation.

    In product form the subsystem inequality reads
    ``prod lam_i^lam_i <= a^a (1-a)^(1-a)`` with the right side in
    [1/2, 1] for any one-qubit reduction.  Replacing every factor on the
    left by the dominant eigenvalue's gives the sufficient condition
    ``(lam1^lam1)^(2^n) <= 1/2`` for the inequalities to hold; this
    function returns the point where that protection ends -- the root
    lam* in (1/e, 1) of lam*ln(lam) = -ln2 / 2^n.  (The smaller root of
    the same equation lies below 1/2^n and cannot be a dominant
    eigenvalue.)
    """
    dim = 2**n_qubits
    target = np.log(2.0) / dim

    def f(lam):
        return lam * np.log(lam) + target

    return float(brentq(f, 1.0 / np.e + 1e-12, 1.0 - 1e-15, xtol=1e-15, rtol=8.9e-16))


def implied_max_ratio(n_qubits):
    """Largest participation ratio of a state whose dominant eigenvalue
    sits at :func:`single_eigenvalue_bound`.

    A flat remainder minimizes the purity given the top eigenvalue, so
    R_max = 1 / (lam*^2 + (1-lam*)^2/(2^n - 1)).  This is the rough
    estimate of the ratio below which every state violates the subsystem
    inequalities (about 1.21 for three qubits, versus the numerically
    observed 1.5).
    """
    dim = 2**n_qubits
    lam = single_eigenvalue_bound(n_qubits)
    purity = lam * lam + (1.0 - lam) ** 2 / (dim - 1)
    return 1.0 / purity
