"""Dense complex linear algebra for few-qubit operators.

Conventions
-----------
Qubit 0 is the leftmost (most significant) tensor factor, so
``kron(a, b)`` acts on qubit 0 with ``a`` and qubit 1 with ``b``,
and basis index ``i`` of a 2^n-dimensional vector spells the bit
string of the qubits in order.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadSubset, NotHermitian

HERMITICITY_TOL = 1e-12

# Pauli matrices, indexed x, y, z.
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])
IDENTITY_2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition with eigenvalues sorted non-increasing.

    ``eigenvectors[:, k]`` is the unit eigenvector of ``eigenvalues[k]``;
    the columns are orthonormal.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def kron(a, b):
    """Tensor (Kronecker) product of two operators, ``a`` on the left."""
    return np.kron(a, b)


def kron_all(*ops):
    """Tensor product of several operators, left to right."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def hermiticity_defect(a):
    """Largest absolute entry of ``a - a†``."""
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T)))


def hermitian_eig(a, tol=HERMITICITY_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    a : (d, d) array_like
        Matrix with ``max |a - a†| <= tol``.

    Returns
    -------
    Spectrum
        Real eigenvalues in non-increasing order (ties keep their
        original order) with matching orthonormal eigenvector columns.

    Raises
    ------
    NotHermitian
        If the Hermiticity defect exceeds ``tol``.
    """
    a = np.asarray(a, dtype=complex)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise NotHermitian(f"hermiticity defect {defect:.3e} exceeds {tol:.1e}")
    vals, vecs = np.linalg.eigh(a)
    order = np.argsort(-vals, kind="stable")
    return Spectrum(eigenvalues=vals[order], eigenvectors=vecs[:, order])


def n_qubits_of(matrix):
    """Number of qubits for a 2^n x 2^n matrix."""
    dim = matrix.shape[0]
    n = int(round(np.log2(dim)))
    if matrix.shape != (dim, dim) or 2**n != dim:
        raise BadSubset(f"matrix shape {matrix.shape} is not a qubit register")
    return n

def partial_trace(matrix, keep, n_qubits=None):
    """Trace out all qubits not listed in ``keep``.

    Parameters
    ----------
    matrix : (2^n, 2^n) array_like
        Operator on an n-qubit register.
    keep : sequence of int
        Qubit indices to retain, 0 = leftmost factor. Order is preserved
        in the output. Must be a proper non-empty subset.

    Returns
    -------
    (2^k, 2^k) ndarray
        The reduced operator on the kept qubits. Hermiticity and trace
        are preserved; positivity is preserved for density matrices.
    """
    matrix = np.asarray(matrix, dtype=complex)
    n = n_qubits_of(matrix) if n_qubits is None else n_qubits
    keep = tuple(keep)
    if len(set(keep)) != len(keep) or any(q < 0 or q >= n for q in keep):
        raise BadSubset(f"invalid qubit subset {keep} for n={n}")
    if len(keep) == 0 or len(keep) == n:
        raise BadSubset("subset must be a proper non-empty subset")
    tensor = matrix.reshape((2,) * (2 * n))
    traced = [q for q in range(n) if q not in keep]
    # Contract row/column axes of each traced qubit, last axis first so
    # the remaining axis numbers stay valid.
    for q in sorted(traced, reverse=True):
        tensor = np.trace(tensor, axis1=q, axis2=q + tensor.ndim // 2)
    # Axes now correspond to sorted(keep); reorder to the requested order.
    k = len(keep)
    pos = {q: i for i, q in enumerate(sorted(keep))}
    perm = [pos[q] for q in keep]
    tensor = tensor.transpose(perm + [p + k for p in perm])
    return tensor.reshape(2**k, 2**k)
