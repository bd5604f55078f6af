"""Dense complex-matrix kernels shared by every other module.

All logarithms are natural. Eigenvalues are always returned in descending
order and eigenvectors carry a fixed phase convention so that decompositions
are reproducible across runs.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import InvalidArgument, NegativeEigenvalue, NotHermitian, NotSquare

ZERO_TOL = 1e-12
HERMITIAN_TOL = 1e-10


class HermitianEig(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-D complex array, rejecting non-finite entries."""
    a = np.asarray(getattr(m, "matrix", m), dtype=complex)
    if a.ndim != 2:
        raise InvalidArgument(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidArgument("matrix has non-finite entries")
    return a


def _require_square(a: np.ndarray) -> None:
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"matrix of shape {a.shape} is not square")


def hermitian_defect(m) -> float:
    a = as_matrix(m)
    _require_square(a)
    return float(np.linalg.norm(a - a.conj().T))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    a = as_matrix(m)
    _require_square(a)
    scale = np.linalg.norm(a)
    return scale == 0 or np.linalg.norm(a - a.conj().T) <= tol * scale


def fix_phases(vectors: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate each column so its first non-negligible entry is real positive."""
    out = np.array(vectors, dtype=complex, copy=True)
    for j in range(out.shape[1]):
        col = out[:, j]
        idx = np.flatnonzero(np.abs(col) > tol)
        if idx.size:
            z = col[idx[0]]
            out[:, j] = col * (abs(z) / z)
    return out


def hermitian_eig(m) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Raises
    ------
    NotSquare
        For rectangular input.
    NotHermitian
        If ``||M - M^H||_F > 1e-10 ||M||_F``.
    """
    a = as_matrix(m)
    _require_square(a)
    if not is_hermitian(a):
        raise NotHermitian(
            f"matrix is not Hermitian (defect {hermitian_defect(a):.3g})"
        )
    a = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(a)
    order = np.argsort(-w, kind="stable")  # exact ties keep the solver's order
    return HermitianEig(w[order], fix_phases(v[:, order]))


def _support_split(m, zero_tol):
    eig = hermitian_eig(m)
    if eig.eigenvalues.size and eig.eigenvalues[-1] < -zero_tol:
        raise NegativeEigenvalue(
            f"eigenvalue {eig.eigenvalues[-1]:.3g} below -{zero_tol:g}"
        )
    return eig, eig.eigenvalues > zero_tol


def matrix_log_on_support(m, zero_tol: float = ZERO_TOL) -> np.ndarray:
    """Natural logarithm on the support of a PSD matrix, zero on its kernel."""
    eig, keep = _support_split(m, zero_tol)
    v = eig.eigenvectors[:, keep]
    return (v * np.log(eig.eigenvalues[keep])) @ v.conj().T


def exp_on_support(m, zero_tol: float = ZERO_TOL) -> np.ndarray:
    """Exponential restricted to the range of a Hermitian matrix.

    Directions in the kernel of ``m`` map to zero, which makes this the exact
    inverse of :func:`matrix_log_on_support` for operators whose support is the
    range of their logarithm.
    """
    eig = hermitian_eig(m)
    keep = np.abs(eig.eigenvalues) > zero_tol
    v = eig.eigenvectors[:, keep]
    return (v * np.exp(eig.eigenvalues[keep])) @ v.conj().T


def kernel_projector(m, zero_tol: float = ZERO_TOL) -> np.ndarray:
    eig, keep = _support_split(m, zero_tol)
    v = eig.eigenvectors[:, ~keep]
    return v @ v.conj().T


def tensor(a, b) -> np.ndarray:
    """Kronecker product; the first factor carries the slow index."""
    return np.kron(as_matrix(a), as_matrix(b))


def trace(m) -> complex:
    a = as_matrix(m)
    _require_square(a)
    return complex(np.trace(a))


def adjoint(m) -> np.ndarray:
    return as_matrix(m).conj().T


def frobenius_distance(a, b) -> float:
    return float(np.linalg.norm(as_matrix(a) - as_matrix(b)))


def partial_trace(m, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Trace out one factor of a bipartite operator on ``C^dims[0] (x) C^dims[1]``."""
    d0, d1 = dims
    t = as_matrix(m).reshape(d0, d1, d0, d1)
    if keep == 0:
        return np.einsum("ijkj->ik", t)
    return np.einsum("ijil->jl", t)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def hermitian_generators(n: int) -> list[np.ndarray]:
    """Off-diagonal Hermitian generators of SU(n) (phases excluded).

    Returns the ``n(n-1)`` matrices ``|a><b| + |b><a|`` and
    ``-i|a><b| + i|b><a|`` for ``a < b``.
    """
    gens = []
    for a in range(n):
        for b in range(a + 1, n):
            g = np.zeros((n, n), dtype=complex)
            g[a, b] = g[b, a] = 1.0
            gens.append(g)
            g = np.zeros((n, n), dtype=complex)
            g[a, b], g[b, a] = -1j, 1j
            gens.append(g)
    return gens


def unitary_from_params(params: np.ndarray, gens: list[np.ndarray]) -> np.ndarray:
    """``exp(i * sum_j params_j G_j)`` for Hermitian generators ``G_j``."""
    n = gens[0].shape[0] if gens else 1
    if not gens:
        return np.eye(n, dtype=complex)
    h = np.tensordot(params, np.asarray(gens), axes=1)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T
