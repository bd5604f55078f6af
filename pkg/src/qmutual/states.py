"""Density operators and their spectral, Schatten and orthogonal decompositions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BlockShapeMismatch,
    DecompositionMismatch,
    NotHermitian,
    NotPositive,
    NotSquare,
    RankOutOfRange,
    TraceNotOne,
)
from .linalg import (
    HERMITIAN_TOL,
    ZERO_TOL,
    as_matrix,
    haar_unitary,
    hermitian_defect,
    hermitian_eig,
    is_hermitian,
)

GAP_TOL = 1e-8
TRACE_TOL = 1e-10
RECON_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated quantum state. Build through :func:`validate_density`."""

    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def validate_density(m) -> DensityMatrix:
    """Check Hermiticity, positivity and unit trace; never renormalizes."""
    if isinstance(m, DensityMatrix):
        return m
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NotSquare(f"matrix of shape {a.shape} is not square")
    if not is_hermitian(a, HERMITIAN_TOL):
        raise NotHermitian(f"Hermiticity violated, defect {hermitian_defect(a):.3g}")
    a = 0.5 * (a + a.conj().T)
    lo = float(np.linalg.eigvalsh(a)[0])
    if lo < -ZERO_TOL:
        raise NotPositive(f"positivity violated, smallest eigenvalue {lo:.3g}")
    tr = float(np.trace(a).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise TraceNotOne(f"unit trace violated, trace {tr:.12g}")
    a.setflags(write=False)
    return DensityMatrix(a)


as_density = validate_density


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Distinct eigenvalues (descending) with orthonormal bases of their eigenspaces."""

    eigenvalues: np.ndarray
    bases: tuple[np.ndarray, ...]

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(b.shape[1] for b in self.bases)

    @property
    def projectors(self) -> list[np.ndarray]:
        return [b @ b.conj().T for b in self.bases]

    @property
    def dim(self) -> int:
        return self.bases[0].shape[0]

    def degenerate_blocks(self, zero_tol: float = ZERO_TOL) -> list[int]:
        """Indices of blocks with search freedom: multiplicity > 1 and nonzero weight."""
        return [
            i
            for i, (lam, b) in enumerate(zip(self.eigenvalues, self.bases))
            if b.shape[1] > 1 and lam > zero_tol
        ]

    def reconstruct(self) -> np.ndarray:
        return sum(lam * p for lam, p in zip(self.eigenvalues, self.projectors))


@dataclass(frozen=True, eq=False)
class SchattenDecomposition:
    """Weights and orthonormal vectors ``e_k`` with ``rho = sum_k w_k |e_k><e_k|``."""

    weights: np.ndarray
    vectors: np.ndarray  # columns

    @property
    def projectors(self) -> list[np.ndarray]:
        v = self.vectors
        return [np.outer(v[:, k], v[:, k].conj()) for k in range(v.shape[1])]

    def reconstruct(self) -> np.ndarray:
        v = self.vectors
        return (v * self.weights) @ v.conj().T

    def __len__(self):
        return len(self.weights)


@dataclass(frozen=True, eq=False)
class OrthogonalDecomposition:
    """``rho = sum_k w_k rho_k`` with pairwise orthogonal ranges."""

    weights: np.ndarray
    parts: tuple[DensityMatrix, ...] = field(default=())

    def reconstruct(self) -> np.ndarray:
        return sum(w * p.matrix for w, p in zip(self.weights, self.parts))

    def orthogonality_defect(self) -> float:
        worst = 0.0
        for i, a in enumerate(self.parts):
            for b in self.parts[i + 1:]:
                worst = max(worst, float(np.linalg.norm(a.matrix @ b.matrix)))
        return worst


def spectral_decomposition(rho, gap_tol: float = GAP_TOL) -> SpectralDecomposition:
    """Cluster the sorted spectrum into degenerate blocks.

    Consecutive eigenvalues closer than ``gap_tol`` share a block; the block
    eigenvalue is the mean of its members.
    """
    rho = validate_density(rho)
    eig = hermitian_eig(rho.matrix)
    w, v = eig.eigenvalues, eig.eigenvectors
    groups = [[0]]
    for i in range(1, len(w)):
        if w[groups[-1][-1]] - w[i] < gap_tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    values = np.array([w[g].mean() for g in groups])
    bases = tuple(v[:, g] for g in groups)
    return SpectralDecomposition(values, bases)


def schatten_decomposition(
    spec: SpectralDecomposition,
    block_rotations: Sequence[np.ndarray | None] | None = None,
    zero_tol: float = ZERO_TOL,
) -> SchattenDecomposition:
    """Split every eigenspace into rank-one projectors.

    ``block_rotations`` holds one ``d_k x d_k`` unitary (or ``None``) per block
    of the spectral decomposition; block ``k`` is split along the columns of
    ``basis_k @ U_k``. Blocks whose eigenvalue is below ``zero_tol`` are dropped.
    """
    if block_rotations is not None and len(block_rotations) != len(spec.bases):
        raise BlockShapeMismatch(
            f"{len(block_rotations)} rotations given for {len(spec.bases)} blocks"
        )
    weights, cols = [], []
    for k, (lam, basis) in enumerate(zip(spec.eigenvalues, spec.bases)):
        if lam <= zero_tol:
            continue
        u = None if block_rotations is None else block_rotations[k]
        if u is not None:
            u = np.asarray(u, dtype=complex)
            d = basis.shape[1]
            if u.shape != (d, d):
                raise BlockShapeMismatch(
                    f"block {k} has dimension {d}, rotation has shape {u.shape}"
                )
            basis = basis @ u
        weights.extend([lam] * basis.shape[1])
        cols.append(basis)
    vectors = np.hstack(cols) if cols else np.zeros((spec.dim, 0), dtype=complex)
    w = np.array(weights)
    return SchattenDecomposition(w / w.sum(), vectors)


def sample_schatten(spec: SpectralDecomposition, seed) -> SchattenDecomposition:
    """Schatten decomposition with an independent Haar rotation in each degenerate block."""
    rng = np.random.default_rng(seed)
    rotations = [
        haar_unitary(b.shape[1], rng) if b.shape[1] > 1 else None for b in spec.bases
    ]
    return schatten_decomposition(spec, rotations)


def canonical_schatten(rho, gap_tol: float = GAP_TOL) -> SchattenDecomposition:
    return schatten_decomposition(spectral_decomposition(rho, gap_tol))


def random_density(dim: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """Random state of a given rank: Haar frame, flat-Dirichlet spectrum."""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise RankOutOfRange(f"rank {rank} outside [1, {dim}]")
    rng = np.random.default_rng(seed)
    u = haar_unitary(dim, rng)
    p = np.zeros(dim)
    p[:rank] = rng.dirichlet(np.ones(rank))
    m = (u * p) @ u.conj().T
    m = 0.5 * (m + m.conj().T)
    m /= np.trace(m).real
    return validate_density(m)


def pure_state(vector) -> DensityMatrix:
    v = np.asarray(vector, dtype=complex).ravel()
    v = v / np.linalg.norm(v)
    return validate_density(np.outer(v, v.conj()))


def maximally_mixed(dim: int) -> DensityMatrix:
    return validate_density(np.eye(dim) / dim)


def diagonal_state(probs) -> DensityMatrix:
    return validate_density(np.diag(np.asarray(probs, dtype=float)))


def schatten_to_orthogonal(e: SchattenDecomposition) -> OrthogonalDecomposition:
    parts = tuple(validate_density(p) for p in e.projectors)
    return OrthogonalDecomposition(np.array(e.weights), parts)


def check_decomposes(rho, reconstruction, tol: float = RECON_TOL) -> None:
    rho = validate_density(rho)
    err = float(np.linalg.norm(rho.matrix - reconstruction))
    if err > tol:
        raise DecompositionMismatch(
            f"decomposition does not reconstruct the state (error {err:.3g})"
        )


def refine_to_schatten(
    d: OrthogonalDecomposition, gap_tol: float = GAP_TOL
) -> SchattenDecomposition:
    """Split each part of an orthogonal decomposition into its own Schatten pieces.

    The union is a Schatten decomposition of ``sum_k w_k rho_k`` because the
    parts have orthogonal ranges.
    """
    weights, cols = [], []
    for w, part in zip(d.weights, d.parts):
        e = canonical_schatten(part, gap_tol)
        weights.extend(w * e.weights)
        cols.append(e.vectors)
    return SchattenDecomposition(np.array(weights), np.hstack(cols))


def random_orthogonal_decomposition(
    rho, n_parts: int, seed=None, gap_tol: float = GAP_TOL
) -> OrthogonalDecomposition:
    """Random coarse-graining of a canonical Schatten decomposition into ``n_parts`` groups.

    Each Schatten term is assigned to a random group (empty groups are dropped);
    the group sums are mutually orthogonal parts of ``rho``.
    """
    rho = validate_density(rho)
    rng = np.random.default_rng(seed)
    e = schatten_decomposition(spectral_decomposition(rho, gap_tol))
    labels = rng.integers(0, n_parts, size=len(e))
    weights, parts = [], []
    for g in range(n_parts):
        idx = np.flatnonzero(labels == g)
        if idx.size == 0:
            continue
        v = e.vectors[:, idx]
        block = (v * e.weights[idx]) @ v.conj().T
        w = float(e.weights[idx].sum())
        weights.append(w)
        parts.append(validate_density(block / np.trace(block).real))
    return OrthogonalDecomposition(np.array(weights), tuple(parts))
