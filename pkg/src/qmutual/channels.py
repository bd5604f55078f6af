"""CPTP channels in Kraus form, classical channels, codings and POVM decodings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimMismatch,
    InvalidArgument,
    InvalidPOVM,
    LengthMismatch,
    NotDistribution,
    NotPositive,
    NotStochastic,
    NotTracePreserving,
    ParamOutOfRange,
    UnknownChannel,
)
from .linalg import as_matrix, haar_unitary, hermitian_eig
from .states import DensityMatrix, validate_density

TP_TOL = 1e-10
POVM_TOL = 1e-10
PSD_TOL = 1e-12
DIST_TOL = 1e-12


def check_distribution(p, n: int | None = None, name: str = "distribution") -> np.ndarray:
    p = np.asarray(p, dtype=float).ravel()
    if n is not None and p.size != n:
        raise LengthMismatch(f"{name} has length {p.size}, expected {n}")
    if p.size == 0 or np.any(p < -DIST_TOL) or abs(p.sum() - 1.0) > DIST_TOL:
        raise NotDistribution(f"{name} is not a probability vector: {p}")
    return np.clip(p, 0.0, None)


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Completely positive trace-preserving map ``rho -> sum_i K_i rho K_i^H``."""

    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(as_matrix(k) for k in self.kraus)
        if not ops:
            raise InvalidArgument("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if any(k.shape != shape for k in ops):
            raise DimMismatch("Kraus operators have inconsistent shapes")
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ops)
        defect = self.tp_defect()
        if defect > TP_TOL:
            raise NotTracePreserving(f"sum K^H K != I (defect {defect:.3g})")

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    def tp_defect(self) -> float:
        s = sum(k.conj().T @ k for k in self.kraus)
        return float(np.linalg.norm(s - np.eye(self.kraus[0].shape[1])))

    def apply_matrix(self, m: np.ndarray) -> np.ndarray:
        """Action on an arbitrary operator (no validation)."""
        k = np.asarray(self.kraus)
        return np.einsum("iab,bc,idc->ad", k, m, k.conj())

    def apply_many(self, ms: np.ndarray) -> np.ndarray:
        """Action on a stack of operators with shape ``(n, d_in, d_in)``."""
        k = np.asarray(self.kraus)
        return np.einsum("iab,nbc,idc->nad", k, ms, k.conj())

    def __call__(self, rho) -> DensityMatrix:
        return apply(self, rho)

    def __repr__(self):
        return f"QuantumChannel({self.dim_in}->{self.dim_out}, {len(self.kraus)} Kraus)"


def apply(ch: QuantumChannel, rho) -> DensityMatrix:
    rho = validate_density(rho)
    if rho.dim != ch.dim_in:
        raise DimMismatch(f"state dim {rho.dim} != channel input dim {ch.dim_in}")
    out = ch.apply_matrix(rho.matrix)
    return validate_density(0.5 * (out + out.conj().T))


def compose(after: QuantumChannel, before: QuantumChannel) -> QuantumChannel:
    """``after o before``; Kraus set is every product ``A_i B_j`` (not compressed)."""
    if before.dim_out != after.dim_in:
        raise DimMismatch(
            f"cannot compose: {before.dim_out}-dim output into {after.dim_in}-dim input"
        )
    return QuantumChannel(tuple(a @ b for a in after.kraus for b in before.kraus))


def kraus_to_choi(ch: QuantumChannel) -> np.ndarray:
    """Choi matrix ``sum_ij |i><j| (x) ch(|i><j|)``; the input index is slow."""
    vecs = [k.T.reshape(-1) for k in ch.kraus]
    return sum(np.outer(v, v.conj()) for v in vecs)


def from_choi(choi, dim_in: int, dim_out: int, tol: float = 1e-10) -> QuantumChannel:
    """Kraus operators from the eigendecomposition of a Choi matrix."""
    c = as_matrix(choi)
    if c.shape != (dim_in * dim_out, dim_in * dim_out):
        raise DimMismatch(
            f"Choi matrix shape {c.shape} does not match {dim_in}->{dim_out}"
        )
    eig = hermitian_eig(c)
    if eig.eigenvalues[-1] < -tol:
        raise NotPositive(f"Choi matrix not PSD (eigenvalue {eig.eigenvalues[-1]:.3g})")
    kraus = [
        np.sqrt(lam) * eig.eigenvectors[:, i].reshape(dim_in, dim_out).T
        for i, lam in enumerate(eig.eigenvalues)
        if lam > tol
    ]
    return QuantumChannel(tuple(kraus))


@dataclass(frozen=True, eq=False)
class ClassicalChannel:
    """Column-stochastic matrix; entry ``(j, k)`` is ``P(out = j | in = k)``."""

    matrix: np.ndarray

    def __post_init__(self):
        t = np.array(self.matrix, dtype=float)
        if t.ndim != 2:
            raise NotStochastic("transition matrix must be 2-D")
        if np.any(t < -DIST_TOL) or np.any(t > 1 + DIST_TOL):
            raise NotStochastic("transition entries outside [0, 1]")
        cols = t.sum(axis=0)
        if np.max(np.abs(cols - 1.0)) > DIST_TOL:
            raise NotStochastic(f"columns do not sum to 1: {cols}")
        t = np.clip(t, 0.0, 1.0)
        t.setflags(write=False)
        object.__setattr__(self, "matrix", t)

    @property
    def n_in(self) -> int:
        return self.matrix.shape[1]

    @property
    def n_out(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, p) -> np.ndarray:
        return self.matrix @ check_distribution(p, self.n_in)


def embed_classical(t: ClassicalChannel) -> QuantumChannel:
    """Quantum channel ``diag(p) -> diag(T p)`` with Kraus ``sqrt(T_jk)|j><k|``."""
    kraus = []
    for j in range(t.n_out):
        for k in range(t.n_in):
            if t.matrix[j, k] > 0:
                op = np.zeros((t.n_out, t.n_in), dtype=complex)
                op[j, k] = np.sqrt(t.matrix[j, k])
                kraus.append(op)
    return QuantumChannel(tuple(kraus))


@dataclass(frozen=True, eq=False)
class QuantumCoding:
    """Assignment of message ``k`` to the code state ``sigma_k``."""

    code_states: tuple[DensityMatrix, ...]

    def __post_init__(self):
        states = tuple(validate_density(s) for s in self.code_states)
        if not states:
            raise InvalidArgument("a coding needs at least one code state")
        if len({s.dim for s in states}) != 1:
            raise DimMismatch("code states have different dimensions")
        object.__setattr__(self, "code_states", states)

    @property
    def n_symbols(self) -> int:
        return len(self.code_states)

    @property
    def dim(self) -> int:
        return self.code_states[0].dim

    def stack(self) -> np.ndarray:
        return np.array([s.matrix for s in self.code_states])


def coding_channel(coding: QuantumCoding, probs) -> DensityMatrix:
    """The mixture ``sum_k lambda_k sigma_k``."""
    lam = check_distribution(probs, coding.n_symbols, "message distribution")
    m = np.tensordot(lam, coding.stack(), axes=1)
    return validate_density(0.5 * (m + m.conj().T))


@dataclass(frozen=True, eq=False)
class MeasurementDecoding:
    """POVM ``{M_j}``; outcome ``j`` has probability ``tr(M_j rho)``."""

    povm: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(as_matrix(m) for m in self.povm)
        if not ops:
            raise InvalidPOVM("a POVM needs at least one element")
        d = ops[0].shape[0]
        for i, m in enumerate(ops):
            if m.shape != (d, d):
                raise InvalidPOVM(f"POVM element {i} has shape {m.shape}")
            lo = hermitian_eig(m).eigenvalues[-1]
            if lo < -PSD_TOL:
                raise InvalidPOVM(f"POVM element {i} not PSD (eigenvalue {lo:.3g})")
            m.setflags(write=False)
        defect = float(np.linalg.norm(sum(ops) - np.eye(d)))
        if defect > POVM_TOL:
            raise InvalidPOVM(f"POVM elements do not sum to I (defect {defect:.3g})")
        object.__setattr__(self, "povm", ops)

    @property
    def dim_in(self) -> int:
        return self.povm[0].shape[0]

    @property
    def n_outcomes(self) -> int:
        return len(self.povm)

    def probabilities(self, ms: np.ndarray) -> np.ndarray:
        """Outcome distributions for a stack of states, shape ``(n_outcomes, n)``."""
        p = np.einsum("jab,nba->jn", np.asarray(self.povm), ms).real
        return np.clip(p, 0.0, None)


def decode(dec: MeasurementDecoding, rho) -> np.ndarray:
    rho = validate_density(rho)
    if rho.dim != dec.dim_in:
        raise DimMismatch(f"state dim {rho.dim} != decoding dim {dec.dim_in}")
    p = dec.probabilities(rho.matrix[None])[:, 0]
    return p / p.sum()


def basis_decoding(dim: int, unitary=None) -> MeasurementDecoding:
    """Rank-one projective measurement along the columns of ``unitary`` (default: computational)."""
    u = np.eye(dim, dtype=complex) if unitary is None else np.asarray(unitary, dtype=complex)
    return MeasurementDecoding(tuple(np.outer(u[:, j], u[:, j].conj()) for j in range(dim)))


def trivial_decoding(dim: int) -> MeasurementDecoding:
    return MeasurementDecoding((np.eye(dim, dtype=complex),))


# ---------------------------------------------------------------- channel zoo

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _prob(name, p):
    if not 0.0 <= p <= 1.0:
        raise ParamOutOfRange(f"{name}: parameter {p} outside [0, 1]")
    return float(p)


def _dim(name, d):
    if int(d) != d or d < 1:
        raise ParamOutOfRange(f"{name}: dimension {d} is not a positive integer")
    return int(d)


def identity_channel(dim: int = 2) -> QuantumChannel:
    return QuantumChannel((np.eye(dim, dtype=complex),))


def depolarizing(p: float, dim: int = 2) -> QuantumChannel:
    """``rho -> (1-p) rho + p I/d``."""
    p = _prob("depolarizing", p)
    kraus = [np.sqrt(1 - p) * np.eye(dim, dtype=complex)] if p < 1 else []
    if p > 0:
        for j in range(dim):
            for k in range(dim):
                op = np.zeros((dim, dim), dtype=complex)
                op[j, k] = np.sqrt(p / dim)
                kraus.append(op)
    return QuantumChannel(tuple(kraus))


def bit_flip(p: float) -> QuantumChannel:
    p = _prob("bit_flip", p)
    return QuantumChannel((np.sqrt(1 - p) * np.eye(2, dtype=complex), np.sqrt(p) * _X))


def phase_flip(p: float) -> QuantumChannel:
    p = _prob("phase_flip", p)
    return QuantumChannel((np.sqrt(1 - p) * np.eye(2, dtype=complex), np.sqrt(p) * _Z))


def amplitude_damping(gamma: float) -> QuantumChannel:
    g = _prob("amplitude_damping", gamma)
    k0 = np.array([[1, 0], [0, np.sqrt(1 - g)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(g)], [0, 0]], dtype=complex)
    return QuantumChannel((k0, k1))


def dephasing(p: float = 1.0, dim: int = 2, unitary=None) -> QuantumChannel:
    """``rho -> (1-p) rho + p sum_k P_k rho P_k`` for the basis given by ``unitary``."""
    p = _prob("dephasing", p)
    u = np.eye(dim, dtype=complex) if unitary is None else np.asarray(unitary, dtype=complex)
    kraus = [np.sqrt(1 - p) * np.eye(dim, dtype=complex)] if p < 1 else []
    if p > 0:
        kraus += [np.sqrt(p) * np.outer(u[:, k], u[:, k].conj()) for k in range(dim)]
    return QuantumChannel(tuple(kraus))


_ZOO = {
    "identity": (identity_channel, 0, 1, [_dim]),
    "depolarizing": (depolarizing, 1, 2, [_prob, _dim]),
    "bit_flip": (bit_flip, 1, 1, [_prob]),
    "phase_flip": (phase_flip, 1, 1, [_prob]),
    "amplitude_damping": (amplitude_damping, 1, 1, [_prob]),
    "dephasing": (dephasing, 0, 2, [_prob, _dim]),
}

ZOO_NAMES = tuple(_ZOO)


def channel_zoo(name: str, params: Sequence[float] = ()) -> QuantumChannel:
    """Named fixture channels.

    ============================  =========================================
    ``identity [d]``              single Kraus ``I_d`` (default ``d = 2``)
    ``depolarizing p [d]``        ``(1-p) rho + p I/d``
    ``bit_flip p``                ``X`` with probability ``p``
    ``phase_flip p``              ``Z`` with probability ``p``
    ``amplitude_damping g``       decay ``|1> -> |0>`` with probability ``g``
    ``dephasing [p] [d]``         ``(1-p) rho + p diag(rho)`` (default ``p = 1``)
    ============================  =========================================
    """
    if name not in _ZOO:
        raise UnknownChannel(f"unknown channel {name!r}; known: {', '.join(_ZOO)}")
    fn, lo, hi, checks = _ZOO[name]
    params = list(params)
    if not lo <= len(params) <= hi:
        raise ParamOutOfRange(f"{name} takes {lo}..{hi} parameters, got {len(params)}")
    params = [chk(name, v) for chk, v in zip(checks, params)]
    return fn(*params)


def random_channel(dim_in: int, dim_out: int | None = None, n_kraus: int = 2, seed=None) -> QuantumChannel:
    """Kraus operators cut from a Haar-random Stinespring isometry."""
    dim_out = dim_in if dim_out is None else dim_out
    rng = np.random.default_rng(seed)
    u = haar_unitary(dim_out * n_kraus, rng)
    if dim_out * n_kraus < dim_in:
        raise DimMismatch("environment too small for an isometry")
    v = u[:, :dim_in]
    return QuantumChannel(tuple(v[i * dim_out:(i + 1) * dim_out] for i in range(n_kraus)))
