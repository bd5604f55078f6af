"""Von Neumann, Umegaki relative, and finite classical entropies (all in nats)."""

from __future__ import annotations

import math
import warnings

import numpy as np

from .channels import ClassicalChannel, check_distribution
from .errors import DimMismatch, InvalidArgument, LengthMismatch
from .linalg import ZERO_TOL, as_matrix, hermitian_eig
from .states import validate_density

SUPPORT_TOL = 1e-10
BORDERLINE_TOL = 1e-6
CLAMP_TOL = 1e-10


class SupportWarning(UserWarning):
    """Range containment failed only marginally (kernel weight in (1e-10, 1e-6))."""


def _clamp(x: float) -> float:
    # tiny negative values are eigensolver noise
    if -CLAMP_TOL < x < 0:
        return 0.0
    return x


def _xlogx_sum(w: np.ndarray, zero_tol: float = ZERO_TOL) -> np.ndarray:
    """``sum_i w_i ln w_i`` over entries above ``zero_tol`` along the last axis."""
    safe = np.where(w > zero_tol, w, 1.0)
    return np.sum(np.where(w > zero_tol, w * np.log(safe), 0.0), axis=-1)


def von_neumann(rho) -> float:
    rho = validate_density(rho)
    w = np.linalg.eigvalsh(rho.matrix)
    return _clamp(float(-_xlogx_sum(w)))


def shannon(p) -> float:
    p = check_distribution(p)
    return _clamp(float(-_xlogx_sum(p, 0.0)))


class RelativeTo:
    """Cached logarithm and kernel projector of a fixed second argument.

    ``RelativeTo(sigma).value(A)`` evaluates ``tr A (log A - log sigma)`` for
    positive operators ``A`` (trace not required to be 1), returning ``inf``
    when ``tr(A K_sigma)`` exceeds ``support_tol``. The hot loops of the
    supremum searches call :meth:`values` on whole stacks at once.
    """

    def __init__(self, sigma, zero_tol: float = ZERO_TOL, support_tol: float = SUPPORT_TOL):
        s = as_matrix(sigma)
        eig = hermitian_eig(s)
        keep = eig.eigenvalues > zero_tol
        v, k = eig.eigenvectors[:, keep], eig.eigenvectors[:, ~keep]
        self.log = (v * np.log(eig.eigenvalues[keep])) @ v.conj().T
        self.kernel = k @ k.conj().T
        self.dim = s.shape[0]
        self.zero_tol = zero_tol
        self.support_tol = support_tol

    def kernel_weights(self, ops: np.ndarray) -> np.ndarray:
        return np.einsum("nab,ba->n", ops, self.kernel).real

    def values(self, ops: np.ndarray) -> np.ndarray:
        ops = 0.5 * (ops + np.conj(np.swapaxes(ops, -1, -2)))
        w = np.linalg.eigvalsh(ops)
        self_term = _xlogx_sum(w, self.zero_tol)
        cross = np.einsum("nab,ba->n", ops, self.log).real
        out = self_term - cross
        defect = self.kernel_weights(ops)
        return np.where(defect > self.support_tol, np.inf, out)

    def value(self, op) -> float:
        return float(self.values(as_matrix(op)[None])[0])


def support_defect(rho, sigma, zero_tol: float = ZERO_TOL) -> float:
    """Weight ``tr(rho K_sigma)`` of ``rho`` on the kernel of ``sigma``."""
    ref = RelativeTo(sigma, zero_tol)
    return float(ref.kernel_weights(as_matrix(rho)[None])[0])


def _relative_operators(a, b, support_tol: float = SUPPORT_TOL) -> float:
    """``tr A (log A - log B)`` for positive operators of any trace."""
    ref = RelativeTo(b, support_tol=support_tol)
    a = as_matrix(a)
    defect = float(ref.kernel_weights(a[None])[0])
    if support_tol < defect < BORDERLINE_TOL:
        warnings.warn(
            f"support condition fails marginally (kernel weight {defect:.3g})",
            SupportWarning,
            stacklevel=3,
        )
    return float(ref.values(a[None])[0])


def umegaki_relative(rho, sigma, support_tol: float = SUPPORT_TOL) -> float:
    """Relative entropy ``tr rho (log rho - log sigma)``; ``inf`` unless ran(rho) is inside ran(sigma).

    In finite dimensions ranges are closed, so plain range containment is
    tested, through the weight of ``rho`` on the kernel of ``sigma``. A
    :class:`SupportWarning` is issued when that weight is in ``(support_tol, 1e-6)``.
    """
    rho = validate_density(rho)
    sigma = validate_density(sigma)
    if rho.dim != sigma.dim:
        raise DimMismatch(f"dimensions differ: {rho.dim} vs {sigma.dim}")
    return _clamp(_relative_operators(rho.matrix, sigma.matrix, support_tol))


def classical_relative(p, q) -> float:
    p = check_distribution(p, name="p")
    q = check_distribution(q, name="q")
    if p.size != q.size:
        raise LengthMismatch(f"lengths differ: {p.size} vs {q.size}")
    return _clamp(_kl(p, q))


def _kl(p: np.ndarray, q: np.ndarray) -> float:
    mask = p > 0
    if np.any(q[mask] <= 0):
        return math.inf
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


def joint_distribution(mu, t: ClassicalChannel) -> np.ndarray:
    """``Phi[j, k] = T[j, k] mu[k]``: rows index outputs, columns inputs."""
    mu = check_distribution(mu, t.n_in, "input distribution")
    return t.matrix * mu[None, :]


def classical_mutual(mu, t: ClassicalChannel) -> float:
    """Relative entropy of the joint distribution to the product of its marginals."""
    phi = joint_distribution(mu, t)
    mu = check_distribution(mu, t.n_in)
    product = np.outer(t.matrix @ mu, mu)
    return _clamp(_kl(phi.ravel(), product.ravel()))


def relative_entropy_scaling_check(rho, sigma, a: float, b: float) -> tuple[float, float]:
    """Return ``(S(a rho, b sigma), a S(rho, sigma) - a ln(b/a))``.

    The first entry is evaluated directly on the scaled operators.
    """
    if a <= 0 or b <= 0:
        raise InvalidArgument("scale factors must be positive")
    rho = validate_density(rho)
    sigma = validate_density(sigma)
    if rho.dim != sigma.dim:
        raise DimMismatch(f"dimensions differ: {rho.dim} vs {sigma.dim}")
    direct = _relative_operators(a * rho.matrix, b * sigma.matrix)
    identity = a * umegaki_relative(rho, sigma) - a * math.log(b / a)
    return direct, identity


def orthogonal_additivity_check(part1, part2, sigma) -> tuple[float, float]:
    """Return ``(S(A1 + A2, sigma), S(A1, sigma) + S(A2, sigma))`` for positive ``A1 _|_ A2``."""
    a1, a2 = as_matrix(part1), as_matrix(part2)
    s = as_matrix(sigma)
    whole = _relative_operators(a1 + a2, s)
    split = _relative_operators(a1, s) + _relative_operators(a2, s)
    return whole, split
