"""Compound states, the quantum mutual entropy and its variants.

The mutual entropy of a state ``rho`` through a channel is the supremum, over
Schatten decompositions ``rho = sum_k l_k E_k``, of

    sum_k l_k S(ch(E_k), ch(rho)),

which equals the relative entropy of the compound state
``sum_k l_k E_k (x) ch(E_k)`` to ``rho (x) ch(rho)``. The decomposition is
unique unless the spectrum is degenerate; otherwise each degenerate
eigenspace carries a unitary freedom that is searched stochastically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import QuantumChannel, QuantumCoding, check_distribution
from .entropy import RelativeTo, von_neumann
from .errors import DimMismatch, FormMismatch, LengthMismatch
from .linalg import haar_unitary, hermitian_generators, partial_trace, unitary_from_params
from .search import SearchParams, coordinate_ascent, hill_climb
from .states import (
    DensityMatrix,
    OrthogonalDecomposition,
    SchattenDecomposition,
    check_decomposes,
    schatten_decomposition,
    spectral_decomposition,
    validate_density,
)

FORM_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class CompoundState:
    state: DensityMatrix
    decomposition: SchattenDecomposition
    dims: tuple[int, int]

    def input_marginal(self) -> np.ndarray:
        return partial_trace(self.state.matrix, self.dims, keep=0)

    def output_marginal(self) -> np.ndarray:
        return partial_trace(self.state.matrix, self.dims, keep=1)


@dataclass(frozen=True, eq=False)
class PureDecomposition:
    """Non-orthogonal ``rho = sum_k w_k |psi_k><psi_k|``; vectors are columns."""

    weights: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.vectors
        return (v * self.weights) @ v.conj().T


@dataclass(frozen=True, eq=False)
class SearchOutcome:
    """Best value of a supremum search and the decomposition attaining it.

    ``is_exact`` means the search domain was a single point; ``lower_bound``
    means the value is the best one found. ``infinite_index`` names the term
    that made the value infinite, if any.
    """

    value: float
    witness: object
    evaluations: int
    is_exact: bool
    lower_bound: bool
    infinite_index: int | None = None


def _check_dims(rho: DensityMatrix, ch: QuantumChannel) -> None:
    if rho.dim != ch.dim_in:
        raise DimMismatch(f"state dim {rho.dim} != channel input dim {ch.dim_in}")


def _projector_stack(vectors: np.ndarray) -> np.ndarray:
    return np.einsum("ak,bk->kab", vectors, vectors.conj())


def _weighted_terms(weights, outputs, ref: RelativeTo) -> np.ndarray:
    vals = ref.values(outputs)
    with np.errstate(invalid="ignore"):
        return np.where(weights > 0, weights * vals, 0.0)


def _decomposition_value(ch, rho_out_ref, weights, vectors):
    terms = _weighted_terms(weights, ch.apply_many(_projector_stack(vectors)), rho_out_ref)
    return float(terms.sum()), terms


def compound_state(rho, ch: QuantumChannel, e: SchattenDecomposition) -> CompoundState:
    """``sum_k l_k E_k (x) ch(E_k)``."""
    rho = validate_density(rho)
    _check_dims(rho, ch)
    check_decomposes(rho, e.reconstruct())
    projs = _projector_stack(e.vectors)
    outs = ch.apply_many(projs)
    m = sum(w * np.kron(p, o) for w, p, o in zip(e.weights, projs, outs))
    m = 0.5 * (m + m.conj().T)
    return CompoundState(validate_density(m), e, (ch.dim_in, ch.dim_out))


def compound_form(rho, ch: QuantumChannel, e: SchattenDecomposition) -> float:
    """Relative entropy of the compound state to ``rho (x) ch(rho)``."""
    rho = validate_density(rho)
    sigma = compound_state(rho, ch, e)
    product = np.kron(rho.matrix, ch.apply_matrix(rho.matrix))
    return max(RelativeTo(product).value(sigma.state.matrix), 0.0)


def mutual_for_decomposition(
    rho, ch: QuantumChannel, e: SchattenDecomposition, verify: bool = False
) -> float:
    """``sum_k l_k S(ch(E_k), ch(rho))`` for one Schatten decomposition.

    With ``verify=True`` the compound-state relative entropy is computed as
    well, and :class:`FormMismatch` is raised if the two disagree by more
    than 1e-8.
    """
    rho = validate_density(rho)
    _check_dims(rho, ch)
    check_decomposes(rho, e.reconstruct())
    ref = RelativeTo(ch.apply_matrix(rho.matrix))
    value, _ = _decomposition_value(ch, ref, e.weights, e.vectors)
    value = max(value, 0.0)
    if verify:
        other = compound_form(rho, ch, e)
        both_inf = math.isinf(value) and math.isinf(other)
        if not both_inf and not abs(value - other) <= FORM_TOL:
            raise FormMismatch(f"decomposition sum {value!r} != compound form {other!r}")
    return value


def mutual_orthogonal(rho, ch: QuantumChannel, d: OrthogonalDecomposition) -> float:
    """``sum_k l_k S(ch(rho_k), ch(rho))`` over an orthogonal decomposition."""
    rho = validate_density(rho)
    _check_dims(rho, ch)
    check_decomposes(rho, d.reconstruct())
    ref = RelativeTo(ch.apply_matrix(rho.matrix))
    outs = ch.apply_many(np.array([p.matrix for p in d.parts]))
    return max(float(_weighted_terms(np.asarray(d.weights), outs, ref).sum()), 0.0)


def _first_infinite(terms) -> int | None:
    idx = np.flatnonzero(np.isinf(terms))
    return int(idx[0]) if idx.size else None


def mutual_entropy(rho, ch: QuantumChannel, search: SearchParams | None = None) -> SearchOutcome:
    """Supremum of the decomposition sum over all Schatten decompositions of ``rho``.

    A spectrum without degenerate nonzero eigenvalues (at ``search.gap_tol``)
    has a single Schatten decomposition and the result is exact. Otherwise the
    canonical eigenbasis plus ``search.restarts`` Haar-random rotations of
    every degenerate block are each refined by coordinate ascent over the
    block-unitary generators, and the best value is returned as a lower bound.
    """
    search = search or SearchParams()
    rho = validate_density(rho)
    _check_dims(rho, ch)
    spec = spectral_decomposition(rho, search.gap_tol)
    ref = RelativeTo(ch.apply_matrix(rho.matrix))
    blocks = spec.degenerate_blocks()

    def evaluate(rotations):
        e = schatten_decomposition(spec, rotations)
        value, terms = _decomposition_value(ch, ref, e.weights, e.vectors)
        return e, value, terms

    if not blocks:
        e, value, terms = evaluate(None)
        return SearchOutcome(max(value, 0.0), e, 1, True, False, _first_infinite(terms))

    gens = {b: hermitian_generators(spec.bases[b].shape[1]) for b in blocks}
    sizes = [len(gens[b]) for b in blocks]
    splits = np.cumsum(sizes)[:-1]

    def rotations_for(bases, x):
        rots = [None] * len(spec.bases)
        for b, xb in zip(blocks, np.split(x, splits)):
            rots[b] = bases[b] @ unitary_from_params(xb, gens[b])
        return rots

    best = None
    evals = 0
    seeds = search.child_seeds(search.restarts)
    starts = [None] + seeds
    for start in starts:
        if start is None:
            bases = {b: np.eye(spec.bases[b].shape[1], dtype=complex) for b in blocks}
        else:
            rng = np.random.default_rng(start)
            bases = {b: haar_unitary(spec.bases[b].shape[1], rng) for b in blocks}

        def objective(x, bases=bases):
            return evaluate(rotations_for(bases, x))[1]

        x, fx, n = coordinate_ascent(
            objective, np.zeros(sum(sizes)), search.step_init, search.step_min, search.max_sweeps
        )
        evals += n
        if best is None or fx > best[0]:
            best = (fx, rotations_for(bases, x))
        if math.isinf(fx):
            break
    e, value, terms = evaluate(best[1])
    return SearchOutcome(max(value, 0.0), e, evals, False, True, _first_infinite(terms))


def _coded_outputs(probs, codes: QuantumCoding, ch: QuantumChannel):
    lam = check_distribution(probs, codes.n_symbols, "message distribution")
    if codes.dim != ch.dim_in:
        raise DimMismatch(f"code dimension {codes.dim} != channel input dim {ch.dim_in}")
    outs = ch.apply_many(codes.stack())
    mix = np.tensordot(lam, outs, axes=1)
    return lam, outs, 0.5 * (mix + mix.conj().T)


def classical_input_mutual(probs, codes: QuantumCoding, ch: QuantumChannel) -> float:
    """``sum_k l_k S(ch(sigma_k), ch(sigma))`` with ``sigma = sum_k l_k sigma_k``."""
    if len(np.ravel(probs)) != codes.n_symbols:
        raise LengthMismatch(f"{len(np.ravel(probs))} probabilities for {codes.n_symbols} codes")
    lam, outs, mix = _coded_outputs(probs, codes, ch)
    return max(float(_weighted_terms(lam, outs, RelativeTo(mix)).sum()), 0.0)


def shannon_form(probs, codes: QuantumCoding, ch: QuantumChannel) -> float:
    """``S(ch(sigma)) - sum_k l_k S(ch(sigma_k))``."""
    if len(np.ravel(probs)) != codes.n_symbols:
        raise LengthMismatch(f"{len(np.ravel(probs))} probabilities for {codes.n_symbols} codes")
    lam, outs, mix = _coded_outputs(probs, codes, ch)
    average = sum(l * von_neumann(o) for l, o in zip(lam, outs) if l > 0)
    return max(von_neumann(mix) - average, 0.0)


# ------------------------------------------------------- pseudo-mutual entropy


def pure_decomposition_from_isometry(rho, v: np.ndarray, zero_tol: float = 1e-14) -> PureDecomposition:
    """Pure decomposition with unnormalized members ``psi_k = sum_i v[k, i] sqrt(l_i) e_i``.

    ``v`` is an ``m x r`` isometry (``r`` = rank of ``rho``); every pure
    decomposition of ``rho`` into at most ``m`` members arises this way.
    """
    rho = validate_density(rho)
    e = schatten_decomposition(spectral_decomposition(rho))
    psi = (e.vectors * np.sqrt(e.weights)) @ v.T
    w = np.sum(np.abs(psi) ** 2, axis=0)
    keep = w > zero_tol
    return PureDecomposition(w[keep] / w[keep].sum(), psi[:, keep] / np.sqrt(w[keep]))


def _pure_value(ch, ref, dec: PureDecomposition) -> tuple[float, np.ndarray]:
    return _decomposition_value(ch, ref, dec.weights, dec.vectors)


def pseudo_mutual_entropy(
    rho, ch: QuantumChannel, search: SearchParams | None = None, warm_start: SchattenDecomposition | None = None
) -> SearchOutcome:
    """Best-found ``sum_k l_k S(ch(rho_k), ch(rho))`` over pure, not necessarily orthogonal, decompositions.

    Pure members suffice: splitting a mixed member into pure ones can only
    increase the sum (joint convexity). The search runs over ``m x r``
    isometries with ``m = search.m_max`` (default ``dim**2``), starting from
    the mutual-entropy witness (so the result never falls below the mutual
    entropy) and from Haar-random isometries.
    """
    search = search or SearchParams()
    rho = validate_density(rho)
    _check_dims(rho, ch)
    base = schatten_decomposition(spectral_decomposition(rho))
    r = len(base)
    m = max(search.m_max or rho.dim ** 2, r)
    ref = RelativeTo(ch.apply_matrix(rho.matrix))

    if warm_start is None:
        inner = mutual_entropy(rho, ch, search)
        warm_start, evals = inner.witness, inner.evaluations
    else:
        evals = 0
    # rows of the isometry reproducing the warm-start decomposition
    v0 = np.zeros((m, r), dtype=complex)
    v0[: len(warm_start)] = (base.vectors.conj().T @ warm_start.vectors).T

    def objective(v):
        return _pure_value(ch, ref, pure_decomposition_from_isometry(rho, v))[0]

    def propose(v, step, rng):
        h = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        h = (h + h.conj().T) / 2
        h *= step / np.linalg.norm(h)
        w, u = np.linalg.eigh(h)
        return ((u * np.exp(1j * w)) @ u.conj().T) @ v

    best_v, best_f = v0, objective(v0)
    evals += 1
    seeds = search.child_seeds(search.restarts + 1, salt=1)
    for i, seed in enumerate(seeds):
        rng = np.random.default_rng(seed)
        v = v0 if i == 0 else haar_unitary(m, rng)[:, :r]
        v, fv, n = hill_climb(
            objective, v, propose, rng, search.step_init, search.step_min, search.pseudo_iters
        )
        evals += n
        if fv > best_f:
            best_v, best_f = v, fv
    dec = pure_decomposition_from_isometry(rho, best_v)
    value, terms = _pure_value(ch, ref, dec)
    return SearchOutcome(max(value, 0.0), dec, evals, False, True, _first_infinite(terms))
