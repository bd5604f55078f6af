"""Capacity functionals and the inequality chains that relate them.

* :func:`quantum_capacity` and :func:`pseudo_capacity` take the supremum of
  the mutual (pseudo-mutual) entropy over a set of input states.
* :func:`cqc_capacity`, :func:`coding_capacity` and
  :func:`coding_decoding_capacity` take the supremum of the end-to-end
  classical mutual information of a coding/channel/decoding pipeline over
  input distributions, and additionally over codings and decodings.

Searches over non-convex domains report ``lower_bound=True`` together with
the witness that attains the reported value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channels import (
    MeasurementDecoding,
    QuantumChannel,
    QuantumCoding,
    basis_decoding,
    check_distribution,
)
from .cqc import CqcPipeline, transition_matrix
from .entropy import RelativeTo, shannon, von_neumann
from .errors import DimMismatch, EmptyFamily, EmptyStateSet, InvalidArgument, LengthMismatch
from .linalg import haar_unitary, hermitian_generators, unitary_from_params
from .mutual import PureDecomposition, _coded_outputs, mutual_entropy, pseudo_mutual_entropy
from .search import SearchParams, coordinate_ascent, hill_climb
from .states import DensityMatrix, maximally_mixed, validate_density


# ------------------------------------------------------------------ domains


@dataclass(frozen=True, eq=False)
class StateSet:
    """Input states: ``"full"`` (all states of ``dim``), ``"diagonal"`` or ``"explicit"``."""

    kind: str
    dim: int
    members: tuple[DensityMatrix, ...] = ()

    def __post_init__(self):
        if self.kind not in ("full", "diagonal", "explicit"):
            raise InvalidArgument(f"unknown state-set kind {self.kind!r}")
        if self.kind == "explicit":
            members = tuple(validate_density(m) for m in self.members)
            if not members:
                raise EmptyStateSet("explicit state set is empty")
            if any(m.dim != self.dim for m in members):
                raise DimMismatch("state-set members have inconsistent dimensions")
            object.__setattr__(self, "members", members)

    @classmethod
    def full(cls, dim: int) -> "StateSet":
        return cls("full", dim)

    @classmethod
    def diagonal(cls, dim: int) -> "StateSet":
        return cls("diagonal", dim)

    @classmethod
    def explicit(cls, members: Sequence) -> "StateSet":
        members = tuple(validate_density(m) for m in members)
        if not members:
            raise EmptyStateSet("explicit state set is empty")
        return cls("explicit", members[0].dim, members)

    def sup_entropy(self) -> float:
        if self.kind == "explicit":
            return max(von_neumann(m) for m in self.members)
        return math.log(self.dim)


@dataclass(frozen=True, eq=False)
class DistributionSet:
    """Input distributions: the ``"simplex"`` over ``n`` symbols or an ``"explicit"`` list."""

    kind: str
    n: int
    members: tuple[np.ndarray, ...] = ()

    def __post_init__(self):
        if self.kind not in ("simplex", "explicit"):
            raise InvalidArgument(f"unknown distribution-set kind {self.kind!r}")
        if self.kind == "explicit":
            if not self.members:
                raise EmptyStateSet("explicit distribution set is empty")
            members = tuple(check_distribution(m, self.n) for m in self.members)
            object.__setattr__(self, "members", members)

    @classmethod
    def simplex(cls, n: int) -> "DistributionSet":
        return cls("simplex", n)

    @classmethod
    def explicit(cls, members: Sequence) -> "DistributionSet":
        members = [np.asarray(m, dtype=float) for m in members]
        if not members:
            raise EmptyStateSet("explicit distribution set is empty")
        return cls("explicit", len(members[0]), tuple(members))

    def sup_entropy(self) -> float:
        if self.kind == "explicit":
            return max(shannon(m) for m in self.members)
        return math.log(self.n)


@dataclass(frozen=True, eq=False)
class CodingFamily:
    """Codings to optimize over.

    ``members`` is an explicit list. ``constellation = (n_symbols, dim)`` adds
    every assignment of ``n_symbols`` pure states in dimension ``dim``,
    searched stochastically.
    """

    members: tuple[QuantumCoding, ...] = ()
    constellation: tuple[int, int] | None = None

    def __post_init__(self):
        if not self.members and self.constellation is None:
            raise EmptyFamily("coding family is empty")


@dataclass(frozen=True, eq=False)
class DecodingFamily:
    """Decodings to optimize over: explicit POVMs plus, if ``projective`` is a
    dimension, every rank-one projective measurement in that dimension."""

    members: tuple[MeasurementDecoding, ...] = ()
    projective: int | None = None

    def __post_init__(self):
        if not self.members and self.projective is None:
            raise EmptyFamily("decoding family is empty")


@dataclass(eq=False)
class CapacityReport:
    value: float
    witness: object
    lower_bound: bool
    is_exact: bool = False
    evaluations: int = 0
    components: dict = field(default_factory=dict)


# ------------------------------------------------ quantum input capacities


def _softmax(z: np.ndarray) -> np.ndarray:
    e = np.exp(z - z.max())
    return e / e.sum()


class _StateParams:
    """``rho(x) = U diag(softmax(0, x[:d-1])) U^H`` with ``U = frame0 exp(i H(x[d-1:]))``."""

    def __init__(self, dim: int, diagonal: bool):
        self.dim = dim
        self.diagonal = diagonal
        self.gens = [] if diagonal else hermitian_generators(dim)
        self.size = dim - 1 + len(self.gens)

    def state(self, x: np.ndarray, frame0: np.ndarray) -> DensityMatrix:
        d = self.dim
        p = _softmax(np.concatenate([[0.0], x[: d - 1]]))
        u = frame0 if self.diagonal or not self.gens else frame0 @ unitary_from_params(x[d - 1:], self.gens)
        m = (u * p) @ u.conj().T
        m = 0.5 * (m + m.conj().T)
        return validate_density(m / np.trace(m).real)


def _state_search(ch, s0: StateSet, search: SearchParams, inner, salt: int):
    """Maximize ``inner(rho)`` (which returns a SearchOutcome) over a state set."""
    if s0.dim != ch.dim_in:
        raise DimMismatch(f"state set dim {s0.dim} != channel input dim {ch.dim_in}")
    if s0.kind == "explicit":
        outcomes = [inner(m, search) for m in s0.members]
        best = max(range(len(outcomes)), key=lambda i: outcomes[i].value)
        exact = all(o.is_exact for o in outcomes)
        o = outcomes[best]
        return CapacityReport(
            o.value, s0.members[best], not exact, exact,
            sum(x.evaluations for x in outcomes), {"inner": o},
        )

    params = _StateParams(s0.dim, s0.kind == "diagonal")
    inner_search = search.inner()
    evals = 0
    rho = maximally_mixed(s0.dim)
    o = inner(rho, inner_search)
    best = (o.value, rho, o)
    evals += o.evaluations
    for seed in search.child_seeds(search.outer_restarts, salt=salt):
        rng = np.random.default_rng(seed)
        frame0 = np.eye(s0.dim, dtype=complex) if params.diagonal else haar_unitary(s0.dim, rng)
        x0 = rng.standard_normal(params.size)
        cache = {}

        def objective(x, frame0=frame0, cache=cache):
            out = inner(params.state(x, frame0), inner_search)
            cache[x.tobytes()] = out
            return out.value

        x, fx, n = coordinate_ascent(objective, x0, search.step_init, search.step_min, search.max_sweeps)
        evals += sum(o.evaluations for o in cache.values())
        if fx > best[0]:
            best = (fx, params.state(x, frame0), cache[x.tobytes()])
    value, rho, o = best
    return CapacityReport(value, rho, True, False, evals, {"inner": o})


def quantum_capacity(ch: QuantumChannel, s0: StateSet, search: SearchParams | None = None) -> CapacityReport:
    """Supremum of the mutual entropy over the states in ``s0``.

    Explicit sets are maximized exactly; ``"full"`` and ``"diagonal"`` sets are
    searched over (spectrum simplex x unitary frame), starting from the
    maximally mixed state and ``search.outer_restarts`` random states.
    """
    search = search or SearchParams()
    report = _state_search(ch, s0, search, lambda rho, s: mutual_entropy(rho, ch, s), salt=11)
    report.components["mutual_at_witness"] = report.value
    return report


def _ensemble_search(ch, search: SearchParams, warm: np.ndarray, salt: int):
    """Hill climb over pure-state ensembles ``{|psi_k>}`` (columns, unnormalized, total norm 1).

    Over the full state space the pseudo-capacity is the supremum over
    ensembles, since every ensemble is a pure decomposition of its average.
    """
    d, m = warm.shape

    def objective(psi):
        w = np.sum(np.abs(psi) ** 2, axis=0)
        keep = w > 1e-14
        vecs = psi[:, keep] / np.sqrt(w[keep])
        projs = np.einsum("ak,bk->kab", vecs, vecs.conj())
        outs = ch.apply_many(projs)
        ref = RelativeTo(np.tensordot(w[keep], outs, axes=1))
        vals = ref.values(outs)
        with np.errstate(invalid="ignore"):
            return float(np.sum(np.where(w[keep] > 0, w[keep] * vals, 0.0)))

    def propose(psi, step, rng):
        g = rng.standard_normal(psi.shape) + 1j * rng.standard_normal(psi.shape)
        y = psi + step * g / np.linalg.norm(g)
        return y / np.linalg.norm(y)

    starts = [warm]
    seeds = search.child_seeds(search.outer_restarts + 1, salt=salt)
    best, evals = (-math.inf, None), 0
    for i, seed in enumerate(seeds):
        rng = np.random.default_rng(seed)
        if i == 0:
            psi0 = warm
        else:
            psi0 = rng.standard_normal((d, m)) + 1j * rng.standard_normal((d, m))
            psi0 /= np.linalg.norm(psi0)
        psi, f, n = hill_climb(
            objective, psi0, propose, rng, search.step_init, search.step_min, search.pseudo_iters * 4
        )
        evals += n
        if f > best[0]:
            best = (f, psi)
    return best[0], best[1], evals


def pseudo_capacity(
    ch: QuantumChannel,
    s0: StateSet,
    search: SearchParams | None = None,
    quantum: CapacityReport | None = None,
) -> CapacityReport:
    """Supremum of the pseudo-mutual entropy over ``s0``; always a lower bound.

    The search is warm-started at the witness of :func:`quantum_capacity`
    (computed if not given), so the result is never below it. For the full
    state space the search runs directly over pure-state ensembles; other
    sets nest :func:`pseudo_mutual_entropy` inside the state search.
    """
    search = search or SearchParams()
    quantum = quantum or quantum_capacity(ch, s0, search)
    start = quantum.witness
    witness_dec = quantum.components["inner"].witness
    warm = pseudo_mutual_entropy(start, ch, search.inner(), warm_start=witness_dec)
    best = CapacityReport(warm.value, start, True, False, warm.evaluations, {"inner": warm})

    if s0.kind == "full":
        m = max(search.m_max or s0.dim ** 2, len(witness_dec))
        psi0 = np.zeros((s0.dim, m), dtype=complex)
        psi0[:, : len(witness_dec)] = witness_dec.vectors * np.sqrt(witness_dec.weights)
        value, psi, evals = _ensemble_search(ch, search, psi0, salt=12)
        best.evaluations += evals
        if value > best.value:
            w = np.sum(np.abs(psi) ** 2, axis=0)
            keep = w > 1e-14
            dec = PureDecomposition(w[keep] / w[keep].sum(), psi[:, keep] / np.sqrt(w[keep]))
            rho = validate_density(dec.reconstruct())
            best = CapacityReport(value, rho, True, False, best.evaluations, {"inner": dec})
    elif s0.kind == "diagonal":
        report = _state_search(ch, s0, search, lambda rho, s: pseudo_mutual_entropy(rho, ch, s), salt=12)
        if report.value > best.value:
            report.evaluations += best.evaluations
            best = report
    else:
        for rho in s0.members:
            o = pseudo_mutual_entropy(rho, ch, search)
            best.evaluations += o.evaluations
            if o.value > best.value:
                best = CapacityReport(o.value, rho, True, False, best.evaluations, {"inner": o})
    best.components["quantum_capacity"] = quantum.value
    return best


# --------------------------------------------------- classical-input capacities


def _column_divergences(t: np.ndarray, q: np.ndarray) -> np.ndarray:
    """``D(T_k || q)`` for every column ``k``; ``inf`` where ``q`` misses a column's support."""
    pos = t > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(pos, t * np.log(np.where(pos, t, 1.0) / q[:, None]), 0.0)
    d = terms.sum(axis=0)
    missing = np.any(pos & (q[:, None] <= 0), axis=0)
    return np.where(missing, np.inf, d)


def blahut_arimoto(t: np.ndarray, tol: float = 1e-9, max_iter: int = 20000, p0=None):
    """Capacity of a column-stochastic matrix by alternating maximization.

    Stops when the optimality gap ``max_k D(T_k || T p) - I(p)`` is at most
    ``tol``; that gap also bounds the distance to the capacity.

    Returns ``(p, value, gap, iterations)``.
    """
    n = t.shape[1]
    p = np.full(n, 1.0 / n) if p0 is None else np.asarray(p0, dtype=float)
    pos = t > 0
    tlogt = np.where(pos, t * np.log(np.where(pos, t, 1.0)), 0.0).sum(axis=0)
    gap, value = math.inf, 0.0
    it = 0
    for it in range(1, max_iter + 1):
        q = t @ p
        d = tlogt - t.T @ np.log(np.where(q > 0, q, 1.0))
        value = float(p @ d)
        top = d.max()
        gap = float(top - value)
        if gap <= tol:
            break
        p = p * np.exp(d - top)
        p /= p.sum()
    return p, max(value, 0.0), gap, it


def _mutual_from_transition(t: np.ndarray, lam: np.ndarray) -> float:
    d = _column_divergences(t, t @ lam)
    with np.errstate(invalid="ignore"):
        return max(float(np.sum(np.where(lam > 0, lam * d, 0.0))), 0.0)


def cqc_mutual(pipe: CqcPipeline, probs) -> float:
    """``sum_k l_k S(D(ch(sigma_k)), D(ch(sigma)))`` with Shannon relative entropies."""
    lam = check_distribution(probs, name="message distribution")
    if lam.size != pipe.n_symbols:
        raise LengthMismatch(f"{lam.size} probabilities for {pipe.n_symbols} symbols")
    return _mutual_from_transition(transition_matrix(pipe), lam)


def holevo_bound(probs, codes: QuantumCoding, ch: QuantumChannel) -> float:
    """``S(ch(sigma)) - sum_k l_k S(ch(sigma_k))``."""
    if len(np.ravel(probs)) != codes.n_symbols:
        raise LengthMismatch(f"{len(np.ravel(probs))} probabilities for {codes.n_symbols} codes")
    lam, outs, mix = _coded_outputs(probs, codes, ch)
    average = sum(l * von_neumann(o) for l, o in zip(lam, outs) if l > 0)
    return max(von_neumann(mix) - average, 0.0)


def _capacity_of_transition(t, p0: DistributionSet, search: SearchParams, start=None):
    if p0.n != t.shape[1]:
        raise LengthMismatch(f"distribution set over {p0.n} symbols, pipeline has {t.shape[1]}")
    if p0.kind == "explicit":
        values = [_mutual_from_transition(t, m) for m in p0.members]
        k = int(np.argmax(values))
        return values[k], p0.members[k], True, 0.0, len(values)
    p, value, gap, it = blahut_arimoto(t, search.ascent_tol, search.ascent_max_iter, start)
    return value, p, gap <= search.ascent_tol, gap, it


def cqc_capacity(pipe: CqcPipeline, p0: DistributionSet, search: SearchParams | None = None) -> CapacityReport:
    """Supremum of :func:`cqc_mutual` over ``p0``.

    The pipeline is a finite classical channel, so the objective is concave in
    the input distribution; on the full simplex the ascent is run to an
    optimality gap of ``search.ascent_tol`` and the result is then exact.
    """
    search = search or SearchParams()
    t = transition_matrix(pipe)
    value, lam, exact, gap, it = _capacity_of_transition(t, p0, search)
    components = {
        "cqc_mutual_at_witness": value,
        "holevo_bound_at_witness": holevo_bound(lam, pipe.coding, pipe.channel),
        "optimality_gap": gap,
    }
    return CapacityReport(value, np.asarray(lam), not exact, exact, it, components)


class _PipelineSpace:
    """Parameter vector ``[code amplitudes | decoding-frame generators]``.

    The code part is present when searching pure constellations of
    ``(n_symbols, dim)`` states, the frame part when searching rank-one
    projective decodings; otherwise the fixed coding/decoding is used.
    """

    def __init__(self, ch, constellation, projective, fixed_coding=None, fixed_decoding=None):
        self.ch = ch
        self.constellation = constellation
        self.projective = projective
        self.fixed_coding = fixed_coding
        self.fixed_decoding = fixed_decoding
        if constellation is not None and constellation[1] != ch.dim_in:
            raise DimMismatch(f"constellation dim {constellation[1]} != channel input dim {ch.dim_in}")
        if projective is not None and projective != ch.dim_out:
            raise DimMismatch(f"projective decoding dim {projective} != channel output dim {ch.dim_out}")
        self.n_code = 0 if constellation is None else 2 * constellation[0] * constellation[1]
        self.gens = [] if projective is None or projective < 2 else hermitian_generators(projective)

    @property
    def size(self) -> int:
        return self.n_code + len(self.gens)

    def code_stack(self, x):
        if self.constellation is None:
            return self.fixed_coding.stack()
        n, d = self.constellation
        z = x[: self.n_code].reshape(2, n, d)
        v = z[0] + 1j * z[1]
        v = v / np.linalg.norm(v, axis=1, keepdims=True)
        return np.einsum("ka,kb->kab", v, v.conj())

    def frame(self, x, frame0):
        if not self.gens:
            return frame0
        return frame0 @ unitary_from_params(x[self.n_code:], self.gens)

    def povm_stack(self, x, frame0):
        if self.projective is None:
            return np.asarray(self.fixed_decoding.povm)
        u = self.frame(x, frame0)
        return np.einsum("aj,bj->jab", u, u.conj())

    def transition(self, x, frame0):
        outs = self.ch.apply_many(self.code_stack(x))
        t = np.clip(np.einsum("jab,nba->jn", self.povm_stack(x, frame0), outs).real, 0.0, None)
        return t / t.sum(axis=0, keepdims=True)

    def build(self, x, frame0) -> CqcPipeline:
        if self.constellation is None:
            codes = self.fixed_coding
        else:
            codes = QuantumCoding(tuple(validate_density(s) for s in self.code_stack(x)))
        if self.projective is None:
            dec = self.fixed_decoding
        else:
            dec = basis_decoding(self.projective, self.frame(x, frame0))
        return CqcPipeline(codes, self.ch, dec)

    def encode(self, pipe: CqcPipeline):
        """``(x, frame0)`` reproducing an explicit pipeline, or ``None`` if it lies outside the space."""
        code = np.zeros(0)
        if self.constellation is not None:
            n, d = self.constellation
            if pipe.coding.n_symbols != n or pipe.coding.dim != d:
                return None
            vecs = []
            for s in pipe.coding.code_states:
                w, v = np.linalg.eigh(s.matrix)
                if w[-1] < 1 - 1e-9:
                    return None
                vecs.append(v[:, -1])
            v = np.array(vecs)
            code = np.concatenate([v.real.ravel(), v.imag.ravel()])
        elif pipe.coding is not self.fixed_coding:
            return None
        frame0 = None
        if self.projective is not None:
            dec = pipe.decoding
            if dec.n_outcomes != dec.dim_in:
                return None
            cols = []
            for m in dec.povm:
                w, v = np.linalg.eigh(m)
                if abs(w[-1] - 1) > 1e-9 or (dec.dim_in > 1 and abs(w[-2]) > 1e-9):
                    return None
                cols.append(v[:, -1])
            frame0 = np.array(cols).T
        elif pipe.decoding is not self.fixed_decoding:
            return None
        return np.concatenate([code, np.zeros(len(self.gens))]), frame0


def _parametric_search(space: _PipelineSpace, p0, search, warm, salt):
    """Coordinate ascent over a pipeline space from the warm start and random starts.

    Returns ``(value, pipeline, evaluations)``; ``value`` is ``-inf`` if the
    space has no parameters.
    """
    # inside the objective a short warm-started ascent suffices: I(p) at any p is a
    # lower bound, and the chosen pipeline is re-solved to full tolerance below
    fast = SearchParams(**{**search.__dict__, "ascent_tol": max(search.ascent_tol, 1e-7),
                           "ascent_max_iter": min(search.ascent_max_iter, 200)})
    starts = []
    if warm is not None:
        enc = space.encode(warm)
        if enc is not None:
            starts.append(enc)
    for seed in search.child_seeds(search.outer_restarts, salt=salt):
        rng = np.random.default_rng(seed)
        x0 = np.concatenate([rng.standard_normal(space.n_code), np.zeros(len(space.gens))])
        frame0 = None if space.projective is None else haar_unitary(space.projective, rng)
        starts.append((x0, frame0))
    best, evals = (-math.inf, None), 0
    for x0, frame0 in starts:
        last = [None]

        def objective(x, frame0=frame0, last=last):
            # warm-start the ascent from the previous optimum; neighbours differ little
            value, p, *_ = _capacity_of_transition(space.transition(x, frame0), p0, fast, last[0])
            if p0.kind == "simplex":
                last[0] = np.clip(p, 1e-12, None) / np.clip(p, 1e-12, None).sum()
            return value

        x, _, n = coordinate_ascent(objective, x0, search.step_init, search.step_min, search.max_sweeps)
        evals += n
        pipe = space.build(x, frame0)
        v = _capacity_of_transition(transition_matrix(pipe), p0, search)[0]
        if v > best[0]:
            best = (v, pipe)
    return best[0], best[1], evals


def _report(pipe, p0, search, evals, exhaustive):
    inner = cqc_capacity(pipe, p0, search)
    components = dict(inner.components)
    components["pipeline"] = pipe
    exact = exhaustive and inner.is_exact
    return CapacityReport(
        inner.value, (pipe.coding, inner.witness), not exact, exact, evals + inner.evaluations, components
    )


def coding_capacity(
    ch: QuantumChannel,
    dec: MeasurementDecoding,
    p0: DistributionSet,
    coding_family: CodingFamily,
    search: SearchParams | None = None,
) -> CapacityReport:
    """Supremum of :func:`cqc_capacity` over a family of codings for a fixed decoding.

    Explicit members are scored exactly; a constellation family is then
    searched from the best matching member and ``search.outer_restarts``
    random constellations.
    """
    search = search or SearchParams()
    best, evals = None, 0
    for coding in coding_family.members:
        pipe = CqcPipeline(coding, ch, dec)
        v = _capacity_of_transition(transition_matrix(pipe), p0, search)[0]
        evals += 1
        if best is None or v > best[0]:
            best = (v, pipe)
    if coding_family.constellation is not None:
        space = _PipelineSpace(ch, coding_family.constellation, None, fixed_decoding=dec)
        v, pipe, n = _parametric_search(space, p0, search, None if best is None else best[1], salt=21)
        evals += n
        if best is None or v > best[0]:
            best = (v, pipe)
    return _report(best[1], p0, search, evals, coding_family.constellation is None)


def coding_decoding_capacity(
    ch: QuantumChannel,
    p0: DistributionSet,
    coding_family: CodingFamily,
    decoding_family: DecodingFamily,
    search: SearchParams | None = None,
) -> CapacityReport:
    """Supremum of :func:`cqc_capacity` over codings and decodings.

    Every explicit decoding is scored through :func:`coding_capacity` with the
    same search parameters, so the result is never below any of those. A
    projective decoding family is then searched jointly with the codings,
    warm-started at the best pair found so far.
    """
    search = search or SearchParams()
    best, evals = None, 0
    for dec in decoding_family.members:
        r = coding_capacity(ch, dec, p0, coding_family, search)
        evals += r.evaluations
        if best is None or r.value > best.value:
            best = r
    if decoding_family.projective is not None:
        warm = None if best is None else best.components["pipeline"]
        if coding_family.constellation is not None:
            spaces = [_PipelineSpace(ch, coding_family.constellation, decoding_family.projective)]
        else:
            spaces = [
                _PipelineSpace(ch, None, decoding_family.projective, fixed_coding=c)
                for c in coding_family.members
            ]
        for i, space in enumerate(spaces):
            v, pipe, n = _parametric_search(space, p0, search, warm, salt=31 + i)
            evals += n
            if best is None or v > best.value:
                best = _report(pipe, p0, search, 0, False)
    best.evaluations = evals
    if decoding_family.projective is not None or coding_family.constellation is not None:
        best.lower_bound, best.is_exact = True, False
    return best


# ------------------------------------------------------------------- chains


@dataclass(frozen=True, eq=False)
class ChainScenario:
    """Everything needed to evaluate both capacity chains on one channel.

    The coding family always contains the pipeline's coding and the decoding
    family its decoding, so the chain links compare nested suprema.
    """

    id: str
    pipeline: CqcPipeline
    states: StateSet
    distributions: DistributionSet
    coding_family: CodingFamily | None = None
    decoding_family: DecodingFamily | None = None
    search: SearchParams = field(default_factory=SearchParams)
    probe_distributions: tuple = ()


@dataclass(frozen=True)
class ChainCheck:
    scenario: str
    relation: str
    lhs: float
    rhs: float
    passed: bool


@dataclass
class ChainReport:
    checks: list[ChainCheck]
    values: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[ChainCheck]:
        return [c for c in self.checks if not c.passed]


def _link(checks, sid, relation, lhs, rhs, tol):
    checks.append(ChainCheck(sid, relation, float(lhs), float(rhs), bool(lhs <= rhs + tol)))


def evaluate_scenario(sc: ChainScenario) -> dict:
    pipe, ch, s = sc.pipeline, sc.pipeline.channel, sc.search
    coding_family = sc.coding_family or CodingFamily((pipe.coding,))
    if pipe.coding not in coding_family.members:
        coding_family = CodingFamily((pipe.coding,) + coding_family.members, coding_family.constellation)
    decoding_family = sc.decoding_family or DecodingFamily((pipe.decoding,))
    if pipe.decoding not in decoding_family.members:
        decoding_family = DecodingFamily((pipe.decoding,) + decoding_family.members, decoding_family.projective)
    q = quantum_capacity(ch, sc.states, s)
    return {
        "C_S0": q.value,
        "Cp_S0": pseudo_capacity(ch, sc.states, s, quantum=q).value,
        "sup_S_S0": sc.states.sup_entropy(),
        "C_P0": cqc_capacity(pipe, sc.distributions, s).value,
        "Cc_P0": coding_capacity(ch, pipe.decoding, sc.distributions, coding_family, s).value,
        "Ccd_P0": coding_decoding_capacity(ch, sc.distributions, coding_family, decoding_family, s).value,
        "sup_H_P0": sc.distributions.sup_entropy(),
    }


def verify_chains(scenarios: Sequence[ChainScenario], tol: float = 1e-8) -> ChainReport:
    """Evaluate every functional and check both capacity chains and Holevo domination.

    Failures are report entries, never exceptions.
    """
    checks, values = [], {}
    for sc in sorted(scenarios, key=lambda s: s.id):
        v = evaluate_scenario(sc)
        values[sc.id] = v
        _link(checks, sc.id, "0 <= C(S0)", 0.0, v["C_S0"], tol)
        _link(checks, sc.id, "C(S0) <= Cp(S0)", v["C_S0"], v["Cp_S0"], tol)
        _link(checks, sc.id, "Cp(S0) <= sup S(S0)", v["Cp_S0"], v["sup_S_S0"], tol)
        _link(checks, sc.id, "0 <= C(P0)", 0.0, v["C_P0"], tol)
        _link(checks, sc.id, "C(P0) <= Cc(P0)", v["C_P0"], v["Cc_P0"], tol)
        _link(checks, sc.id, "Cc(P0) <= Ccd(P0)", v["Cc_P0"], v["Ccd_P0"], tol)
        _link(checks, sc.id, "Ccd(P0) <= sup H(P0)", v["Ccd_P0"], v["sup_H_P0"], tol)
        probes = list(sc.probe_distributions) or [np.full(sc.pipeline.n_symbols, 1.0 / sc.pipeline.n_symbols)]
        for i, lam in enumerate(probes):
            h = holevo_bound(lam, sc.pipeline.coding, sc.pipeline.channel)
            m = cqc_mutual(sc.pipeline, lam)
            _link(checks, sc.id, f"cqc_mutual <= holevo [{i}]", m, h, tol)
    return ChainReport(checks, values)
