"""Built-in invariant battery.

Every (dimension, seed) cell draws fresh random instances and checks the
identities and inequalities the library is meant to satisfy. Failures are
reported with a dump of the offending values; nothing raises.

Log-base canary: if any entropy were computed in bits while another stayed in
nats, the identity-channel law would fail and its dump would show
``ratio = 0.693147...`` (or its inverse) between ``mutual`` and ``entropy``.
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import capacity as cap
from . import cqc, entropy, mutual
from .channels import (
    ClassicalChannel,
    QuantumCoding,
    basis_decoding,
    bit_flip,
    channel_zoo,
    depolarizing,
    dephasing,
    embed_classical,
    identity_channel,
    random_channel,
)
from .linalg import haar_unitary
from .scenario import Record, RunReport
from .search import SearchParams
from .states import (
    diagonal_state,
    maximally_mixed,
    random_density,
    random_orthogonal_decomposition,
    refine_to_schatten,
    sample_schatten,
    spectral_decomposition,
    validate_density,
)

TOL = 1e-8
IDENTITY_TOL = 1e-9

# Searches inside the battery only need to respect orderings, not to be tight.
BATTERY_SEARCH = SearchParams(restarts=4, outer_restarts=1, inner_restarts=1, pseudo_iters=100, step_min=1e-3)


def _zoo_channel(d: int, rng: np.random.Generator):
    kind = int(rng.integers(0, 3))
    p = float(rng.uniform(0, 1))
    if kind == 0:
        return f"depolarizing({p:.6g})", depolarizing(p, d)
    if kind == 1:
        return f"dephasing({p:.6g})", dephasing(p, d, unitary=haar_unitary(d, rng))
    k = int(rng.integers(1, 4))
    return f"random_channel(k={k})", random_channel(d, d, k, seed=rng)


def _degenerate_state(d: int, rng: np.random.Generator):
    """State with an exactly repeated eigenvalue."""
    u = haar_unitary(d, rng)
    p = rng.dirichlet(np.ones(d))
    p[1] = p[0]
    p /= p.sum()
    return validate_density((u * p) @ u.conj().T)


def _random_stochastic(n_out: int, n_in: int, rng) -> ClassicalChannel:
    return ClassicalChannel(rng.dirichlet(np.ones(n_out), size=n_in).T)


class _Cell:
    def __init__(self, d: int, seed: int):
        self.d, self.seed = d, seed
        self.id = f"check-d{d}-s{seed:03d}"
        self.records: list[Record] = []

    def check(self, name: str, fn):
        rec = Record(self.id, name)
        t0 = time.perf_counter()
        try:
            checks, dump = fn()
        except Exception as exc:  # an invariant that crashes is a failure, not an abort
            rec.status, rec.error = "error", f"{type(exc).__name__}: {exc}"
        else:
            rec.checks = checks
            if any(not c["passed"] for c in checks):
                rec.components = dump
            rec.value = float(sum(not c["passed"] for c in checks))
        rec.wall_time_s = time.perf_counter() - t0
        self.records.append(rec)


def _le(relation, lhs, rhs, tol=TOL):
    return {"relation": relation, "lhs": float(lhs), "rhs": float(rhs), "passed": bool(lhs <= rhs + tol)}


def _close(relation, a, b, tol):
    diff = abs(a - b) if np.isfinite(a) or np.isfinite(b) else 0.0
    return {"relation": relation, "lhs": float(diff), "rhs": float(tol), "passed": bool(diff <= tol)}


def _ratio(a, b):
    return a / b if b else float("nan")


def run_cell(d: int, seed: int, search: SearchParams = BATTERY_SEARCH, chains: bool | None = None) -> list[Record]:
    cell = _Cell(d, seed)
    rng = np.random.default_rng([d, seed])
    s = SearchParams(**{**search.__dict__, "seed": seed})

    rho = random_density(d, seed=rng)
    sigma = random_density(d, seed=rng)
    ch_name, ch = _zoo_channel(d, rng)

    def identity_law():
        i = mutual.mutual_entropy(rho, identity_channel(d), s).value
        h = entropy.von_neumann(rho)
        return [_close("I(rho; id) = S(rho)", i, h, IDENTITY_TOL)], {
            "mutual": i, "entropy": h, "ratio": _ratio(i, h), "state": rho.matrix}

    def entropy_scale():
        h = entropy.von_neumann(maximally_mixed(d))
        w = np.linalg.eigvalsh(rho.matrix)
        return [
            _close("S(I/d) = ln d", h, math.log(d), 1e-12),
            _close("S(rho) = H(eig rho)", entropy.von_neumann(rho), entropy.shannon(np.clip(w, 0, None)), 1e-10),
        ], {"S(I/d)": h, "ln d": math.log(d), "ratio": _ratio(h, math.log(d))}

    def shannon_inequality():
        i = mutual.mutual_entropy(rho, ch, s).value
        h = entropy.von_neumann(rho)
        return [_le("0 <= I", 0.0, i, 1e-10), _le("I <= S(rho)", i, h)], {
            "channel": ch_name, "mutual": i, "entropy": h, "state": rho.matrix}

    def classical_reduction():
        mu = rng.dirichlet(np.ones(d))
        t = _random_stochastic(d, d, rng)
        q = mutual.mutual_entropy(diagonal_state(mu), embed_classical(t), s).value
        c = entropy.classical_mutual(mu, t)
        return [_close("I(diag mu; T) = I(mu; T)", q, c, TOL)], {
            "mu": mu, "T": t.matrix, "quantum": q, "classical": c}

    def form_equivalence():
        checks, dump = [], {"channel": ch_name}
        for label, state in (("generic", rho), ("degenerate", _degenerate_state(d, rng))):
            e = sample_schatten(spectral_decomposition(state), rng)
            a = mutual.mutual_for_decomposition(state, ch, e)
            b = mutual.compound_form(state, ch, e)
            checks.append(_close(f"term form = compound form ({label})", a, b, TOL))
            dump[label] = {"term_form": a, "compound_form": b}
        return checks, dump

    def coarse_graining():
        i = mutual.mutual_entropy(rho, ch, s).value
        checks, dump = [], {"channel": ch_name, "mutual": i}
        for k in range(3):
            part = random_orthogonal_decomposition(rho, int(rng.integers(1, d + 1)), seed=rng)
            coarse = mutual.mutual_orthogonal(rho, ch, part)
            fine = mutual.mutual_for_decomposition(rho, ch, refine_to_schatten(part))
            checks.append(_le(f"I_f <= I [{k}]", coarse, i))
            checks.append(_le(f"I_f <= refined [{k}]", coarse, fine))
            dump[f"grain{k}"] = {"coarse": coarse, "refined": fine}
        return checks, dump

    def relative_entropy_identities():
        a, b = rng.uniform(0.1, 3.0, size=2)
        direct, ident = entropy.relative_entropy_scaling_check(rho, sigma, a, b)
        u = haar_unitary(d, rng)
        k = max(1, d // 2)
        p1 = (u[:, :k] * rng.uniform(0.1, 1, k)) @ u[:, :k].conj().T
        p2 = (u[:, k:] * rng.uniform(0.1, 1, d - k)) @ u[:, k:].conj().T
        whole, split = (entropy.orthogonal_additivity_check(p1, p2, sigma) if d > 1 else (0.0, 0.0))
        lhs = entropy.umegaki_relative(ch(rho), ch(sigma))
        rhs = entropy.umegaki_relative(rho, sigma)
        return [
            _close("S(a rho, b sigma) scaling", direct, ident, 1e-9),
            _close("orthogonal additivity", whole, split, 1e-9),
            _le("S(L rho, L sigma) <= S(rho, sigma)", lhs, rhs),
        ], {"scaling": (direct, ident, a, b), "additivity": (whole, split),
            "monotonicity": (lhs, rhs), "channel": ch_name}

    def pseudo_domination():
        i = mutual.mutual_entropy(rho, ch, s)
        p = mutual.pseudo_mutual_entropy(rho, ch, s, warm_start=i.witness)
        h = entropy.von_neumann(rho)
        return [_le("I <= I_p", i.value, p.value), _le("0 <= I_p", 0.0, p.value, 1e-10)], {
            "mutual": i.value, "pseudo": p.value, "entropy": h, "channel": ch_name}

    def pipeline_laws():
        n = int(rng.integers(2, d + 2))
        codes = QuantumCoding(tuple(random_density(d, int(rng.integers(1, d + 1)), seed=rng) for _ in range(n)))
        dec = basis_decoding(d, haar_unitary(d, rng))
        pipe = cqc.build_pipeline(codes, ch, dec)
        lam = rng.dirichlet(np.ones(n))
        m = cap.cqc_mutual(pipe, lam)
        hol = cap.holevo_bound(lam, codes, ch)
        cim = mutual.classical_input_mutual(lam, codes, ch)
        shf = mutual.shannon_form(lam, codes, ch)
        via = entropy.classical_mutual(lam, cqc.induced_classical_channel(pipe))
        tr = cqc.trace_pipeline(pipe, lam)
        return [
            _le("cqc_mutual <= holevo", m, hol),
            _le("cqc_mutual <= classical_input_mutual", m, cim),
            _close("classical_input_mutual = shannon_form", cim, shf, TOL),
            _close("cqc_mutual = I(lam; induced)", m, via, 1e-10),
            _close("decoded sums to 1", float(tr.decoded.sum()), 1.0, 1e-10),
            _close("transmitted trace 1", float(np.trace(tr.transmitted.matrix).real), 1.0, 1e-10),
        ], {"cqc_mutual": m, "holevo": hol, "classical_input_mutual": cim,
            "shannon_form": shf, "induced": via, "channel": ch_name}

    def capacity_chains():
        p = float(rng.uniform(0, 0.5))
        chan = bit_flip(p) if seed % 2 else channel_zoo("amplitude_damping", [p])
        codes = QuantumCoding(tuple(random_density(2, 1, seed=rng) for _ in range(2)))
        pipe = cqc.build_pipeline(codes, chan, basis_decoding(2))
        sc = cap.ChainScenario(
            cell.id, pipe, cap.StateSet.full(2), cap.DistributionSet.simplex(2),
            cap.CodingFamily((codes,), (2, 2)), cap.DecodingFamily((pipe.decoding,), 2), s,
        )
        report = cap.verify_chains([sc], tol=TOL)
        return [{"relation": c.relation, "lhs": c.lhs, "rhs": c.rhs, "passed": c.passed}
                for c in report.checks], {"values": report.values[cell.id], "p": p}

    cell.check("identity_law", identity_law)
    cell.check("entropy_scale", entropy_scale)
    cell.check("shannon_inequality", shannon_inequality)
    cell.check("classical_reduction", classical_reduction)
    cell.check("form_equivalence", form_equivalence)
    cell.check("coarse_graining", coarse_graining)
    cell.check("relative_entropy_identities", relative_entropy_identities)
    cell.check("pseudo_domination", pseudo_domination)
    cell.check("pipeline_laws", pipeline_laws)
    if chains is None:
        chains = d == 2
    if chains:
        cell.check("capacity_chains", capacity_chains)
    return cell.records


def check_suite(dims, seeds, search: SearchParams = BATTERY_SEARCH) -> RunReport:
    """Run the invariant battery on every (dimension, seed) pair."""
    records = []
    for d in dims:
        for seed in seeds:
            records.extend(run_cell(int(d), int(seed), search))
    return RunReport(records)
