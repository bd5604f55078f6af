"""Declarative scenario files and their execution.

A scenario is a JSON object::

    {
      "id": "bsc",
      "seed": 0,
      "search": {"restarts": 32, "outer_restarts": 8},
      "channel": {"zoo": "bit_flip", "params": [0.1]},
      "state": {"maximally_mixed": 2},
      "ensemble": [0.5, 0.5],
      "coding": [{"pure": [1, 0]}, {"pure": [0, 1]}],
      "decoding": {"basis": 2},
      "computations": ["mutual_entropy", {"name": "cqc_capacity"}]
    }

Matrices are row-major nested arrays; a complex entry is either a number or
a two-element ``[re, im]`` array. States may also be given as
``{"maximally_mixed": d}``, ``{"pure": vector}``, ``{"diag": probs}``,
``{"random": {"dim": d, "rank": r, "seed": s}}`` or ``{"matrix": M}``.
Channels are ``{"zoo": name, "params": [...]}``, ``{"kraus": [M, ...]}`` or
``{"choi": M, "dim_in": a, "dim_out": b}``. Decodings are
``{"basis": d}``, ``{"trivial": d}`` or ``{"povm": [M, ...]}``.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, fields, replace
from typing import Any

import numpy as np

from . import capacity as cap
from . import cqc, entropy, mutual
from .channels import (
    MeasurementDecoding,
    QuantumChannel,
    QuantumCoding,
    basis_decoding,
    channel_zoo,
    check_distribution,
    from_choi,
    trivial_decoding,
)
from .errors import ParseError, QmutualError, ValidationError
from .search import SearchParams
from .states import (
    DensityMatrix,
    OrthogonalDecomposition,
    SchattenDecomposition,
    diagonal_state,
    maximally_mixed,
    pure_state,
    random_density,
    validate_density,
)

COMPUTATIONS = (
    "von_neumann",
    "umegaki_relative",
    "mutual_entropy",
    "pseudo_mutual_entropy",
    "quantum_capacity",
    "pseudo_capacity",
    "classical_input_mutual",
    "shannon_form",
    "holevo_bound",
    "cqc_mutual",
    "cqc_capacity",
    "coding_capacity",
    "coding_decoding_capacity",
    "induced_classical_channel",
    "verify_chains",
)

_REQUIRES = {
    "von_neumann": ("state",),
    "umegaki_relative": ("state", "reference"),
    "mutual_entropy": ("state", "channel"),
    "pseudo_mutual_entropy": ("state", "channel"),
    "quantum_capacity": ("channel",),
    "pseudo_capacity": ("channel",),
    "classical_input_mutual": ("ensemble", "coding", "channel"),
    "shannon_form": ("ensemble", "coding", "channel"),
    "holevo_bound": ("ensemble", "coding", "channel"),
    "cqc_mutual": ("ensemble", "coding", "channel", "decoding"),
    "cqc_capacity": ("coding", "channel", "decoding"),
    "coding_capacity": ("coding", "channel", "decoding"),
    "coding_decoding_capacity": ("coding", "channel", "decoding"),
    "induced_classical_channel": ("coding", "channel", "decoding"),
    "verify_chains": ("coding", "channel", "decoding"),
}

_SEARCH_FIELDS = {f.name for f in fields(SearchParams)}


# ------------------------------------------------------------ normalization


def _complex(x, where):
    if isinstance(x, bool):
        raise ValidationError(where, "expected a number")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in x
    ):
        return complex(x[0], x[1])
    raise ValidationError(where, f"expected a number or [re, im], got {x!r}")


def _matrix(x, where) -> np.ndarray:
    if not isinstance(x, list) or not x or not all(isinstance(r, list) for r in x):
        raise ValidationError(where, "expected a non-empty nested array")
    width = len(x[0])
    if any(len(r) != width for r in x):
        raise ValidationError(where, "rows have different lengths")
    return np.array(
        [[_complex(v, f"{where}[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(x)]
    )


def _vector(x, where) -> np.ndarray:
    if not isinstance(x, list) or not x:
        raise ValidationError(where, "expected a non-empty array")
    return np.array([_complex(v, f"{where}[{i}]") for i, v in enumerate(x)])


def _real_vector(x, where) -> list[float]:
    if not isinstance(x, list) or not x:
        raise ValidationError(where, "expected a non-empty array of numbers")
    out = []
    for i, v in enumerate(x):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValidationError(f"{where}[{i}]", f"expected a number, got {v!r}")
        out.append(float(v))
    return out


def _encode_complex(z: complex):
    return [float(z.real), float(z.imag)]


def _encode_matrix(m: np.ndarray):
    return [[_encode_complex(v) for v in row] for row in np.asarray(m)]


def _int(x, where, lo=1):
    if isinstance(x, bool) or not isinstance(x, int) or x < lo:
        raise ValidationError(where, f"expected an integer >= {lo}, got {x!r}")
    return x


def _one_key(spec, where, allowed):
    if not isinstance(spec, dict):
        raise ValidationError(where, f"expected an object with one of {allowed}")
    keys = [k for k in allowed if k in spec]
    if len(keys) != 1:
        raise ValidationError(where, f"expected exactly one of {allowed}, got {sorted(spec)}")
    return keys[0]


def _norm_state(spec, where):
    if isinstance(spec, list):
        spec = {"matrix": spec}
    key = _one_key(spec, where, ("matrix", "maximally_mixed", "pure", "diag", "random"))
    val = spec[key]
    if key == "matrix":
        m = _matrix(val, f"{where}.matrix")
        obj = _validated(lambda: validate_density(m), f"{where}.matrix")
        return {"matrix": _encode_matrix(m)}, obj
    if key == "maximally_mixed":
        d = _int(val, f"{where}.maximally_mixed")
        return {"maximally_mixed": d}, maximally_mixed(d)
    if key == "pure":
        v = _vector(val, f"{where}.pure")
        if np.linalg.norm(v) == 0:
            raise ValidationError(f"{where}.pure", "zero vector")
        return {"pure": [_encode_complex(z) for z in v]}, pure_state(v)
    if key == "diag":
        p = _real_vector(val, f"{where}.diag")
        obj = _validated(lambda: diagonal_state(p), f"{where}.diag")
        return {"diag": p}, obj
    if not isinstance(val, dict):
        raise ValidationError(f"{where}.random", "expected {dim, rank, seed}")
    d = _int(val.get("dim"), f"{where}.random.dim")
    r = _int(val.get("rank", d), f"{where}.random.rank")
    s = _int(val.get("seed", 0), f"{where}.random.seed", lo=0)
    obj = _validated(lambda: random_density(d, r, s), f"{where}.random")
    return {"random": {"dim": d, "rank": r, "seed": s}}, obj


def _validated(fn, where):
    try:
        return fn()
    except QmutualError as exc:
        raise ValidationError(where, str(exc)) from exc


def _norm_channel(spec, where="channel"):
    if isinstance(spec, str):
        name, _, rest = spec.partition(":")
        params = [float(v) for v in rest.split(",") if v.strip()] if rest else []
        spec = {"zoo": name, "params": params}
    key = _one_key(spec, where, ("zoo", "kraus", "choi"))
    if key == "zoo":
        name = spec["zoo"]
        params = _real_vector(spec["params"], f"{where}.params") if spec.get("params") else []
        obj = _validated(lambda: channel_zoo(name, params), f"{where}.zoo")
        return {"zoo": name, "params": params}, obj
    if key == "kraus":
        ks = spec["kraus"]
        if not isinstance(ks, list) or not ks:
            raise ValidationError(f"{where}.kraus", "expected a non-empty list of matrices")
        mats = [_matrix(k, f"{where}.kraus[{i}]") for i, k in enumerate(ks)]
        if len({m.shape for m in mats}) != 1:
            raise ValidationError(f"{where}.kraus", "Kraus operators have different shapes")
        defect = float(np.linalg.norm(sum(m.conj().T @ m for m in mats) - np.eye(mats[0].shape[1])))
        if defect > 1e-10:
            raise ValidationError(f"{where}.kraus", "trace preservation violated", defect)
        return {"kraus": [_encode_matrix(m) for m in mats]}, QuantumChannel(tuple(mats))
    c = _matrix(spec["choi"], f"{where}.choi")
    din = _int(spec.get("dim_in"), f"{where}.dim_in")
    dout = _int(spec.get("dim_out"), f"{where}.dim_out")
    obj = _validated(lambda: from_choi(c, din, dout), f"{where}.choi")
    return {"choi": _encode_matrix(c), "dim_in": din, "dim_out": dout}, obj


def _norm_decoding(spec, where="decoding"):
    key = _one_key(spec, where, ("basis", "trivial", "povm"))
    if key == "basis":
        d = _int(spec["basis"], f"{where}.basis")
        return {"basis": d}, basis_decoding(d)
    if key == "trivial":
        d = _int(spec["trivial"], f"{where}.trivial")
        return {"trivial": d}, trivial_decoding(d)
    ms = spec["povm"]
    if not isinstance(ms, list) or not ms:
        raise ValidationError(f"{where}.povm", "expected a non-empty list of matrices")
    mats = [_matrix(m, f"{where}.povm[{i}]") for i, m in enumerate(ms)]
    obj = _validated(lambda: MeasurementDecoding(tuple(mats)), f"{where}.povm")
    return {"povm": [_encode_matrix(m) for m in mats]}, obj


def _norm_search(spec, where="search"):
    if spec is None:
        return {}
    if not isinstance(spec, dict):
        raise ValidationError(where, "expected an object")
    unknown = set(spec) - _SEARCH_FIELDS
    if unknown:
        raise ValidationError(where, f"unknown search fields {sorted(unknown)}")
    out = {}
    for k, v in spec.items():
        default = getattr(SearchParams(), k)
        if isinstance(default, int) or (k == "m_max"):
            if v is None and k == "m_max":
                out[k] = None
                continue
            out[k] = _int(v, f"{where}.{k}", lo=0)
        else:
            if isinstance(v, bool) or not isinstance(v, (int, float)) or v <= 0:
                raise ValidationError(f"{where}.{k}", f"expected a positive number, got {v!r}")
            out[k] = float(v)
    return dict(sorted(out.items()))


def _norm_computation(c, i):
    where = f"computations[{i}]"
    if isinstance(c, str):
        c = {"name": c}
    if not isinstance(c, dict) or "name" not in c:
        raise ValidationError(where, "expected a name or an object with 'name'")
    if c["name"] not in COMPUTATIONS:
        raise ValidationError(f"{where}.name", f"unknown computation {c['name']!r}")
    return dict(sorted(c.items()))


# ------------------------------------------------------------------ scenario


@dataclass(eq=False)
class Scenario:
    """Normalized scenario specification plus the objects it resolves to."""

    id: str
    seed: int
    search: dict
    computations: list
    specs: dict
    objects: dict = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def search_params(self, seed: int | None = None) -> SearchParams:
        return SearchParams(**{**self.search, "seed": self.seed if seed is None else seed})

    def to_dict(self) -> dict:
        out = {"id": self.id, "seed": self.seed, "search": self.search, "computations": self.computations}
        out.update(self.specs)
        return out


def serialize_scenario(sc: Scenario) -> str:
    return json.dumps(sc.to_dict(), sort_keys=True, indent=2) + "\n"


def scenario_from_dict(raw: dict) -> Scenario:
    if not isinstance(raw, dict):
        raise ValidationError("<root>", "scenario must be a JSON object")
    known = {"id", "seed", "search", "computations", "channel", "state", "reference",
             "ensemble", "coding", "decoding"}
    unknown = set(raw) - known
    if unknown:
        raise ValidationError("<root>", f"unknown fields {sorted(unknown)}")
    sid = raw.get("id", "scenario")
    if not isinstance(sid, str) or not sid:
        raise ValidationError("id", "expected a non-empty string")
    seed = _int(raw.get("seed", 0), "seed", lo=0)
    search = _norm_search(raw.get("search"))
    comps = raw.get("computations")
    if not isinstance(comps, list) or not comps:
        raise ValidationError("computations", "expected a non-empty list")
    comps = [_norm_computation(c, i) for i, c in enumerate(comps)]

    specs, objects = {}, {}
    if "channel" in raw:
        specs["channel"], objects["channel"] = _norm_channel(raw["channel"])
    for key in ("state", "reference"):
        if key in raw:
            specs[key], objects[key] = _norm_state(raw[key], key)
    if "coding" in raw:
        codes = raw["coding"]
        if not isinstance(codes, list) or not codes:
            raise ValidationError("coding", "expected a non-empty list of states")
        pairs = [_norm_state(s, f"coding[{i}]") for i, s in enumerate(codes)]
        specs["coding"] = [p[0] for p in pairs]
        objects["coding"] = _validated(lambda: QuantumCoding(tuple(p[1] for p in pairs)), "coding")
    if "decoding" in raw:
        specs["decoding"], objects["decoding"] = _norm_decoding(raw["decoding"])
    if "ensemble" in raw:
        lam = _real_vector(raw["ensemble"], "ensemble")
        _validated(lambda: check_distribution(lam, name="ensemble"), "ensemble")
        specs["ensemble"] = lam
        objects["ensemble"] = np.array(lam)

    _chain_check(objects)
    for i, c in enumerate(comps):
        missing = [k for k in _REQUIRES[c["name"]] if k not in objects]
        if missing:
            raise ValidationError(f"computations[{i}]", f"{c['name']} needs {', '.join(missing)}")
    return Scenario(sid, seed, search, comps, specs, objects)


def _chain_check(objects):
    ch = objects.get("channel")
    st = objects.get("state")
    if ch is not None and st is not None and st.dim != ch.dim_in:
        raise ValidationError("state", f"dimension {st.dim} != channel input dimension {ch.dim_in}")
    ref = objects.get("reference")
    if st is not None and ref is not None and st.dim != ref.dim:
        raise ValidationError("reference", f"dimension {ref.dim} != state dimension {st.dim}")
    codes = objects.get("coding")
    if codes is not None and ch is not None and codes.dim != ch.dim_in:
        raise ValidationError("coding", f"coding->channel: code dimension {codes.dim} != channel input {ch.dim_in}")
    dec = objects.get("decoding")
    if dec is not None and ch is not None and dec.dim_in != ch.dim_out:
        raise ValidationError("decoding", f"channel->decoding: POVM dimension {dec.dim_in} != channel output {ch.dim_out}")
    lam = objects.get("ensemble")
    if lam is not None and codes is not None and len(lam) != codes.n_symbols:
        raise ValidationError("ensemble", f"{len(lam)} probabilities for {codes.n_symbols} code states")


def parse_scenario(text: bytes | str) -> Scenario:
    """Parse and validate a scenario; errors name the line or field at fault."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"scenario is not UTF-8: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from exc
    return scenario_from_dict(raw)


# --------------------------------------------------------------- reporting


def round_sig(x: float, digits: int = 12):
    if x is None or isinstance(x, bool):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    r = float(f"{x:.{digits}g}")
    return 0.0 if r == 0 else r


def to_jsonable(obj) -> Any:
    """Render results for the machine report with 12 significant digits."""
    if isinstance(obj, DensityMatrix):
        return {"matrix": to_jsonable(obj.matrix)}
    if isinstance(obj, SchattenDecomposition):
        return {"weights": to_jsonable(obj.weights), "vectors": to_jsonable(obj.vectors.T)}
    if isinstance(obj, mutual.PureDecomposition):
        return {"weights": to_jsonable(obj.weights), "vectors": to_jsonable(obj.vectors.T)}
    if isinstance(obj, OrthogonalDecomposition):
        return {"weights": to_jsonable(obj.weights), "parts": [to_jsonable(p) for p in obj.parts]}
    if isinstance(obj, QuantumCoding):
        return {"coding": [to_jsonable(s) for s in obj.code_states]}
    if isinstance(obj, MeasurementDecoding):
        return {"povm": [to_jsonable(m) for m in obj.povm]}
    if isinstance(obj, cqc.CqcPipeline):
        return {"coding": to_jsonable(obj.coding), "decoding": to_jsonable(obj.decoding)}
    if isinstance(obj, mutual.SearchOutcome):
        return {"value": round_sig(obj.value), "witness": to_jsonable(obj.witness)}
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            if np.all(obj.imag == 0):
                return to_jsonable(obj.real)
            if obj.ndim == 0:
                return [round_sig(obj.real), round_sig(obj.imag)]
            return [to_jsonable(v) for v in obj]
        return [to_jsonable(v) for v in obj] if obj.ndim else round_sig(obj.item())
    if isinstance(obj, (complex, np.complexfloating)):
        return [round_sig(obj.real), round_sig(obj.imag)]
    if isinstance(obj, (float, int, np.floating, np.integer)) and not isinstance(obj, bool):
        return round_sig(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


@dataclass
class Record:
    scenario: str
    computation: str
    status: str = "ok"
    value: float | None = None
    is_exact: bool | None = None
    lower_bound: bool | None = None
    evaluations: int | None = None
    witness: Any = None
    components: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    error: str | None = None
    wall_time_s: float = 0.0

    @property
    def failed(self) -> bool:
        return self.status != "ok" or any(not c["passed"] for c in self.checks)

    def to_json(self) -> str:
        d = {
            "scenario": self.scenario,
            "computation": self.computation,
            "status": self.status,
            "value_nats": round_sig(self.value),
            "value_bits": round_sig(None if self.value is None else self.value / math.log(2)),
            "is_exact": self.is_exact,
            "lower_bound": self.lower_bound,
            "evaluations": self.evaluations,
            "witness": to_jsonable(self.witness),
            "components": to_jsonable(self.components),
            "checks": to_jsonable(self.checks),
            "error": self.error,
            "wall_time_s": round(self.wall_time_s, 6),
        }
        return json.dumps(d, sort_keys=True, separators=(",", ":"))


@dataclass
class RunReport:
    records: list[Record]

    @property
    def ok(self) -> bool:
        return not any(r.failed for r in self.records)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def machine(self) -> str:
        ordered = sorted(self.records, key=lambda r: r.scenario)
        return "".join(r.to_json() + "\n" for r in ordered)

    def table(self, units: str = "nats") -> str:
        scale = math.log(2) if units == "bits" else 1.0
        lines = [f"{'scenario':<18} {'computation':<26} {'value (' + units + ')':>20}  flags"]
        for r in sorted(self.records, key=lambda r: r.scenario):
            if r.status != "ok":
                lines.append(f"{r.scenario:<18} {r.computation:<26} {'ERROR':>20}  {r.error}")
                continue
            v = "" if r.value is None else f"{r.value / scale:.12g}"
            flags = []
            if r.is_exact:
                flags.append("exact")
            if r.lower_bound:
                flags.append("lower-bound")
            lines.append(f"{r.scenario:<18} {r.computation:<26} {v:>20}  {' '.join(flags)}")
            for c in r.checks:
                mark = "PASS" if c["passed"] else "FAIL"
                lines.append(f"    {mark}  {c['relation']:<30} {c['lhs'] / scale:.10g} <= {c['rhs'] / scale:.10g}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- execution


def _state_set(opts, ch, where):
    spec = opts.get("states", {"kind": "full"})
    if "members" in spec:
        return cap.StateSet.explicit([_norm_state(m, f"{where}.states.members[{i}]")[1]
                                      for i, m in enumerate(spec["members"])])
    return cap.StateSet(spec.get("kind", "full"), ch.dim_in)


def _distribution_set(opts, n):
    spec = opts.get("distributions", {"kind": "simplex"})
    if "members" in spec:
        return cap.DistributionSet.explicit(spec["members"])
    return cap.DistributionSet.simplex(n)


def _coding_family(opts, sc):
    codes = sc.objects["coding"]
    spec = opts.get("codings", {"constellation": [codes.n_symbols, codes.dim]})
    constellation = tuple(spec["constellation"]) if spec.get("constellation") else None
    return cap.CodingFamily((codes,), constellation)


def _decoding_family(opts, sc):
    dec = sc.objects["decoding"]
    spec = opts.get("decodings", {"projective": dec.dim_in})
    return cap.DecodingFamily((dec,), spec.get("projective"))


def _execute(sc: Scenario, comp: dict, search: SearchParams, strict: bool) -> Record:
    name = comp["name"]
    o = sc.objects
    rec = Record(sc.id, name)
    if name == "von_neumann":
        rec.value, rec.is_exact = entropy.von_neumann(o["state"]), True
    elif name == "umegaki_relative":
        rec.value, rec.is_exact = entropy.umegaki_relative(o["state"], o["reference"]), True
    elif name in ("mutual_entropy", "pseudo_mutual_entropy"):
        fn = mutual.mutual_entropy if name == "mutual_entropy" else mutual.pseudo_mutual_entropy
        out = fn(o["state"], o["channel"], search)
        rec.value, rec.witness, rec.evaluations = out.value, out.witness, out.evaluations
        rec.is_exact, rec.lower_bound = out.is_exact, out.lower_bound
        if out.infinite_index is not None:
            rec.components["infinite_index"] = out.infinite_index
        if name == "mutual_entropy" and (strict or comp.get("verify")):
            rec.components["compound_form"] = mutual.compound_form(o["state"], o["channel"], out.witness)
            mutual.mutual_for_decomposition(o["state"], o["channel"], out.witness, verify=True)
    elif name in ("quantum_capacity", "pseudo_capacity"):
        s0 = _state_set(comp, o["channel"], name)
        fn = cap.quantum_capacity if name == "quantum_capacity" else cap.pseudo_capacity
        _fill(rec, fn(o["channel"], s0, search))
    elif name in ("classical_input_mutual", "shannon_form", "holevo_bound"):
        fn = {"classical_input_mutual": mutual.classical_input_mutual,
              "shannon_form": mutual.shannon_form,
              "holevo_bound": cap.holevo_bound}[name]
        rec.value, rec.is_exact = fn(o["ensemble"], o["coding"], o["channel"]), True
    elif name == "cqc_mutual":
        pipe = cqc.build_pipeline(o["coding"], o["channel"], o["decoding"])
        rec.value, rec.is_exact = cap.cqc_mutual(pipe, o["ensemble"]), True
    elif name == "induced_classical_channel":
        pipe = cqc.build_pipeline(o["coding"], o["channel"], o["decoding"])
        rec.witness = cqc.induced_classical_channel(pipe).matrix
    elif name == "cqc_capacity":
        pipe = cqc.build_pipeline(o["coding"], o["channel"], o["decoding"])
        _fill(rec, cap.cqc_capacity(pipe, _distribution_set(comp, pipe.n_symbols), search))
    elif name == "coding_capacity":
        p0 = _distribution_set(comp, o["coding"].n_symbols)
        _fill(rec, cap.coding_capacity(o["channel"], o["decoding"], p0, _coding_family(comp, sc), search))
    elif name == "coding_decoding_capacity":
        p0 = _distribution_set(comp, o["coding"].n_symbols)
        _fill(rec, cap.coding_decoding_capacity(
            o["channel"], p0, _coding_family(comp, sc), _decoding_family(comp, sc), search))
    elif name == "verify_chains":
        pipe = cqc.build_pipeline(o["coding"], o["channel"], o["decoding"])
        chain = cap.ChainScenario(
            sc.id, pipe, _state_set(comp, o["channel"], name),
            _distribution_set(comp, pipe.n_symbols),
            _coding_family(comp, sc), _decoding_family(comp, sc), search,
            (o["ensemble"],) if "ensemble" in o else (),
        )
        report = cap.verify_chains([chain], tol=1e-10 if strict else 1e-8)
        rec.components = report.values[sc.id]
        rec.checks = [
            {"relation": c.relation, "lhs": c.lhs, "rhs": c.rhs, "passed": c.passed}
            for c in report.checks
        ]
        rec.value = float(len(report.failures))
    return rec


def _fill(rec: Record, report: cap.CapacityReport):
    rec.value, rec.witness = report.value, report.witness
    rec.is_exact, rec.lower_bound = report.is_exact, report.lower_bound
    rec.evaluations = report.evaluations
    rec.components = {k: v for k, v in report.components.items() if k not in ("pipeline", "inner")}
    if "pipeline" in report.components:
        rec.components["decoding"] = report.components["pipeline"].decoding
    if "inner" in report.components:
        rec.components["decomposition"] = report.components["inner"].witness


def run(sc: Scenario, seed: int | None = None, strict: bool = False) -> RunReport:
    """Execute every requested computation; failures are recorded and the run continues."""
    search = sc.search_params(seed)
    records = []
    for comp in sc.computations:
        t0 = time.perf_counter()
        try:
            rec = _execute(sc, comp, search, strict)
        except QmutualError as exc:
            rec = Record(sc.id, comp["name"], status="error", error=f"{type(exc).__name__}: {exc}")
        rec.wall_time_s = time.perf_counter() - t0
        records.append(rec)
    return RunReport(records)
