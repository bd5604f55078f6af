import json
import math

import numpy as np
import pytest

from qmutual.errors import ParseError, ValidationError
from qmutual.scenario import (
    COMPUTATIONS,
    Record,
    RunReport,
    parse_scenario,
    round_sig,
    run,
    scenario_from_dict,
    serialize_scenario,
    to_jsonable,
)

LN2 = math.log(2)
QUICK = {"restarts": 4, "outer_restarts": 1, "inner_restarts": 1, "pseudo_iters": 100}

IDENTITY = {
    "id": "identity",
    "channel": {"zoo": "identity", "params": []},
    "state": {"maximally_mixed": 2},
    "computations": ["mutual_entropy"],
}

BSC = {
    "id": "bsc",
    "seed": 3,
    "search": QUICK,
    "channel": "bit_flip:0.1",
    "coding": [{"pure": [1, 0]}, {"pure": [0, 1]}],
    "decoding": {"basis": 2},
    "ensemble": [0.5, 0.5],
    "computations": ["cqc_mutual", "holevo_bound", "cqc_capacity", "verify_chains"],
}


def dumps(d):
    return json.dumps(d).encode()


def without_timing(machine):
    out = []
    for line in machine.splitlines():
        rec = json.loads(line)
        rec.pop("wall_time_s")
        out.append(json.dumps(rec, sort_keys=True))
    return out


class TestParse:
    def test_minimal(self):
        sc = parse_scenario(dumps(IDENTITY))
        assert sc.id == "identity"
        assert len(sc.computations) == 1
        assert sc.objects["channel"].dim_in == 2

    def test_kraus_defect_reported(self):
        k = [[[math.sqrt(1.1), 0], [0, math.sqrt(1.1)]]]
        raw = {**IDENTITY, "channel": {"kraus": k}}
        with pytest.raises(ValidationError) as exc:
            parse_scenario(dumps(raw))
        assert exc.value.field == "channel.kraus"
        assert "trace preservation" in str(exc.value)
        assert exc.value.defect == pytest.approx(0.1 * math.sqrt(2))

    def test_kraus_defect_of_one_tenth(self):
        # a single entry off by 0.1 gives a defect of exactly 0.1
        k = [[[math.sqrt(1.1), 0], [0, 1]]]
        with pytest.raises(ValidationError) as exc:
            parse_scenario(dumps({**IDENTITY, "channel": {"kraus": k}}))
        assert exc.value.defect == pytest.approx(0.1)

    def test_complex_pair_entry(self):
        raw = {**IDENTITY, "state": {"pure": [[0.5, -0.5], [0.5, 0.5]]}}
        sc = parse_scenario(dumps(raw))
        v = np.array([0.5 - 0.5j, 0.5 + 0.5j]) / 1.0
        np.testing.assert_allclose(sc.objects["state"].matrix, np.outer(v, v.conj()), atol=1e-15)

    def test_complex_matrix_entry(self):
        m = [[0.5, [0, -0.25]], [[0, 0.25], 0.5]]
        sc = parse_scenario(dumps({**IDENTITY, "state": m}))
        assert sc.objects["state"].matrix[0, 1] == -0.25j

    def test_parse_error_location(self):
        text = '{\n  "id": "x",\n  "channel": ,\n}'
        with pytest.raises(ParseError) as exc:
            parse_scenario(text)
        assert exc.value.line == 3
        assert exc.value.column == 14

    def test_not_utf8(self):
        with pytest.raises(ParseError):
            parse_scenario(b"\xff\xfe{}")

    @pytest.mark.parametrize("patch,field", [
        ({"computations": []}, "computations"),
        ({"computations": ["bogus"]}, "computations[0].name"),
        ({"computations": ["umegaki_relative"]}, "computations[0]"),
        ({"state": {"maximally_mixed": 3}}, "state"),
        ({"state": {"diag": [0.5, 0.6]}}, "state.diag"),
        ({"state": {"pure": [0, 0]}}, "state.pure"),
        ({"channel": {"zoo": "nope"}}, "channel.zoo"),
        ({"search": {"restarts": -1}}, "search.restarts"),
        ({"search": {"colour": 1}}, "search"),
        ({"extra": 1}, "<root>"),
        ({"id": ""}, "id"),
    ])
    def test_validation_names_field(self, patch, field):
        with pytest.raises(ValidationError) as exc:
            scenario_from_dict({**IDENTITY, **patch})
        assert exc.value.field == field

    def test_dimension_chain(self):
        raw = {**BSC, "decoding": {"basis": 3}}
        with pytest.raises(ValidationError, match="channel->decoding"):
            scenario_from_dict(raw)
        raw = {**BSC, "coding": [{"pure": [1, 0, 0]}, {"pure": [0, 1, 0]}]}
        with pytest.raises(ValidationError, match="coding->channel"):
            scenario_from_dict(raw)
        with pytest.raises(ValidationError, match="probabilities"):
            scenario_from_dict({**BSC, "ensemble": [1.0]})

    def test_choi_channel(self):
        choi = np.zeros((4, 4))
        for i in range(2):
            for j in range(2):
                choi[2 * i + i, 2 * j + j] = 1  # maximally entangled, i.e. identity
        raw = {**IDENTITY, "channel": {"choi": choi.tolist(), "dim_in": 2, "dim_out": 2}}
        sc = parse_scenario(dumps(raw))
        rho = np.array([[0.7, 0.2j], [-0.2j, 0.3]])
        np.testing.assert_allclose(sc.objects["channel"].apply_matrix(rho), rho, atol=1e-12)

    @pytest.mark.parametrize("raw", [IDENTITY, BSC, {
        **IDENTITY,
        "state": {"random": {"dim": 2, "rank": 1, "seed": 4}},
        "reference": [[0.5, [0, 0.1]], [[0, -0.1], 0.5]],
        "channel": {"kraus": [[[1, 0], [0, [0, 1]]]]},
        "computations": [{"name": "umegaki_relative"}, "von_neumann"],
    }])
    def test_round_trip(self, raw):
        sc = parse_scenario(dumps(raw))
        text = serialize_scenario(sc)
        again = parse_scenario(text)
        assert again == sc
        assert serialize_scenario(again) == text


class TestRun:
    def test_identity_mixed(self):
        rep = run(parse_scenario(dumps(IDENTITY)))
        (rec,) = rep.records
        assert rec.value == pytest.approx(LN2, abs=1e-12)
        assert rep.exit_code == 0
        line = json.loads(rep.machine())
        assert line["value_bits"] == pytest.approx(1.0, abs=1e-11)

    def test_verify_chains_table(self):
        rep = run(parse_scenario(dumps(BSC)))
        assert rep.ok
        table = rep.table()
        assert "verify_chains" in table
        assert table.count("PASS") >= 8 and "FAIL" not in table
        values = {r.computation: r.value for r in rep.records}
        assert values["cqc_capacity"] == pytest.approx(0.3680642071684971, abs=1e-9)

    def test_units_bits(self):
        rep = run(parse_scenario(dumps(IDENTITY)))
        assert "1" == rep.table("bits").splitlines()[1].split()[2]

    def test_deterministic(self):
        sc = parse_scenario(dumps(BSC))
        a, b = run(sc).machine(), run(sc).machine()
        assert without_timing(a) == without_timing(b)

    def test_seed_override(self):
        sc = parse_scenario(dumps({**IDENTITY, "computations": ["quantum_capacity"],
                                   "channel": "amplitude_damping:0.3", "search": QUICK}))
        a = without_timing(run(sc, seed=1).machine())
        b = without_timing(run(sc, seed=1).machine())
        assert a == b

    def test_errors_recorded_per_entry(self):
        raw = {**IDENTITY, "state": [[1, 0], [0, 0]], "reference": [[0, 0], [0, 1]],
               "computations": ["umegaki_relative", "von_neumann",
                                {"name": "quantum_capacity", "states": {"kind": "bogus"}}]}
        rep = run(parse_scenario(dumps(raw)))
        statuses = [r.status for r in rep.records]
        assert statuses == ["ok", "ok", "error"]
        assert rep.records[0].value == math.inf
        assert rep.exit_code == 1
        assert json.loads(rep.machine().splitlines()[0])["value_nats"] == "inf"

    def test_every_computation_dispatches(self):
        raw = {**BSC, "state": {"diag": [0.7, 0.3]}, "reference": {"maximally_mixed": 2},
               "computations": list(COMPUTATIONS)}
        rep = run(parse_scenario(dumps(raw)))
        assert [r.computation for r in rep.records] == list(COMPUTATIONS)
        assert all(r.status == "ok" for r in rep.records), rep.table()

    def test_strict_cross_checks_forms(self):
        sc = parse_scenario(dumps({**IDENTITY, "channel": "depolarizing:0.3", "state": {"diag": [0.6, 0.4]}}))
        (rec,) = run(sc, strict=True).records
        assert rec.components["compound_form"] == pytest.approx(rec.value, abs=1e-10)


class TestRendering:
    @pytest.mark.parametrize("x,expected", [
        (0.1 + 0.2, 0.3),
        (1 / 3, 0.333333333333),
        (math.inf, "inf"),
        (-math.inf, "-inf"),
        (math.nan, "nan"),
        (-0.0, 0.0),
        (None, None),
        (7, 7),
    ])
    def test_round_sig(self, x, expected):
        assert round_sig(x) == expected

    def test_complex_arrays(self):
        assert to_jsonable(np.array([1 + 0j, 2])) == [1.0, 2.0]
        assert to_jsonable(np.array([1j])) == [[0.0, 1.0]]

    def test_record_line_is_sorted_and_compact(self):
        line = Record("s", "c", value=LN2).to_json()
        keys = list(json.loads(line))
        assert keys == sorted(keys)
        assert ", " not in line
        assert json.loads(line)["value_bits"] == 1.0

    def test_machine_sorted_by_scenario(self):
        rep = RunReport([Record("b", "x"), Record("a", "y"), Record("b", "w")])
        order = [(json.loads(l)["scenario"], json.loads(l)["computation"]) for l in rep.machine().splitlines()]
        assert order == [("a", "y"), ("b", "x"), ("b", "w")]
