import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmutual.capacity import (
    ChainScenario,
    CodingFamily,
    DecodingFamily,
    DistributionSet,
    StateSet,
    blahut_arimoto,
    coding_capacity,
    coding_decoding_capacity,
    cqc_capacity,
    cqc_mutual,
    holevo_bound,
    pseudo_capacity,
    quantum_capacity,
    verify_chains,
)
from qmutual.channels import (
    QuantumCoding,
    amplitude_damping,
    basis_decoding,
    bit_flip,
    depolarizing,
    identity_channel,
    random_channel,
    trivial_decoding,
)
from qmutual.cqc import build_pipeline, induced_classical_channel
from qmutual.errors import DimMismatch, EmptyFamily, EmptyStateSet, LengthMismatch
from qmutual.mutual import mutual_entropy, mutual_for_decomposition
from qmutual.search import SearchParams
from qmutual.states import diagonal_state, maximally_mixed, pure_state, random_density

import oracles
from conftest import seeds

LN2 = math.log(2)
FAST = SearchParams(restarts=4, outer_restarts=2, inner_restarts=1, pseudo_iters=150)


def orthogonal_codes(d):
    return QuantumCoding(tuple(pure_state(np.eye(d)[k]) for k in range(d)))


def coherent_codes(theta):
    return QuantumCoding((
        pure_state([np.cos(theta / 2), np.sin(theta / 2)]),
        pure_state([np.cos(theta / 2), -np.sin(theta / 2)]),
    ))


class TestDomains:
    def test_empty_sets(self):
        with pytest.raises(EmptyStateSet):
            StateSet.explicit([])
        with pytest.raises(EmptyStateSet):
            DistributionSet.explicit([])
        with pytest.raises(EmptyFamily):
            CodingFamily()
        with pytest.raises(EmptyFamily):
            DecodingFamily()

    def test_explicit_dims(self):
        with pytest.raises(DimMismatch):
            StateSet("explicit", 2, (maximally_mixed(2), maximally_mixed(3)))

    def test_sup_entropy(self):
        assert StateSet.full(3).sup_entropy() == pytest.approx(math.log(3))
        assert StateSet.explicit([pure_state([1, 0]), diagonal_state([0.5, 0.5])]).sup_entropy() == pytest.approx(LN2)
        assert DistributionSet.simplex(4).sup_entropy() == pytest.approx(math.log(4))


class TestQuantumCapacity:
    @pytest.mark.parametrize("d", [2, 3])
    def test_identity(self, d):
        r = quantum_capacity(identity_channel(d), StateSet.full(d), FAST)
        assert r.value == pytest.approx(math.log(d), abs=1e-9)
        assert r.lower_bound
        np.testing.assert_allclose(r.witness.matrix, np.eye(d) / d, atol=1e-6)

    def test_completely_depolarizing(self):
        assert quantum_capacity(depolarizing(1.0), StateSet.full(2), FAST).value == pytest.approx(0, abs=1e-12)

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            quantum_capacity(identity_channel(2), StateSet.full(3), FAST)

    def test_explicit_exact(self):
        members = [diagonal_state([0.9, 0.1]), diagonal_state([0.6, 0.4])]
        r = quantum_capacity(identity_channel(2), StateSet.explicit(members), FAST)
        assert r.is_exact and not r.lower_bound
        assert r.value == pytest.approx(oracles.binary_entropy(0.4), abs=1e-12)
        assert np.allclose(r.witness.matrix, members[1].matrix)

    def test_explicit_with_degenerate_member_is_lower_bound(self):
        r = quantum_capacity(bit_flip(0.2), StateSet.explicit([maximally_mixed(2)]), FAST)
        assert r.lower_bound and not r.is_exact

    def test_witness_reproduces_value(self):
        ch = amplitude_damping(0.4)
        r = quantum_capacity(ch, StateSet.full(2), FAST)
        inner = r.components["inner"]
        assert abs(mutual_for_decomposition(r.witness, ch, inner.witness) - r.value) < 1e-9

    def test_depolarizing_against_random_sweep(self):
        ch = depolarizing(0.5)
        r = quantum_capacity(ch, StateSet.full(2), FAST)
        sweep = max(mutual_entropy(random_density(2, seed=s), ch, FAST).value for s in range(10_000))
        assert r.value >= sweep - 1e-3
        assert r.value == pytest.approx(sweep, abs=1e-3)
        assert r.value == pytest.approx(LN2 - oracles.binary_entropy(0.25), abs=1e-9)

    def test_diagonal_set(self):
        r = quantum_capacity(amplitude_damping(0.3), StateSet.diagonal(2), FAST)
        assert 0 < r.value <= LN2
        m = r.witness.matrix
        assert np.allclose(m, np.diag(np.diag(m)))


class TestPseudoCapacity:
    @pytest.mark.parametrize("d", [2, 3])
    def test_identity(self, d):
        assert pseudo_capacity(identity_channel(d), StateSet.full(d), FAST).value >= math.log(d) - 1e-6

    def test_completely_depolarizing(self):
        assert pseudo_capacity(depolarizing(1.0), StateSet.full(2), FAST).value == pytest.approx(0, abs=1e-12)

    @pytest.mark.parametrize("ch,s0", [
        (amplitude_damping(0.3), StateSet.full(2)),
        (random_channel(2, 2, 2, seed=3), StateSet.full(2)),
        (amplitude_damping(0.3), StateSet.diagonal(2)),
        (depolarizing(0.2), StateSet.explicit([random_density(2, seed=1), maximally_mixed(2)])),
    ])
    def test_dominates_quantum_capacity(self, ch, s0):
        r = pseudo_capacity(ch, s0, FAST)
        assert r.lower_bound
        assert r.value >= r.components["quantum_capacity"] - 1e-8
        assert r.value <= s0.sup_entropy() + 1e-8


class TestBlahutArimoto:
    @pytest.mark.parametrize("p", [0.0, 0.1, 0.25, 0.5])
    def test_bsc(self, p):
        _, value, gap, _ = blahut_arimoto(np.array([[1 - p, p], [p, 1 - p]]))
        assert gap <= 1e-9
        assert value == pytest.approx(LN2 - oracles.binary_entropy(p), abs=1e-9)

    @pytest.mark.parametrize("p", [0.1, 0.3, 0.6])
    def test_z_channel(self, p):
        _, value, gap, _ = blahut_arimoto(np.array([[1, p], [0, 1 - p]]))
        assert value == pytest.approx(oracles.z_channel_capacity(p), abs=1e-8)

    @settings(max_examples=20)
    @given(seed=seeds)
    def test_three_inputs_against_grid(self, seed):
        rng = np.random.default_rng(seed)
        t = rng.dirichlet(np.ones(3), size=3).T
        _, value, gap, _ = blahut_arimoto(t)
        grid = oracles.simplex_grid_capacity(t, 1e-2)
        assert grid - 1e-12 <= value + 1e-9
        assert value - grid < 5e-3


class TestCqc:
    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_noiseless(self, d):
        pipe = build_pipeline(orthogonal_codes(d), identity_channel(d), basis_decoding(d))
        assert cqc_mutual(pipe, np.full(d, 1 / d)) == pytest.approx(math.log(d), abs=1e-12)
        r = cqc_capacity(pipe, DistributionSet.simplex(d))
        assert r.is_exact and r.value == pytest.approx(math.log(d), abs=1e-9)
        np.testing.assert_allclose(r.witness, np.full(d, 1 / d), atol=1e-6)

    def test_one_outcome(self):
        pipe = build_pipeline(orthogonal_codes(2), bit_flip(0.1), trivial_decoding(2))
        assert cqc_mutual(pipe, [0.3, 0.7]) == 0
        assert cqc_capacity(pipe, DistributionSet.simplex(2)).value == 0

    def test_bsc(self):
        pipe = build_pipeline(orthogonal_codes(2), bit_flip(0.1), basis_decoding(2))
        t = induced_classical_channel(pipe).matrix
        assert cqc_mutual(pipe, [0.5, 0.5]) == pytest.approx(oracles.mutual_information(t, np.array([0.5, 0.5])), abs=1e-14)
        r = cqc_capacity(pipe, DistributionSet.simplex(2))
        grid_value, grid_witness = oracles.binary_input_capacity(t, 1e-3)
        assert r.value == pytest.approx(grid_value, abs=1e-9)
        assert r.value == pytest.approx(LN2 - oracles.binary_entropy(0.1), abs=1e-9)
        np.testing.assert_allclose(r.witness, [0.5, 0.5], atol=1e-6)
        assert r.components["cqc_mutual_at_witness"] == r.value

    def test_explicit_distributions(self):
        pipe = build_pipeline(orthogonal_codes(2), bit_flip(0.1), basis_decoding(2))
        r = cqc_capacity(pipe, DistributionSet.explicit([[1, 0], [0.3, 0.7]]))
        assert r.is_exact
        assert r.value == pytest.approx(cqc_mutual(pipe, [0.3, 0.7]))

    def test_length_mismatch(self):
        pipe = build_pipeline(orthogonal_codes(2), bit_flip(0.1), basis_decoding(2))
        with pytest.raises(LengthMismatch):
            cqc_mutual(pipe, [1.0])
        with pytest.raises(LengthMismatch):
            cqc_capacity(pipe, DistributionSet.simplex(3))


class TestHolevo:
    @pytest.mark.parametrize("d", [2, 3])
    def test_orthogonal(self, d):
        assert holevo_bound(np.full(d, 1 / d), orthogonal_codes(d), identity_channel(d)) == pytest.approx(math.log(d))

    def test_identical_codes(self):
        s = random_density(2, seed=2)
        assert holevo_bound([0.4, 0.6], QuantumCoding((s, s)), depolarizing(0.3)) == pytest.approx(0, abs=1e-12)

    @pytest.mark.parametrize("theta", [0.3, 1.0, 2.0])
    def test_overlapping_pure_codes(self, theta):
        v = holevo_bound([0.5, 0.5], coherent_codes(theta), identity_channel(2))
        assert v == pytest.approx(oracles.binary_entropy((1 + np.cos(theta)) / 2), abs=1e-12)

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            holevo_bound([1.0], orthogonal_codes(2), identity_channel(2))
        with pytest.raises(DimMismatch):
            holevo_bound([0.5, 0.5], orthogonal_codes(2), identity_channel(3))

    @settings(max_examples=30)
    @given(d=st.integers(2, 3), seed=seeds)
    def test_dominates_any_decoding(self, d, seed):
        from qmutual.linalg import haar_unitary

        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 5))
        codes = QuantumCoding(tuple(random_density(d, seed=rng) for _ in range(n)))
        ch = random_channel(d, d, 2, seed=rng)
        lam = rng.dirichlet(np.ones(n))
        pipe = build_pipeline(codes, ch, basis_decoding(d, haar_unitary(d, rng)))
        assert holevo_bound(lam, codes, ch) >= cqc_mutual(pipe, lam) - 1e-8


class TestCodingCapacity:
    def test_single_member(self):
        pipe = build_pipeline(orthogonal_codes(2), bit_flip(0.2), basis_decoding(2))
        r = coding_capacity(bit_flip(0.2), basis_decoding(2), DistributionSet.simplex(2), CodingFamily((pipe.coding,)), FAST)
        assert r.is_exact and not r.lower_bound
        assert r.value == cqc_capacity(pipe, DistributionSet.simplex(2)).value

    @pytest.mark.parametrize("d", [2, 3])
    def test_optimal_member(self, d):
        family = CodingFamily((QuantumCoding((maximally_mixed(d),) * d), orthogonal_codes(d)))
        r = coding_capacity(identity_channel(d), basis_decoding(d), DistributionSet.simplex(d), family, FAST)
        assert r.value == pytest.approx(math.log(d), abs=1e-9)
        assert r.witness[0] is family.members[1]

    def test_amplitude_damping_constellation(self):
        ch, dec = amplitude_damping(0.3), basis_decoding(2)
        r = coding_capacity(ch, dec, DistributionSet.simplex(2), CodingFamily(constellation=(2, 2)), FAST)
        assert r.lower_bound
        # frame sweep: random pairs of pure code states, each scored by the grid oracle
        rng = np.random.default_rng(0)
        sweep = 0.0
        for _ in range(1000):
            v = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            codes = QuantumCoding(tuple(pure_state(x) for x in v))
            t = induced_classical_channel(build_pipeline(codes, ch, dec)).matrix
            sweep = max(sweep, oracles.binary_input_capacity(t, 1e-2)[0])
        assert r.value >= sweep - 1e-9
        # the best constellation is the computational basis, giving a Z-channel
        assert r.value == pytest.approx(oracles.z_channel_capacity(0.3), abs=1e-7)

    def test_empty_family(self):
        with pytest.raises(EmptyFamily):
            coding_capacity(bit_flip(0.1), basis_decoding(2), DistributionSet.simplex(2), CodingFamily(), FAST)


class TestCodingDecodingCapacity:
    def test_singletons(self):
        pipe = build_pipeline(coherent_codes(1.0), depolarizing(0.3), basis_decoding(2))
        r = coding_decoding_capacity(
            pipe.channel, DistributionSet.simplex(2), CodingFamily((pipe.coding,)), DecodingFamily((pipe.decoding,)), FAST)
        assert r.value == cqc_capacity(pipe, DistributionSet.simplex(2)).value
        assert r.is_exact

    def test_noiseless_pair(self):
        family = CodingFamily((coherent_codes(0.5), orthogonal_codes(2)))
        decs = DecodingFamily((trivial_decoding(2), basis_decoding(2)))
        r = coding_decoding_capacity(identity_channel(2), DistributionSet.simplex(2), family, decs, FAST)
        assert r.value == pytest.approx(LN2, abs=1e-9)

    def test_contains_coding_capacity(self):
        ch, p0 = depolarizing(0.2), DistributionSet.simplex(2)
        codes = CodingFamily(constellation=(2, 2))
        cc = coding_capacity(ch, basis_decoding(2), p0, codes, FAST)
        ccd = coding_decoding_capacity(ch, p0, codes, DecodingFamily((basis_decoding(2),), projective=2), FAST)
        assert ccd.value >= cc.value - 1e-8
        assert ccd.value == pytest.approx(LN2 - oracles.binary_entropy(0.1), abs=1e-6)

    def test_projective_rescues_bad_decoding(self):
        # the explicit decoding measures in the wrong basis; the projective family recovers the signal
        plus = basis_decoding(2, np.array([[1, 1], [1, -1]]) / np.sqrt(2))
        ch, p0 = identity_channel(2), DistributionSet.simplex(2)
        fam = CodingFamily((orthogonal_codes(2),))
        fixed = coding_decoding_capacity(ch, p0, fam, DecodingFamily((plus,)), FAST)
        searched = coding_decoding_capacity(ch, p0, fam, DecodingFamily((plus,), projective=2), FAST)
        assert fixed.value == pytest.approx(0, abs=1e-12)
        assert searched.value == pytest.approx(LN2, abs=1e-6)


class TestChains:
    def _scenario(self, sid, ch, codes, dec):
        pipe = build_pipeline(codes, ch, dec)
        d = ch.dim_in
        return ChainScenario(
            sid, pipe, StateSet.full(d), DistributionSet.simplex(codes.n_symbols),
            CodingFamily((codes,), (codes.n_symbols, d)), DecodingFamily((dec,), ch.dim_out), FAST,
        )

    def test_noiseless(self):
        rep = verify_chains([self._scenario("noiseless", identity_channel(2), orthogonal_codes(2), basis_decoding(2))])
        assert rep.passed
        assert rep.values["noiseless"]["C_P0"] == pytest.approx(LN2, abs=1e-9)
        assert rep.values["noiseless"]["C_S0"] == pytest.approx(LN2, abs=1e-9)

    def test_one_outcome(self):
        rep = verify_chains([self._scenario("blind", bit_flip(0.1), orthogonal_codes(2), trivial_decoding(2))])
        assert rep.passed
        assert rep.values["blind"]["C_P0"] == 0

    def test_reports_failures_instead_of_raising(self, monkeypatch):
        import qmutual.capacity as cap

        real = cap.evaluate_scenario
        monkeypatch.setattr(cap, "evaluate_scenario", lambda sc: {**real(sc), "Cc_P0": -1.0})
        rep = cap.verify_chains([self._scenario("rigged", bit_flip(0.1), orthogonal_codes(2), basis_decoding(2))])
        assert not rep.passed
        assert [c.relation for c in rep.failures] == ["C(P0) <= Cc(P0)"]

    def test_holevo_probe_entries(self):
        sc = self._scenario("probe", depolarizing(0.3), coherent_codes(0.8), basis_decoding(2))
        sc = ChainScenario(**{**sc.__dict__, "probe_distributions": ([0.5, 0.5], [0.2, 0.8])})
        rep = verify_chains([sc])
        assert sum("holevo" in c.relation for c in rep.checks) == 2
        assert rep.passed
