import math

import numpy as np
import pytest

from thermaneg.lattice import ModelSpec, build_spin_hamiltonian
from thermaneg.partitions import central_vs_rest, even_odd, from_mask, half_half
from thermaneg.spin import SpinModel, negativity, partial_transpose, thermal_state


def ring(n, h=0.0):
    return build_spin_hamiltonian(ModelSpec(kind="spin_half", topology="ring_nn", n_sites=n, h=h))


def star(n, h=0.0):
    return build_spin_hamiltonian(ModelSpec(kind="spin_half", topology="star", n_sites=n, h=h))


class TestThermalState:
    def test_gibbs_state_basics(self):
        model = SpinModel(ring(4, h=0.7))
        for t in (0.0, 0.5, 2.0):
            rho = model.thermal_rho(t)
            assert np.trace(rho) == pytest.approx(1.0, abs=1e-12)
            assert np.array_equal(rho, rho.T)
            assert np.linalg.eigvalsh(rho)[0] > -1e-13

    def test_high_temperature_limit_is_maximally_mixed(self):
        rho = thermal_state(ring(3, h=1.1), 1e6).rho
        assert np.allclose(rho, np.eye(8) / 8, atol=1e-5)

    def test_two_site_ground_state_is_the_singlet_triplet_mixture(self):
        # the exchange ground state of two sites is (|01> + |10>)/sqrt(2)
        rho = thermal_state(ring(2), 0.0).rho
        expected = np.zeros((4, 4))
        expected[1:3, 1:3] = 0.5
        assert np.allclose(rho, expected, atol=1e-12)

    def test_degenerate_ground_space_is_mixed_uniformly(self):
        ham = ring(4)
        lam = np.linalg.eigvalsh(ham.entries)
        degeneracy = int(np.sum(lam - lam[0] < 1e-10))
        rho = thermal_state(ham, 0.0).rho
        nonzero = np.linalg.eigvalsh(rho)
        nonzero = nonzero[nonzero > 1e-12]
        assert len(nonzero) == degeneracy
        assert np.allclose(nonzero, 1.0 / degeneracy, atol=1e-12)

    def test_boltzmann_ratios(self):
        # two-site populations must follow exp(-(E - E0)/T)
        t = 1.3
        rho = thermal_state(ring(2), t).rho
        lam = np.array([-2.0, 0.0, 0.0, 2.0])
        w = np.exp(-(lam - lam[0]) / t)
        w /= w.sum()
        got = np.sort(np.linalg.eigvalsh(rho))
        assert np.allclose(got, np.sort(w), atol=1e-12)

    def test_negative_temperature_rejected(self):
        with pytest.raises(ValueError):
            thermal_state(ring(2), -1.0)

    def test_repeated_temperature_reuses_the_cached_matrix(self):
        model = SpinModel(ring(3))
        assert model.thermal_rho(0.8) is model.thermal_rho(0.8)


class TestPartialTranspose:
    def test_is_an_involution(self):
        rng = np.random.default_rng(3)
        m = rng.standard_normal((8, 8))
        rho = m + m.T
        p = from_mask("+-+")
        assert np.array_equal(partial_transpose(partial_transpose(rho, p), p), rho)

    def test_preserves_trace_and_symmetry(self):
        rho = thermal_state(ring(3, h=0.4), 0.7).rho
        pt = partial_transpose(rho, from_mask("-++"))
        assert np.trace(pt) == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(pt, pt.T, atol=1e-14)

    def test_product_state_transposes_blockwise(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((2, 2))
        a = a + a.T
        b = rng.standard_normal((4, 4))
        b = b + b.T
        rho = np.kron(a, b)
        # transposing the first site of a product acts on that factor alone
        assert np.allclose(partial_transpose(rho, from_mask("+--")), np.kron(a.T, b))
        # transposing the complementary block acts on the other factor
        assert np.allclose(partial_transpose(rho, from_mask("-++")), np.kron(a, b.T))

    def test_prefix_block_against_a_reshape_oracle(self):
        rng = np.random.default_rng(5)
        m = rng.standard_normal((16, 16))
        rho = m + m.T
        # transpose of the first two of four sites, written directly as
        # an axis swap on the (4, 4, 4, 4) two-block reshape
        oracle = rho.reshape(4, 4, 4, 4).transpose(2, 1, 0, 3).reshape(16, 16)
        assert np.allclose(partial_transpose(rho, from_mask("++--")), oracle)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            partial_transpose(np.eye(8), from_mask("+-"))


class TestNegativity:
    def test_bell_ground_state(self):
        rho = thermal_state(ring(2), 0.0).rho
        e_n, e_l = negativity(rho, half_half(2))
        assert e_n == pytest.approx(0.5, abs=1e-10)
        assert e_l == pytest.approx(math.log2(1.5), abs=1e-10)

    def test_separable_diagonal_state(self):
        rho = np.diag([0.4, 0.3, 0.2, 0.1])
        e_n, e_l = negativity(rho, half_half(2))
        assert e_n == 0.0 and e_l == 0.0

    def test_log_form_consistency(self):
        rho = thermal_state(ring(4, h=0.5), 0.6).rho
        e_n, e_l = negativity(rho, even_odd(4))
        assert e_l == pytest.approx(math.log2(1.0 + e_n), abs=1e-12)

    def test_block_negation_symmetry(self):
        rho = thermal_state(star(4), 1.0).rho
        direct = negativity(rho, central_vs_rest(4))
        flipped = negativity(rho, from_mask("-+++", topology="star", pid="rest"))
        assert direct[0] == pytest.approx(flipped[0], abs=1e-12)

    def test_model_pair_matches_free_functions(self):
        model = SpinModel(ring(5, h=1.1))
        p = from_mask("+-+--")
        for t in (0.0, 0.9, 3.0):
            pair = model.negativity_pair(t, p)
            assert pair == negativity(model.thermal_rho(t), p)

    def test_strong_field_polarizes_and_disentangles(self):
        # deep in the polarized phase the thermal state is almost the
        # product of all-down spins and carries no negativity
        model = SpinModel(ring(4, h=50.0))
        e_n, _ = model.negativity_pair(0.5, even_odd(4))
        assert e_n == pytest.approx(0.0, abs=1e-10)

    def test_field_free_star_hub_value(self):
        model = SpinModel(star(4))
        e_n, _ = model.negativity_pair(0.5, central_vs_rest(4))
        assert e_n == pytest.approx(0.26216533476808, abs=1e-11)
