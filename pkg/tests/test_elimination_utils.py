# tests/test_elimination_utils.py
import pytest
import numpy as np

from central_spin.elimination_utils import (
    central_steady_state,
    coefficient_tables,
    effective_generator,
    g_operators_closed,
    g_operators_general,
    route_difference,
)
from central_spin.model_utils import ModelConfig, random_config
from dissipation.dissipation_utils import DissipativeMode, bloch_direction
from exceptions import InvalidArgument
from qcore.qcore_utils import bloch_vector, hamiltonian_superop, lindblad_superop, residual


def single_aux(mu, theta=0.4, phi=1.1, coupling=None):
    return ModelConfig(
        couplings=(np.eye(3) if coupling is None else coupling,),
        modes=(DissipativeMode(theta=theta, phi=phi, mu=mu),),
    )


class TestCoefficientTables:
    """Coefficient closed forms over the single-site eigenbasis"""

    @pytest.mark.parametrize('mu', np.linspace(-1, 1, 21))
    def test_single_site_closed_forms(self, mu):
        tables = coefficient_tables(single_aux(mu))
        expected = np.diag([(1 + mu) / 2, (1 - mu) / 2, (1 - mu ** 2) / 4])

        assert tables.indices == [(1,), (2,), (3,)]
        assert np.max(np.abs(tables.c - expected)) < 1e-12
        assert tables.c_zero == pytest.approx(1.0)

    @pytest.mark.parametrize('mu', [-0.6, 0.0, 0.35, 1.0])
    def test_derived_tables(self, mu):
        tables = coefficient_tables(single_aux(mu))
        expected_a = np.diag([2 * (1 + mu), 2 * (1 - mu), (1 - mu ** 2) / 2])

        assert np.max(np.abs(tables.a - expected_a)) < 1e-12
        assert np.max(np.abs(tables.b)) < 1e-12

    def test_multi_site_table_is_diagonal(self, rng):
        tables = coefficient_tables(random_config(2, rng))
        off_diagonal = tables.c - np.diag(np.diag(tables.c))

        assert len(tables.indices) == 15
        assert np.max(np.abs(off_diagonal)) < 1e-12
        assert np.all(np.diag(tables.c).real >= -1e-12)


class TestGOperators:
    """Partial-trace g-operators against their closed forms"""

    def test_single_site_forms_agree(self, rng):
        for _ in range(10):
            config = random_config(2, rng)
            for n in range(2):
                closed = g_operators_closed(config, n)
                for k in range(1, 4):
                    index = [0, 0]
                    index[n] = k
                    assert np.allclose(g_operators_general(config, index), closed[k], atol=1e-12)

    def test_drift_is_sum_of_site_terms(self, random_model):
        drift = g_operators_general(random_model, (0, 0))
        expected = sum(g_operators_closed(random_model, n)[0] for n in range(2))
        assert np.allclose(drift, expected, atol=1e-12)

    def test_cross_site_operators_vanish(self, random_model):
        for index in [(1, 1), (2, 3), (3, 3), (1, 2)]:
            assert np.max(np.abs(g_operators_general(random_model, index))) < 1e-12

    def test_invalid_index(self, random_model):
        with pytest.raises(InvalidArgument):
            g_operators_general(random_model, (4, 0))
        with pytest.raises(InvalidArgument):
            g_operators_closed(random_model, 2)


class TestEffectiveGenerator:
    """Dual-route effective generator"""

    def test_routes_agree_on_random_configs(self, rng):
        for i in range(100):
            config = random_config(3 if i % 10 == 0 else 2, rng, gamma=float(rng.uniform(20, 2000)))
            general = effective_generator(config, 'general')
            closed = effective_generator(config, 'closed')

            assert route_difference(general, closed) <= 1e-10
            assert np.linalg.norm(general.h_a) <= 1e-10

    def test_cross_check_passes(self, random_model):
        generator = effective_generator(random_model, 'general', cross_check=True)
        assert generator.route == 'general'

    def test_unknown_route(self, random_model):
        with pytest.raises(InvalidArgument):
            effective_generator(random_model, 'exact')

    def test_general_channels_reproduce_superoperator(self, random_model):
        """sum of eigen-channels of A equals the general dissipator"""
        general = effective_generator(random_model, 'general')
        rebuilt = lindblad_superop(
            general.h_d,
            [(rate / random_model.gamma, op) for rate, op in general.channels],
        )
        assert np.max(np.abs(rebuilt.mat - general.superop.mat)) < 1e-10

    def test_polarization_transfer(self, polarizing_model):
        """Central qubit pumped into |0> at rate 16/gamma"""
        generator = effective_generator(polarizing_model)
        rho, _ = central_steady_state(polarizing_model)
        rates = np.linalg.eigvals(generator.superop.mat).real

        assert np.allclose(bloch_vector(rho.mat), [0, 0, 1], atol=1e-10)
        assert rates.min() == pytest.approx(-16 / polarizing_model.gamma)

    def test_dissipation_scales_with_inverse_gamma(self, random_model):
        slow = effective_generator(random_model.with_gamma(1000.0))
        fast = effective_generator(random_model)
        drift = hamiltonian_superop(fast.h_d).mat

        assert np.allclose(slow.h_d, fast.h_d)
        assert np.allclose(10 * (slow.superop.mat - drift), fast.superop.mat - drift, atol=1e-12)

    def test_steady_states_agree_between_routes(self, random_model):
        closed, _ = central_steady_state(random_model, 'closed')
        general, _ = central_steady_state(random_model, 'general')

        assert closed.is_valid()
        assert np.allclose(closed.mat, general.mat, atol=1e-9)
        assert residual(effective_generator(random_model).superop, closed) <= 1e-8

    @pytest.mark.parametrize('theta', np.linspace(0, np.pi, 5))
    @pytest.mark.parametrize('phi', np.linspace(0, 2 * np.pi, 4, endpoint=False))
    def test_isotropic_coupling_follows_mode(self, theta, phi):
        rho, _ = central_steady_state(single_aux(1.0, theta=theta, phi=phi))
        mode = DissipativeMode(theta=theta, phi=phi)

        assert np.max(np.abs(bloch_vector(rho.mat) - bloch_direction(mode.theta, mode.phi))) < 1e-10

    def test_common_phi_shift_keeps_sigma_z(self, rng):
        thetas = rng.uniform(0, np.pi, 2)
        phis = rng.uniform(0, 2 * np.pi, 2)

        def sigma_z(shift):
            config = ModelConfig(
                couplings=(np.eye(3), np.eye(3)),
                modes=tuple(DissipativeMode(theta=t, phi=p + shift, mu=1.0) for t, p in zip(thetas, phis)),
            )
            rho, _ = central_steady_state(config)
            return bloch_vector(rho.mat)[2]

        reference = sigma_z(0.0)
        for shift in (0.3, 1.7, 4.0):
            assert sigma_z(shift) == pytest.approx(reference, abs=1e-10)
