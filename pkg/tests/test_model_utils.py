# tests/test_model_utils.py
import pytest
import numpy as np

from central_spin.model_utils import (
    ModelConfig,
    as_coupling,
    build_full_liouvillian,
    build_hamiltonian,
    full_jump_operators,
    full_steady_state,
    random_config,
)
from dissipation.dissipation_utils import DissipativeMode, stationary_state
from exceptions import DegenerateSteadyState, InvalidArgument, ModelTooLarge
from qcore.qcore_utils import SIGMA_X, hamiltonian_superop, is_hermitian, partial_trace, residual, trace_distance


class TestModelConfig:
    """Coupling and configuration validation"""

    def test_coupling_accepts_flat_row_major(self):
        j = as_coupling(list(range(9)))
        assert j.shape == (3, 3)
        assert j[0, 2] == 2 and j[2, 0] == 6

    def test_coupling_must_be_real(self):
        with pytest.raises(InvalidArgument):
            as_coupling(np.eye(3) * 1j)

    def test_coupling_shape(self):
        with pytest.raises(InvalidArgument):
            as_coupling(np.eye(2))

    def test_coupling_finite(self):
        with pytest.raises(InvalidArgument):
            as_coupling(np.full((3, 3), np.inf))

    def test_couplings_are_read_only(self):
        config = ModelConfig(couplings=(np.eye(3),), modes=(DissipativeMode(0.1, 0.2),))
        with pytest.raises(ValueError):
            config.couplings[0][0, 0] = 5.0

    def test_mode_count_must_match(self):
        with pytest.raises(InvalidArgument):
            ModelConfig(couplings=(np.eye(3), np.eye(3)), modes=(DissipativeMode(0.1, 0.2),))

    def test_needs_an_auxiliary_qubit(self):
        with pytest.raises(InvalidArgument):
            ModelConfig(couplings=(), modes=())

    def test_gamma_positive(self):
        with pytest.raises(InvalidArgument):
            ModelConfig(couplings=(np.eye(3),), modes=(DissipativeMode(0.1, 0.2),), gamma=0.0)

    def test_with_gamma_keeps_everything_else(self, random_model):
        scaled = random_model.with_gamma(1000.0)
        assert scaled.gamma == 1000.0
        assert scaled.modes == random_model.modes
        assert all(np.array_equal(a, b) for a, b in zip(scaled.couplings, random_model.couplings))

    def test_random_config_is_seeded(self):
        first = random_config(3, np.random.default_rng(7))
        second = random_config(3, np.random.default_rng(7))

        assert first.modes == second.modes
        assert all(np.array_equal(a, b) for a, b in zip(first.couplings, second.couplings))


class TestFullModel:
    """Hamiltonian, Liouvillian and full steady state"""

    def test_hamiltonian_single_term(self):
        config = ModelConfig(
            couplings=(np.diag([1.0, 0.0, 0.0]),),
            modes=(DissipativeMode(0.1, 0.2),),
        )
        assert np.allclose(build_hamiltonian(config), np.kron(SIGMA_X, SIGMA_X))

    def test_hamiltonian_hermitian_and_sized(self, rng):
        config = random_config(3, rng)
        h = build_hamiltonian(config)

        assert h.shape == (16, 16)
        assert is_hermitian(h)

    def test_jump_operator_count(self):
        partial = ModelConfig(couplings=(np.eye(3),), modes=(DissipativeMode(0.1, 0.2, mu=0.3),))
        polarized = ModelConfig(couplings=(np.eye(3),), modes=(DissipativeMode(0.1, 0.2, mu=1.0),))

        assert len(full_jump_operators(partial)) == 2
        assert len(full_jump_operators(polarized)) == 1
        assert all(rate == 100.0 for rate, _ in full_jump_operators(partial))

    def test_size_cap(self, rng):
        with pytest.raises(ModelTooLarge, match="full solver capped at N=4"):
            build_full_liouvillian(random_config(5, rng))

    def test_liouvillian_linear_in_gamma(self, random_model):
        base = build_full_liouvillian(random_model.with_gamma(100.0)).mat
        doubled = build_full_liouvillian(random_model.with_gamma(200.0)).mat
        dissipator = base - hamiltonian_superop(build_hamiltonian(random_model)).mat

        assert np.max(np.abs((doubled - base) - dissipator)) < 1e-9

    def test_full_steady_state(self, random_model):
        generator = build_full_liouvillian(random_model)
        rho, gap = full_steady_state(random_model)

        assert rho.dim == 8
        assert rho.is_valid()
        assert gap > 0
        assert residual(generator, rho) <= 1e-8

    def test_auxiliary_qubits_near_their_stationary_states(self, random_model):
        rho, _ = full_steady_state(random_model.with_gamma(1000.0))
        for n, mode in enumerate(random_model.modes, start=1):
            aux = partial_trace(rho.mat, [2, 2, 2], keep=n)
            assert trace_distance(aux, stationary_state(mode)) < 0.05

    def test_decoupled_central_qubit_is_degenerate(self):
        config = ModelConfig(couplings=(np.zeros((3, 3)),), modes=(DissipativeMode(0.3, 0.0),))
        with pytest.raises(DegenerateSteadyState):
            full_steady_state(config)
