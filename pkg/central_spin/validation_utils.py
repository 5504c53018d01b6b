# central_spin/validation_utils.py
from typing import Dict, List, Sequence

import settings
from central_spin.elimination_utils import central_steady_state, effective_generator
from central_spin.model_utils import ModelConfig, build_full_liouvillian, check_full_size
from dissipation.dissipation_utils import stationary_state
from qcore.qcore_utils import (
    DensityMatrix,
    bloch_vector,
    kron_all,
    partial_trace,
    propagate,
    steady_state,
    trace_distance,
)
from logger_config import get_logger

logger = get_logger(__name__)


def validate_effective(
        config: ModelConfig,
        gammas: Sequence[float] = settings.VALIDATION_GAMMAS,
        route: str = 'closed',
        max_aux: int = settings.FULL_SOLVER_MAX_AUX
) -> List[Dict]:
    """
    Compare the full-model central-qubit steady state with the effective one

    Returns:
        One row per gamma:
        {'gamma', 'trace_distance', 'aux_distances', 'max_aux_distance', 'full_gap', 'effective_gap'}
    """
    check_full_size(config, max_aux)
    dims = [2] * config.n_qubits
    rows = []

    for gamma in gammas:
        scaled = config.with_gamma(gamma)
        full_state, full_gap = steady_state(build_full_liouvillian(scaled, max_aux))
        effective_state, effective_gap = central_steady_state(scaled, route)

        central = partial_trace(full_state.mat, dims, keep=0)
        distance = trace_distance(central, effective_state.mat)

        aux_distances = [
            trace_distance(partial_trace(full_state.mat, dims, keep=n), stationary_state(mode))
            for n, mode in enumerate(scaled.modes, start=1)
        ]

        logger.info(
            f"📊 gamma={gamma:g}: trace distance {distance:.3e} "
            f"(bound {5 / gamma:.3e}) | max aux distance {max(aux_distances):.3e}"
        )
        rows.append({
            'gamma': float(gamma),
            'trace_distance': distance,
            'aux_distances': aux_distances,
            'max_aux_distance': max(aux_distances),
            'full_gap': full_gap,
            'effective_gap': effective_gap,
        })

    return rows


def relaxation_trace(
        config: ModelConfig,
        rho0: DensityMatrix,
        times: Sequence[float],
        route: str = 'closed'
) -> List[Dict]:
    """Central-qubit relaxation under the effective generator towards its steady state"""
    generator = effective_generator(config, route).superop
    target, _ = steady_state(generator)
    rows = []
    for t in times:
        rho_t = propagate(generator, rho0, float(t)).mat
        x, y, z = bloch_vector(rho_t)
        rows.append({
            'time': float(t),
            'x': x,
            'y': y,
            'z': z,
            'trace_distance': trace_distance(rho_t, target.mat),
        })
    return rows


def full_relaxation_trace(
        config: ModelConfig,
        rho0: DensityMatrix,
        times: Sequence[float],
        max_aux: int = settings.FULL_SOLVER_MAX_AUX
) -> List[Dict]:
    """
    Same trace for the full model: the auxiliary qubits start in their stationary
    states and only the central marginal is reported.
    """
    generator = build_full_liouvillian(config, max_aux)
    dims = [2] * config.n_qubits
    start = DensityMatrix(kron_all([rho0.mat] + [stationary_state(m) for m in config.modes]))
    target, _ = steady_state(generator)
    target_central = partial_trace(target.mat, dims, keep=0)

    rows = []
    for t in times:
        central = partial_trace(propagate(generator, start, float(t)).mat, dims, keep=0)
        x, y, z = bloch_vector(central)
        rows.append({
            'time': float(t),
            'x': x,
            'y': y,
            'z': z,
            'trace_distance': trace_distance(central, target_central),
        })
    return rows
