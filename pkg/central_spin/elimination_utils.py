# central_spin/elimination_utils.py
"""
Effective single-qubit generator of the central qubit for strong dissipation.

Two independent routes:
    general  - g-operators by partial trace against the tensor-product eigenbasis,
               coefficient tables C, Y, A, B, and the second-order sum over all
               multi-indices with Re(Xi) < 0
    closed   - closed-form g-operators in the Bloch frame of each mode and the
               fixed channel rates 2(1+mu), 2(1-mu), (1-mu^2)/2
Both produce -i[h_D + h_a/gamma, .] + (1/gamma) * D_eff.
"""
import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

import settings
from central_spin.model_utils import ModelConfig, build_hamiltonian
from dissipation.dissipation_utils import bloch_frame, eigensystem
from exceptions import InvalidArgument, RouteMismatch
from qcore.qcore_utils import (
    IDENTITY_2,
    PAULIS,
    DensityMatrix,
    SuperOp,
    dagger,
    hamiltonian_superop,
    kron_all,
    lindblad_superop,
    partial_trace,
    steady_state,
)
from logger_config import get_logger

logger = get_logger(__name__)

ROUTES = ('general', 'closed')

MultiIndex = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class EffectiveGenerator:
    h_d: np.ndarray
    channels: List[Tuple[float, np.ndarray]]
    superop: SuperOp
    h_a: np.ndarray
    route: str


@dataclass(frozen=True, eq=False)
class CoefficientTables:
    """
    Tables over the retained multi-indices (all entries k_n in 0..3, not all zero).

    `c_zero` is the coefficient of the all-zero index, Tr(Psi_0) = 1.
    """
    indices: List[MultiIndex]
    xi: np.ndarray
    c: np.ndarray
    y: np.ndarray
    a: np.ndarray
    b: np.ndarray
    g_ops: Dict[MultiIndex, np.ndarray]
    c_zero: complex


def pauli_dot(vector: Sequence[complex]) -> np.ndarray:
    """vector . (sigma_x, sigma_y, sigma_z)"""
    return sum(c * p for c, p in zip(vector, PAULIS))


# ==================== CLOSED ROUTE ====================
def g_operators_closed(config: ModelConfig, n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    if not 0 <= n < config.n_aux:
        raise InvalidArgument(f"auxiliary index {n} outside 0..{config.n_aux - 1}")
    j = config.couplings[n]
    mode = config.modes[n]
    v, v_prime, v_double = bloch_frame(mode)

    g0 = mode.mu * pauli_dot(j @ v)
    g1 = pauli_dot(j @ v_prime) - 1j * pauli_dot(j @ v_double)
    g2 = dagger(g1)
    g3 = 2 * pauli_dot(j @ v)
    return g0, g1, g2, g3


def closed_channels(config: ModelConfig) -> List[Tuple[float, np.ndarray]]:
    channels = []
    for n, mode in enumerate(config.modes):
        _, g1, g2, g3 = g_operators_closed(config, n)
        mu = mode.mu
        channels.append((2 * (1 + mu), g1))
        channels.append((2 * (1 - mu), g2))
        channels.append(((1 - mu ** 2) / 2, g3))
    return channels


def _closed_generator(config: ModelConfig) -> EffectiveGenerator:
    h_d = sum(g_operators_closed(config, n)[0] for n in range(config.n_aux))
    channels = closed_channels(config)
    superop = lindblad_superop(h_d, [(rate / config.gamma, op) for rate, op in channels])
    return EffectiveGenerator(
        h_d=h_d,
        channels=channels,
        superop=superop,
        h_a=np.zeros((2, 2), dtype=complex),
        route='closed',
    )


# ==================== GENERAL ROUTE ====================
def _check_multi_index(config: ModelConfig, multi_index: Sequence[int]) -> MultiIndex:
    multi_index = tuple(int(k) for k in multi_index)
    if len(multi_index) != config.n_aux or any(k not in range(4) for k in multi_index):
        raise InvalidArgument(f"multi-index {multi_index} invalid for N={config.n_aux}")
    return multi_index


def g_operators_general(config: ModelConfig, multi_index: Sequence[int], hamiltonian: Optional[np.ndarray] = None) -> np.ndarray:
    """g = Tr_{aux}((I kron Psi_multi_index) H)"""
    multi_index = _check_multi_index(config, multi_index)
    if hamiltonian is None:
        hamiltonian = build_hamiltonian(config)
    psi = [eigensystem(mode).psi[k] for mode, k in zip(config.modes, multi_index)]
    weight = kron_all([IDENTITY_2] + psi)
    return partial_trace(weight @ hamiltonian, [2] * config.n_qubits, keep=0)


def _nonzero_indices(n_aux: int) -> List[MultiIndex]:
    return [idx for idx in itertools.product(range(4), repeat=n_aux) if any(idx)]


def coefficient_tables(config: ModelConfig) -> CoefficientTables:
    """C = Tr(Phi^dag Phi' Psi_0), Y = -C / Xi^*, A = Y + Y^*, B = (Y - Y^*) / 2i"""
    systems = [eigensystem(mode) for mode in config.modes]

    # Per-site factors Tr(phi_k^dag phi_k' psi_0); the multi-site trace factorizes
    site_tables = []
    for system in systems:
        psi0 = system.psi[0]
        site_tables.append(np.array([
            [np.trace(dagger(f) @ f2 @ psi0) for f2 in system.phi_comp]
            for f in system.phi_comp
        ]))

    indices = _nonzero_indices(config.n_aux)
    xi = np.array([
        sum(system.xi[k] for system, k in zip(systems, idx))
        for idx in indices
    ], dtype=complex)

    size = len(indices)
    c = np.ones((size, size), dtype=complex)
    for n, table in enumerate(site_tables):
        ks = np.array([idx[n] for idx in indices])
        c *= table[np.ix_(ks, ks)]

    y = -c / xi.conj()[:, None]
    a = y + y.conj()
    b = (y - y.conj()) / 2j

    hamiltonian = build_hamiltonian(config)
    g_ops = {idx: g_operators_general(config, idx, hamiltonian) for idx in indices}

    c_zero = np.prod([np.trace(s.psi[0]) for s in systems])
    return CoefficientTables(indices=indices, xi=xi, c=c, y=y, a=a, b=b, g_ops=g_ops, c_zero=c_zero)


def _general_generator(config: ModelConfig) -> EffectiveGenerator:
    tables = coefficient_tables(config)
    h_d = g_operators_general(config, (0,) * config.n_aux)
    g = np.array([tables.g_ops[idx] for idx in tables.indices])

    # h_a = sum B_ij g_i^dag g_j
    h_a = np.einsum('ij,iba,jbc->ac', tables.b, g.conj(), g)
    h_a_norm = float(np.linalg.norm(h_a))
    if h_a_norm > settings.ROUTE_TOL:
        raise RouteMismatch(f"second-order Hamiltonian correction |h_a| = {h_a_norm:.3e} is not zero")

    # D_eff R = sum A_ij (g_j R g_i^dag - 1/2 {g_i^dag g_j, R}) in column-stacked form
    jump_part = np.einsum('ij,iab,jcd->acbd', tables.a, g.conj(), g).reshape(4, 4)
    k = np.einsum('ij,iba,jbc->ac', tables.a, g.conj(), g)
    dissipator = jump_part - 0.5 * (np.kron(IDENTITY_2, k) + np.kron(k.T, IDENTITY_2))

    generator = hamiltonian_superop(h_d + h_a / config.gamma)
    superop = SuperOp(2, generator.mat + dissipator / config.gamma)

    # Diagonal channel form of A: A = U diag(lam) U^dag, L_k = sum_j conj(U_jk) g_j
    lam, u = np.linalg.eigh((tables.a + dagger(tables.a)) / 2)
    channels = []
    for weight, column in zip(lam, u.T):
        if weight > settings.HERMITIAN_TOL:
            channels.append((float(weight), np.einsum('j,jab->ab', column.conj(), g)))

    return EffectiveGenerator(h_d=h_d, channels=channels, superop=superop, h_a=h_a, route='general')


# ==================== PUBLIC ====================
def route_difference(first: EffectiveGenerator, second: EffectiveGenerator) -> float:
    return float(np.max(np.abs(first.superop.mat - second.superop.mat)))


def effective_generator(
        config: ModelConfig,
        route: str = 'closed',
        cross_check: bool = False
) -> EffectiveGenerator:
    if route not in ROUTES:
        raise InvalidArgument(f"unknown route '{route}', expected one of {ROUTES}")

    generator = _general_generator(config) if route == 'general' else _closed_generator(config)

    if cross_check:
        other = _closed_generator(config) if route == 'general' else _general_generator(config)
        diff = route_difference(generator, other)
        if diff > settings.ROUTE_TOL:
            raise RouteMismatch(f"general and closed routes differ by {diff:.3e}")
        logger.debug(f"✅ Routes agree to {diff:.3e}")

    return generator


def central_steady_state(config: ModelConfig, route: str = 'closed') -> Tuple[DensityMatrix, float]:
    return steady_state(effective_generator(config, route).superop)
