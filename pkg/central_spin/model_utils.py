# central_spin/model_utils.py
"""
Full central-spin model: one central qubit (tensor factor 0) coupled to N
auxiliary qubits (factors 1..N) through H = sum_n sigma^0 . (J_n sigma^n),
with each auxiliary qubit driven by its own dissipative mode at strength gamma.
"""
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

import settings
from dissipation.dissipation_utils import DissipativeMode, lindblad_ops
from exceptions import InvalidArgument, ModelTooLarge
from qcore.qcore_utils import (
    PAULIS,
    DensityMatrix,
    SuperOp,
    embed,
    lindblad_superop,
    steady_state,
)
from logger_config import get_logger

logger = get_logger(__name__)


def as_coupling(j) -> np.ndarray:
    """Validate one real 3x3 coupling matrix"""
    j = np.asarray(j)
    if np.iscomplexobj(j):
        if np.any(j.imag != 0):
            raise InvalidArgument("coupling matrices must be real")
        j = j.real
    j = np.array(j, dtype=float)
    if j.size == 9:
        j = j.reshape(3, 3)
    if j.shape != (3, 3):
        raise InvalidArgument(f"coupling matrix must be 3x3, got shape {j.shape}")
    if not np.all(np.isfinite(j)):
        raise InvalidArgument("coupling matrix has non-finite entries")
    j.setflags(write=False)
    return j


@dataclass(frozen=True, eq=False)
class ModelConfig:
    couplings: Tuple[np.ndarray, ...]
    modes: Tuple[DissipativeMode, ...]
    gamma: float = settings.GAMMA

    def __post_init__(self):
        couplings = tuple(as_coupling(j) for j in self.couplings)
        modes = tuple(self.modes)
        if not couplings:
            raise InvalidArgument("at least one auxiliary qubit is required")
        if len(couplings) != len(modes):
            raise InvalidArgument(f"{len(couplings)} coupling matrices but {len(modes)} modes")
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise InvalidArgument(f"gamma must be > 0, got {self.gamma}")
        object.__setattr__(self, 'couplings', couplings)
        object.__setattr__(self, 'modes', modes)
        object.__setattr__(self, 'gamma', float(self.gamma))

    @property
    def n_aux(self) -> int:
        return len(self.couplings)

    @property
    def n_qubits(self) -> int:
        return self.n_aux + 1

    def with_gamma(self, gamma: float) -> 'ModelConfig':
        return replace(self, gamma=gamma)

    def with_modes(self, modes: Sequence[DissipativeMode]) -> 'ModelConfig':
        return replace(self, modes=tuple(modes))


def random_couplings(n_aux: int, rng: np.random.Generator, std: float = settings.INIT_STD) -> Tuple[np.ndarray, ...]:
    return tuple(rng.normal(0.0, std, size=(3, 3)) for _ in range(n_aux))


def random_config(
        n_aux: int,
        rng: np.random.Generator,
        mu: Optional[float] = None,
        gamma: float = settings.GAMMA,
        std: float = settings.INIT_STD
) -> ModelConfig:
    """Random couplings and random mode directions (mu drawn uniformly when not given)"""
    couplings = random_couplings(n_aux, rng, std)
    modes = tuple(
        DissipativeMode(
            theta=float(rng.uniform(0, np.pi)),
            phi=float(rng.uniform(0, 2 * np.pi)),
            mu=float(rng.uniform(-1, 1)) if mu is None else mu,
        )
        for _ in range(n_aux)
    )
    return ModelConfig(couplings=couplings, modes=modes, gamma=gamma)


# ==================== HAMILTONIAN & LIOUVILLIAN ====================
def build_hamiltonian(config: ModelConfig) -> np.ndarray:
    n_qubits = config.n_qubits
    dim = 2 ** n_qubits
    h = np.zeros((dim, dim), dtype=complex)
    central = [embed(p, 0, n_qubits) for p in PAULIS]
    for n, j in enumerate(config.couplings, start=1):
        aux = [embed(p, n, n_qubits) for p in PAULIS]
        for a in range(3):
            for b in range(3):
                if j[a, b] != 0:
                    h += j[a, b] * (central[a] @ aux[b])
    return h


def full_jump_operators(config: ModelConfig):
    """(gamma, L) pairs with each mode's operators embedded on its auxiliary qubit"""
    jumps = []
    for n, mode in enumerate(config.modes, start=1):
        for op in lindblad_ops(mode):
            if np.any(op != 0):
                jumps.append((config.gamma, embed(op, n, config.n_qubits)))
    return jumps


def check_full_size(config: ModelConfig, max_aux: int = settings.FULL_SOLVER_MAX_AUX):
    if config.n_aux > max_aux:
        raise ModelTooLarge(f"full solver capped at N={max_aux} (got N={config.n_aux})")


def build_full_liouvillian(config: ModelConfig, max_aux: int = settings.FULL_SOLVER_MAX_AUX) -> SuperOp:
    check_full_size(config, max_aux)
    return lindblad_superop(build_hamiltonian(config), full_jump_operators(config))


def full_steady_state(config: ModelConfig, max_aux: int = settings.FULL_SOLVER_MAX_AUX) -> Tuple[DensityMatrix, float]:
    generator = build_full_liouvillian(config, max_aux)
    logger.debug(f"🔍 Solving full steady state: dim {generator.mat.shape[0]}, gamma={config.gamma}")
    return steady_state(generator)
