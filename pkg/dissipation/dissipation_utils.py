# dissipation/dissipation_utils.py
"""
Engineered dissipative modes of the auxiliary qubits.

Each mode (theta, phi, mu) pumps its qubit towards
psi_0 = (1+mu)/2 |s><s| + (1-mu)/2 |s_perp><s_perp| through two Lindblad channels.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from exceptions import InvalidArgument
from qcore.qcore_utils import SuperOp, dissipator_superop, projector

TWO_PI = 2 * np.pi

# Eigenvalues of the unit-strength dissipator, paired with psi_0..psi_3
MODE_EIGENVALUES = (0.0, -0.5, -0.5, -1.0)


@dataclass(frozen=True)
class DissipativeMode:
    """
    Dissipation parameters of one auxiliary qubit.

    Angles are wrapped onto theta in [0, pi], phi in [0, 2pi); the wrap maps
    (theta, phi) to a parameter pair describing the same Bloch direction.
    """
    theta: float
    phi: float
    mu: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.theta) or not np.isfinite(self.phi):
            raise InvalidArgument(f"non-finite mode angles ({self.theta}, {self.phi})")
        if not -1.0 <= self.mu <= 1.0:
            raise InvalidArgument(f"mu must lie in [-1, 1], got {self.mu}")

        theta, phi = wrap_angles(self.theta, self.phi)
        object.__setattr__(self, 'theta', theta)
        object.__setattr__(self, 'phi', phi)


@dataclass(frozen=True, eq=False)
class ModeEigensystem:
    psi: Tuple[np.ndarray, ...]
    phi_comp: Tuple[np.ndarray, ...]
    xi: Tuple[float, ...]


def wrap_angles(theta: float, phi: float) -> Tuple[float, float]:
    theta = float(theta) % TWO_PI
    phi = float(phi)
    if theta > np.pi:
        theta = TWO_PI - theta
        phi += np.pi
    return theta, phi % TWO_PI


def kets(mode: DissipativeMode) -> Tuple[np.ndarray, np.ndarray]:
    """|s> and |s_perp> for the mode's Bloch direction"""
    c, s = np.cos(mode.theta / 2), np.sin(mode.theta / 2)
    left, right = np.exp(-0.5j * mode.phi), np.exp(0.5j * mode.phi)
    ket_s = np.array([c * left, s * right], dtype=complex)
    ket_perp = np.array([s * left, -c * right], dtype=complex)
    return ket_s, ket_perp


def bloch_direction(theta: float, phi: float) -> np.ndarray:
    return np.array([
        np.sin(theta) * np.cos(phi),
        np.sin(theta) * np.sin(phi),
        np.cos(theta),
    ])


def bloch_frame(mode: DissipativeMode) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(v, v', v'') with v' = v(pi/2 - theta, phi + pi) and v'' = v(pi/2, phi + pi/2)"""
    v = bloch_direction(mode.theta, mode.phi)
    v_prime = bloch_direction(np.pi / 2 - mode.theta, mode.phi + np.pi)
    v_double = bloch_direction(np.pi / 2, mode.phi + np.pi / 2)
    return v, v_prime, v_double


def _outer(ket: np.ndarray, bra: np.ndarray) -> np.ndarray:
    """|ket><bra|"""
    return np.outer(ket, bra.conj())


def lindblad_ops(mode: DissipativeMode) -> Tuple[np.ndarray, np.ndarray]:
    """
    Weighted jump operators (L1, L2).

    L1 = sqrt((1+mu)/2) |s><s_perp| pumps into |s>, L2 = sqrt((1-mu)/2) |s_perp><s|,
    so that psi_0 of the eigenbasis is the stationary state.
    """
    ket_s, ket_perp = kets(mode)
    l1 = np.sqrt((1 + mode.mu) / 2) * _outer(ket_s, ket_perp)
    l2 = np.sqrt((1 - mode.mu) / 2) * _outer(ket_perp, ket_s)
    return l1, l2


def mode_dissipator(mode: DissipativeMode) -> SuperOp:
    """Single-qubit dissipator at unit strength"""
    l1, l2 = lindblad_ops(mode)
    return dissipator_superop(l1) + dissipator_superop(l2)


def eigensystem(mode: DissipativeMode) -> ModeEigensystem:
    ket_s, ket_perp = kets(mode)
    p_s = projector(ket_s)
    p_perp = projector(ket_perp)
    up = (1 + mode.mu) / 2
    down = (1 - mode.mu) / 2

    psi = (
        up * p_s + down * p_perp,
        _outer(ket_s, ket_perp),
        _outer(ket_perp, ket_s),
        p_s - p_perp,
    )
    phi_comp = (
        np.eye(2, dtype=complex),
        _outer(ket_perp, ket_s),
        _outer(ket_s, ket_perp),
        down * p_s - up * p_perp,
    )
    return ModeEigensystem(psi=psi, phi_comp=phi_comp, xi=MODE_EIGENVALUES)


def stationary_state(mode: DissipativeMode) -> np.ndarray:
    return eigensystem(mode).psi[0]


def biorthonormality_matrix(system: ModeEigensystem) -> np.ndarray:
    """[Tr(psi_l phi_k)]_{lk}; the identity for a valid eigensystem"""
    return np.array([[np.trace(p @ f) for f in system.phi_comp] for p in system.psi])


def encode_features(
        thetas: Sequence[float],
        phis: Optional[Sequence[float]] = None,
        mu: float = 1.0
) -> List[DissipativeMode]:
    """One mode per feature; phi defaults to 0 for every qubit"""
    if phis is None:
        phis = [0.0] * len(thetas)
    if len(phis) != len(thetas):
        raise InvalidArgument(f"{len(thetas)} thetas but {len(phis)} phis")
    return [DissipativeMode(theta=t, phi=p, mu=mu) for t, p in zip(thetas, phis)]

