# qcore/qcore_utils.py
"""
Dense open-quantum-system primitives.

Operators are complex numpy arrays. Superoperators act on column-stacked
vectorized operators, vec(A X B) = (B^T kron A) vec(X), everywhere in the package.
"""
import string
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy import linalg

import settings
from exceptions import (
    DegenerateSteadyState,
    DimensionMismatch,
    InvalidArgument,
    InvalidDensityMatrix,
    NegativeRate,
    NoSteadyState,
    NonHermitianHamiltonian,
)
from logger_config import get_logger

logger = get_logger(__name__)

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


# ==================== TYPES ====================
@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite state of dimension 2^k"""
    mat: np.ndarray

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def violations(
            self,
            hermitian_tol: float = settings.HERMITIAN_TOL,
            trace_tol: float = settings.HERMITIAN_TOL,
            psd_tol: float = 1e-9
    ) -> List[str]:
        m = self.mat
        problems = []
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            return [f"not square: shape {m.shape}"]
        if not np.all(np.isfinite(m)):
            return ["non-finite entries"]
        asym = np.max(np.abs(m - m.conj().T))
        if asym > hermitian_tol:
            problems.append(f"not Hermitian (max |M - M^dag| = {asym:.3e})")
        tr = np.trace(m)
        if abs(tr - 1) > trace_tol:
            problems.append(f"trace {tr:.6g} != 1")
        min_eig = np.min(np.linalg.eigvalsh((m + m.conj().T) / 2))
        if min_eig < -psd_tol:
            problems.append(f"negative eigenvalue {min_eig:.3e}")
        return problems

    def is_valid(self, **tolerances) -> bool:
        return not self.violations(**tolerances)

    def validate(self, **tolerances) -> 'DensityMatrix':
        problems = self.violations(**tolerances)
        if problems:
            raise InvalidDensityMatrix("; ".join(problems))
        return self


@dataclass(frozen=True, eq=False)
class SuperOp:
    """Generator on vectorized operators: mat has shape (dim^2, dim^2)"""
    dim: int
    mat: np.ndarray

    def __post_init__(self):
        if self.mat.shape != (self.dim ** 2, self.dim ** 2):
            raise DimensionMismatch(
                f"superoperator of dim {self.dim} needs shape {(self.dim ** 2,) * 2}, got {self.mat.shape}"
            )

    def __add__(self, other: 'SuperOp') -> 'SuperOp':
        if other.dim != self.dim:
            raise DimensionMismatch(f"cannot add superoperators of dim {self.dim} and {other.dim}")
        return SuperOp(self.dim, self.mat + other.mat)

    def apply(self, m: np.ndarray) -> np.ndarray:
        return devectorize(self.mat @ vectorize(m), self.dim)


# ==================== MATRIX ALGEBRA ====================
def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def kron_all(ops: Sequence[np.ndarray]) -> np.ndarray:
    result = np.eye(1, dtype=complex)
    for op in ops:
        result = np.kron(result, op)
    return result


def embed(op: np.ndarray, index: int, n_qubits: int) -> np.ndarray:
    """Place a single-qubit operator on factor `index` (0 = leftmost) of an n-qubit register"""
    factors = [IDENTITY_2] * n_qubits
    factors[index] = op
    return kron_all(factors)


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def is_hermitian(m: np.ndarray, tol: float = settings.HERMITIAN_TOL) -> bool:
    return m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - dagger(m))) <= tol)


def partial_trace(m: np.ndarray, dims: Sequence[int], keep: int) -> np.ndarray:
    """Reduce `m` on the tensor product `dims` to the subsystem `keep`"""
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if m.ndim != 2 or m.shape != (total, total):
        raise DimensionMismatch(f"matrix of shape {m.shape} does not match subsystem dims {dims}")
    if not 0 <= keep < len(dims):
        raise DimensionMismatch(f"keep={keep} outside 0..{len(dims) - 1}")

    n = len(dims)
    letters = string.ascii_letters
    rows = list(letters[:n])
    cols = list(letters[n:2 * n])
    for i in range(n):
        if i != keep:
            cols[i] = rows[i]
    subscripts = f"{''.join(rows)}{''.join(cols)}->{rows[keep]}{cols[keep]}"
    return np.einsum(subscripts, m.reshape(dims + dims))


# ==================== VECTORIZATION ====================
def vectorize(m: np.ndarray) -> np.ndarray:
    return np.asarray(m).reshape(-1, order='F')


def devectorize(v: np.ndarray, d: int) -> np.ndarray:
    return np.asarray(v).reshape((d, d), order='F')


def hamiltonian_superop(h: np.ndarray) -> SuperOp:
    d = h.shape[0]
    eye = np.eye(d, dtype=complex)
    return SuperOp(d, -1j * (np.kron(eye, h) - np.kron(h.T, eye)))


def dissipator_superop(jump: np.ndarray, rate: float = 1.0) -> SuperOp:
    """rate * (L X L^dag - 1/2 {L^dag L, X})"""
    d = jump.shape[0]
    eye = np.eye(d, dtype=complex)
    ldl = dagger(jump) @ jump
    mat = np.kron(jump.conj(), jump) - 0.5 * (np.kron(eye, ldl) + np.kron(ldl.T, eye))
    return SuperOp(d, rate * mat)


def lindblad_superop(h: np.ndarray, jumps: Sequence[Tuple[float, np.ndarray]]) -> SuperOp:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimensionMismatch(f"Hamiltonian must be square, got shape {h.shape}")
    if not is_hermitian(h):
        raise NonHermitianHamiltonian(f"max |H - H^dag| = {np.max(np.abs(h - dagger(h))):.3e}")

    generator = hamiltonian_superop(h)
    for rate, jump in jumps:
        if rate < 0:
            raise NegativeRate(f"rate {rate} < 0")
        jump = np.asarray(jump, dtype=complex)
        if jump.shape != h.shape:
            raise DimensionMismatch(f"jump operator shape {jump.shape} != Hamiltonian shape {h.shape}")
        if rate == 0:
            continue
        generator = generator + dissipator_superop(jump, rate)
    return generator


# ==================== STEADY STATE & EVOLUTION ====================
def _checked_state(rho: np.ndarray) -> DensityMatrix:
    """Hermitian part of a computed state, checked against the density-matrix invariants"""
    tol = settings.STATE_TOL
    return DensityMatrix((rho + dagger(rho)) / 2).validate(hermitian_tol=tol, trace_tol=tol, psd_tol=tol)


def steady_state(g: SuperOp, tol: float = settings.STEADY_STATE_TOL) -> Tuple[DensityMatrix, float]:
    """
    Null vector of the generator by dense eigendecomposition

    Returns:
        (steady state, spectral gap) where the gap is the smallest |Re(lambda)|
        over the non-null eigenvalues

    Raises:
        NoSteadyState: smallest |lambda| above tol
        DegenerateSteadyState: second-smallest |lambda| below tol, or a non-null
            eigenvalue with |Re(lambda)| below tol (an undamped oscillation)
        InvalidDensityMatrix: the normalized null vector is not a valid state
    """
    vals, vecs = linalg.eig(g.mat)
    order = np.argsort(np.abs(vals))

    smallest = abs(vals[order[0]])
    if smallest > tol:
        raise NoSteadyState(f"smallest eigenvalue magnitude {smallest:.3e} > {tol:.0e}")

    if len(vals) > 1:
        second = abs(vals[order[1]])
        if second < tol:
            raise DegenerateSteadyState(f"second eigenvalue magnitude {second:.3e} < {tol:.0e}")
        gap = float(np.min(np.abs(vals[order[1:]].real)))
        if gap < tol:
            raise DegenerateSteadyState(f"non-relaxing eigenvalue, |Re| = {gap:.3e}")
    else:
        gap = float('inf')

    rho = devectorize(vecs[:, order[0]], g.dim)
    rho = rho / np.trace(rho)
    return _checked_state(rho), gap


def propagate(g: SuperOp, rho0: DensityMatrix, t: float) -> DensityMatrix:
    if t < 0:
        raise InvalidArgument(f"t must be >= 0, got {t}")
    if rho0.dim != g.dim:
        raise DimensionMismatch(f"state dim {rho0.dim} != generator dim {g.dim}")
    if t == 0:
        return rho0
    v = linalg.expm(g.mat * t) @ vectorize(rho0.mat)
    return _checked_state(devectorize(v, g.dim))


def residual(g: SuperOp, rho: DensityMatrix) -> float:
    return float(np.linalg.norm(g.mat @ vectorize(rho.mat)))


# ==================== QUBIT HELPERS ====================
def bloch_vector(rho: np.ndarray) -> np.ndarray:
    return np.array([np.trace(p @ rho).real for p in PAULIS])


def density_from_bloch(r: Sequence[float]) -> DensityMatrix:
    r = np.asarray(r, dtype=float)
    mat = 0.5 * (IDENTITY_2 + r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z)
    return DensityMatrix(mat)


def projector(ket: np.ndarray) -> np.ndarray:
    ket = np.asarray(ket, dtype=complex).reshape(-1, 1)
    return ket @ dagger(ket)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    diff = a - b
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh((diff + dagger(diff)) / 2))))
