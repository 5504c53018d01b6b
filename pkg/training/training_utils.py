# training/training_utils.py
"""
Losses, finite-difference gradients, learning-rate schedules and the two
full-batch gradient-descent loops (state preparation, binary classification).
"""
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.special import expit
from tqdm import tqdm

import settings
from central_spin.elimination_utils import central_steady_state
from central_spin.model_utils import ModelConfig, random_couplings
from dissipation.dissipation_utils import DissipativeMode, encode_features
from exceptions import (
    ConfigError,
    EmptyDataset,
    InvalidArgument,
    NonFiniteObjective,
    NumericalError,
)
from experiments.dataset_utils import LabeledSample
from qcore.qcore_utils import DensityMatrix, bloch_vector, density_from_bloch, projector
from logger_config import get_logger

logger = get_logger(__name__)

SCHEDULE_KINDS = ('constant', 'cosine')


# ==================== TYPES ====================
@dataclass(frozen=True)
class Schedule:
    kind: str = 'constant'
    eta: float = settings.ETA
    eta_max: float = settings.ETA_MAX
    eta_min: float = settings.ETA_MIN
    total_epochs: int = 1

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise InvalidArgument(f"schedule kind must be one of {SCHEDULE_KINDS}, got '{self.kind}'")
        if self.total_epochs < 1:
            raise InvalidArgument("epochs must be ≥ 1")
        if self.kind == 'constant' and not self.eta > 0:
            raise InvalidArgument(f"eta must be > 0, got {self.eta}")
        if self.kind == 'cosine' and not self.eta_max >= self.eta_min > 0:
            raise InvalidArgument(f"cosine schedule needs eta_max >= eta_min > 0, got {self.eta_max}, {self.eta_min}")


@dataclass
class TrainRecord:
    """
    Per-epoch losses plus the kept parameters. `params`, `config` and
    `final_loss` describe the lowest-loss point evaluated, reached at
    `best_epoch` (== len(epochs) when it is the point after the last update).
    """
    epochs: List[int] = field(default_factory=list)
    losses: List[float] = field(default_factory=list)
    etas: List[float] = field(default_factory=list)
    params: Optional[np.ndarray] = None
    config: Optional[ModelConfig] = None
    final_loss: float = float('nan')
    best_epoch: Optional[int] = None
    wall_clock: float = 0.0

    def append(self, epoch: int, loss: float, eta: float):
        self.epochs.append(epoch)
        self.losses.append(float(loss))
        self.etas.append(float(eta))

    def to_frame(self, value_column: str = 'loss') -> pd.DataFrame:
        return pd.DataFrame({'epoch': self.epochs, value_column: self.losses, 'eta': self.etas})

    def summary(self) -> dict:
        return {
            'epochs': len(self.epochs),
            'initial_loss': self.losses[0] if self.losses else None,
            'final_loss': self.final_loss,
            'best_epoch': self.best_epoch,
            'wall_clock': round(self.wall_clock, 3),
        }


# ==================== PARAMETER VECTORS ====================
def config_to_params(config: ModelConfig, train_modes: bool) -> np.ndarray:
    """9N coupling entries (row-major, J_1 first), then (theta_n, phi_n) pairs when modes train"""
    parts = [j.reshape(-1) for j in config.couplings]
    if train_modes:
        parts.append(np.array([[m.theta, m.phi] for m in config.modes]).reshape(-1))
    return np.concatenate(parts).astype(float)


def params_to_config(params: np.ndarray, template: ModelConfig, train_modes: bool) -> ModelConfig:
    n = template.n_aux
    expected = 9 * n + (2 * n if train_modes else 0)
    params = np.asarray(params, dtype=float)
    if params.shape != (expected,):
        raise InvalidArgument(f"parameter vector needs {expected} entries, got {params.shape}")

    couplings = tuple(params[9 * i:9 * (i + 1)].reshape(3, 3) for i in range(n))
    if train_modes:
        angles = params[9 * n:].reshape(n, 2)
        modes = tuple(
            DissipativeMode(theta=t, phi=p, mu=m.mu)
            for (t, p), m in zip(angles, template.modes)
        )
    else:
        modes = template.modes
    return ModelConfig(couplings=couplings, modes=modes, gamma=template.gamma)


def initial_config(
        n_aux: int,
        seed: int,
        mu: float = settings.MU,
        gamma: float = settings.GAMMA,
        std: float = settings.INIT_STD
) -> ModelConfig:
    """Couplings ~ N(0, std^2) from the seed; modes start at theta = pi/2, phi = 0"""
    rng = np.random.default_rng(seed)
    modes = tuple(DissipativeMode(theta=np.pi / 2, phi=0.0, mu=mu) for _ in range(n_aux))
    return ModelConfig(couplings=random_couplings(n_aux, rng, std), modes=modes, gamma=gamma)


# ==================== TARGETS ====================
NAMED_KETS = {
    'zero': np.array([1, 0], dtype=complex),
    'one': np.array([0, 1], dtype=complex),
    'plus': np.array([1, 1], dtype=complex) / np.sqrt(2),
    'minus': np.array([1, -1], dtype=complex) / np.sqrt(2),
    'plus_i': np.array([1, 1j], dtype=complex) / np.sqrt(2),
    'minus_i': np.array([1, -1j], dtype=complex) / np.sqrt(2),
}


def random_pure_state(seed: int) -> DensityMatrix:
    """Haar-random single-qubit pure state"""
    rng = np.random.default_rng(seed)
    ket = rng.normal(size=2) + 1j * rng.normal(size=2)
    return DensityMatrix(projector(ket / np.linalg.norm(ket)))


def resolve_target(spec: str) -> DensityMatrix:
    """
    'zero' | 'one' | 'plus' | 'minus' | 'plus_i' | 'minus_i' | 'random:<seed>'
    or a Bloch vector 'x,y,z' with norm <= 1
    """
    spec = spec.strip().lower()
    if spec in NAMED_KETS:
        return DensityMatrix(projector(NAMED_KETS[spec]))
    if spec.startswith('random:'):
        try:
            return random_pure_state(int(spec.split(':', 1)[1]))
        except ValueError:
            raise ConfigError(f"random target needs an integer seed, got '{spec}'")
    try:
        r = np.array([float(x) for x in spec.split(',')])
    except ValueError:
        raise ConfigError(f"unknown target '{spec}'")
    if r.shape != (3,) or not np.all(np.isfinite(r)) or np.linalg.norm(r) > 1 + 1e-12:
        raise ConfigError(f"target Bloch vector must have 3 finite entries and norm <= 1, got '{spec}'")
    return density_from_bloch(r)


# ==================== LOSSES ====================
def state_prep_loss(config: ModelConfig, target: DensityMatrix, route: str = 'closed') -> float:
    """Euclidean distance between the Bloch vectors of the steady state and the target"""
    rho, _ = central_steady_state(config, route)
    return float(np.linalg.norm(bloch_vector(rho.mat) - bloch_vector(target.mat)))


def sigmoid(z, k: float = settings.SIGMOID_K):
    return expit(k * np.asarray(z, dtype=float))


def sigma_z_expectation(config: ModelConfig, sample: LabeledSample, route: str = 'closed') -> float:
    modes = encode_features(
        [sample.theta1, sample.theta2],
        mu=config.modes[0].mu if config.modes else settings.MU
    )
    rho, _ = central_steady_state(config.with_modes(modes), route)
    return float(bloch_vector(rho.mat)[2])


def predict(
        config: ModelConfig,
        sample: LabeledSample,
        k: float = settings.SIGMOID_K,
        route: str = 'closed'
) -> Tuple[float, int]:
    z = sigma_z_expectation(config, sample, route)
    return float(sigmoid(z, k)), int(z >= 0)


def _map(function: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(function, items))


def predict_dataset(
        config: ModelConfig,
        dataset: Sequence[LabeledSample],
        k: float = settings.SIGMOID_K,
        threads: int = 1,
        route: str = 'closed'
) -> Tuple[np.ndarray, np.ndarray]:
    """(probabilities, classes) in dataset order"""
    z = np.array(_map(lambda s: sigma_z_expectation(config, s, route), list(dataset), threads))
    return sigmoid(z, k), (z >= 0).astype(int)


def cross_entropy(
        config: ModelConfig,
        dataset: Sequence[LabeledSample],
        k: float = settings.SIGMOID_K,
        threads: int = 1,
        route: str = 'closed'
) -> float:
    if len(dataset) == 0:
        raise EmptyDataset("cross entropy of an empty dataset")
    labels = np.array([s.label for s in dataset], dtype=float)
    if not np.all((labels == 0) | (labels == 1)):
        raise InvalidArgument("labels must be 0 or 1")

    probs, _ = predict_dataset(config, dataset, k, threads, route)
    probs = np.clip(probs, settings.PROB_EPS, 1 - settings.PROB_EPS)
    per_sample = -(labels * np.log(probs) + (1 - labels) * np.log(1 - probs))
    return float(np.mean(per_sample))


# ==================== GRADIENTS & SCHEDULES ====================
def grad_fd(
        objective: Callable[[np.ndarray], float],
        p: np.ndarray,
        h: float = settings.FD_STEP,
        threads: int = 1
) -> np.ndarray:
    """Central differences (f(p + h e_i) - f(p - h e_i)) / 2h, one coordinate per probe pair"""
    if not h > 0:
        raise InvalidArgument(f"finite-difference step must be > 0, got {h}")
    p = np.asarray(p, dtype=float)

    probes = []
    for i in range(p.size):
        for sign in (1.0, -1.0):
            shifted = p.copy()
            shifted[i] += sign * h
            probes.append(shifted)

    values = np.array(_map(objective, probes, threads), dtype=float)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0]) // 2
        raise NonFiniteObjective(f"objective returned a non-finite value probing coordinate {bad}")

    return (values[0::2] - values[1::2]) / (2 * h)


def schedule_rate(schedule: Schedule, t: float) -> float:
    if not 0 <= t <= schedule.total_epochs:
        raise InvalidArgument(f"epoch {t} outside [0, {schedule.total_epochs}]")
    if schedule.kind == 'constant':
        return schedule.eta
    return schedule.eta_min + 0.5 * (schedule.eta_max - schedule.eta_min) * (
            1 + np.cos(np.pi * t / schedule.total_epochs))


# ==================== TRAINING LOOPS ====================
def _descend(
        objective: Callable[[np.ndarray], float],
        params: np.ndarray,
        epochs: int,
        schedule: Schedule,
        h: float,
        threads: int,
        label: str,
        zero_gradient_below: Optional[float] = None
) -> Tuple[TrainRecord, np.ndarray]:
    if epochs < 1:
        raise InvalidArgument("epochs must be ≥ 1")

    record = TrainRecord()
    best_loss, best_params, best_epoch = np.inf, params, 0
    start = time.perf_counter()
    logger.info(f"🚀 Starting {label}: {params.size} parameters, {epochs} epochs, {schedule.kind} schedule")

    iterator = tqdm(range(epochs), desc=label, disable=not settings.PROGRESS)
    for epoch in iterator:
        try:
            loss = objective(params)
            if not np.isfinite(loss):
                raise NonFiniteObjective(f"objective is {loss}")
            eta = schedule_rate(schedule, epoch)
            record.append(epoch, loss, eta)
            if loss < best_loss:
                best_loss, best_params, best_epoch = loss, params, epoch

            if zero_gradient_below is not None and loss < zero_gradient_below:
                gradient = np.zeros_like(params)
            else:
                gradient = grad_fd(objective, params, h, threads)
            params = params - eta * gradient

        except NumericalError as e:
            logger.error(f"❌ {label} failed at epoch {epoch}: {e}")
            e.epoch = epoch
            raise

        if epoch % settings.LOG_EVERY == 0 or epoch == epochs - 1:
            logger.info(f"📈 {label} epoch {epoch}: loss={loss:.6f} eta={eta:.4f}")

    try:
        loss = float(objective(params))
    except NumericalError as e:
        logger.error(f"❌ {label} failed evaluating the final parameters: {e}")
        e.epoch = epochs
        raise
    if np.isfinite(loss) and loss < best_loss:
        best_loss, best_params, best_epoch = loss, params, epochs

    # Fixed-step descent can cycle around the minimum; the lowest-loss point is kept
    record.final_loss = float(best_loss)
    record.best_epoch = best_epoch
    record.params = best_params
    record.wall_clock = time.perf_counter() - start
    logger.info("=" * 60)
    logger.info(f"✅ {label} finished: loss {record.losses[0]:.6f} → {record.final_loss:.6f} "
                f"(epoch {best_epoch}) in {record.wall_clock:.1f}s")
    logger.info("=" * 60)
    return record, best_params


def train_state_prep(
        target: DensityMatrix,
        init: ModelConfig,
        epochs: int = settings.STATE_PREP_EPOCHS,
        schedule: Optional[Schedule] = None,
        h: float = settings.FD_STEP,
        threads: int = 1,
        route: str = 'closed'
) -> TrainRecord:
    """Gradient descent on couplings and mode angles towards a target steady state"""
    schedule = schedule or Schedule(kind='constant', total_epochs=epochs)

    def objective(p: np.ndarray) -> float:
        return state_prep_loss(params_to_config(p, init, train_modes=True), target, route)

    record, params = _descend(
        objective,
        config_to_params(init, train_modes=True),
        epochs,
        schedule,
        h,
        threads,
        label='state preparation',
        zero_gradient_below=settings.LOSS_FLOOR,
    )
    record.config = params_to_config(params, init, train_modes=True)
    return record


def train_classifier(
        dataset: Sequence[LabeledSample],
        init: ModelConfig,
        epochs: int = settings.CLASSIFIER_EPOCHS,
        schedule: Optional[Schedule] = None,
        h: float = settings.FD_STEP,
        k: float = settings.SIGMOID_K,
        threads: int = 1,
        route: str = 'closed'
) -> TrainRecord:
    """Gradient descent on the 9N coupling entries; mode angles come from the data"""
    if len(dataset) == 0:
        raise EmptyDataset("training set is empty")
    if init.n_aux != 2:
        raise InvalidArgument(f"two features need two auxiliary qubits, got N={init.n_aux}")
    schedule = schedule or Schedule(kind='cosine', total_epochs=epochs)
    dataset = list(dataset)

    # Probes run in parallel; each cost evaluation stays sequential over samples
    def objective(p: np.ndarray) -> float:
        return cross_entropy(params_to_config(p, init, train_modes=False), dataset, k, 1, route)

    record, params = _descend(
        objective,
        config_to_params(init, train_modes=False),
        epochs,
        schedule,
        h,
        threads,
        label='classifier training',
    )
    record.config = params_to_config(params, init, train_modes=False)
    return record
