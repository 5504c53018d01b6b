# run_config.py
"""
Flat KEY=value run files. One file (plus the --seed/--out/--threads/--svg
flags) fully determines a run.
"""
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np
from dotenv import dotenv_values

import settings
from exceptions import ConfigError
from logger_config import get_logger

logger = get_logger(__name__)

TASKS = ('prepare', 'classify')
SCHEDULES = ('constant', 'cosine')


def _parse_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ('true', '1', 'yes', 'on'):
        return True
    if lowered in ('false', '0', 'no', 'off'):
        return False
    raise ValueError(f"not a boolean: '{value}'")


def _parse_floats(value: str) -> Tuple[float, ...]:
    return tuple(float(part) for part in value.split(',') if part.strip())


def _parse_times(value: str) -> Tuple[float, ...]:
    """'0,1,5' or 'start:stop:count'"""
    if ':' in value:
        start, stop, count = value.split(':')
        return tuple(float(t) for t in np.linspace(float(start), float(stop), int(count)))
    return _parse_floats(value)


def _optional_str(value: str) -> Optional[str]:
    return value.strip() or None


# run-file key -> (RunConfig field, parser)
KEYS: Dict[str, Tuple[str, Callable]] = {
    'N_AUX': ('n_aux', int),
    'GAMMA': ('gamma', float),
    'MU': ('mu', float),
    'K': ('k', float),
    'EPOCHS': ('epochs', int),
    'SCHEDULE': ('schedule', str),
    'ETA': ('eta', float),
    'ETA_MAX': ('eta_max', float),
    'ETA_MIN': ('eta_min', float),
    'FD_STEP': ('fd_step', float),
    'SEED': ('seed', int),
    'THREADS': ('threads', int),
    'TASK': ('task', str),
    'TARGET': ('target', str),
    'BOUNDARY': ('boundary', str),
    'N_TRAIN': ('n_train', int),
    'N_VALID': ('n_valid', int),
    'DOMAIN_MIN': ('domain_min', float),
    'DOMAIN_MAX': ('domain_max', float),
    'TRAIN_FILE': ('train_file', _optional_str),
    'VALID_FILE': ('valid_file', _optional_str),
    'MODEL_FILE': ('model_file', _optional_str),
    'LOSS_THRESHOLD': ('loss_threshold', float),
    'GAMMAS': ('gammas', _parse_floats),
    'INIT_STD': ('init_std', float),
    'RELAX_TIMES': ('relax_times', _parse_times),
    'OUT_DIR': ('out_dir', str),
    'SVG': ('svg', _parse_bool),
}


@dataclass(frozen=True)
class RunConfig:
    # model
    n_aux: int = settings.N_AUX
    gamma: float = settings.GAMMA
    mu: float = settings.MU
    k: float = settings.SIGMOID_K
    # training; epochs and schedule default per task
    epochs: Optional[int] = None
    schedule: Optional[str] = None
    eta: float = settings.ETA
    eta_max: float = settings.ETA_MAX
    eta_min: float = settings.ETA_MIN
    fd_step: float = settings.FD_STEP
    seed: int = 0
    threads: int = settings.THREADS
    init_std: float = settings.INIT_STD
    loss_threshold: float = settings.LOSS_THRESHOLD
    # task
    task: str = 'prepare'
    target: str = 'plus'
    boundary: str = 'linear'
    n_train: int = settings.N_TRAIN
    n_valid: int = settings.N_VALID
    domain_min: float = 0.0
    domain_max: float = float(np.pi)
    train_file: Optional[str] = None
    valid_file: Optional[str] = None
    model_file: Optional[str] = None
    gammas: Tuple[float, ...] = settings.VALIDATION_GAMMAS
    relax_times: Tuple[float, ...] = tuple(float(t) for t in np.linspace(0.0, 200.0, 41))
    # output
    out_dir: str = 'out'
    svg: bool = False

    def __post_init__(self):
        checks = [
            (self.n_aux >= 1, f"N_AUX must be ≥ 1, got {self.n_aux}"),
            (np.isfinite(self.gamma) and self.gamma > 0, f"GAMMA must be > 0, got {self.gamma}"),
            (-1.0 <= self.mu <= 1.0, f"MU must lie in [-1, 1], got {self.mu}"),
            (np.isfinite(self.k) and self.k > 0, f"K must be > 0, got {self.k}"),
            (self.epochs is None or self.epochs >= 1, "epochs must be ≥ 1"),
            (self.schedule is None or self.schedule in SCHEDULES,
             f"SCHEDULE must be one of {SCHEDULES}, got '{self.schedule}'"),
            (self.eta > 0, f"ETA must be > 0, got {self.eta}"),
            (self.eta_max >= self.eta_min > 0, f"need ETA_MAX ≥ ETA_MIN > 0, got {self.eta_max}, {self.eta_min}"),
            (self.fd_step > 0, f"FD_STEP must be > 0, got {self.fd_step}"),
            (self.seed >= 0, f"SEED must be ≥ 0, got {self.seed}"),
            (self.threads >= 1, f"THREADS must be ≥ 1, got {self.threads}"),
            (self.init_std > 0, f"INIT_STD must be > 0, got {self.init_std}"),
            (self.loss_threshold > 0, f"LOSS_THRESHOLD must be > 0, got {self.loss_threshold}"),
            (self.task in TASKS, f"TASK must be one of {TASKS}, got '{self.task}'"),
            (self.n_train >= 1, f"N_TRAIN must be ≥ 1, got {self.n_train}"),
            (self.n_valid >= 1, f"N_VALID must be ≥ 1, got {self.n_valid}"),
            (self.domain_min < self.domain_max,
             f"DOMAIN_MIN must be below DOMAIN_MAX, got {self.domain_min}, {self.domain_max}"),
            (len(self.gammas) > 0 and all(g > 0 for g in self.gammas), f"GAMMAS must be positive, got {self.gammas}"),
            (len(self.relax_times) > 0 and all(t >= 0 for t in self.relax_times),
             "RELAX_TIMES must be non-negative"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

    @property
    def domain(self) -> Tuple[float, float]:
        return self.domain_min, self.domain_max

    @property
    def out_path(self) -> Path:
        return Path(self.out_dir)

    def epochs_for(self, task: str) -> int:
        if self.epochs is not None:
            return self.epochs
        return settings.STATE_PREP_EPOCHS if task == 'prepare' else settings.CLASSIFIER_EPOCHS

    def schedule_for(self, task: str) -> str:
        if self.schedule is not None:
            return self.schedule
        return 'constant' if task == 'prepare' else 'cosine'

    def require_file(self, name: str) -> Path:
        """Path of a referenced input file; it must be configured and exist"""
        value = getattr(self, name)
        key = name.upper()
        if not value:
            raise ConfigError(f"{key} is required for this command")
        path = Path(value)
        if not path.is_file():
            raise ConfigError(f"{key} not found: {path}")
        return path

    def with_overrides(self, **overrides) -> 'RunConfig':
        """Apply CLI flags; None leaves the file value in place"""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes)


def parse_run_values(values: Dict[str, Optional[str]], source: str = '<values>') -> RunConfig:
    kwargs = {}
    for raw_key, raw_value in values.items():
        key = raw_key.strip().upper()
        if key not in KEYS:
            raise ConfigError(f"{source}: unknown key '{raw_key}'")
        if raw_value is None:
            raise ConfigError(f"{source}: key '{raw_key}' has no value")
        name, parser = KEYS[key]
        try:
            kwargs[name] = parser(raw_value)
        except ValueError as e:
            raise ConfigError(f"{source}: bad value for {key}: '{raw_value}' ({e})")
    return RunConfig(**kwargs)


def load_run_config(path: Union[str, Path, None] = None) -> RunConfig:
    if path is None:
        return RunConfig()
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"run file not found: {path}")

    config = parse_run_values(dotenv_values(path), source=str(path))
    logger.info(f"📂 Loaded run file {path}")
    return config


def run_to_dict(run: RunConfig) -> Dict:
    """JSON-safe form of a RunConfig (Celery payloads, run logs)"""
    return {f.name: getattr(run, f.name) for f in fields(run)}


def run_from_dict(values: Dict) -> RunConfig:
    values = dict(values)
    for name in ('gammas', 'relax_times'):
        if values.get(name) is not None:
            values[name] = tuple(float(x) for x in values[name])
    try:
        return RunConfig(**values)
    except TypeError as e:
        raise ConfigError(f"invalid run payload: {e}")
