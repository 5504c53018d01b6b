# experiments/dataset_utils.py
"""
Synthetic two-feature datasets: class 1 iff theta2 >= g(theta1), for a polynomial
decision boundary g over the data domain (default [0, pi]^2).
"""
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from exceptions import ConfigError, InvalidArgument, MalformedRow
from logger_config import get_logger

logger = get_logger(__name__)

DEFAULT_DOMAIN = (0.0, float(np.pi))
DATASET_COLUMNS = ['theta1', 'theta2', 'label']

# Polynomial coefficients, highest degree first
NAMED_BOUNDARIES = {
    'linear': (-2.0, 1.5 * np.pi),
    'quadratic': (1.0, -np.pi, np.pi ** 2 / 4),
    'cubic': (1.0, -2.0, 1.0, -0.5),
}


@dataclass(frozen=True)
class LabeledSample:
    theta1: float
    theta2: float
    label: int


@dataclass(frozen=True)
class Boundary:
    kind: str
    coefficients: Tuple[float, ...]

    def __call__(self, x):
        return np.polyval(self.coefficients, x)

    def label(self, theta1: float, theta2: float) -> int:
        return int(theta2 >= self(theta1))


def parse_boundary(spec: str) -> Boundary:
    """
    'linear' | 'quadratic' | 'cubic' or comma-separated polynomial coefficients
    (highest degree first), e.g. '1,-2,1,-0.5' for x^3 - 2x^2 + x - 0.5
    """
    spec = spec.strip()
    if spec.lower() in NAMED_BOUNDARIES:
        return Boundary(kind=spec.lower(), coefficients=tuple(NAMED_BOUNDARIES[spec.lower()]))

    try:
        coefficients = tuple(float(part) for part in spec.split(','))
    except ValueError:
        raise ConfigError(f"boundary must be linear, quadratic, cubic or coefficients, got '{spec}'")
    if not coefficients or not all(np.isfinite(coefficients)):
        raise ConfigError(f"boundary coefficients must be finite numbers, got '{spec}'")

    kinds = {2: 'linear', 3: 'quadratic', 4: 'cubic'}
    return Boundary(kind=kinds.get(len(coefficients), 'custom'), coefficients=coefficients)


def generate_dataset(
        boundary: Boundary,
        n: int,
        seed: int,
        domain: Tuple[float, float] = DEFAULT_DOMAIN
) -> List[LabeledSample]:
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    low, high = domain
    if not high > low:
        raise InvalidArgument(f"empty data domain {domain}")

    rng = np.random.default_rng(seed)
    points = rng.uniform(low, high, size=(n, 2))
    samples = [
        LabeledSample(theta1=float(t1), theta2=float(t2), label=boundary.label(t1, t2))
        for t1, t2 in points
    ]

    positives = sum(s.label for s in samples)
    logger.info(f"📊 Generated {n} samples ({boundary.kind} boundary, seed={seed}): {positives} in class 1")
    return samples


def samples_to_frame(samples: Sequence[LabeledSample]) -> pd.DataFrame:
    return pd.DataFrame(
        [(s.theta1, s.theta2, s.label) for s in samples],
        columns=DATASET_COLUMNS,
    )


def write_dataset(samples: Sequence[LabeledSample], path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    samples_to_frame(samples).to_csv(path, index=False, float_format='%.17g', lineterminator='\n')
    logger.info(f"✅ Dataset saved: {path} ({len(samples)} rows)")
    return path


def _parse_angle(value, line: int, column: str) -> float:
    try:
        angle = float(value)
    except (TypeError, ValueError):
        raise MalformedRow(line, f"{column} '{value}' is not a number")
    if not np.isfinite(angle):
        raise MalformedRow(line, f"{column} is not finite")
    return angle


def read_dataset(path: Union[str, Path]) -> List[LabeledSample]:
    """Parse a dataset CSV; malformed rows raise MalformedRow with the file line number"""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"dataset file not found: {path}")

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.ParserError as e:
        match = re.search(r'line (\d+)', str(e))
        raise MalformedRow(int(match.group(1)) if match else 0, str(e))
    except pd.errors.EmptyDataError:
        raise MalformedRow(1, "empty file, expected header theta1,theta2,label")

    if list(frame.columns) != DATASET_COLUMNS:
        raise MalformedRow(1, f"header must be {','.join(DATASET_COLUMNS)}, got {','.join(frame.columns)}")

    samples = []
    for offset, row in enumerate(frame.itertuples(index=False)):
        line = offset + 2
        theta1 = _parse_angle(row.theta1, line, 'theta1')
        theta2 = _parse_angle(row.theta2, line, 'theta2')
        if row.label not in ('0', '1'):
            raise MalformedRow(line, f"label must be 0 or 1, got '{row.label}'")
        samples.append(LabeledSample(theta1=theta1, theta2=theta2, label=int(row.label)))

    logger.info(f"📂 Loaded {len(samples)} samples from {path}")
    return samples
