# artifacts/artifact_utils.py
"""
Run artifacts: model JSON, CSV tables, metrics JSON and optional SVG plots.
CSV/JSON are the only data interchange; plots are rendered from the same tables.
"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Sequence, Union

import matplotlib

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

import settings  # noqa: E402
from central_spin.model_utils import ModelConfig  # noqa: E402
from dissipation.dissipation_utils import DissipativeMode  # noqa: E402
from exceptions import ConfigError  # noqa: E402
from experiments.dataset_utils import DEFAULT_DOMAIN, Boundary, LabeledSample  # noqa: E402
from experiments.metrics_utils import RocCurve  # noqa: E402
from logger_config import get_logger  # noqa: E402

logger = get_logger(__name__)

PathLike = Union[str, Path]
FLOAT_FORMAT = '%.17g'
MODEL_KEYS = ('version', 'gamma', 'mu', 'k', 'couplings', 'modes')


@dataclass(eq=False)
class ModelArtifact:
    config: ModelConfig
    k: float = settings.SIGMOID_K
    seed: Optional[int] = None
    training: Dict = field(default_factory=dict)
    version: int = settings.ARTIFACT_VERSION

    @property
    def mu(self) -> float:
        return self.config.modes[0].mu

    def to_dict(self) -> Dict:
        # Python floats serialize with the shortest repr that parses back to the same double
        return {
            'version': self.version,
            'gamma': self.config.gamma,
            'mu': self.mu,
            'k': float(self.k),
            'couplings': [[float(x) for x in j.reshape(-1)] for j in self.config.couplings],
            'modes': [{'theta': float(m.theta), 'phi': float(m.phi)} for m in self.config.modes],
            'seed': self.seed,
            'training': self.training,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'ModelArtifact':
        missing = [key for key in MODEL_KEYS if key not in data]
        if missing:
            raise ConfigError(f"model file is missing keys: {', '.join(missing)}")
        if data['version'] != settings.ARTIFACT_VERSION:
            raise ConfigError(f"unsupported model version {data['version']}")
        if len(data['couplings']) != len(data['modes']):
            raise ConfigError("model file has different numbers of couplings and modes")

        try:
            modes = tuple(
                DissipativeMode(theta=m['theta'], phi=m['phi'], mu=data['mu'])
                for m in data['modes']
            )
            config = ModelConfig(
                couplings=tuple(np.array(j, dtype=float) for j in data['couplings']),
                modes=modes,
                gamma=data['gamma'],
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"invalid model file: {e}")

        return cls(
            config=config,
            k=float(data['k']),
            seed=data.get('seed'),
            training=data.get('training') or {},
            version=data['version'],
        )


# ==================== MODEL FILES ====================
def save_model(artifact: ModelArtifact, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(artifact.to_dict(), indent=2) + '\n')
    logger.info(f"💾 Saved model ({artifact.config.n_aux} aux qubits) to {path}")
    return path


def load_model(path: PathLike) -> ModelArtifact:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"model file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError(f"model file {path} is not valid JSON: {e}")
    artifact = ModelArtifact.from_dict(data)
    logger.info(f"📂 Loaded model from {path}")
    return artifact


# ==================== TABLES ====================
def write_table(frame: pd.DataFrame, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.info(f"💾 Wrote {len(frame)} rows to {path}")
    return path


def roc_frame(curve: RocCurve) -> pd.DataFrame:
    return pd.DataFrame({'fpr': curve.fpr, 'tpr': curve.tpr})


def validation_frame(rows: Sequence[Dict]) -> pd.DataFrame:
    """gamma, trace_distance, bound, max_aux_distance, full_gap, effective_gap"""
    frame = pd.DataFrame([
        {
            'gamma': row['gamma'],
            'trace_distance': row['trace_distance'],
            'bound': 5.0 / row['gamma'],
            'max_aux_distance': row['max_aux_distance'],
            'full_gap': row['full_gap'],
            'effective_gap': row['effective_gap'],
        }
        for row in rows
    ])
    return frame


def write_metrics(accuracy: float, auc: float, n_samples: int, model: PathLike, path: PathLike) -> Dict:
    metrics = {
        'accuracy': round(float(accuracy), 6),
        'auc': round(float(auc), 6),
        'n_samples': int(n_samples),
        'model': str(model),
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(metrics, indent=2) + '\n')
    logger.info(f"📊 accuracy={metrics['accuracy']:.6f} auc={metrics['auc']:.6f} -> {path}")
    return metrics


# ==================== PLOTS ====================
def _save_figure(fig, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format='svg')
    plt.close(fig)
    logger.info(f"🖼️ Rendered {path}")
    return path


def plot_curve(frame: pd.DataFrame, value_column: str, path: PathLike, log_scale: bool = True) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(frame['epoch'], frame[value_column])
    if log_scale and (frame[value_column] > 0).all():
        ax.set_yscale('log')
    ax.set_xlabel('epoch')
    ax.set_ylabel(value_column)
    ax.grid(alpha=0.3)
    return _save_figure(fig, path)


def plot_roc(frame: pd.DataFrame, auc: float, path: PathLike) -> Path:
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.plot(frame['fpr'], frame['tpr'], label=f'AUC = {auc:.4f}')
    ax.plot([0, 1], [0, 1], color='gray', linestyle=':')
    ax.set_xlabel('false positive rate')
    ax.set_ylabel('true positive rate')
    ax.legend(loc='lower right')
    return _save_figure(fig, path)


def plot_predictions(
        samples: Sequence[LabeledSample],
        predictions: Sequence[int],
        boundary: Optional[Boundary],
        path: PathLike,
        domain=DEFAULT_DOMAIN
) -> Path:
    """Validation scatter colored by predicted class, with the generating boundary overlaid"""
    theta1 = np.array([s.theta1 for s in samples])
    theta2 = np.array([s.theta2 for s in samples])
    predictions = np.asarray(predictions)

    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    for cls, color in ((0, 'tab:blue'), (1, 'tab:red')):
        mask = predictions == cls
        ax.scatter(theta1[mask], theta2[mask], s=6, color=color, label=f'class {cls}')
    if boundary is not None:
        x = np.linspace(domain[0], domain[1], 200)
        ax.plot(x, boundary(x), color='black')
    ax.set_xlim(*domain)
    ax.set_ylim(*domain)
    ax.set_xlabel('theta1')
    ax.set_ylabel('theta2')
    ax.legend(loc='upper right')
    return _save_figure(fig, path)


def plot_relaxation(frame: pd.DataFrame, path: PathLike) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    for column in ('x', 'y', 'z'):
        ax.plot(frame['time'], frame[column], label=column)
    ax.set_xlabel('time')
    ax.set_ylabel('Bloch component')
    ax.legend()
    return _save_figure(fig, path)
