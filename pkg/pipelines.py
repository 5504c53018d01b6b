# pipelines.py
"""
End-to-end runs shared by the CLI commands and the Celery sweep tasks.
Every function here is fully determined by its RunConfig and seed.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from artifacts.artifact_utils import ModelArtifact, load_model
from central_spin.model_utils import ModelConfig, random_config
from exceptions import ConfigError
from experiments.dataset_utils import Boundary, LabeledSample, generate_dataset, parse_boundary, read_dataset
from experiments.metrics_utils import RocCurve, accuracy, roc
from run_config import RunConfig
from training.training_utils import (
    Schedule,
    TrainRecord,
    initial_config,
    predict_dataset,
    resolve_target,
    train_classifier,
    train_state_prep,
)
from logger_config import get_logger

logger = get_logger(__name__)

# Validation data is drawn from a seed offset so it never coincides with the training draw
VALID_SEED_OFFSET = 1


@dataclass(eq=False)
class Evaluation:
    accuracy: float
    auc: float
    probabilities: np.ndarray
    predictions: np.ndarray
    curve: RocCurve
    n_samples: int


def build_schedule(run: RunConfig, task: str) -> Schedule:
    return Schedule(
        kind=run.schedule_for(task),
        eta=run.eta,
        eta_max=run.eta_max,
        eta_min=run.eta_min,
        total_epochs=run.epochs_for(task),
    )


# ==================== STATE PREPARATION ====================
def prepare_state(run: RunConfig, seed: int, target_spec: Optional[str] = None) -> Tuple[TrainRecord, ModelArtifact]:
    target_spec = target_spec or run.target
    target = resolve_target(target_spec)
    init = initial_config(run.n_aux, seed, mu=run.mu, gamma=run.gamma, std=run.init_std)

    logger.info(f"🎯 Preparing target '{target_spec}' with N={run.n_aux}, gamma={run.gamma:g}, seed={seed}")
    record = train_state_prep(
        target,
        init,
        epochs=run.epochs_for('prepare'),
        schedule=build_schedule(run, 'prepare'),
        h=run.fd_step,
        threads=run.threads,
    )
    training = dict(record.summary(), task='prepare', target=target_spec, converged=record.final_loss < run.loss_threshold)
    artifact = ModelArtifact(config=record.config, k=run.k, seed=seed, training=training)
    return record, artifact


# ==================== CLASSIFICATION ====================
def load_or_generate(run: RunConfig, split: str) -> List[LabeledSample]:
    """TRAIN_FILE / VALID_FILE when configured, otherwise a seeded draw from BOUNDARY"""
    file_field = 'train_file' if split == 'train' else 'valid_file'
    if getattr(run, file_field):
        return read_dataset(run.require_file(file_field))

    n = run.n_train if split == 'train' else run.n_valid
    seed = run.seed if split == 'train' else run.seed + VALID_SEED_OFFSET
    return generate_dataset(parse_boundary(run.boundary), n, seed, domain=run.domain)


def boundary_of(run: RunConfig) -> Optional[Boundary]:
    try:
        return parse_boundary(run.boundary)
    except ConfigError:
        return None


def train_model(run: RunConfig, seed: int, samples: Sequence[LabeledSample]) -> Tuple[TrainRecord, ModelArtifact]:
    init = initial_config(run.n_aux, seed, mu=run.mu, gamma=run.gamma, std=run.init_std)
    logger.info(f"🚀 Training classifier on {len(samples)} samples, seed={seed}")
    record = train_classifier(
        samples,
        init,
        epochs=run.epochs_for('classify'),
        schedule=build_schedule(run, 'classify'),
        h=run.fd_step,
        k=run.k,
        threads=run.threads,
    )
    training = dict(record.summary(), task='classify', boundary=run.boundary, n_train=len(samples))
    artifact = ModelArtifact(config=record.config, k=run.k, seed=seed, training=training)
    return record, artifact


def evaluate(config: ModelConfig, samples: Sequence[LabeledSample], k: float, threads: int = 1) -> Evaluation:
    probabilities, predictions = predict_dataset(config, samples, k, threads)
    labels = [s.label for s in samples]
    curve = roc(probabilities, labels)
    result = Evaluation(
        accuracy=accuracy(predictions, labels),
        auc=curve.auc,
        probabilities=probabilities,
        predictions=predictions,
        curve=curve,
        n_samples=len(samples),
    )
    logger.info(f"📊 Evaluated {result.n_samples} samples: accuracy={result.accuracy:.4f} auc={result.auc:.4f}")
    return result


def validation_model(run: RunConfig) -> ModelConfig:
    """MODEL_FILE when configured, otherwise a seeded random configuration"""
    if run.model_file:
        return load_model(run.require_file('model_file')).config.with_gamma(run.gamma)
    return random_config(run.n_aux, np.random.default_rng(run.seed), mu=run.mu, gamma=run.gamma, std=run.init_std)


def output_path(run: RunConfig, name: str) -> Path:
    return run.out_path / name
