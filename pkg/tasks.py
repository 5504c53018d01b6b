# tasks.py
from datetime import datetime
from typing import Dict, List, Sequence

from celery import chord

from celery_app import app
from exceptions import NumericalError
from pipelines import evaluate, load_or_generate, prepare_state, train_model
from run_config import run_from_dict
from logger_config import get_logger

logger = get_logger(__name__)


# ==================== STATE PREPARATION ====================
@app.task(queue='training')
def prepare_single_target(run_values: Dict, seed: int, target: str):
    """
    Train one state-preparation model

    Args:
        run_values: RunConfig as a dict
        seed: initialization seed
        target: target spec ('plus', 'random:<seed>', 'x,y,z', ...)

    Returns:
        Dictionary with the final loss and whether it beat the threshold
    """
    try:
        run = run_from_dict(run_values)
        record, _ = prepare_state(run, seed, target)
        converged = record.final_loss < run.loss_threshold

        logger.info(f"{'✅' if converged else '⚠️'} target {target}: final loss {record.final_loss:.3e}")
        return {
            'seed': seed,
            'target': target,
            'status': 'success',
            'final_loss': record.final_loss,
            'converged': converged,
            'epochs': len(record.epochs),
            'wall_clock': record.wall_clock,
        }

    except NumericalError as e:
        logger.error(f"❌ Numerical failure for target {target} at epoch {getattr(e, 'epoch', '?')}: {e}")
        return {'seed': seed, 'target': target, 'status': 'numerical_error', 'error': str(e)}
    except Exception as e:
        logger.error(f"❌ Error preparing target {target}: {e}")
        import traceback
        logger.error(traceback.format_exc())
        return {'seed': seed, 'target': target, 'status': 'error', 'error': str(e)}


@app.task(queue='training')
def summarize_state_preparation(results: List[Dict]):
    """
    Summarize a state-preparation sweep

    Args:
        results: List of prepare_single_target result dictionaries

    Returns:
        Summary dictionary
    """
    try:
        total = len(results)
        finished = [r for r in results if r.get('status') == 'success']
        converged = sum(1 for r in finished if r.get('converged'))
        failed = total - len(finished)
        rate = (converged / total * 100) if total > 0 else 0

        logger.info("=" * 80)
        logger.info("📊 STATE PREPARATION SWEEP")
        logger.info("=" * 80)
        logger.info(f"🎯 Targets: {total}")
        logger.info(f"✅ Converged: {converged} ({rate:.1f}%)")
        if failed > 0:
            logger.warning(f"⚠️ Failed runs: {failed}")
        logger.info("=" * 80)

        return {
            'total': total,
            'converged': converged,
            'failed': failed,
            'converged_rate': rate,
            'worst_loss': max((r['final_loss'] for r in finished), default=None),
        }

    except Exception as e:
        logger.error(f"❌ Error summarizing state preparation: {e}")
        import traceback
        logger.error(traceback.format_exc())
        return {'error': str(e)}


# ==================== CLASSIFICATION ====================
@app.task(queue='training')
def train_single_seed(run_values: Dict, seed: int):
    """
    Train one classifier from an initialization seed and score it on the validation set

    Returns:
        Dictionary with accuracy, AUC and final cost
    """
    try:
        run = run_from_dict(run_values)
        record, _ = train_model(run, seed, load_or_generate(run, 'train'))
        result = evaluate(record.config, load_or_generate(run, 'valid'), run.k, run.threads)

        logger.info(f"✅ seed {seed}: accuracy={result.accuracy:.4f} auc={result.auc:.4f}")
        return {
            'seed': seed,
            'status': 'success',
            'accuracy': result.accuracy,
            'auc': result.auc,
            'final_cost': record.final_loss,
            'wall_clock': record.wall_clock,
        }

    except NumericalError as e:
        logger.error(f"❌ Numerical failure for seed {seed} at epoch {getattr(e, 'epoch', '?')}: {e}")
        return {'seed': seed, 'status': 'numerical_error', 'error': str(e)}
    except Exception as e:
        logger.error(f"❌ Error training seed {seed}: {e}")
        import traceback
        logger.error(traceback.format_exc())
        return {'seed': seed, 'status': 'error', 'error': str(e)}


@app.task(queue='training')
def summarize_classifier_sweep(results: List[Dict]):
    """
    Pick the best seed of a classifier sweep (by validation accuracy, then AUC)
    """
    try:
        finished = [r for r in results if r.get('status') == 'success']
        failed = len(results) - len(finished)

        logger.info("=" * 80)
        logger.info("📊 CLASSIFIER SWEEP")
        logger.info("=" * 80)

        if not finished:
            logger.error(f"❌ All {len(results)} runs failed")
            return {'total': len(results), 'failed': failed, 'best': None}

        best = max(finished, key=lambda r: (r['accuracy'], r['auc']))
        logger.info(f"🏆 Best seed {best['seed']}: accuracy={best['accuracy']:.4f} auc={best['auc']:.4f}")
        if failed > 0:
            logger.warning(f"⚠️ Failed runs: {failed}")
        logger.info("=" * 80)

        return {
            'total': len(results),
            'failed': failed,
            'best': best,
            'best_accuracy': best['accuracy'],
            'best_auc': best['auc'],
        }

    except Exception as e:
        logger.error(f"❌ Error summarizing classifier sweep: {e}")
        import traceback
        logger.error(traceback.format_exc())
        return {'error': str(e)}


# ==================== SWEEP SCHEDULERS ====================
def state_prep_targets(seeds: Sequence[int]) -> List[str]:
    return [f'random:{seed}' for seed in seeds]


@app.task(queue='training')
def sweep_state_preparation(run_values: Dict, seeds: List[int]):
    """
    One state-preparation run per seed against the Haar-random target 'random:<seed>',
    fanned out with a chord and summarized by summarize_state_preparation
    """
    try:
        targets = state_prep_targets(seeds)
        logger.info("=" * 80)
        logger.info(f"🚀 Scheduling {len(targets)} state-preparation runs")
        logger.info("=" * 80)

        job = chord(
            (prepare_single_target.s(run_values, seed, target) for seed, target in zip(seeds, targets)),
            summarize_state_preparation.s()
        )
        job.apply_async()

        logger.info(f"✅ Scheduled {len(targets)} runs")
        return {'scheduled': len(targets), 'timestamp': datetime.now().isoformat()}

    except Exception as e:
        logger.error(f"❌ Error scheduling state preparation sweep: {e}")
        import traceback
        logger.error(traceback.format_exc())
        return {'error': str(e), 'scheduled': 0}


@app.task(queue='training')
def sweep_classifier(run_values: Dict, seeds: List[int]):
    """
    Best-of-seeds classifier training: one run per initialization seed on the same data
    """
    try:
        logger.info("=" * 80)
        logger.info(f"🚀 Scheduling {len(seeds)} classifier runs")
        logger.info("=" * 80)

        job = chord(
            (train_single_seed.s(run_values, seed) for seed in seeds),
            summarize_classifier_sweep.s()
        )
        job.apply_async()

        logger.info(f"✅ Scheduled {len(seeds)} runs")
        return {'scheduled': len(seeds), 'timestamp': datetime.now().isoformat()}

    except Exception as e:
        logger.error(f"❌ Error scheduling classifier sweep: {e}")
        import traceback
        logger.error(traceback.format_exc())
        return {'error': str(e), 'scheduled': 0}
