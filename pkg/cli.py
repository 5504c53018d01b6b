# cli.py
"""Command-line entry point: datasets, training, evaluation and validation runs."""
import functools
import json

import click
import pandas as pd

import tasks
from artifacts.artifact_utils import (
    load_model,
    plot_curve,
    plot_predictions,
    plot_relaxation,
    plot_roc,
    roc_frame,
    save_model,
    validation_frame,
    write_metrics,
    write_table,
)
from central_spin.elimination_utils import effective_generator
from central_spin.model_utils import check_full_size
from central_spin.validation_utils import full_relaxation_trace, relaxation_trace, validate_effective
from exceptions import NumericalError, QuantumClassifierError
from experiments.dataset_utils import generate_dataset, parse_boundary, samples_to_frame, write_dataset
from pipelines import (
    VALID_SEED_OFFSET,
    boundary_of,
    evaluate,
    load_or_generate,
    output_path,
    prepare_state,
    train_model,
    validation_model,
)
from run_config import load_run_config, run_to_dict
from training.training_utils import resolve_target
from logger_config import get_logger

logger = get_logger(__name__)


class NumericalFailure(click.ClickException):
    exit_code = 2


def handle_errors(command):
    """Library errors become exit codes: 1 for validation/config, 2 for numerical failures"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except NumericalError as e:
            epoch = getattr(e, 'epoch', None)
            where = f" at epoch {epoch}" if epoch is not None else ""
            logger.error(f"❌ Numerical failure{where}: {e}")
            raise NumericalFailure(f"numerical failure{where}: {e}")
        except QuantumClassifierError as e:
            logger.error(f"❌ {e}")
            raise click.ClickException(str(e))

    return wrapper


def run_options(command):
    """--config/--seed/--out/--threads/--svg, shared by every command"""
    options = [
        click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
                     help='Run file (KEY=value lines).'),
        click.option('--seed', type=click.IntRange(min=0), default=None, help='Override SEED.'),
        click.option('--out', 'out_dir', type=click.Path(file_okay=False), default=None, help='Override OUT_DIR.'),
        click.option('--threads', type=click.IntRange(min=1), default=None, help='Override THREADS.'),
        click.option('--svg', is_flag=True, default=False, help='Also render SVG plots.'),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def load_run(config_path, seed, out_dir, threads, svg):
    run = load_run_config(config_path).with_overrides(
        seed=seed,
        out_dir=out_dir,
        threads=threads,
        svg=True if svg else None,
    )
    logger.debug(f"🔍 Run: {run_to_dict(run)}")
    return run


@click.group()
def main():
    """Dissipative central-spin classifier experiments."""


@main.command()
@run_options
@handle_errors
def datagen(config_path, seed, out_dir, threads, svg):
    """Generate labeled training and validation datasets from BOUNDARY."""
    run = load_run(config_path, seed, out_dir, threads, svg)
    boundary = parse_boundary(run.boundary)

    splits = (
        ('train', run.n_train, run.seed),
        ('valid', run.n_valid, run.seed + VALID_SEED_OFFSET),
    )
    for split, n, split_seed in splits:
        samples = generate_dataset(boundary, n, split_seed, domain=run.domain)
        path = write_dataset(samples, output_path(run, f'{split}.csv'))
        if run.svg:
            plot_predictions(samples, [s.label for s in samples], boundary,
                             output_path(run, f'{split}.svg'), domain=run.domain)
        click.echo(f"{split}: {len(samples)} samples -> {path}")


@main.command()
@run_options
@handle_errors
def prepare(config_path, seed, out_dir, threads, svg):
    """Train couplings and dissipation angles so the steady state matches TARGET."""
    run = load_run(config_path, seed, out_dir, threads, svg)
    record, artifact = prepare_state(run, run.seed)

    frame = record.to_frame('loss')
    write_table(frame, output_path(run, 'loss.csv'))
    save_model(artifact, output_path(run, 'model.json'))
    if run.svg:
        plot_curve(frame, 'loss', output_path(run, 'loss.svg'))

    click.echo(f"final loss {record.final_loss:.6e} (threshold {run.loss_threshold:g})")
    if not record.final_loss < run.loss_threshold:
        raise click.ClickException(
            f"final loss {record.final_loss:.6e} did not reach threshold {run.loss_threshold:g}")


def _write_evaluation(run, result, samples, model_path):
    write_metrics(result.accuracy, result.auc, result.n_samples, model_path, output_path(run, 'metrics.json'))
    roc_table = roc_frame(result.curve)
    write_table(roc_table, output_path(run, 'roc.csv'))

    predictions = samples_to_frame(samples)
    predictions['probability'] = result.probabilities
    predictions['prediction'] = result.predictions
    write_table(predictions, output_path(run, 'predictions.csv'))

    if run.svg:
        plot_roc(roc_table, result.auc, output_path(run, 'roc.svg'))
        plot_predictions(samples, result.predictions, boundary_of(run),
                         output_path(run, 'validation.svg'), domain=run.domain)
    click.echo(f"accuracy {result.accuracy:.6f} auc {result.auc:.6f} on {result.n_samples} samples")


@main.command()
@run_options
@handle_errors
def train(config_path, seed, out_dir, threads, svg):
    """Train the classifier couplings, then score the validation set."""
    run = load_run(config_path, seed, out_dir, threads, svg)
    train_samples = load_or_generate(run, 'train')
    valid_samples = load_or_generate(run, 'valid')

    record, artifact = train_model(run, run.seed, train_samples)
    frame = record.to_frame('cost')
    write_table(frame, output_path(run, 'cost.csv'))
    model_path = save_model(artifact, output_path(run, 'model.json'))
    if run.svg:
        plot_curve(frame, 'cost', output_path(run, 'cost.svg'))

    result = evaluate(artifact.config, valid_samples, artifact.k, run.threads)
    _write_evaluation(run, result, valid_samples, model_path)


@main.command(name='eval')
@run_options
@click.option('--model', 'model_file', type=click.Path(dir_okay=False), default=None, help='Override MODEL_FILE.')
@handle_errors
def evaluate_command(config_path, seed, out_dir, threads, svg, model_file):
    """Score a saved model on the validation set."""
    run = load_run(config_path, seed, out_dir, threads, svg).with_overrides(model_file=model_file)
    model_path = run.require_file('model_file')
    artifact = load_model(model_path)
    samples = load_or_generate(run, 'valid')

    result = evaluate(artifact.config, samples, artifact.k, run.threads)
    _write_evaluation(run, result, samples, model_path)


@main.command()
@run_options
@click.option('--route', type=click.Choice(['closed', 'general']), default='closed', show_default=True)
@handle_errors
def validate(config_path, seed, out_dir, threads, svg, route):
    """Compare effective and full steady states over GAMMAS; fails when a distance exceeds 5/gamma."""
    run = load_run(config_path, seed, out_dir, threads, svg)
    config = validation_model(run)
    check_full_size(config)

    effective_generator(config, route, cross_check=True)
    rows = validate_effective(config, run.gammas, route)
    frame = validation_frame(rows)
    write_table(frame, output_path(run, 'validation.csv'))

    for row in frame.itertuples():
        click.echo(f"gamma {row.gamma:g}: trace distance {row.trace_distance:.6e} (bound {row.bound:.6e})")

    violations = frame[frame['trace_distance'] > frame['bound']]
    if not violations.empty:
        gammas = ', '.join(f"{g:g}" for g in violations['gamma'])
        raise click.ClickException(f"effective steady state outside 5/gamma at gamma = {gammas}")


@main.command()
@run_options
@click.option('--initial', default='zero', show_default=True, help='Initial central-qubit state (target syntax).')
@click.option('--full', is_flag=True, default=False, help='Also propagate the full model.')
@handle_errors
def relax(config_path, seed, out_dir, threads, svg, initial, full):
    """Relaxation of the central qubit towards its steady state over RELAX_TIMES."""
    run = load_run(config_path, seed, out_dir, threads, svg)
    config = validation_model(run)
    rho0 = resolve_target(initial)

    frame = pd.DataFrame(relaxation_trace(config, rho0, run.relax_times))
    write_table(frame, output_path(run, 'relax.csv'))
    if run.svg:
        plot_relaxation(frame, output_path(run, 'relax.svg'))

    if full:
        full_frame = pd.DataFrame(full_relaxation_trace(config, rho0, run.relax_times))
        write_table(full_frame, output_path(run, 'relax_full.csv'))

    last = frame.iloc[-1]
    click.echo(f"t={last['time']:g}: trace distance to steady state {last['trace_distance']:.6e}")


@main.command()
@run_options
@click.option('--runs', type=click.IntRange(min=1), default=3, show_default=True, help='Number of seeds.')
@click.option('--celery', 'use_celery', is_flag=True, default=False,
              help='Schedule the runs on the Celery training workers instead of running them in-process.')
@handle_errors
def sweep(config_path, seed, out_dir, threads, svg, runs, use_celery):
    """Repeat TASK over consecutive seeds starting at SEED (random targets for prepare)."""
    run = load_run(config_path, seed, out_dir, threads, svg)
    seeds = [run.seed + i for i in range(runs)]
    run_values = run_to_dict(run)

    if run.task == 'prepare':
        single, summarize, schedule = tasks.prepare_single_target, tasks.summarize_state_preparation, \
            tasks.sweep_state_preparation
        jobs = [(run_values, s, t) for s, t in zip(seeds, tasks.state_prep_targets(seeds))]
    else:
        single, summarize, schedule = tasks.train_single_seed, tasks.summarize_classifier_sweep, \
            tasks.sweep_classifier
        jobs = [(run_values, s) for s in seeds]

    if use_celery:
        result = schedule.delay(run_values, seeds)
        click.echo(f"scheduled {len(seeds)} {run.task} runs (task id {result.id})")
        return

    results = [single(*job) for job in jobs]
    write_table(pd.DataFrame(results), output_path(run, 'sweep.csv'))
    summary = summarize(results)
    output_path(run, 'sweep.json').write_text(json.dumps(summary, indent=2, default=float) + '\n')
    click.echo(json.dumps(summary, default=float))
    if summary.get('failed'):
        raise NumericalFailure(f"{summary['failed']} of {len(seeds)} runs failed")


if __name__ == '__main__':
    main()
