# tests/test_cli.py
import json
from unittest.mock import MagicMock, patch

import pandas as pd

from cli import main
from exceptions import DegenerateSteadyState


class TestDatagen:
    """datagen command"""

    def test_writes_both_splits(self, runner, run_file, tmp_path):
        config = run_file(N_TRAIN=15, N_VALID=25, SEED=2)
        result = runner.invoke(main, ['datagen', '--config', str(config)])

        assert result.exit_code == 0, result.output
        assert len(pd.read_csv(tmp_path / 'out' / 'train.csv')) == 15
        assert len(pd.read_csv(tmp_path / 'out' / 'valid.csv')) == 25

    def test_rerun_is_byte_identical(self, runner, run_file, tmp_path):
        config = run_file(N_TRAIN=10, N_VALID=10, BOUNDARY='quadratic')
        runner.invoke(main, ['datagen', '--config', str(config)])
        first = (tmp_path / 'out' / 'train.csv').read_bytes()

        result = runner.invoke(main, ['datagen', '--config', str(config)])

        assert result.exit_code == 0
        assert (tmp_path / 'out' / 'train.csv').read_bytes() == first

    def test_coefficient_boundary_and_svg(self, runner, run_file, tmp_path):
        config = run_file(N_TRAIN=10, N_VALID=10, BOUNDARY='1,-2,1,-0.5')
        result = runner.invoke(main, ['datagen', '--config', str(config), '--svg'])

        assert result.exit_code == 0, result.output
        assert (tmp_path / 'out' / 'train.svg').exists()

    def test_seed_flag_overrides_file(self, runner, run_file, tmp_path):
        config = run_file(N_TRAIN=10, N_VALID=10, SEED=0)
        runner.invoke(main, ['datagen', '--config', str(config), '--out', str(tmp_path / 'a')])
        runner.invoke(main, ['datagen', '--config', str(config), '--out', str(tmp_path / 'b'), '--seed', '5'])

        assert (tmp_path / 'a' / 'train.csv').read_bytes() != (tmp_path / 'b' / 'train.csv').read_bytes()

    def test_unknown_key_exits_1(self, runner, run_file):
        result = runner.invoke(main, ['datagen', '--config', str(run_file(COLOR='blue'))])

        assert result.exit_code == 1
        assert 'unknown key' in result.output


class TestPrepare:
    """prepare command"""

    def test_zero_epochs_rejected(self, runner, run_file):
        result = runner.invoke(main, ['prepare', '--config', str(run_file(EPOCHS=0))])

        assert result.exit_code == 1
        assert 'epochs must be ≥ 1' in result.output

    def test_short_run_writes_artifacts(self, runner, run_file, tmp_path):
        config = run_file(N_AUX=1, EPOCHS=2, TARGET='plus', LOSS_THRESHOLD=10)
        result = runner.invoke(main, ['prepare', '--config', str(config)])

        assert result.exit_code == 0, result.output
        loss = pd.read_csv(tmp_path / 'out' / 'loss.csv')
        assert list(loss.columns) == ['epoch', 'loss', 'eta']
        assert len(loss) == 2
        model = json.loads((tmp_path / 'out' / 'model.json').read_text())
        assert model['training']['converged'] is True

    def test_unconverged_exits_1(self, runner, run_file):
        config = run_file(N_AUX=1, EPOCHS=1, TARGET='minus', LOSS_THRESHOLD=1e-12)
        result = runner.invoke(main, ['prepare', '--config', str(config)])

        assert result.exit_code == 1
        assert 'did not reach threshold' in result.output

    def test_numerical_failure_exits_2(self, runner, run_file):
        error = DegenerateSteadyState("kernel dimension 2")
        error.epoch = 3

        with patch('cli.prepare_state', side_effect=error):
            result = runner.invoke(main, ['prepare', '--config', str(run_file(EPOCHS=5))])

        assert result.exit_code == 2
        assert 'epoch 3' in result.output


class TestTrainAndEval:
    """train and eval commands"""

    def test_train_then_eval(self, runner, run_file, tmp_path):
        config = run_file(N_TRAIN=6, N_VALID=20, EPOCHS=2)
        result = runner.invoke(main, ['train', '--config', str(config)])

        assert result.exit_code == 0, result.output
        out = tmp_path / 'out'
        for name in ('cost.csv', 'model.json', 'metrics.json', 'roc.csv', 'predictions.csv'):
            assert (out / name).exists(), name
        metrics = json.loads((out / 'metrics.json').read_text())
        assert metrics['n_samples'] == 20
        assert 0.0 <= metrics['accuracy'] <= 1.0

        result = runner.invoke(main, ['eval', '--config', str(config), '--model', str(out / 'model.json')])

        assert result.exit_code == 0, result.output
        again = json.loads((out / 'metrics.json').read_text())
        assert (again['accuracy'], again['auc']) == (metrics['accuracy'], metrics['auc'])

    def test_malformed_validation_file(self, runner, run_file, tmp_path):
        valid = tmp_path / 'valid.csv'
        valid.write_text("theta1,theta2,label\n0.1,0.2,1\n0.3,oops,0\n")
        config = run_file(N_TRAIN=6, EPOCHS=1, VALID_FILE=valid)

        result = runner.invoke(main, ['train', '--config', str(config)])

        assert result.exit_code == 1
        assert 'line 3' in result.output

    def test_eval_requires_model(self, runner, run_file):
        result = runner.invoke(main, ['eval', '--config', str(run_file())])

        assert result.exit_code == 1
        assert 'MODEL_FILE' in result.output


class TestValidate:
    """validate command"""

    def test_within_bound(self, runner, run_file, tmp_path):
        config = run_file(N_AUX=1, GAMMAS='100')
        result = runner.invoke(main, ['validate', '--config', str(config)])

        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / 'out' / 'validation.csv')
        assert frame['gamma'].tolist() == [100.0]
        assert (frame['trace_distance'] <= frame['bound']).all()

    def test_violation_exits_1(self, runner, run_file):
        rows = [{'gamma': 100.0, 'trace_distance': 1.0, 'max_aux_distance': 0.0,
                 'full_gap': 0.1, 'effective_gap': 0.1}]

        with patch('cli.validate_effective', return_value=rows):
            result = runner.invoke(main, ['validate', '--config', str(run_file(N_AUX=1, GAMMAS='100'))])

        assert result.exit_code == 1
        assert 'gamma = 100' in result.output

    def test_too_many_auxiliaries(self, runner, run_file):
        result = runner.invoke(main, ['validate', '--config', str(run_file(N_AUX=5))])

        assert result.exit_code == 1
        assert 'full solver capped at N=4' in result.output


class TestRelax:
    """relax command"""

    def test_writes_traces(self, runner, run_file, tmp_path):
        config = run_file(N_AUX=1, RELAX_TIMES='0:10:3')
        result = runner.invoke(main, ['relax', '--config', str(config), '--full'])

        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / 'out' / 'relax.csv')
        assert list(frame.columns) == ['time', 'x', 'y', 'z', 'trace_distance']
        assert frame['time'].tolist() == [0.0, 5.0, 10.0]
        assert len(pd.read_csv(tmp_path / 'out' / 'relax_full.csv')) == 3


class TestSweep:
    """sweep command"""

    def test_in_process_state_prep(self, runner, run_file, tmp_path):
        config = run_file(N_AUX=1, TASK='prepare', EPOCHS=1)
        result = runner.invoke(main, ['sweep', '--config', str(config), '--runs', '2'])

        assert result.exit_code == 0, result.output
        frame = pd.read_csv(tmp_path / 'out' / 'sweep.csv')
        assert frame['target'].tolist() == ['random:0', 'random:1']
        summary = json.loads((tmp_path / 'out' / 'sweep.json').read_text())
        assert summary['total'] == 2
        assert summary['failed'] == 0

    def test_schedules_celery_chord(self, runner, run_file):
        scheduler = MagicMock()
        scheduler.delay.return_value.id = 'abc'

        with patch('tasks.sweep_classifier', scheduler):
            config = run_file(TASK='classify')
            result = runner.invoke(main, ['sweep', '--config', str(config), '--runs', '4', '--celery'])

        assert result.exit_code == 0, result.output
        run_values, seeds = scheduler.delay.call_args.args
        assert seeds == [0, 1, 2, 3]
        assert run_values['task'] == 'classify'
        assert 'task id abc' in result.output
