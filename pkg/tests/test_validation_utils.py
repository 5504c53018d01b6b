# tests/test_validation_utils.py
import pytest
import numpy as np

from central_spin.model_utils import random_config
from central_spin.validation_utils import full_relaxation_trace, relaxation_trace, validate_effective
from exceptions import ModelTooLarge
from qcore.qcore_utils import DensityMatrix, projector

EXCITED = DensityMatrix(projector(np.array([0, 1])))


class TestValidateEffective:
    """Effective vs full steady state of the central qubit"""

    def test_distances_within_bound_and_shrinking(self):
        for seed in range(5):
            config = random_config(2, np.random.default_rng(seed), mu=1.0)
            rows = validate_effective(config, gammas=(100.0, 1000.0))

            assert [row['gamma'] for row in rows] == [100.0, 1000.0]
            assert rows[0]['trace_distance'] <= 0.05
            assert rows[1]['trace_distance'] < rows[0]['trace_distance']

    def test_row_fields(self, random_model):
        row = validate_effective(random_model, gammas=(500.0,))[0]

        assert set(row) == {'gamma', 'trace_distance', 'aux_distances', 'max_aux_distance', 'full_gap', 'effective_gap'}
        assert len(row['aux_distances']) == 2
        assert row['max_aux_distance'] == max(row['aux_distances'])
        assert row['full_gap'] > 0 and row['effective_gap'] > 0

    def test_size_cap(self, rng):
        with pytest.raises(ModelTooLarge, match="full solver capped at N=4"):
            validate_effective(random_config(5, rng))


class TestRelaxation:
    """Relaxation traces towards the steady state"""

    def test_effective_trace(self, polarizing_model):
        times = [0.0, 5.0, 20.0, 50.0, 300.0]
        rows = relaxation_trace(polarizing_model, EXCITED, times)
        distances = [row['trace_distance'] for row in rows]

        assert [row['time'] for row in rows] == times
        assert distances[0] == pytest.approx(1.0)
        assert distances[-1] < 1e-12
        assert all(later <= earlier + 1e-12 for earlier, later in zip(distances, distances[1:]))

    def test_population_decays_at_effective_rate(self, polarizing_model):
        rows = relaxation_trace(polarizing_model, EXCITED, [10.0])
        rate = 16 / polarizing_model.gamma

        # <sigma_z> relaxes from -1 to +1: z(t) = 1 - 2 exp(-rate t)
        assert rows[0]['z'] == pytest.approx(1 - 2 * np.exp(-rate * 10.0), abs=1e-10)

    def test_full_trace_follows_effective(self, polarizing_model):
        model = polarizing_model.with_gamma(1000.0)
        times = [0.0, 100.0, 2000.0]
        effective = relaxation_trace(model, EXCITED, times)
        full = full_relaxation_trace(model, EXCITED, times)

        assert full[0]['z'] == pytest.approx(-1.0)
        for a, b in zip(effective, full):
            assert abs(a['z'] - b['z']) < 0.05
        assert full[-1]['trace_distance'] < 1e-3
