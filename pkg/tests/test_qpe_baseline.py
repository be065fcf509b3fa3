import math

import numpy as np
import pytest

from estimation.angle import TWO_PI, angular_distance, reference_angle
from estimation.qpe_baseline import QpeConfig, outcome_distribution, sample_qpe, sample_qpe_outcomes
from estimation.spectrum import SpectralDecomposition
from utils.exceptions import InvalidArgumentError


def _nearest_grid_distance(phase: float, size: int) -> float:
    grid = TWO_PI * np.arange(size) / size
    return min(angular_distance(g, phase) for g in grid)


class TestConfig:

    def test_depth_accounting(self):
        config = QpeConfig(n_ancilla=6, shots=5)
        assert config.T_max == 63
        assert config.T_total == 315

    @pytest.mark.parametrize("n, shots", [(0, 1), (25, 1), (4, 0), (2.0, 1), (True, 1)])
    def test_rejects_invalid(self, n, shots):
        with pytest.raises(InvalidArgumentError):
            QpeConfig(n_ancilla=n, shots=shots)


class TestOutcomeDistribution:

    def test_normalized_and_peaked_at_nearest_grid_point(self):
        rng = np.random.default_rng(100)
        n = 10
        size = 2 ** n
        for phase in rng.uniform(-math.pi, math.pi, size=100):
            table = outcome_distribution(phase, n)
            assert abs(table.sum() - 1.0) <= 1e-9
            peak = int(np.argmax(table))
            assert angular_distance(TWO_PI * peak / size, phase) <= _nearest_grid_distance(phase, size) + 1e-12

    @pytest.mark.parametrize("n", [1, 3, 8, 12])
    def test_normalized_for_small_registers(self, n):
        for phase in (0.1, -2.9, 3.0, 1e-9):
            assert outcome_distribution(phase, n).sum() == pytest.approx(1.0, abs=1e-9)

    def test_on_grid_phase_is_deterministic(self):
        n = 7
        table = outcome_distribution(TWO_PI * 5 / 2 ** n, n)
        assert table[5] == pytest.approx(1.0, abs=1e-12)

    def test_matches_textbook_formula(self):
        n, phase = 5, 0.737
        size = 2 ** n
        table = outcome_distribution(phase, n)
        for k in (0, 3, 6, 17):
            delta = phase - TWO_PI * k / size
            expected = (math.sin(2 ** (n - 1) * delta) / math.sin(delta / 2)) ** 2 / 4 ** n
            assert table[k] == pytest.approx(expected, rel=1e-9)

    def test_rejects_oversized_table(self):
        with pytest.raises(InvalidArgumentError):
            outcome_distribution(0.3, 25)


class TestSampling:

    def test_on_grid_eigenstate_returns_grid_point(self, one_hot):
        n = 8
        phase = reference_angle(TWO_PI * 5 / 2 ** n)
        result = sample_qpe(one_hot(phase), QpeConfig(n_ancilla=n, shots=9), np.random.default_rng(1))
        assert result.outcome == 5
        assert result.estimate == reference_angle(TWO_PI * 5 / 2 ** n)
        assert (result.T_max, result.T_total) == (255, 9 * 255)

    def test_off_grid_mode_is_near(self, one_hot):
        n = 6
        result = sample_qpe(one_hot(0.4321), QpeConfig(n_ancilla=n, shots=101), np.random.default_rng(4))
        assert angular_distance(result.estimate, 0.4321) <= TWO_PI / 2 ** n

    def test_estimate_in_signed_range(self, one_hot):
        result = sample_qpe(one_hot(-2.5), QpeConfig(n_ancilla=9, shots=3), np.random.default_rng(6))
        assert -math.pi <= result.estimate < math.pi

    @pytest.mark.parametrize("n", [10, 20])
    def test_single_shot_success_probability(self, one_hot, n):
        """Both samplers land within one grid step far more often than 4/π²."""
        rng = np.random.default_rng(n)
        phase = 1.0 + 0.37 * TWO_PI / 2 ** n
        outcomes = sample_qpe_outcomes(one_hot(phase), n, 2000, rng)
        close = np.mean([angular_distance(TWO_PI * k / 2 ** n, phase) <= TWO_PI / 2 ** n for k in outcomes])
        assert close >= 0.4

    def test_rejection_sampler_matches_kernel_near_peak(self, one_hot):
        # the two grid points around the phase carry sin²(πf)/(N² sin²(πu/N)) each
        n = 18
        size = 2 ** n
        f = 0.25
        phase = (123 + f) * TWO_PI / size
        outcomes = sample_qpe_outcomes(one_hot(phase), n, 20_000, np.random.default_rng(3))
        p_floor = math.sin(math.pi * f) ** 2 / (size ** 2 * math.sin(math.pi * f / size) ** 2)
        p_ceil = math.sin(math.pi * f) ** 2 / (size ** 2 * math.sin(math.pi * (1 - f) / size) ** 2)
        assert np.mean(outcomes == 123) == pytest.approx(p_floor, abs=0.015)
        assert np.mean(outcomes == 124) == pytest.approx(p_ceil, abs=0.015)

    def test_mixed_state_follows_weights(self):
        sd = SpectralDecomposition(phases=[0.5, -1.5], weights=[0.7, 0.3])
        n = 8
        outcomes = sample_qpe_outcomes(sd, n, 5000, np.random.default_rng(12))
        # ±0.2 rad spans eight grid steps and holds all but about 2% of each kernel
        near_first = np.mean([angular_distance(TWO_PI * k / 2 ** n, 0.5) < 0.2 for k in outcomes])
        assert near_first == pytest.approx(0.7, abs=0.04)

    def test_reproducible_with_seed(self, small_state):
        config = QpeConfig(n_ancilla=12, shots=25)
        a = sample_qpe(small_state, config, np.random.default_rng(8))
        b = sample_qpe(small_state, config, np.random.default_rng(8))
        assert a == b
