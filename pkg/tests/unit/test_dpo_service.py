import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

from ticktock.models.preference import DpoInputs
from ticktock.services.dpo_service import DEFAULT_BETA, dpo_loss, mean_dpo_loss
from ticktock.utils.errors import DataError, ValidationError

pytestmark = pytest.mark.unit


class TestDpoLoss:
    """Test the scalar preference loss"""

    def test_zero_margin_is_ln2(self):
        result = dpo_loss(DpoInputs(-1.0, -1.0, -2.0, -2.0))
        assert abs(result.loss - math.log(2)) <= 1e-12
        assert result.grad_wrt_policy_margin == pytest.approx(-DEFAULT_BETA / 2)

    def test_worked_value(self):
        """Policy prefers the chosen answer by one nat more than the reference"""
        result = dpo_loss(DpoInputs(-1.0, -2.0, -1.0, -1.0, beta=0.3))
        assert result.loss == pytest.approx(0.5544, abs=5e-5)

    def test_beta_scaling_identity(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            logps = rng.uniform(-10, -0.1, size=4)
            beta = float(rng.uniform(0.05, 2.0))
            scaled = dpo_loss(DpoInputs(*map(float, logps), beta=beta))
            unit = dpo_loss(DpoInputs(*(float(v) * beta for v in logps), beta=1.0))
            assert abs(scaled.loss - unit.loss) <= 1e-12

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(2)
        h = 1e-5
        for _ in range(10):
            chosen, rejected, ref_chosen, ref_rejected = (float(v) for v in rng.uniform(-10, -0.5, size=4))
            beta = float(rng.uniform(0.1, 1.0))
            analytic = dpo_loss(DpoInputs(chosen, rejected, ref_chosen, ref_rejected, beta)).grad_wrt_policy_margin
            plus = dpo_loss(DpoInputs(chosen + h, rejected, ref_chosen, ref_rejected, beta)).loss
            minus = dpo_loss(DpoInputs(chosen - h, rejected, ref_chosen, ref_rejected, beta)).loss
            numeric = (plus - minus) / (2 * h)
            assert abs(numeric - analytic) <= 1e-6 * abs(analytic)

    def test_extreme_margins_stay_finite(self):
        result = dpo_loss(DpoInputs(0.0, -1e6, 0.0, 0.0, beta=1.0))
        assert result.loss == pytest.approx(0.0)
        result = dpo_loss(DpoInputs(-1e6, 0.0, 0.0, 0.0, beta=1.0))
        assert result.loss == pytest.approx(1e6)
        assert math.isfinite(result.grad_wrt_policy_margin)


class TestDpoInputs:
    """Test input validation"""

    def test_non_finite_rejected(self):
        with pytest.raises(DataError):
            DpoInputs(float('nan'), -1.0, -1.0, -1.0)

    def test_positive_log_probability_rejected(self):
        with pytest.raises(ValidationError):
            DpoInputs(0.5, -1.0, -1.0, -1.0)

    @pytest.mark.parametrize('beta', [0.0, -0.3])
    def test_beta_must_be_positive(self, beta):
        with pytest.raises(ValidationError):
            DpoInputs(-1.0, -1.0, -1.0, -1.0, beta=beta)


class TestMeanDpoLoss:
    """Test batch averaging"""

    def test_mean_and_reward_accuracy(self):
        batch = [DpoInputs(-1.0, -1.0, -1.0, -1.0), DpoInputs(-1.0, -2.0, -1.0, -1.0)]
        summary = mean_dpo_loss(batch)
        expected = (math.log(2) + dpo_loss(batch[1]).loss) / 2
        assert summary['loss'] == pytest.approx(expected)
        assert summary['reward_accuracy'] == pytest.approx(0.5)

    def test_empty_batch(self):
        with pytest.raises(DataError):
            mean_dpo_loss([])
