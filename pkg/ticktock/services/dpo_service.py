"""
DPO Loss Reference
Scalar sigmoid-form preference loss and its closed-form gradient.
"""

import logging
from typing import Dict, Sequence

from scipy.special import expit, log_expit

from ticktock.models.preference import DpoInputs, DpoResult
from ticktock.utils.errors import DataError, ErrorCode

logger = logging.getLogger(__name__)

DEFAULT_BETA = 0.3


def dpo_loss(inputs: DpoInputs) -> DpoResult:
    """loss = -ln sigmoid(beta * (policy_margin - reference_margin)).

    d loss / d policy_margin = -beta * sigmoid(-beta * (policy_margin - reference_margin)).
    """
    z = inputs.beta * (inputs.policy_margin - inputs.reference_margin)
    loss = -float(log_expit(z))
    grad = -inputs.beta * float(expit(-z))
    return DpoResult(loss=loss, grad_wrt_policy_margin=grad)


def mean_dpo_loss(batch: Sequence[DpoInputs]) -> Dict[str, float]:
    """Mean loss over a batch and the fraction of pairs whose implicit reward prefers the chosen answer."""
    if not batch:
        raise DataError("mean_dpo_loss needs at least one example", ErrorCode.EMPTY_INPUT)
    results = [dpo_loss(inputs) for inputs in batch]
    preferred = sum(1 for inputs in batch if inputs.policy_margin - inputs.reference_margin > 0)
    return {
        'loss': sum(result.loss for result in results) / len(results),
        'reward_accuracy': preferred / len(batch),
    }
