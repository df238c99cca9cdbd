"""Adam optimizer over named parameters."""

from typing import Dict, Iterable

import numpy as np
from pydantic import BaseModel, Field

from pim_har.models.constants import ADAM_BETA1, ADAM_BETA2, ADAM_EPS, LEARNING_RATE

from .layers import Parameter


class AdamState(BaseModel):
    """Hyperparameters and step counter of an Adam optimizer."""

    lr: float = Field(LEARNING_RATE, gt=0)
    beta1: float = Field(ADAM_BETA1, gt=0, lt=1)
    beta2: float = Field(ADAM_BETA2, gt=0, lt=1)
    eps: float = Field(ADAM_EPS, gt=0)
    step: int = Field(0, ge=0)


def zero_grad(params: Iterable[Parameter]) -> None:
    for param in params:
        param.grad.fill(0.0)


def adam_step(params: Dict[str, Parameter], state: AdamState) -> AdamState:
    """Apply one bias-corrected Adam update in place.

    Returns:
        The state with its step counter incremented once
    """
    step = state.step + 1
    correction1 = 1.0 - state.beta1**step
    correction2 = 1.0 - state.beta2**step
    for param in params.values():
        param.adam_m = state.beta1 * param.adam_m + (1.0 - state.beta1) * param.grad
        param.adam_v = state.beta2 * param.adam_v + (1.0 - state.beta2) * param.grad**2
        m_hat = param.adam_m / correction1
        v_hat = param.adam_v / correction2
        param.value = param.value - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    return state.model_copy(update={"step": step})
