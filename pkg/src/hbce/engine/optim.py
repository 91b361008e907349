from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BETA1 = 0.9
BETA2 = 0.999
EPS = 1e-8


class ConsumedStateError(RuntimeError):
    """An AdamState was reused after it had already produced a successor."""


@dataclass
class AdamState:
    m: dict
    v: dict
    step: int = 0
    beta1: float = BETA1
    beta2: float = BETA2
    eps: float = EPS
    _consumed: bool = field(default=False, repr=False)

    @classmethod
    def zeros_like(cls, params: dict) -> "AdamState":
        return cls({k: np.zeros_like(v) for k, v in params.items()},
                   {k: np.zeros_like(v) for k, v in params.items()})


def adam_step(params: dict, grads: dict, state: AdamState, lr: float):
    """One bias-corrected Adam update.

    Returns ``(new_params, new_state)``. The input ``state`` is marked as
    consumed; passing it again raises :class:`ConsumedStateError`.
    """
    if state._consumed:
        raise ConsumedStateError("AdamState already used; pass the state returned by the previous step")
    if set(params) != set(grads) or set(params) != set(state.m):
        raise ValueError("params, grads and optimizer state must share the same keys")
    t = state.step + 1
    b1, b2 = state.beta1, state.beta2
    new_params, new_m, new_v = {}, {}, {}
    for name, p in params.items():
        g = grads[name]
        if g.shape != p.shape or state.m[name].shape != p.shape:
            raise ValueError(f"{name}: shape mismatch between parameter, gradient and state")
        m = b1 * state.m[name] + (1 - b1) * g
        v = b2 * state.v[name] + (1 - b2) * g * g
        m_hat = m / (1 - b1 ** t)
        v_hat = v / (1 - b2 ** t)
        new_params[name] = p - lr * m_hat / (np.sqrt(v_hat) + state.eps)
        new_m[name] = m
        new_v[name] = v
    state._consumed = True
    return new_params, AdamState(new_m, new_v, t, b1, b2, state.eps)
