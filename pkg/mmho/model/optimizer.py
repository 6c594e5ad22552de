# coding: utf-8

"""
Adam optimizer and global-norm gradient clipping operating on :py:class:`GruModel` parameters.
"""

__all__ = ["AdamState", "adam_update", "clip_gradients", "global_norm"]


import collections

import numpy as np

from mmho.util import ContractError


class AdamState(object):
    """
    First and second moment accumulators *m* and *v* per parameter of a model, plus the number of
    updates *step* performed so far.
    """

    def __init__(self, params):
        super(AdamState, self).__init__()

        self.m = collections.OrderedDict((name, np.zeros_like(arr)) for name, arr in params.items())
        self.v = collections.OrderedDict((name, np.zeros_like(arr)) for name, arr in params.items())
        self.step = 0

    def __repr__(self):
        return "{}(step={}, params={})".format(self.__class__.__name__, self.step, len(self.m))

    @classmethod
    def for_model(cls, model):
        return cls(model.params())


def adam_update(model, grads, state, lr=1e-3, beta1=0.9, beta2=0.999, epsilon=1e-8):
    """
    Applies one bias-corrected Adam step with gradients *grads* to all parameters of *model* in
    place and advances *state*. Returns the model and the state.
    """
    params = model.params()
    if set(grads) != set(params):
        raise ContractError("gradients for {} do not match parameters {}".format(
            sorted(grads), sorted(params)))

    state.step += 1
    t = state.step
    for name, p in params.items():
        g = grads[name]
        if g.shape != p.shape:
            raise ContractError("gradient of {} has shape {}, expected {}".format(name, g.shape,
                p.shape))

        m = state.m[name]
        v = state.v[name]
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * g**2

        m_hat = m / (1.0 - beta1**t)
        v_hat = v / (1.0 - beta2**t)
        p -= lr * m_hat / (np.sqrt(v_hat) + epsilon)

    return model, state


def global_norm(grads):
    return float(np.sqrt(sum(np.sum(g**2) for g in grads.values())))


def clip_gradients(grads, max_norm):
    """
    Rescales all *grads* jointly so that their global norm does not exceed *max_norm*. Returns the
    (possibly rescaled) gradients and the norm before clipping. A *max_norm* of *None* or zero
    disables clipping.
    """
    norm = global_norm(grads)
    if max_norm and norm > max_norm:
        scale = max_norm / norm
        grads = collections.OrderedDict((name, g * scale) for name, g in grads.items())
    return grads, norm
