# coding: utf-8

"""
Gated recurrent hand-off predictor: beam embedding, GRU recurrence and a dense softmax head, with
analytic gradients computed by backpropagation through time.

Sequences of different lengths are processed together as time-major batches that are padded at
the end. Padded steps carry the hidden state forward unchanged and do not contribute to the loss.
"""

__all__ = [
    "GruModel", "init_params", "embed", "gru_step", "softmax", "predict_step", "forward",
    "forward_batch", "loss", "backward", "backward_batch", "predict", "predict_batch", "LOG_CLAMP",
]


import collections

import numpy as np
import six

from mmho.util import ContractError, derive_rng
from mmho.logger import get_logger


logger = get_logger(__name__)

#: Lower bound of probabilities before taking the logarithm in the loss.
LOG_CLAMP = 1e-12


class GruModel(object):
    """
    All learnable tensors of the predictor. *embd* has shape ``(M_CB, E)``, the input weights
    ``W_r``, ``W_z`` and ``W_q`` have shape ``(H, E)``, the recurrent weights ``U_*`` shape
    ``(H, H)``, the biases ``c_*`` shape ``(H,)``, and the output head ``W_f`` and ``c_f`` shapes
    ``(N, H)`` and ``(N,)``.

    .. py:attribute:: param_names

        type: tuple

        Canonical order of all parameters, also used in checkpoint files.
    """

    param_names = ("embd", "W_r", "W_z", "W_q", "U_r", "U_z", "U_q", "c_r", "c_z", "c_q", "W_f",
        "c_f")

    @classmethod
    def shapes(cls, num_beams, embedding_size, hidden_size, num_outputs):
        M, E, H, N = num_beams, embedding_size, hidden_size, num_outputs
        return collections.OrderedDict([
            ("embd", (M, E)),
            ("W_r", (H, E)), ("W_z", (H, E)), ("W_q", (H, E)),
            ("U_r", (H, H)), ("U_z", (H, H)), ("U_q", (H, H)),
            ("c_r", (H,)), ("c_z", (H,)), ("c_q", (H,)),
            ("W_f", (N, H)), ("c_f", (N,)),
        ])

    @classmethod
    def zeros(cls, num_beams, embedding_size, hidden_size, num_outputs):
        shapes = cls.shapes(num_beams, embedding_size, hidden_size, num_outputs)
        return cls(**{name: np.zeros(shape) for name, shape in shapes.items()})

    def __init__(self, **params):
        super(GruModel, self).__init__()

        missing = set(self.param_names) - set(params)
        if missing:
            raise ContractError("missing model parameters: {}".format(", ".join(sorted(missing))))

        for name in self.param_names:
            setattr(self, name, np.array(params[name], dtype=np.float64))

        expected = self.shapes(*self.dims)
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise ContractError("parameter {} has shape {}, expected {}".format(name,
                    getattr(self, name).shape, shape))
        if self.num_outputs < 2:
            raise ContractError("the model needs at least 2 outputs, got {}".format(
                self.num_outputs))

    def __repr__(self):
        return "{}(M_CB={}, E={}, H={}, N={})".format(self.__class__.__name__, *self.dims)

    @property
    def num_beams(self):
        return self.embd.shape[0]

    @property
    def embedding_size(self):
        return self.embd.shape[1]

    @property
    def hidden_size(self):
        return self.W_r.shape[0]

    @property
    def num_outputs(self):
        return self.W_f.shape[0]

    @property
    def dims(self):
        return (self.num_beams, self.embedding_size, self.hidden_size, self.num_outputs)

    def params(self):
        """
        Returns an ordered dictionary mapping parameter names to the (mutable) arrays.
        """
        return collections.OrderedDict((name, getattr(self, name)) for name in self.param_names)

    def copy(self):
        return self.__class__(**{name: arr.copy() for name, arr in self.params().items()})

    def is_finite(self):
        return all(np.isfinite(arr).all() for arr in self.params().values())


def init_params(num_beams, num_outputs, embedding_size=20, hidden_size=64, seed=0):
    """
    Returns a new :py:class:`GruModel` whose input and recurrent matrices are drawn uniformly from
    ``[-1/sqrt(H), 1/sqrt(H)]``, the embedding uniformly from ``[-0.1, 0.1]`` and whose biases are
    zero. The draw is deterministic in *seed*.
    """
    if min(num_beams, embedding_size, hidden_size) < 1:
        raise ContractError("invalid model dimensions M_CB={}, E={}, H={}".format(num_beams,
            embedding_size, hidden_size))

    rng = derive_rng(seed, "init")
    k = 1.0 / np.sqrt(hidden_size)
    shapes = GruModel.shapes(num_beams, embedding_size, hidden_size, num_outputs)

    params = {}
    for name, shape in shapes.items():
        if name == "embd":
            params[name] = rng.uniform(-0.1, 0.1, size=shape)
        elif name.startswith("c_"):
            params[name] = np.zeros(shape)
        else:
            params[name] = rng.uniform(-k, k, size=shape)

    return GruModel(**params)


def _sigmoid(x):
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-x))


def softmax(a):
    """
    Normalizes the logits *a* (last axis) into probabilities, subtracting the maximum first.
    """
    a = np.asarray(a, dtype=float)
    e = np.exp(a - a.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def _check_beams(beams, model):
    beams = np.asarray(beams)
    if beams.size and (beams.min() < 0 or beams.max() >= model.num_beams):
        raise ContractError("beam index outside [0, {})".format(model.num_beams))
    return beams


def embed(b_t, model):
    """
    Returns the embedding vector of beam index *b_t*.
    """
    if not 0 <= b_t < model.num_beams:
        raise ContractError("beam index {} outside [0, {})".format(b_t, model.num_beams))
    return model.embd[int(b_t)]


def gru_step(x_t, q_prev, model):
    """
    Advances the hidden state *q_prev* by one input *x_t* and returns the new state and a cache of
    intermediate values. Batches are supported by passing 2-D arrays with one row per sequence.
    """
    r = _sigmoid(x_t.dot(model.W_r.T) + q_prev.dot(model.U_r.T) + model.c_r)
    z = _sigmoid(x_t.dot(model.W_z.T) + q_prev.dot(model.U_z.T) + model.c_z)
    g = np.tanh(x_t.dot(model.W_q.T) + (r * q_prev).dot(model.U_q.T) + model.c_q)
    q = (1.0 - z) * q_prev + z * g

    cache = {"x": x_t, "q_prev": q_prev, "r": r, "z": z, "g": g}
    return q, cache


def predict_step(q_t, model):
    """
    Returns the output probabilities for hidden state *q_t* and the index of the most probable base
    station (lowest index on ties).
    """
    probs = softmax(q_t.dot(model.W_f.T) + model.c_f)
    return probs, np.argmax(probs, axis=-1)


def _pad(sequences, model):
    sequences = [_check_beams(seq, model) for seq in sequences]
    if not sequences or any(len(seq) == 0 for seq in sequences):
        raise ContractError("sequences must be non-empty")

    T = max(len(seq) for seq in sequences)
    idx = np.zeros((T, len(sequences)), dtype=int)
    mask = np.zeros((T, len(sequences)))
    for b, seq in enumerate(sequences):
        idx[:len(seq), b] = seq
        mask[:len(seq), b] = 1.0
    return idx, mask


def _run(idx, mask, model):
    T, B = idx.shape
    q = np.zeros((B, model.hidden_size))
    probs = np.zeros((T, B, model.num_outputs))
    states = np.zeros((T, B, model.hidden_size))
    caches = []

    for t in six.moves.range(T):
        q_new, cache = gru_step(model.embd[idx[t]], q, model)
        m = mask[t][:, None]
        q = m * q_new + (1.0 - m) * q
        probs[t] = predict_step(q, model)[0]
        states[t] = q
        caches.append(cache)

    return probs, states, caches


def forward(beams, model):
    """
    Runs the model over a single sequence of *beams* starting from a zero hidden state and returns
    the per-step probabilities with shape ``(T, N)`` and hidden states with shape ``(T, H)``.
    """
    idx, mask = _pad([beams], model)
    probs, states, _ = _run(idx, mask, model)
    return probs[:, 0], states[:, 0]


def forward_batch(sequences, model):
    """
    Runs the model over multiple beam *sequences* at once and returns a list of per-step
    probability arrays, one per sequence.
    """
    idx, mask = _pad(sequences, model)
    probs, _, _ = _run(idx, mask, model)
    return [probs[:len(seq), b] for b, seq in enumerate(sequences)]


def loss(probs, labels):
    """
    Returns the cross-entropy ``sum_t -log(probs[t, labels[t]])`` of per-step probabilities
    *probs* and integer *labels*, clamping probabilities at :py:data:`LOG_CLAMP`.
    """
    probs = np.atleast_2d(probs)
    labels = np.asarray(labels, dtype=int)
    if probs.shape[0] != labels.shape[0]:
        raise ContractError("{} probability vectors but {} labels".format(probs.shape[0],
            labels.shape[0]))
    if labels.size and (labels.min() < 0 or labels.max() >= probs.shape[1]):
        raise ContractError("label outside [0, {})".format(probs.shape[1]))

    p = probs[np.arange(labels.shape[0]), labels]
    return float(-np.sum(np.log(np.maximum(p, LOG_CLAMP))))


def _pad_labels(label_seqs, shape):
    labels = np.zeros(shape, dtype=int)
    for b, seq in enumerate(label_seqs):
        labels[:len(seq), b] = seq
    return labels


def backward_batch(sequences, label_seqs, model):
    """
    Computes the mean of the sequence losses over a batch of beam *sequences* with labels
    *label_seqs* and the exact gradients of that mean with respect to all model parameters. Returns
    the mean loss and an ordered dictionary of gradients keyed like :py:meth:`GruModel.params`.
    """
    if len(sequences) != len(label_seqs):
        raise ContractError("{} sequences but {} label sequences".format(len(sequences),
            len(label_seqs)))
    for seq, labels in zip(sequences, label_seqs):
        if len(seq) != len(labels):
            raise ContractError("sequence of length {} has {} labels".format(len(seq),
                len(labels)))

    idx, mask = _pad(sequences, model)
    labels = _pad_labels(label_seqs, idx.shape)
    probs, states, caches = _run(idx, mask, model)
    T, B = idx.shape
    scale = 1.0 / B

    rows = np.arange(B)
    p_label = np.take_along_axis(probs, labels[..., None], axis=2)[..., 0]
    total = -np.sum(mask * np.log(np.maximum(p_label, LOG_CLAMP))) * scale

    grads = collections.OrderedDict(
        (name, np.zeros_like(arr)) for name, arr in model.params().items())

    dq_next = np.zeros((B, model.hidden_size))
    for t in reversed(six.moves.range(T)):
        c = caches[t]
        m = mask[t][:, None]

        # softmax and cross-entropy, constant where the clamp is active
        do = probs[t].copy()
        do[rows, labels[t]] -= 1.0
        do *= (p_label[t] >= LOG_CLAMP)[:, None] * m * scale

        grads["W_f"] += do.T.dot(states[t])
        grads["c_f"] += do.sum(axis=0)
        dq = do.dot(model.W_f) + dq_next

        # padded steps pass the state through
        dqn = dq * m
        dq_prev = dq * (1.0 - m)

        # q = (1 - z) * q_prev + z * g
        dg = dqn * c["z"]
        dz = dqn * (c["g"] - c["q_prev"])
        dq_prev += dqn * (1.0 - c["z"])

        # candidate
        da_q = dg * (1.0 - c["g"]**2)
        grads["W_q"] += da_q.T.dot(c["x"])
        grads["U_q"] += da_q.T.dot(c["r"] * c["q_prev"])
        grads["c_q"] += da_q.sum(axis=0)
        drq = da_q.dot(model.U_q)
        dr = drq * c["q_prev"]
        dq_prev += drq * c["r"]

        # gates
        da_z = dz * c["z"] * (1.0 - c["z"])
        da_r = dr * c["r"] * (1.0 - c["r"])
        grads["W_z"] += da_z.T.dot(c["x"])
        grads["U_z"] += da_z.T.dot(c["q_prev"])
        grads["c_z"] += da_z.sum(axis=0)
        grads["W_r"] += da_r.T.dot(c["x"])
        grads["U_r"] += da_r.T.dot(c["q_prev"])
        grads["c_r"] += da_r.sum(axis=0)
        dq_prev += da_z.dot(model.U_z) + da_r.dot(model.U_r)

        # embedding rows of the inputs
        dx = da_q.dot(model.W_q) + da_z.dot(model.W_z) + da_r.dot(model.W_r)
        np.add.at(grads["embd"], idx[t], dx)

        dq_next = dq_prev

    return float(total), grads


def backward(beams, labels, model):
    """
    Returns the exact gradients of :py:func:`loss` over a single sequence of *beams* with per-step
    *labels* with respect to all model parameters, as an ordered dictionary.
    """
    return backward_batch([beams], [labels], model)[1]


def predict_batch(sequences, model):
    """
    Returns the predicted base station index per step for each of the beam *sequences*.
    """
    return [np.argmax(p, axis=-1) for p in forward_batch(sequences, model)]


def predict(beams, model):
    """
    Returns the predicted base station index for every step of a single sequence of *beams*.
    """
    return predict_batch([beams], model)[0]
