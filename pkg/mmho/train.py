# coding: utf-8

"""
Training loop, success probability evaluation and the learning curve experiment.
"""

__all__ = [
    "TrainingError", "TrainConfig", "TrainReport", "CurvePoint", "train", "evaluate",
    "majority_baseline", "handoff_metrics", "learning_curve", "write_metrics_csv",
    "write_curve_csv",
]


import csv
import collections
from multiprocessing.pool import ThreadPool

import luigi
import numpy as np
import six

from mmho.config import Config
from mmho.dataset import num_steps, take_steps
from mmho.model.gru import init_params, backward_batch, predict_batch
from mmho.model.optimizer import AdamState, adam_update, clip_gradients
from mmho.util import MMHOError, ContractError, ArgumentError, derive_rng, perf_counter
from mmho.logger import get_logger


logger = get_logger(__name__)


class TrainingError(MMHOError):
    """
    Raised when training diverges, the message names the epoch and the episode.
    """


class TrainConfig(object):
    """
    Hyperparameters of a training run. Defaults are read from the ``[training]`` section of the
    mmho config when not passed explicitly, see :py:meth:`from_config`.
    """

    _fields = [
        ("epochs", int), ("seed", int), ("learning_rate", float), ("beta1", float),
        ("beta2", float), ("epsilon", float), ("eval_every", int), ("clip_norm", float),
        ("hidden_size", int), ("embedding_size", int), ("batch_size", int), ("threads", int),
    ]

    def __init__(self, epochs=30, seed=0, learning_rate=1e-3, beta1=0.9, beta2=0.999,
            epsilon=1e-8, eval_every=1, clip_norm=5.0, hidden_size=64, embedding_size=20,
            batch_size=1, threads=1):
        super(TrainConfig, self).__init__()

        self.epochs = int(epochs)
        self.seed = int(seed)
        self.learning_rate = float(learning_rate)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.epsilon = float(epsilon)
        self.eval_every = int(eval_every)
        self.clip_norm = float(clip_norm)
        self.hidden_size = int(hidden_size)
        self.embedding_size = int(embedding_size)
        self.batch_size = int(batch_size)
        self.threads = int(threads)

        if self.epochs < 1:
            raise ArgumentError("epochs must be at least 1, got {}".format(self.epochs))
        if self.eval_every < 1:
            raise ArgumentError("eval_every must be at least 1, got {}".format(self.eval_every))
        if self.batch_size < 1:
            raise ArgumentError("batch_size must be at least 1, got {}".format(self.batch_size))
        if self.learning_rate <= 0:
            raise ArgumentError("learning_rate must be positive, got {}".format(
                self.learning_rate))
        if self.clip_norm < 0:
            raise ArgumentError("clip_norm must not be negative, got {}".format(self.clip_norm))
        if self.hidden_size < 1 or self.embedding_size < 1:
            raise ArgumentError("invalid model sizes H={}, E={}".format(self.hidden_size,
                self.embedding_size))

    @classmethod
    def from_config(cls, **kwargs):
        """
        Creates a config with defaults taken from the ``[training]`` section, overwritten by all
        *kwargs* that are not *None*.
        """
        cfg = Config.instance()
        opts = {}
        for name, type_ in cls._fields:
            if kwargs.get(name) is not None:
                opts[name] = kwargs[name]
            elif cfg.has_option("training", name):
                opts[name] = cfg.get_expanded("training", name, type=type_)
        return cls(**opts)

    def replace(self, **kwargs):
        opts = self.to_dict()
        opts.update(kwargs)
        return self.__class__(**opts)

    def to_dict(self):
        return collections.OrderedDict((name, getattr(self, name)) for name, _ in self._fields)

    def __repr__(self):
        return "{}({})".format(self.__class__.__name__, ", ".join(
            "{}={!r}".format(k, v) for k, v in self.to_dict().items()))


class TrainReport(object):
    """
    Metrics of a training run. Per epoch, *losses* holds the mean per-step cross-entropy,
    *train_acc* and *test_acc* the success probabilities (*None* for epochs without evaluation or
    without test set) and *epoch_times* the wall-clock seconds.
    """

    def __init__(self):
        super(TrainReport, self).__init__()

        self.losses = []
        self.train_acc = []
        self.test_acc = []
        self.epoch_times = []
        self.final_success = None
        self.baseline = None
        self.handoff_precision = None
        self.handoff_recall = None
        self.steps = 0

    def __repr__(self):
        return "{}(epochs={}, final_success={})".format(self.__class__.__name__,
            len(self.losses), self.final_success)

    @property
    def epochs(self):
        return len(self.losses)

    def rows(self):
        fmt = lambda v: "" if v is None else "{:.6f}".format(v)
        for i in six.moves.range(self.epochs):
            yield [i + 1, fmt(self.losses[i]), fmt(self.train_acc[i]), fmt(self.test_acc[i])]


class CurvePoint(object):

    def __init__(self, train_size, success_prob, baseline, steps):
        super(CurvePoint, self).__init__()

        self.train_size = int(train_size)
        self.success_prob = float(success_prob)
        self.baseline = float(baseline)
        self.steps = int(steps)

    def __repr__(self):
        return "{}(train_size={}, success_prob={:.4f})".format(self.__class__.__name__,
            self.train_size, self.success_prob)


def _chunks(seq, size):
    return [seq[i:i + size] for i in six.moves.range(0, len(seq), size)]


def _count_correct(model, episodes):
    preds = predict_batch([ep.beam_indices for ep in episodes], model)
    return sum(int(np.sum(p == np.asarray(ep.labels))) for p, ep in zip(preds, episodes))


def evaluate(model, dataset, threads=1, chunk_size=64):
    """
    Returns the fraction of time steps over all episodes in *dataset* at which the predicted base
    station equals the label. Chunks of *chunk_size* episodes are evaluated by up to *threads*
    threads against the same model.
    """
    episodes = list(dataset)
    if not episodes:
        raise ContractError("cannot evaluate on an empty dataset")

    chunks = _chunks(episodes, chunk_size)
    if threads is None or threads <= 1 or len(chunks) == 1:
        correct = sum(_count_correct(model, chunk) for chunk in chunks)
    else:
        pool = ThreadPool(threads)
        try:
            correct = sum(pool.map(lambda chunk: _count_correct(model, chunk), chunks))
        finally:
            pool.close()
            pool.join()

    return correct / float(num_steps(episodes))


def majority_baseline(train_set, test_set):
    """
    Returns the success probability on *test_set* of always predicting the most frequent label of
    *train_set* (lowest index on ties).
    """
    train_labels = np.concatenate([ep.labels for ep in train_set])
    test_labels = np.concatenate([ep.labels for ep in test_set])
    majority = int(np.argmax(np.bincount(train_labels)))
    return float(np.mean(test_labels == majority))


def handoff_metrics(model, dataset):
    """
    Returns precision and recall of proactive hand-off detection on *dataset*. A step *t* >= 1 is a
    hand-off when its label differs from the label of step *t - 1*, which is the base station
    serving step *t*. A hand-off is predicted when the predicted base station differs from it.
    Undefined ratios are reported as zero.
    """
    episodes = list(dataset)
    preds = predict_batch([ep.beam_indices for ep in episodes], model)

    tp = n_pred = n_true = 0
    for p, ep in zip(preds, episodes):
        labels = np.asarray(ep.labels)
        true = labels[1:] != labels[:-1]
        predicted = p[1:] != labels[:-1]
        tp += int(np.sum(true & predicted))
        n_true += int(np.sum(true))
        n_pred += int(np.sum(predicted))

    precision = tp / float(n_pred) if n_pred else 0.0
    recall = tp / float(n_true) if n_true else 0.0
    return precision, recall


def train(train_set, test_set, cfg, num_beams, num_outputs, callback=None):
    """
    Trains a new model on the episodes *train_set* for ``cfg.epochs`` epochs and returns it along
    with a :py:class:`TrainReport`. *num_beams* and *num_outputs* define the codebook size and the
    number of base stations. *test_set* may be empty or *None*.

    Each epoch visits the episodes in an order drawn from the seed and performs one clipped Adam
    update per batch of ``cfg.batch_size`` episodes. *callback* is invoked with the epoch number and
    the report after every epoch. A :py:class:`TrainingError` is raised on non-finite losses.
    """
    train_set = list(train_set)
    test_set = list(test_set or [])
    if not train_set:
        raise ContractError("cannot train on an empty training set")

    model = init_params(num_beams, num_outputs, embedding_size=cfg.embedding_size,
        hidden_size=cfg.hidden_size, seed=cfg.seed)
    state = AdamState.for_model(model)
    report = TrainReport()
    total_steps = num_steps(train_set)

    for epoch in six.moves.range(1, cfg.epochs + 1):
        t0 = perf_counter()
        order = derive_rng(cfg.seed, "shuffle", epoch).permutation(len(train_set))

        loss_sum = 0.0
        for batch in _chunks(list(order), cfg.batch_size):
            episodes = [train_set[i] for i in batch]
            batch_loss, grads = backward_batch([ep.beam_indices for ep in episodes],
                [ep.labels for ep in episodes], model)
            if not np.isfinite(batch_loss):
                raise TrainingError("non-finite loss {} in epoch {} at episode {}".format(
                    batch_loss, epoch, batch[0]))

            grads, norm = clip_gradients(grads, cfg.clip_norm)
            adam_update(model, grads, state, lr=cfg.learning_rate, beta1=cfg.beta1,
                beta2=cfg.beta2, epsilon=cfg.epsilon)
            loss_sum += batch_loss * len(batch)

        report.losses.append(loss_sum / total_steps)

        if epoch % cfg.eval_every == 0 or epoch == cfg.epochs:
            report.train_acc.append(evaluate(model, train_set, threads=cfg.threads))
            report.test_acc.append(
                evaluate(model, test_set, threads=cfg.threads) if test_set else None)
        else:
            report.train_acc.append(None)
            report.test_acc.append(None)
        report.epoch_times.append(perf_counter() - t0)

        logger.info("epoch {}/{}: loss {:.5f}, train {}, test {}".format(epoch, cfg.epochs,
            report.losses[-1], report.train_acc[-1], report.test_acc[-1]))

        if callable(callback):
            callback(epoch, report)

    if not model.is_finite():
        raise TrainingError("model parameters became non-finite after epoch {}".format(
            cfg.epochs))

    eval_set = test_set or train_set
    report.final_success = report.test_acc[-1] if test_set else report.train_acc[-1]
    report.baseline = majority_baseline(train_set, eval_set)
    report.handoff_precision, report.handoff_recall = handoff_metrics(model, eval_set)
    report.steps = state.step

    return model, report


def learning_curve(episodes, sizes, cfg, num_beams, num_outputs, test_steps=2000, seed=0,
        callback=None):
    """
    Runs the learning curve experiment for one *seed* on a pool of *episodes* and returns a list
    of :py:class:`CurvePoint`'s, one per training size in *sizes*.

    The pool is shuffled with a stream derived from *seed*. Its leading whole episodes with at
    least *test_steps* steps form the held-out set, and for every size a fresh model is trained on
    the leading remaining episodes that amount to at least that many steps. An
    :py:class:`mmho.util.ArgumentError` is raised when *sizes* are not ascending or exceed the
    available data.
    """
    sizes = [int(s) for s in sizes]
    if not sizes:
        raise ArgumentError("at least one training size is required")
    if any(s <= 0 for s in sizes) or any(b <= a for a, b in zip(sizes[:-1], sizes[1:])):
        raise ArgumentError("sizes must be positive and ascending, got {}".format(sizes))

    episodes = list(episodes)
    order = derive_rng(seed, "curve").permutation(len(episodes))
    shuffled = [episodes[i] for i in order]

    test_set = take_steps(shuffled, test_steps)
    pool = shuffled[len(test_set):]
    available = num_steps(pool)
    if sizes[-1] > available:
        raise ArgumentError("training size {} exceeds the {} steps available after holding out "
            "{} test steps".format(sizes[-1], available, num_steps(test_set)))

    points = []
    for size in sizes:
        train_set = take_steps(pool, size)
        train_seed = int(derive_rng(seed, "curve", size).integers(2**31))
        run_cfg = cfg.replace(seed=train_seed, eval_every=cfg.epochs)
        model, report = train(train_set, test_set, run_cfg, num_beams, num_outputs)

        point = CurvePoint(size, report.final_success, report.baseline, num_steps(train_set))
        points.append(point)
        logger.info("seed {}, size {}: success probability {:.4f} (baseline {:.4f})".format(seed,
            size, point.success_prob, point.baseline))

        if callable(callback):
            callback(point)

    return points


def _write_csv(path, header, rows):
    with luigi.LocalTarget(str(path)).open("w") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def write_metrics_csv(report, path):
    """
    Writes the per-epoch metrics of a :py:class:`TrainReport` *report* to *path* with the columns
    ``epoch,loss,train_acc,test_acc``.
    """
    _write_csv(path, ["epoch", "loss", "train_acc", "test_acc"], report.rows())


def write_curve_csv(points, path):
    """
    Writes :py:class:`CurvePoint`'s to *path* with the columns ``train_size,success_prob``.
    """
    _write_csv(path, ["train_size", "success_prob"],
        ([p.train_size, "{:.6f}".format(p.success_prob)] for p in points))
