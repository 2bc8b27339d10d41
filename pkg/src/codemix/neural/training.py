"""Seeded mini-batch training loop."""

import logging

import numpy as np

from ..exceptions import ConfigError, EmptyInput, NumericalError
from .optim import OptimizerState, clip_by_global_norm, optimizer_step

log = logging.getLogger(__name__)


def train(model, dataset, config, callback=None):
    """Train ``model`` on ``dataset`` and return ``(model, loss_curve)``.

    The run is a pure function of the model's initial parameters, the dataset
    order and ``config``: shuffling draws from ``config.seed`` only. The loss
    curve holds the sample-weighted mean batch loss of each epoch.

    ``callback(epoch, loss, model)`` may return True to stop early.
    """
    if not dataset:
        raise EmptyInput("cannot train on an empty dataset")
    if config.loss != model.loss_kind:
        raise ConfigError(f"{model.kind} model needs loss {model.loss_kind!r}, got {config.loss!r}")
    rng = np.random.default_rng(config.seed)
    state = OptimizerState()
    n = len(dataset)
    curve = []
    batch_id = 0
    for epoch in range(config.epochs):
        order = rng.permutation(n) if config.shuffle else np.arange(n)
        total = 0.0
        for start in range(0, n, config.batch_size):
            batch = [dataset[i] for i in order[start:start + config.batch_size]]
            loss, grads = model.loss_and_grads(batch)
            if not np.isfinite(loss) or not all(np.all(np.isfinite(g)) for g in grads.values()):
                raise NumericalError(
                    f"non-finite loss at epoch {epoch}, batch {batch_id}",
                    batch_id=batch_id, checkpoint=model)
            if config.clip_norm:
                grads = clip_by_global_norm(grads, config.clip_norm)
            model = model.with_params(optimizer_step(state, model.params, grads, config))
            total += loss * len(batch)
            batch_id += 1
        curve.append(total / n)
        log.debug("epoch %d loss %.6f", epoch + 1, curve[-1])
        if callback is not None and callback(epoch, curve[-1], model):
            break
    return model, curve
