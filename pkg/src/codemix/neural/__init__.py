"""Small numpy sequence-model toolkit: LSTM stacks, encoder-decoder with
attention, BPTT gradients, Adam/RMSProp and a finite-difference checker."""

from ..exceptions import ConfigError
from ..text import CharVocab
from .gradcheck import gradient_check
from .lstm import LstmLayerParams, lstm_cell_forward, run_stack, sigmoid
from .models import LEARNED, ONEHOT, Seq2SeqNet, TaggerNet, softmax
from .optim import (
    ADAM, BINARY_CE, CATEGORICAL_CE, RMSPROP, OptimizerState, TrainConfig,
    optimizer_step,
)
from .serialization import load_model, save_model
from .training import train

__all__ = [
    "LstmLayerParams", "lstm_cell_forward", "run_stack", "sigmoid", "softmax",
    "TaggerNet", "Seq2SeqNet", "ONEHOT", "LEARNED",
    "TrainConfig", "OptimizerState", "optimizer_step", "train",
    "ADAM", "RMSPROP", "BINARY_CE", "CATEGORICAL_CE",
    "seq2seq_forward", "loss_and_grads", "greedy_decode", "gradient_check",
    "save_model", "load_model",
]


def seq2seq_forward(model, source, target_prefix, attention=None):
    """Per-step output distributions for one source and a teacher-forced prefix.

    Returns ``len(target_prefix) + 1`` rows, one per decoder input
    ``SOS + target_prefix``.
    """
    probs = model.forward([list(source)], [[CharVocab.SOS] + list(target_prefix)],
                          attention=attention)
    return probs[:, 0, :]


def loss_and_grads(model, batch, config=None):
    if config is not None and config.loss != model.loss_kind:
        raise ConfigError(f"{model.kind} model needs loss {model.loss_kind!r}")
    return model.loss_and_grads(batch)


def greedy_decode(model, source, max_len):
    return model.decode(source, max_len)
