"""Shared estimator for character-level encoder-decoder models."""

import logging

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import DataError, EmptyInput
from .neural import CATEGORICAL_CE, Seq2SeqNet, TrainConfig, load_model, save_model, train
from .text import CharVocab, normalize

log = logging.getLogger(__name__)


def check_string_pairs(X, y):
    """Validate parallel string sequences; returns NFC-normalized lists."""
    X = [normalize(str(s)) for s in X]
    y = [normalize(str(t)) for t in y]
    if len(X) != len(y):
        raise DataError(f"{len(X)} sources but {len(y)} targets")
    if not X:
        raise DataError("no training pairs")
    for s, t in zip(X, y):
        if not s or not t:
            raise DataError("empty source or target string")
    return X, y


class CharSeq2Seq(BaseEstimator):
    """Character encoder-decoder trained with teacher forcing.

    Subclasses fix the model kind, defaults and the decode length bound.
    """

    model_kind = "seq2seq"
    decode_slack = (3, 5)

    def __init__(self, hidden_dim=128, n_layers=1, attention=False, epochs=100,
                 batch_size=64, optimizer="rmsprop", learning_rate=0.001, clip_norm=None,
                 lowercase=True, max_chars=None, seed=0):
        self.hidden_dim = hidden_dim
        self.n_layers = n_layers
        self.attention = attention
        self.epochs = epochs
        self.batch_size = batch_size
        self.optimizer = optimizer
        self.learning_rate = learning_rate
        self.clip_norm = clip_norm
        self.lowercase = lowercase
        self.max_chars = max_chars
        self.seed = seed

    def _prep_source(self, text):
        text = normalize(str(text)).strip()
        return text.lower() if self.lowercase else text

    def train_config(self):
        return TrainConfig(epochs=self.epochs, batch_size=self.batch_size,
                           optimizer=self.optimizer, learning_rate=self.learning_rate,
                           loss=CATEGORICAL_CE, seed=self.seed, clip_norm=self.clip_norm)

    def fit(self, X, y):
        X, y = check_string_pairs(X, y)
        X = [self._prep_source(s) for s in X]
        pairs = list(zip(X, y))
        if self.max_chars is not None:
            kept = [(s, t) for s, t in pairs if len(s) <= self.max_chars and len(t) <= self.max_chars]
            self.n_skipped_ = len(pairs) - len(kept)
            if self.n_skipped_:
                log.warning("skipped %d pairs longer than %d characters",
                            self.n_skipped_, self.max_chars)
            pairs = kept
        else:
            self.n_skipped_ = 0
        if not pairs:
            raise DataError("every training pair was skipped")
        src_vocab = CharVocab("".join(s for s, _ in pairs))
        tgt_vocab = CharVocab("".join(t for _, t in pairs))
        net = Seq2SeqNet(src_vocab, tgt_vocab, hidden_dims=(self.hidden_dim,) * self.n_layers,
                         attention=self.attention, seed=self.seed)
        data = [(src_vocab.encode(s), tgt_vocab.encode(t)) for s, t in pairs]
        self.network_, self.loss_curve_ = train(net, data, self.train_config())
        self.training_accuracy_ = self.accuracy([s for s, _ in pairs], [t for _, t in pairs])
        return self

    def max_decode_len(self, text):
        a, b = self.decode_slack
        return a * len(text) + b

    def decode(self, text, attention=None):
        check_is_fitted(self, "network_")
        text = self._prep_source(text)
        if not text:
            raise EmptyInput("cannot decode an empty string")
        net = self.network_
        out = net.decode(net.src_vocab.encode(text), self.max_decode_len(text),
                         attention=attention)
        return net.tgt_vocab.decode(out)

    def predict(self, X):
        return [self.decode(s) for s in X]

    def accuracy(self, X, y):
        """Sequence exact-match and teacher-forced per-character accuracy."""
        check_is_fitted(self, "network_")
        net = self.network_
        exact = float(np.mean([self.decode(s) == t for s, t in zip(X, y)]))
        hits = total = 0
        for s, t in zip(X, y):
            tgt = net.tgt_vocab.encode(t)
            probs = net.forward([net.src_vocab.encode(self._prep_source(s))],
                                [[CharVocab.SOS] + tgt])[:, 0, :]
            pred = probs.argmax(axis=-1)
            gold = np.array(tgt + [CharVocab.EOS])
            hits += int((pred == gold).sum())
            total += len(gold)
        return {"sequence": exact, "character": hits / total}

    def save(self, path):
        check_is_fitted(self, "network_")
        save_model(path, self.network_, self.model_kind, train_config=self.train_config().to_dict(),
                   seed=self.seed, extra={"params": self.get_params(),
                                          "n_skipped": self.n_skipped_})

    @classmethod
    def load(cls, path):
        net, doc = load_model(path, expected_kind=cls.model_kind)
        est = cls(**doc["extra"].get("params", {}))
        est.network_ = net
        est.n_skipped_ = doc["extra"].get("n_skipped", 0)
        est.loss_curve_ = []
        return est

    @classmethod
    def from_network(cls, network, **params):
        est = cls(hidden_dim=network.hidden_dim, n_layers=len(network.hidden_dims),
                  attention=network.attention, **params)
        est.network_ = network
        est.n_skipped_ = 0
        est.loss_curve_ = []
        return est
