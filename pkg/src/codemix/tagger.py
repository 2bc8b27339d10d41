"""Word-level Bengali/English language identification and segmentation."""

import logging
import re
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import DataError, EmptyInput, KindError
from .neural import ADAM, BINARY_CE, TaggerNet, TrainConfig, load_model, save_model, train
from .text import CharVocab, LangTag, Segment, TaggedToken, Token, TokenKind, normalize

log = logging.getLogger(__name__)

_DIGITS = re.compile(r"\d")
DIGIT_PLACEHOLDER = "0"


def normalize_word(word):
    """Lowercase, NFC, every digit mapped to one placeholder."""
    return _DIGITS.sub(DIGIT_PLACEHOLDER, normalize(str(word)).lower())


def dedup_labels(words):
    """Collapse duplicate words by majority label; ties are dropped with a warning."""
    votes = defaultdict(Counter)
    order = []
    for word, tag in words:
        key = normalize_word(word)
        if key not in votes:
            order.append(key)
        votes[key][LangTag.parse(tag)] += 1
    out = []
    for key in order:
        ranked = votes[key].most_common()
        if len(ranked) > 1 and ranked[0][1] == ranked[1][1]:
            msg = f"dropping {key!r}: conflicting labels {dict(votes[key])}"
            log.warning(msg)
            warnings.warn(msg, stacklevel=3)
            continue
        out.append((key, ranked[0][0]))
    return out


@dataclass
class TaggerTrainSpec:
    epochs: int = 500
    batch_size: int = 256
    learning_rate: float = 0.001
    seed: int = 0

    def to_config(self):
        return TrainConfig(epochs=self.epochs, batch_size=self.batch_size, optimizer=ADAM,
                           learning_rate=self.learning_rate, loss=BINARY_CE, seed=self.seed)


class LanguageTagger(BaseEstimator, ClassifierMixin):
    """Character LSTM classifier labelling single words as Bengali or English.

    Parameters
    ----------
    embed_dim : int
        Size of the learned character embedding (the network input).
    hidden_dims : tuple of int
        LSTM layer sizes, bottom to top.
    threshold : float
        A word is tagged Bengali when its score is ``>= threshold``.
    epochs, batch_size, learning_rate, seed
        Adam / binary cross-entropy training settings.

    Attributes
    ----------
    network_ : TaggerNet
    classes_ : ndarray of LangTag
        ``[En, Bn]``; the network output is the probability of class 1.
    loss_curve_ : list of float
    """

    def __init__(self, embed_dim=15, hidden_dims=(35, 25), threshold=0.5, epochs=500,
                 batch_size=256, learning_rate=0.001, seed=0):
        self.embed_dim = embed_dim
        self.hidden_dims = hidden_dims
        self.threshold = threshold
        self.epochs = epochs
        self.batch_size = batch_size
        self.learning_rate = learning_rate
        self.seed = seed

    def _train_config(self):
        return TaggerTrainSpec(self.epochs, self.batch_size, self.learning_rate,
                               self.seed).to_config()

    def fit(self, X, y):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("threshold must lie strictly between 0 and 1")
        if len(X) != len(y):
            raise DataError(f"{len(X)} words but {len(y)} labels")
        words = dedup_labels(zip(X, y))
        if not words:
            raise DataError("no training words left after deduplication")
        present = {tag for _, tag in words}
        if present != {LangTag.Bn, LangTag.En}:
            raise DataError(f"training data needs both classes, found {sorted(map(str, present))}")
        vocab = CharVocab("".join(w for w, _ in words))
        net = TaggerNet(vocab, self.embed_dim, self.hidden_dims, seed=self.seed)
        data = [(vocab.encode(w), 1 if tag is LangTag.Bn else 0) for w, tag in words]
        self.network_, self.loss_curve_ = train(net, data, self._train_config())
        self.classes_ = np.array([LangTag.En, LangTag.Bn], dtype=object)
        return self

    @classmethod
    def from_network(cls, network, threshold=0.5):
        """Wrap an existing (for instance zero-initialised) network."""
        est = cls(embed_dim=network.embed_dim, hidden_dims=network.hidden_dims,
                  threshold=threshold)
        est.network_ = network
        est.loss_curve_ = []
        est.classes_ = np.array([LangTag.En, LangTag.Bn], dtype=object)
        return est

    def _encode(self, words):
        vocab = self.network_.vocab
        seqs = []
        for w in words:
            key = normalize_word(w)
            if not key:
                raise EmptyInput("cannot tag an empty word")
            seqs.append(vocab.encode(key))
        return seqs

    def decision_scores(self, X):
        """Bengali probability for each word."""
        check_is_fitted(self, "network_")
        words = [str(w) for w in X]
        if not words:
            return np.zeros(0)
        return self.network_.predict_proba(self._encode(words))

    def predict_proba(self, X):
        p = self.decision_scores(X)
        return np.column_stack([1.0 - p, p])

    def predict(self, X):
        p = self.decision_scores(X)
        return np.array([LangTag.Bn if s >= self.threshold else LangTag.En for s in p],
                        dtype=object)

    def score_word(self, word):
        return float(self.decision_scores([word])[0])

    def save(self, path, seed=None):
        check_is_fitted(self, "network_")
        cfg = self._train_config().to_dict()
        save_model(path, self.network_, "tagger", train_config=cfg,
                   seed=self.seed if seed is None else seed,
                   extra={"threshold": self.threshold})

    @classmethod
    def load(cls, path):
        net, doc = load_model(path, expected_kind="tagger")
        est = cls.from_network(net, threshold=doc["extra"].get("threshold", 0.5))
        cfg = doc.get("train_config") or {}
        for key in ("epochs", "batch_size", "learning_rate", "seed"):
            if key in cfg:
                setattr(est, key, cfg[key])
        return est


class GoldTagger:
    """Tagger backed by a fixed word -> tag table.

    Stands in for the trained model when gold tags are known, e.g. when
    isolating downstream stages. Unknown words get ``default``.
    """

    def __init__(self, table, default=LangTag.En, threshold=0.5):
        self.table = {normalize_word(w): LangTag.parse(t) for w, t in dict(table).items()}
        self.default = LangTag.parse(default)
        self.threshold = threshold

    @classmethod
    def from_sequence(cls, words, tags, default=LangTag.En):
        table = {}
        for w, t in zip(words, tags):
            key = normalize_word(w)
            t = LangTag.parse(t)
            if table.get(key, t) is not t:
                raise DataError(f"gold tags disagree for {w!r}")
            table[key] = t
        return cls(table, default)

    def score_word(self, word):
        tag = self.table.get(normalize_word(word), self.default)
        return 1.0 if tag is LangTag.Bn else 0.0


def train_tagger(words, spec=None, **params):
    """Fit a :class:`LanguageTagger` on ``(word, tag)`` pairs."""
    spec = spec or TaggerTrainSpec()
    if not words:
        raise DataError("no training words")
    est = LanguageTagger(epochs=spec.epochs, batch_size=spec.batch_size,
                         learning_rate=spec.learning_rate, seed=spec.seed, **params)
    return est.fit([w for w, _ in words], [t for _, t in words])


def tag_word(model, word):
    if not isinstance(word, Token):
        word = Token.of(str(word))
    if word.kind is not TokenKind.Word:
        raise KindError(f"cannot language-tag punctuation {word.surface!r}")
    score = min(1.0, max(0.0, float(model.score_word(word.surface))))
    tag = LangTag.Bn if score >= model.threshold else LangTag.En
    return TaggedToken(word, tag, score)


def tag_sentence(model, tokens):
    """Tag words with ``model``; punctuation copies the nearest preceding word's tag.

    Leading punctuation takes the tag of the first word instead.
    """
    if not tokens:
        raise EmptyInput("cannot tag an empty sentence")
    tokens = [t if isinstance(t, Token) else Token.of(str(t)) for t in tokens]
    words = [t for t in tokens if t.is_word]
    if not words:
        raise DataError("sentence has no words to tag")
    if hasattr(model, "decision_scores"):
        scores = iter(model.decision_scores([w.surface for w in words]))
        word_tags = [
            TaggedToken(w, LangTag.Bn if s >= model.threshold else LangTag.En, float(s))
            for w, s in zip(words, scores)
        ]
    else:
        word_tags = [tag_word(model, w) for w in words]
    tagged = []
    it = iter(word_tags)
    prev = None
    pending = []
    for tok in tokens:
        if tok.is_word:
            prev = next(it)
            tagged.extend(TaggedToken(p, prev.tag, prev.score) for p in pending)
            pending = []
            tagged.append(prev)
        elif prev is None:
            pending.append(tok)
        else:
            tagged.append(TaggedToken(tok, prev.tag, prev.score))
    return tagged


def segment(tagged):
    """Group tagged tokens into maximal runs sharing a language tag."""
    if not tagged:
        raise EmptyInput("cannot segment an empty sentence")
    segments = []
    run = [tagged[0]]
    for tok in tagged[1:]:
        if tok.tag is run[-1].tag:
            run.append(tok)
        else:
            segments.append(Segment(run, run[0].tag))
            run = [tok]
    segments.append(Segment(run, run[0].tag))
    return segments
