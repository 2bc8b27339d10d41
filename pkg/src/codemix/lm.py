"""Add-k smoothed trigram/bigram language model over tokens."""

import json
import math
from collections import Counter
from pathlib import Path

from .exceptions import DataError, FormatError, IoError

BOS = "<s>"
EOS = "</s>"
FORMAT_VERSION = 1


class NgramLM:
    """Counts of 1-, 2- and 3-grams over sentences padded ``<s> <s> ... </s>``.

    ``vocab_size`` counts distinct content tokens plus the two boundary
    symbols. Context counts are marginals of the next order up, so
    ``count(context) == sum_w count(context + (w,))``.
    """

    def __init__(self, counts, k=1.0):
        if k < 0:
            raise ValueError("smoothing constant must be non-negative")
        self.k = float(k)
        self.counts = {n: Counter(counts.get(n, {})) for n in (1, 2, 3)}
        self.context_counts = {n: Counter() for n in (1, 2, 3)}
        for n in (1, 2, 3):
            for gram, c in self.counts[n].items():
                self.context_counts[n][gram[:-1]] += c
        vocab = {g[0] for g in self.counts[1]} | {BOS, EOS}
        self.vocab = frozenset(vocab)
        self.vocab_size = len(vocab)

    def count(self, gram):
        gram = tuple(gram)
        if not gram:
            return sum(self.counts[1].values())
        return self.counts[len(gram)][gram]

    def logprob(self, context, token):
        """Natural-log add-k probability of ``token`` after ``context`` (0-2 tokens)."""
        context = tuple(context)
        if len(context) > 2:
            raise ValueError("context may hold at most two tokens")
        n = len(context) + 1
        num = self.counts[n][context + (token,)] + self.k
        den = self.context_counts[n][context] + self.k * self.vocab_size
        return math.log(num / den)

    def to_dict(self):
        return {
            "format_version": FORMAT_VERSION,
            "k": self.k,
            "V": self.vocab_size,
            "counts": {
                str(n): sorted([list(g), c] for g, c in self.counts[n].items())
                for n in (1, 2, 3)
            },
        }

    @classmethod
    def from_dict(cls, doc):
        if doc.get("format_version") != FORMAT_VERSION:
            raise FormatError(f"unsupported LM format_version {doc.get('format_version')!r}")
        counts = {int(n): {tuple(g): c for g, c in rows} for n, rows in doc["counts"].items()}
        lm = cls(counts, k=doc["k"])
        if lm.vocab_size != doc["V"]:
            raise FormatError(f"LM vocabulary size {lm.vocab_size} does not match V={doc['V']}")
        return lm

    def save(self, path):
        try:
            Path(path).write_text(json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)
                                  + "\n", encoding="utf-8")
        except OSError as exc:
            raise IoError(f"cannot write {path}: {exc}") from exc

    @classmethod
    def load(cls, path):
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise IoError(f"cannot read {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path} is not an LM container: {exc}") from exc
        return cls.from_dict(doc)


def build_lm(sentences, k=1.0):
    if not sentences:
        raise DataError("cannot build a language model from an empty corpus")
    counts = {1: Counter(), 2: Counter(), 3: Counter()}
    for sent in sentences:
        padded = [BOS, BOS] + [str(t) for t in sent] + [EOS]
        for n in (1, 2, 3):
            for i in range(len(padded) - n + 1):
                counts[n][tuple(padded[i:i + n])] += 1
    return NgramLM(counts, k=k)


def ngram_logprob(lm, context, token):
    return lm.logprob(context, token)


def sentence_score(lm, tokens, order=3):
    """Length-normalized log probability: mean over the scored n-grams.

    The sentence is padded with ``order - 1`` start symbols and one end
    symbol; every position after the start padding is scored.
    """
    if order not in (2, 3):
        raise ValueError("order must be 2 or 3")
    if not tokens:
        raise DataError("cannot score an empty sentence")
    padded = [BOS] * (order - 1) + [str(t) for t in tokens] + [EOS]
    scores = [
        lm.logprob(padded[i - order + 1:i], padded[i])
        for i in range(order - 1, len(padded))
    ]
    return sum(scores) / len(scores)
