"""Language-model token reordering.

A trigram pass slides a width-3 window over the sentence and, at each
position, tries every reordering of the window. The best candidate (ties go
to the lexicographically smallest) is kept only if it strictly raises the
sentence's trigram score. When the trigram pass changes nothing, a bigram
pass repeats this with width-2 windows and bigram scores.
"""

from dataclasses import dataclass
from itertools import permutations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import DataError, EmptyInput
from .lm import NgramLM, build_lm, sentence_score
from .text import Token, is_punct


@dataclass
class ReorderConfig:
    max_passes: int = 1
    enable_bigram_fallback: bool = True

    def __post_init__(self):
        if self.max_passes < 1:
            raise ValueError("max_passes must be >= 1")


@dataclass(frozen=True)
class Substitution:
    order: int
    position: int
    before: tuple
    after: tuple
    score_before: float
    score_after: float


def _surface(tok):
    return tok.surface if isinstance(tok, Token) else str(tok)


def confusion_set(window):
    """All distinct reorderings of ``window`` except itself, sorted.

    Windows containing punctuation get an empty set.
    """
    window = tuple(_surface(t) for t in window)
    if len(window) not in (2, 3):
        raise ValueError("confusion sets are built for windows of 2 or 3 tokens")
    if any(is_punct(t) for t in window):
        return []
    return sorted(set(permutations(window)) - {window})


def _run_pass(lm, tokens, order, guard_order, log):
    applied = 0
    score = sentence_score(lm, tokens, order)
    guard = sentence_score(lm, tokens, guard_order) if guard_order else None
    for i in range(len(tokens) - order + 1):
        window = tuple(tokens[i:i + order])
        best = None
        for cand in confusion_set(window):
            trial = tokens[:i] + list(cand) + tokens[i + order:]
            s = sentence_score(lm, trial, order)
            if best is None or s > best[0]:
                best = (s, trial, cand)
        if best is None or not best[0] > score:
            continue
        if guard_order:
            g = sentence_score(lm, best[1], guard_order)
            if g < guard:
                continue
            guard = g
        log.append(Substitution(order, i, window, best[2], score, best[0]))
        tokens = best[1]
        score = best[0]
        applied += 1
    return tokens, applied


def reorder_with_log(lm, tokens, config=None):
    """Reorder ``tokens`` and return ``(tokens, substitutions)``."""
    config = config or ReorderConfig()
    if not tokens:
        raise EmptyInput("cannot reorder an empty sentence")
    tokens = [_surface(t) for t in tokens]
    log = []
    trigram_changes = 0
    for _ in range(config.max_passes):
        tokens, n = _run_pass(lm, tokens, 3, None, log)
        trigram_changes += n
        if not n:
            break
    if trigram_changes == 0 and config.enable_bigram_fallback:
        # bigram moves may not lower the trigram score
        for _ in range(config.max_passes):
            tokens, n = _run_pass(lm, tokens, 2, 3, log)
            if not n:
                break
    return tokens, log


def reorder(lm, tokens, config=None):
    return reorder_with_log(lm, tokens, config)[0]


class TokenReorderer(BaseEstimator, TransformerMixin):
    """Fits an n-gram LM on token lists and reorders token lists with it."""

    def __init__(self, k=1.0, max_passes=1, enable_bigram_fallback=True):
        self.k = k
        self.max_passes = max_passes
        self.enable_bigram_fallback = enable_bigram_fallback

    def fit(self, X, y=None):
        X = [list(s) for s in X]
        if not X:
            raise DataError("no sentences to fit on")
        self.lm_ = build_lm(X, k=self.k)
        return self

    @classmethod
    def from_lm(cls, lm, **params):
        if not isinstance(lm, NgramLM):
            raise TypeError("expected an NgramLM")
        est = cls(k=lm.k, **params)
        est.lm_ = lm
        return est

    def _config(self):
        return ReorderConfig(self.max_passes, self.enable_bigram_fallback)

    def transform(self, X):
        check_is_fitted(self, "lm_")
        return [reorder(self.lm_, list(s), self._config()) for s in X]

    def score(self, X, y=None):
        """Mean trigram sentence score; higher is more fluent."""
        check_is_fitted(self, "lm_")
        X = list(X)
        return sum(sentence_score(self.lm_, list(s), 3) for s in X) / len(X)
