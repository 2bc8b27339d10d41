"""Roman-script Bengali to native script: two-lexicon lookup with a
character seq2seq fallback for out-of-vocabulary words."""

import logging
from dataclasses import dataclass

from sklearn.base import BaseEstimator, TransformerMixin

from .charseq import CharSeq2Seq
from .exceptions import DataError, EmptyInput, RoutingError
from .text import LangTag, normalize, read_tsv

log = logging.getLogger(__name__)

LEXICON = "lexicon"
MODEL = "model"
ECHO = "echo"
PUNCT = "punct"
TRANSLATION = "translation"


def lexicon_key(word):
    return normalize(str(word)).strip().lower()


class ParallelLexicon:
    """Two-column word map with case-insensitive, NFC-normalized keys.

    Keys that collide after normalization keep their first value.
    """

    def __init__(self, entries, name="lexicon", direction=None):
        self.name = name
        self.direction = direction
        self.entries = {}
        items = entries.items() if hasattr(entries, "items") else entries
        for key, value in items:
            k = lexicon_key(key)
            v = normalize(str(value)).strip()
            if not k or not v:
                raise DataError(f"{name}: empty lexicon entry {key!r} -> {value!r}")
            if k in self.entries:
                if self.entries[k] != v:
                    log.warning("%s: key %r already maps to %r, ignoring %r",
                                name, k, self.entries[k], v)
                continue
            self.entries[k] = v

    @classmethod
    def from_tsv(cls, path, name=None, direction=None):
        rows = read_tsv(path)
        return cls([(k, v) for _, (k, v) in rows], name=name or str(path), direction=direction)

    def get(self, word):
        return self.entries.get(lexicon_key(word))

    def __contains__(self, word):
        return lexicon_key(word) in self.entries

    def __len__(self):
        return len(self.entries)

    def keys(self):
        return list(self.entries)

    def values(self):
        return list(self.entries.values())

    def __repr__(self):
        return f"ParallelLexicon({self.name!r}, {len(self)} entries)"


def lexicon_lookup(word, pl, bn_trans):
    """Roman word -> ITRANS via ``pl``, then ITRANS -> native via ``bn_trans``."""
    itrans = pl.get(word)
    if itrans is None:
        return None
    native = bn_trans.get(itrans)
    if native is None:
        log.info("broken lexicon chain: %r -> %r has no %s entry", word, itrans, bn_trans.name)
    return native


class Transliterator(CharSeq2Seq):
    """Character seq2seq from Roman/ITRANS spelling to native script."""

    model_kind = "translit"
    decode_slack = (3, 5)


def train_translit(bn_trans, **params):
    """Train the fallback model on ``bn_trans`` (keys are sources, values targets)."""
    if not len(bn_trans):
        raise DataError("cannot train on an empty lexicon")
    return Transliterator(**params).fit(bn_trans.keys(), bn_trans.values())


@dataclass(frozen=True)
class WordOutput:
    """One output word and where it came from."""

    source: str
    text: str
    provenance: str
    flagged: bool = False


def back_transliterate(word, pl, bn_trans, model=None):
    """Native-script form of ``word`` with its provenance.

    Lexicon hits never consult the model. Misses are decoded by ``model``;
    an empty decode (or no model) echoes the input and flags it.
    """
    surface = str(word)
    if not surface.strip():
        raise EmptyInput("cannot transliterate an empty word")
    native = lexicon_lookup(surface, pl, bn_trans)
    if native is not None:
        return WordOutput(surface, native, LEXICON)
    decoded = model.decode(surface) if model is not None else ""
    if decoded:
        return WordOutput(surface, decoded, MODEL)
    log.info("transliteration of %r came back empty, echoing input", surface)
    return WordOutput(surface, surface, ECHO, flagged=True)


def transliterate_segment(segment, pl, bn_trans, model=None):
    if segment.tag is not LangTag.Bn:
        raise RoutingError(f"only Bengali segments are transliterated, got {segment.tag}")
    out = []
    for tagged in segment.tokens:
        tok = tagged.token
        if tok.is_word:
            out.append(back_transliterate(tok.surface, pl, bn_trans, model))
        else:
            out.append(WordOutput(tok.surface, tok.surface, PUNCT))
    return out


class BackTransliterator(BaseEstimator, TransformerMixin):
    """Word-list transformer wrapping the lookup chain and fallback model.

    ``fit`` trains the fallback :class:`Transliterator` on ``bn_trans``
    unless a fitted ``model`` was supplied.
    """

    def __init__(self, pl=None, bn_trans=None, model=None, model_params=None):
        self.pl = pl
        self.bn_trans = bn_trans
        self.model = model
        self.model_params = model_params

    def fit(self, X=None, y=None):
        if self.pl is None or self.bn_trans is None:
            raise DataError("BackTransliterator needs both lexicons")
        if self.model is not None:
            self.model_ = self.model
        else:
            self.model_ = train_translit(self.bn_trans, **(self.model_params or {}))
        return self

    def transliterate(self, word):
        model = getattr(self, "model_", self.model)
        return back_transliterate(word, self.pl, self.bn_trans, model)

    def transform(self, X):
        return [self.transliterate(w).text for w in X]
