"""Tokens, tagged segments, character vocabularies and TSV ingestion."""

import enum
import logging
import unicodedata
import warnings
from dataclasses import dataclass
from pathlib import Path

from .exceptions import DataError, EmptyInput, FormatError, IoError

log = logging.getLogger(__name__)

__all__ = [
    "LangTag",
    "TokenKind",
    "Token",
    "TaggedToken",
    "Segment",
    "SentencePair",
    "CharVocab",
    "normalize",
    "is_punct",
    "tokenize",
    "detokenize",
    "build_char_vocab",
    "read_tsv",
    "load_parallel_corpus",
    "load_tagged_words",
]


class LangTag(str, enum.Enum):
    Bn = "Bn"
    En = "En"

    @classmethod
    def parse(cls, value):
        """Accept a LangTag or a case-insensitive ``bn``/``en`` string."""
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for tag in cls:
            if tag.value.lower() == key:
                return tag
        raise ValueError(f"unknown language tag {value!r}")

    def __str__(self):
        return self.value


class TokenKind(enum.Enum):
    Word = "word"
    Punct = "punct"


def normalize(text):
    return unicodedata.normalize("NFC", text)


def _is_word_char(ch):
    # letters, numbers and combining marks (Bengali vowel signs are Mc/Mn)
    return unicodedata.category(ch)[0] in "LNM"


def is_punct(surface):
    """True when ``surface`` is non-empty and has no letter, digit or mark."""
    return bool(surface) and not any(_is_word_char(ch) for ch in surface)


@dataclass(frozen=True)
class Token:
    surface: str
    kind: TokenKind = TokenKind.Word

    def __post_init__(self):
        if not self.surface or any(ch.isspace() for ch in self.surface):
            raise ValueError(f"invalid token surface {self.surface!r}")
        object.__setattr__(self, "surface", normalize(self.surface))
        if self.kind is TokenKind.Punct and not is_punct(self.surface):
            raise ValueError(f"punct token with word characters: {self.surface!r}")

    @classmethod
    def of(cls, surface):
        """Build a token, inferring its kind from the characters."""
        return cls(surface, TokenKind.Punct if is_punct(surface) else TokenKind.Word)

    @property
    def is_word(self):
        return self.kind is TokenKind.Word

    def __str__(self):
        return self.surface


@dataclass(frozen=True)
class TaggedToken:
    token: Token
    tag: LangTag
    score: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score must lie in [0, 1], got {self.score}")

    @property
    def surface(self):
        return self.token.surface


@dataclass(frozen=True)
class Segment:
    tokens: tuple
    tag: LangTag

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if not self.tokens:
            raise EmptyInput("a segment needs at least one token")
        if any(t.tag is not self.tag for t in self.tokens):
            raise ValueError("all tokens of a segment must share its tag")

    @property
    def surfaces(self):
        return [t.surface for t in self.tokens]

    def __len__(self):
        return len(self.tokens)

    def __str__(self):
        return f"({detokenize([t.token for t in self.tokens])}){self.tag.name}"


@dataclass(frozen=True)
class SentencePair:
    source: str
    target: str

    def __post_init__(self):
        if not self.source.strip() or not self.target.strip():
            raise DataError("both sides of a sentence pair must be non-empty")
        object.__setattr__(self, "source", normalize(self.source.strip()))
        object.__setattr__(self, "target", normalize(self.target.strip()))


def tokenize(text):
    """Split ``text`` on whitespace and detach edge punctuation.

    Leading and trailing punctuation runs of each whitespace chunk become
    separate ``Punct`` tokens; interior apostrophes and hyphens stay inside
    the word.

    >>> [t.surface for t in tokenize("daklo amaye.")]
    ['daklo', 'amaye', '.']
    """
    if text is None or not text.strip():
        raise EmptyInput("cannot tokenize empty text")
    tokens = []
    for chunk in normalize(text).split():
        start, end = 0, len(chunk)
        while start < end and not _is_word_char(chunk[start]):
            start += 1
        if start == end:
            tokens.append(Token(chunk, TokenKind.Punct))
            continue
        while not _is_word_char(chunk[end - 1]):
            end -= 1
        if start:
            tokens.append(Token(chunk[:start], TokenKind.Punct))
        tokens.append(Token(chunk[start:end], TokenKind.Word))
        if end < len(chunk):
            tokens.append(Token(chunk[end:], TokenKind.Punct))
    return tokens


def detokenize(tokens):
    """Join tokens with single spaces, gluing punctuation to its left neighbour."""
    if not tokens:
        raise EmptyInput("cannot detokenize an empty token list")
    parts = []
    for tok in tokens:
        if not isinstance(tok, Token):
            tok = Token.of(str(tok))
        if parts and tok.kind is TokenKind.Punct:
            parts[-1] += tok.surface
        else:
            parts.append(tok.surface)
    return " ".join(parts)


class CharVocab:
    """Bijective map between characters (plus four specials) and dense indices.

    Specials occupy indices 0..3 in the order PAD, SOS, EOS, UNK; characters
    follow sorted by code point.
    """

    PAD, SOS, EOS, UNK = 0, 1, 2, 3
    SPECIALS = ("<pad>", "<s>", "</s>", "<unk>")

    def __init__(self, chars):
        chars = sorted(set(chars))
        for ch in chars:
            if len(ch) != 1:
                raise ValueError(f"vocabulary entries must be single characters: {ch!r}")
        self.chars = tuple(chars)
        self._symbols = self.SPECIALS + self.chars
        self._index = {s: i for i, s in enumerate(self._symbols)}

    def __len__(self):
        return len(self._symbols)

    def __contains__(self, ch):
        return ch in self._index and ch not in self.SPECIALS

    def __eq__(self, other):
        return isinstance(other, CharVocab) and self.chars == other.chars

    def __repr__(self):
        return f"CharVocab(size={len(self)})"

    @property
    def specials(self):
        return {"PAD": self.PAD, "SOS": self.SOS, "EOS": self.EOS, "UNK": self.UNK}

    def index_of(self, symbol):
        return self._index.get(symbol, self.UNK)

    def char_of(self, index):
        return self._symbols[index]

    def encode(self, text):
        return [self.index_of(ch) for ch in text]

    def decode(self, indices):
        """Map indices back to text, dropping the special symbols."""
        return "".join(self._symbols[i] for i in indices if i >= len(self.SPECIALS))

    def to_list(self):
        return list(self.chars)

    @classmethod
    def from_list(cls, chars):
        return cls(chars)


def build_char_vocab(corpus):
    if not corpus:
        raise EmptyInput("cannot build a vocabulary from an empty corpus")
    chars = set()
    for line in corpus:
        chars.update(normalize(line))
    return CharVocab(chars)


def read_tsv(path, ncols=2):
    """Yield ``(line_number, fields)`` for each non-blank line of a TSV file."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    rows = []
    for lineno, line in enumerate(raw.split("\n"), start=1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != ncols:
            raise FormatError(
                f"expected {ncols} tab-separated fields, got {len(fields)}",
                line=lineno, path=path,
            )
        rows.append((lineno, [normalize(f.strip()) for f in fields]))
    if not rows:
        warnings.warn(f"{path} contains no records", stacklevel=3)
    return rows


def load_parallel_corpus(path):
    pairs = []
    for lineno, (src, tgt) in read_tsv(path):
        if not src or not tgt:
            raise FormatError("empty source or target", line=lineno, path=path)
        pairs.append(SentencePair(src, tgt))
    return pairs


def load_tagged_words(path):
    words = []
    for lineno, (word, tag) in read_tsv(path):
        if not word:
            raise FormatError("empty word", line=lineno, path=path)
        try:
            words.append((word, LangTag.parse(tag)))
        except ValueError as exc:
            raise FormatError(str(exc), line=lineno, path=path) from None
    return words
