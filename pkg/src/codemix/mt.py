"""Character-level English -> Bengali translation of English segments."""

from .charseq import CharSeq2Seq
from .exceptions import EmptyInput
from .text import SentencePair


class Translator(CharSeq2Seq):
    """Attention encoder-decoder over one-hot characters.

    Sources are lowercased before encoding; pairs with either side longer
    than ``max_chars`` are skipped at fit time (``n_skipped_``).
    """

    model_kind = "mt"
    decode_slack = (3, 10)

    def __init__(self, hidden_dim=128, n_layers=1, attention=True, epochs=100, batch_size=64,
                 optimizer="rmsprop", learning_rate=0.001, clip_norm=None, lowercase=True,
                 max_chars=200, seed=0):
        super().__init__(hidden_dim=hidden_dim, n_layers=n_layers, attention=attention,
                         epochs=epochs, batch_size=batch_size, optimizer=optimizer,
                         learning_rate=learning_rate, clip_norm=clip_norm, lowercase=lowercase,
                         max_chars=max_chars, seed=seed)

    def transform(self, X):
        return self.predict(X)


def train_mt(pairs, **params):
    """Fit a :class:`Translator` on :class:`SentencePair` items or ``(src, tgt)`` tuples."""
    pairs = [p if isinstance(p, SentencePair) else SentencePair(*p) for p in pairs]
    return Translator(**params).fit([p.source for p in pairs], [p.target for p in pairs])


def translate_segment(model, text, attention=None):
    """Greedy translation of ``text``; may return an empty string."""
    if not text or not str(text).strip():
        raise EmptyInput("cannot translate an empty segment")
    return model.decode(text, attention=attention)
