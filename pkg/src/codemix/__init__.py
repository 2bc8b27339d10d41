"""Code-mixed Bengali-English (Roman script) to Bengali translation toolkit.

Stages: word language tagging and segmentation, back-transliteration of
Bengali segments, character-level translation of English segments, and
n-gram language-model token reordering, plus BLEU/TER/Fleiss' kappa.
"""

from .exceptions import (
    CodeMixError, ConfigError, DataError, DegenerateError, EmptyInput, FormatError, IoError,
    KindError, NumericalError, RoutingError, ShapeError, StageError, VocabError,
)
from .lm import NgramLM, build_lm, ngram_logprob, sentence_score
from .metrics import (
    EvalReport, JudgmentRecord, KappaTable, bleu, corpus_bleu, corpus_ter, evaluate_corpus,
    fleiss_kappa, ter,
)
from .mt import Translator, train_mt, translate_segment
from .pipeline import CodeMixTranslator, PipelineConfig, TraceRecord, run_batch, translate_code_mixed
from .reorder import ReorderConfig, TokenReorderer, confusion_set, reorder
from .tagger import GoldTagger, LanguageTagger, segment, tag_sentence, tag_word, train_tagger
from .text import (
    CharVocab, LangTag, Segment, SentencePair, TaggedToken, Token, TokenKind, build_char_vocab,
    detokenize, load_parallel_corpus, load_tagged_words, tokenize,
)
from .translit import (
    BackTransliterator, ParallelLexicon, Transliterator, back_transliterate, lexicon_lookup,
    train_translit, transliterate_segment,
)

__version__ = "0.1.0"
