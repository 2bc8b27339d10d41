"""End-to-end code-mixed -> monolingual translation.

tokenize -> tag -> segment -> route (Bn: transliterate, En: translate)
-> join in segment order -> optional LM reordering.
"""

import json
import logging
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import ConfigError, EmptyInput, IoError, StageError
from .lm import NgramLM
from .mt import Translator, translate_segment
from .reorder import ReorderConfig, reorder_with_log
from .tagger import LanguageTagger, segment, tag_sentence
from .text import LangTag, Token, detokenize, tokenize
from .translit import (
    ECHO, LEXICON, MODEL, PUNCT, TRANSLATION, ParallelLexicon, Transliterator, WordOutput,
    transliterate_segment,
)

log = logging.getLogger(__name__)

CMT1 = "cmt1"
CMT2 = "cmt2"


@dataclass
class PipelineConfig:
    tagger: str = None
    translit_model: str = None
    mt_model: str = None
    pl: str = None
    bn_trans: str = None
    lm: str = None
    mode: str = CMT1
    trace: bool = False

    PATH_FIELDS = ("tagger", "translit_model", "mt_model", "pl", "bn_trans", "lm")

    def validate(self, required=PATH_FIELDS[:5]):
        if self.mode not in (CMT1, CMT2):
            raise ConfigError(f"mode must be {CMT1!r} or {CMT2!r}, got {self.mode!r}")
        needed = list(required) + (["lm"] if self.mode == CMT2 else [])
        for name in needed:
            value = getattr(self, name)
            if not value:
                raise ConfigError(f"missing required path {name!r}"
                                  + (" (cmt2 needs a language model)" if name == "lm" else ""))
        for name in self.PATH_FIELDS:
            value = getattr(self, name)
            if value and not Path(value).exists():
                raise ConfigError(f"{name}: file not found: {value}")
        return self

    @classmethod
    def from_file(cls, path):
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**doc)

    def merged(self, **overrides):
        values = asdict(self)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return PipelineConfig(**values)


@dataclass
class SegmentTrace:
    index: int
    tag: str
    tokens: list
    route: str
    outputs: list

    def to_dict(self):
        return {
            "index": self.index,
            "tag": self.tag,
            "tokens": self.tokens,
            "route": self.route,
            "outputs": [asdict(o) for o in self.outputs],
        }


@dataclass
class TraceRecord:
    input: str
    tagged: list = field(default_factory=list)
    segments: list = field(default_factory=list)
    joined: str = None
    reordered: str = None
    substitutions: int = 0
    timings: dict = field(default_factory=dict)
    error: str = None

    @property
    def provenance_counts(self):
        counts = {}
        for seg in self.segments:
            for o in seg.outputs:
                counts[o.provenance] = counts.get(o.provenance, 0) + 1
        return counts

    def to_dict(self):
        return {
            "input": self.input,
            "tagged": self.tagged,
            "segments": [s.to_dict() for s in self.segments],
            "joined": self.joined,
            "reordered": self.reordered,
            "substitutions": self.substitutions,
            "timings": self.timings,
            "error": self.error,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), ensure_ascii=False)

    def pretty(self):
        lines = [f"input:     {self.input}"]
        lines.append("tagged:    " + " ".join(f"{t['token']}/{t['tag']}" for t in self.tagged))
        lines.append(f"segments:  {len(self.segments)}")
        for seg in self.segments:
            out = " ".join(f"{o.text}[{o.provenance}]" for o in seg.outputs)
            lines.append(f"  {seg.index + 1}. ({' '.join(seg.tokens)}){seg.tag} "
                         f"-> {seg.route}: {out}")
        lines.append(f"joined:    {self.joined}")
        if self.reordered is not None:
            lines.append(f"reordered: {self.reordered} ({self.substitutions} substitutions)")
        lines.append("timings:   " + ", ".join(f"{k}={v * 1000:.1f}ms"
                                              for k, v in self.timings.items()))
        return "\n".join(lines)


class _Stage:
    def __init__(self, trace, name):
        self.trace = trace
        self.name = name

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        self.trace.timings[self.name] = time.perf_counter() - self.start
        if exc is not None and not isinstance(exc, StageError):
            raise StageError(self.name, exc) from exc
        return False


def _translate_words(mt_model, words):
    """Translate a run of English words; empty output echoes the run."""
    text = " ".join(words)
    out = translate_segment(mt_model, text)
    out_tokens = [t.surface for t in tokenize(out)] if out.strip() else []
    if not out_tokens:
        log.info("translation of %r came back empty, echoing input", text)
        return [WordOutput(w, w, ECHO, flagged=True) for w in words]
    return [WordOutput(text, t, TRANSLATION) for t in out_tokens]


def translate_english_segment(mt_model, seg):
    outputs = []
    run = []
    for tagged in seg.tokens:
        tok = tagged.token
        if tok.is_word:
            run.append(tok.surface)
            continue
        if run:
            outputs.extend(_translate_words(mt_model, run))
            run = []
        outputs.append(WordOutput(tok.surface, tok.surface, PUNCT))
    if run:
        outputs.extend(_translate_words(mt_model, run))
    return outputs


class CodeMixTranslator(BaseEstimator, TransformerMixin):
    """Sentence-level transformer running the whole pipeline.

    Parameters
    ----------
    tagger : object with ``score_word`` and ``threshold``
    pl, bn_trans : ParallelLexicon
    translit_model : Transliterator or None
    mt_model : Translator
    lm : NgramLM or None
        Required when ``mode == "cmt2"``.
    mode : {"cmt1", "cmt2"}
    """

    def __init__(self, tagger=None, pl=None, bn_trans=None, translit_model=None,
                 mt_model=None, lm=None, mode=CMT1, reorder_config=None):
        self.tagger = tagger
        self.pl = pl
        self.bn_trans = bn_trans
        self.translit_model = translit_model
        self.mt_model = mt_model
        self.lm = lm
        self.mode = mode
        self.reorder_config = reorder_config

    @classmethod
    def from_config(cls, config):
        config.validate()
        return cls(
            tagger=LanguageTagger.load(config.tagger),
            pl=ParallelLexicon.from_tsv(config.pl, name="PL", direction="roman->itrans"),
            bn_trans=ParallelLexicon.from_tsv(config.bn_trans, name="BN_TRANS",
                                              direction="itrans->native"),
            translit_model=Transliterator.load(config.translit_model),
            mt_model=Translator.load(config.mt_model),
            lm=NgramLM.load(config.lm) if config.lm else None,
            mode=config.mode,
        )

    def fit(self, X=None, y=None):
        # all components arrive trained
        if self.mode not in (CMT1, CMT2):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.mode == CMT2 and self.lm is None:
            raise ConfigError("cmt2 needs a language model")
        return self

    def translate(self, sentence, mode=None):
        """Translate one sentence; returns ``(output, TraceRecord)``."""
        mode = mode or self.mode
        if mode == CMT2 and self.lm is None:
            raise ConfigError("cmt2 needs a language model")
        if sentence is None or not str(sentence).strip():
            raise EmptyInput("cannot translate an empty sentence")
        trace = TraceRecord(input=sentence)
        with _Stage(trace, "tokenize"):
            tokens = tokenize(sentence)
        with _Stage(trace, "tag"):
            tagged = tag_sentence(self.tagger, tokens)
            trace.tagged = [{"token": t.surface, "tag": str(t.tag), "score": t.score}
                            for t in tagged]
        with _Stage(trace, "segment"):
            segments = segment(tagged)
        for k, seg in enumerate(segments):
            if seg.tag is LangTag.Bn:
                with _Stage(trace, f"transliterate[{k}]"):
                    outputs = transliterate_segment(seg, self.pl, self.bn_trans,
                                                    self.translit_model)
                route = "transliterate"
            else:
                with _Stage(trace, f"translate[{k}]"):
                    outputs = translate_english_segment(self.mt_model, seg)
                route = "translate"
            trace.segments.append(
                SegmentTrace(k, str(seg.tag), seg.surfaces, route, outputs))
        with _Stage(trace, "join"):
            joined = [Token.of(o.text) for s in trace.segments for o in s.outputs]
            trace.joined = detokenize(joined)
        output = trace.joined
        if mode == CMT2:
            with _Stage(trace, "reorder"):
                config = self.reorder_config or ReorderConfig()
                surfaces, subs = reorder_with_log(self.lm, [t.surface for t in joined], config)
                trace.reordered = detokenize([Token.of(s) for s in surfaces])
                trace.substitutions = len(subs)
            output = trace.reordered
        return output, trace

    def transform(self, X):
        return [self.translate(s)[0] for s in X]


def translate_code_mixed(pipeline, sentence):
    return pipeline.translate(sentence)


def run_batch(pipeline, input_path, output_path, trace_path=None, mode=None):
    """Translate a line-per-sentence file with per-line error isolation."""
    try:
        lines = Path(input_path).read_text(encoding="utf-8").split("\n")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoError(f"cannot read {input_path}: {exc}") from exc
    if lines and lines[-1] == "":
        lines.pop()
    outputs, traces = [], []
    summary = {
        "lines": len(lines), "errors": 0,
        "segments": {str(LangTag.Bn): 0, str(LangTag.En): 0},
        "provenance": {LEXICON: 0, MODEL: 0, ECHO: 0, TRANSLATION: 0, PUNCT: 0},
    }
    for lineno, line in enumerate(lines, start=1):
        try:
            out, trace = pipeline.translate(line, mode=mode)
        except Exception as exc:  # isolate bad lines
            log.error("line %d: %s", lineno, exc)
            summary["errors"] += 1
            outputs.append("")
            traces.append(TraceRecord(input=line, error=str(exc)))
            continue
        outputs.append(out)
        traces.append(trace)
        for seg in trace.segments:
            summary["segments"][seg.tag] += 1
        for name, n in trace.provenance_counts.items():
            summary["provenance"][name] = summary["provenance"].get(name, 0) + n
    prov = summary["provenance"]
    translit_words = prov[LEXICON] + prov[MODEL] + sum(
        1 for t in traces for s in t.segments if s.route == "transliterate"
        for o in s.outputs if o.provenance == ECHO)
    summary["lexicon_hit_rate"] = prov[LEXICON] / translit_words if translit_words else 0.0
    summary["echo_count"] = prov[ECHO]
    try:
        Path(output_path).write_text("".join(o + "\n" for o in outputs), encoding="utf-8")
        if trace_path:
            Path(trace_path).write_text("".join(t.to_json() + "\n" for t in traces),
                                        encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write batch output: {exc}") from exc
    return summary
