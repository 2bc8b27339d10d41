"""Corpus BLEU, TER with block shifts, Fleiss' kappa and human-judgment records."""

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import DataError, DegenerateError, FormatError, IoError
from .text import read_tsv, tokenize


# -- BLEU ------------------------------------------------------------------

def _ngrams(tokens, n):
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


@dataclass
class BleuStats:
    score: float
    precisions: list
    matches: list
    totals: list
    brevity_penalty: float
    hyp_len: int
    ref_len: int

    @property
    def score100(self):
        return 100.0 * self.score


def corpus_bleu(hypotheses, references, max_n=4, smooth=True):
    """Corpus BLEU with one reference per hypothesis.

    Clipped n-gram matches and hypothesis n-gram totals are pooled over the
    corpus. With ``smooth``, an order with zero matches uses precision
    ``1 / (2 * total)`` (``total`` floored at 1); without it the score is 0.
    """
    if len(hypotheses) != len(references):
        raise DataError(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise DataError("BLEU needs at least one sentence pair")
    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp = [str(t) for t in hyp]
        ref = [str(t) for t in ref]
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            h, r = _ngrams(hyp, n), _ngrams(ref, n)
            matches[n - 1] += sum(min(c, r[g]) for g, c in h.items())
            totals[n - 1] += max(len(hyp) - n + 1, 0)
    precisions = []
    for m, t in zip(matches, totals):
        if m > 0:
            precisions.append(m / t)
        elif smooth:
            precisions.append(1.0 / (2.0 * max(t, 1)))
        else:
            precisions.append(0.0)
    if hyp_len == 0:
        bp = 0.0
    else:
        bp = min(1.0, math.exp(1.0 - ref_len / hyp_len))
    if min(precisions) == 0.0 or bp == 0.0:
        score = 0.0
    else:
        score = bp * math.exp(sum(math.log(p) for p in precisions) / max_n)
    return BleuStats(score, precisions, matches, totals, bp, hyp_len, ref_len)


def bleu(hypotheses, references, max_n=4, smooth=True):
    return corpus_bleu(hypotheses, references, max_n, smooth).score


# -- TER -------------------------------------------------------------------

def edit_distance(hyp, ref):
    """Token Levenshtein distance (unit insert/delete/substitute)."""
    prev = list(range(len(ref) + 1))
    for i, h in enumerate(hyp, start=1):
        cur = [i] + [0] * len(ref)
        for j, r in enumerate(ref, start=1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (h != r))
        prev = cur
    return prev[-1]


def _shift(tokens, start, length, dest):
    span = tokens[start:start + length]
    rest = tokens[:start] + tokens[start + length:]
    return rest[:dest] + span + rest[dest:]


def _best_shift(hyp, ref, current, max_span):
    best = None
    n = len(hyp)
    for length in range(1, min(max_span, n) + 1):
        for start in range(n - length + 1):
            span = hyp[start:start + length]
            if ref[start:start + length] == span:
                continue  # already aligned
            targets = [k for k in range(len(ref) - length + 1) if ref[k:k + length] == span]
            for dest in sorted(set(min(k, n - length) for k in targets)):
                if dest == start:
                    continue
                moved = _shift(hyp, start, length, dest)
                d = edit_distance(moved, ref)
                if best is None or d < best[0]:
                    best = (d, moved)
    if best is not None and best[0] + 1 < current:
        return best
    return None


def ter(hypothesis, reference, max_span=10, shifts=True):
    """Edits and edit rate turning ``hypothesis`` into ``reference``.

    Block shifts are searched greedily: a contiguous hypothesis span that
    also occurs in the reference may move to where it occurs there. The
    shift that leaves the smallest edit distance is taken as long as it
    lowers the total (shift counted as one edit); then search repeats.
    """
    hyp = [str(t) for t in hypothesis]
    ref = [str(t) for t in reference]
    if not ref:
        raise DataError("TER needs a non-empty reference")
    n_shifts = 0
    current = edit_distance(hyp, ref)
    while shifts and current > 0:
        found = _best_shift(hyp, ref, current, max_span)
        if found is None:
            break
        current, hyp = found
        n_shifts += 1
    edits = n_shifts + current
    return edits, edits / len(ref)


def corpus_ter(hypotheses, references, **kwargs):
    """Total edits over total reference tokens."""
    if len(hypotheses) != len(references):
        raise DataError(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    edits = ref_len = 0
    for h, r in zip(hypotheses, references):
        e, _ = ter(h, r, **kwargs)
        edits += e
        ref_len += len(r)
    return edits / ref_len


# -- Fleiss' kappa -----------------------------------------------------------

class KappaTable:
    """Items x categories matrix of how many raters chose each category."""

    def __init__(self, counts):
        counts = np.asarray(counts)
        if counts.ndim != 2 or counts.shape[0] < 1:
            raise DataError("kappa table must be a non-empty 2-D matrix")
        if not np.issubdtype(counts.dtype, np.integer):
            if not np.all(np.equal(np.mod(counts, 1), 0)):
                raise DataError("kappa table entries must be integers")
            counts = counts.astype(np.int64)
        if (counts < 0).any():
            raise DataError("kappa table entries must be non-negative")
        per_item = counts.sum(axis=1)
        if not (per_item == per_item[0]).all():
            raise DataError("every item needs the same number of ratings")
        if per_item[0] < 2:
            raise DataError("Fleiss' kappa needs at least two raters per item")
        self.counts = counts
        self.n_raters = int(per_item[0])

    @classmethod
    def from_ratings(cls, ratings, categories=None):
        """Build from per-item label lists, e.g. ``[["ok", "ok"], ["ok", "bad"]]``."""
        if categories is None:
            categories = sorted({lbl for item in ratings for lbl in item})
        index = {c: i for i, c in enumerate(categories)}
        counts = np.zeros((len(ratings), len(categories)), dtype=np.int64)
        for i, item in enumerate(ratings):
            for lbl in item:
                counts[i, index[lbl]] += 1
        return cls(counts)

    @property
    def shape(self):
        return self.counts.shape


def fleiss_kappa(table):
    if not isinstance(table, KappaTable):
        table = KappaTable(table)
    counts = table.counts.astype(float)
    n = table.n_raters
    n_items = counts.shape[0]
    p_item = ((counts * counts).sum(axis=1) - n) / (n * (n - 1))
    p_bar = p_item.mean()
    p_cat = counts.sum(axis=0) / (n_items * n)
    p_e = float((p_cat * p_cat).sum())
    if math.isclose(p_e, 1.0, rel_tol=0.0, abs_tol=1e-12):
        if math.isclose(p_bar, 1.0, rel_tol=0.0, abs_tol=1e-12):
            return 1.0
        raise DegenerateError("expected agreement is 1 but observed agreement is not")
    return float((p_bar - p_e) / (1.0 - p_e))


# -- human judgments -------------------------------------------------------

@dataclass(frozen=True)
class JudgmentRecord:
    sentence_id: str
    adequacy: int
    fluency: int
    judge: str

    def __post_init__(self):
        for name in ("adequacy", "fluency"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or not 1 <= v <= 5:
                raise DataError(f"{name} must be an integer in 1..5, got {v!r}")


def load_judgments(path):
    """Read ``id<TAB>adequacy<TAB>fluency<TAB>judge`` records."""
    records = []
    for lineno, (sid, adq, flu, judge) in read_tsv(path, ncols=4):
        try:
            records.append(JudgmentRecord(sid, int(adq), int(flu), judge))
        except (ValueError, DataError) as exc:
            raise FormatError(str(exc), line=lineno, path=path) from None
    return records


def mean_judgments(records):
    if not records:
        raise DataError("no judgment records")
    return {
        "adequacy": float(np.mean([r.adequacy for r in records])),
        "fluency": float(np.mean([r.fluency for r in records])),
        "n": len(records),
    }


# -- corpus evaluation -----------------------------------------------------

@dataclass
class EvalReport:
    bleu: float
    ter: float
    n_sentences: int
    sentences: list = field(default_factory=list)
    judgments: dict = None

    def __post_init__(self):
        if not 0.0 <= self.bleu <= 1.0:
            raise ValueError("bleu must lie in [0, 1]")
        if self.ter < 0:
            raise ValueError("ter must be non-negative")

    @property
    def bleu100(self):
        return 100.0 * self.bleu

    @property
    def ter100(self):
        return 100.0 * self.ter

    def to_dict(self):
        d = asdict(self)
        d["bleu100"] = self.bleu100
        d["ter100"] = self.ter100
        return d

    def to_text(self):
        lines = [f"sentences\t{self.n_sentences}",
                 f"BLEU\t{self.bleu100:.2f}",
                 f"TER\t{self.ter100:.2f}"]
        if self.judgments:
            lines.append(f"adequacy\t{self.judgments['adequacy']:.2f}")
            lines.append(f"fluency\t{self.judgments['fluency']:.2f}")
        return "\n".join(lines)

    def to_json(self):
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)


def _read_lines(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _tok(line):
    return [t.surface for t in tokenize(line)] if line.strip() else []


def evaluate_tokens(hypotheses, references, ids=None, judgments=None):
    """Score aligned token lists; ``ids`` labels each pair (default 1..n)."""
    if len(hypotheses) != len(references):
        raise DataError(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if ids is None:
        ids = list(range(1, len(hypotheses) + 1))
    if not hypotheses:
        raise DataError("nothing to evaluate")
    per_sentence = []
    edits = ref_len = 0
    for sid, h, r in zip(ids, hypotheses, references):
        e, rate = ter(h, r)
        edits += e
        ref_len += len(r)
        per_sentence.append({"id": sid, "bleu": bleu([h], [r]), "ter_edits": e, "ter": rate})
    report = EvalReport(bleu(hypotheses, references), edits / ref_len, len(hypotheses),
                        per_sentence)
    if judgments:
        report.judgments = mean_judgments(judgments)
    return report


def evaluate_corpus(hyp_path, ref_path, ids=None, judgments=None):
    """Evaluate line-aligned files, optionally restricted to 1-based line ids."""
    hyps = _read_lines(hyp_path)
    refs = _read_lines(ref_path)
    if len(hyps) != len(refs):
        raise DataError(f"{hyp_path} has {len(hyps)} lines but {ref_path} has {len(refs)}")
    line_ids = list(range(1, len(hyps) + 1))
    if ids is not None:
        wanted = {int(i) for i in ids}
        unknown = wanted - set(line_ids)
        if unknown:
            raise DataError(f"sentence ids out of range: {sorted(unknown)[:5]}")
        keep = [i for i in line_ids if i in wanted]
    else:
        keep = line_ids
    for i in keep:
        if not refs[i - 1].strip():
            raise DataError(f"reference line {i} is empty")
    if judgments and ids is not None:
        judgments = [j for j in judgments if str(j.sentence_id) in {str(i) for i in keep}]
    return evaluate_tokens([_tok(hyps[i - 1]) for i in keep],
                           [_tok(refs[i - 1]) for i in keep], ids=keep, judgments=judgments)
