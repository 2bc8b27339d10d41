import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codemix.exceptions import DataError, DegenerateError, FormatError
from codemix.metrics import (
    EvalReport, JudgmentRecord, KappaTable, bleu, corpus_bleu, corpus_ter, edit_distance,
    evaluate_corpus, fleiss_kappa, load_judgments, mean_judgments, ter,
)

REF = ["the", "cat", "is", "on", "the", "mat"]
tokens = st.lists(st.sampled_from("abcde"), min_size=1, max_size=8)


class TestBleu:
    def test_identity(self):
        corpus = [REF, ["a", "b", "c", "d", "e"]]
        assert bleu(corpus, corpus) == pytest.approx(1.0, abs=1e-9)

    def test_clipping(self):
        stats = corpus_bleu([["the"] * 7], [REF])
        assert stats.precisions[0] == pytest.approx(2 / 7, abs=1e-6)
        assert stats.matches[0] == 2 and stats.totals[0] == 7

    def test_smoothing_hand_value(self):
        stats = corpus_bleu([["a", "b", "c", "d"]], [["a", "b", "c", "e"]])
        assert stats.precisions == pytest.approx([3 / 4, 2 / 3, 1 / 2, 1 / 2])
        assert stats.score == pytest.approx((1 / 8) ** 0.25, abs=1e-12)

    def test_no_smoothing_zero(self):
        assert bleu([["a", "b", "c", "d"]], [["a", "b", "c", "e"]], smooth=False) == 0.0

    def test_brevity_penalty(self):
        stats = corpus_bleu([["the", "cat"]], [REF])
        assert stats.brevity_penalty == pytest.approx(math.exp(1 - 6 / 2))

    def test_length_mismatch(self):
        with pytest.raises(DataError):
            bleu([REF], [])

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.tuples(tokens, tokens), min_size=1, max_size=6), st.randoms())
    def test_corpus_order_invariant(self, pairs, rnd):
        hyps, refs = zip(*pairs)
        shuffled = list(pairs)
        rnd.shuffle(shuffled)
        h2, r2 = zip(*shuffled)
        assert bleu(hyps, refs) == pytest.approx(bleu(h2, r2), abs=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(tokens, tokens)
    def test_range(self, h, r):
        assert 0.0 <= bleu([h], [r]) <= 1.0


class TestTer:
    def test_identity(self):
        assert ter(REF, REF) == (0, 0.0)

    def test_one_substitution(self):
        edits, rate = ter(list("abcxe"), list("abcde"))
        assert edits == 1 and rate == pytest.approx(0.2)

    def test_shift_beats_substitutions(self):
        assert ter(list("bacd"), list("abcd")) == (1, pytest.approx(0.25))
        assert ter(list("bacd"), list("abcd"), shifts=False)[0] == 2

    def test_phrase_shift(self):
        edits, _ = ter(["c", "d", "a", "b"], ["a", "b", "c", "d"])
        assert edits == 1

    def test_empty_reference(self):
        with pytest.raises(DataError):
            ter(["a"], [])

    def test_corpus_pools_edits(self):
        assert corpus_ter([list("bacd"), list("xy")], [list("abcd"), list("xy")]) == pytest.approx(
            1 / 6)

    @settings(max_examples=150, deadline=None)
    @given(tokens, tokens)
    def test_shifts_never_hurt(self, h, r):
        with_shift, _ = ter(h, r)
        assert with_shift <= edit_distance(h, r)
        assert with_shift == ter(h, r, shifts=False)[0] or with_shift < edit_distance(h, r)

    @settings(max_examples=80, deadline=None)
    @given(tokens)
    def test_identity_property(self, x):
        assert ter(x, x) == (0, 0.0)


class TestKappa:
    def test_full_agreement(self):
        assert fleiss_kappa([[3, 0], [0, 3], [3, 0]]) == 1.0

    def test_two_raters_hand_value(self):
        # P_bar = (1 + 0) / 2, Pe = (3/4)^2 + (1/4)^2
        want = (0.5 - 0.625) / (1 - 0.625)
        table = KappaTable.from_ratings([["A", "A"], ["A", "B"]])
        assert fleiss_kappa(table) == pytest.approx(want, abs=1e-9)
        assert want == pytest.approx(-1 / 3)

    def test_degenerate(self):
        with pytest.raises(DataError):
            fleiss_kappa([[2, 0], [1, 0]])
        assert fleiss_kappa([[2, 0], [2, 0]]) == 1.0

    def test_one_rater(self):
        with pytest.raises(DataError):
            fleiss_kappa([[1, 0]])

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.lists(st.integers(0, 2), min_size=3, max_size=3), min_size=2, max_size=8),
           st.randoms())
    def test_item_and_category_permutation_invariant(self, rows, rnd):
        table = np.array([[r.count(c) for c in range(3)] for r in rows])
        if len({tuple(r) for r in table}) == 1 and (table.max(axis=1) == 3).all():
            return
        try:
            k = fleiss_kappa(table)
        except DegenerateError:
            return
        perm_items = list(range(len(table)))
        rnd.shuffle(perm_items)
        perm_cats = [2, 0, 1]
        assert fleiss_kappa(table[perm_items][:, perm_cats]) == pytest.approx(k, abs=1e-12)
        assert -1.0 <= k <= 1.0


class TestJudgments:
    def test_record_range(self):
        with pytest.raises(DataError):
            JudgmentRecord("1", 6, 3, "j1")

    def test_load_and_mean(self, tmp_path):
        path = tmp_path / "j.tsv"
        path.write_text("1\t4\t5\tj1\n1\t2\t3\tj2\n", encoding="utf-8")
        recs = load_judgments(path)
        assert mean_judgments(recs) == {"adequacy": 3.0, "fluency": 4.0, "n": 2}

    def test_bad_line(self, tmp_path):
        path = tmp_path / "j.tsv"
        path.write_text("1\t4\t5\tj1\n2\tx\t3\tj2\n", encoding="utf-8")
        with pytest.raises(FormatError) as err:
            load_judgments(path)
        assert err.value.line == 2


class TestEvaluateCorpus:
    def write(self, tmp_path, name, lines):
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    def test_identical(self, tmp_path):
        lines = ["the cat is on the mat .", "ami bhalo achi ."]
        h = self.write(tmp_path, "h.txt", lines)
        r = self.write(tmp_path, "r.txt", lines)
        report = evaluate_corpus(h, r)
        assert report.bleu == pytest.approx(1.0) and report.ter == 0.0
        assert "BLEU\t100.00" in report.to_text() and "TER\t0.00" in report.to_text()

    def test_ids_select_lines(self, tmp_path):
        h = self.write(tmp_path, "h.txt", ["a b c d", "totally wrong", "x y"])
        r = self.write(tmp_path, "r.txt", ["a b c d", "nothing alike here", "x y"])
        report = evaluate_corpus(h, r, ids=[1, 3])
        assert report.n_sentences == 2 and report.ter == 0.0
        assert [s["id"] for s in report.sentences] == [1, 3]

    def test_unknown_id(self, tmp_path):
        h = self.write(tmp_path, "h.txt", ["a"])
        with pytest.raises(DataError):
            evaluate_corpus(h, h, ids=[5])

    def test_line_mismatch(self, tmp_path):
        h = self.write(tmp_path, "h.txt", ["a", "b"])
        r = self.write(tmp_path, "r.txt", ["a"])
        with pytest.raises(DataError):
            evaluate_corpus(h, r)

    def test_report_validation(self):
        with pytest.raises(ValueError):
            EvalReport(1.5, 0.0, 1)
