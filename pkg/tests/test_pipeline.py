import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from codemix.datasets import EXAMPLE_1, EXAMPLE_2
from codemix.exceptions import ConfigError, EmptyInput, StageError
from codemix.pipeline import (
    CMT1, CMT2, CodeMixTranslator, PipelineConfig, run_batch, translate_code_mixed,
)
from codemix.text import Token, detokenize, tokenize
from codemix.translit import ECHO, LEXICON, PUNCT, TRANSLATION


@pytest.fixture(scope="module")
def pipeline(gold_tagger, pl, bn_trans, translit_model, mt_model, lm):
    return CodeMixTranslator(gold_tagger, pl, bn_trans, translit_model, mt_model, lm).fit()


class TestTranslate:
    def test_example_one_partition(self, pipeline):
        out, trace = translate_code_mixed(pipeline, EXAMPLE_1)
        assert [s.tag for s in trace.segments] == ["En", "Bn", "En", "Bn", "En", "Bn"]
        assert [s.route for s in trace.segments] == ["translate", "transliterate"] * 3
        assert trace.segments[0].outputs[0].text == "সিনেমা"
        assert trace.segments[1].outputs[1].text == "ভালো"
        assert out.startswith("সিনেমা তা ভালো ছিল")
        assert out.endswith(".")

    def test_example_two_partition(self, pipeline):
        out, trace = pipeline.translate(EXAMPLE_2)
        assert [s.tag for s in trace.segments] == ["En", "Bn", "En", "Bn"]
        assert trace.segments[0].tokens == ["I", "had", "to", "go"]
        assert " ".join(o.text for o in trace.segments[0].outputs) == "আমাকে যেতে হয়েছিল"

    def test_monolingual_bengali(self, pipeline):
        out, trace = pipeline.translate("ami bhalo achi")
        assert len(trace.segments) == 1 and trace.segments[0].route == "transliterate"
        assert out == "আমি ভালো আছি"
        assert trace.provenance_counts == {LEXICON: 3}

    def test_monolingual_english(self, pipeline):
        out, trace = pipeline.translate("thank you")
        assert len(trace.segments) == 1 and trace.segments[0].route == "translate"
        assert out == "ধন্যবাদ"
        assert set(trace.provenance_counts) == {TRANSLATION}

    def test_every_output_has_provenance(self, pipeline):
        _, trace = pipeline.translate(EXAMPLE_1)
        known = {LEXICON, "model", ECHO, PUNCT, TRANSLATION}
        assert all(o.provenance in known for s in trace.segments for o in s.outputs)

    def test_trace_accounts_for_every_token(self, pipeline):
        _, trace = pipeline.translate(EXAMPLE_1)
        flat = [t for s in trace.segments for t in s.tokens]
        assert flat == [t.surface for t in tokenize(EXAMPLE_1)]

    def test_stage_order_in_timings(self, pipeline):
        _, trace = pipeline.translate(EXAMPLE_2, mode=CMT2)
        names = list(trace.timings)
        assert names[:3] == ["tokenize", "tag", "segment"]
        assert names[-2:] == ["join", "reorder"]

    def test_cmt2_permutes_cmt1(self, pipeline):
        out1, t1 = pipeline.translate(EXAMPLE_1, mode=CMT1)
        out2, t2 = pipeline.translate(EXAMPLE_1, mode=CMT2)
        assert t1.joined == t2.joined
        assert sorted(out1.replace(" ", "")) == sorted(out2.replace(" ", ""))
        assert t1.reordered is None and t2.reordered == out2

    def test_deterministic(self, pipeline):
        assert pipeline.translate(EXAMPLE_1)[0] == pipeline.translate(EXAMPLE_1)[0]

    def test_transform(self, pipeline):
        assert pipeline.transform(["ami bhalo achi"]) == ["আমি ভালো আছি"]

    def test_empty(self, pipeline):
        with pytest.raises(EmptyInput):
            pipeline.translate("   ")

    def test_cmt2_needs_lm(self, gold_tagger, pl, bn_trans, mt_model):
        p = CodeMixTranslator(gold_tagger, pl, bn_trans, None, mt_model, mode=CMT2)
        with pytest.raises(ConfigError):
            p.fit()
        with pytest.raises(ConfigError):
            p.translate("ami")

    def test_stage_error_names_stage(self, gold_tagger, pl, bn_trans):
        class Broken:
            def decode(self, text, attention=None):
                raise RuntimeError("boom")

        p = CodeMixTranslator(gold_tagger, pl, bn_trans, None, Broken())
        with pytest.raises(StageError) as err:
            p.translate("movie")
        assert err.value.stage == "translate[0]"

    def test_pretty_and_json(self, pipeline):
        _, trace = pipeline.translate(EXAMPLE_2, mode=CMT2)
        doc = json.loads(trace.to_json())
        assert len(doc["segments"]) == 4 and doc["reordered"] is not None
        assert "segments:  4" in trace.pretty()

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.sampled_from(["ami", "bhalo", "achi", "movie", "boring", "khub", ",",
                                     "tumi", "good"]), min_size=1, max_size=8))
    def test_join_order_and_multiset(self, pipeline, words):
        if all(w == "," for w in words):
            return
        sentence = " ".join(words)
        out1, t1 = pipeline.translate(sentence, mode=CMT1)
        out2, t2 = pipeline.translate(sentence, mode=CMT2)
        joined = [Token.of(o.text) for s in t1.segments for o in s.outputs]
        assert t1.joined == detokenize(joined)
        assert sorted(out1.replace(" ", "")) == sorted(out2.replace(" ", ""))
        assert [s.index for s in t1.segments] == list(range(len(t1.segments)))


class TestBatch:
    def test_alignment_and_error_isolation(self, pipeline, tmp_path, caplog):
        src = tmp_path / "in.txt"
        src.write_text("ami bhalo achi\n?!\nmovie\n", encoding="utf-8")
        summary = run_batch(pipeline, src, tmp_path / "out.txt", trace_path=tmp_path / "t.jsonl")
        lines = (tmp_path / "out.txt").read_text(encoding="utf-8").split("\n")
        assert lines[:3] == ["আমি ভালো আছি", "", "সিনেমা"]
        assert summary["lines"] == 3 and summary["errors"] == 1
        assert "line 2" in caplog.text
        traces = [json.loads(x) for x in (tmp_path / "t.jsonl").read_text().splitlines()]
        assert len(traces) == 3 and traces[1]["error"]

    def test_all_in_lexicon_hit_rate(self, pipeline, tmp_path):
        src = tmp_path / "in.txt"
        src.write_text("ami bhalo achi\ntumi kemon acho\n", encoding="utf-8")
        summary = run_batch(pipeline, src, tmp_path / "out.txt")
        assert summary["lexicon_hit_rate"] == 1.0 and summary["echo_count"] == 0
        assert summary["segments"] == {"Bn": 2, "En": 0}


class TestConfig:
    def test_missing_lm_for_cmt2(self, model_dir):
        cfg = PipelineConfig.from_file(model_dir / "config.json").merged(mode=CMT2)
        cfg.lm = None
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_missing_file(self, model_dir):
        cfg = PipelineConfig.from_file(model_dir / "config.json").merged(pl="/nope/pl.tsv")
        with pytest.raises(ConfigError):
            cfg.validate()

    def test_unknown_key(self, tmp_path):
        (tmp_path / "c.json").write_text('{"taggr": "x"}')
        with pytest.raises(ConfigError):
            PipelineConfig.from_file(tmp_path / "c.json")

    def test_bad_mode(self):
        with pytest.raises(ConfigError):
            PipelineConfig(mode="cmt3").validate(required=())

    def test_round_trip_from_config(self, model_dir):
        cfg = PipelineConfig.from_file(model_dir / "config.json")
        p = CodeMixTranslator.from_config(cfg)
        out, trace = p.translate(EXAMPLE_2)
        assert [s.tag for s in trace.segments] == ["En", "Bn", "En", "Bn"]
