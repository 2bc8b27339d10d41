import pytest

from codemix.datasets import (
    BN_TRANS_ENTRIES, PL_ENTRIES, TOY_MT, TOY_TRANSLIT, make_lm_corpus, make_separable_words,
)
from codemix.lm import build_lm
from codemix.mt import train_mt
from codemix.tagger import TaggerTrainSpec, train_tagger
from codemix.translit import ParallelLexicon, train_translit


@pytest.fixture(scope="session")
def separable_words():
    return make_separable_words(200, seed=0)


@pytest.fixture(scope="session")
def trained_tagger(separable_words):
    return train_tagger(separable_words, TaggerTrainSpec(epochs=500, seed=0))


@pytest.fixture(scope="session")
def pl():
    return ParallelLexicon(PL_ENTRIES, name="PL", direction="roman->itrans")


@pytest.fixture(scope="session")
def bn_trans():
    return ParallelLexicon(BN_TRANS_ENTRIES, name="BN_TRANS", direction="itrans->native")


@pytest.fixture(scope="session")
def toy_translit_lexicon():
    return ParallelLexicon(TOY_TRANSLIT, name="toy", direction="roman->native")


@pytest.fixture(scope="session")
def translit_model(toy_translit_lexicon):
    return train_translit(toy_translit_lexicon, hidden_dim=128, epochs=300, batch_size=64,
                          seed=0)


@pytest.fixture(scope="session")
def mt_model():
    return train_mt(TOY_MT, hidden_dim=128, attention=True, epochs=300, batch_size=64, seed=0)


@pytest.fixture(scope="session")
def lm_corpus():
    return make_lm_corpus(500, seed=0)


@pytest.fixture(scope="session")
def lm(lm_corpus):
    return build_lm(lm_corpus)


def example_words():
    from codemix.datasets import EXAMPLE_1, EXAMPLE_2, example_tags
    from codemix.text import tokenize

    words = []
    for ex in (EXAMPLE_1, EXAMPLE_2):
        surfaces = [t.surface for t in tokenize(ex) if t.is_word]
        words += list(zip(surfaces, example_tags(ex)))
    return words


@pytest.fixture(scope="session")
def gold_tagger():
    from codemix.tagger import GoldTagger

    words = example_words()
    extra = [("ami", "bn"), ("achi", "bn"), ("tumi", "bn"), ("kemon", "bn"), ("acho", "bn")]
    return GoldTagger.from_sequence([w for w, _ in words] + [w for w, _ in extra],
                                    [t for _, t in words] + [t for _, t in extra])


@pytest.fixture(scope="session")
def example_tagger():
    return train_tagger(example_words(), TaggerTrainSpec(epochs=400, batch_size=64, seed=0))


@pytest.fixture(scope="session")
def model_dir(tmp_path_factory, example_tagger, translit_model, mt_model, lm):
    """Saved models, lexicon files and a config, as the CLI expects them."""
    import json

    d = tmp_path_factory.mktemp("models")
    example_tagger.save(d / "tagger.json")
    translit_model.save(d / "translit.json")
    mt_model.save(d / "mt.json")
    lm.save(d / "lm.json")
    (d / "pl.tsv").write_text("".join(f"{k}\t{v}\n" for k, v in PL_ENTRIES.items()),
                              encoding="utf-8")
    (d / "bn_trans.tsv").write_text(
        "".join(f"{k}\t{v}\n" for k, v in BN_TRANS_ENTRIES.items()), encoding="utf-8")
    config = {
        "tagger": str(d / "tagger.json"), "translit_model": str(d / "translit.json"),
        "mt_model": str(d / "mt.json"), "pl": str(d / "pl.tsv"),
        "bn_trans": str(d / "bn_trans.tsv"), "lm": str(d / "lm.json"), "mode": "cmt1",
    }
    (d / "config.json").write_text(json.dumps(config), encoding="utf-8")
    return d
