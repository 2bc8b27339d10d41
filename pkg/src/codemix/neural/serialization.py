"""JSON model container.

Layout::

    {"format_version": 1, "model_kind": "...", "architecture": "tagger"|"seq2seq",
     "vocab": {...}, "dims": {...}, "params": {name: {"shape": [...], "data": [...]}},
     "train_config": {...}, "seed": int, "extra": {...}}

Floats are written with ``repr`` precision so a load/save round trip is
exact, and keys are sorted so identical parameters give identical bytes.
"""

import json
from pathlib import Path

import numpy as np

from ..exceptions import ConfigError, FormatError, IoError
from ..text import CharVocab
from .models import Seq2SeqNet, TaggerNet

FORMAT_VERSION = 1


def model_to_dict(model, model_kind, train_config=None, seed=None, extra=None):
    if isinstance(model, TaggerNet):
        vocab = {"chars": model.vocab.to_list()}
    else:
        vocab = {"source": model.src_vocab.to_list(), "target": model.tgt_vocab.to_list()}
    return {
        "format_version": FORMAT_VERSION,
        "model_kind": model_kind,
        "architecture": model.kind,
        "vocab": vocab,
        "dims": model.describe(),
        "params": {
            name: {"shape": list(p.shape), "data": [float(x) for x in p.reshape(-1)]}
            for name, p in model.params.items()
        },
        "train_config": None if train_config is None else dict(train_config),
        "seed": seed,
        "extra": extra or {},
    }


def model_from_dict(doc, expected_kind=None):
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported model format_version {version!r}")
    if expected_kind is not None and doc.get("model_kind") != expected_kind:
        raise ConfigError(f"expected a {expected_kind!r} model, found {doc.get('model_kind')!r}")
    params = {
        name: np.asarray(entry["data"], dtype=np.float64).reshape(entry["shape"])
        for name, entry in doc["params"].items()
    }
    dims = doc["dims"]
    if doc["architecture"] == TaggerNet.kind:
        model = TaggerNet(CharVocab(doc["vocab"]["chars"]), dims["embed_dim"],
                          dims["hidden_dims"], params=params)
    elif doc["architecture"] == Seq2SeqNet.kind:
        model = Seq2SeqNet(
            CharVocab(doc["vocab"]["source"]), CharVocab(doc["vocab"]["target"]),
            hidden_dims=dims["hidden_dims"], attention=dims["attention"],
            embedding=dims["embedding"], embed_dim=dims["embed_dim"], params=params)
    else:
        raise FormatError(f"unknown architecture {doc['architecture']!r}")
    return model, doc


def save_model(path, model, model_kind, train_config=None, seed=None, extra=None):
    doc = model_to_dict(model, model_kind, train_config, seed, extra)
    text = json.dumps(doc, sort_keys=True, ensure_ascii=False)
    try:
        Path(path).write_text(text + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def load_model(path, expected_kind=None):
    """Return ``(model, document)`` read from ``path``."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not a model container: {exc}") from exc
    return model_from_dict(doc, expected_kind)
