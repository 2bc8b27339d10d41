"""Command-line entry point: ``codemix <subcommand> ...``.

Exit status is 0 on success, 1 on data errors and 2 on usage or
configuration errors. Set ``CODEMIX_LOG`` (e.g. ``DEBUG``) for logging.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .exceptions import CodeMixError, ConfigError, DataError, IoError
from .lm import build_lm
from .metrics import evaluate_corpus, load_judgments
from .mt import train_mt
from .neural import Seq2SeqNet, TaggerNet, gradient_check
from .pipeline import CMT1, CMT2, CodeMixTranslator, PipelineConfig, run_batch
from .tagger import TaggerTrainSpec, train_tagger
from .text import CharVocab, load_parallel_corpus, load_tagged_words, tokenize
from .translit import ParallelLexicon, train_translit

log = logging.getLogger("codemix")

EXIT_OK, EXIT_DATA, EXIT_CONFIG = 0, 1, 2


def _add_pipeline_flags(p):
    p.add_argument("--config", help="JSON file with pipeline paths and mode")
    p.add_argument("--tagger", help="tagger model file")
    p.add_argument("--translit-model", dest="translit_model", help="transliteration model file")
    p.add_argument("--mt-model", dest="mt_model", help="translation model file")
    p.add_argument("--pl", help="Roman -> ITRANS lexicon TSV")
    p.add_argument("--bn-trans", dest="bn_trans", help="ITRANS -> native lexicon TSV")
    p.add_argument("--lm", help="language model file (needed for cmt2)")
    p.add_argument("--mode", choices=[CMT1, CMT2])


def _add_config_flag(p):
    p.add_argument("--config", help="JSON pipeline config; flags override its values")


def _add_train_flags(p, epochs, batch_size):
    _add_config_flag(p)
    p.add_argument("--out", help="model file to write (default: the config's path)")
    p.add_argument("--epochs", type=int, default=epochs)
    p.add_argument("--batch-size", dest="batch_size", type=int, default=batch_size)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="codemix", description="Code-mixed Bengali-English to Bengali translation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-tagger", help="train the word language tagger")
    p.add_argument("--data", required=True, help="word<TAB>bn|en training file")
    p.add_argument("--threshold", type=float, default=0.5)
    _add_train_flags(p, epochs=500, batch_size=256)

    p = sub.add_parser("train-translit", help="train the fallback transliteration model")
    p.add_argument("--bn-trans", dest="bn_trans",
                   help="ITRANS<TAB>native lexicon used as training pairs")
    p.add_argument("--latent-dim", dest="latent_dim", type=int, default=128)
    p.add_argument("--attention", action="store_true")
    _add_train_flags(p, epochs=100, batch_size=64)

    p = sub.add_parser("train-mt", help="train the character-level translation model")
    p.add_argument("--corpus", required=True, help="english<TAB>bengali parallel file")
    p.add_argument("--hidden-dim", dest="hidden_dim", type=int, default=128)
    p.add_argument("--max-chars", dest="max_chars", type=int, default=200)
    _add_train_flags(p, epochs=100, batch_size=64)

    p = sub.add_parser("build-lm", help="count n-grams of a target-language corpus")
    _add_config_flag(p)
    p.add_argument("--corpus", required=True, help="one sentence per line")
    p.add_argument("--out", help="LM file to write (default: the config's lm path)")
    p.add_argument("--order", type=int, choices=[3], default=3)
    p.add_argument("--k", type=float, default=1.0, help="add-k smoothing constant")

    p = sub.add_parser("translate", help="translate sentences (stdin or --input)")
    _add_pipeline_flags(p)
    p.add_argument("--input", help="input file, one sentence per line (default stdin)")
    p.add_argument("--output", help="output file (default stdout)")
    p.add_argument("--trace", help="write one JSON trace record per line to this file")

    p = sub.add_parser("evaluate", help="BLEU and TER of a hypothesis file")
    _add_config_flag(p)
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--ids", help="file of 1-based line ids to restrict the evaluation to")
    p.add_argument("--judgments", help="id<TAB>adequacy<TAB>fluency<TAB>judge TSV")
    p.add_argument("--report", help="also write the full JSON report here")

    p = sub.add_parser("trace", help="show every pipeline stage for one sentence")
    _add_pipeline_flags(p)
    p.add_argument("sentence")
    p.add_argument("--json", action="store_true", help="print the raw JSON record")

    p = sub.add_parser("gradcheck", help="finite-difference check of the network gradients")
    _add_config_flag(p)
    p.add_argument("--model", choices=["tagger", "seq2seq", "all"], default="all")
    p.add_argument("--eps", type=float, default=1e-5)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _file_config(args):
    return PipelineConfig.from_file(args.config) if args.config else PipelineConfig()


def _from_config(args, flag, field):
    """Value of ``--flag``, falling back to the config file's ``field``."""
    value = getattr(args, flag) or getattr(_file_config(args), field)
    if not value:
        raise ConfigError(f"--{flag.replace('_', '-')} is required (or set {field!r} in --config)")
    return value


def _pipeline_config(args):
    config = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
    return config.merged(tagger=args.tagger, translit_model=args.translit_model,
                         mt_model=args.mt_model, pl=args.pl, bn_trans=args.bn_trans,
                         lm=args.lm, mode=args.mode)


def cmd_train_tagger(args):
    words = load_tagged_words(args.data)
    spec = TaggerTrainSpec(epochs=args.epochs, batch_size=args.batch_size,
                           learning_rate=args.lr, seed=args.seed)
    out = _from_config(args, "out", "tagger")
    model = train_tagger(words, spec, threshold=args.threshold)
    model.save(out)
    print(f"tagger: {len(words)} words, final loss {model.loss_curve_[-1]:.6f} -> {out}")


def cmd_train_translit(args):
    out = _from_config(args, "out", "translit_model")
    lex = ParallelLexicon.from_tsv(_from_config(args, "bn_trans", "bn_trans"), name="BN_TRANS")
    model = train_translit(lex, hidden_dim=args.latent_dim, attention=args.attention,
                           epochs=args.epochs, batch_size=args.batch_size,
                           learning_rate=args.lr, seed=args.seed)
    model.save(out)
    acc = model.training_accuracy_
    print(f"translit: {len(lex)} entries, sequence accuracy {acc['sequence']:.3f}, "
          f"character accuracy {acc['character']:.3f} -> {out}")


def cmd_train_mt(args):
    out = _from_config(args, "out", "mt_model")
    pairs = load_parallel_corpus(args.corpus)
    model = train_mt(pairs, hidden_dim=args.hidden_dim, max_chars=args.max_chars,
                     epochs=args.epochs, batch_size=args.batch_size,
                     learning_rate=args.lr, seed=args.seed)
    model.save(out)
    print(f"mt: {len(pairs) - model.n_skipped_} pairs ({model.n_skipped_} skipped), "
          f"final loss {model.loss_curve_[-1]:.6f} -> {out}")


def cmd_build_lm(args):
    out = _from_config(args, "out", "lm")
    try:
        lines = Path(args.corpus).read_text(encoding="utf-8").split("\n")
    except (OSError, UnicodeDecodeError) as exc:
        raise CodeMixError(f"cannot read {args.corpus}: {exc}") from exc
    sentences = [[t.surface for t in tokenize(line)] for line in lines if line.strip()]
    lm = build_lm(sentences, k=args.k)
    lm.save(out)
    print(f"lm: {len(sentences)} sentences, V={lm.vocab_size}, k={lm.k} -> {out}")


def cmd_translate(args):
    config = _pipeline_config(args)
    pipeline = CodeMixTranslator.from_config(config.validate())
    if args.input:
        summary = run_batch(pipeline, args.input, args.output or "/dev/stdout",
                            trace_path=args.trace)
        print(json.dumps(summary, sort_keys=True), file=sys.stderr)
        return EXIT_DATA if summary["errors"] else EXIT_OK
    out_lines, traces = [], []
    status = EXIT_OK
    for line in sys.stdin.read().splitlines():
        try:
            out, trace = pipeline.translate(line)
        except CodeMixError as exc:
            log.error("%s", exc)
            out, trace, status = "", None, EXIT_DATA
        out_lines.append(out)
        if trace is not None:
            traces.append(trace)
    text = "".join(o + "\n" for o in out_lines)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.trace:
        Path(args.trace).write_text("".join(t.to_json() + "\n" for t in traces),
                                    encoding="utf-8")
    return status


def cmd_evaluate(args):
    _file_config(args)
    ids = None
    if args.ids:
        try:
            ids = [int(x) for x in Path(args.ids).read_text(encoding="utf-8").split()]
        except OSError as exc:
            raise IoError(f"cannot read {args.ids}: {exc}") from exc
        except ValueError as exc:
            raise DataError(f"{args.ids}: sentence ids must be integers ({exc})") from exc
    judgments = load_judgments(args.judgments) if args.judgments else None
    report = evaluate_corpus(args.hyp, args.ref, ids=ids, judgments=judgments)
    print(report.to_text())
    if args.report:
        Path(args.report).write_text(report.to_json() + "\n", encoding="utf-8")


def cmd_trace(args):
    config = _pipeline_config(args)
    pipeline = CodeMixTranslator.from_config(config.validate())
    _, trace = pipeline.translate(args.sentence)
    print(trace.to_json() if args.json else trace.pretty())


def cmd_gradcheck(args):
    _file_config(args)
    results = {}
    if args.model in ("tagger", "all"):
        vocab = CharVocab("abcdefghijklmnopqrstuvwxyz")
        net = TaggerNet(vocab, 15, (35, 25), seed=args.seed, init_scale=0.5)
        batch = [(vocab.encode("bhalo"), 1), (vocab.encode("movie"), 0)]
        results["tagger 15-35-25-1"] = gradient_check(net, batch, eps=args.eps)
    if args.model in ("seq2seq", "all"):
        src, tgt = CharVocab("ab"), CharVocab("xy")
        net = Seq2SeqNet(src, tgt, hidden_dims=(8,), attention=True, seed=args.seed,
                         init_scale=0.5)
        batch = [(src.encode("abba"), tgt.encode("xyx")), (src.encode("ba"), tgt.encode("yy"))]
        results["seq2seq attention vocab 6 hidden 8"] = gradient_check(net, batch, eps=args.eps)
    ok = True
    for name, err in results.items():
        passed = err <= args.tol
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}: max relative error {err:.3e}")
    return EXIT_OK if ok else EXIT_DATA


COMMANDS = {
    "train-tagger": cmd_train_tagger,
    "train-translit": cmd_train_translit,
    "train-mt": cmd_train_mt,
    "build-lm": cmd_build_lm,
    "translate": cmd_translate,
    "evaluate": cmd_evaluate,
    "trace": cmd_trace,
    "gradcheck": cmd_gradcheck,
}


def main(argv=None):
    level = getattr(logging, os.environ.get("CODEMIX_LOG", "WARNING").upper(), logging.WARNING)
    logging.basicConfig(level=level,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status = COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CodeMixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK if status is None else status


if __name__ == "__main__":
    sys.exit(main())
