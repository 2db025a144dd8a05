"""Command-line frontend for the code-switching toolkit.

Subcommands: stats, features, train, eval, cv, subsample.  All read
corpora in the tagged-line format of codeswitch.corpus.  Outputs are
written atomically (temp file + rename) so partial files are never left
behind.  Identical arguments and inputs produce byte-identical outputs.

Set CODESWITCH_CONFIG to a JSON file of option defaults (keyed by option
dest name) to override the built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from codeswitch import stats as stats_mod
from codeswitch.corpus import (
    CorpusFormatError,
    LabeledCorpus,
    LabeledUtterance,
    load_corpus,
    save_corpus,
    serialize_tagged_line,
)
from codeswitch.model import (
    CVResult,
    EvalReport,
    PipelineConfig,
    TrainConfig,
    cross_validate,
    evaluate,
    fit_pipeline,
    load_model,
    predict_proba,
    save_model,
    subsample_negatives,
)
from codeswitch.preprocess import PreprocessConfig, normalize
from codeswitch.switching import has_embedding_property, switching_features
from codeswitch.textfeat import (
    DEFAULT_NEGATION_WORDS,
    IndicativeLexicon,
    Vocabulary,
    load_wordlist,
    vector_dim,
    vectorize,
)

DEFAULT_SEED = 13

PIPELINE_FORMAT_VERSION = 1


def _write_output(path: str | None, text: str) -> None:
    """Write atomically to path, or to stdout when path is None."""
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or Path("."),
                               prefix=target.name + ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _preprocess_corpus(corpus: LabeledCorpus, args) -> LabeledCorpus:
    if getattr(args, "no_preprocess", False):
        return corpus
    cfg = PreprocessConfig(
        keep_hashtag_placeholder=not getattr(args, "no_hashtag_placeholder", False),
        segment_hashtags=not getattr(args, "no_segment_hashtags", False),
        punctuation_set=frozenset(args.punct) if getattr(args, "punct", None)
        else PreprocessConfig().punctuation_set,
    )
    kept = []
    for u in corpus:
        tokens = normalize(u.tokens, cfg)
        if not tokens:
            print(f"warning: utterance {u.id} empty after preprocessing; dropped",
                  file=sys.stderr)
            continue
        kept.append(LabeledUtterance(tuple(tokens), u.label, u.id))
    if not kept:
        raise CorpusFormatError("empty corpus after preprocessing")
    return corpus.subset(kept)


def _pipeline_config(args) -> PipelineConfig:
    negation = (load_wordlist(args.negation_file) if args.negation_file
                else DEFAULT_NEGATION_WORDS)
    n_values = {"char_ngram": tuple(args.char_n), "word_ngram": tuple(args.word_n)}
    return PipelineConfig(
        kinds=frozenset(args.kinds.split(",")),
        n_values=n_values,
        min_count=args.min_count,
        chi2_k=None if args.chi2_k == 0 else args.chi2_k,
        use_indicative=not args.no_indicative,
        lexicon_floor=args.lexicon_floor,
        negation_words=negation,
        with_switching=args.with_switching,
        train_config=TrainConfig(epochs=args.epochs,
                                 learning_rate=args.learning_rate,
                                 l2=args.l2, seed=args.seed),
    )


def _save_pipeline_bundle(pipeline, path: str) -> None:
    cfg = pipeline.config
    doc = {
        "version": PIPELINE_FORMAT_VERSION,
        "config": {
            "kinds": sorted(cfg.kinds),
            "n_values": {k: list(v) for k, v in cfg.n_values.items()},
            "min_count": cfg.min_count,
            "chi2_k": cfg.chi2_k,
            "use_indicative": cfg.use_indicative,
            "lexicon_floor": cfg.lexicon_floor,
            "negation_words": sorted(cfg.negation_words),
            "with_switching": cfg.with_switching,
        },
        "vocab": [list(key) for key in pipeline.vocab.features],
        "lexicons": [{"class_name": lex.class_name, "scores": dict(sorted(lex.scores.items()))}
                     for lex in pipeline.lexicons],
    }
    _write_output(path, json.dumps(doc, ensure_ascii=False, sort_keys=True) + "\n")


def _load_pipeline_bundle(path: str) -> tuple[PipelineConfig, Vocabulary,
                                              tuple[IndicativeLexicon, ...]]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("version") != PIPELINE_FORMAT_VERSION:
        raise ValueError(f"unsupported pipeline bundle version in {path}")
    c = doc["config"]
    cfg = PipelineConfig(
        kinds=frozenset(c["kinds"]),
        n_values={k: tuple(v) for k, v in c["n_values"].items()},
        min_count=c["min_count"],
        chi2_k=c["chi2_k"],
        use_indicative=c["use_indicative"],
        lexicon_floor=c["lexicon_floor"],
        negation_words=frozenset(c["negation_words"]),
        with_switching=c["with_switching"],
    )
    vocab = Vocabulary(tuple((k, p) for k, p in doc["vocab"]),
                       cfg.kinds, cfg.n_values)
    lexicons = tuple(IndicativeLexicon(lex["scores"], lex["class_name"])
                     for lex in doc["lexicons"])
    return cfg, vocab, lexicons


def _report_dict(report: EvalReport) -> dict:
    return {
        "macro_f1": report.macro_f1,
        "per_class_f1": list(report.per_class_f1),
        "confusion": dict(zip(("tp", "fp", "fn", "tn"), report.confusion)),
        "degenerate_classes": list(report.degenerate_classes),
    }


def _cv_dict(result: CVResult) -> dict:
    return {
        "folds": [_report_dict(r) for r in result.reports],
        "mean_macro_f1": result.mean_macro_f1,
        "skipped_folds": list(result.skipped_folds),
    }


# --------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------

def cmd_stats(args) -> int:
    columns = []
    for path in args.inputs:
        corpus = _preprocess_corpus(load_corpus(path, Path(path).stem), args)
        columns.append(stats_mod.summarize(corpus))

    def cell(value) -> str:
        return "NA" if value is None else repr(value)

    rows = [
        ("p(T|Q)", [c.p_pos_given_q for c in columns]),
        ("p(T|~Q)", [c.p_pos_given_not_q for c in columns]),
        ("avg(S|T)", [c.avg_switch_pos for c in columns]),
        ("avg(S|~T)", [c.avg_switch_neg for c in columns]),
        ("phi", [c.phi for c in columns]),
    ]
    lines = ["metric\t" + "\t".join(c.task_name for c in columns)]
    for name, values in rows:
        lines.append(name + "\t" + "\t".join(cell(v) for v in values))
    _write_output(args.output, "\n".join(lines) + "\n")
    return 0


def cmd_features(args) -> int:
    corpus = _preprocess_corpus(load_corpus(args.input), args)
    lines = []
    for u in corpus:
        profile = switching_features(u.tokens)
        record = {
            "id": u.id,
            "label": u.label,
            "q": has_embedding_property(u.tokens),
            "en_hi_switches": profile.en_hi_switches,
            "hi_en_switches": profile.hi_en_switches,
            "v": profile.v,
            "fraction_en": profile.fraction_en,
            "fraction_hi": profile.fraction_hi,
            "mean_hi_en": profile.mean_hi_en,
            "stddev_hi_en": profile.stddev_hi_en,
            "mean_en_hi": profile.mean_en_hi,
            "stddev_en_hi": profile.stddev_en_hi,
        }
        lines.append(json.dumps(record, ensure_ascii=False))
    _write_output(args.output, "\n".join(lines) + "\n")
    return 0


def cmd_train(args) -> int:
    corpus = _preprocess_corpus(load_corpus(args.input), args)
    pipeline = fit_pipeline(corpus, _pipeline_config(args))
    save_model(pipeline.model, args.model_out)
    _save_pipeline_bundle(pipeline, args.pipeline_out)
    print(f"trained on {len(corpus)} utterances; "
          f"feature dim {pipeline.model.dim}", file=sys.stderr)
    return 0


def _load_fitted(args):
    from codeswitch.model import FittedPipeline
    cfg, vocab, lexicons = _load_pipeline_bundle(args.pipeline)
    model = load_model(args.model,
                       expected_dim=vector_dim(vocab, cfg.with_switching))
    return FittedPipeline(cfg, vocab, lexicons, model)


def cmd_eval(args) -> int:
    pipeline = _load_fitted(args)
    corpus = _preprocess_corpus(load_corpus(args.input), args)
    report = evaluate(pipeline, corpus)
    _write_output(args.output,
                  json.dumps(_report_dict(report), sort_keys=True) + "\n")
    return 0


def cmd_cv(args) -> int:
    corpus = _preprocess_corpus(load_corpus(args.input), args)
    cfg = _pipeline_config(args)

    if args.ablate_switching:
        from dataclasses import replace
        with_sw = cross_validate(corpus, replace(cfg, with_switching=True),
                                 args.k, args.seed)
        without_sw = cross_validate(corpus, replace(cfg, with_switching=False),
                                    args.k, args.seed)
        doc = {
            "with_switching": _cv_dict(with_sw),
            "without_switching": _cv_dict(without_sw),
            "delta_macro_f1": with_sw.mean_macro_f1 - without_sw.mean_macro_f1,
        }
    else:
        doc = _cv_dict(cross_validate(corpus, cfg, args.k, args.seed))

    if args.format == "tsv":
        lines = []
        if args.ablate_switching:
            lines.append("variant\tmean_macro_f1")
            lines.append(f"with_switching\t{doc['with_switching']['mean_macro_f1']!r}")
            lines.append(f"without_switching\t{doc['without_switching']['mean_macro_f1']!r}")
            lines.append(f"delta\t{doc['delta_macro_f1']!r}")
        else:
            lines.append("fold\tmacro_f1")
            for i, fold in enumerate(doc["folds"]):
                lines.append(f"{i}\t{fold['macro_f1']!r}")
            lines.append(f"mean\t{doc['mean_macro_f1']!r}")
        _write_output(args.output, "\n".join(lines) + "\n")
    else:
        _write_output(args.output, json.dumps(doc, sort_keys=True) + "\n")
    return 0


def cmd_subsample(args) -> int:
    pipeline = _load_fitted(args)
    corpus = _preprocess_corpus(load_corpus(args.input), args)
    filtered = subsample_negatives(corpus, pipeline.predict_proba, args.tau)
    text = "".join(serialize_tagged_line(u) + "\n" for u in filtered)
    _write_output(args.output, text)
    print(f"kept {len(filtered)} of {len(corpus)} utterances", file=sys.stderr)
    return 0


# --------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------

def _add_preprocess_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--no-preprocess", action="store_true",
                   help="skip tweet normalization")
    p.add_argument("--no-segment-hashtags", action="store_true",
                   help="do not split camel-case hashtags")
    p.add_argument("--no-hashtag-placeholder", action="store_true",
                   help="drop the 'hashtag' placeholder token")
    p.add_argument("--punct", default=None,
                   help="characters treated as punctuation")


def _add_feature_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kinds", default="bow,char_ngram,word_ngram",
                   help="comma-separated feature kinds")
    p.add_argument("--char-n", type=int, nargs="+", default=[3],
                   help="character n-gram sizes")
    p.add_argument("--word-n", type=int, nargs="+", default=[1, 2],
                   help="word n-gram sizes")
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--chi2-k", type=int, default=500,
                   help="chi-squared top-k selection (0 disables)")
    p.add_argument("--no-indicative", action="store_true",
                   help="disable the indicative-lexicon dimension")
    p.add_argument("--lexicon-floor", type=float, default=0.0)
    p.add_argument("--negation-file", default=None,
                   help="file with one negation word per line")
    p.add_argument("--with-switching", action="store_true",
                   help="append the nine switching features")
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--learning-rate", type=float, default=0.1)
    p.add_argument("--l2", type=float, default=1e-3)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="codeswitch",
        description="Code-switching feature extraction and classification")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("-o", "--output", default=None,
                       help="output file (default: stdout)")
        _add_preprocess_flags(p)

    p = sub.add_parser("stats", help="label/switching correlation table (TSV)")
    p.add_argument("inputs", nargs="+", help="tagged corpus files")
    common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("features", help="per-utterance switching features (JSON lines)")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("train", help="train a classifier")
    p.add_argument("input")
    p.add_argument("--model-out", required=True)
    p.add_argument("--pipeline-out", required=True,
                   help="fitted vocabulary/lexicon bundle (JSON)")
    common(p)
    _add_feature_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a trained model (JSON report)")
    p.add_argument("input")
    p.add_argument("--model", required=True)
    p.add_argument("--pipeline", required=True)
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("cv", help="k-fold cross-validation")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--ablate-switching", action="store_true",
                   help="run with and without switching features and report the delta")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    common(p)
    _add_feature_flags(p)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("subsample", help="drop low-confidence negatives")
    p.add_argument("input")
    p.add_argument("--model", required=True)
    p.add_argument("--pipeline", required=True)
    p.add_argument("--tau", type=float, default=0.001)
    common(p)
    p.set_defaults(func=cmd_subsample)

    config_path = os.environ.get("CODESWITCH_CONFIG")
    if config_path:
        with open(config_path, "r", encoding="utf-8") as fh:
            overrides = json.load(fh)
        for sp in sub.choices.values():
            sp.set_defaults(**{k: v for k, v in overrides.items()})
        parser.set_defaults(**overrides)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CorpusFormatError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
