"""Command-line entry point.

Every subcommand reads a JSON run config (``--config``); command-line flags
override individual fields. The fully resolved config is written next to the
outputs as ``effective_config.json``. Exit codes: 0 success, 1 domain error,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__
from .corpus import BINARY, Polarity, load_corpus, split_summary, summary_to_json
from .errors import ConfigError, NesentError
from .evaluation import (ALL_ORDER_COMBOS, AblationConfig, ModelSpec, evaluate, render_report,
                         run_ablation)
from .lexicon import Scheme, TiePolicy, add_ne_tags, check_dp_lexicon, dp_score, load_lexicon, merge_lexicons, sfs_score
from .ne_provider import NeAnnotations, gazetteer_match, load_annotations, load_gazetteer
from .ne_sentiment import Scope, detect_ne_polarity, scores_to_jsonl, tag_entities
from .preprocess import NormalizationConfig, preprocess_corpus
from .supervised import (DEFAULT_EPOCHS, DEFAULT_REG, DEFAULT_SEED, NGramConfig, build_feature_space,
                         dumps_model, load_model, predict, train_nb, train_svm, vectorize)

log = logging.getLogger("nesent")


@dataclass
class RunConfig:
    corpus: str
    corpus_format: str = "jsonl"
    dataset: str = "dataset"
    annotations: Optional[str] = None
    gazetteer: Optional[str] = None
    normalization: NormalizationConfig = field(default_factory=NormalizationConfig)
    ne_scope: Scope = Scope.TRAIN_ONLY
    lexicons: list = field(default_factory=list)
    models: list = field(default_factory=list)
    ngram: NGramConfig = field(default_factory=NGramConfig)
    sweep_orders: tuple = ALL_ORDER_COMBOS
    sweep_thresholds: tuple = (1, 2, 3)
    sweep_schemes: tuple = (Scheme.UNI, Scheme.UNI_BI)
    sfs_tie: TiePolicy = TiePolicy.NEGATIVE
    svm_reg: float = DEFAULT_REG
    svm_epochs: int = DEFAULT_EPOCHS
    seed: int = DEFAULT_SEED
    use_nes: bool = True
    output_dir: str = "out"

    def validate(self):
        paths = [("corpus", self.corpus), ("annotations", self.annotations), ("gazetteer", self.gazetteer)]
        paths += [("lexicon", p) for p in self.lexicons]
        for what, path in paths:
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"{what} file not found: {path}")
        if self.annotations and self.gazetteer:
            raise ConfigError("configure either 'annotations.file' or 'annotations.gazetteer', not both")
        bad = [m for m in self.models if m not in {s.value for s in ModelSpec}]
        if bad:
            raise ConfigError(f"unknown model spec(s): {bad}")

    def to_json(self) -> dict:
        ann = {"file": self.annotations} if self.annotations else (
            {"gazetteer": self.gazetteer} if self.gazetteer else None)
        return {
            "dataset": self.dataset,
            "corpus": {"path": self.corpus, "format": self.corpus_format},
            "annotations": ann,
            "normalization": self.normalization.to_dict(),
            "ne_scope": self.ne_scope.value,
            "lexicons": list(self.lexicons),
            "models": [ModelSpec(m).value for m in self.models],
            "ngram": {"orders": list(self.ngram.orders), "tf_threshold": self.ngram.tf_threshold},
            "sweep": {
                "orders": [list(o) for o in self.sweep_orders],
                "thresholds": list(self.sweep_thresholds),
                "schemes": [Scheme(s).value for s in self.sweep_schemes],
            },
            "tie_policy": {"sfs": self.sfs_tie.value},
            "svm": {"reg": self.svm_reg, "epochs": self.svm_epochs},
            "seed": self.seed,
            "use_nes": self.use_nes,
            "output_dir": self.output_dir,
        }

    def ablation_config(self) -> AblationConfig:
        return AblationConfig(
            dataset=self.dataset, scope=self.ne_scope, order_sweep=self.sweep_orders,
            thresholds=self.sweep_thresholds, schemes=self.sweep_schemes, sfs_tie=self.sfs_tie,
            svm_reg=self.svm_reg, svm_epochs=self.svm_epochs, seed=self.seed,
        )


def _resolve(base: Path, path):
    if path is None:
        return None
    p = Path(path)
    return str(p if p.is_absolute() else (base / p))


def load_run_config(path: Optional[str], overrides: argparse.Namespace) -> RunConfig:
    data = {}
    base = Path.cwd()
    if path:
        base = Path(path).resolve().parent
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    try:
        corpus = data.get("corpus") or {}
        ann = data.get("annotations") or {}
        ngram = data.get("ngram") or {}
        sweep = data.get("sweep") or {}
        svm = data.get("svm") or {}
        cfg = RunConfig(
            corpus=_resolve(base, corpus.get("path")),
            corpus_format=corpus.get("format", "jsonl"),
            dataset=data.get("dataset", "dataset"),
            annotations=_resolve(base, ann.get("file")),
            gazetteer=_resolve(base, ann.get("gazetteer")),
            normalization=NormalizationConfig.from_dict(data.get("normalization") or {}),
            ne_scope=Scope(data.get("ne_scope", Scope.TRAIN_ONLY.value)),
            lexicons=[_resolve(base, p) for p in data.get("lexicons", [])],
            models=[ModelSpec(m).value for m in data.get("models", [])],
            ngram=NGramConfig(tuple(ngram.get("orders", (1,))), int(ngram.get("tf_threshold", 1))),
            sweep_orders=tuple(tuple(o) for o in sweep.get("orders", ALL_ORDER_COMBOS)),
            sweep_thresholds=tuple(sweep.get("thresholds", (1, 2, 3))),
            sweep_schemes=tuple(Scheme(s) for s in sweep.get("schemes", ("uni", "uni_bi"))),
            sfs_tie=TiePolicy((data.get("tie_policy") or {}).get("sfs", "negative")),
            svm_reg=float(svm.get("reg", DEFAULT_REG)),
            svm_epochs=int(svm.get("epochs", DEFAULT_EPOCHS)),
            seed=int(data.get("seed", DEFAULT_SEED)),
            use_nes=bool(data.get("use_nes", True)),
            output_dir=_resolve(base, data.get("output_dir", "out")),
        )
    except (ValueError, TypeError, AttributeError) as exc:
        raise ConfigError(f"invalid config: {exc}") from None

    o = overrides
    cwd = Path.cwd()
    if o.corpus:
        cfg.corpus = _resolve(cwd, o.corpus)
    if o.format:
        cfg.corpus_format = o.format
    if o.annotations:
        cfg.annotations, cfg.gazetteer = _resolve(cwd, o.annotations), None
    if o.gazetteer:
        cfg.gazetteer, cfg.annotations = _resolve(cwd, o.gazetteer), None
    if o.lexicon:
        cfg.lexicons = [_resolve(cwd, p) for p in o.lexicon]
    if o.scope:
        cfg.ne_scope = Scope(o.scope)
    if o.seed is not None:
        cfg.seed = o.seed
    if o.output_dir:
        cfg.output_dir = _resolve(cwd, o.output_dir)
    if o.use_nes is not None:
        cfg.use_nes = o.use_nes
    if o.dataset:
        cfg.dataset = o.dataset
    if getattr(o, "models", None):
        cfg.models = [ModelSpec(m).value for m in o.models]
    if cfg.corpus is None:
        raise ConfigError("no corpus configured (set corpus.path or pass --corpus)")
    cfg.validate()
    return cfg


class Stage:
    """Names the pipeline stage currently running, for error messages."""

    current = "config"


@contextmanager
def stage(name):
    Stage.current = name
    yield


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _dump_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def _outdir(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    _write(out / "effective_config.json", _dump_json(cfg.to_json()))
    return out


def _prepared_corpus(cfg: RunConfig):
    with stage("corpus"):
        corpus = load_corpus(cfg.corpus, cfg.corpus_format)
    with stage("preprocess"):
        return preprocess_corpus(corpus, cfg.normalization)


def _annotations(cfg: RunConfig, corpus) -> NeAnnotations:
    with stage("ne_provider"):
        if cfg.annotations:
            return load_annotations(cfg.annotations, cfg.normalization).resolve(corpus)
        if cfg.gazetteer:
            return gazetteer_match(corpus, load_gazetteer(cfg.gazetteer, cfg.normalization))
        return NeAnnotations()


def _lexicon(cfg: RunConfig, required: bool):
    with stage("lexicon"):
        if not cfg.lexicons:
            if required:
                raise ConfigError("no lexicon configured")
            return None
        lexicons = [load_lexicon(p, cfg.normalization) for p in cfg.lexicons]
        return lexicons[0] if len(lexicons) == 1 else merge_lexicons(lexicons)


def _tagged(cfg: RunConfig, corpus):
    """Corpus after entity tagging, or unchanged when entities are disabled."""
    if not cfg.use_nes:
        return corpus
    annotations = _annotations(cfg, corpus)
    with stage("ne_sentiment"):
        pmap, _, _ = detect_ne_polarity(corpus, annotations, cfg.ne_scope)
        return tag_entities(corpus, annotations, pmap)


def cmd_stats(cfg: RunConfig, args) -> int:
    with stage("corpus"):
        corpus = load_corpus(cfg.corpus, cfg.corpus_format)
        table = summary_to_json(split_summary(corpus))
    out = _outdir(cfg)
    _write(out / "split_summary.json", _dump_json(table))
    print(f"{'split':<8}{'positive':>10}{'negative':>10}{'neutral':>10}")
    for split in ("train", "test"):
        row = table[split]
        print(f"{split:<8}{row['positive']:>10}{row['negative']:>10}{row['neutral']:>10}")
    print(f"total {table['total']}")
    return 0


def cmd_ne_polarity(cfg: RunConfig, args) -> int:
    corpus = _prepared_corpus(cfg)
    annotations = _annotations(cfg, corpus)
    with stage("ne_sentiment"):
        pmap, scores, stats = detect_ne_polarity(corpus, annotations, cfg.ne_scope)
    out = _outdir(cfg)
    _write(out / "ne_polarity.jsonl", scores_to_jsonl(scores, pmap))
    report = stats.to_json()
    report["scope"] = cfg.ne_scope.value
    _write(out / "ne_stats.json", _dump_json(report))
    print(json.dumps(stats.to_json()))
    return 0


def cmd_tag(cfg: RunConfig, args) -> int:
    from .corpus import dumps_corpus

    corpus = _prepared_corpus(cfg)
    annotations = _annotations(cfg, corpus)
    with stage("ne_sentiment"):
        pmap, scores, stats = detect_ne_polarity(corpus, annotations, cfg.ne_scope)
        tagged = tag_entities(corpus, annotations, pmap)
    out = _outdir(cfg)
    _write(out / "tagged_corpus.jsonl", dumps_corpus(tagged, with_tokens=True))
    _write(out / "ne_polarity.jsonl", scores_to_jsonl(scores, pmap))
    _write(out / "ne_stats.json", _dump_json(stats.to_json()))
    return 0


def cmd_train(cfg: RunConfig, args) -> int:
    spec = ModelSpec(args.model) if args.model else next(
        (ModelSpec(m) for m in cfg.models if ModelSpec(m).supervised), None)
    if spec is None or not spec.supervised:
        raise ConfigError("train needs a supervised model spec (nb or svm)")
    ngram = cfg.ngram
    if args.orders:
        ngram = NGramConfig(tuple(args.orders), args.tf_threshold or ngram.tf_threshold)
    elif args.tf_threshold:
        ngram = NGramConfig(ngram.orders, args.tf_threshold)
    corpus = _tagged(cfg, _prepared_corpus(cfg))
    with stage("supervised"):
        train = [d for d in corpus.train if d.gold in BINARY]
        space = build_feature_space(train, ngram)
        xs = [vectorize(d, space) for d in train]
        ys = [d.gold for d in train]
        if spec is ModelSpec.NB:
            model = train_nb(xs, ys, space)
        else:
            model = train_svm(xs, ys, space, cfg.svm_reg, cfg.svm_epochs, cfg.seed)
    log.info("trained %s on %s n-grams (tf>=%d), %d features",
             spec.value, ngram.label, ngram.tf_threshold, len(space))
    out = _outdir(cfg)
    _write(out / "model.json", dumps_model(model))
    return 0


def _score_json(score):
    if isinstance(score, Fraction):
        return int(score) if score.denominator == 1 else float(score)
    return score


def cmd_classify(cfg: RunConfig, args) -> int:
    corpus = _tagged(cfg, _prepared_corpus(cfg))
    test = corpus.test
    if not test:
        raise ConfigError("test split is empty; nothing to classify")
    records = []
    if args.model_file:
        with stage("supervised"):
            model = load_model(args.model_file)
            for doc in test:
                pol, score = predict(model, vectorize(doc, model.space))
                records.append((doc.id, pol.value, score))
    else:
        lexicon = _lexicon(cfg, required=True)
        scheme = Scheme(args.scheme)
        with stage("lexicon"):
            if cfg.use_nes:
                lexicon = add_ne_tags(lexicon)
            if args.scorer == "dp":
                check_dp_lexicon(lexicon)
            for doc in test:
                if args.scorer == "dp":
                    pos, neg, pol = dp_score(doc.tokens, lexicon, scheme, validate=False)
                    records.append((doc.id, pol.value, _score_json(pos + neg)))
                else:
                    score, pol = sfs_score(doc.tokens, lexicon, scheme, cfg.sfs_tie)
                    records.append((doc.id, pol.value if pol else "abstain", _score_json(score)))
    out = _outdir(cfg)
    lines = [json.dumps({"id": i, "predicted": p, "score": s}, ensure_ascii=False) + "\n" for i, p, s in records]
    _write(out / "predictions.jsonl", "".join(lines))
    return 0


def cmd_evaluate(cfg: RunConfig, args) -> int:
    with stage("corpus"):
        corpus = load_corpus(cfg.corpus, cfg.corpus_format)
    with stage("evaluation"):
        preds = {}
        with open(args.predictions, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    preds[rec["id"]] = rec["predicted"]
        golds, predicted, excluded = [], [], 0
        for doc_id, pred in preds.items():
            if doc_id not in corpus:
                raise ConfigError(f"prediction for unknown document {doc_id!r}")
            gold = corpus.get(doc_id).gold
            if gold is Polarity.NEUTRAL:
                excluded += 1
                continue
            golds.append(gold)
            predicted.append(pred)
        report = evaluate(predicted, golds).to_json()
    report["excluded_neutral"] = excluded
    out = _outdir(cfg)
    _write(out / "metrics.json", _dump_json(report))
    print(json.dumps({k: report[k] for k in ("precision", "recall", "f1", "accuracy")}))
    return 0


def cmd_ablate(cfg: RunConfig, args) -> int:
    if not cfg.models:
        raise ConfigError("ablate needs at least one model spec")
    needs_lexicon = any(not ModelSpec(m).supervised for m in cfg.models)
    corpus = _prepared_corpus(cfg)
    annotations = _annotations(cfg, corpus)
    lexicon = _lexicon(cfg, required=needs_lexicon)
    with stage("evaluation"):
        report = run_ablation(corpus, annotations, lexicon, cfg.models, cfg.ablation_config())
    out = _outdir(cfg)
    _write(out / "ablation.json", _dump_json(report.to_json()))
    text = render_report(report)
    _write(out / "ablation.txt", text)
    print(text, end="")
    return 0


COMMANDS = {
    "stats": cmd_stats,
    "ne-polarity": cmd_ne_polarity,
    "tag": cmd_tag,
    "train": cmd_train,
    "classify": cmd_classify,
    "evaluate": cmd_evaluate,
    "ablate": cmd_ablate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nesent", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run config")
    common.add_argument("--corpus")
    common.add_argument("--format", choices=["jsonl", "tsv"])
    common.add_argument("--dataset")
    common.add_argument("--annotations", help="NER output (JSONL)")
    common.add_argument("--gazetteer", help="entity list, one surface per line")
    common.add_argument("--lexicon", action="append", help="lexicon TSV; repeat to merge in order")
    common.add_argument("--scope", choices=[s.value for s in Scope])
    common.add_argument("--seed", type=int)
    common.add_argument("--output-dir")
    common.add_argument("--use-nes", dest="use_nes", action="store_true", default=None)
    common.add_argument("--no-nes", dest="use_nes", action="store_false")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("stats", parents=[common], help="train/test polarity counts")
    sub.add_parser("ne-polarity", parents=[common], help="mine entity polarities")
    sub.add_parser("tag", parents=[common], help="write the PosNE/NegNE-tagged corpus")
    p = sub.add_parser("train", parents=[common], help="train a supervised model")
    p.add_argument("--model", choices=["nb", "svm"])
    p.add_argument("--orders", type=int, nargs="+", choices=[1, 2, 3])
    p.add_argument("--tf-threshold", type=int)
    p = sub.add_parser("classify", parents=[common], help="predict the test split")
    p.add_argument("--model-file", help="model JSON from 'train'; omit to use the lexicon")
    p.add_argument("--scorer", choices=["sfs", "dp"], default="sfs")
    p.add_argument("--scheme", choices=[s.value for s in Scheme], default=Scheme.UNI_BI.value)
    p = sub.add_parser("evaluate", parents=[common], help="score a predictions file")
    p.add_argument("--predictions", required=True)
    p = sub.add_parser("ablate", parents=[common], help="with/without-entities comparison")
    p.add_argument("--models", nargs="+", choices=[m.value for m in ModelSpec])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    Stage.current = "config"
    try:
        cfg = load_run_config(args.config, args)
        return COMMANDS[args.command](cfg, args)
    except NesentError as exc:
        print(f"error [{Stage.current}] {type(exc).__name__}: {exc}", file=sys.stderr)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error [{Stage.current}] {type(exc).__name__}: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
