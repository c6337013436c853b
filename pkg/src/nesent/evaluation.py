"""Binary classification metrics and the with/without-entities ablation."""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional, Sequence

from .corpus import BINARY, Corpus, Polarity
from .errors import ConfigError, LengthMismatch, NonBinaryLabel
from .lexicon import Lexicon, Scheme, TiePolicy, add_ne_tags, check_dp_lexicon, dp_score, sfs_score
from .ne_provider import NeAnnotations
from .ne_sentiment import NePolarityMap, Scope, detect_ne_polarity, tag_entities
from .supervised import (DEFAULT_EPOCHS, DEFAULT_REG, DEFAULT_SEED, NGramConfig, build_feature_space,
                         predict_nb, svm_margins, train_nb, train_svm, vectorize)

log = logging.getLogger(__name__)

METRIC_KEYS = ("precision", "recall", "f1", "accuracy")
ALL_ORDER_COMBOS = tuple(
    combo for r in (1, 2, 3) for combo in itertools.combinations((1, 2, 3), r)
)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def _ratio(num, den):
    return num / den if den else 0.0


def _f1(p, r):
    return 2 * p * r / (p + r) if p + r else 0.0


@dataclass(frozen=True)
class MetricsReport:
    confusion: ConfusionMatrix
    per_class: dict  # polarity value -> {"precision", "recall", "f1"}
    precision: float
    recall: float
    f1: float
    accuracy: float
    n_evaluated: int

    @classmethod
    def from_confusion(cls, cm: ConfusionMatrix) -> "MetricsReport":
        pos_p, pos_r = _ratio(cm.tp, cm.tp + cm.fp), _ratio(cm.tp, cm.tp + cm.fn)
        neg_p, neg_r = _ratio(cm.tn, cm.tn + cm.fn), _ratio(cm.tn, cm.tn + cm.fp)
        per_class = {
            "positive": {"precision": pos_p, "recall": pos_r, "f1": _f1(pos_p, pos_r)},
            "negative": {"precision": neg_p, "recall": neg_r, "f1": _f1(neg_p, neg_r)},
        }
        return cls(
            confusion=cm,
            per_class=per_class,
            precision=(pos_p + neg_p) / 2,
            recall=(pos_r + neg_r) / 2,
            f1=(per_class["positive"]["f1"] + per_class["negative"]["f1"]) / 2,
            accuracy=_ratio(cm.tp + cm.tn, cm.total),
            n_evaluated=cm.total,
        )

    def to_json(self) -> dict:
        cm = self.confusion
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "accuracy": self.accuracy,
            "per_class": self.per_class,
            "confusion": {"tp": cm.tp, "fp": cm.fp, "tn": cm.tn, "fn": cm.fn},
            "n_evaluated": self.n_evaluated,
        }


def _binary_label(value) -> Polarity:
    try:
        pol = Polarity(value)
    except ValueError:
        pol = None
    if pol not in BINARY:
        raise NonBinaryLabel(f"binary evaluation got label {value!r}")
    return pol


def confusion(predictions: Sequence, golds: Sequence) -> ConfusionMatrix:
    if len(predictions) != len(golds):
        raise LengthMismatch(f"{len(predictions)} predictions for {len(golds)} gold labels")
    tp = fp = tn = fn = 0
    for pred, gold in zip(predictions, golds):
        pred, gold = _binary_label(pred), _binary_label(gold)
        if gold is Polarity.POSITIVE:
            if pred is Polarity.POSITIVE:
                tp += 1
            else:
                fn += 1
        elif pred is Polarity.POSITIVE:
            fp += 1
        else:
            tn += 1
    return ConfusionMatrix(tp, fp, tn, fn)


def evaluate(predictions: Sequence, golds: Sequence) -> MetricsReport:
    """Per-class and macro-averaged precision/recall/F1 plus accuracy."""
    return MetricsReport.from_confusion(confusion(predictions, golds))


def pct(value: float) -> str:
    """Percentage rounded half-up to one decimal, e.g. ``0.73335 -> '73.3'``."""
    d = Decimal(repr(value)) * 100
    return str(d.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


# ------------------------------------------------------------------ ablation


class ModelSpec(str, enum.Enum):
    NB = "nb"
    SVM = "svm"
    LEXICON_SFS = "lexicon_sfs"
    LEXICON_DP = "lexicon_dp"

    @property
    def supervised(self) -> bool:
        return self in (ModelSpec.NB, ModelSpec.SVM)

    @property
    def display(self) -> str:
        return {"nb": "NB", "svm": "SVM", "lexicon_sfs": "SFS", "lexicon_dp": "DP"}[self.value]


@dataclass(frozen=True)
class AblationConfig:
    dataset: str = "dataset"
    scope: Scope = Scope.TRAIN_ONLY
    order_sweep: tuple = ALL_ORDER_COMBOS
    thresholds: tuple = (1, 2, 3)
    schemes: tuple = (Scheme.UNI, Scheme.UNI_BI)
    sfs_tie: TiePolicy = TiePolicy.NEGATIVE
    svm_reg: float = DEFAULT_REG
    svm_epochs: int = DEFAULT_EPOCHS
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        object.__setattr__(self, "scope", Scope(self.scope))
        object.__setattr__(self, "sfs_tie", TiePolicy(self.sfs_tie))
        object.__setattr__(self, "schemes", tuple(Scheme(s) for s in self.schemes))
        object.__setattr__(self, "order_sweep", tuple(tuple(o) for o in self.order_sweep))
        object.__setattr__(self, "thresholds", tuple(int(t) for t in self.thresholds))
        if self.sfs_tie is TiePolicy.ABSTAIN:
            raise ConfigError("binary evaluation needs a positive or negative tie policy")
        if not self.order_sweep or not self.thresholds or not self.schemes:
            raise ConfigError("sweep ranges must be non-empty")


@dataclass
class AblationRow:
    dataset: str
    nes: str  # "No" | "Yes"
    model: ModelSpec
    features: str
    metrics: MetricsReport
    setting: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "dataset": self.dataset,
            "nes": self.nes,
            "model": self.model.value,
            "features": self.features,
            "setting": self.setting,
            "metrics": self.metrics.to_json(),
        }


@dataclass
class AblationReport:
    rows: list
    meta: dict = field(default_factory=dict)

    def row(self, model, nes: str) -> AblationRow:
        model = ModelSpec(model)
        for r in self.rows:
            if r.model is model and r.nes == nes:
                return r
        raise KeyError((model, nes))

    def deltas(self) -> list:
        out = []
        for model in dict.fromkeys(r.model for r in self.rows):
            no, yes = self.row(model, "No"), self.row(model, "Yes")
            out.append({
                "dataset": no.dataset,
                "model": model.value,
                **{k: getattr(yes.metrics, k) - getattr(no.metrics, k) for k in METRIC_KEYS},
            })
        return out

    def to_json(self) -> dict:
        return {
            "meta": self.meta,
            "rows": [r.to_json() for r in self.rows],
            "deltas": self.deltas(),
        }


def _binary(docs):
    kept = [d for d in docs if d.gold in BINARY]
    return kept, len(docs) - len(kept)


def _best(candidates):
    # first candidate wins ties, so sweep order decides
    best = None
    for cand in candidates:
        if best is None or cand[0].f1 > best[0].f1:
            best = cand
    return best


def _sweep_supervised(spec, train, test, cfg: AblationConfig):
    golds = [d.gold for d in test]
    labels = [d.gold for d in train]
    for orders in cfg.order_sweep:
        for threshold in cfg.thresholds:
            space = build_feature_space(train, NGramConfig(orders, threshold))
            xtr = [vectorize(d, space) for d in train]
            xte = [vectorize(d, space) for d in test]
            if spec is ModelSpec.NB:
                model = train_nb(xtr, labels, space)
                preds = [predict_nb(model, x)[0] for x in xte]
            else:
                model = train_svm(xtr, labels, space, cfg.svm_reg, cfg.svm_epochs, cfg.seed)
                margins = svm_margins(model, xte)
                preds = [Polarity.POSITIVE if m > 0 else Polarity.NEGATIVE for m in margins]
            label = space.config.label if threshold == 1 else f"{space.config.label} (tf>={threshold})"
            setting = {"orders": list(space.config.orders), "tf_threshold": threshold, "n_features": len(space)}
            yield evaluate(preds, golds), label, setting


def _sweep_lexicon(spec, lexicon: Lexicon, test, cfg: AblationConfig):
    golds = [d.gold for d in test]
    if spec is ModelSpec.LEXICON_DP:
        check_dp_lexicon(lexicon)
    for scheme in cfg.schemes:
        if spec is ModelSpec.LEXICON_SFS:
            preds = [sfs_score(d.tokens, lexicon, scheme, cfg.sfs_tie)[1] for d in test]
        else:
            preds = [dp_score(d.tokens, lexicon, scheme, validate=False)[2] for d in test]
        yield evaluate(preds, golds), scheme.label, {"scheme": scheme.value}


def _run_arm(spec, corpus: Corpus, lexicon: Optional[Lexicon], cfg: AblationConfig):
    train, _ = _binary(corpus.train)
    test, _ = _binary(corpus.test)
    if spec.supervised:
        candidates = _sweep_supervised(spec, train, test, cfg)
    else:
        if lexicon is None:
            raise ConfigError(f"model {spec.value} needs a lexicon")
        candidates = _sweep_lexicon(spec, lexicon, test, cfg)
    return _best(candidates)


def run_ablation(corpus: Corpus, annotations: NeAnnotations, lexicon: Optional[Lexicon],
                 model_specs, config: AblationConfig = AblationConfig(),
                 polarity_map: Optional[NePolarityMap] = None) -> AblationReport:
    """Evaluate every model with entities left as plain tokens and with them tagged.

    ``corpus`` must already be tokenized. The untagged arm uses the corpus and
    lexicon as given and never looks at entity polarities. The tagged arm
    mines polarities (or uses ``polarity_map`` when supplied), tags both
    splits and adds PosNE/NegNE to the lexicon. Supervised models sweep
    n-gram orders and TF thresholds, lexicon models sweep lookup schemes;
    each arm reports its best macro-F1 setting on the test split.
    """
    specs = [ModelSpec(s) for s in model_specs]
    if not specs:
        raise ConfigError("at least one model spec is required")
    if not corpus.train or not corpus.test:
        raise ConfigError("ablation needs both a train and a test split")

    _, excluded_train = _binary(corpus.train)
    _, excluded_test = _binary(corpus.test)
    meta = {
        "dataset": config.dataset,
        "ne_scope": config.scope.value,
        "label_leakage": config.scope is Scope.ALL_LABELED,
        "excluded_neutral": {"train": excluded_train, "test": excluded_test},
        "averaging": "macro",
        "note": "Prec/Rec/F1 are unweighted means over the positive and negative classes.",
    }

    baseline = {spec: _run_arm(spec, corpus, lexicon, config) for spec in specs}

    if polarity_map is None:
        polarity_map, _, stats = detect_ne_polarity(corpus, annotations, config.scope)
        meta["ne_stats"] = stats.to_json()
    else:
        meta["ne_stats"] = None
        meta["polarity_map"] = "supplied"
    tagged = tag_entities(corpus, annotations, polarity_map)
    tagged_lexicon = add_ne_tags(lexicon) if lexicon is not None else None
    with_nes = {spec: _run_arm(spec, tagged, tagged_lexicon, config) for spec in specs}

    rows = []
    for spec in specs:
        for nes, result in (("No", baseline[spec]), ("Yes", with_nes[spec])):
            metrics, features, setting = result
            rows.append(AblationRow(config.dataset, nes, spec, features, metrics, setting))
    return AblationReport(rows, meta)


SUPERVISED_HEADER = ("Dataset", "NEs", "Algorithm", "Prec (%)", "Rec (%)", "F1 (%)", "Acc (%)")
LEXICON_HEADER = ("Dataset", "NEs", "Features", "Prec (%)", "Rec (%)", "F1 (%)", "Acc (%)")


def _table(header, body) -> str:
    widths = [max(len(str(row[i])) for row in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() for row in [header, *body]]
    return "\n".join(lines)


def _metric_cells(m: MetricsReport):
    return [pct(m.precision), pct(m.recall), pct(m.f1), pct(m.accuracy)]


def render_report(report: AblationReport) -> str:
    """Plain-text tables: supervised models first, then one table per lexicon scorer."""
    blocks = []
    sup = [r for r in report.rows if r.model.supervised]
    if sup:
        ordered = sorted(sup, key=lambda r: (r.nes, [s for s in ModelSpec].index(r.model)))
        body = [[r.dataset, r.nes, r.model.display, *_metric_cells(r.metrics)] for r in ordered]
        blocks.append("Supervised models\n" + _table(SUPERVISED_HEADER, body))
    for spec in (ModelSpec.LEXICON_SFS, ModelSpec.LEXICON_DP):
        rows = [r for r in report.rows if r.model is spec]
        if rows:
            body = [[r.dataset, r.nes, r.features, *_metric_cells(r.metrics)] for r in rows]
            blocks.append(f"Lexicon-based ({spec.display})\n" + _table(LEXICON_HEADER, body))
    footer = "Averages are macro (unweighted over the two classes)."
    if report.meta.get("label_leakage"):
        footer += " Entity polarities were mined from all labeled documents, test split included."
    return "\n\n".join(blocks) + "\n\n" + footer + "\n"
