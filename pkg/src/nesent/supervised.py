"""Binary n-gram presence features, Bernoulli naive Bayes and a linear SVM."""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _ext
from .corpus import Polarity
from .errors import (DimensionMismatch, EmptyTrainingSet, MissingClass, ModelFormatError,
                     NonPositiveReg, SupervisedError)

log = logging.getLogger(__name__)

ORDER_NAMES = {1: "uni", 2: "bi", 3: "tri"}
CLASSES = (Polarity.POSITIVE, Polarity.NEGATIVE)


@dataclass(frozen=True)
class NGramConfig:
    orders: tuple[int, ...] = (1,)
    tf_threshold: int = 1

    def __post_init__(self):
        orders = tuple(sorted(set(self.orders)))
        if not orders or not set(orders) <= {1, 2, 3}:
            raise SupervisedError(f"n-gram orders must be a non-empty subset of {{1,2,3}}: {self.orders}")
        if self.tf_threshold < 1:
            raise SupervisedError(f"tf_threshold must be >= 1, got {self.tf_threshold}")
        if self.tf_threshold > 3:
            log.warning("tf_threshold %d is outside the usual 1..3 range", self.tf_threshold)
        object.__setattr__(self, "orders", orders)

    @property
    def label(self) -> str:
        return "+".join(ORDER_NAMES[o] for o in self.orders)


def ngrams(tokens: Sequence[str], orders: Iterable[int]):
    """Contiguous n-grams within one document; no boundary padding."""
    for n in orders:
        for i in range(len(tokens) - n + 1):
            yield tuple(tokens[i:i + n])


@dataclass(frozen=True)
class FeatureSpace:
    keys: tuple[tuple[str, ...], ...]
    config: NGramConfig = NGramConfig()
    index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        keys = tuple(tuple(k) for k in self.keys)
        object.__setattr__(self, "keys", keys)
        object.__setattr__(self, "index", {k: i for i, k in enumerate(keys)})
        if len(self.index) != len(keys):
            raise SupervisedError("feature space keys must be unique")

    def __len__(self):
        return len(self.keys)

    def __contains__(self, key):
        return tuple(key) in self.index

    def to_json(self) -> dict:
        return {
            "orders": list(self.config.orders),
            "tf_threshold": self.config.tf_threshold,
            "keys": [list(k) for k in self.keys],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FeatureSpace":
        cfg = NGramConfig(tuple(data["orders"]), data["tf_threshold"])
        keys = [tuple(k) for k in data["keys"]]
        if keys != sorted(keys):
            raise ModelFormatError("feature space keys are not in canonical order")
        return cls(tuple(keys), cfg)


def _tokens_of(doc):
    return doc.tokens if hasattr(doc, "tokens") else doc


def build_feature_space(train_docs, config: NGramConfig = NGramConfig()) -> FeatureSpace:
    """Keep n-grams whose total occurrence count in training reaches the threshold."""
    train_docs = list(train_docs)
    if not train_docs:
        raise EmptyTrainingSet()
    counts = Counter()
    for doc in train_docs:
        counts.update(ngrams(_tokens_of(doc), config.orders))
    keys = sorted(k for k, c in counts.items() if c >= config.tf_threshold)
    return FeatureSpace(tuple(keys), config)


def vectorize(doc, space: FeatureSpace) -> tuple[int, ...]:
    """Sorted column indices of the in-space n-grams present in ``doc``."""
    idx = space.index
    return tuple(sorted({idx[g] for g in ngrams(_tokens_of(doc), space.config.orders) if g in idx}))


def to_csr(vectors: Sequence[Sequence[int]], extra_column=None):
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    flat = []
    for i, vec in enumerate(vectors):
        flat.extend(vec)
        if extra_column is not None:
            flat.append(extra_column)
        indptr[i + 1] = len(flat)
    return indptr, np.asarray(flat, dtype=np.int64)


def _check_vector(vec, dim):
    if any(not 0 <= j < dim for j in vec):
        raise DimensionMismatch(f"feature index out of range for a {dim}-column space")


def _class_counts(labels):
    labels = list(labels)
    n_pos = sum(lab is Polarity.POSITIVE for lab in labels)
    n_neg = sum(lab is Polarity.NEGATIVE for lab in labels)
    if n_pos + n_neg != len(labels):
        raise SupervisedError("supervised models accept positive/negative labels only")
    if n_pos == 0:
        raise MissingClass(Polarity.POSITIVE.value)
    if n_neg == 0:
        raise MissingClass(Polarity.NEGATIVE.value)
    return labels, n_pos, n_neg


# ---------------------------------------------------------------- naive Bayes


@dataclass
class NbModel:
    """Bernoulli naive Bayes. Row 0 of every array is positive, row 1 negative."""

    space: FeatureSpace
    log_prior: np.ndarray  # (2,)
    log_present: np.ndarray  # (2, d)
    log_absent: np.ndarray  # (2, d)

    def __post_init__(self):
        self._absent_total = self.log_absent.sum(axis=1)
        self._delta = self.log_present - self.log_absent

    @property
    def dim(self) -> int:
        return len(self.space)

    def validate(self):
        d = self.dim
        if self.log_prior.shape != (2,) or self.log_present.shape != (2, d) or self.log_absent.shape != (2, d):
            raise ModelFormatError("naive Bayes parameter shapes do not match the feature space")
        if abs(np.exp(self.log_prior).sum() - 1.0) > 1e-12:
            raise ModelFormatError("class priors do not sum to 1")
        if d and np.max(np.abs(np.exp(self.log_present) + np.exp(self.log_absent) - 1.0)) > 1e-12:
            raise ModelFormatError("presence/absence probabilities do not sum to 1")

    def to_json(self) -> dict:
        return {
            "model": "nb",
            "hyperparameters": {"smoothing": 1},
            "feature_space": self.space.to_json(),
            "parameters": {
                "log_prior": self.log_prior.tolist(),
                "log_present": self.log_present.tolist(),
                "log_absent": self.log_absent.tolist(),
            },
        }


def train_nb(vectors, labels, space: FeatureSpace) -> NbModel:
    """Presence counts with add-one smoothing: ``(count + 1) / (n_class + 2)``."""
    labels, n_pos, n_neg = _class_counts(labels)
    d = len(space)
    present = np.zeros((2, d), dtype=np.float64)
    for vec, lab in zip(vectors, labels):
        _check_vector(vec, d)
        present[0 if lab is Polarity.POSITIVE else 1, list(vec)] += 1
    n = np.array([[n_pos], [n_neg]], dtype=np.float64)
    p_present = (present + 1.0) / (n + 2.0)
    # absence computed from counts rather than 1 - p for accuracy
    p_absent = (n - present + 1.0) / (n + 2.0)
    total = n_pos + n_neg
    log_prior = np.log(np.array([n_pos / total, n_neg / total]))
    return NbModel(space, log_prior, np.log(p_present), np.log(p_absent))


def nb_log_joint(model: NbModel, vec) -> np.ndarray:
    _check_vector(vec, model.dim)
    idx = list(vec)
    return model.log_prior + model._absent_total + model._delta[:, idx].sum(axis=1)


def predict_nb(model: NbModel, vec):
    """Returns ``(polarity, (p_positive, p_negative))``; equal posteriors go negative."""
    joint = nb_log_joint(model, vec)
    top = joint.max()
    p = np.exp(joint - top)
    p /= p.sum()
    pol = Polarity.POSITIVE if joint[0] > joint[1] else Polarity.NEGATIVE
    return pol, (float(p[0]), float(p[1]))


# ----------------------------------------------------------------- linear SVM

DEFAULT_REG = 1e-2
DEFAULT_EPOCHS = 50
DEFAULT_SEED = 42


@dataclass
class SvmModel:
    space: FeatureSpace
    weights: np.ndarray
    bias: float
    reg: float = DEFAULT_REG
    epochs: int = DEFAULT_EPOCHS
    seed: int = DEFAULT_SEED

    @property
    def dim(self) -> int:
        return len(self.space)

    def validate(self):
        if self.weights.shape != (self.dim,):
            raise ModelFormatError("SVM weight vector does not match the feature space")
        if not (np.all(np.isfinite(self.weights)) and math.isfinite(self.bias)):
            raise ModelFormatError("SVM parameters are not finite")

    def to_json(self) -> dict:
        return {
            "model": "svm",
            "hyperparameters": {"reg": self.reg, "epochs": self.epochs, "seed": self.seed},
            "feature_space": self.space.to_json(),
            "parameters": {"weights": self.weights.tolist(), "bias": self.bias},
        }


def epoch_order(n: int, epochs: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.concatenate([rng.permutation(n) for _ in range(epochs)]).astype(np.int64)


def train_svm(vectors, labels, space: FeatureSpace, reg=DEFAULT_REG, epochs=DEFAULT_EPOCHS,
              seed=DEFAULT_SEED, kernels=None) -> SvmModel:
    """Hinge loss + L2, trained by seeded stochastic subgradient steps.

    The bias is an extra always-on column and is regularized with the rest.
    ``kernels`` selects an implementation module (defaults to the fastest
    available); all of them return identical weights.
    """
    if not reg > 0:
        raise NonPositiveReg(reg)
    labels, _, _ = _class_counts(labels)
    vectors = list(vectors)
    d = len(space)
    for vec in vectors:
        _check_vector(vec, d)
    indptr, indices = to_csr(vectors, extra_column=d)
    y = np.array([1.0 if lab is Polarity.POSITIVE else -1.0 for lab in labels])
    order = epoch_order(len(vectors), epochs, seed)
    k = kernels or _ext.kernels
    w = k.pegasos_train(indptr, indices, y, order, float(reg), d + 1)
    return SvmModel(space, w[:d].copy(), float(w[d]), float(reg), int(epochs), int(seed))


def svm_margins(model: SvmModel, vectors) -> np.ndarray:
    vectors = list(vectors)
    for vec in vectors:
        _check_vector(vec, model.dim)
    indptr, indices = to_csr(vectors)
    return _ext.sparse_margins(indptr, indices, model.weights, model.bias)


def predict_svm(model: SvmModel, vec) -> Polarity:
    margin = svm_margins(model, [vec])[0]
    return Polarity.POSITIVE if margin > 0 else Polarity.NEGATIVE


def svm_objective(weights, bias, vectors, labels, reg) -> float:
    """``reg/2 * (|w|^2 + b^2) + mean hinge`` over the given examples."""
    total = 0.0
    for vec, lab in zip(vectors, labels):
        y = 1.0 if lab is Polarity.POSITIVE else -1.0
        margin = float(sum(weights[j] for j in vec)) + bias
        total += max(0.0, 1.0 - y * margin)
    n = len(labels)
    return 0.5 * reg * (float(np.dot(weights, weights)) + bias * bias) + total / n


# -------------------------------------------------------------- persistence


def model_from_json(data: dict):
    try:
        kind = data["model"]
        space = FeatureSpace.from_json(data["feature_space"])
        params = data["parameters"]
        if kind == "nb":
            model = NbModel(space, np.array(params["log_prior"], dtype=np.float64),
                            np.array(params["log_present"], dtype=np.float64).reshape(2, len(space)),
                            np.array(params["log_absent"], dtype=np.float64).reshape(2, len(space)))
        elif kind == "svm":
            hp = data["hyperparameters"]
            model = SvmModel(space, np.array(params["weights"], dtype=np.float64),
                             float(params["bias"]), hp["reg"], hp["epochs"], hp["seed"])
        else:
            raise ModelFormatError(f"unknown model type {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model file: {exc}") from None
    model.validate()
    return model


def dumps_model(model) -> str:
    return json.dumps(model.to_json(), ensure_ascii=False, sort_keys=True) + "\n"


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"model file is not JSON: {exc.msg}") from None
    return model_from_json(data)


def predict(model, vec):
    """Uniform entry point -> ``(polarity, score)``.

    The score is the positive posterior for naive Bayes and the margin for
    the SVM.
    """
    if isinstance(model, NbModel):
        pol, (p_pos, _) = predict_nb(model, vec)
        return pol, p_pos
    margin = float(svm_margins(model, [vec])[0])
    return (Polarity.POSITIVE if margin > 0 else Polarity.NEGATIVE), margin
