"""Per-dimension linear SVMs with deterministic training and 10-fold CV.

The solver is Pegasos: stochastic subgradient descent on the lambda-
regularized hinge objective

    L(w, b) = mean_i max(0, 1 - y_i (w . x_i + b)) + (lambda / 2) ||w||^2

with step size 1/(lambda * t) at update t, one update per sample per epoch,
per-epoch reshuffling from the package PRNG, and the optional projection of
w onto the ball of radius 1/sqrt(lambda). The bias is updated on margin
violations but not regularized or projected. Everything about a run is
determined by (X, y, config), so identical inputs give bitwise-identical
models.
"""

import hashlib
import json
from dataclasses import dataclass, field
from operator import mul
from typing import NamedTuple

import numpy as np

from .dimensions import DIMENSIONS, dimension_from_slug
from .errors import (
    DegenerateLabels,
    DimensionMismatch,
    LengthMismatch,
    TooFewSamples,
)
from .features import FEATURE_LAYOUT_VERSION
from .rng import XorShift64Star, mix_seed


@dataclass(frozen=True)
class TrainConfig:
    lam: float = 1e-3
    epochs: int = 20
    seed: int = 0
    folds: int = 10

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lam must be > 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.folds < 2:
            raise ValueError("folds must be >= 2")

    def hash(self):
        blob = json.dumps({"lam": self.lam, "epochs": self.epochs, "seed": self.seed,
                           "folds": self.folds, "layout": FEATURE_LAYOUT_VERSION},
                          sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class LinearModel:
    dimension: object
    weights: np.ndarray
    bias: float
    train_config_hash: str = ""


def kfold_split(n, k, seed):
    """Split indices 0..n-1 into k disjoint folds of near-equal size.

    The indices are shuffled by the package PRNG seeded with ``seed`` and
    dealt round-robin, so fold sizes differ by at most one and the same
    (n, k, seed) always produces the same folds.
    """
    if k < 2:
        raise ValueError("need at least 2 folds")
    if k > n:
        raise TooFewSamples(f"cannot split {n} samples into {k} folds")
    indices = list(range(n))
    XorShift64Star(seed).shuffle(indices)
    folds = [[] for _ in range(k)]
    for position, index in enumerate(indices):
        folds[position % k].append(index)
    return folds


def hinge_objective(X, y, weights, bias, lam):
    """Mean hinge loss plus the ridge penalty; the quantity Pegasos descends."""
    margins = y * (X @ weights + bias)
    hinge = np.maximum(0.0, 1.0 - margins)
    return float(np.mean(hinge) + 0.5 * lam * float(weights @ weights))


def train_svm(X, y, cfg, dimension=None):
    """Train one linear SVM with Pegasos; see the module docstring.

    Requires both classes in y. The update schedule runs epochs * n steps;
    reshuffling each epoch draws from a PRNG seeded with cfg.seed, which is
    the entire source of randomness.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise DimensionMismatch("X must be a non-empty 2-D matrix")
    if y.shape != (X.shape[0],):
        raise DimensionMismatch(f"y length {y.shape} does not match X rows {X.shape[0]}")
    classes = set(np.unique(y))
    if not classes <= {-1.0, 1.0}:
        raise DegenerateLabels(f"labels must be -1/+1, got {sorted(classes)}")
    if len(classes) < 2:
        raise DegenerateLabels("training labels contain a single class")

    n, d = X.shape
    lam = cfg.lam
    radius_sq = 1.0 / lam
    rng = XorShift64Star(cfg.seed)
    order = list(range(n))

    # The weights are kept as w = s * v so the every-step decay and the
    # ball projection are O(1) scalar updates; only margin checks and
    # violation updates touch the vector. ||v||^2 is maintained
    # incrementally and refreshed periodically against roundoff drift.
    # Note eta * lam = 1/t exactly, so the decay factor is 1 - 1/t.
    rows = [tuple(float(v) for v in row) for row in X]
    row_sq = [sum(v * v for v in row) for row in rows]
    labels = [float(v) for v in y]
    v = [0.0] * d
    vnorm2 = 0.0
    s = 1.0
    b = 0.0
    t = 0
    for _ in range(cfg.epochs):
        rng.shuffle(order)
        for i in order:
            t += 1
            x = rows[i]
            yi = labels[i]
            dot = sum(map(mul, v, x))
            violated = yi * (s * dot + b) < 1.0
            s *= 1.0 - 1.0 / t
            if s == 0.0:  # t == 1: the decay zeroes the weights exactly
                s, vnorm2, dot = 1.0, 0.0, 0.0
                v = [0.0] * d
            if violated:
                eta_y = yi / (lam * t)
                c = eta_y / s
                for j, xj in enumerate(x):
                    v[j] += c * xj
                vnorm2 += 2.0 * c * dot + c * c * row_sq[i]
                b += eta_y
            if t % 1024 == 0:
                vnorm2 = 0.0
                for vj in v:
                    vnorm2 += vj * vj
            wnorm2 = s * s * vnorm2
            if wnorm2 > radius_sq:
                s *= np.sqrt(radius_sq / wnorm2)
    weights = np.array([s * vj for vj in v], dtype=np.float64)
    return LinearModel(dimension=dimension, weights=weights, bias=float(b),
                       train_config_hash=cfg.hash())


def predict(model, x):
    """Sign of the decision value; an exact zero maps to +1."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.weights.shape[0]:
        raise DimensionMismatch(
            f"feature length {x.shape[-1]} vs model width {model.weights.shape[0]}")
    value = x @ model.weights + model.bias
    if np.ndim(value) == 0:
        return 1 if value >= 0.0 else -1
    return np.where(value >= 0.0, 1, -1)


class PRF(NamedTuple):
    """Precision/recall/F1 triple plus a flag for any 0/0 convention fills."""

    precision: float
    recall: float
    f1: float
    zero_division: bool

    def as_dict(self):
        return {"precision": self.precision, "recall": self.recall,
                "f1": self.f1, "zero_division": self.zero_division}


def f1_score(preds, truth):
    """Precision, recall, F1 for the +1 class; 0/0 ratios are 0 and flagged."""
    if len(preds) != len(truth):
        raise LengthMismatch(f"{len(preds)} predictions vs {len(truth)} truths")
    tp = fp = fn = 0
    for p, t in zip(preds, truth):
        if p == 1 and t == 1:
            tp += 1
        elif p == 1 and t == -1:
            fp += 1
        elif p == -1 and t == 1:
            fn += 1
    zero_division = False
    if tp + fp == 0:
        precision, zero_division = 0.0, True
    else:
        precision = tp / (tp + fp)
    if tp + fn == 0:
        recall, zero_division = 0.0, True
    else:
        recall = tp / (tp + fn)
    if precision + recall == 0.0:
        return PRF(precision, recall, 0.0, True)
    return PRF(precision, recall, 2 * precision * recall / (precision + recall),
               zero_division)


@dataclass
class DimensionEval:
    dimension: object
    skipped: bool = False
    folds: list = field(default_factory=list)   # PRF per evaluated fold
    supports: list = field(default_factory=list)  # positive truths per fold
    degenerate_folds: int = 0

    @property
    def mean_f1(self):
        if self.skipped or not self.folds:
            return None
        return sum(f.f1 for f in self.folds) / len(self.folds)


@dataclass
class EvalReport:
    per_dimension: dict
    folds: int
    config_hash: str

    def as_dict(self):
        out = {"folds": self.folds, "config_hash": self.config_hash, "dimensions": {}}
        for dim in DIMENSIONS:
            ev = self.per_dimension[dim]
            out["dimensions"][dim.slug] = {
                "skipped": ev.skipped,
                "mean_f1": ev.mean_f1,
                "degenerate_folds": ev.degenerate_folds,
                "supports": ev.supports,
                "folds": [f.as_dict() for f in ev.folds],
            }
        return out


def eval_report_from_dict(payload):
    per_dimension = {}
    for slug, raw in payload["dimensions"].items():
        dim = dimension_from_slug(slug)
        ev = DimensionEval(dimension=dim, skipped=raw["skipped"],
                           degenerate_folds=raw["degenerate_folds"],
                           supports=list(raw["supports"]))
        ev.folds = [PRF(f["precision"], f["recall"], f["f1"], f["zero_division"])
                    for f in raw["folds"]]
        per_dimension[dim] = ev
    return EvalReport(per_dimension=per_dimension, folds=payload["folds"],
                      config_hash=payload["config_hash"])


def cross_validate(records, cfg):
    """K-fold cross-validation of one SVM per dimension.

    Inputs are the zero-shot features; targets are the weak labels. A
    dimension whose labels are single-class over the whole corpus is
    reported as skipped rather than an error. A fold whose training half
    happens to be single-class is recorded as degenerate and left out of
    that dimension's mean.
    """
    n = len(records)
    if n < cfg.folds:
        raise TooFewSamples(f"{n} records but {cfg.folds} folds")
    X = np.array([rec.zsc_features for rec in records], dtype=np.float64)
    folds = kfold_split(n, cfg.folds, cfg.seed)
    report = EvalReport(per_dimension={}, folds=cfg.folds, config_hash=cfg.hash())

    for dim_index, dim in enumerate(DIMENSIONS):
        y = np.array([rec.weak_labels[dim_index] for rec in records], dtype=np.float64)
        ev = DimensionEval(dimension=dim)
        if len(np.unique(y)) < 2:
            ev.skipped = True
            report.per_dimension[dim] = ev
            continue
        for fold_index, test_idx in enumerate(folds):
            test_mask = np.zeros(n, dtype=bool)
            test_mask[test_idx] = True
            y_train = y[~test_mask]
            if len(np.unique(y_train)) < 2:
                ev.degenerate_folds += 1
                continue
            fold_cfg = TrainConfig(lam=cfg.lam, epochs=cfg.epochs,
                                   seed=mix_seed(cfg.seed, dim_index * cfg.folds + fold_index),
                                   folds=cfg.folds)
            model = train_svm(X[~test_mask], y_train, fold_cfg, dimension=dim)
            preds = predict(model, X[test_mask])
            truth = y[test_mask].astype(int)
            ev.folds.append(f1_score(list(preds), list(truth)))
            ev.supports.append(int(np.sum(truth == 1)))
        if not ev.folds:
            ev.skipped = True
        report.per_dimension[dim] = ev
    return report


def model_to_json(model, cfg):
    payload = {
        "dimension": model.dimension.slug if model.dimension is not None else None,
        "weights": [float(w) for w in model.weights],
        "bias": model.bias,
        "lambda": cfg.lam,
        "epochs": cfg.epochs,
        "seed": cfg.seed,
        "feature_layout_version": FEATURE_LAYOUT_VERSION,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def model_from_json(text):
    payload = json.loads(text)
    dim = dimension_from_slug(payload["dimension"]) if payload["dimension"] else None
    cfg = TrainConfig(lam=payload["lambda"], epochs=payload["epochs"], seed=payload["seed"])
    model = LinearModel(dimension=dim, weights=np.array(payload["weights"], dtype=np.float64),
                        bias=float(payload["bias"]), train_config_hash=cfg.hash())
    return model, cfg
