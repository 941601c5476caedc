"""Pearson correlation with exact two-sided p-values, no stats dependency.

The p-value for r on n samples comes from the t transform

    t = r * sqrt((n - 2) / (1 - r^2))

whose two-sided tail is the regularized incomplete beta I_x(df/2, 1/2)
evaluated at x = df / (df + t^2) with df = n - 2. The incomplete beta is
computed here with the standard continued fraction under a modified Lentz
iteration (cap 300 terms, absolute tolerance 1e-12).
"""

from dataclasses import dataclass
from math import exp, fsum, lgamma, log, log1p, sqrt

import numpy as np

from .dimensions import DIMENSIONS, dimension_from_slug
from .errors import LengthMismatch, TooFewSamples, ZeroVariance
from .lexicon import SELECTED_CATEGORIES

_BETA_MAX_ITER = 300
_BETA_TOL = 1e-12
_TINY = 1e-300


def _beta_continued_fraction(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_TOL:
            break
    return h


def regularized_incomplete_beta(a, b, x):
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (lgamma(a + b) - lgamma(a) - lgamma(b)
                 + a * log(x) + b * log1p(-x))
    # the continued fraction converges fastest below the distribution mean;
    # above it, evaluate the mirrored tail instead
    if x < (a + 1.0) / (a + b + 2.0):
        return exp(log_front) * _beta_continued_fraction(a, b, x) / a
    return 1.0 - exp(log_front) * _beta_continued_fraction(b, a, 1.0 - x) / b


def pearson_r(x, y):
    """Sample Pearson correlation, clamped to [-1, 1] against roundoff."""
    if len(x) != len(y):
        raise LengthMismatch(f"series lengths differ: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise TooFewSamples(f"need at least 3 paired samples, got {n}")
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if np.all(xa == xa[0]) or np.all(ya == ya[0]):
        raise ZeroVariance("a constant series has no defined correlation")
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    denom = sqrt(float(dx @ dx)) * sqrt(float(dy @ dy))
    if denom == 0.0:
        raise ZeroVariance("a constant series has no defined correlation")
    r = float(dx @ dy) / denom
    return min(1.0, max(-1.0, r))


def p_value(r, n):
    """Two-sided p for the null of zero correlation, via the beta tail."""
    if n < 3:
        raise TooFewSamples(f"need at least 3 paired samples, got {n}")
    if not -1.0 <= r <= 1.0:
        raise ValueError(f"r must lie in [-1, 1], got {r}")
    if abs(r) == 1.0:
        return 0.0
    if r == 0.0:
        return 1.0
    df = n - 2
    t_squared = r * r * df / (1.0 - r * r)
    x = df / (df + t_squared)
    p = regularized_incomplete_beta(df / 2.0, 0.5, x)
    return min(1.0, max(0.0, p))


def stars(p):
    """Significance marker: *** below 0.001, * below 0.05, else empty.

    Boundary values fall into the weaker band.
    """
    if p < 0.001:
        return "***"
    if p < 0.05:
        return "*"
    return ""


def pearson_r_reference(x, y):
    """Definition-level r: compensated sums, no vectorization.

    Kept as an independent route for cross-checking pearson_r; slow on
    purpose and not used by the pipeline.
    """
    n = len(x)
    mean_x = fsum(x) / n
    mean_y = fsum(y) / n
    cov = fsum((xi - mean_x) * (yi - mean_y) for xi, yi in zip(x, y))
    var_x = fsum((xi - mean_x) ** 2 for xi in x)
    var_y = fsum((yi - mean_y) ** 2 for yi in y)
    return cov / sqrt(var_x * var_y)


@dataclass(frozen=True)
class CorrelationCell:
    r: float = 0.0
    p: float = 1.0
    n: int = 0
    undefined: bool = False

    @property
    def stars(self):
        if self.undefined:
            return ""
        return stars(self.p)

    def as_dict(self):
        if self.undefined:
            return {"undefined": True, "n": self.n}
        return {"r": self.r, "p": self.p, "n": self.n, "stars": self.stars}


@dataclass
class CorrelationMatrix:
    """Cells keyed by (emotion category, dimension), full 5 x 10 grid."""

    cells: dict
    n: int

    def cell(self, category, dimension):
        return self.cells[(category, dimension)]

    def as_dict(self):
        grid = {}
        for category in SELECTED_CATEGORIES:
            grid[category] = {dim.slug: self.cells[(category, dim)].as_dict()
                              for dim in DIMENSIONS}
        return {"n": self.n, "cells": grid}


def correlation_matrix_from_dict(payload):
    cells = {}
    for category in SELECTED_CATEGORIES:
        for dim in DIMENSIONS:
            raw = payload["cells"][category][dim.slug]
            if raw.get("undefined"):
                cells[(category, dim)] = CorrelationCell(n=raw["n"], undefined=True)
            else:
                cells[(category, dim)] = CorrelationCell(r=raw["r"], p=raw["p"],
                                                         n=raw["n"])
    return CorrelationMatrix(cells=cells, n=payload["n"])


def correlation_matrix(records):
    """Correlate per-document moral scores against the emotion proportions.

    One cell per (emotion category, dimension) pair. A pair where either
    series is constant across the corpus gets an undefined cell instead of
    an error, since a sparse corpus can legitimately never hit a category.
    """
    n = len(records)
    if n < 3:
        raise TooFewSamples(f"need at least 3 documents, got {n}")
    moral = np.array([rec.moral_scores for rec in records], dtype=np.float64)
    liwc = np.array([rec.liwc for rec in records], dtype=np.float64)
    cells = {}
    for cat_index, category in enumerate(SELECTED_CATEGORIES):
        for dim_index, dim in enumerate(DIMENSIONS):
            x = moral[:, dim_index]
            y = liwc[:, cat_index]
            try:
                r = pearson_r(x, y)
            except ZeroVariance:
                cells[(category, dim)] = CorrelationCell(n=n, undefined=True)
                continue
            cells[(category, dim)] = CorrelationCell(r=r, p=p_value(r, n), n=n)
    return CorrelationMatrix(cells=cells, n=n)
