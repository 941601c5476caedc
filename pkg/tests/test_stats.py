import math

import numpy as np
import pytest
import scipy.special
import scipy.stats
from hypothesis import assume, given
from hypothesis import strategies as st

from moraltext.dimensions import DIMENSIONS
from moraltext.errors import LengthMismatch, TooFewSamples, ZeroVariance
from moraltext.features import FeatureRecord
from moraltext.lexicon import SELECTED_CATEGORIES
from moraltext.stats import (
    CorrelationCell,
    correlation_matrix,
    correlation_matrix_from_dict,
    p_value,
    pearson_r,
    pearson_r_reference,
    regularized_incomplete_beta,
    stars,
)

# scipy appears in this file as an independent oracle only; the package
# itself computes its p-values through its own incomplete-beta routine.


# ---------------------------------------------------------- incomplete beta

def test_incomplete_beta_matches_scipy_over_a_grid():
    worst = 0.0
    for a in (0.5, 1.0, 2.5, 14.0, 60.5):
        for b in (0.5, 1.0, 3.0, 25.0):
            for x in (1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 1 - 1e-6):
                ours = regularized_incomplete_beta(a, b, x)
                ref = float(scipy.special.betainc(a, b, x))
                worst = max(worst, abs(ours - ref))
    assert worst < 1e-12


def test_incomplete_beta_edges():
    assert regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
    assert regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0
    with pytest.raises(ValueError):
        regularized_incomplete_beta(2.0, 3.0, 1.5)


# ------------------------------------------------------------------ pearson

def test_pearson_r_known_cases():
    x = [1.0, 2.0, 3.0, 4.0]
    assert pearson_r(x, [2.0, 4.0, 6.0, 8.0]) == pytest.approx(1.0, abs=1e-15)
    assert pearson_r(x, [8.0, 6.0, 4.0, 2.0]) == pytest.approx(-1.0, abs=1e-15)
    assert pearson_r([1.0, 2.0, 3.0], [1.0, -2.0, 1.0]) == pytest.approx(0.0, abs=1e-15)


def test_pearson_r_agrees_with_both_independent_routes():
    rng = np.random.default_rng(5)
    for _ in range(50):
        n = int(rng.integers(3, 200))
        x = rng.normal(size=n)
        y = rng.normal(size=n) + rng.uniform(-1, 1) * x
        ours = pearson_r(x, y)
        assert abs(ours - pearson_r_reference(list(x), list(y))) < 1e-12
        assert abs(ours - float(scipy.stats.pearsonr(x, y)[0])) < 1e-12


def test_pearson_r_stays_clamped():
    rng = np.random.default_rng(8)
    for _ in range(200):
        x = rng.normal(size=5)
        r = pearson_r(x, 3.0 * x + 1.0)
        assert -1.0 <= r <= 1.0


def test_pearson_r_errors():
    with pytest.raises(LengthMismatch):
        pearson_r([1.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(TooFewSamples):
        pearson_r([1.0, 2.0], [2.0, 1.0])
    with pytest.raises(ZeroVariance):
        pearson_r([3.0, 3.0, 3.0], [1.0, 2.0, 3.0])
    with pytest.raises(ZeroVariance):
        pearson_r([1.0, 2.0, 3.0], [7.0, 7.0, 7.0])


@st.composite
def _paired_series(draw):
    n = draw(st.integers(3, 40))
    values = st.floats(-100.0, 100.0, allow_nan=False)
    x = draw(st.lists(values, min_size=n, max_size=n))
    y = draw(st.lists(values, min_size=n, max_size=n))
    return x, y


def _defined(x, y):
    try:
        return pearson_r(x, y)
    except ZeroVariance:
        assume(False)


@given(_paired_series())
def test_pearson_r_is_symmetric(pair):
    x, y = pair
    assert _defined(x, y) == _defined(y, x)


@given(_paired_series())
def test_pearson_r_flips_sign_with_one_series(pair):
    x, y = pair
    assert _defined([-v for v in x], y) == -_defined(x, y)


@given(_paired_series(), st.floats(0.5, 2.0), st.floats(-10.0, 10.0))
def test_pearson_r_is_affine_invariant(pair, scale, offset):
    x, y = pair
    assume(float(np.var(x)) > 1e-3 and float(np.var(y)) > 1e-3)
    base = _defined(x, y)
    moved = _defined([scale * v + offset for v in x], y)
    assert moved == pytest.approx(base, abs=1e-6)


# ----------------------------------------------------------------- p-values

def test_p_value_matches_the_t_distribution_oracle():
    # frozen spot values computed from the Student-t survival function
    assert p_value(0.5, 30) == pytest.approx(0.004899933667068092, abs=1e-12)
    assert p_value(0.113, 300) == pytest.approx(0.050546059115234354, abs=1e-12)
    assert p_value(-0.9, 10) == pytest.approx(0.00038715624999999926, abs=1e-12)
    assert p_value(0.03, 5) == pytest.approx(0.9618085440096382, abs=1e-12)


def test_p_value_matches_scipy_over_a_grid():
    worst = 0.0
    for n in (3, 4, 5, 10, 30, 100, 500, 2000):
        for r in (-0.9999, -0.95, -0.5, -0.1, -1e-4, 1e-4, 0.2, 0.65, 0.99, 0.9999):
            t = r * math.sqrt((n - 2) / (1.0 - r * r))
            ref = 2.0 * float(scipy.stats.t.sf(abs(t), n - 2))
            worst = max(worst, abs(p_value(r, n) - ref))
    assert worst < 1e-9


def test_p_value_special_cases():
    assert p_value(1.0, 50) == 0.0
    assert p_value(-1.0, 3) == 0.0
    assert p_value(0.0, 50) == 1.0
    with pytest.raises(TooFewSamples):
        p_value(0.5, 2)
    with pytest.raises(ValueError):
        p_value(1.5, 10)


@given(st.floats(0.0, 0.999), st.floats(0.0, 0.999), st.integers(3, 1000))
def test_p_value_decreases_with_effect_size(r1, r2, n):
    low, high = sorted((r1, r2))
    assert p_value(high, n) <= p_value(low, n) + 1e-12


@given(st.floats(-0.999, 0.999), st.integers(3, 1000))
def test_p_value_is_a_probability_and_sign_blind(r, n):
    p = p_value(r, n)
    assert 0.0 <= p <= 1.0
    assert p == p_value(-r, n)


# -------------------------------------------------------------------- stars

def test_stars_bands_and_boundaries():
    assert stars(0.0009) == "***"
    assert stars(0.001) == "*"       # boundary falls to the weaker band
    assert stars(0.049) == "*"
    assert stars(0.05) == ""
    assert stars(0.5) == ""


# ------------------------------------------------------------------- matrix

def _records(n=50, seed=12):
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n):
        base = rng.uniform(0.0, 0.3)
        moral = list(rng.uniform(0.0, 0.2, size=10))
        moral[0] = base                       # correlate care with posemo
        liwc = list(rng.uniform(0.0, 0.2, size=5))
        liwc[0] = base + rng.normal(scale=0.02)
        liwc[4] = 0.125                       # constant sadness column
        records.append(FeatureRecord(
            doc_id=f"d{i}", moral_scores=tuple(moral),
            zsc_features=tuple([0.5] * 10), liwc=tuple(liwc),
            weak_labels=tuple([-1] * 10), token_count=8))
    return records


def test_correlation_matrix_builds_the_full_grid():
    matrix = correlation_matrix(_records())
    assert matrix.n == 50
    assert set(matrix.cells) == {(c, d) for c in SELECTED_CATEGORIES
                                 for d in DIMENSIONS}
    planted = matrix.cell("positive emotion", DIMENSIONS[0])
    assert planted.r > 0.9 and planted.p < 0.001 and planted.stars == "***"


def test_correlation_matrix_marks_constant_series_undefined():
    matrix = correlation_matrix(_records())
    for dim in DIMENSIONS:
        cell = matrix.cell("sadness", dim)
        assert cell.undefined and cell.stars == ""
        assert cell.as_dict() == {"undefined": True, "n": 50}


def test_correlation_matrix_needs_documents():
    with pytest.raises(TooFewSamples):
        correlation_matrix(_records(n=2))


def test_correlation_matrix_dict_round_trip():
    matrix = correlation_matrix(_records())
    back = correlation_matrix_from_dict(matrix.as_dict())
    assert back.n == matrix.n
    for key, cell in matrix.cells.items():
        other = back.cells[key]
        assert other.undefined == cell.undefined
        if not cell.undefined:
            assert other.r == cell.r and other.p == cell.p


def test_correlation_cell_star_wiring():
    assert CorrelationCell(r=0.4, p=0.0005, n=100).stars == "***"
    assert CorrelationCell(r=0.4, p=0.01, n=100).stars == "*"
    assert CorrelationCell(r=0.01, p=0.8, n=100).stars == ""
