import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agingmeans import (
    ErlangLike,
    Exponential,
    Pareto,
    Rayleigh,
    Tabulated,
    TruncatedLogWeibull,
    Uniform,
    Weibull,
    check_bounds,
    classify,
    closed_form_oracle,
    profile,
)
from agingmeans.classification import (
    CONSTANT,
    DECREASING,
    INCREASING,
    NON_MONOTONE,
    intensity_class,
    monotonicity,
)
from agingmeans.errors import DivergentFunctional

from .conftest import CATALOG


def labels(model, grid, targets=("FR", "AFR", "GFR", "HFR", "AI", "GAI", "HAI")):
    return {v.target: v.label for v in classify(model, grid, targets=targets)}


def test_pareto_is_decreasing_everywhere():
    got = labels(Pareto(2, 1), np.linspace(1.05, 10, 32))
    for target in ("FR", "GAI", "HAI", "GFR"):
        assert got[target] == DECREASING


def test_uniform_intensities():
    grid = np.linspace(0.02, 1.98, 32)
    got = labels(Uniform(0, 2), grid)
    assert got["GAI"] == INCREASING and got["HAI"] == INCREASING
    # The AI closed form is increasing too (see the decisions ledger); cross-check it directly.
    oracle = np.array([closed_form_oracle(Uniform(0, 2), "L", t) for t in grid])
    assert np.all(np.diff(oracle) > 0)
    assert got["AI"] == INCREASING


def test_exponential_all_constant():
    assert set(labels(Exponential(1), np.geomspace(0.1, 10, 32)).values()) == {CONSTANT}


def test_rayleigh_increasing_intensities():
    got = labels(Rayleigh(1, 1), np.geomspace(0.05, 10, 32))
    assert got["AI"] == got["GAI"] == got["HAI"] == INCREASING


def test_weibull_intensities_constant():
    got = labels(Weibull(0.5, 1.5), np.geomspace(0.01, 10, 32))
    assert got["AI"] == got["GAI"] == got["HAI"] == CONSTANT
    assert got["FR"] == got["AFR"] == got["GFR"] == got["HFR"] == INCREASING


def test_divergent_harmonic_targets_raise():
    grid = np.geomspace(0.1, 5, 20)
    with pytest.raises(DivergentFunctional):
        classify(ErlangLike(1), grid)
    got = labels(ErlangLike(1), grid, targets=("FR", "AFR", "GFR", "AI", "GAI"))
    assert got["FR"] == INCREASING and got["GFR"] == INCREASING


def test_grid_size_and_tol_validation():
    with pytest.raises(ValueError):
        classify(Exponential(1), np.linspace(0.1, 1, 8))
    with pytest.raises(ValueError):
        classify(Exponential(1), np.linspace(0.1, 1, 20), tol=0)
    with pytest.raises(ValueError):
        classify(Exponential(1), np.linspace(0.1, 1, 20), targets=["XYZ"])


def test_non_monotone_witness():
    bathtub = Tabulated([0.0, 1.0, 2.0, 3.0], [3.0, 1.0, 1.0, 3.0])
    grid = np.linspace(0.1, 2.9, 30)
    (v,) = classify(bathtub, grid, targets=["FR"])
    assert v.label == NON_MONOTONE
    up, down = v.witness
    assert up > down  # falls first, rises later
    assert v.to_dict()["witness"] == [up, down]


def test_monotonicity_helper():
    g = np.arange(5.0)
    assert monotonicity([1, 2, 3, 4, 5], g, 1e-9)[0] == INCREASING
    assert monotonicity([5, 4, 3, 2, 1], g, 1e-9)[0] == DECREASING
    assert monotonicity([2, 2, 2, 2, 2], g, 1e-9) == (CONSTANT, None)
    label, witness = monotonicity([1, 3, 2, 4, 5], g, 1e-9)
    assert label == NON_MONOTONE and witness == (0.0, 1.0)
    # noise within tolerance never counts
    assert monotonicity([1, 2, 2 - 1e-12, 3, 4], g, 1e-9)[0] == INCREASING


def test_intensity_class_helper():
    g = np.arange(3.0)
    assert intensity_class([1.0, 1.2, 1.5], g, 1e-7)[0] == INCREASING
    assert intensity_class([0.5, 0.9, 1.0], g, 1e-7)[0] == DECREASING
    assert intensity_class([1.0, 1.0, 1.0], g, 1e-7)[0] == CONSTANT
    assert intensity_class([0.9, 1.1, 1.0], g, 1e-7)[0] == NON_MONOTONE


# -- bounds ----------------------------------------------------------------------------


def test_bounds_exponential_equality():
    rep = check_bounds(profile(Exponential(3), np.geomspace(0.1, 10, 16)))
    assert rep.ok and rep.equality.all()


def test_bounds_weibull_constants():
    p = profile(Weibull(0.5, 1.5), np.geomspace(0.01, 10, 16))
    rep = check_bounds(p)
    assert rep.ok and not rep.equality.any()
    np.testing.assert_allclose(p.gai, math.exp(0.5), rtol=1e-9)
    assert np.all((p.ai < p.gai) & (p.gai < p.hai))


def test_bounds_erlang_ifr():
    p = profile(ErlangLike(1), np.geomspace(0.01, 10, 32))
    rep = check_bounds(p)
    assert rep.ok and rep.fr_label == INCREASING
    assert np.all(p.gai >= 1 - 1e-7)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_bounds_hold_on_catalog(name):
    model, grid = CATALOG[name]
    rep = check_bounds(profile(model, grid))
    assert rep.ok, rep.to_dict()


def test_bounds_report_detects_violation():
    p = profile(Rayleigh(1, 1), np.geomspace(0.1, 3, 16))
    p.gai[5] = 0.5 * p.ai[5]  # break L <= LG on one row
    rep = check_bounds(p)
    assert not rep.ok and not rep.am_gm[5] and rep.am_gm.sum() == 15


IFR_MODELS = st.one_of(
    st.builds(Weibull, st.floats(0.1, 10), st.floats(1.0, 1.9)),
    st.builds(Rayleigh, st.floats(0, 5), st.floats(0.1, 5)),
    st.builds(ErlangLike, st.floats(0.1, 10)),
    st.builds(TruncatedLogWeibull, st.floats(-2, 2), st.floats(0.2, 5)),
)


@settings(max_examples=30, deadline=None)
@given(model=IFR_MODELS)
def test_ifr_never_decreasing_means(model):
    got = labels(model, np.geomspace(0.05, 3, 20), targets=("AFR", "GFR"))
    assert got["AFR"] != DECREASING and got["GFR"] != DECREASING


@settings(max_examples=20, deadline=None)
@given(a=st.floats(0.1, 5), b=st.floats(0.1, 5), c=st.floats(0.1, 10))
def test_intensity_labels_scale_free(a, b, c):
    grid = np.geomspace(0.05, 3, 20)
    base = labels(Rayleigh(a, b), grid, targets=("GAI", "HAI"))
    scaled = labels(Rayleigh(c * a, c * b), grid, targets=("GAI", "HAI"))
    assert base == scaled
