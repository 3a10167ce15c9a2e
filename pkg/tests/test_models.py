import math

import mpmath
import numpy as np
import pytest
from scipy import integrate as sci

from agingmeans import (
    Composite,
    ErlangLike,
    Exponential,
    Pareto,
    Rayleigh,
    Residual,
    Tabulated,
    TruncatedLogWeibull,
    Uniform,
    Weibull,
    closed_form_oracle,
    hazard,
    parse_model,
    random_model,
)
from agingmeans.errors import NonPositiveRate, OutOfSupport, ParseError

from .conftest import CATALOG


# -- hazard values ------------------------------------------------------------


def test_hazard_examples():
    assert hazard(Exponential(2.0), 5.0) == 2.0
    assert hazard(Weibull(0.5, 1.5), 4.0) == pytest.approx(1.5)
    assert hazard(ErlangLike(1.0), 1.0) == pytest.approx(0.5)
    with pytest.raises(OutOfSupport):
        hazard(Uniform(0.0, 2.0), 2.0)


def test_hazard_vectorised_and_support():
    m = Pareto(2.0, 1.0)
    np.testing.assert_allclose(m.hazard(np.array([1.5, 2.0, 4.0])), [4 / 3, 1.0, 0.5])
    with pytest.raises(OutOfSupport):
        m.hazard(1.0)
    with pytest.raises(OutOfSupport):
        Exponential(1.0).hazard(0.0)


def test_weibull_shape_one_is_exponential():
    t = np.geomspace(1e-3, 50, 40)
    np.testing.assert_allclose(Weibull(0.7, 1.0).hazard(t), Exponential(0.7).hazard(t), rtol=1e-15)


def test_composite_is_sum():
    parts = (Rayleigh(1, 1), Weibull(0.5, 1.5), Exponential(2))
    t = np.geomspace(0.01, 5, 30)
    np.testing.assert_allclose(Composite(parts).hazard(t), sum(p.hazard(t) for p in parts), rtol=1e-14)


def test_composite_support_is_intersection():
    c = Composite((Uniform(0.0, 2.0), Exponential(1.0)))
    assert c.support == (0.0, 2.0)
    assert c.hazard(1.0) == pytest.approx(2.0)


def test_residual_shifts_hazard():
    m = Weibull(0.5, 2.0)
    res = Residual(m, 1.0)
    assert res.hazard(0.5) == pytest.approx(m.hazard(1.5))
    assert res.left == 0.0


# -- cumulative hazard and survival --------------------------------------------


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_cumulative_hazard_against_scipy(name):
    model, grid = CATALOG[name]
    for t in grid[::9]:
        expect, _ = sci.quad(lambda u: float(model._rate(np.asarray(u))), model.left, t, limit=200)
        assert model.cumulative_hazard(t) == pytest.approx(expect, rel=1e-8)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_hazard_is_minus_log_survival_derivative(name):
    model, grid = CATALOG[name]
    t = grid[10:50:7]
    h = 1e-6 * t
    deriv = -(np.log(model.survival(t + h)) - np.log(model.survival(t - h))) / (2 * h)
    np.testing.assert_allclose(deriv, model.hazard(t), rtol=1e-6)


def test_survival_at_left_is_one():
    assert Pareto(2, 1).survival(1.0) == 1.0
    assert Weibull(1, 2).survival(0.0) == 1.0


# -- tabulated ----------------------------------------------------------------


def test_tabulated_linear_interpolation_and_cumulative():
    m = Tabulated([0.0, 1.0, 3.0], [1.0, 3.0, 2.0])
    assert m.hazard(0.5) == pytest.approx(2.0)
    assert m.hazard(3.0) == pytest.approx(2.0)
    assert m.cumulative_hazard(3.0) == pytest.approx(2.0 + 5.0)
    with pytest.raises(OutOfSupport):
        m.hazard(3.5)


def test_tabulated_rejects_nonpositive_rate():
    with pytest.raises(NonPositiveRate):
        Tabulated([0.0, 1.0], [1.0, 0.0])


def test_tabulated_arrays_are_frozen():
    m = Tabulated([0.0, 1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        m.rates[0] = 5.0


# -- closed forms ---------------------------------------------------------------


def test_oracle_examples():
    assert closed_form_oracle(Uniform(0, 2), "LH", 1.0) == pytest.approx(1.5)
    assert closed_form_oracle(Weibull(0.5, 1.5), "LG", 3.7) == pytest.approx(1.648721270700128)
    assert closed_form_oracle(Pareto(2, 1), "LH", 3.0) == pytest.approx(2 / 3)
    assert closed_form_oracle(Rayleigh(1, 1), "LG", 1.0) == pytest.approx(math.e / 2)


def test_oracle_unavailable_and_divergent():
    assert closed_form_oracle(Tabulated([0, 1], [1, 2]), "A", 0.5) is None
    assert closed_form_oracle(TruncatedLogWeibull(0, 1), "A", 0.5) is None
    assert closed_form_oracle(Weibull(1, 2.0), "LH", 1.0) == math.inf
    assert closed_form_oracle(Weibull(1, 2.0), "H", 1.0) == 0.0
    assert closed_form_oracle(ErlangLike(1), "LH", 1.0) == math.inf
    with pytest.raises(ValueError):
        closed_form_oracle(Weibull(1, 1), "Q", 1.0)
    with pytest.raises(OutOfSupport):
        closed_form_oracle(Uniform(0, 2), "A", 2.5)


def _mp_means(model, t):
    """A, G, H by 30-digit quadrature, independent of both oracle and package quadrature."""
    mpmath.mp.dps = 30
    lo = model.left
    r = lambda u: mpmath.mpf(float(model._rate(np.asarray(float(u)))))
    a = mpmath.quad(r, [lo, t]) / (t - lo)
    g = mpmath.exp(mpmath.quad(lambda u: mpmath.log(r(u)), [lo, t]) / (t - lo))
    h = (t - lo) / mpmath.quad(lambda u: 1 / r(u), [lo, t])
    return float(a), float(g), float(h)


CLOSED_CASES = [
    (Exponential(1.7), 2.3),
    (Weibull(0.5, 1.5), 0.7),
    (Weibull(2.0, 0.6), 3.0),
    (ErlangLike(1.0), 1.3),
    (Uniform(0.0, 2.0), 1.2),
    (Uniform(0.5, 3.0), 2.0),
    (Rayleigh(1.0, 1.0), 2.0),
    (Rayleigh(0.3, 2.0), 0.8),
    (Pareto(2.0, 1.0), 3.0),
    (Pareto(0.7, 2.0), 5.5),
    (TruncatedLogWeibull(0.0, 1.0), 1.5),
]


@pytest.mark.parametrize("model, t", CLOSED_CASES, ids=repr)
def test_closed_forms_against_mpmath(model, t):
    a, g, h = _mp_means(model, t)
    r = float(model._rate(np.asarray(t)))
    expect = {"A": a, "G": g, "H": h, "L": r / a, "LG": r / g, "LH": r / h}
    if isinstance(model, ErlangLike):
        expect.pop("H"), expect.pop("LH")
    for name, value in expect.items():
        got = closed_form_oracle(model, name, t)
        if got is None:
            continue
        assert got == pytest.approx(value, rel=1e-9), name


def test_tlw_geometric_identity():
    m = TruncatedLogWeibull(0.4, 0.8)
    for t in (0.1, 1.0, 3.0):
        assert closed_form_oracle(m, "G", t) == pytest.approx(math.sqrt(m.hazard(t) * m.r0))


def test_rayleigh_zero_intercept_limits():
    m = Rayleigh(0.0, 3.0)
    assert closed_form_oracle(m, "L", 2.0) == pytest.approx(2.0)
    assert closed_form_oracle(m, "LG", 2.0) == pytest.approx(math.e)
    assert closed_form_oracle(m, "LH", 2.0) == math.inf


# -- spec grammar -----------------------------------------------------------------


@pytest.mark.parametrize(
    "spec, expect",
    [
        ("weibull:alpha=0.5,beta=1.5", Weibull(0.5, 1.5)),
        ("exp:lambda=2", Exponential(2.0)),
        ("Exponential:rate=3", Exponential(3.0)),
        ("erlang:lambda=1", ErlangLike(1.0)),
        ("uniform:a=0,b=2", Uniform(0.0, 2.0)),
        ("rayleigh:a=1, b=1", Rayleigh(1.0, 1.0)),
        ("pareto:a=2,k=1", Pareto(2.0, 1.0)),
        ("tlw:a=0,b=1", TruncatedLogWeibull(0.0, 1.0)),
    ],
)
def test_parse_model(spec, expect):
    assert parse_model(spec) == expect


@pytest.mark.parametrize(
    "spec",
    ["gamma:k=1", "weibull:alpha=1", "weibull:alpha=x,beta=1", "weibull:alpha=-1,beta=1", "exp:lambda", "tabulated:x=1"],
)
def test_parse_model_errors(spec):
    with pytest.raises(ParseError):
        parse_model(spec)


def test_parse_tabulated(tmp_path):
    path = tmp_path / "h.csv"
    path.write_text("t,r\n0,1\n1,2\n2,2.5\n")
    m = parse_model(f"tabulated:file={path}")
    assert m.hazard(1.5) == pytest.approx(2.25)
    path.write_text("0,1\n1,2\n")
    assert parse_model(f"tabulated:file={path}").hazard(0.5) == pytest.approx(1.5)
    with pytest.raises(ParseError):
        parse_model(f"tabulated:file={tmp_path / 'missing.csv'}")


def test_random_model_ranges(rng):
    for _ in range(200):
        m = random_model(rng)
        if isinstance(m, Weibull):
            assert 0.5 <= m.beta <= 1.9 and 0.1 <= m.alpha <= 10
        assert m.left >= 0


def test_models_are_immutable():
    m = Weibull(1, 2)
    with pytest.raises(AttributeError):
        m.alpha = 3
