"""Mean failure rates, aging intensities, and interval averages.

For a hazard ``r`` with left support endpoint ``l`` and ``t > l``::

    A(t) = mean of r           over [l, t]     (arithmetic mean failure rate)
    G(t) = exp(mean of ln r)   over [l, t]     (geometric)
    H(t) = 1 / mean of 1/r     over [l, t]     (harmonic)
    L = r/A,  LG = r/G,  LH = r/H              (aging intensities)

When ``1/r`` is not integrable at ``l`` the harmonic quantities follow the
convention ``H = 0`` and ``LH = inf``; profiles carry a ``divergent`` flag
for those rows instead.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EmptyList, NonPositiveEntry, OutOfSupport
from .models import Exponential, HazardModel, Residual, closed_form_oracle
from .quadrature import RTOL, integrate, integrate_segments

DIVERGENT = "divergent"
CLAMPED = "clamped"
COLUMNS = ("t", "r", "afr", "gfr", "hfr", "ai", "gai", "hai")


def _log_rate(model):
    return lambda u: np.log(model._rate(u))


def _inv_rate(model):
    return lambda u: 1.0 / model._rate(u)


def _mean(model, f, lo, hi, rtol, check_divergence=False):
    res = integrate(f, lo, hi, rtol, check_divergence=check_divergence, breakpoints=model.breakpoints)
    return res.value / (hi - lo), res.divergent


def _upper(model, t):
    t = float(t)
    if not model.contains(t):
        raise OutOfSupport(f"t={t:g} is outside the support {model.describe_support()} of {model!r}")
    return t


def _oracle(model, name, t, exact):
    if not exact:
        return None
    return closed_form_oracle(model, name, t)


def afr(model: HazardModel, t: float, *, exact: bool = False, rtol: float = RTOL) -> float:
    """Arithmetic mean failure rate ``A(t)``."""
    t = _upper(model, t)
    value = _oracle(model, "A", t, exact)
    if value is not None:
        return value
    return float(_mean(model, model._rate, model.left, t, rtol)[0])


def gfr(model: HazardModel, t: float, *, exact: bool = False, rtol: float = RTOL) -> float:
    """Geometric mean failure rate ``G(t)``."""
    t = _upper(model, t)
    value = _oracle(model, "G", t, exact)
    if value is not None:
        return value
    return math.exp(_mean(model, _log_rate(model), model.left, t, rtol)[0])


def hfr(model: HazardModel, t: float, *, exact: bool = False, rtol: float = RTOL) -> float:
    """Harmonic mean failure rate ``H(t)``; ``0.0`` when ``1/r`` diverges."""
    t = _upper(model, t)
    value = _oracle(model, "H", t, exact)
    if value is not None:
        return value
    mean, divergent = _mean(model, _inv_rate(model), model.left, t, rtol, check_divergence=True)
    return 0.0 if divergent else 1.0 / float(mean)


def ai(model: HazardModel, t: float, **kw) -> float:
    """Arithmetic aging intensity ``L(t) = r(t) / A(t)``."""
    return model.hazard(t) / afr(model, t, **kw)


def gai(model: HazardModel, t: float, **kw) -> float:
    """Geometric aging intensity ``r(t) / G(t)``."""
    return model.hazard(t) / gfr(model, t, **kw)


def hai(model: HazardModel, t: float, **kw) -> float:
    """Harmonic aging intensity ``r(t) / H(t)``; ``inf`` when ``H`` diverges."""
    h = hfr(model, t, **kw)
    return math.inf if h == 0.0 else model.hazard(t) / h


@dataclass
class AgingProfile:
    """Aligned columns of hazard, mean failure rates, and intensities.

    ``r_sup``/``r_inf`` hold the extrema of ``r`` over ``[left, t]`` for
    each row (used by the bounds check); ``flags`` holds a set of tokens
    per row.
    """

    t: np.ndarray
    r: np.ndarray
    afr: np.ndarray
    gfr: np.ndarray
    hfr: np.ndarray
    ai: np.ndarray
    gai: np.ndarray
    hai: np.ndarray
    flags: list[frozenset[str]] = field(default_factory=list)
    r_sup: np.ndarray | None = None
    r_inf: np.ndarray | None = None

    def __len__(self):
        return self.t.size

    @property
    def divergent(self) -> np.ndarray:
        return np.array([DIVERGENT in f for f in self.flags], dtype=bool)

    @property
    def clamped(self) -> np.ndarray:
        return np.array([CLAMPED in f for f in self.flags], dtype=bool)

    def records(self) -> list[dict]:
        rows = []
        for i in range(len(self)):
            row = {}
            for name in COLUMNS:
                value = float(getattr(self, name)[i])
                row[name] = None if not math.isfinite(value) else value
            if DIVERGENT in self.flags[i]:
                row["hfr"] = row["hai"] = None
            row["flags"] = sorted(self.flags[i])
            rows.append(row)
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(COLUMNS) + ",flags\n")
        for row in self.records():
            cells = ["" if row[c] is None else _fmt(row[c]) for c in COLUMNS]
            buf.write(",".join(cells) + "," + ";".join(row["flags"]) + "\n")
        return buf.getvalue()

    def to_json(self) -> str:
        rows = [
            {k: (v if k == "flags" or v is None else float(_fmt(v))) for k, v in row.items()}
            for row in self.records()
        ]
        return json.dumps({"columns": list(COLUMNS), "rows": rows}, indent=1)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def profile(model: HazardModel, grid: Sequence[float], rtol: float = RTOL) -> AgingProfile:
    """Evaluate all six functionals of ``model`` on an increasing ``grid``.

    The integrals from ``left`` to ``grid[0]`` use the graded quadrature;
    later rows add increments over consecutive grid cells.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a non-empty 1-D sequence")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError("grid must be strictly increasing")
    model.check(grid)
    lo = model.left
    span = grid - lo
    edges = np.concatenate([grid, model.breakpoints])
    edges = np.unique(edges[(edges >= grid[0]) & (edges <= grid[-1])])
    at_grid = np.searchsorted(edges, grid)

    def cumulative(f, check_divergence=False):
        head = integrate(f, lo, grid[0], rtol, check_divergence=check_divergence, breakpoints=model.breakpoints)
        if head.divergent:
            return None
        cells, _ = integrate_segments(f, edges, rtol)
        running = np.concatenate([[0.0], np.cumsum(cells)])
        return head.value + running[at_grid]

    r = model._rate(grid)
    a = cumulative(model._rate) / span
    g = np.exp(cumulative(_log_rate(model)) / span)
    inv = cumulative(_inv_rate(model), check_divergence=True)
    if inv is None:
        h = np.zeros_like(grid)
        lh = np.full_like(grid, np.inf)
        flags = [frozenset({DIVERGENT})] * grid.size
    else:
        h = span / inv
        lh = r / h
        flags = [frozenset()] * grid.size
    r_sup, r_inf = _running_extrema(model, grid)
    return AgingProfile(grid, r, a, g, h, r / a, r / g, lh, flags, r_sup, r_inf)


def _running_extrema(model, grid, dense=16):
    """Max and min of ``r`` over ``[left, t_i]`` by dense sampling plus the left limit."""
    lo = model.left
    head = lo + (grid[0] - lo) * np.exp2(-np.arange(60.0))[::-1]
    samples = [model._rate(head[head > lo])]
    frac = np.linspace(0.0, 1.0, dense + 1)[1:]
    cells = grid[:-1, None] + (grid[1:] - grid[:-1])[:, None] * frac
    inner = model._rate(cells)
    first = samples[0]
    lim = model.left_limit
    top = max(float(first.max()), lim)
    bot = min(float(first.min()), lim)
    r_sup = np.empty(grid.size)
    r_inf = np.empty(grid.size)
    r_sup[0], r_inf[0] = top, bot
    for i in range(1, grid.size):
        top = max(top, float(inner[i - 1].max()))
        bot = min(bot, float(inner[i - 1].min()))
        r_sup[i], r_inf[i] = top, bot
    return r_sup, r_inf


# -- interval averages and residual life -----------------------------------


def _interval(model, s, t):
    s, t = float(s), float(t)
    if not t > 0:
        raise ValueError(f"interval length must be positive, got t={t}")
    if s < model.left or not model.contains(s + t):
        raise OutOfSupport(f"[{s:g}, {s + t:g}] is not inside the support {model.describe_support()}")
    return s, t


def interval_am(model: HazardModel, s: float, t: float, rtol: float = RTOL) -> float:
    """Mean of ``r`` over ``[s, s + t]``."""
    s, t = _interval(model, s, t)
    return float(_mean(model, model._rate, s, s + t, rtol)[0])


def interval_gm(model: HazardModel, s: float, t: float, rtol: float = RTOL) -> float:
    """Geometric mean of ``r`` over ``[s, s + t]``."""
    s, t = _interval(model, s, t)
    return math.exp(_mean(model, _log_rate(model), s, s + t, rtol)[0])


def interval_hm(model: HazardModel, s: float, t: float, rtol: float = RTOL) -> float:
    """Harmonic mean of ``r`` over ``[s, s + t]``; ``0.0`` if ``1/r`` diverges at ``s``."""
    s, t = _interval(model, s, t)
    mean, divergent = _mean(model, _inv_rate(model), s, s + t, rtol, check_divergence=True)
    return 0.0 if divergent else 1.0 / float(mean)


def specific_aging_factor(model: HazardModel, s: float, t: float, rtol: float = RTOL) -> float:
    """``S(t) S(s) / S(t + s)`` with ``S(x) = exp(-int_left^x r)``."""
    s, t = float(s), float(t)
    if s < 0 or t < 0:
        raise OutOfSupport("specific aging factor needs s, t >= 0")
    end = s + t
    if end > model.left and not model.contains(end):
        raise OutOfSupport(f"t + s = {end:g} is outside the support {model.describe_support()}")

    def cum(x):
        if x <= model.left:
            return 0.0
        return integrate(model._rate, model.left, x, rtol, breakpoints=model.breakpoints).value

    return math.exp(cum(end) - cum(s) - cum(t))


def residual(model: HazardModel, x: float) -> HazardModel:
    """Model of the residual lifetime given survival to ``x``."""
    x = float(x)
    if isinstance(model, Exponential):
        if x < 0:
            raise OutOfSupport(f"x={x:g} is outside the support of {model!r}")
        return model
    return Residual(model, x)


def discrete_mean(values: Sequence[float], kind: str) -> float:
    """Discrete arithmetic (``DAM``), geometric (``DGM``) or harmonic (``DHM``) mean."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise EmptyList("discrete mean of an empty list")
    if not np.all(np.isfinite(v)) or np.any(v <= 0):
        raise NonPositiveEntry(f"discrete means need positive finite entries, got {v.tolist()}")
    kind = kind.upper()
    if kind == "DAM":
        return float(v.mean())
    if kind == "DGM":
        return float(np.exp(np.log(v).mean()))
    if kind == "DHM":
        return float(v.size / np.sum(1.0 / v))
    raise ValueError(f"kind must be DAM, DGM or DHM, got {kind!r}")
