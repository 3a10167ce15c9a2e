"""Pairwise stochastic orders based on hazards, mean failure rates and intensities.

``X <= Y`` in a hazard-like order means X's statistic is *at least* Y's at
every grid time (X ages faster / fails sooner):

    FR   r_X >= r_Y              AFR  A_X >= A_Y        GFR  G_X >= G_Y
    HFR  H_X >= H_Y              AI   L_X >= L_Y        GAI  LG_X >= LG_Y
    HAI  LH_X >= LH_Y            ST   S_X <= S_Y        AF   r_X / r_Y nondecreasing

The mean-based orders are compared at the grid times.  FR and AF are
statements about ``r`` itself over the whole range ``(left, max grid]``,
so they are sampled on a denser grid (see :func:`hazard_grid`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DivergentFunctional, MixedSupports
from .functionals import profile
from .models import HazardModel
from .quadrature import integrate

ORDER_KINDS = ("FR", "AF", "ST", "AFR", "GFR", "HFR", "AI", "GAI", "HAI")
X_LE_Y, Y_LE_X, BOTH, NEITHER = "XleY", "YleX", "Both", "Neither"
ANALYTIC_TOL = 1e-9

_COLUMN = {"FR": "r", "AFR": "afr", "GFR": "gfr", "HFR": "hfr", "AI": "ai", "GAI": "gai", "HAI": "hai"}


@dataclass(frozen=True)
class OrderReport:
    kind: str
    direction: str
    witness_xy: float | None  # first time where X <= Y fails
    witness_yx: float | None  # first time where Y <= X fails
    grid: tuple[float, ...]

    def holds(self, direction: str) -> bool:
        return self.direction in (direction, BOTH)

    def to_dict(self):
        return {
            "kind": self.kind,
            "direction": self.direction,
            "witness_xy": self.witness_xy,
            "witness_yx": self.witness_yx,
        }


def hazard_grid(left: float, grid: np.ndarray, depth: int = 50, per_cell: int = 8) -> np.ndarray:
    """Dense times covering ``(left, grid[-1]]`` for the pointwise hazard orders.

    FR and AF constrain ``r`` on the whole averaging range, not only at the
    reporting grid, so their premises are sampled geometrically toward
    ``left`` and at ``per_cell`` points inside every grid cell.
    """
    head = left + (grid[0] - left) * np.exp2(-np.arange(depth, 0, -1.0))
    frac = np.linspace(0.0, 1.0, per_cell + 1)[:-1]
    cells = (grid[:-1, None] + np.diff(grid)[:, None] * frac).ravel()
    dense = np.concatenate([head[head > left], cells, grid[-1:]])
    return np.unique(dense)


class _Stats:
    """Profile plus cumulative hazard of one model on a grid, computed once."""

    def __init__(self, model: HazardModel, grid: np.ndarray):
        self.model = model
        self.profile = profile(model, grid)
        self.cumhaz = np.asarray(model.cumulative_hazard(grid), dtype=float)
        self.dense = hazard_grid(model.left, grid)
        self.dense_r = model._rate(self.dense)

    def column(self, kind):
        if kind == "ST":
            return self.cumhaz
        return getattr(self.profile, _COLUMN[kind])


def _prepare(x, y, grid):
    if x.left != y.left:
        raise MixedSupports(f"models start at different times ({x.left:g} vs {y.left:g})")
    grid = np.asarray(grid, dtype=float)
    x.check(grid)
    y.check(grid)
    return grid


def _first_failure(ok, grid):
    return None if ok.all() else float(grid[np.argmin(ok)])


def _direction(ok_xy, ok_yx):
    if ok_xy and ok_yx:
        return BOTH
    if ok_xy:
        return X_LE_Y
    if ok_yx:
        return Y_LE_X
    return NEITHER


def _report(kind, sx: _Stats, sy: _Stats, grid, tol):
    if kind in ("FR", "AF"):
        where = sx.dense
        a, b = sx.dense_r, sy.dense_r
        if kind == "FR":
            slack = tol * np.maximum(a, b)
            ok_xy, ok_yx = a >= b - slack, b >= a - slack
        else:
            # log-ratio steps: the ratio may be unbounded near ``left``, so a
            # global scale would hide genuine reversals later on
            d = np.diff(np.log(a) - np.log(b))
            ok_xy = np.concatenate([[True], d >= -tol])
            ok_yx = np.concatenate([[True], d <= tol])
        wxy, wyx = _first_failure(ok_xy, where), _first_failure(ok_yx, where)
        return OrderReport(kind, _direction(wxy is None, wyx is None), wxy, wyx, tuple(grid.tolist()))
    else:
        if kind in ("HFR", "HAI") and (sx.profile.divergent.any() or sy.profile.divergent.any()):
            raise DivergentFunctional(f"{kind} order is undefined: a harmonic mean diverges")
        a, b = sx.column(kind), sy.column(kind)
        slack = tol * np.maximum(np.abs(a), np.abs(b))
        ok_xy = a >= b - slack
        ok_yx = b >= a - slack
    wxy, wyx = _first_failure(ok_xy, grid), _first_failure(ok_yx, grid)
    return OrderReport(kind, _direction(wxy is None, wyx is None), wxy, wyx, tuple(grid.tolist()))


def check_order(x: HazardModel, y: HazardModel, kind: str, grid, tol: float = ANALYTIC_TOL) -> OrderReport:
    """Evaluate one order between ``x`` and ``y`` on ``grid``."""
    return check_orders(x, y, [kind], grid, tol)[kind]


def check_orders(x, y, kinds: Iterable[str] = ORDER_KINDS, grid=None, tol: float = ANALYTIC_TOL):
    """Reports for several order kinds, sharing one profile per model."""
    kinds = list(kinds)
    for kind in kinds:
        if kind not in ORDER_KINDS:
            raise ValueError(f"unknown order {kind!r}; expected one of {ORDER_KINDS}")
    grid = _prepare(x, y, grid)
    sx, sy = _Stats(x, grid), _Stats(y, grid)
    return {kind: _report(kind, sx, sy, grid, tol) for kind in kinds}


@dataclass
class ImplicationReport:
    reports: dict[str, OrderReport]
    violations: list[tuple[str, str, float | None]]  # (implication, direction, offending time)
    skipped: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self):
        return {
            "ok": self.ok,
            "orders": {k: r.to_dict() for k, r in self.reports.items()},
            "violations": [list(v) for v in self.violations],
            "skipped": self.skipped,
        }


def verify_implications(x: HazardModel, y: HazardModel, grid, tol: float = ANALYTIC_TOL) -> ImplicationReport:
    """Check FR => {AFR, GFR, HFR}, AF => GAI and AFR <=> ST in both directions.

    A harmonic order that cannot be evaluated (divergent ``H``) is listed
    in ``skipped`` and its implications are not checked.
    """
    grid = _prepare(x, y, grid)
    sx, sy = _Stats(x, grid), _Stats(y, grid)
    reports, skipped = {}, []
    for kind in ORDER_KINDS:
        try:
            reports[kind] = _report(kind, sx, sy, grid, tol)
        except DivergentFunctional:
            skipped.append(kind)
    violations = []

    def implies(premise, conclusion):
        if premise not in reports or conclusion not in reports:
            return
        p, c = reports[premise], reports[conclusion]
        for direction, witness in ((X_LE_Y, c.witness_xy), (Y_LE_X, c.witness_yx)):
            if p.holds(direction) and not c.holds(direction):
                violations.append((f"{premise}=>{conclusion}", direction, witness))

    for conclusion in ("AFR", "GFR", "HFR"):
        implies("FR", conclusion)
    implies("AF", "GAI")
    implies("AFR", "ST")
    implies("ST", "AFR")
    return ImplicationReport(reports, violations, skipped)


def gai_integral_form(x: HazardModel, y: HazardModel, grid) -> np.ndarray:
    """Per-point test of ``ln(r_X/r_Y)(t) >= mean of ln(r_X/r_Y)`` over ``[left, t]``.

    Holding at every grid point is equivalent to ``X <= Y`` in the GAI order.
    """
    grid = _prepare(x, y, grid)
    lo = x.left

    def log_ratio(u):
        return np.log(x._rate(u)) - np.log(y._rate(u))

    bps = tuple(sorted(set(x.breakpoints) | set(y.breakpoints)))
    means = np.array([integrate(log_ratio, lo, t, breakpoints=bps).value / (t - lo) for t in grid])
    here = log_ratio(grid)
    return here >= means - ANALYTIC_TOL * np.maximum(1.0, np.abs(means))
