"""Aging-class detection on a finite grid and intensity bound checks.

Monotonicity of ``r`` and of the intensities is read from successive
differences.  Monotonicity of the mean failure rates is read from the
intensities instead: ``A``, ``G`` and ``H`` increase exactly where
``L``, ``LG`` and ``LH`` stay at or above one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DivergentFunctional
from .functionals import AgingProfile, profile
from .models import HazardModel

TARGETS = ("FR", "AFR", "GFR", "HFR", "AI", "GAI", "HAI")
INCREASING = "Increasing"
DECREASING = "Decreasing"
CONSTANT = "Constant"
NON_MONOTONE = "NonMonotone"
UNDETERMINED = "Undetermined"

ANALYTIC_TOL = 1e-7
ESTIMATED_TOL = 0.02
MIN_GRID = 16

_SERIES = {"FR": "r", "AI": "ai", "GAI": "gai", "HAI": "hai"}
_MEAN_VIA = {"AFR": "ai", "GFR": "gai", "HFR": "hai"}


@dataclass(frozen=True)
class ClassVerdict:
    target: str
    label: str
    witness: tuple[float, float] | None
    tolerance: float

    def to_dict(self):
        return {
            "target": self.target,
            "label": self.label,
            "witness": None if self.witness is None else list(self.witness),
            "tolerance": self.tolerance,
        }


def monotonicity(values, grid, tol):
    """Label a sampled sequence as Increasing, Decreasing, Constant, ...

    Differences are scaled by ``max |values|``.  Steps within ``tol`` of
    zero never count against a direction.  A sequence with steps beyond
    ``tol`` in both directions is NonMonotone, and the witness holds the
    start times of the first rising and first falling step.
    """
    v = np.asarray(values, dtype=float)
    grid = np.asarray(grid, dtype=float)
    scale = float(np.max(np.abs(v))) or 1.0
    d = np.diff(v) / scale
    up, down = d > tol, d < -tol
    if np.sum(np.abs(d)) <= tol:
        return CONSTANT, None
    if up.any() and down.any():
        return NON_MONOTONE, (float(grid[np.argmax(up)]), float(grid[np.argmax(down)]))
    if up.any() or (not down.any() and np.all(d >= 0)):
        return INCREASING, None
    if down.any() or np.all(d <= 0):
        return DECREASING, None
    return UNDETERMINED, None


def intensity_class(values, grid, tol):
    """Class of a mean failure rate from its intensity: ``>= 1`` increasing, ``<= 1`` decreasing."""
    v = np.asarray(values, dtype=float)
    rising = bool(np.min(v) >= 1.0 - tol)
    falling = bool(np.max(v) <= 1.0 + tol)
    if rising and falling:
        return CONSTANT, None
    if rising:
        return INCREASING, None
    if falling:
        return DECREASING, None
    return NON_MONOTONE, (float(grid[np.argmin(v)]), float(grid[np.argmax(v)]))


def classify_profile(prof: AgingProfile, tol: float = ANALYTIC_TOL, targets: Sequence[str] = TARGETS):
    """Verdicts for each target from an already computed profile."""
    out = []
    for target in targets:
        if target not in TARGETS:
            raise ValueError(f"unknown target {target!r}; expected one of {TARGETS}")
        if target in ("HFR", "HAI") and prof.divergent.any():
            raise DivergentFunctional(f"{target} is undefined: 1/r is not integrable at the left endpoint")
        if target in _SERIES:
            label, witness = monotonicity(getattr(prof, _SERIES[target]), prof.t, tol)
        else:
            label, witness = intensity_class(getattr(prof, _MEAN_VIA[target]), prof.t, tol)
        out.append(ClassVerdict(target, label, witness, tol))
    return out


def classify(model: HazardModel, grid, tol: float = ANALYTIC_TOL, targets: Sequence[str] = TARGETS):
    """Aging-class verdicts for ``model`` on ``grid`` (at least 16 points).

    Raises :class:`DivergentFunctional` when HFR or HAI is requested but
    ``1/r`` is not integrable; pass ``targets`` without them in that case.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size < MIN_GRID:
        raise ValueError(f"classification needs at least {MIN_GRID} grid points, got {grid.size}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    return classify_profile(profile(model, grid), tol, targets)


@dataclass
class BoundsReport:
    """Per-row results of the intensity chain and mean-ordering checks."""

    t: np.ndarray
    lower: np.ndarray  # r / sup r <= L
    am_gm: np.ndarray  # L <= LG
    gm_hm: np.ndarray  # LG <= LH
    upper: np.ndarray  # LH <= r / inf r
    means: np.ndarray  # H <= G <= A
    equality: np.ndarray  # every link of the chain tight
    fr_label: str
    intensity: np.ndarray  # LG, LH on the side of 1 implied by the FR class

    @property
    def chain(self) -> np.ndarray:
        return self.lower & self.am_gm & self.gm_hm & self.upper

    @property
    def ok(self) -> bool:
        return bool(np.all(self.chain & self.means & self.intensity))

    def to_dict(self):
        keys = ("lower", "am_gm", "gm_hm", "upper", "means", "equality", "intensity")
        out = {"t": self.t.tolist(), "fr_label": self.fr_label, "ok": self.ok}
        out.update({k: getattr(self, k).tolist() for k in keys})
        return out


def check_bounds(prof: AgingProfile, tol: float = ANALYTIC_TOL) -> BoundsReport:
    """Check the chain ``r/sup r <= L <= LG <= LH <= r/inf r`` row by row.

    The extrema are taken over ``[left, t]`` for each row (the profile's
    ``r_sup``/``r_inf`` columns, falling back to the running extrema of
    the sampled ``r`` column).  Rows flagged divergent have ``LH = inf``
    and the upper link is not applicable there.  Comparisons allow a
    relative slack of ``tol``.
    """
    r = prof.r
    r_sup = prof.r_sup if prof.r_sup is not None else np.maximum.accumulate(r)
    r_inf = prof.r_inf if prof.r_inf is not None else np.minimum.accumulate(r)
    div = prof.divergent

    def le(a, b):
        with np.errstate(invalid="ignore"):
            return (a <= b + tol * np.abs(b)) | (a == b)

    with np.errstate(divide="ignore"):
        low_bound = np.where(np.isinf(r_sup), 0.0, r / r_sup)
        up_bound = np.where(r_inf == 0.0, np.inf, r / r_inf)
    lower = le(low_bound, prof.ai)
    am_gm = le(prof.ai, prof.gai)
    gm_hm = le(prof.gai, prof.hai)
    upper = le(prof.hai, up_bound) | div
    means = le(prof.hfr, prof.gfr) & le(prof.gfr, prof.afr)

    def close(a, b):
        with np.errstate(invalid="ignore"):
            return np.abs(a - b) <= tol * np.maximum(np.abs(a), np.abs(b))

    equality = close(prof.ai, prof.gai) & close(prof.gai, prof.hai) & close(prof.ai, low_bound) & ~div
    equality &= close(prof.hai, up_bound)

    fr_label, _ = monotonicity(r, prof.t, tol)
    if fr_label in (INCREASING, CONSTANT):
        intensity = (prof.gai >= 1.0 - tol) & (prof.hai >= 1.0 - tol)
    elif fr_label == DECREASING:
        intensity = (prof.gai <= 1.0 + tol) & (prof.hai <= 1.0 + tol)
    else:
        intensity = np.ones(r.size, dtype=bool)
    if fr_label == CONSTANT:
        intensity &= (prof.gai <= 1.0 + tol) & (prof.hai <= 1.0 + tol)
    return BoundsReport(prof.t, lower, am_gm, gm_hm, upper, means, equality, fr_label, intensity)
