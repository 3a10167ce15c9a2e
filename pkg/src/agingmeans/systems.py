"""Series systems of independent components and their mean-rate bounds."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MixedSupports
from .functionals import profile
from .models import Composite, HazardModel, random_model

BOUND_NAMES = ("gai_max", "gfr_dgm", "hfr_dhm", "chain", "superadditive_g", "mediant")
SYSTEM_KINDS = ("exponential", "weibull", "rayleigh", "tlw")


@dataclass(frozen=True)
class SeriesSystem:
    components: tuple[HazardModel, ...]
    composite: Composite

    @property
    def n(self) -> int:
        return len(self.components)


def series(components) -> SeriesSystem:
    """Series system of independent components; the system hazard is the sum."""
    components = tuple(components)
    if not components:
        raise ValueError("a series system needs at least one component")
    lefts = {c.left for c in components}
    if len(lefts) > 1:
        raise MixedSupports(f"components start at different times: {sorted(lefts)}")
    return SeriesSystem(components, Composite(components))


@dataclass
class SeriesBoundsReport:
    """Per-grid-point booleans for each bound family, keyed by ``BOUND_NAMES``.

    Families listed in ``skipped`` could not be evaluated because a
    component's harmonic mean diverges; their arrays are all ``True``.
    """

    t: np.ndarray
    checks: dict[str, np.ndarray]
    skipped: set[str] = field(default_factory=set)

    @property
    def ok(self) -> bool:
        return all(bool(v.all()) for v in self.checks.values())

    def violations(self):
        return {k: self.t[~v].tolist() for k, v in self.checks.items() if not v.all()}

    def to_dict(self):
        return {
            "t": self.t.tolist(),
            "ok": self.ok,
            "checks": {k: v.tolist() for k, v in self.checks.items()},
            "skipped": sorted(self.skipped),
        }


def verify_series_bounds(system: SeriesSystem, grid, rtol: float = 1e-8) -> SeriesBoundsReport:
    """Check the series-system bounds at every grid point.

    * ``gai_max``: system ``LG`` at most the largest component ``LG``
    * ``gfr_dgm``: ``G_sys >= n DGM{G_i}``
    * ``hfr_dhm``: ``H_sys >= n DHM{H_i}``
    * ``chain``: ``n DAM{A_i} = A_sys >= G_sys >= H_sys >= n DHM{H_i}``
    * ``superadditive_g``: ``G_sys >= sum G_i``
    * ``mediant``: ``min r_i/G_i <= sum r_i / sum G_i <= max r_i/G_i``

    Inequalities allow a relative slack of ``rtol``; the additivity of
    ``A`` is checked to the same relative tolerance.
    """
    grid = np.asarray(grid, dtype=float)
    n = system.n
    sys_prof = profile(system.composite, grid)
    parts = [profile(c, grid) for c in system.components]
    r = np.array([p.r for p in parts])
    A = np.array([p.afr for p in parts])
    G = np.array([p.gfr for p in parts])
    H = np.array([p.hfr for p in parts])
    LG = np.array([p.gai for p in parts])

    def ge(a, b):
        return a >= b - rtol * np.abs(b)

    checks = {}
    checks["gai_max"] = ge(LG.max(axis=0), sys_prof.gai)
    n_dgm = n * np.exp(np.log(G).mean(axis=0))
    checks["gfr_dgm"] = ge(sys_prof.gfr, n_dgm)
    skipped = set()
    component_divergent = np.any(H == 0.0, axis=0)
    if component_divergent.any():
        skipped |= {"hfr_dhm", "chain"}
        checks["hfr_dhm"] = np.ones(grid.size, dtype=bool)
        checks["chain"] = np.ones(grid.size, dtype=bool)
    else:
        n_dhm = n * n / np.sum(1.0 / H, axis=0)
        checks["hfr_dhm"] = ge(sys_prof.hfr, n_dhm)
        additive = np.abs(A.sum(axis=0) - sys_prof.afr) <= rtol * sys_prof.afr
        checks["chain"] = (
            additive & ge(sys_prof.afr, sys_prof.gfr) & ge(sys_prof.gfr, sys_prof.hfr) & ge(sys_prof.hfr, n_dhm)
        )
    checks["superadditive_g"] = ge(sys_prof.gfr, G.sum(axis=0))
    ratio = r / G
    pooled = r.sum(axis=0) / G.sum(axis=0)
    checks["mediant"] = ge(pooled, ratio.min(axis=0)) & ge(ratio.max(axis=0), pooled)
    return SeriesBoundsReport(grid, checks, skipped)


def theorem_gaps(system: SeriesSystem, grid) -> dict[str, np.ndarray]:
    """Relative gaps ``G_sys / (n DGM) - 1`` and ``H_sys / (n DHM) - 1``.

    Both vanish for systems of identical components.
    """
    grid = np.asarray(grid, dtype=float)
    n = system.n
    sys_prof = profile(system.composite, grid)
    parts = [profile(c, grid) for c in system.components]
    G = np.array([p.gfr for p in parts])
    H = np.array([p.hfr for p in parts])
    return {
        "gfr": sys_prof.gfr / (n * np.exp(np.log(G).mean(axis=0))) - 1.0,
        "hfr": sys_prof.hfr / (n * n / np.sum(1.0 / H, axis=0)) - 1.0,
    }


def random_system(rng: np.random.Generator, n_components=None, kinds=SYSTEM_KINDS) -> SeriesSystem:
    """Series system of 2 to 5 random catalog components starting at 0."""
    if n_components is None:
        n_components = int(rng.integers(2, 6))
    return series([random_model(rng, kinds) for _ in range(n_components)])
