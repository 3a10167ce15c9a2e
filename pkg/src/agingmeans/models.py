"""Parametric and tabulated hazard models with closed-form functional oracles.

Every model is an immutable object exposing a vectorised hazard ``r(t)``,
its support ``(left, right)``, the cumulative hazard and survival
function, and the limit of ``r`` at the left support endpoint.  Averages
of the hazard are always taken from ``left``: ``0`` for most kinds, ``a``
for :class:`Uniform` and ``k`` for :class:`Pareto`.

Closed forms for ``A, G, H, L, L^G, L^H`` (see :func:`closed_form_oracle`)
are kept independent of the quadrature engine so they can serve as
oracles for it.
"""

from __future__ import annotations

import csv
import math
import numbers
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import NonPositiveRate, OutOfSupport, ParseError
from .quadrature import integrate

FUNCTIONALS = ("A", "G", "H", "L", "LG", "LH")


class HazardModel:
    """Base class; subclasses implement ``_rate`` and the support."""

    left: float = 0.0
    right: float = math.inf
    closed_right = False
    monotone: str | None = None  # "increasing" | "decreasing" | "constant" | None

    def _rate(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def support(self) -> tuple[float, float]:
        return (self.left, self.right)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    @property
    def left_limit(self) -> float:
        """``lim r(t)`` as ``t`` decreases to ``left``; may be ``0`` or ``inf``."""
        raise NotImplementedError

    def contains(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        upper = t <= self.right if self.closed_right else t < self.right
        return (t > self.left) & upper

    def check(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if not np.all(self.contains(t)):
            bad = t[~self.contains(t)].ravel()[0]
            raise OutOfSupport(f"t={bad:g} is outside the support {self.describe_support()} of {self!r}")
        return t

    def describe_support(self) -> str:
        close = "]" if self.closed_right else ")"
        return f"({self.left:g}, {self.right:g}{close}"

    def hazard(self, t):
        """Hazard rate at ``t`` (scalar or array) inside the open support."""
        t = self.check(t)
        out = self._rate(t)
        return float(out) if out.ndim == 0 else out

    def _cumulative(self, t: np.ndarray) -> np.ndarray:
        return np.array([integrate(self._rate, self.left, x).value for x in np.ravel(t)]).reshape(t.shape)

    def cumulative_hazard(self, t):
        """``Lambda(t) = int_left^t r``; zero at or below ``left``."""
        t = np.asarray(t, dtype=float)
        if np.any(t > self.right) or (not self.closed_right and np.any(t >= self.right)):
            raise OutOfSupport(f"cumulative hazard requested beyond the right end of {self!r}")
        inside = t > self.left
        out = np.zeros(t.shape)
        if np.any(inside):
            out[inside] = self._cumulative(t[inside])
        return float(out) if out.ndim == 0 else out

    def survival(self, t):
        return np.exp(-np.asarray(self.cumulative_hazard(t))) if np.ndim(t) else math.exp(-self.cumulative_hazard(t))


@dataclass(frozen=True)
class Exponential(HazardModel):
    rate: float
    monotone = "constant"

    def __post_init__(self):
        _positive(rate=self.rate)

    def _rate(self, t):
        return np.full(np.shape(t), float(self.rate))

    @property
    def left_limit(self):
        return float(self.rate)

    def _cumulative(self, t):
        return self.rate * t


@dataclass(frozen=True)
class Weibull(HazardModel):
    """Weibull with survival ``exp(-alpha t**beta)``, so ``r = alpha beta t**(beta-1)``."""

    alpha: float
    beta: float

    def __post_init__(self):
        _positive(alpha=self.alpha, beta=self.beta)

    @property
    def monotone(self):
        if self.beta == 1.0:
            return "constant"
        return "increasing" if self.beta > 1.0 else "decreasing"

    def _rate(self, t):
        return self.alpha * self.beta * np.power(t, self.beta - 1.0)

    @property
    def left_limit(self):
        if self.beta == 1.0:
            return float(self.alpha)
        return 0.0 if self.beta > 1.0 else math.inf

    def _cumulative(self, t):
        return self.alpha * np.power(t, self.beta)


@dataclass(frozen=True)
class ErlangLike(HazardModel):
    """Hazard ``lam**2 t / (1 + lam t)`` (Erlang with two phases)."""

    lam: float
    monotone = "increasing"

    def __post_init__(self):
        _positive(lam=self.lam)

    def _rate(self, t):
        return self.lam**2 * t / (1.0 + self.lam * t)

    @property
    def left_limit(self):
        return 0.0

    def _cumulative(self, t):
        return self.lam * t - np.log1p(self.lam * t)


@dataclass(frozen=True)
class Uniform(HazardModel):
    """Uniform lifetime on ``[a, b]``; ``r = 1/(b - t)`` blows up at ``b``."""

    a: float
    b: float
    monotone = "increasing"

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and 0.0 <= self.a < self.b):
            raise ValueError(f"Uniform needs 0 <= a < b, got a={self.a}, b={self.b}")

    @property
    def left(self):
        return float(self.a)

    @property
    def right(self):
        return float(self.b)

    def _rate(self, t):
        return 1.0 / (self.b - t)

    @property
    def left_limit(self):
        return 1.0 / (self.b - self.a)

    def _cumulative(self, t):
        return np.log((self.b - self.a) / (self.b - t))


@dataclass(frozen=True)
class Rayleigh(HazardModel):
    """Linear hazard ``a + b t``."""

    a: float
    b: float
    monotone = "increasing"

    def __post_init__(self):
        if not (self.a >= 0.0 and math.isfinite(self.a)):
            raise ValueError(f"Rayleigh intercept must be >= 0, got {self.a}")
        _positive(b=self.b)

    def _rate(self, t):
        return self.a + self.b * t

    @property
    def left_limit(self):
        return float(self.a)

    def _cumulative(self, t):
        return self.a * t + 0.5 * self.b * t * t


@dataclass(frozen=True)
class Pareto(HazardModel):
    """Hazard ``a / t`` on ``t >= k``."""

    a: float
    k: float
    monotone = "decreasing"

    def __post_init__(self):
        _positive(a=self.a, k=self.k)

    @property
    def left(self):
        return float(self.k)

    def _rate(self, t):
        return self.a / t

    @property
    def left_limit(self):
        return self.a / self.k

    def _cumulative(self, t):
        return self.a * np.log(t / self.k)


@dataclass(frozen=True)
class TruncatedLogWeibull(HazardModel):
    """Log-Weibull truncated to ``t > 0``: ``r = exp((t - a)/b) / b``."""

    a: float
    b: float
    monotone = "increasing"

    def __post_init__(self):
        if not math.isfinite(self.a):
            raise ValueError("TruncatedLogWeibull location must be finite")
        _positive(b=self.b)

    def _rate(self, t):
        return np.exp((t - self.a) / self.b) / self.b

    @property
    def r0(self) -> float:
        """Limit of the hazard at ``t = 0``."""
        return math.exp(-self.a / self.b) / self.b

    @property
    def left_limit(self):
        return self.r0

    def _cumulative(self, t):
        return math.exp(-self.a / self.b) * np.expm1(t / self.b)


@dataclass(frozen=True, eq=False)
class Tabulated(HazardModel):
    """Piecewise-linear hazard through ``(times[i], rates[i])`` knots.

    The support is the closed knot range; averages start at ``times[0]``.
    """

    times: np.ndarray
    rates: np.ndarray
    closed_right = True

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        r = np.asarray(self.rates, dtype=float)
        if t.ndim != 1 or t.shape != r.shape or t.size < 2:
            raise ValueError("Tabulated needs two equal-length 1-D arrays with at least 2 knots")
        if not np.all(np.isfinite(t)) or not np.all(np.diff(t) > 0):
            raise ValueError("Tabulated times must be finite and strictly increasing")
        if not np.all(np.isfinite(r)) or np.any(r <= 0):
            i = int(np.flatnonzero(~(r > 0) | ~np.isfinite(r))[0])
            raise NonPositiveRate(f"tabulated rate at t={t[i]:g} is {r[i]:g}")
        t.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "rates", r)

    @property
    def left(self):
        return float(self.times[0])

    @property
    def right(self):
        return float(self.times[-1])

    @property
    def breakpoints(self):
        return tuple(self.times[1:-1].tolist())

    @property
    def monotone(self):
        d = np.diff(self.rates)
        if np.all(d == 0):
            return "constant"
        if np.all(d >= 0):
            return "increasing"
        if np.all(d <= 0):
            return "decreasing"
        return None

    def _rate(self, t):
        return np.interp(t, self.times, self.rates)

    @property
    def left_limit(self):
        return float(self.rates[0])

    def _cumulative(self, t):
        knots = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(self.times) * (self.rates[1:] + self.rates[:-1]))])
        i = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, self.times.size - 2)
        t0 = self.times[i]
        return knots[i] + 0.5 * (t - t0) * (self.rates[i] + self._rate(t))

    def __repr__(self):
        return f"Tabulated(<{self.times.size} knots on [{self.left:g}, {self.right:g}]>)"


@dataclass(frozen=True)
class Composite(HazardModel):
    """Sum of member hazards on the intersection of their supports."""

    members: tuple[HazardModel, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ValueError("Composite needs at least one member")
        object.__setattr__(self, "members", members)
        if self.left >= self.right:
            raise OutOfSupport("member supports do not overlap")

    @property
    def left(self):
        return max(m.left for m in self.members)

    @property
    def right(self):
        return min(m.right for m in self.members)

    @property
    def closed_right(self):
        ends = [m for m in self.members if m.right == self.right]
        return all(m.closed_right for m in ends)

    @property
    def breakpoints(self):
        return tuple(sorted({b for m in self.members for b in m.breakpoints}))

    @property
    def monotone(self):
        kinds = {m.monotone for m in self.members} - {"constant"}
        if None in kinds or len(kinds) > 1:
            return None
        return kinds.pop() if kinds else "constant"

    def _rate(self, t):
        return sum(m._rate(t) for m in self.members)

    @property
    def left_limit(self):
        lo = self.left
        return float(sum(m.left_limit if m.left == lo else m._rate(np.asarray(lo)) for m in self.members))

    def _cumulative(self, t):
        lo = self.left
        return sum(np.asarray(m.cumulative_hazard(t)) - m.cumulative_hazard(lo) for m in self.members)


@dataclass(frozen=True)
class Residual(HazardModel):
    """Residual lifetime after survival to ``x``: hazard ``r(x + t)``."""

    base: HazardModel
    x: float

    def __post_init__(self):
        if not (self.x == self.base.left or self.base.contains(self.x)):
            raise OutOfSupport(f"x={self.x:g} is outside the support of {self.base!r}")

    left = 0.0

    @property
    def right(self):
        return self.base.right - self.x

    @property
    def closed_right(self):
        return self.base.closed_right

    @property
    def breakpoints(self):
        return tuple(b - self.x for b in self.base.breakpoints if b > self.x)

    @property
    def monotone(self):
        return self.base.monotone

    def _rate(self, t):
        return self.base._rate(self.x + np.asarray(t))

    @property
    def left_limit(self):
        if self.x == self.base.left:
            return self.base.left_limit
        return float(self.base._rate(np.asarray(self.x)))

    def _cumulative(self, t):
        return np.asarray(self.base.cumulative_hazard(self.x + t)) - self.base.cumulative_hazard(self.x)


def _positive(**params):
    for name, value in params.items():
        if not (isinstance(value, numbers.Real) and math.isfinite(value) and value > 0):
            raise ValueError(f"{name} must be a finite positive number, got {value!r}")


def hazard(model: HazardModel, t):
    """Hazard of ``model`` at ``t``; raises :class:`OutOfSupport` outside the support."""
    return model.hazard(t)


def closed_form_oracle(model: HazardModel, functional: str, t: float):
    """Analytic value of a mean-failure-rate functional, or ``None``.

    ``functional`` is one of ``A, G, H, L, LG, LH``.  Divergent harmonic
    quantities follow the package convention ``H = 0`` and ``LH = inf``.
    ``None`` means no closed form is catalogued for this kind/functional.
    """
    if functional not in FUNCTIONALS:
        raise ValueError(f"unknown functional {functional!r}; expected one of {FUNCTIONALS}")
    t = float(model.check(t))
    forms = _closed_forms(model, t)
    if forms is None or functional not in forms:
        return None
    return float(forms[functional])


def _closed_forms(model, t):
    r = float(model._rate(np.asarray(t)))
    out: dict[str, float] = {}

    def from_intensities(**pairs):
        # pairs maps intensity name -> value; the matching mean follows as r / intensity
        means = {"L": "A", "LG": "G", "LH": "H"}
        for name, value in pairs.items():
            out[name] = value
            out[means[name]] = 0.0 if math.isinf(value) else r / value

    if isinstance(model, Exponential):
        from_intensities(L=1.0, LG=1.0, LH=1.0)
    elif isinstance(model, Weibull):
        beta = model.beta
        from_intensities(L=beta, LG=math.exp(beta - 1.0), LH=1.0 / (2.0 - beta) if beta < 2.0 else math.inf)
    elif isinstance(model, ErlangLike):
        x = model.lam * t
        from_intensities(
            L=x * x / ((1.0 + x) * (x - math.log1p(x))),
            LG=math.exp(math.log1p(x) / x),
            LH=math.inf,
        )
    elif isinstance(model, Uniform):
        a, b = model.a, model.b
        from_intensities(
            L=(t - a) / ((b - t) * (math.log(b - a) - math.log(b - t))),
            LG=math.exp(-1.0) * ((b - t) / (b - a)) ** ((a - b) / (t - a)),
            LH=1.0 + (t - a) / (2.0 * (b - t)),
        )
    elif isinstance(model, Rayleigh):
        a, b = model.a, model.b
        if a == 0.0:
            from_intensities(L=2.0, LG=math.e, LH=math.inf)
        else:
            z = b * t / a
            from_intensities(
                L=(a + b * t) / (a + b * t / 2.0),
                LG=math.e / (1.0 + z) ** (1.0 / z),
                LH=(1.0 + 1.0 / z) * math.log1p(z),
            )
    elif isinstance(model, Pareto):
        k = model.k
        log_lg = (t * math.log(t) - k * math.log(k)) / (t - k) - 1.0 - math.log(t)
        from_intensities(
            L=(t - k) / (t * math.log(t / k)),
            LG=math.exp(log_lg),
            LH=(t + k) / (2.0 * t),
        )
    elif isinstance(model, TruncatedLogWeibull):
        out["G"] = math.sqrt(r * model.r0)
        out["LG"] = r / out["G"]
    else:
        return None
    return out


# -- model specification grammar -------------------------------------------

_KINDS = {
    "exp": (Exponential, {"lambda": "rate", "rate": "rate"}),
    "exponential": (Exponential, {"lambda": "rate", "rate": "rate"}),
    "weibull": (Weibull, {"alpha": "alpha", "beta": "beta"}),
    "erlang": (ErlangLike, {"lambda": "lam", "lam": "lam"}),
    "erlanglike": (ErlangLike, {"lambda": "lam", "lam": "lam"}),
    "uniform": (Uniform, {"a": "a", "b": "b"}),
    "rayleigh": (Rayleigh, {"a": "a", "b": "b"}),
    "pareto": (Pareto, {"a": "a", "k": "k"}),
    "tlw": (TruncatedLogWeibull, {"a": "a", "b": "b"}),
    "truncatedlogweibull": (TruncatedLogWeibull, {"a": "a", "b": "b"}),
}


def parse_model(spec: str) -> HazardModel:
    """Build a model from ``kind:param=value,...``.

    >>> parse_model("weibull:alpha=0.5,beta=1.5")
    Weibull(alpha=0.5, beta=1.5)

    ``tabulated:file=PATH`` reads a CSV with columns ``t`` and ``r``.
    """
    kind, _, rest = spec.strip().partition(":")
    kind = kind.strip().lower().replace("-", "").replace("_", "")
    params: dict[str, str] = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq:
            raise ParseError(f"model parameter {item!r} is not of the form name=value")
        params[key.strip().lower()] = value.strip()
    if kind == "tabulated":
        if set(params) != {"file"}:
            raise ParseError("tabulated models take exactly one parameter: file=PATH")
        return load_tabulated(params["file"])
    if kind not in _KINDS:
        raise ParseError(f"unknown model kind {kind!r}; known: {', '.join(sorted(_KINDS))}, tabulated")
    cls, names = _KINDS[kind]
    kwargs = {}
    for key, value in params.items():
        if key not in names:
            raise ParseError(f"{kind} has no parameter {key!r}; expected {sorted(set(names))}")
        try:
            kwargs[names[key]] = float(value)
        except ValueError:
            raise ParseError(f"parameter {key}={value!r} is not a number") from None
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{kind}: {exc}") from None


def load_tabulated(path) -> Tabulated:
    """Read a ``t,r`` CSV (header optional; extra columns ignored)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read tabulated hazard: {exc}") from None
    rows = [row for row in csv.reader(text.splitlines()) if row and any(c.strip() for c in row)]
    if not rows:
        raise ParseError(f"{path}: no data")
    header = [c.strip().lower() for c in rows[0]]
    try:
        float(header[0])
        ti, ri, body = 0, 1, rows
    except ValueError:
        if "t" not in header or "r" not in header:
            raise ParseError(f"{path}: header must name columns 't' and 'r'") from None
        ti, ri, body = header.index("t"), header.index("r"), rows[1:]
    times, rates = [], []
    for n, row in enumerate(body, start=1):
        try:
            times.append(float(row[ti]))
            rates.append(float(row[ri]))
        except (ValueError, IndexError):
            raise ParseError("expected numeric t and r", row=n) from None
    return Tabulated(np.array(times), np.array(rates))


# -- random catalog members --------------------------------------------------

RANDOM_KINDS = ("exponential", "weibull", "rayleigh", "tlw", "erlang", "uniform", "pareto")


def random_model(rng: np.random.Generator, kinds: Iterable[str] = RANDOM_KINDS, shape=(0.5, 1.9)) -> HazardModel:
    """Draw a catalog model: scales/rates log-uniform on [0.1, 10], shapes uniform on ``shape``."""
    kinds = tuple(kinds)
    kind = kinds[rng.integers(len(kinds))]

    def scale():
        return float(10.0 ** rng.uniform(-1.0, 1.0))

    if kind == "exponential":
        return Exponential(scale())
    if kind == "weibull":
        return Weibull(scale(), float(rng.uniform(*shape)))
    if kind == "rayleigh":
        return Rayleigh(scale(), scale())
    if kind == "tlw":
        return TruncatedLogWeibull(float(rng.uniform(-2.0, 2.0)), scale())
    if kind == "erlang":
        return ErlangLike(scale())
    if kind == "uniform":
        return Uniform(0.0, scale())
    if kind == "pareto":
        return Pareto(scale(), scale())
    raise ValueError(f"unknown random kind {kind!r}")
