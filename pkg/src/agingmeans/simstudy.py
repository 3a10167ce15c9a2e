"""Monte Carlo bias/MSE study of the plug-in functional estimators on Weibull data.

Each replication draws one Weibull sample with seed ``base_seed + rep``.
Samples of every configured size are prefixes of that draw, so sample
sizes share randomness within a replication.  The hazard is estimated by
:func:`~agingmeans.estimation.kernel_hazard` on a grid running from the
smallest observation to the largest evaluation time.  The estimated
profile is read at 64 evaluation times, the true Weibull quantiles at
levels 0.1 ... 0.9.  Bias and MSE average over the evaluation times within
a replication and then over replications.
"""

from __future__ import annotations

import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import AgingError, ParseError
from .estimation import SurvivalSample, estimated_profile, kernel_hazard
from .functionals import profile
from .models import Weibull, closed_form_oracle

FUNCTIONALS = ("HR", "AFR", "GFR", "HFR", "AI", "GAI", "HAI")
_COLUMN = {"HR": "r", "AFR": "afr", "GFR": "gfr", "HFR": "hfr", "AI": "ai", "GAI": "gai", "HAI": "hai"}
PAPER_SIZES = tuple(range(1000, 10001, 1000))
MIN_SAMPLE = 50
FAILURE_LIMIT = 0.05


@dataclass(frozen=True)
class SimConfig:
    alpha: float = 0.5
    beta: float = 1.5
    sample_sizes: tuple[int, ...] = PAPER_SIZES
    replications: int = 100
    base_seed: int = 20240601
    bandwidth: float | str = "auto"
    eval_points: int = 64
    quantile_range: tuple[float, float] = (0.1, 0.9)
    estimation_points: int = 400

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("alpha and beta must be positive")
        sizes = tuple(int(n) for n in self.sample_sizes)
        if not sizes:
            raise ValueError("sample_sizes must not be empty")
        if min(sizes) < MIN_SAMPLE:
            raise ValueError(f"sample sizes must be at least {MIN_SAMPLE}, got {min(sizes)}")
        object.__setattr__(self, "sample_sizes", sizes)
        if int(self.replications) < 1:
            raise ValueError("replications must be at least 1")
        lo, hi = self.quantile_range
        if not 0 < lo < hi < 1:
            raise ValueError("quantile_range must satisfy 0 < lo < hi < 1")
        if isinstance(self.bandwidth, str) and self.bandwidth != "auto":
            raise ValueError("bandwidth must be 'auto' or a positive number")
        if not isinstance(self.bandwidth, str) and not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")

    @property
    def functionals(self) -> tuple[str, ...]:
        # 1/r is not integrable at 0 once beta >= 2, so HAI has no finite truth
        return FUNCTIONALS if self.beta < 2 else tuple(f for f in FUNCTIONALS if f not in ("HFR", "HAI"))

    @property
    def notices(self) -> list[str]:
        if self.beta >= 2:
            return [f"HFR and HAI excluded: the harmonic mean diverges for beta={self.beta:g} >= 2"]
        return []


_INT_KEYS = {"replications", "base_seed", "eval_points", "estimation_points"}
_FLOAT_KEYS = {"alpha", "beta"}


def parse_config(text: str) -> SimConfig:
    """Read ``key=value`` lines; ``#`` starts a comment.

    ``sample_sizes`` takes a comma list or ``start:stop:step`` (inclusive),
    ``bandwidth`` takes ``auto`` or a number and ``quantile_range`` ``lo,hi``.
    """
    values = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value, got {raw.strip()!r}", line_no)
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            if key in _FLOAT_KEYS:
                values[key] = float(value)
            elif key in _INT_KEYS:
                values[key] = int(value)
            elif key == "sample_sizes":
                values[key] = _parse_sizes(value)
            elif key == "bandwidth":
                values[key] = "auto" if value.lower() == "auto" else float(value)
            elif key == "quantile_range":
                lo, hi = (float(v) for v in value.split(","))
                values[key] = (lo, hi)
            else:
                raise ParseError(f"unknown key {key!r}", line_no)
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad value for {key}: {value!r}", line_no) from None
    return SimConfig(**values)


def _parse_sizes(value: str) -> tuple[int, ...]:
    if ":" in value:
        start, stop, step = (int(v) for v in value.split(":"))
        return tuple(range(start, stop + 1, step))
    return tuple(int(v) for v in value.split(",") if v.strip())


def sample_weibull(alpha: float, beta: float, n: int, seed) -> np.ndarray:
    """Inversion sampling ``t = (-ln U / alpha)^(1/beta)`` from ``numpy.random.default_rng(seed)``.

    ``U`` is drawn on the open interval ``(0, 1)`` so every time is
    finite and positive.
    """
    if not (alpha > 0 and beta > 0):
        raise ValueError("alpha and beta must be positive")
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    u = (rng.integers(0, 2**53, size=n, dtype=np.int64) + 0.5) / 2.0**53
    return (-np.log(u) / alpha) ** (1.0 / beta)


def weibull_quantile(alpha, beta, p):
    return (-np.log1p(-np.asarray(p, dtype=float)) / alpha) ** (1.0 / beta)


def true_functionals(alpha: float, beta: float, t) -> dict[str, np.ndarray]:
    """Closed forms for ``exp(-alpha t^beta)``: ``L = beta``, ``L^G = e^(beta-1)``, ``L^H = 1/(2-beta)``."""
    t = np.asarray(t, dtype=float)
    r = alpha * beta * t ** (beta - 1.0)
    out = {"HR": r, "AI": np.full_like(t, beta), "GAI": np.full_like(t, math.exp(beta - 1.0))}
    if beta < 2:
        out["HAI"] = np.full_like(t, 1.0 / (2.0 - beta))
        out["HFR"] = r / out["HAI"]
    out["AFR"] = r / beta
    out["GFR"] = r / out["GAI"]
    return out


def validate_truth(config: SimConfig, t, rtol: float = 1e-7) -> float:
    """Largest relative gap between :func:`true_functionals` and the oracle/quadrature values."""
    model = Weibull(config.alpha, config.beta)
    truth = true_functionals(config.alpha, config.beta, t)
    numeric = profile(model, t)
    worst = 0.0
    names = {"AFR": "A", "GFR": "G", "HFR": "H", "AI": "L", "GAI": "LG", "HAI": "LH"}
    for f in config.functionals:
        expect = truth[f]
        got = getattr(numeric, _COLUMN[f])
        worst = max(worst, float(np.max(np.abs(got / expect - 1.0))))
        if f in names:
            oracle = np.array([closed_form_oracle(model, names[f], x) for x in t])
            worst = max(worst, float(np.max(np.abs(oracle / expect - 1.0))))
    if worst > rtol:
        raise AssertionError(f"Weibull truth disagrees with the oracle by {worst:.3g} (relative)")
    return worst


def _eval_grid(config: SimConfig) -> np.ndarray:
    lo, hi = config.quantile_range
    return weibull_quantile(config.alpha, config.beta, np.linspace(lo, hi, config.eval_points))


def _replication(args):
    """Errors per sample size for one replication: ``{n: {functional: err array}}`` or the error text."""
    config, rep, eval_t = args
    draw = sample_weibull(config.alpha, config.beta, max(config.sample_sizes), config.base_seed + rep)
    truth = true_functionals(config.alpha, config.beta, eval_t)
    out = {}
    for n in config.sample_sizes:
        x = draw[:n]
        try:
            if x.min() >= eval_t[0] or x.max() < eval_t[-1]:
                raise AgingError("the sample does not cover the evaluation range")
            grid = np.union1d(np.linspace(x.min(), eval_t[-1], config.estimation_points), eval_t)
            est = kernel_hazard(SurvivalSample.uncensored(x), config.bandwidth, grid=grid)
            prof = estimated_profile(est)
        except AgingError as exc:
            out[n] = f"{type(exc).__name__}: {exc}"
            continue
        rows = np.searchsorted(grid, eval_t)
        out[n] = {f: getattr(prof, _COLUMN[f])[rows] - truth[f] for f in config.functionals}
    return out


@dataclass
class SimReport:
    config: SimConfig
    bias: dict[str, dict[int, float]]
    mse: dict[str, dict[int, float]]
    bias_order: list[str]
    mse_order: list[str]
    failures: dict[int, int]
    seeds: list[int]
    notices: list[str] = field(default_factory=list)
    truth_check: float = 0.0

    @property
    def failure_flag(self) -> bool:
        reps = self.config.replications
        return any(k / reps > FAILURE_LIMIT for k in self.failures.values())

    def to_dict(self) -> dict:
        cfg = asdict(self.config)
        cfg["sample_sizes"] = list(cfg["sample_sizes"])
        cfg["quantile_range"] = list(cfg["quantile_range"])
        return _rounded(
            {
                "config": cfg,
                "functionals": list(self.bias),
                "bias": {f: {str(n): v for n, v in d.items()} for f, d in self.bias.items()},
                "mse": {f: {str(n): v for n, v in d.items()} for f, d in self.mse.items()},
                "bias_order": self.bias_order,
                "mse_order": self.mse_order,
                "failures": {str(n): k for n, k in self.failures.items()},
                "failure_flag": self.failure_flag,
                "seeds": self.seeds,
                "notices": self.notices,
                "truth_check": self.truth_check,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("functional,n,bias,mse\n")
        for f in self.bias:
            for n in self.config.sample_sizes:
                buf.write(f"{f},{n},{self.bias[f][n]:.12g},{self.mse[f][n]:.12g}\n")
        return buf.getvalue()


def _rounded(obj):
    if isinstance(obj, float):
        return obj if not math.isfinite(obj) else float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


def run_study(config: SimConfig, workers: int = 1) -> SimReport:
    """Run every replication and aggregate bias and MSE per functional and sample size.

    ``workers > 1`` spreads replications over processes; results are
    gathered in replication order, so the report does not depend on it.
    Orderings rank functionals by mean absolute bias and by mean MSE over
    sample sizes, largest first.
    """
    eval_t = _eval_grid(config)
    truth_check = validate_truth(config, eval_t)
    jobs = [(config, rep, eval_t) for rep in range(config.replications)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_replication, jobs))
    else:
        results = [_replication(job) for job in jobs]

    fs = config.functionals
    bias = {f: {} for f in fs}
    mse = {f: {} for f in fs}
    failures = {}
    for n in config.sample_sizes:
        ok = [res[n] for res in results if isinstance(res[n], dict)]
        failures[n] = len(results) - len(ok)
        for f in fs:
            if ok:
                bias[f][n] = float(np.mean([e[f].mean() for e in ok]))
                mse[f][n] = float(np.mean([np.mean(e[f] ** 2) for e in ok]))
            else:
                bias[f][n] = mse[f][n] = math.nan
    bias_order = sorted(fs, key=lambda f: -np.mean([abs(v) for v in bias[f].values()]))
    mse_order = sorted(fs, key=lambda f: -np.mean(list(mse[f].values())))
    seeds = [config.base_seed + rep for rep in range(config.replications)]
    return SimReport(config, bias, mse, bias_order, mse_order, failures, seeds, config.notices, truth_check)
