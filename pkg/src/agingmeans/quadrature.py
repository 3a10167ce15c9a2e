"""Adaptive Simpson quadrature with geometric grading toward the left endpoint.

The integrands met in this package (``r``, ``ln r`` and ``1/r`` for
power-law hazards) are routinely singular at the left end of the support.
The interval ``[lo, hi]`` is therefore cut into dyadic pieces
``[lo + L 2^-(k+1), lo + L 2^-k]`` that never touch ``lo``; each piece is
integrated by vectorised adaptive Simpson and the geometric sequence of
piece integrals is summed with an Aitken tail correction.  The same
sequence tells divergent integrals (piece ratio tending to one, as for
``1/u``) from convergent ones.
"""

from __future__ import annotations

from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import QuadratureFailure

RTOL = 1e-9
MAX_PANELS = 2**20
INITIAL_PANELS = 32
DIVERGENCE_RATIO = 0.99
DIVERGENCE_RUN = 5
DIVERGENCE_CEILING = 1e12
_MAX_PIECES = 960


class QuadResult(NamedTuple):
    value: float
    error: float
    divergent: bool
    panels: int


def _adaptive_simpson(f, a, b, owner, n_owner, rtol, abs_density, budget):
    """Integrate ``f`` over every ``[a[i], b[i]]``; sum the results by ``owner``.

    Returns ``(values, error, panels)`` where ``values`` has length
    ``n_owner``.  All live intervals of one bisection level are evaluated
    in a single vectorised call.
    """
    values = np.zeros(n_owner)
    error = 0.0
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    panels = a.size
    while a.size:
        h = b - a
        lm = a + 0.25 * h
        rm = a + 0.75 * h
        flm, frm = f(lm), f(rm)
        left = h / 12.0 * (fa + 4.0 * flm + fm)
        right = h / 12.0 * (fm + 4.0 * frm + fb)
        refined = left + right
        delta = refined - whole
        if not np.all(np.isfinite(refined)):
            raise QuadratureFailure("integrand is not finite inside the interval")
        panels += 2 * a.size
        if panels > budget:
            raise QuadratureFailure(f"tolerance {rtol:g} not reached within {budget} panels")
        scale = np.maximum(rtol * np.abs(refined), abs_density * h)
        tiny = h <= 1e-14 * np.maximum(np.abs(a), np.abs(b))
        done = (np.abs(delta) <= 15.0 * scale) | tiny
        if done.any():
            np.add.at(values, owner[done], refined[done] + delta[done] / 15.0)
            error += float(np.sum(np.abs(delta[done]))) / 15.0
        keep = ~done
        if not keep.any():
            break
        a, b, m = a[keep], b[keep], m[keep]
        fa, fm, fb = fa[keep], fm[keep], fb[keep]
        flm, frm = flm[keep], frm[keep]
        left, right, owner = left[keep], right[keep], owner[keep]
        a, m, b = np.concatenate([a, m]), np.concatenate([lm[keep], rm[keep]]), np.concatenate([m, b])
        fa, fm, fb = (
            np.concatenate([fa, fm]),
            np.concatenate([flm, frm]),
            np.concatenate([fm, fb]),
        )
        whole = np.concatenate([left, right])
        owner = np.concatenate([owner, owner])
    return values, error, panels


def integrate_segments(
    f: Callable[[np.ndarray], np.ndarray],
    edges: Sequence[float],
    rtol: float = RTOL,
    panels_per_segment: int = 8,
    max_panels: int = MAX_PANELS,
):
    """Integrals of ``f`` over consecutive segments ``[edges[i], edges[i+1]]``.

    No endpoint grading is applied, so ``f`` must be finite on every
    segment.  Returns ``(values, error)``.
    """
    edges = np.asarray(edges, dtype=float)
    n = edges.size - 1
    if n < 1:
        return np.zeros(0), 0.0
    frac = np.linspace(0.0, 1.0, panels_per_segment + 1)
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = lo + (hi - lo) * frac
    a, b = nodes[:, :-1].ravel(), nodes[:, 1:].ravel()
    owner = np.repeat(np.arange(n), panels_per_segment)
    coarse = np.abs(f(0.5 * (a + b))) * (b - a)
    span = edges[-1] - edges[0]
    abs_density = rtol * float(np.sum(coarse)) / span if span > 0 else 0.0
    values, error, _ = _adaptive_simpson(f, a, b, owner, n, rtol, abs_density, max_panels)
    return values, error


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    rtol: float = RTOL,
    *,
    check_divergence: bool = False,
    breakpoints: Sequence[float] = (),
    max_panels: int = MAX_PANELS,
) -> QuadResult:
    """Integrate ``f`` over ``[lo, hi]``, grading the mesh toward ``lo``.

    Parameters
    ----------
    f : callable
        Vectorised integrand.  It is evaluated at ``lo`` only when
        ``check_divergence`` is set, to see whether it is bounded there.
    lo, hi : float
        Integration limits, ``lo < hi``.
    rtol : float
        Relative tolerance.
    check_divergence : bool
        Watch the dyadic piece integrals for non-decaying growth.  A run of
        ``DIVERGENCE_RUN`` successive piece ratios above ``DIVERGENCE_RATIO``
        (or a partial sum beyond ``DIVERGENCE_CEILING``) is reported as
        ``divergent=True`` with ``value=inf``.
    breakpoints : sequence of float
        Interior points where ``f`` has kinks; segments between them are
        integrated separately.

    Returns
    -------
    QuadResult
    """
    lo, hi = float(lo), float(hi)
    if not hi > lo:
        raise ValueError(f"integration limits must satisfy lo < hi, got [{lo}, {hi}]")
    if check_divergence and _finite_at(f, lo):
        # a bounded integrand on a finite interval cannot diverge; slowly
        # decaying pieces near a large-but-finite value must not be flagged
        check_divergence = False
    cuts = sorted(x for x in breakpoints if lo < x < hi)
    first_hi = cuts[0] if cuts else hi
    res = _graded(f, lo, first_hi, rtol, check_divergence, max_panels)
    if res.divergent or not cuts:
        return res
    vals, err = integrate_segments(f, [*cuts, hi], rtol, max_panels=max_panels)
    return QuadResult(res.value + float(vals.sum()), res.error + err, False, res.panels)


def _graded(f, lo, hi, rtol, check_divergence, max_panels):
    length = hi - lo
    pieces: list[float] = []
    abs_density = None
    error = 0.0
    panels = 0
    k0 = 0
    while True:
        k = np.arange(k0, k0 + INITIAL_PANELS)
        a = lo + length * np.exp2(-(k + 1.0))
        b = lo + length * np.exp2(-k.astype(float))
        if k0 == 0:
            b[0] = hi
        usable = a > lo
        a, b = a[usable], b[usable]
        if abs_density is None:
            coarse = np.abs(f(0.5 * (a + b))) * (b - a)
            abs_density = rtol * float(np.sum(coarse)) / length
        if a.size:
            vals, err, used = _adaptive_simpson(
                f, a, b, np.arange(a.size), a.size, rtol, abs_density, max_panels - panels
            )
            pieces.extend(vals.tolist())
            error += err
            panels += used
        k0 += INITIAL_PANELS
        seq = np.asarray(pieces)
        partial = float(seq.sum())
        if check_divergence and _looks_divergent(seq, partial):
            return QuadResult(float("inf"), float("inf"), True, panels)
        scale = float(np.abs(seq).sum())
        last = seq[-1] if seq.size else 0.0
        prev = seq[-2] if seq.size > 1 else 0.0
        prev2 = seq[-3] if seq.size > 2 else 0.0
        q = last / prev if prev != 0.0 else 0.0
        q_prev = prev / prev2 if prev2 != 0.0 else 0.0
        exhausted = (not usable.all()) or k0 >= _MAX_PIECES
        if 0.0 <= q < DIVERGENCE_RATIO:
            tail = last * q / (1.0 - q)
            tail_err = abs(tail) * min(1.0, abs(q - q_prev) / (1.0 - q))
        else:
            tail, tail_err = 0.0, abs(last)
        settled = tail_err <= 0.1 * rtol * scale or abs(last) <= 1e-3 * rtol * scale
        if settled or (exhausted and tail_err <= 10.0 * rtol * scale):
            return QuadResult(partial + tail, error + tail_err, False, panels)
        if exhausted:
            raise QuadratureFailure(f"tail of the graded sum on [{lo:g}, {hi:g}] did not settle")


def _finite_at(f, x) -> bool:
    with np.errstate(all="ignore"):
        try:
            value = np.asarray(f(np.array([x])), dtype=float)
        except (ArithmeticError, ValueError):
            return False
    return bool(np.all(np.isfinite(value)))


def _looks_divergent(seq, partial):
    if not np.isfinite(partial) or abs(partial) > DIVERGENCE_CEILING:
        return True
    if seq.size <= DIVERGENCE_RUN:
        return False
    tail = seq[-(DIVERGENCE_RUN + 1):]
    if np.any(tail <= 0.0):
        return False
    ratios = tail[1:] / tail[:-1]
    return bool(np.all(ratios > DIVERGENCE_RATIO))
