"""Statistics and asymptotics on top of the sweep engine.

Two layers: cheap summaries of a single polynomial (domination number, the
count of minimum dominating sets, the total at z=1), and the growth-rate
pipeline.  The latter estimates, per strip width m, the per-vertex growth
constant mu_m = lim_n (T(m, n) / T(m, n-1))^(1/m) where T counts dominating
sets, then extrapolates mu_m over x = 1/m to x = 0 with rational
Bulirsch-Stoer acceleration to estimate the bulk constant.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import ceil
from typing import Optional, Sequence

import mpmath

from . import engine
from .rings import Polynomial

_WORK_DPS = 60


@dataclass(frozen=True)
class DominationStats:
    gamma: int
    n_gamma: int
    total: int


def stats_from_polynomial(poly: Polynomial) -> DominationStats:
    """Summary triple of one domination polynomial."""
    md = poly.min_degree()
    if md is None:
        raise ValueError("zero polynomial: no dominating sets, which cannot "
                         "happen for a nonempty graph")
    total = sum(poly.coefficients)
    return DominationStats(md, poly.coefficients[md], total)


def gamma_closed_form(family: str, m: int, n: int) -> Optional[int]:
    """Known exact domination numbers, or None when no formula applies.

    King lattices: ceil(m/3) * ceil(n/3) for every size.  Grids: the
    (m+2)(n+2)/5 formula holds once both sides are at least 16.
    """
    if family == "king":
        return ceil(m / 3) * ceil(n / 3)
    if family == "grid":
        if m >= 16 and n >= 16:
            return (m + 2) * (n + 2) // 5 - 4
        return None
    raise ValueError(f"no closed form known for family {family!r}")


# ------------------------------------------------------------- growth rates

@dataclass(frozen=True)
class GrowthSample:
    m: int
    mu: mpmath.mpf
    n_used: int


def _growth_sample(family: str, m: int, precision_digits: int, n_cap: int,
                   guards: engine.Guards) -> GrowthSample:
    if family == "torus":
        raise ValueError("torus growth equals the cylinder's; compute that")
    with mpmath.workdps(_WORK_DPS):
        tol = mpmath.mpf(10) ** (-precision_digits)
        prev_total: Optional[int] = None
        prev_mu: Optional[mpmath.mpf] = None
        for n, total in enumerate(engine.iter_counts(family, m, guards), start=1):
            if prev_total is not None:
                ratio = mpmath.mpf(total) / mpmath.mpf(prev_total)
                mu = mpmath.root(ratio, m)
                if prev_mu is not None and n >= 4 and abs(mu - prev_mu) <= tol * mu:
                    return GrowthSample(m, mu, n)
                prev_mu = mu
            prev_total = total
            if n >= n_cap:
                raise RuntimeError(
                    f"mu_{m} for {family} did not stabilize to "
                    f"{precision_digits} digits within n_cap={n_cap} rows")
    raise AssertionError("unreachable")


def growth_rate_m(family: str, m: int, precision_digits: int = 13,
                  n_cap: int = 400,
                  guards: engine.Guards = engine.DEFAULT_GUARDS) -> mpmath.mpf:
    """Per-vertex growth constant of the width-m strip, to the requested
    number of stable digits."""
    return _growth_sample(family, m, precision_digits, n_cap, guards).mu


@dataclass(frozen=True)
class ExtrapolationResult:
    limit: mpmath.mpf
    error: mpmath.mpf
    used_fallback: bool


def bulirsch_stoer_extrapolate(points: Sequence[tuple]) -> ExtrapolationResult:
    """Rational extrapolation of (x, y) samples to x = 0.

    Points must have distinct positive x in descending order.  The error
    field is the magnitude of the last tableau correction.  When the
    rational recurrence degenerates (a vanishing denominator), the routine
    falls back to polynomial (Neville) extrapolation and says so.
    """
    if len(points) < 3:
        raise ValueError("need at least three samples to extrapolate")
    with mpmath.workdps(_WORK_DPS):
        xs = [mpmath.mpf(x) for x, _ in points]
        ys = [mpmath.mpf(y) for _, y in points]
        for a, b in zip(xs, xs[1:]):
            if not a > b > 0:
                raise ValueError("x values must be positive, distinct, and "
                                 "descending")
        try:
            rows = _rational_tableau(xs, ys)
            fallback = False
        except ZeroDivisionError:
            rows = _neville_tableau(xs, ys)
            fallback = True
        last = rows[-1]
        error = abs(last[-1] - last[-2]) if len(last) >= 2 else mpmath.mpf(0)
        return ExtrapolationResult(last[-1], error, fallback)


def _rational_tableau(xs, ys):
    rows = []
    for i in range(len(xs)):
        row = [ys[i]]
        for k in range(1, i + 1):
            t = row[k - 1]
            diff = t - rows[i - 1][k - 1]
            if diff == 0:
                # flat in this column; the entry is already converged
                row.append(t)
                continue
            lower = t - (rows[i - 1][k - 2] if k >= 2 else 0)
            if lower == 0:
                raise ZeroDivisionError
            den = (xs[i - k] / xs[i]) * (1 - diff / lower) - 1
            if den == 0:
                raise ZeroDivisionError
            row.append(t + diff / den)
        rows.append(row)
    return rows


def _neville_tableau(xs, ys):
    rows = []
    for i in range(len(xs)):
        row = [ys[i]]
        for k in range(1, i + 1):
            num = xs[i - k] * row[k - 1] - xs[i] * rows[i - 1][k - 1]
            row.append(num / (xs[i - k] - xs[i]))
        rows.append(row)
    return rows


@dataclass(frozen=True)
class GrowthEstimate:
    family: str
    samples: tuple
    mu: mpmath.mpf
    error: mpmath.mpf
    used_fallback: bool

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "samples": [
                {"m": s.m, "n_used": s.n_used,
                 "mu_m": mpmath.nstr(s.mu, 20)}
                for s in self.samples
            ],
            "mu": mpmath.nstr(self.mu, 20),
            "error": mpmath.nstr(self.error, 5),
        }


def _sample_worker(args):
    family, m, precision_digits, n_cap, max_states, max_memory = args
    guards = engine.Guards(max_states, max_memory)
    s = _growth_sample(family, m, precision_digits, n_cap, guards)
    with mpmath.workdps(_WORK_DPS):
        return m, mpmath.nstr(s.mu, _WORK_DPS - 10), s.n_used


def estimate_growth(family: str, m_min: int = 3, m_max: int = 12,
                    precision_digits: int = 13, n_cap: int = 400,
                    workers: int = 1,
                    guards: engine.Guards = engine.DEFAULT_GUARDS,
                    ) -> GrowthEstimate:
    """Bulk growth constant from strip constants mu_{m_min}..mu_{m_max}.

    The torus shares the cylinder's strips, so its estimate reuses them.
    """
    if m_max - m_min + 1 < 3:
        raise ValueError("need at least three widths")
    strip_family = "cylinder" if family == "torus" else family
    ms = list(range(m_min, m_max + 1))
    if workers > 1:
        jobs = [(strip_family, m, precision_digits, n_cap,
                 guards.max_states, guards.max_memory_bytes) for m in ms]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_sample_worker, jobs))
        with mpmath.workdps(_WORK_DPS):
            samples = [GrowthSample(m, mpmath.mpf(mu), n) for m, mu, n in raw]
    else:
        samples = [_growth_sample(strip_family, m, precision_digits, n_cap,
                                  guards) for m in ms]
    with mpmath.workdps(_WORK_DPS):
        points = [(mpmath.mpf(1) / s.m, s.mu) for s in samples]
        result = bulirsch_stoer_extrapolate(points)
    return GrowthEstimate(family, tuple(samples), result.limit, result.error,
                          result.used_fallback)
