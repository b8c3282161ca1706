"""How close a positive dataset is to Benford's law for a chosen base."""
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy import integrate

from . import kernels
from .distributions import UnitDistribution
from .fourier import UNIFORM, cf_noise, detect_period, empirical_spectrum, N_MAX_ANALYSIS
from .modmath import Base, log_mantissa_array, significand_array

#: asymptotic 99% quantile of sqrt(m) * KS for a fully specified continuous CDF
KS_Q99 = 1.63
HILL_GRID = 256


def ks_noise(m):
    """One-sample KS 99% noise level ``1.63 / sqrt(m)``."""
    return KS_Q99 / math.sqrt(m)


def ks_noise_two_sample(m, n=None):
    """Two-sample KS 99% noise level ``1.63 * sqrt((m + n) / (m n))``."""
    n = m if n is None else n
    return KS_Q99 * math.sqrt((m + n) / (m * n))


def ks_uniform(u):
    """Exact sup-distance between the empirical CDF of ``u`` (values in [0, 1)) and ``t``."""
    u = np.sort(np.asarray(u, dtype=np.float64))
    return kernels.ks_uniform_sorted(u)


def ks_cdf(x, cdf):
    """Exact one-sample KS distance of ``x`` to a continuous ``cdf``."""
    return ks_uniform(np.clip(cdf(np.asarray(x, dtype=float)), 0.0, 1.0))


def ks_two_sample(x, y):
    """Sup-distance between two empirical CDFs (ties handled exactly)."""
    x = np.sort(np.asarray(x, dtype=np.float64))
    y = np.sort(np.asarray(y, dtype=np.float64))
    if x.size == 0 or y.size == 0:
        raise ValueError("empty sample")
    pts = np.concatenate([x, y])
    fx = np.searchsorted(x, pts, side="right") / x.size
    fy = np.searchsorted(y, pts, side="right") / y.size
    return float(np.max(np.abs(fx - fy)))


def ks_to_benford(data, b, *, is_log=False):
    """KS distance between the log-mantissas of ``data`` and U[0, 1).

    With ``is_log=True`` the data are natural logarithms of the positive values.
    """
    data = np.asarray(data, dtype=np.float64)
    if data.size == 0:
        raise ValueError("empty dataset")
    return ks_uniform(log_mantissa_array(data, b, is_log=is_log))


def digit_histogram(data, b):
    """First-digit frequencies with the Benford column ``log_b(1 + 1/d)``.

    Returns a list of ``(digit, freq, benford_freq)`` for ``d = 1..b-1``.
    """
    if float(b) != int(b):
        raise ValueError(f"first digits need an integer base, got {b}")
    b = int(Base(b))
    data = np.asarray(data, dtype=np.float64)
    if data.size == 0:
        raise ValueError("empty dataset")
    digits = np.floor(significand_array(data, b)).astype(np.int64)
    digits = np.clip(digits, 1, b - 1)
    counts = np.bincount(digits, minlength=b)[1:]
    freqs = counts / data.size
    return [(d, float(freqs[d - 1]), math.log1p(1.0 / d) / math.log(b)) for d in range(1, b)]


class HillFit(NamedTuple):
    p: float
    residual: float


def hill_mixture_fit(data, b, *, is_log=False, grid=HILL_GRID):
    """Least-squares fit of ``P(S_b(X) <= b**t) = p + (1 - p) t``.

    The model is linear in ``p``: ``G(t) - t = p (1 - t)``, so the fit is a
    projection over the grid ``t = i/grid``. Exact powers of ``b`` (log-mantissa
    0) count toward ``p``. ``residual`` is the largest grid deviation of the
    empirical CDF from the fitted line.
    """
    u = np.sort(log_mantissa_array(data, b, is_log=is_log))
    if u.size == 0:
        raise ValueError("empty dataset")
    t = np.arange(grid) / grid
    g = np.searchsorted(u, t, side="right") / u.size
    w = 1.0 - t
    p = float(np.clip(np.dot(g - t, w) / np.dot(w, w), 0.0, 1.0))
    resid = float(np.max(np.abs(g - (p + (1.0 - p) * t))))
    return HillFit(p, resid)


@dataclass
class RankBound:
    N: int
    bound: float
    observed_sup: float
    satisfied: bool

    def to_json(self):
        return {"N": self.N, "bound": self.bound, "observed": self.observed_sup, "ok": self.satisfied}


def _analytic_sup(u, n_grid=1 << 14):
    t = np.linspace(0.0, 1.0, n_grid + 1)[:-1]
    extra = np.asarray(u.breakpoints, dtype=float)
    t = np.unique(np.concatenate([t, extra]))
    dev = np.abs(u.cdf(t) - t)
    # left limits at jumps
    left = np.clip(extra - 1e-12, 0.0, None)
    if left.size:
        dev = np.concatenate([dev, np.abs(u.cdf(left) - left)])
    return float(dev.max())


def rank_bound_check(u, N):
    """Compare ``sup_t |F(t) - t|`` with the ``1/N`` bound.

    Empirical inputs use the exact order-statistic supremum and allow the KS
    noise ``1.63/sqrt(m)``; analytic inputs are evaluated on a fine grid plus
    their breakpoints with no allowance.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    bound = 1.0 / N
    if u.is_empirical:
        observed = kernels.ks_uniform_sorted(u.samples)
        ok = observed <= bound + ks_noise(u.m)
    else:
        observed = _analytic_sup(u)
        ok = observed <= bound + 1e-12
    return RankBound(int(N), bound, observed, bool(ok))


def tv_to_uniform(density, breakpoints=(), norm_tol=1e-9):
    """Total-variation distance ``int_{f<1} (1 - f)`` between a density on [0, 1) and uniform."""
    pts = sorted(p for p in breakpoints if 0 < p < 1)
    opts = dict(limit=500, epsabs=1e-13, epsrel=1e-12)
    if pts:
        opts["points"] = pts

    def f(x):
        return float(density(x))

    total, _ = integrate.quad(f, 0.0, 1.0, **opts)
    if abs(total - 1.0) > norm_tol:
        raise ValueError(f"density integrates to {total}, not 1")
    tv, _ = integrate.quad(lambda x: max(0.0, 1.0 - f(x)), 0.0, 1.0, **opts)
    return tv


@dataclass
class ConformanceReport:
    base: float
    m: int
    ks_distance: float
    threshold: float
    digit_freqs: Optional[list]
    hill_p: float
    hill_residual: float
    period: object
    rank_bound: Optional[RankBound]
    verdict: str
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "base": self.base,
            "m": self.m,
            "ks": self.ks_distance,
            "threshold": self.threshold,
            "digits": None if self.digit_freqs is None else [
                {"digit": d, "freq": f, "benford_freq": bf} for d, f, bf in self.digit_freqs
            ],
            "hill_p": self.hill_p,
            "hill_residual": self.hill_residual,
            "period": self.period,
            "rank": None if self.rank_bound is None else self.rank_bound.to_json(),
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def analyze(data, b=10.0, *, n_max=N_MAX_ANALYSIS, workers=None):
    """Full conformance report for positive ``data`` in base ``b``.

    Verdict: ``benford`` if the KS distance is within the 99% noise level and
    the significands are not all equal;
    ``periodic(N)`` if the log-mantissa spectrum vanishes off multiples of
    some ``N >= 2`` and the ``1/N`` rank bound holds; otherwise ``nonconforming``.
    """
    b = Base(b)
    data = np.asarray(data, dtype=np.float64)
    if data.size == 0:
        raise ValueError("no usable values")
    u = log_mantissa_array(data, b)
    m = u.size
    ks = ks_uniform(u)
    threshold = ks_noise(m)
    digits = digit_histogram(data, b) if float(b).is_integer() else None
    hill = hill_mixture_fit(data, b)
    spec = empirical_spectrum(u, n_max, workers=workers)
    period = detect_period(spec, cf_noise(m))
    rank = None
    if isinstance(period, int) and period >= 2:
        rank = rank_bound_check(UnitDistribution.empirical(u), period)
    # one repeated mantissa is a point mass, never Benford however few rows there are
    degenerate = bool(np.all(u == u[0]))
    if ks <= threshold and not degenerate:
        verdict = "benford"
    elif rank is not None and rank.satisfied:
        verdict = f"periodic({period})"
    else:
        verdict = "nonconforming"
    notes = []
    if degenerate:
        notes.append("every value has the same significand; the sample is degenerate")
    if period == UNIFORM and verdict != "benford":
        notes.append("low-order Fourier coefficients vanish but the KS distance exceeds noise")
    return ConformanceReport(
        base=float(b), m=m, ks_distance=ks, threshold=threshold, digit_freqs=digits,
        hill_p=hill.p, hill_residual=hill.residual, period=period, rank_bound=rank,
        verdict=verdict, notes=notes,
    )
