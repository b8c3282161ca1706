"""Benford spectra: the set of bases b > 1 for which a positive variable is b-Benford.

X is b-Benford exactly when the characteristic function of ln X vanishes at
every frequency ``2 pi n / ln b``, n >= 1. Everything here works on that
function, either in closed form (a model exposing ``cf_log``) or estimated
from a sample of ``ln x`` values. Only the harmonics ``n = 1..n_max`` are
checked; ``n_max`` is reported with every estimate.
"""
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .fourier import cf_noise
from .modmath import Base

N_MAX_SCAN = 8
ANALYTIC_TOL = 1e-9
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
# local minima of |phi| above this are not refined when searching for the first zero
_DIP = 0.25


class LogCF:
    """Characteristic function of ln X, from a model or from ``ln x`` samples."""

    def __init__(self, source, workers=None):
        self.workers = kernels.resolve_workers(workers)
        if hasattr(source, "cf_log"):
            self._cf = source.cf_log
            self.data = None
            self.scale = float(source.log_scale)
        elif callable(source):
            self._cf = source
            self.data = None
            self.scale = None
        else:
            data = np.ascontiguousarray(source, dtype=np.float64)
            if data.ndim != 1 or data.size == 0:
                raise ValueError("need a non-empty 1-d array of ln x values")
            if not np.all(np.isfinite(data)):
                raise ValueError("ln x values must be finite")
            self._cf = None
            self.data = data
            self.scale = float(np.std(data))

    @property
    def empirical(self):
        return self.data is not None

    @property
    def m(self):
        return None if self.data is None else self.data.size

    def default_tol(self):
        return max(ANALYTIC_TOL, cf_noise(self.m)) if self.empirical else ANALYTIC_TOL

    def harmonics(self, t0, n_max, n_start=1):
        """``phi(n t0)`` for ``n = n_start .. n_start + n_max - 1``."""
        if self.empirical:
            return kernels.harmonic_sums(self.data, t0, n_max, n_start, workers=self.workers) / self.m
        n = np.arange(n_start, n_start + n_max)
        return np.asarray(self._cf(n * t0), dtype=np.complex128)

    def residuals(self, t0s, n_max):
        """``max_n |phi(n t0)|`` for each fundamental frequency in ``t0s``."""
        t0s = np.asarray(t0s, dtype=np.float64)
        if not self.empirical:
            n = np.arange(1, n_max + 1)
            vals = np.asarray(self._cf(np.multiply.outer(t0s, n)), dtype=np.complex128)
            return np.max(np.abs(vals), axis=-1)
        if self.workers == 1 or t0s.size < 2:
            return np.array([np.max(np.abs(self._one(t, n_max))) for t in t0s])
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            out = list(pool.map(lambda t: np.max(np.abs(self._one(t, n_max))), t0s))
        return np.array(out)

    def _one(self, t0, n_max):
        return kernels.harmonic_sums(self.data, t0, n_max, workers=1) / self.m


def _as_logcf(source, workers=None):
    return source if isinstance(source, LogCF) else LogCF(source, workers)


def whittaker_residual(source, b, n_max=N_MAX_SCAN, workers=None):
    """``max_{1<=n<=n_max} |phi_{ln X}(2 pi n / ln b)|``; zero iff b-Benford (up to n_max)."""
    b = Base(b)
    cf = _as_logcf(source, workers)
    return float(cf.residuals([2.0 * math.pi / b.ln], n_max)[0])


def golden_section_min(f, a, b, tol=1e-12, max_iter=200):
    """Minimise a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def _bisect_crossing(g, lo, hi, iters=80):
    """Leftmost-ish root of ``g`` on ``[lo, hi]`` given ``g(lo) > 0 >= g(hi)``."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(hi)):
            break
    return hi


def spectrum_upper_bound(source, tol=None, t_step=None, t_max=None, workers=None):
    """``exp(2 pi / r)`` where ``r`` is the first ``t > 0`` with ``|phi_{ln X}(t)| <= tol``.

    Every Benford base needs ``|phi(2 pi / ln b)| = 0``, so no detected base
    can exceed this. The search steps outward from 0, refining any dip with a
    golden-section search and then bisecting for the crossing. Returns
    ``math.inf`` (with a warning) when the CF never drops below ``tol`` on the
    probed range, as for a point mass.
    """
    cf = _as_logcf(source, workers)
    tol = cf.default_tol() if tol is None else tol
    scale = cf.scale
    if t_step is None:
        if scale is None:
            raise ValueError("t_step is required for a bare CF callable")
        if scale <= 0 or not math.isfinite(scale):
            warnings.warn("degenerate ln X: the spectrum has no finite bound to compute")
            return math.inf
        t_step = 0.02 / scale
    t_max = 5000 * t_step if t_max is None else t_max
    absphi = lambda t: float(abs(cf.harmonics(t, 1)[0]))

    block = 256
    prev = [1.0]  # |phi(0)| = 1
    k0 = 1
    while (k0 - 1) * t_step < t_max:
        vals = np.abs(cf.harmonics(t_step, block, n_start=k0))
        seq = np.concatenate([prev, vals])  # seq[i] is |phi((k0 - len(prev) + i) t_step)|
        base_k = k0 - len(prev)
        for i in range(1, seq.size):
            t_i = (base_k + i) * t_step
            if seq[i] <= tol:
                return math.exp(2.0 * math.pi / _bisect_crossing(lambda t: absphi(t) - tol, t_i - t_step, t_i))
            if i + 1 < seq.size and seq[i] <= _DIP and seq[i] < seq[i - 1] and seq[i] <= seq[i + 1]:
                t_min, f_min = golden_section_min(absphi, t_i - t_step, t_i + t_step, tol=1e-13 * t_i)
                if f_min <= tol:
                    return math.exp(2.0 * math.pi / _bisect_crossing(lambda t: absphi(t) - tol, t_i - t_step, t_min))
        prev = list(seq[-2:])
        k0 += block
    warnings.warn("characteristic function of ln X stays above tol on the probed range; bound reported as inf")
    return math.inf


@dataclass
class SpectrumEstimate:
    grid: np.ndarray
    residuals: np.ndarray
    detected: list
    intervals: list
    upper_bound: float
    n_max: int
    tol: float
    source: str
    m: Optional[int] = None
    _cf: Optional[LogCF] = field(default=None, repr=False, compare=False)

    def contains(self, b, rtol=1e-6):
        if any(abs(b - d) <= rtol * d for d in self.detected):
            return True
        return any(lo * (1 - rtol) <= b <= hi * (1 + rtol) for lo, hi in self.intervals)

    def to_json(self):
        return {
            "grid": [float(g) for g in self.grid],
            "residuals": [float(r) for r in self.residuals],
            "detected": [float(d) for d in self.detected],
            "intervals": [[float(lo), float(hi)] for lo, hi in self.intervals],
            "upper_bound": None if math.isinf(self.upper_bound) else float(self.upper_bound),
            "n_max": self.n_max,
            "tol": self.tol,
            "source": self.source,
            "m": self.m,
        }

    def to_tsv(self):
        detected = ",".join(f"{d:.10g}" for d in self.detected) or "none"
        ub = "inf" if math.isinf(self.upper_bound) else f"{self.upper_bound:.10g}"
        lines = [f"# columns=base,residual n_max={self.n_max} tol={self.tol:.6g} "
                 f"source={self.source} upper_bound={ub} detected={detected}"]
        lines += [f"{b:.12g}\t{r:.12g}" for b, r in zip(self.grid, self.residuals)]
        return "\n".join(lines) + "\n"


def scan_spectrum(source, b_lo, b_hi, steps=2000, n_max=N_MAX_SCAN, tol=None,
                  refine_below=0.5, workers=None):
    """Scan ``(b_lo, b_hi)`` for bases where the Whittaker residual vanishes.

    The grid is uniform in ``u = ln ln b``. Local minima with residual under
    ``refine_below`` are polished by golden-section search in ``u`` and kept
    if the refined residual is at most ``tol``. Runs of two or more grid
    points already below ``tol`` are reported as ``intervals`` (a continuum of
    Benford bases) rather than as isolated points.
    """
    b_lo, b_hi = Base(b_lo), Base(b_hi)
    if not b_lo < b_hi:
        raise ValueError(f"need 1 < b_lo < b_hi, got ({b_lo}, {b_hi})")
    if steps < 2:
        raise ValueError("steps must be >= 2")
    cf = _as_logcf(source, workers)
    tol = cf.default_tol() if tol is None else float(tol)

    u = np.linspace(math.log(b_lo.ln), math.log(b_hi.ln), steps)
    t0 = 2.0 * math.pi * np.exp(-u)
    res = cf.residuals(t0, n_max)
    grid = np.exp(np.exp(u))

    def r_of_u(uu):
        return float(cf.residuals([2.0 * math.pi * math.exp(-uu)], n_max)[0])

    below = res <= tol
    intervals, in_run = [], np.zeros(steps, dtype=bool)
    i = 0
    while i < steps:
        if below[i]:
            j = i
            while j + 1 < steps and below[j + 1]:
                j += 1
            if j > i:
                intervals.append((float(grid[i]), float(grid[j])))
                in_run[i:j + 1] = True
            i = j + 1
        else:
            i += 1

    u_tol = 1e-13 if not cf.empirical else 1e-9
    detected = []
    for i in range(steps):
        if in_run[i] or res[i] > refine_below:
            continue
        left = res[i - 1] if i > 0 else np.inf
        right = res[i + 1] if i + 1 < steps else np.inf
        if not (res[i] <= left and res[i] <= right):
            continue
        lo, hi = u[max(i - 1, 0)], u[min(i + 1, steps - 1)]
        u_star, r_star = golden_section_min(r_of_u, lo, hi, tol=u_tol)
        if res[i] < r_star:
            u_star, r_star = u[i], res[i]
        if r_star <= tol:
            b_star = math.exp(math.exp(u_star))
            if not any(abs(b_star - d) <= 1e-9 * d for d in detected):
                detected.append(b_star)
    detected.sort(reverse=True)

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            upper = spectrum_upper_bound(cf, tol=tol)
    except ValueError:
        upper = math.inf
    return SpectrumEstimate(
        grid=grid, residuals=res, detected=detected, intervals=intervals,
        upper_bound=upper, n_max=n_max, tol=tol,
        source="empirical" if cf.empirical else "analytic", m=cf.m, _cf=cf,
    )


def root_closure_check(est, b, k_max=4):
    """Check the residual stays within ``est.tol`` at ``b**(1/k)`` for ``k = 2..k_max``."""
    b = Base(b)
    if not est.contains(b):
        raise ValueError(f"base {b} is not in the detected spectrum")
    if est._cf is None:
        raise ValueError("estimate carries no characteristic function to re-evaluate")
    return all(
        whittaker_residual(est._cf, b ** (1.0 / k), est.n_max) <= est.tol
        for k in range(2, k_max + 1)
    )


def union_check(x_data, y_data, b, n_max=N_MAX_SCAN, tol=None, *, is_log=False, workers=None):
    """If x or y is b-Benford, check that the elementwise product is too.

    ``x_data`` and ``y_data`` must come from independent draws. Returns
    ``True`` vacuously when neither factor passes at ``b``.
    """
    lx = np.asarray(x_data, dtype=np.float64)
    ly = np.asarray(y_data, dtype=np.float64)
    if lx.shape != ly.shape:
        raise ValueError("x and y samples must have equal length")
    if not is_log:
        if np.any(lx <= 0) or np.any(ly <= 0):
            raise ValueError("values must be positive")
        lx, ly = np.log(lx), np.log(ly)
    m = lx.size
    tol = cf_noise(m) if tol is None else tol
    rx = whittaker_residual(lx, b, n_max, workers)
    ry = whittaker_residual(ly, b, n_max, workers)
    if rx > tol and ry > tol:
        return True
    return whittaker_residual(lx + ly, b, n_max, workers) <= tol + cf_noise(m)
