"""Samplers and closed-form models for the distribution families used throughout.

Every sampler takes an explicit integer seed. Independent streams for
replicates or sub-draws come from :func:`make_rng`, which folds the seed and
any number of keys (ints or strings) into a ``numpy.random.SeedSequence``
spawn key, so the stream for ``(seed, "x", 3)`` never depends on what else
was drawn.
"""
import math
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special

from .modmath import Base


# --- RNG ----------------------------------------------------------------------

def _key_int(key):
    if isinstance(key, (int, np.integer)):
        if key < 0:
            raise ValueError("stream keys must be non-negative")
        return int(key)
    return zlib.crc32(str(key).encode("utf-8"))


def make_rng(seed, *keys):
    """Generator for the child stream identified by ``(seed, *keys)``."""
    if seed is None or int(seed) < 0:
        raise ValueError("seed must be a non-negative integer")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(_key_int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed, *keys):
    """Integer seed for the child stream ``(seed, *keys)``; feeds samplers that take a seed."""
    if seed is None or int(seed) < 0:
        raise ValueError("seed must be a non-negative integer")
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(_key_int(k) for k in keys))
    return int(ss.generate_state(2, dtype=np.uint64)[0] >> 1)


# --- uniform-exponent variates: X = beta ** U[c, d) ----------------------------

def _uniform_cf(t, lo, hi):
    """Characteristic function of U[lo, hi) evaluated at ``t`` (array-friendly)."""
    t = np.asarray(t, dtype=np.float64)
    half = 0.5 * (hi - lo) * t
    return np.exp(0.5j * (lo + hi) * t) * np.sinc(half / np.pi)


@dataclass(frozen=True)
class UniformExponentVariate:
    """``X = beta ** U`` with ``U ~ U[c, d)``; Benford exactly for bases beta**((d-c)/n)."""

    beta: float
    c: float = 0.0
    d: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "beta", Base(self.beta))
        if not (math.isfinite(self.c) and math.isfinite(self.d)) or not self.c < self.d:
            raise ValueError(f"need finite c < d, got c={self.c}, d={self.d}")

    @property
    def log_scale(self):
        """Standard deviation of ln X."""
        return (self.d - self.c) * self.beta.ln / math.sqrt(12.0)

    def cf_log(self, t):
        """Characteristic function of ln X."""
        ln_b = self.beta.ln
        return _uniform_cf(t, self.c * ln_b, self.d * ln_b)

    def cf_log_base(self, t):
        """Characteristic function of log_beta X ~ U[c, d)."""
        return _uniform_cf(t, self.c, self.d)

    def sample_log(self, n, seed):
        """Natural logarithms of ``n`` draws."""
        u = make_rng(seed, "uexp").random(n)
        return (self.c + (self.d - self.c) * u) * self.beta.ln

    def sample(self, n, seed):
        u = make_rng(seed, "uexp").random(n)
        return np.power(float(self.beta), self.c + (self.d - self.c) * u)


def sample_uniform_exponent(v, n, seed):
    """``n`` independent draws of ``beta ** U[c, d)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return v.sample(n, seed)


def analytic_benford_spectrum(v, k):
    """First ``k`` bases of the exact Benford spectrum ``{beta**((d-c)/n)}``, descending."""
    if k < 1:
        raise ValueError("k must be >= 1")
    span = v.d - v.c
    return [float(v.beta) ** (span / n) for n in range(1, k + 1)]


# --- Fejér variate: density (1 - cos(a x)) / (pi a x^2) ------------------------

#: Half-width of the tabulated core for the standard (a = 1) variable; the tail
#: mass beyond it is about 2 / (pi * Y_MAX) = 1e-6.
FEJER_Y_MAX = 2.0 / (math.pi * 1e-6)
FEJER_GRID = 1 << 16


def fejer_abs_cdf(y):
    """P(|Y| <= y) for the standard Fejér variable (density (1 - cos y) / (pi y^2))."""
    y = np.abs(np.asarray(y, dtype=np.float64))
    si, _ = special.sici(y)
    with np.errstate(invalid="ignore", divide="ignore"):
        tail = np.where(y > 0, 2.0 * np.sin(0.5 * y) ** 2 / np.where(y > 0, y, 1.0), 0.0)
    return (2.0 / math.pi) * (si - tail)


def fejer_cdf(x, a=1.0):
    """CDF of the Fejér variable with CF half-width ``a``."""
    y = a * np.asarray(x, dtype=np.float64)
    return 0.5 + 0.5 * np.sign(y) * fejer_abs_cdf(y)


@lru_cache(maxsize=1)
def _fejer_table():
    # asinh-spaced nodes: fine where the density oscillates, coarse in the 1/y^2 tail
    s = np.linspace(0.0, math.asinh(FEJER_Y_MAX), FEJER_GRID)
    y = np.sinh(s)
    g = fejer_abs_cdf(y)
    g = np.maximum.accumulate(g)
    return y, g


def _fejer_abs_quantile(v):
    y, g = _fejer_table()
    g_max = g[-1]
    tail_mass = 1.0 - g_max
    out = np.interp(v, g, y)
    hi = v > g_max
    # beyond the table the density is ~ 1/(pi y^2) per side: invert its Pareto tail exactly
    out[hi] = y[-1] * tail_mass / (1.0 - v[hi])
    return out


@dataclass(frozen=True)
class FejerVariate:
    """Z with triangular characteristic function ``max(0, 1 - |t|/a)``.

    ``exp(Z)`` is Benford for every base in ``(1, exp(2 pi / a)]``.
    """

    a: float

    def __post_init__(self):
        if not (self.a > 0) or not math.isfinite(self.a):
            raise ValueError("a must be a finite positive real")

    @classmethod
    def for_base(cls, beta):
        """The variate whose ``exp(Z)`` is Benford on ``(1, beta]``."""
        return cls(2.0 * math.pi / Base(beta).ln)

    @property
    def beta(self):
        return math.exp(2.0 * math.pi / self.a)

    @property
    def log_scale(self):
        # infinite variance; 1/a is the width of the central lobe
        return 1.0 / self.a

    def cf_log(self, t):
        t = np.asarray(t, dtype=np.float64)
        return np.maximum(0.0, 1.0 - np.abs(t) / self.a).astype(np.complex128)

    def cdf(self, x):
        return fejer_cdf(x, self.a)

    def pdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        ax = self.a * x
        with np.errstate(invalid="ignore", divide="ignore"):
            val = 2.0 * np.sin(0.5 * ax) ** 2 / (math.pi * self.a * np.where(x != 0, x, 1.0) ** 2)
        return np.where(x == 0, self.a / (2.0 * math.pi), val)

    def sample(self, n, seed):
        """Draws of Z by inverse transform (the log of the Benford variable)."""
        rng = make_rng(seed, "fejer")
        v = rng.random(n)
        sign = np.where(rng.random(n) < 0.5, -1.0, 1.0)
        return sign * _fejer_abs_quantile(v) / self.a


def sample_fejer(v, n, seed):
    """``n`` independent draws from the density ``(1 - cos(a x)) / (pi a x^2)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return v.sample(n, seed)


# --- lattice variates ---------------------------------------------------------

@dataclass(frozen=True)
class LatticeVariate:
    """A discrete variable on rationals in ``[0, 1)``, atoms kept as exact fractions."""

    atoms: tuple
    rank: int = field(init=False)

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("a lattice variate needs at least one atom")
        norm = []
        for value, prob in self.atoms:
            value = Fraction(value)
            if not (0 <= value < 1):
                raise ValueError(f"atom {value} not in [0, 1)")
            prob = float(prob)
            if prob < 0:
                raise ValueError("probabilities must be non-negative")
            norm.append((value, prob))
        total = sum(p for _, p in norm)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "atoms", tuple(norm))
        object.__setattr__(self, "rank", math.lcm(*(v.denominator for v, _ in norm)))

    @classmethod
    def uniform_on(cls, n):
        """Uniform on ``{0, 1/n, ..., (n-1)/n}``."""
        return cls(tuple((Fraction(k, n), 1.0 / n) for k in range(n)))

    @property
    def values(self):
        return np.array([float(v) for v, _ in self.atoms])

    @property
    def probs(self):
        return np.array([p for _, p in self.atoms])

    def cf(self, t):
        t = np.asarray(t, dtype=np.float64)
        return np.sum(self.probs * np.exp(1j * np.multiply.outer(t, self.values)), axis=-1)

    def cf_log(self, t):
        """Characteristic function of ln Y (requires every atom > 0)."""
        vals = self.values
        if np.any(vals <= 0):
            raise ValueError("ln Y is undefined for an atom at 0")
        t = np.asarray(t, dtype=np.float64)
        return np.sum(self.probs * np.exp(1j * np.multiply.outer(t, np.log(vals))), axis=-1)

    @property
    def log_scale(self):
        vals = self.values
        if np.any(vals <= 0):
            return 0.0
        lv = np.log(vals)
        mean = np.sum(self.probs * lv)
        return float(np.sqrt(np.sum(self.probs * (lv - mean) ** 2)))

    def sample(self, n, seed):
        idx = make_rng(seed, "lattice").choice(len(self.atoms), size=n, p=self.probs)
        return self.values[idx]


def lattice_rank(v):
    """Least N with N * atom integral for every atom: the lcm of reduced denominators."""
    return v.rank


def analytic_cf(v, t, scale="ln"):
    """Closed-form characteristic function.

    For :class:`UniformExponentVariate` ``scale`` picks the CF of ``ln X``
    (``"ln"``) or of ``log_beta X`` (``"log_base"``). Fejér variates return the
    CF of Z itself and lattice variates the CF of Y.
    """
    if isinstance(v, UniformExponentVariate):
        if scale == "ln":
            return v.cf_log(t)
        if scale == "log_base":
            return v.cf_log_base(t)
        raise ValueError(f"unknown scale {scale!r}")
    if isinstance(v, FejerVariate):
        return v.cf_log(t)
    if isinstance(v, LatticeVariate):
        return v.cf(t)
    raise TypeError(f"no closed-form CF for {type(v).__name__}")


# --- distributions on [0, 1) --------------------------------------------------

@dataclass
class UnitDistribution:
    """A distribution on ``[0, 1)``: an empirical sample or an analytic model.

    Analytic models carry a CDF, optionally a density, a characteristic
    function (of the variable itself, so Fourier coefficients are
    ``cf(2 pi n)``), the mean, and any breakpoints where CDF or density jump.
    """

    samples: Optional[np.ndarray] = None
    cdf: Optional[Callable] = None
    pdf: Optional[Callable] = None
    cf: Optional[Callable] = None
    mean: Optional[float] = None
    breakpoints: Sequence[float] = ()
    sampler: Optional[Callable] = field(default=None, repr=False)
    label: str = ""

    def __post_init__(self):
        if self.samples is not None:
            s = np.sort(np.asarray(self.samples, dtype=np.float64))
            if s.size == 0:
                raise ValueError("empirical distribution needs at least one sample")
            if s[0] < 0 or s[-1] >= 1:
                raise ValueError("empirical samples must lie in [0, 1)")
            self.samples = s
            if self.mean is None:
                self.mean = float(s.mean())
        elif self.cdf is None:
            raise ValueError("give either samples or an analytic CDF")

    @property
    def is_empirical(self):
        return self.samples is not None

    @property
    def m(self):
        return None if self.samples is None else self.samples.size

    @classmethod
    def empirical(cls, samples, label=""):
        return cls(samples=samples, label=label)

    def sample(self, n, seed):
        if self.sampler is None:
            raise TypeError(f"{self.label or 'distribution'} has no sampler")
        return self.sampler(n, seed)


def uniform_unit():
    return UnitDistribution(
        cdf=lambda x: np.clip(np.asarray(x, dtype=float), 0.0, 1.0),
        pdf=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        cf=lambda t: _uniform_cf(t, 0.0, 1.0),
        mean=0.5,
        sampler=lambda n, seed: make_rng(seed, "unit-uniform").random(n),
        label="uniform",
    )


def point_mass_unit(v):
    v = float(v)
    if not 0 <= v < 1:
        raise ValueError("point mass must sit in [0, 1)")
    return UnitDistribution(
        cdf=lambda x: (np.asarray(x, dtype=float) >= v).astype(float),
        cf=lambda t: np.exp(1j * v * np.asarray(t, dtype=float)),
        mean=v,
        breakpoints=(v,),
        sampler=lambda n, seed: np.full(n, v),
        label=f"point mass at {v}",
    )


def triangular_unit():
    """Symmetric triangular distribution on [0, 1] (sum of two U[0, 1/2))."""

    def cdf(x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        return np.where(x <= 0.5, 2.0 * x**2, 1.0 - 2.0 * (1.0 - x) ** 2)

    def pdf(x):
        x = np.asarray(x, dtype=float)
        return np.where((x < 0) | (x > 1), 0.0, np.where(x <= 0.5, 4.0 * x, 4.0 * (1.0 - x)))

    def sampler(n, seed):
        rng = make_rng(seed, "triangular")
        return 0.5 * (rng.random(n) + rng.random(n))

    return UnitDistribution(
        cdf=cdf, pdf=pdf, cf=lambda t: _uniform_cf(t, 0.0, 0.5) ** 2, mean=0.5,
        breakpoints=(0.5,), sampler=sampler, label="triangular",
    )


@dataclass(frozen=True)
class CombVariate:
    """Density ``height`` on ``[k/N, (k + duty)/N)``, k = 0..N-1, zero elsewhere.

    Its CDF satisfies ``F(x + k/N) = F(x) + k/N``; the default duty 1/2 gives
    height 2 and a sup-distance to uniform of exactly ``1/(2N)``.
    """

    N: int
    duty: float = 0.5

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError("period denominator N must be a positive integer")
        if not 0 < self.duty <= 1:
            raise ValueError("duty must lie in (0, 1]")

    @property
    def height(self):
        return 1.0 / self.duty

    @property
    def breakpoints(self):
        pts = []
        for k in range(self.N):
            pts += [k / self.N, (k + self.duty) / self.N]
        return tuple(p for p in pts if 0 <= p < 1)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        frac = x * self.N - np.floor(x * self.N)
        inside = (x >= 0) & (x < 1) & (frac < self.duty)
        return np.where(inside, self.height, 0.0)

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        cell = np.floor(x * self.N)
        frac = x * self.N - cell
        return np.minimum((cell + np.minimum(frac, self.duty) / self.duty) / self.N, 1.0)

    def cf(self, t):
        t = np.asarray(t, dtype=np.float64)
        ks = np.arange(self.N)
        lattice = np.sum(np.exp(1j * np.multiply.outer(t, ks / self.N)), axis=-1) / self.N
        return lattice * _uniform_cf(t, 0.0, self.duty / self.N)

    @property
    def mean(self):
        return (self.N - 1) / (2.0 * self.N) + self.duty / (2.0 * self.N)

    def sample(self, n, seed):
        rng = make_rng(seed, "comb", self.N)
        k = rng.integers(0, self.N, size=n)
        return (k + self.duty * rng.random(n)) / self.N

    def unit(self):
        return UnitDistribution(
            cdf=self.cdf, pdf=self.pdf, cf=self.cf, mean=self.mean,
            breakpoints=self.breakpoints, sampler=self.sample, label=f"comb(1/{self.N})",
        )


# --- family spec strings --------------------------------------------------------

def parse_family(spec):
    """Parse ``uexp:beta:c:d``, ``fejer:beta`` or ``lattice:p/q:w,...``."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "uexp":
            parts = rest.split(":")
            if len(parts) != 3:
                raise ValueError("expected uexp:beta:c:d")
            beta, c, d = (float(p) for p in parts)
            return UniformExponentVariate(beta, c, d)
        if kind == "fejer":
            return FejerVariate.for_base(float(rest))
        if kind == "lattice":
            atoms = []
            for item in rest.split(","):
                value, _, weight = item.partition(":")
                if not weight:
                    raise ValueError(f"lattice atom {item!r} lacks a weight")
                atoms.append((Fraction(value.strip()), float(weight)))
            return LatticeVariate(tuple(atoms))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed family spec {spec!r}: {exc}") from None
    raise ValueError(f"unknown family {kind!r} in {spec!r} (use uexp, fejer or lattice)")
