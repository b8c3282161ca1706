"""Fourier coefficients of distributions on [0, 1).

A distribution on the circle is determined by the values ``phi(2 pi n) =
E exp(2 pi i n X)``. These are unchanged by reducing X mod 1, multiply under
independent addition mod 1, and recover the CDF through the partial sums of
:func:`reconstruct_cdf`.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels

UNIFORM = "uniform"

#: default number of coefficients for analysis; reconstruction fixtures use 512
N_MAX_ANALYSIS = 64


def cf_noise(m):
    """Pointwise noise floor 4/sqrt(m) for an empirical characteristic function."""
    return 4.0 / math.sqrt(m)


@dataclass
class FourierSpectrum:
    """Coefficients ``phi(2 pi n)`` for ``n = 0..n_max`` plus the mean of X.

    ``phi(-2 pi n)`` is the complex conjugate of ``coeffs[n]``. ``mean`` is
    ``None`` when it cannot be known (see :func:`product_spectrum`).
    """

    coeffs: np.ndarray
    mean: Optional[float]
    source: str = "analytic"
    m: Optional[int] = None

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128).copy()
        if c.ndim != 1 or c.size < 2:
            raise ValueError("need coefficients for n = 0..n_max with n_max >= 1")
        if np.any(np.abs(c) > 1 + 1e-9):
            raise ValueError("a characteristic function is bounded by 1 in modulus")
        c[0] = 1.0
        self.coeffs = c

    @property
    def n_max(self):
        return self.coeffs.size - 1

    def phi(self, n):
        """``phi(2 pi n)`` for any integer ``|n| <= n_max``."""
        if abs(n) > self.n_max:
            raise IndexError(f"|n| = {abs(n)} exceeds n_max = {self.n_max}")
        return self.coeffs[n] if n >= 0 else np.conj(self.coeffs[-n])

    def to_json(self):
        return {
            "n_max": self.n_max,
            "mean": self.mean,
            "source": self.source,
            "m": self.m,
            "coeffs": [{"n": n, "re": float(z.real), "im": float(z.imag)}
                       for n, z in enumerate(self.coeffs)],
        }

    @classmethod
    def from_json(cls, obj):
        coeffs = np.zeros(obj["n_max"] + 1, dtype=np.complex128)
        for item in obj["coeffs"]:
            coeffs[item["n"]] = complex(item["re"], item["im"])
        return cls(coeffs, obj["mean"], obj.get("source", "analytic"), obj.get("m"))


def empirical_spectrum(u, n_max=N_MAX_ANALYSIS, workers=None):
    """Sample coefficients ``(1/m) sum_j exp(2 pi i n x_j)``.

    ``u`` may be a :class:`~benfordkit.distributions.UnitDistribution` or a
    raw array; raw values need not be reduced mod 1 first.
    """
    x = u.samples if hasattr(u, "samples") and u.samples is not None else np.asarray(u, dtype=float)
    m = x.size
    if m == 0:
        raise ValueError("empirical spectrum of an empty sample")
    sums = kernels.harmonic_sums(x, 2.0 * math.pi, n_max, workers=workers)
    coeffs = np.concatenate([[1.0 + 0j], sums / m])
    frac = x - np.floor(x)
    return FourierSpectrum(coeffs, float(frac.mean()), source="empirical", m=m)


def analytic_spectrum(cf, n_max, mean):
    """Spectrum from a closed-form characteristic function of a [0, 1) variable."""
    n = np.arange(n_max + 1)
    coeffs = np.asarray(cf(2.0 * math.pi * n), dtype=np.complex128)
    return FourierSpectrum(coeffs, mean, source="analytic")


def cdf_coefficient(s, n):
    """Fourier coefficient of the CDF: ``(phi(-2 pi n) - 1) / (2 pi i n)``, or ``1 - EX`` at 0."""
    if abs(n) > s.n_max:
        raise IndexError(f"|n| = {abs(n)} exceeds n_max = {s.n_max}")
    if n == 0:
        if s.mean is None:
            raise ValueError("the mean is unavailable for this spectrum")
        return complex(1.0 - s.mean)
    return complex((s.phi(-n) - 1.0) / (2j * math.pi * n))


def reconstruct_cdf(s, x, terms=None):
    """Symmetric partial Fourier sum for ``(F(x) + F(x-)) / 2`` at ``0 < x < 1``.

    Terms ``n`` and ``-n`` are combined as ``2 Re(F^(n) e^{2 pi i n x})`` so
    the result is real by construction. Subtracting ``x`` gives the periodic
    function ``(F(x) + F(x-))/2 - x`` whose coefficients are ``phi(-2 pi n)/(2 pi i n)``.
    """
    terms = s.n_max if terms is None else terms
    if terms > s.n_max:
        raise IndexError(f"terms = {terms} exceeds n_max = {s.n_max}")
    x_arr = np.asarray(x, dtype=float)
    if np.any((x_arr <= 0) | (x_arr >= 1)):
        raise ValueError("reconstruction is defined on the open interval (0, 1)")
    if s.mean is None:
        raise ValueError("the mean is unavailable for this spectrum")
    n = np.arange(1, terms + 1)
    fhat = (np.conj(s.coeffs[1:terms + 1]) - 1.0) / (2j * math.pi * n)
    phase = np.exp(2j * math.pi * np.multiply.outer(x_arr, n))
    val = (1.0 - s.mean) + 2.0 * np.real(phase @ fhat)
    return float(val) if np.ndim(x) == 0 else val


def detect_period(s, tol=None):
    """Largest ``N <= n_max/2`` whose non-multiples all have ``|phi(2 pi n)| <= tol``.

    Returns :data:`UNIFORM` when every coefficient is below ``tol`` and
    ``None`` when only the trivial ``N = 1`` qualifies.
    """
    if tol is None:
        if s.m is None:
            raise ValueError("tol is required for analytic spectra")
        tol = cf_noise(s.m)
    if tol <= 0:
        raise ValueError("tol must be positive")
    big = np.abs(s.coeffs[1:]) > tol
    if not big.any():
        return UNIFORM
    idx = np.nonzero(big)[0] + 1
    for N in range(s.n_max // 2, 1, -1):
        if np.all(idx % N == 0):
            return N
    return None


def product_spectrum(sx, sy):
    """Spectrum of ``(X + Y) mod 1`` for independent X, Y: coefficientwise product."""
    if sx.n_max != sy.n_max:
        raise ValueError(f"n_max mismatch: {sx.n_max} vs {sy.n_max}")
    src = "analytic" if sx.source == sy.source == "analytic" else "empirical"
    m = None if src == "analytic" else min(v for v in (sx.m, sy.m) if v is not None)
    # E[(X+Y) mod 1] is not a function of EX and EY
    return FourierSpectrum(sx.coeffs * sy.coeffs, None, source=src, m=m)


def lattice_test(s, n, tol):
    """Whether ``|phi(2 pi n)| >= 1 - tol``: X sits (within tol) on a shifted lattice ``(k + theta)/n``."""
    if not 1 <= n <= s.n_max:
        raise IndexError(f"n must lie in 1..{s.n_max}")
    return bool(abs(s.coeffs[n]) >= 1.0 - tol)


def lattice_shift(s, n):
    """The shift ``theta = arg(phi(2 pi n)) / (2 pi)`` in ``[0, 1)``."""
    theta = np.angle(s.coeffs[n]) / (2.0 * math.pi)
    return float(theta - math.floor(theta))
