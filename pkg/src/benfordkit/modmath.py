"""Significand and modulo arithmetic for arbitrary real bases b > 1.

Scalar functions raise on bad input; the ``*_array`` variants work on numpy
arrays and are what the statistical modules use.
"""
import math

import numpy as np

#: log_b(x) within this distance of an integer is treated as an exact power of b.
SEAM_TOL = 1e-12


class Base(float):
    """A significand base: a finite real number strictly greater than 1."""

    def __new__(cls, b):
        b = float(b)
        if not math.isfinite(b) or b <= 1.0:
            raise ValueError(f"base must be a finite real > 1, got {b!r}")
        return super().__new__(cls, b)

    @property
    def ln(self):
        return math.log(self)


def mod_z(x, z):
    """``x mod z = x - z*floor(x/z)``, always in ``[0, z)``."""
    x = float(x)
    z = float(z)
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x!r}")
    if not (z > 0 and math.isfinite(z)):
        raise ValueError(f"modulus must be a finite positive real, got {z!r}")
    r = x - z * math.floor(x / z)
    # floor(x/z) can be off by one when x/z rounds up to an integer
    if r >= z:
        r -= z
    if r < 0:
        r += z
    return 0.0 if r >= z else r


def _check_positive(x):
    x = float(x)
    if not (x > 0) or not math.isfinite(x):
        raise ValueError(f"significand is defined only for finite x > 0, got {x!r}")
    return x


def _split_log(x, b):
    """Return (k, r) with log_b x = k + r, k integer, r in [0, 1), seam snapped."""
    lg = math.log(x) / math.log(b)
    k = math.floor(lg)
    r = lg - k
    if r >= 1.0 - SEAM_TOL:
        k += 1
        r = 0.0
    elif r < SEAM_TOL:
        r = 0.0
    return k, r


def significand(x, b):
    """S_b(x): the unique ``x * b**k`` (k integer) lying in ``[1, b)``.

    >>> significand(0.025, 10)
    2.5
    >>> significand(10, 2)
    1.25
    """
    x = _check_positive(x)
    b = Base(b)
    k, r = _split_log(x, b)
    if r == 0.0:
        return 1.0
    s = x / b**k if k >= 0 else x * b ** (-k)
    if s >= b:
        s /= b
    elif s < 1.0:
        s *= b
    return s


def log_mantissa(x, b):
    """``log_b(x) mod 1`` in ``[0, 1)``; equals ``log_b(significand(x, b))``."""
    x = _check_positive(x)
    b = Base(b)
    return _split_log(x, b)[1]


def scale_mod(a, u):
    """The circle map ``T_a(u) = a*u mod 1``.

    Only for integer ``a`` does ``scale_mod(a, x mod 1) == a*x mod 1`` hold
    for every real x.
    """
    a = float(a)
    if not (a > 0) or not math.isfinite(a):
        raise ValueError(f"scale factor must be a finite positive real, got {a!r}")
    u = float(u)
    if not (0.0 <= u < 1.0):
        raise ValueError(f"u must lie in [0, 1), got {u!r}")
    return mod_z(a * u, 1.0)


def power_base_identity_check(x, b, a, rtol=1e-9):
    """Check ``S_b(x**a) == S_{b**(1/a)}(x)**a`` to relative tolerance ``rtol``."""
    x = _check_positive(x)
    b = Base(b)
    a = float(a)
    if not (a > 0):
        raise ValueError("exponent a must be positive")
    try:
        xa = x**a
    except OverflowError:
        raise OverflowError(f"x**a overflows for x={x}, a={a}") from None
    if not math.isfinite(xa) or xa == 0.0:
        raise OverflowError(f"x**a is not representable for x={x}, a={a}")
    lhs = significand(xa, b)
    root = b ** (1.0 / a)
    if root <= 1.0:
        raise OverflowError(f"b**(1/a) rounds to 1 for b={b}, a={a}")
    rhs = significand(x, root) ** a
    # both sides live on the circle [1, b): values near b and near 1 are neighbours
    rel = abs(lhs - rhs) / max(lhs, rhs)
    wrap = abs(lhs - rhs / b) / lhs if rhs > lhs else abs(lhs / b - rhs) / rhs
    return min(rel, wrap) <= rtol


# --- vectorised forms -------------------------------------------------------

def log_mantissa_array(x, b, *, is_log=False):
    """Vectorised ``log_mantissa``.

    With ``is_log=True`` the input holds natural logarithms ``ln x``, which
    lets heavy-tailed variables be analysed without overflowing ``exp``.
    """
    b = Base(b)
    arr = np.asarray(x, dtype=np.float64)
    if is_log:
        if not np.all(np.isfinite(arr)):
            raise ValueError("log data must be finite")
        lg = arr / b.ln
    else:
        if arr.size and not (np.all(arr > 0) and np.all(np.isfinite(arr))):
            raise ValueError("all values must be finite and > 0")
        lg = np.log(arr) / b.ln
    r = lg - np.floor(lg)
    r[(r < SEAM_TOL) | (r >= 1.0 - SEAM_TOL)] = 0.0
    return r


def significand_array(x, b):
    """Vectorised ``significand``; computed as ``b**log_mantissa``."""
    b = Base(b)
    r = log_mantissa_array(x, b)
    s = np.power(b, r)
    s[r == 0.0] = 1.0
    # b**r can round up to b for r just below 1
    s = np.where(s >= b, np.nextafter(b, 1.0), s)
    return s


def mod1_array(x):
    x = np.asarray(x, dtype=np.float64)
    r = x - np.floor(x)
    r[r >= 1.0] = 0.0
    return r


def scale_mod_array(a, u):
    a = float(a)
    if not (a > 0):
        raise ValueError("scale factor must be positive")
    return mod1_array(a * np.asarray(u, dtype=np.float64))
