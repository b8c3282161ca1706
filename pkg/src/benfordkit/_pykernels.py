"""Pure numpy versions of the compiled kernels (same signatures and semantics)."""
import numpy as np

_CHUNK = 1 << 18


def harmonic_sums(x, t0, n_max, n_start=1):
    """Return ``sum_j exp(1j * n * t0 * x[j])`` for ``n = n_start .. n_start + n_max - 1``."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    acc = np.zeros(n_max, dtype=np.complex128)
    for lo in range(0, x.size, _CHUNK):
        arg = t0 * x[lo:lo + _CHUNK]
        z = np.exp(1j * arg)
        w = z.copy() if n_start == 1 else np.exp(1j * (n_start * arg))
        for k in range(n_max):
            acc[k] += w.sum()
            w *= z
    return acc


def ks_uniform_sorted(u):
    """Exact sup-distance between the empirical CDF of sorted ``u`` and ``F(t) = t``."""
    u = np.asarray(u, dtype=np.float64)
    m = u.size
    i = np.arange(m, dtype=np.float64)
    return float(max(np.max((i + 1) / m - u), np.max(u - i / m)))
