"""Backend selection for the hot loops.

The compiled extension ``_ckernels`` is used when it imports; otherwise the
numpy implementations in ``_pykernels`` take over. Set ``BENFORD_PURE_PYTHON=1``
to force the fallback.

Worker count comes from ``BENFORD_THREADS`` (unset means 1, ``0`` means one
per CPU). Partial sums are always combined in chunk order, so results are
bit-stable for a fixed worker count; one worker is the reference mode.
"""
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _pykernels

if os.environ.get("BENFORD_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on build
        _impl = _pykernels
        BACKEND = "python"

_MIN_CHUNK = 1 << 16


def resolve_workers(workers=None):
    """Number of threads to use; explicit argument wins over ``BENFORD_THREADS``."""
    if workers is None:
        raw = os.environ.get("BENFORD_THREADS", "1").strip() or "1"
        try:
            workers = int(raw)
        except ValueError:
            raise ValueError(f"BENFORD_THREADS must be an integer, got {raw!r}") from None
    if workers < 0:
        raise ValueError("worker count must be >= 0")
    if workers == 0:
        workers = os.cpu_count() or 1
    return workers


def harmonic_sums(x, t0, n_max, n_start=1, workers=None, impl=None):
    """Unnormalized sums ``sum_j exp(i n t0 x_j)`` for ``n_max`` consecutive harmonics."""
    impl = impl or _impl
    x = np.ascontiguousarray(x, dtype=np.float64)
    workers = resolve_workers(workers)
    if workers == 1 or x.size < 2 * _MIN_CHUNK:
        return impl.harmonic_sums(x, float(t0), int(n_max), int(n_start))
    chunks = np.array_split(x, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(
            lambda c: impl.harmonic_sums(np.ascontiguousarray(c), float(t0), int(n_max), int(n_start)),
            chunks,
        ))
    total = parts[0].copy()
    for p in parts[1:]:
        total += p
    return total


def ks_uniform_sorted(u, impl=None):
    impl = impl or _impl
    u = np.ascontiguousarray(u, dtype=np.float64)
    if u.size == 0:
        raise ValueError("empty sample")
    return float(impl.ks_uniform_sorted(u))
