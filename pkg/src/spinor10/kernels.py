"""Backend selection for the hot loops.

The compiled extension is used when it imports; set ``SPINOR10_PURE=1`` to
force the numpy fallback. Both backends return identical arrays.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("SPINOR10_PURE", "") in ("", "0"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

__all__ = [
    "BACKEND",
    "backend",
    "sparse_arrays",
    "projective_size",
    "scan_zeros",
    "jacobian_ranks",
    "gf2_pivots",
    "points_from_indices",
]


def backend(name: str | None = None):
    """Module implementing the kernels: ``"cython"``, ``"python"`` or the active one."""
    if name is None:
        return _impl
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


def sparse_arrays(terms_per_quadric, p: int | None = None):
    """Flatten ``[[(a, b, c), ...], ...]`` into ``(qa, qb, qc, qoff)`` int64 arrays."""
    qa, qb, qc, qoff = [], [], [], [0]
    for terms in terms_per_quadric:
        for a, b, c in terms:
            c = int(c) % p if p else int(c)
            if c:
                qa.append(a)
                qb.append(b)
                qc.append(c)
        qoff.append(len(qa))
    return tuple(np.array(v, dtype=np.int64) for v in (qa, qb, qc, qoff))


def projective_size(n: int, p: int) -> int:
    return (p**n - 1) // (p - 1)


def scan_zeros(n, p, start, stop, arrays, impl=None):
    return (impl or _impl).scan_zeros(n, p, start, stop, *arrays)


def jacobian_ranks(points, p, arrays, impl=None):
    pts = np.ascontiguousarray(np.asarray(points, dtype=np.int64) % p)
    if pts.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return (impl or _impl).jacobian_ranks(pts, p, *arrays)


def gf2_pivots(rows, ncols, impl=None):
    """Pivot columns of a packed GF(2) matrix; ``rows`` is not modified."""
    work = np.array(rows, dtype=np.uint64, copy=True, order="C")
    if work.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return (impl or _impl).gf2_pivots(work, ncols)


points_from_indices = _pykernels.points_from_indices
