"""Numpy implementations of the compiled kernels, same signatures and results."""

from __future__ import annotations

import numpy as np

CHUNK = 1 << 20


def _block_sizes(n: int, p: int) -> list[int]:
    return [p ** (n - 1 - k) for k in range(n)]


def points_from_indices(idx: np.ndarray, n: int, p: int) -> np.ndarray:
    """Decode canonical point indices (leading-1 position, then base-p tail) to coordinates."""
    idx = np.asarray(idx, dtype=np.int64)
    out = np.zeros((idx.shape[0], n), dtype=np.int64)
    off = 0
    for k, bs in enumerate(_block_sizes(n, p)):
        sel = (idx >= off) & (idx < off + bs)
        if sel.any():
            r = idx[sel] - off
            block = np.zeros((r.shape[0], n), dtype=np.int64)
            block[:, k] = 1
            for i in range(n - 1, k, -1):
                block[:, i] = r % p
                r = r // p
            out[sel] = block
        off += bs
    return out


def scan_zeros(n, p, start, stop, qa, qb, qc, qoff):
    found = []
    nq = len(qoff) - 1
    for lo in range(start, stop, CHUNK):
        hi = min(stop, lo + CHUNK)
        idx = np.arange(lo, hi, dtype=np.int64)
        pts = points_from_indices(idx, n, p)
        alive = np.ones(idx.shape[0], dtype=bool)
        for j in range(nq):
            live = np.nonzero(alive)[0]
            if live.size == 0:
                break
            sub = pts[live]
            s = np.zeros(live.size, dtype=np.int64)
            for t in range(qoff[j], qoff[j + 1]):
                s += qc[t] * sub[:, qa[t]] * sub[:, qb[t]]
            alive[live[s % p != 0]] = False
        found.append(idx[alive])
    if not found:
        return np.zeros(0, dtype=np.int64)
    return np.concatenate(found)


def jacobian_ranks(points, p, qa, qb, qc, qoff):
    points = np.asarray(points, dtype=np.int64)
    npts, n = points.shape
    nq = len(qoff) - 1
    J = np.zeros((npts, nq, n), dtype=np.int64)
    for j in range(nq):
        for t in range(qoff[j], qoff[j + 1]):
            a, b, c = int(qa[t]), int(qb[t]), int(qc[t]) % p
            if a == b:
                J[:, j, a] += 2 * c * points[:, a]
            else:
                J[:, j, a] += c * points[:, b]
                J[:, j, b] += c * points[:, a]
    J %= p
    ranks = np.zeros(npts, dtype=np.int64)
    rows = np.arange(npts)
    for col in range(n):
        # per point: first row at or below its current rank with a nonzero entry
        cand = J[:, :, col] != 0
        cand &= np.arange(nq)[None, :] >= ranks[:, None]
        has = cand.any(axis=1) & (ranks < nq)
        if not has.any():
            continue
        piv = np.argmax(cand, axis=1)
        sel = rows[has]
        r = ranks[sel]
        pr = piv[sel]
        top = J[sel, pr].copy()
        J[sel, pr] = J[sel, r]
        J[sel, r] = top
        inv = np.array([pow(int(v), -1, p) for v in top[:, col]], dtype=np.int64)
        top = top * inv[:, None] % p
        J[sel, r] = top
        f = J[sel, :, col].copy()
        below = np.arange(nq)[None, :] > r[:, None]
        f = np.where(below, f, 0)
        J[sel] = (J[sel] - f[:, :, None] * top[:, None, :]) % p
        ranks[sel] += 1
    return ranks


def gf2_pivots(rows, ncols):
    rows = np.ascontiguousarray(rows, dtype=np.uint64)
    bits = np.unpackbits(rows.view(np.uint8), axis=1, bitorder="little")[:, :ncols].astype(bool)
    pivots = []
    r = 0
    nrows = bits.shape[0]
    for col in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(bits[r:, col])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            bits[[r, piv]] = bits[[piv, r]]
        hit = np.nonzero(bits[r + 1:, col])[0] + r + 1
        if hit.size:
            bits[hit] ^= bits[r]
        pivots.append(col)
        r += 1
    return np.array(pivots, dtype=np.int64)
