# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: projective scans, batched Jacobian ranks, GF(2) echelon pivots.

Quadric systems arrive as flat sparse term arrays ``(qa, qb, qc, qoff)``:
quadric ``j`` is ``sum c * x_a * x_b`` over terms ``qoff[j] <= t < qoff[j+1]``.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()


cdef int64_t _block_size(int n, int p, int k):
    cdef int64_t s = 1
    cdef int i
    for i in range(n - 1 - k):
        s *= p
    return s


def scan_zeros(int n, int p, int64_t start, int64_t stop,
               cnp.int64_t[:] qa, cnp.int64_t[:] qb, cnp.int64_t[:] qc, cnp.int64_t[:] qoff):
    """Indices in ``[start, stop)`` of normalized points of P^{n-1}(F_p) where every quadric vanishes."""
    cdef int64_t x[64]
    cdef int nq = qoff.shape[0] - 1
    cdef int k = 0, i, j, t, ok
    cdef int64_t off = 0, bs, r, idx, s
    out = []
    if n > 64 or stop <= start:
        return np.zeros(0, dtype=np.int64)
    # locate the block of ``start`` and decode its trailing digits
    bs = _block_size(n, p, 0)
    while start >= off + bs:
        off += bs
        k += 1
        bs = _block_size(n, p, k)
    for i in range(n):
        x[i] = 0
    x[k] = 1
    r = start - off
    i = n - 1
    while r:
        x[i] = r % p
        r //= p
        i -= 1
    idx = start
    while idx < stop:
        ok = 1
        for j in range(nq):
            s = 0
            for t in range(qoff[j], qoff[j + 1]):
                s += qc[t] * x[qa[t]] * x[qb[t]]
            if s % p != 0:
                ok = 0
                break
        if ok:
            out.append(idx)
        idx += 1
        # odometer over positions k+1 .. n-1
        i = n - 1
        while i > k:
            x[i] += 1
            if x[i] < p:
                break
            x[i] = 0
            i -= 1
        if i == k:
            x[k] = 0
            k += 1
            if k < n:
                x[k] = 1
    return np.array(out, dtype=np.int64)


cdef inline int64_t _md(int64_t a, int64_t p):
    a %= p
    return a + p if a < 0 else a


cdef int64_t _inv_mod(int64_t a, int64_t p):
    cdef int64_t r0 = p, r1 = a % p, s0 = 0, s1 = 1, q, tmp
    while r1:
        q = r0 // r1
        tmp = r0 - q * r1
        r0 = r1
        r1 = tmp
        tmp = s0 - q * s1
        s0 = s1
        s1 = tmp
    s0 %= p
    if s0 < 0:
        s0 += p
    return s0


def jacobian_ranks(cnp.int64_t[:, :] points, int64_t p,
                   cnp.int64_t[:] qa, cnp.int64_t[:] qb, cnp.int64_t[:] qc, cnp.int64_t[:] qoff):
    """Rank mod ``p`` of the Jacobian of the quadrics at each point (rows of ``points``)."""
    cdef Py_ssize_t npts = points.shape[0]
    cdef int n = points.shape[1]
    cdef int nq = qoff.shape[0] - 1
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ranks = np.zeros(npts, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] Jarr = np.zeros((nq, n), dtype=np.int64)
    cdef cnp.int64_t[:, :] J = Jarr
    cdef Py_ssize_t P
    cdef int i, j, t, a, b, col, rank, piv
    cdef int64_t c, inv, f, tmp
    for P in range(npts):
        for j in range(nq):
            for i in range(n):
                J[j, i] = 0
            for t in range(qoff[j], qoff[j + 1]):
                a = qa[t]
                b = qb[t]
                c = _md(qc[t], p)
                if a == b:
                    J[j, a] = _md(J[j, a] + 2 * c * points[P, a], p)
                else:
                    J[j, a] = _md(J[j, a] + c * points[P, b], p)
                    J[j, b] = _md(J[j, b] + c * points[P, a], p)
        rank = 0
        for col in range(n):
            if rank == nq:
                break
            piv = -1
            for j in range(rank, nq):
                if J[j, col] != 0:
                    piv = j
                    break
            if piv < 0:
                continue
            if piv != rank:
                for i in range(n):
                    tmp = J[piv, i]
                    J[piv, i] = J[rank, i]
                    J[rank, i] = tmp
            inv = _inv_mod(J[rank, col], p)
            for i in range(col, n):
                J[rank, i] = J[rank, i] * inv % p
            for j in range(rank + 1, nq):
                f = J[j, col]
                if f:
                    for i in range(col, n):
                        J[j, i] = _md(J[j, i] - f * J[rank, i], p)
            rank += 1
        ranks[P] = rank
    return ranks


def gf2_pivots(cnp.uint64_t[:, :] rows, int ncols):
    """Pivot columns of the row echelon form of a packed GF(2) matrix (modified in place).

    Column ``c`` lives in word ``c // 64`` at bit ``c % 64``.
    """
    cdef Py_ssize_t nrows = rows.shape[0]
    cdef Py_ssize_t nwords = rows.shape[1]
    cdef Py_ssize_t r = 0, i, j, w, piv
    cdef int col
    cdef uint64_t mask, tmp
    pivots = []
    for col in range(ncols):
        if r == nrows:
            break
        w = col >> 6
        mask = (<uint64_t>1) << (col & 63)
        piv = -1
        for i in range(r, nrows):
            if rows[i, w] & mask:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for i in range(w, nwords):
                tmp = rows[piv, i]
                rows[piv, i] = rows[r, i]
                rows[r, i] = tmp
        for i in range(piv + 1, nrows):
            if rows[i, w] & mask:
                for j in range(w, nwords):
                    rows[i, j] ^= rows[r, j]
        pivots.append(col)
        r += 1
    return np.array(pivots, dtype=np.int64)
