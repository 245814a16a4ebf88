"""Bit-packed GF(2) linear algebra: a row is a Python int, bit ``j`` is column ``j``."""

from __future__ import annotations

from typing import Iterable, Sequence

__all__ = ["pack", "unpack", "rref", "rank", "kernel", "in_span"]


def pack(row: Sequence[int]) -> int:
    v = 0
    for j, x in enumerate(row):
        if x & 1:
            v |= 1 << j
    return v


def unpack(v: int, ncols: int) -> list[int]:
    return [(v >> j) & 1 for j in range(ncols)]


def rref(rows: Iterable[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced echelon form with pivots taken left to right (lowest bit first)."""
    work = [r for r in rows if r]
    pivots = []
    out = []
    for c in range(ncols):
        bit = 1 << c
        piv = next((i for i, r in enumerate(work) if r & bit), None)
        if piv is None:
            continue
        prow = work.pop(piv)
        work = [r ^ prow if r & bit else r for r in work]
        out = [r ^ prow if r & bit else r for r in out]
        work = [r for r in work if r]
        out.append(prow)
        pivots.append(c)
    return out, pivots


def rank(rows: Iterable[int]) -> int:
    """Rank by xor-basis insertion (leading bit elimination)."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            top = r.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = r
                break
            r ^= b
    return len(basis)


def kernel(rows: Iterable[int], ncols: int) -> list[int]:
    reduced, pivots = rref(rows, ncols)
    pivset = set(pivots)
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = 1 << f
        for row, pc in zip(reduced, pivots):
            if (row >> f) & 1:
                v |= 1 << pc
        out.append(v)
    return out


def in_span(vec: int, rows: Iterable[int]) -> bool:
    rows = list(rows)
    return rank(rows + [vec]) == rank(rows)
