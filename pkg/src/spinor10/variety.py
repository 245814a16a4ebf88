"""Points, tangent ranks, scans, slices and duality checks for the spinor tenfold."""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import IO, Iterable, Sequence

import numpy as np

from . import kernels
from .clifford import EVEN, ODD, chart_point, pairing_matrix, random_skew
from .fields import Field, PrimeField
from .groebner import buchberger, hilbert_dimension_degree, polynomials_from_quadrics
from .linalg import rank, rref
from .quadrics import QuadricSystem, canonical_system, restrict_to_span

__all__ = [
    "ProjectivePoint",
    "PointCountReport",
    "FieldTooLarge",
    "contains_and_tangent_rank",
    "enumerate_points",
    "write_points",
    "restrict_to_span",
    "restrict_mod_p",
    "random_subspace_mod_p",
    "SliceDegreeReport",
    "slice_degree",
    "random_sigma_point",
    "DualityReport",
    "dual_transport_test",
    "cell_count",
]


class FieldTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ProjectivePoint:
    """Homogeneous coordinates scaled so the first nonzero entry is 1."""

    coords: tuple
    field: Field

    @classmethod
    def of(cls, coords: Sequence, field: Field) -> "ProjectivePoint":
        xs = [field(x) for x in coords]
        lead = next((x for x in xs if not field.is_zero(x)), None)
        if lead is None:
            raise ValueError("the zero vector is not a projective point")
        inv = field.inv(lead)
        return cls(tuple(field.mul(x, inv) for x in xs), field)

    def __len__(self):
        return len(self.coords)

    def to_json(self) -> list[str]:
        return [str(x) for x in self.coords]


def contains_and_tangent_rank(sys: QuadricSystem, pt: ProjectivePoint | Sequence) -> tuple[bool, int | None]:
    """(all quadrics vanish, rank of the Jacobian there); the rank is ``None`` off the variety."""
    F = sys.field
    coords = pt.coords if isinstance(pt, ProjectivePoint) else tuple(F(x) for x in pt)
    if len(coords) != sys.ambient:
        raise ValueError(f"point has {len(coords)} coordinates, system expects {sys.ambient}")
    if not all(F.is_zero(v) for v in sys.evaluate(coords)):
        return False, None
    return True, rank(sys.jacobian(coords), F)


def cell_count(q: int) -> int:
    """Rational points of the spinor tenfold over a field with ``q`` elements."""
    return (1 + q) * (1 + q**2) * (1 + q**3) * (1 + q**4)


@dataclass(frozen=True)
class PointCountReport:
    field: str
    total: int
    smooth: int
    singular: int
    wall_clock: float = dc_field(compare=False)
    backend: str = "cython"
    rank_histogram: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "field": self.field,
            "total": str(self.total),
            "smooth": str(self.smooth),
            "singular": str(self.singular),
            "rank_histogram": {str(k): str(v) for k, v in sorted(self.rank_histogram.items())},
            "backend": self.backend,
            "wall_clock": self.wall_clock,
        }


def _scan_chunk(args):
    n, p, lo, hi, arrays, backend_name = args
    return kernels.scan_zeros(n, p, lo, hi, arrays, kernels.backend(backend_name))


def enumerate_points(
    sys: QuadricSystem,
    field: Field,
    jobs: int = 1,
    chunks: int = 16,
    backend: str | None = None,
    codimension: int = 5,
) -> tuple[PointCountReport, np.ndarray]:
    """Exhaustive scan of ``P^{n-1}(F_p)`` for ``p`` in {2, 3}.

    Points are ordered by the position of their leading 1, then
    lexicographically on the remaining coordinates; the scan is cut into
    ``chunks`` index ranges whose results are concatenated in order, so the
    output does not depend on ``jobs``. A point counts as smooth when the
    Jacobian rank equals ``codimension``.
    """
    if not isinstance(field, PrimeField) or field.p not in (2, 3):
        raise FieldTooLarge(f"exhaustive scans are limited to F_2 and F_3, not {field}; use chart sampling")
    p = field.p
    n = sys.ambient
    start = time.perf_counter()
    arrays = kernels.sparse_arrays(sys.sparse(), p)
    impl_name = backend or kernels.BACKEND
    total = kernels.projective_size(n, p)
    bounds = [total * i // chunks for i in range(chunks + 1)]
    tasks = [(n, p, bounds[i], bounds[i + 1], arrays, impl_name) for i in range(chunks)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan_chunk, tasks))
    else:
        parts = [_scan_chunk(t) for t in tasks]
    idx = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    pts = kernels.points_from_indices(idx, n, p)
    ranks = kernels.jacobian_ranks(pts, p, arrays, kernels.backend(impl_name))
    hist = {int(r): int(c) for r, c in zip(*np.unique(ranks, return_counts=True))}
    smooth = int((ranks == codimension).sum())
    report = PointCountReport(
        field.spec,
        int(len(idx)),
        smooth,
        int(len(idx)) - smooth,
        time.perf_counter() - start,
        impl_name,
        hist,
    )
    return report, pts


def write_points(points: Iterable[Sequence[int]], stream: IO[str]) -> int:
    """Newline-delimited JSON arrays of homogeneous coordinates; returns the line count."""
    k = 0
    for pt in points:
        stream.write(json.dumps([int(x) for x in pt]) + "\n")
        k += 1
    return k


# ------------------------------------------------------------ linear slices


def upper_matrices(sys: QuadricSystem, p: int) -> np.ndarray:
    """Array ``U[j]`` (upper triangular, mod p) with ``Q_j(x) = x^T U[j] x``."""
    n = sys.ambient
    out = np.zeros((len(sys), n, n), dtype=np.int64)
    for j, terms in enumerate(sys.sparse()):
        for a, b, c in terms:
            out[j, a, b] = int(c) % p
    return out


def restrict_mod_p(U: np.ndarray, W: np.ndarray, p: int) -> QuadricSystem:
    """Numpy version of :func:`restrict_to_span` over ``F_p`` for the rows of ``W``."""
    M = np.einsum("ia,jab,kb->jik", W, U, W) % p
    m = W.shape[0]
    coeffs = []
    for j in range(M.shape[0]):
        row = []
        for i in range(m):
            row.append(int(M[j, i, i]))
            for k in range(i + 1, m):
                row.append(int((M[j, i, k] + M[j, k, i]) % p))
        coeffs.append(tuple(row))
    from .fields import GF

    return QuadricSystem(m, tuple(coeffs), GF(p), None, f"restricted to {m}-dim span")


def random_subspace_mod_p(rng: random.Random, p: int, dim: int, ambient: int) -> np.ndarray:
    """Uniform random ``dim``-dimensional subspace, returned as an independent row basis."""
    from .fields import GF

    F = GF(p)
    while True:
        W = [[rng.randrange(p) for _ in range(ambient)] for _ in range(dim)]
        if rank(W, F) == dim:
            return np.array(W, dtype=np.int64)


@dataclass(frozen=True)
class SliceDegreeReport:
    field: str
    trials: int
    multiplicities: tuple[int, ...]
    non_transverse: int
    dimensions: tuple[int, ...]

    @property
    def status(self) -> str:
        if not self.multiplicities:
            return "inconclusive"
        return "pass" if set(self.multiplicities) == {12} else "fail"

    def to_json(self) -> dict:
        counts = {}
        for m in self.multiplicities:
            counts[str(m)] = counts.get(str(m), 0) + 1
        return {
            "field": self.field,
            "trials": str(self.trials),
            "multiplicities": {k: str(v) for k, v in sorted(counts.items())},
            "non_transverse": str(self.non_transverse),
            "dimensions": [str(d) for d in self.dimensions],
            "status": self.status,
        }


def slice_degree(sys: QuadricSystem, p: int, seed: int, trials: int, dim: int = 6) -> SliceDegreeReport:
    """Hilbert multiplicity of random ``P^{dim-1}``-sections over ``F_p``."""
    if p not in (2, 3, 5):
        raise ValueError("slice degrees are measured over F_2, F_3 or F_5")
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = random.Random(seed)
    U = upper_matrices(sys, p)
    mults, dims = [], []
    non_transverse = 0
    for _ in range(trials):
        W = random_subspace_mod_p(rng, p, dim, sys.ambient)
        r = restrict_mod_p(U, W, p)
        gb = buchberger(polynomials_from_quadrics(r), r.field)
        d, deg = hilbert_dimension_degree(gb)
        dims.append(d)
        if d == 0:
            mults.append(deg)
        else:
            non_transverse += 1
    return SliceDegreeReport(str(p), trials, tuple(mults), non_transverse, tuple(dims))


# ----------------------------------------------------------------- duality


def random_sigma_point(rng: random.Random, field: Field, parity: str = EVEN, chart: int | None = None):
    """A point of the tenfold from a random affine chart."""
    if chart is None:
        chart = rng.randrange(16)
    return chart_point(random_skew(rng, field), chart, parity, field)


@dataclass(frozen=True)
class DualityReport:
    p: int
    trials: int
    passes: int
    control_trials: int
    control_passes: int
    tangent_dimensions: tuple[int, ...]

    @property
    def status(self) -> str:
        ok = self.passes == self.trials and all(d == 10 for d in self.tangent_dimensions)
        return "pass" if ok else "fail"

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "trials": str(self.trials),
            "passes": str(self.passes),
            "control_trials": str(self.control_trials),
            "control_passes": str(self.control_passes),
            "tangent_projective_dimensions": sorted({str(d) for d in self.tangent_dimensions}),
            "status": self.status,
        }


def _transport_matrix(field: Field) -> list[list]:
    """``(B^T)^{-1}``: sends a linear form ``h`` on the even space to ``t`` with ``beta(t, x) = h . x``."""
    B = [[field(c) for c in row] for row in pairing_matrix()]
    BT = [list(col) for col in zip(*B)]
    n = len(BT)
    aug = [row + [field.one if i == j else field.zero for j in range(n)] for i, row in enumerate(BT)]
    red, piv = rref(aug, field)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("pairing matrix is singular over this field")
    return [row[n:] for row in red]


def dual_transport_test(seed: int, trials: int, p: int, control_trials: int | None = None) -> DualityReport:
    """Transport tangent hyperplanes at random points of the even tenfold into the odd space.

    A hyperplane ``h`` contains the embedded tangent space at ``s`` iff it lies
    in the row space of the Jacobian at ``s``. Its image ``t = B^{-T} h``
    should satisfy every odd quadric. Control trials use hyperplanes not
    containing the tangent space.
    """
    if p == 2:
        raise ValueError("duality test needs an odd prime")
    from .fields import GF

    F = GF(p)
    rng = random.Random(seed)
    even = canonical_system(EVEN).reduce(F)
    odd = canonical_system(ODD).reduce(F)
    T = _transport_matrix(F)
    if control_trials is None:
        control_trials = trials
    passes = 0
    tdims = []
    control_passes = 0
    for k in range(trials + control_trials):
        s = random_sigma_point(rng, F)
        on, _ = contains_and_tangent_rank(even, s.coords)
        if not on:
            raise RuntimeError("chart point is not on the tenfold: corrupted system")
        J = even.jacobian(s.coords)
        red, piv = rref(J, F)
        if k < trials:
            tdims.append(16 - len(piv) - 1)
            while True:
                coeffs = [F.random_element(rng) for _ in red]
                h = [F.zero] * 16
                for c, row in zip(coeffs, red):
                    for i, x in enumerate(row):
                        h[i] = F.add(h[i], F.mul(c, x))
                if any(not F.is_zero(x) for x in h):
                    break
        else:
            while True:
                h = [F.random_element(rng) for _ in range(16)]
                if rank(red + [h], F) > len(red):
                    break
        t = [F.zero] * 16
        for i, row in enumerate(T):
            acc = F.zero
            for x, y in zip(row, h):
                acc = F.add(acc, F.mul(x, y))
            t[i] = acc
        ok = all(F.is_zero(v) for v in odd.evaluate(t))
        if k < trials:
            passes += ok
        else:
            control_passes += ok
    return DualityReport(p, trials, passes, control_trials, control_passes, tuple(tdims))
