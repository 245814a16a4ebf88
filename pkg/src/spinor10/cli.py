"""Command-line verification runs emitting versioned JSON claim reports."""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Sequence

SCHEMA = "spinor10.report/1"
EXIT_PASS, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64
SUBCOMMANDS = ("derive", "count", "audit-z-models", "forms", "f2-lemma", "verify-plane", "duality-test", "all")
RANDOMIZED = {"derive", "count", "audit-z-models", "forms", "f2-lemma", "duality-test", "all"}
DEFAULT_QS_SETS = "5,13;5,17;13,17;5,29;13,29;17,29;5,37;13,37;17,37"


class UsageError(Exception):
    pass


def tool_version() -> str:
    try:
        from importlib.metadata import version

        return version("artifact")
    except Exception:
        return "0"


@dataclass
class RunConfig:
    subcommand: str
    field: str | None = None
    seed: int | None = None
    trials: int | None = None
    primes: tuple[int, ...] | None = None
    out: str | None = None
    jobs: int = 1
    json: bool = False
    action: str | None = None
    family: str = "ninefold"
    r: int = 1
    rank: int = 10
    det: str = "1"
    hasse: tuple[int, ...] = ()
    signature: tuple[int, int] | None = None
    sets: str = ""
    reading: str = "disc"
    plane: str | None = None
    points_out: str | None = None

    def echo(self) -> dict:
        out = {}
        for k, v in sorted(vars(self).items()):
            if k in ("out", "json", "points_out") or v is None:
                continue
            out[k] = _exact(v)
        return out


@dataclass
class ClaimReport:
    claim: str
    status: str
    artifacts: dict = dc_field(default_factory=dict)
    wall_clock: float = 0.0

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "status": self.status,
            "artifacts": _exact(self.artifacts),
            "wall_clock": f"{self.wall_clock:.3f}",
        }


def _exact(obj):
    """Exact numbers become decimal strings; containers are walked."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction)):
        return str(obj)
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in reports")
    if isinstance(obj, dict):
        return {str(k): _exact(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_exact(v) for v in obj]
    if hasattr(obj, "item"):
        return str(obj.item())
    return str(obj)


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _timed(claim: str, fn: Callable[[], tuple[bool | str, dict]]) -> ClaimReport:
    start = time.perf_counter()
    ok, artifacts = fn()
    status = ok if isinstance(ok, str) else _status(ok)
    return ClaimReport(claim, status, artifacts, time.perf_counter() - start)


# ------------------------------------------------------------------ claims


def claims_derive(cfg: RunConfig) -> list[ClaimReport]:
    from .clifford import EVEN, ODD
    from .fields import GF, QQ
    from .quadforms import diagonalize, local_profile
    from .quadrics import canonical_system, clifford_quadrics, interpolate_quadrics, recover_quadratic_form, spans_equal

    def derivation():
        art = {}
        ok = True
        for parity in (EVEN, ODD):
            sysi = interpolate_quadrics(parity, 200, cfg.seed)
            same = spans_equal(sysi, clifford_quadrics(parity), QQ)
            can = canonical_system(parity)
            r2 = can.reduce(GF(2)).span_rank()
            art[parity] = {"dimension": len(sysi.coeffs), "spans_coincide": same, "rank_mod_2": r2}
            ok &= len(sysi.coeffs) == 10 and same and r2 == 10
        art["canonical_even"] = canonical_system(EVEN).to_json()
        return ok, art

    def relation():
        rec = recover_quadratic_form(canonical_system(EVEN))
        form = diagonalize([list(r) for r in rec.matrix])
        prof = local_profile(form)
        art = {
            "relation_space_dimension": 1,
            "relation": [str(c) for c in rec.relation],
            "rank": rec.rank(),
            "diagonal": form.to_json(),
            "profile": prof.to_json(),
        }
        return rec.rank() == 10 and prof.disc == 1 and not prof.hasse_minus, art

    return [_timed("quadric-derivation", derivation), _timed("distinguished-relation", relation)]


def claims_count(cfg: RunConfig, p: int | None = None, slices: int | None = None) -> list[ClaimReport]:
    from .clifford import EVEN
    from .fields import GF
    from .quadrics import canonical_system
    from .variety import cell_count, enumerate_points, slice_degree, write_points

    if p is None:
        spec = cfg.field or "2"
        if spec not in ("2", "3"):
            raise UsageError("count supports --field 2 or 3")
        p = int(spec)
    sys_even = canonical_system(EVEN)
    out = []

    def count():
        rep, pts = enumerate_points(sys_even, GF(p), jobs=cfg.jobs)
        if cfg.points_out:
            with open(cfg.points_out, "w") as fh:
                write_points(pts, fh)
        art = rep.to_json()
        art.pop("wall_clock", None)
        art.pop("backend", None)
        art["expected"] = cell_count(p)
        return rep.total == cell_count(p) and rep.singular == 0, art

    out.append(_timed(f"sigma-count-f{p}", count))
    n = cfg.trials if slices is None else slices
    if n is None:
        n = 20
    if n > 0:
        q = p if p in (3, 5) else 3

        def degree():
            rep = slice_degree(sys_even, q, cfg.seed, n)
            ok = rep.status == "pass" and len(rep.multiplicities) == n
            return ok if rep.multiplicities else "inconclusive", rep.to_json()

        out.append(_timed(f"sigma-degree-f{q}", degree))
    return out


def _section_job(args):
    from .z_models import build_and_verify_section

    i, p, seed = args
    start = time.perf_counter()
    rep = build_and_verify_section(i, p, seed).to_json()
    return rep, time.perf_counter() - start


def claims_z_models(cfg: RunConfig) -> list[ClaimReport]:
    from .z_models import ZModelSpec, certify_emptiness, dimension_audit

    primes = cfg.primes or (2, 3, 5, 7)
    for p in primes:
        if p > 13:
            raise UsageError("section checks use primes up to 13")
    out = []

    def emptiness():
        reps = [certify_emptiness(i) for i in range(1, 6)]
        return all(r.status == "pass" for r in reps), {
            "vectors": [list(v) for v in ZModelSpec.standard().vectors],
            "certificates": [r.to_json() for r in reps],
        }

    out.append(_timed("z-model-emptiness", emptiness))
    jobs = [(i, p, cfg.seed) for i in range(1, 6) for p in primes]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_section_job, jobs))
    else:
        results = [_section_job(j) for j in jobs]
    for i in range(1, 6):
        sel = [r for (ii, _, _), r in zip(jobs, results) if ii == i]
        ok = all(r["status"] == "pass" for r, _ in sel)
        out.append(ClaimReport(f"z-model-X{10 - i}", _status(ok), {"sections": [r for r, _ in sel]}, sum(t for _, t in sel)))

    def audit():
        a = dimension_audit()
        ok = (a["dim_sigma"], a["dim_spin"], a["dim_meeting_locus"], a["dim_grassmannian"]) == (10, 45, 46, 48)
        return ok and a["orbits_cannot_cover"], a

    out.append(_timed("dimension-audit", audit))
    return out


def _random_triple(rng: random.Random):
    from sympy import primefactors

    from .quadforms import INF

    a = rng.choice([-1, 1]) * rng.randint(1, 50)
    b = rng.choice([-1, 1]) * rng.randint(1, 50)
    places = [INF, 2] + primefactors(a * b) + [3, 5, 7]
    return a, b, rng.choice(places)


def claims_forms_checks(cfg: RunConfig) -> list[ClaimReport]:
    """Oracle comparisons and the classification counts."""
    from .quadforms import (
        DiagonalForm,
        count_similarity_classes,
        hilbert_symbol,
        local_solvable,
        qS_family,
        square_class,
    )

    rng = random.Random(cfg.seed)
    out = []

    def oracle():
        bad = []
        for _ in range(500):
            a, b, v = _random_triple(rng)
            if (hilbert_symbol(a, b, v) == 1) != local_solvable(a, b, v):
                bad.append([a, b, v])
        return not bad, {"triples": 500, "mismatches": bad}

    def reciprocity():
        bad = 0
        for _ in range(200):
            n = rng.randint(1, 10)
            f = DiagonalForm.of(rng.choice([-1, 1]) * rng.randint(1, 200) for _ in range(n))
            prod = 1
            for v in f.relevant_places():
                prod *= f.hasse(v)
            bad += prod != 1
        return bad == 0, {"forms": 200, "violations": bad}

    def scaling():
        bad = 0
        for _ in range(500):
            head = [rng.choice([-1, 1]) * rng.randint(1, 100) for _ in range(9)]
            prod = 1
            for a in head:
                prod *= a
            # disc = (-1)^45 det is trivial iff det is the class of -1
            f = DiagonalForm.of(head + [square_class(-prod)])
            c = rng.choice([-1, 1]) * rng.randint(1, 100)
            g = f.scaled(c)
            places = sorted(set(f.relevant_places()[:-1]) | set(g.relevant_places()[:-1])) + ["inf"]
            bad += f.disc != 1 or any(f.hasse(v) != g.hasse(v) for v in places)
        return bad == 0, {"instances": 500, "violations": bad}

    def counts(family):
        def run_():
            res = {str(r): count_similarity_classes(family, r).count for r in range(1, 11)}
            one = count_similarity_classes(family, 1)
            ok = all(res[str(r)] == 2**r for r in range(1, 11))
            return ok, {"counts": res, "rational": one.to_json()}

        return run_

    def family():
        sets = _parse_sets(cfg.sets or DEFAULT_QS_SETS, include_empty=not cfg.sets)
        reps = {reading: qS_family(sets, reading) for reading in ("disc", "det")}
        ok = all(r.pairwise_non_similar and len(r.forms) == 10 for r in reps.values())
        return ok, {k: v.to_json() for k, v in reps.items()}

    out.append(_timed("hilbert-symbol-oracle", oracle))
    out.append(_timed("hasse-reciprocity", reciprocity))
    out.append(_timed("tenfold-scaling-stability", scaling))
    out.append(_timed("tenfold-O1-2r", counts("tenfold-O1")))
    out.append(_timed("ninefold-2r", counts("ninefold")))
    out.append(_timed("qS-family-distinct", family))
    return out


def _parse_sets(text: str, include_empty: bool = False) -> list[tuple[int, ...]]:
    sets = [()] if include_empty else []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk in ("", "-"):
            sets.append(())
        else:
            sets.append(tuple(int(x) for x in chunk.split(",")))
    return sets


def claims_forms(cfg: RunConfig) -> list[ClaimReport]:
    from .quadforms import InconsistentInvariants, construct_with_invariants, count_similarity_classes, local_profile, qS_family

    action = cfg.action or "classify"
    if action == "classify":
        if cfg.family not in ("ninefold", "tenfold-O1"):
            raise UsageError("--family must be ninefold or tenfold-O1")

        def classify():
            res = count_similarity_classes(cfg.family, cfg.r)
            return res.count == 2**cfg.r, res.to_json()

        return [_timed(f"{cfg.family}-2r", classify)]
    if action == "construct":
        sig = cfg.signature or (cfg.rank, 0)

        def construct():
            try:
                f = construct_with_invariants(cfg.rank, Fraction(cfg.det), cfg.hasse, sig)
            except InconsistentInvariants as exc:
                return False, {"inconsistent": exc.reason, "detail": str(exc)}
            return True, {"form": f.to_json(), "profile": local_profile(f).to_json()}

        return [_timed("construct-form", construct)]
    if action == "family":
        if cfg.reading not in ("det", "disc"):
            raise UsageError("--reading must be det or disc")

        def family():
            rep = qS_family(_parse_sets(cfg.sets or DEFAULT_QS_SETS, include_empty=not cfg.sets), cfg.reading)
            return rep.pairwise_non_similar, rep.to_json()

        return [_timed("qS-family-distinct", family)]
    if action == "checks":
        return claims_forms_checks(cfg)
    raise UsageError(f"unknown forms action {action!r}")


def claims_f2(cfg: RunConfig) -> list[ClaimReport]:
    from . import gf2
    from .z_models import f2_max_independent_set, f2_secant_bound_check, four_subsets_independent

    def lemma():
        res = f2_max_independent_set(6)
        small = f2_max_independent_set(4)
        ok = res.maximum == 8 and four_subsets_independent(res.witness) and gf2.rank(list(res.witness)) == 6
        art = res.to_json()
        art["witness_four_subsets_checked"] = 70
        art["regression_dimension_4"] = small.maximum
        return ok, art

    def secant():
        n = cfg.trials if cfg.trials is not None else 10000
        rep = f2_secant_bound_check(n, cfg.seed)
        return rep.status == "pass", rep.to_json()

    return [_timed("f2-lemma-8", lemma), _timed("f2-secant-bound", secant)]


def load_plane(path: str) -> list[list[Fraction]]:
    try:
        with open(path) as fh:
            data = json.load(fh)
        if isinstance(data, dict):
            data = data["basis"]
        rows = [[Fraction(str(x)) for x in row] for row in data]
    except (OSError, ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed plane file {path}: {exc}") from exc
    if len(rows) != 6 or any(len(r) != 16 for r in rows):
        raise UsageError("plane file must hold 6 rows of 16 rational entries")
    return rows


def claims_plane(cfg: RunConfig) -> list[ClaimReport]:
    from .z_models import verify_twelve_point_plane

    if not cfg.plane:
        raise UsageError("verify-plane needs a JSON file with a 6x16 basis")
    rows = load_plane(cfg.plane)

    def verify():
        try:
            rep = verify_twelve_point_plane(rows, cfg.seed or 0)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        return rep.status == "pass", rep.to_json()

    return [_timed("twelve-point-plane", verify)]


def claims_duality(cfg: RunConfig) -> list[ClaimReport]:
    from .variety import dual_transport_test

    p = int(cfg.field) if cfg.field and cfg.field.isdigit() else 101
    n = cfg.trials if cfg.trials is not None else 100

    def duality():
        rep = dual_transport_test(cfg.seed, n, p)
        ok = rep.status == "pass" and rep.control_passes < rep.control_trials
        return ok, rep.to_json()

    return [_timed(f"duality-p{p}", duality)]


def claims_all(cfg: RunConfig) -> list[ClaimReport]:
    out = claims_derive(cfg)
    out += claims_count(cfg, 2, 0)
    out += claims_count(cfg, 3, 20)
    out += claims_z_models(RunConfig("audit-z-models", seed=cfg.seed, jobs=cfg.jobs))
    out += claims_forms_checks(RunConfig("forms", seed=cfg.seed))
    out += claims_f2(RunConfig("f2-lemma", seed=cfg.seed, trials=10000))
    out += claims_duality(RunConfig("duality-test", seed=cfg.seed, field="101", trials=100))
    return out


DISPATCH = {
    "derive": claims_derive,
    "count": claims_count,
    "audit-z-models": claims_z_models,
    "forms": claims_forms,
    "f2-lemma": claims_f2,
    "verify-plane": claims_plane,
    "duality-test": claims_duality,
    "all": claims_all,
}


def run(cfg: RunConfig) -> dict:
    """Execute a subcommand and return the full report."""
    if cfg.subcommand not in DISPATCH:
        raise UsageError(f"unknown subcommand {cfg.subcommand!r}")
    if cfg.subcommand in RANDOMIZED and cfg.seed is None:
        raise UsageError(f"{cfg.subcommand} is randomized and needs --seed")
    start = time.perf_counter()
    claims = DISPATCH[cfg.subcommand](cfg)
    statuses = {c.status for c in claims}
    overall = "fail" if "fail" in statuses else "inconclusive" if "inconclusive" in statuses else "pass"
    return {
        "schema": SCHEMA,
        "tool_version": tool_version(),
        "subcommand": cfg.subcommand,
        "config": cfg.echo(),
        "status": overall,
        "claims": [c.to_json() for c in claims],
        "wall_clock": f"{time.perf_counter() - start:.3f}",
    }


def strip_wall_clock(report: dict) -> dict:
    """Copy of a report without timing fields, for reproducibility comparisons."""
    out = {k: v for k, v in report.items() if k != "wall_clock"}
    out["claims"] = [{k: v for k, v in c.items() if k != "wall_clock"} for c in report.get("claims", [])]
    return out


def exit_code(report: dict) -> int:
    return {"pass": EXIT_PASS, "fail": EXIT_REFUTED}.get(report["status"], EXIT_INCONCLUSIVE)


# --------------------------------------------------------------------- argv


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _field_spec(text: str) -> str:
    from .fields import field_from_spec

    try:
        field_from_spec(text)
    except (ValueError, KeyError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field_spec, help="p, p:2 or Q")
    common.add_argument("--seed", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--primes", type=_int_list)
    common.add_argument("--out", help="write the JSON report here")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--json", action="store_true", help="print the full JSON report")
    parser = _Parser(prog="spinor10", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    sub.add_parser("derive", parents=[common], help="quadric equations and their quadratic relation")
    c = sub.add_parser("count", parents=[common], help="exhaustive point count and slice degrees")
    c.add_argument("--points-out", dest="points_out", help="newline-delimited JSON point stream")
    sub.add_parser("audit-z-models", parents=[common], help="integral models and dual sections")
    f = sub.add_parser("forms", parents=[common], help="quadratic-form invariants")
    f.add_argument("action", nargs="?", default="classify", choices=["classify", "construct", "family", "checks"])
    f.add_argument("--family", default="ninefold")
    f.add_argument("--r", type=int, default=1)
    f.add_argument("--rank", type=int, default=10)
    f.add_argument("--det", default="1")
    f.add_argument("--hasse", type=_int_list, default=())
    f.add_argument("--signature", type=_int_list)
    f.add_argument("--sets", default="", help="even prime sets, e.g. '-;2,3;5,13' ('-' is empty)")
    f.add_argument("--reading", default="disc", choices=["det", "disc"])
    sub.add_parser("f2-lemma", parents=[common], help="four-independence maximum and secant bound")
    v = sub.add_parser("verify-plane", parents=[common], help="check a candidate twelve-point plane")
    v.add_argument("plane", help="JSON file with 6 rows of 16 rationals")
    sub.add_parser("duality-test", parents=[common], help="tangent hyperplane transport")
    sub.add_parser("all", parents=[common], help="every acceptance claim")
    return parser


def config_from_args(argv: Sequence[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    d = vars(ns)
    sig = d.get("signature")
    if sig is not None and len(sig) != 2:
        raise UsageError("--signature takes two integers")
    return RunConfig(
        subcommand=d["subcommand"],
        field=d.get("field"),
        seed=d.get("seed"),
        trials=d.get("trials"),
        primes=d.get("primes"),
        out=d.get("out"),
        jobs=d.get("jobs") or 1,
        json=d.get("json", False),
        action=d.get("action"),
        family=d.get("family", "ninefold"),
        r=d.get("r", 1),
        rank=d.get("rank", 10),
        det=d.get("det", "1"),
        hasse=tuple(d.get("hasse") or ()),
        signature=tuple(sig) if sig else None,
        sets=d.get("sets", ""),
        reading=d.get("reading", "disc"),
        plane=d.get("plane"),
        points_out=d.get("points_out"),
    )


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
        report = run(cfg)
    except UsageError as exc:
        print(f"spinor10: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(report, indent=2, sort_keys=True)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    if cfg.json:
        print(text)
    else:
        for c in report["claims"]:
            print(f"{c['claim']}: {c['status']} ({c['wall_clock']} s)")
        print(f"overall: {report['status']}")
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
