"""Batch command-line front end.

Subcommands: analyze, compare, sweep, coset, check.  Reports are JSON (CSV
optional for sweep tables) and byte-identical across runs and thread counts,
except for the wall_time_s field.  Exit codes: 0 success, 2 parse error,
3 limit exceeded, 4 mathematical precondition violated.

Verdicts are reports at the fixed input degree, not asymptotic claims; every
threshold states its (log base, c) convention explicitly.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import random
import sys
import time
from fractions import Fraction

from . import coset as coset_mod
from . import lab, qfs
from .errors import HspError, LimitExceeded, ParseError, PreconditionError
from .perm import ENUMERATION_LIMIT, ClassProfile, PermGroup, class_profile, load_group_file
from .radical import _round_sig

DEGREE_LIMIT = 40
INDEX_LIMIT = 10**5
DECIMAL_DIGITS = 40


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _frac_decimal(x: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    return _round_sig(x, digits)


class _Source:
    """A group input: catalog name or group file."""

    def __init__(self, spec: str):
        self.spec = spec
        self.entry = None
        if os.path.exists(spec):
            self.group = load_group_file(spec)
            with open(spec, "rb") as fh:
                self.digest = hashlib.sha256(fh.read()).hexdigest()
            self.kind = "file"
        else:
            try:
                self.entry = lab.resolve_catalog(spec)
            except ParseError:
                raise ParseError(
                    f"{spec!r} is neither an existing group file nor a catalog name"
                ) from None
            self.group = self.entry.group
            self.digest = hashlib.sha256(f"catalog:{spec}".encode()).hexdigest()
            self.kind = "catalog"

    def profile(self, limit: int = ENUMERATION_LIMIT) -> ClassProfile:
        if self.entry is not None and self.entry.profile is not None:
            return self.entry.profile
        return class_profile(self.group, limit)

    def describe(self) -> dict:
        return {
            "spec": self.spec,
            "kind": self.kind,
            "digest": self.digest,
            "degree": self.group.degree,
            "order": str(self.group.order),
        }


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("HSP_THREADS", "")
    return max(1, int(env)) if env.isdigit() else 1


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def cmd_analyze(args) -> dict:
    t0 = time.perf_counter()
    src = _Source(args.source)
    n = src.group.degree
    if n > args.degree_limit:
        raise LimitExceeded(
            f"degree {n} exceeds the character-analysis limit {args.degree_limit}"
        )
    prof = src.profile(args.order_limit)
    if prof.order < 2:
        raise PreconditionError(
            "the trivial subgroup is degenerate here: D_H = 0 and the strict "
            "lower bound does not apply; nothing to analyze"
        )
    threads = _threads(args)
    dist = qfs.weak_distribution(n, prof, threads)
    dh = qfs.dh_exact(n, prof, threads)
    thm1 = qfs.thm1_bounds(n, prof, with_exact=False)
    thm1 = qfs.BoundsReport(
        lower=thm1.lower,
        exact_value=dh,
        upper=thm1.upper,
        upper_sq=thm1.upper_sq,
        upper_float=thm1.upper_float,
        float_precision=thm1.float_precision,
        sandwich_ok=bool(thm1.lower < dh) and thm1.upper.compare_to(dh) >= 0,
    )
    cmin = qfs.cmin_bounds(n, prof, with_exact=False)
    upper_prop = qfs.prop_upper(n, prof)
    census = lab.support_census(prof)
    mass = sorted(dist.probs.items(), key=lambda kv: (kv[1], kv[0]), reverse=True)
    report = {
        "command": "analyze",
        "source": src.describe(),
        "subgroup_order": str(prof.order),
        "num_profile_types": len(prof.counts),
        "minimal_degree": census.minimal_support() if census.counts else None,
        "support_census": census.serialize(),
        "distribution_summary": {
            "num_irreps": len(dist.probs),
            "max_prob_partition": list(mass[0][0]),
            "max_prob": _frac(mass[0][1]),
            "prob_trivial": _frac(dist.prob((n,))),
            "prob_sign": _frac(dist.prob((1,) * n)),
        },
        "dh": _frac(dh),
        "dh_decimal": _frac_decimal(dh),
        "decimal_precision": DECIMAL_DIGITS,
        "thm1_bounds": thm1.serialize(),
        "cmin_bounds": cmin.serialize(),
        "prop_upper": upper_prop.serialize(DECIMAL_DIGITS),
        "verdict": {
            "log_base": 2,
            "c": args.c,
            "threshold": qfs.distinguishability_threshold(math.factorial(n), args.c),
            "distinguishable": qfs.verdict(dh, math.factorial(n), args.c),
            "note": "report at fixed n, not an asymptotic claim",
        },
    }
    if args.full_distribution:
        report["distribution"] = dist.serialize()
    report["wall_time_s"] = round(time.perf_counter() - t0, 6)
    return report


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------


def _same_group(a: PermGroup, b: PermGroup) -> bool:
    return (
        a.degree == b.degree
        and a.order == b.order
        and all(g in b for g in a.generators)
    )


def cmd_compare(args) -> dict:
    t0 = time.perf_counter()
    src_a = _Source(args.a)
    src_b = _Source(args.b)
    if src_a.group.degree != src_b.group.degree:
        raise PreconditionError("subgroups act on different degrees")
    n = src_a.group.degree
    if args.parent:
        parent = _Source(args.parent)
        parent_group = parent.group
        parent_desc = parent.describe()
    else:
        implied_a = src_a.entry.parent if src_a.entry else None
        implied_b = src_b.entry.parent if src_b.entry else None
        if implied_a is not None and implied_b is not None and _same_group(implied_a, implied_b):
            parent_group = implied_a
            parent_desc = {"spec": "(implied by catalog)", "degree": n, "order": str(parent_group.order)}
        else:
            parent_group = PermGroup.symmetric(n)
            parent_desc = {"spec": f"symmetric:{n}", "degree": n, "order": str(parent_group.order)}
    report_g = coset_mod.gassmann_test(
        parent_group,
        src_a.group,
        src_b.group,
        conjugacy_limit=args.order_limit,
        index_limit=args.index_limit,
    )
    if n > args.degree_limit:
        sn_distance = None
    else:
        sn_distance = qfs.d_between(
            n, src_a.profile(args.order_limit), src_b.profile(args.order_limit), _threads(args)
        )
    report = {
        "command": "compare",
        "a": src_a.describe(),
        "b": src_b.describe(),
        "parent": parent_desc,
        "gassmann": report_g.serialize(),
        "sn_profile_distance": None if sn_distance is None else _frac(sn_distance),
        "distance_zero": report_g.class_counts_equal,
        "wall_time_s": round(time.perf_counter() - t0, 6),
    }
    return report


# ---------------------------------------------------------------------------
# coset
# ---------------------------------------------------------------------------


def cmd_coset(args) -> dict:
    t0 = time.perf_counter()
    parent = _Source(args.parent)
    sub = _Source(args.subgroup)
    ca = coset_mod.coset_action(parent.group, sub.group, args.index_limit)
    rr = coset_mod.rank_subdegrees(ca)
    report = {
        "command": "coset",
        "parent": parent.describe(),
        "subgroup": sub.describe(),
        "index": ca.index,
        "rank_subdegrees": rr.serialize(),
        "class_identity_holds": coset_mod.class_fixpoint_identity_holds(ca),
        "avg_subdegree": coset_mod.avg_subdegree_verdict(ca, args.c).serialize(),
    }
    if sub.group.order >= 2:
        b1, b2 = coset_mod.fixpoint_bounds(ca)
        report["fixpoint_bounds"] = {"bound_i": _frac(b1), "bound_ii": _frac(b2)}
    report["wall_time_s"] = round(time.perf_counter() - t0, 6)
    return report


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _sweep_entries(args):
    if args.family == "cyclic":
        for k in range(args.start, args.end + 1):
            yield f"cyclic:{k}@{k}"
    elif args.family == "block":
        for m in range(args.start, args.end + 1):
            yield f"block:{m}x{args.r}"
    else:  # young: parts [n - j, j] for n in range
        j = args.fixed_part
        for n in range(args.start, args.end + 1):
            if n - j < 1:
                raise PreconditionError(f"young sweep needs n-{j} >= 1, got n={n}")
            yield f"young:{n - j}+{j}"


def cmd_sweep(args) -> dict | list:
    t0 = time.perf_counter()
    if args.end < args.start:
        rows = []
    else:
        specs = list(_sweep_entries(args))

        def one(spec: str) -> dict:
            entry = lab.resolve_catalog(spec)
            n = entry.group.degree
            if n > args.degree_limit:
                raise LimitExceeded(
                    f"sweep row {spec}: degree {n} exceeds limit {args.degree_limit}"
                )
            prof = entry.profile if entry.profile is not None else class_profile(entry.group, args.order_limit)
            if prof.order < 2:
                raise PreconditionError(f"sweep row {spec}: trivial subgroup")
            dh = qfs.dh_exact(n, prof)
            bounds = qfs.thm1_bounds(n, prof, with_exact=False)
            return {
                "name": spec,
                "n": n,
                "order": str(prof.order),
                "min_degree": prof.minimal_support(),
                "dh": _frac(dh),
                "dh_decimal": _frac_decimal(dh, 12),
                "lower": _frac(bounds.lower),
                "upper_decimal": bounds.upper.decimal(12),
            }

        rows = qfs._map_ordered(one, specs, _threads(args))
    if args.format == "csv":
        return rows
    return {
        "command": "sweep",
        "family": args.family,
        "rows": rows,
        "wall_time_s": round(time.perf_counter() - t0, 6),
    }


def _emit_csv(rows: list, args) -> None:
    fields = ["name", "n", "order", "min_degree", "dh", "dh_decimal", "lower", "upper_decimal"]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    text = buf.getvalue()
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# check suites
# ---------------------------------------------------------------------------


def _check_orthogonality(args) -> dict:
    from .characters import dimension, orthogonality_check, partitions

    results = []
    ok = True
    for n in range(1, args.max_n + 1):
        rep = orthogonality_check(n, limit=args.max_n)
        square_sum = sum(dimension(lam) ** 2 for lam in partitions(n))
        ok_n = rep.passed and square_sum == math.factorial(n)
        ok = ok and ok_n
        results.append(
            {"n": n, "passed": rep.passed, "sum_d_squared_is_factorial": square_sum == math.factorial(n),
             "failure": rep.failure}
        )
    return {"suite": "orthogonality", "max_n": args.max_n, "all_passed": ok, "results": results}


def _check_sandwich(args) -> dict:
    results = []
    ok = True
    for n in range(1, args.max_n + 1):
        rep = lab.class_sandwich_check(n, limit=args.max_n)
        ok = ok and rep.passed
        results.append({"n": n, "passed": rep.passed, "num_types": rep.num_types})
    return {"suite": "sandwich", "max_n": args.max_n, "all_passed": ok, "results": results}


def _random_subgroup(rng: random.Random, G: PermGroup) -> PermGroup:
    k = rng.randint(1, 3)
    gens = [G.random_element(rng) for _ in range(k)]
    return PermGroup(gens, G.degree)


def _check_frobenius(args) -> dict:
    rng = random.Random(args.seed)
    parents = [PermGroup.symmetric(n) for n in (5, 6, 7, 8)] + [lab.gl32_group(), lab.agl15_group()]
    actions = 0
    attempts = 0
    failures = []
    while actions < args.actions and attempts < 100 * args.actions:
        attempts += 1
        G = parents[rng.randrange(len(parents))]
        H = _random_subgroup(rng, G)
        index = G.order // H.order
        if index > args.index_limit:
            continue
        ca = coset_mod.coset_action(G, H, args.index_limit)
        try:
            coset_mod.rank_subdegrees(ca)  # raises if the Frobenius identity fails
            if not coset_mod.class_fixpoint_identity_holds(ca):
                failures.append({"parent_order": str(G.order), "subgroup_order": str(H.order)})
        except AssertionError:
            failures.append({"parent_order": str(G.order), "subgroup_order": str(H.order)})
        actions += 1
    return {
        "suite": "frobenius",
        "actions": actions,
        "seed": args.seed,
        "all_passed": not failures,
        "failures": failures,
    }


def cmd_check(args) -> dict:
    t0 = time.perf_counter()
    if args.suite == "orthogonality":
        report = _check_orthogonality(args)
    elif args.suite == "sandwich":
        report = _check_sandwich(args)
    else:
        report = _check_frobenius(args)
    report = {"command": "check", **report, "wall_time_s": round(time.perf_counter() - t0, 6)}
    return report


# ---------------------------------------------------------------------------
# argument parsing and entry point
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: HSP_THREADS or 1); output is identical for all values")
    p.add_argument("--degree-limit", type=int, default=DEGREE_LIMIT)
    p.add_argument("--order-limit", type=int, default=ENUMERATION_LIMIT)
    p.add_argument("--index-limit", type=int, default=INDEX_LIMIT)
    p.add_argument("--output", help="write the report to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="hsplab",
        description="Exact weak Fourier-sampling distributions and bounds for "
        "hidden subgroups of permutation groups.",
    )
    sub = top.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("analyze", help="distribution, D_H, and all bounds for one subgroup of S_n")
    p.add_argument("source", help="group file or catalog name (e.g. cyclic:2@3, block:4x2)")
    p.add_argument("--c", type=float, default=1.0, help="verdict exponent in (log2 n!)^(-c)")
    p.add_argument("--full-distribution", action="store_true")
    _add_common(p)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("compare", help="Gassmann-equivalence verdicts and D(H,K) for two subgroups")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--parent", help="parent group (default: catalog-implied, else symmetric:n)")
    _add_common(p)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("coset", help="rank, subdegrees, and fixed-point bounds of G on G/H")
    p.add_argument("parent")
    p.add_argument("subgroup")
    p.add_argument("--c", type=float, default=1.0)
    _add_common(p)
    p.set_defaults(fn=cmd_coset)

    p = sub.add_parser("sweep", help="tables of (n, |H|, m(H), D_H, bounds) over a family")
    p.add_argument("--family", choices=["cyclic", "block", "young"], required=True)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--end", type=int, required=True)
    p.add_argument("--r", type=int, default=2, help="block size for --family block")
    p.add_argument("--fixed-part", type=int, default=2, help="second part for --family young")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    _add_common(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("check", help="orthogonality / class-size sandwich / Frobenius suites")
    p.add_argument("--suite", choices=["orthogonality", "sandwich", "frobenius"], required=True)
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--actions", type=int, default=20)
    p.add_argument("--seed", type=int, default=2024)
    _add_common(p)
    p.set_defaults(fn=cmd_check)
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except HspError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if isinstance(report, list):
        _emit_csv(report, args)
    else:
        _emit(report, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
