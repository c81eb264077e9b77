"""Weak-sampling distributions over Irr(S_n) and their total-variation bounds.

Everything here is exact: distributions are rational-valued (Fraction), the
class-size square-root upper bounds are carried as SqrtSum values, and verdict
thresholds use base-2 logarithms (the base is a reporting convention; it only
shifts the constant c).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .characters import Partition, dimension, mn_character, partitions
from .errors import PreconditionError
from .perm import ClassProfile, PermGroup, Permutation, element_class_map, sn_class_size
from .radical import SqrtSum

DECIMAL_DIGITS = 40


def _map_ordered(fn, items, threads: int):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _check_profile(n: int, prof: ClassProfile) -> None:
    if prof.degree != n:
        raise PreconditionError(f"profile degree {prof.degree} does not match n={n}")


@dataclass(frozen=True)
class IrrepDistribution:
    """Exact distribution on Irr(S_n), indexed by partition."""

    degree: int
    subgroup_order: int
    probs: Mapping[Partition, Fraction]

    def prob(self, lam: Partition) -> Fraction:
        return self.probs.get(tuple(lam), Fraction(0))

    def l1(self, other: "IrrepDistribution") -> Fraction:
        if self.degree != other.degree:
            raise PreconditionError("distributions live on different degrees")
        return sum(
            (abs(self.probs[lam] - other.probs[lam]) for lam in self.probs),
            Fraction(0),
        )

    def trivial_multiplicity(self, lam: Partition) -> Fraction:
        """|G| P(lam) / (d_lam |H|): the multiplicity of the trivial irrep in
        the restriction; a non-negative integer for every honest profile."""
        lam = tuple(lam)
        return (
            self.probs[lam]
            * math.factorial(self.degree)
            / (dimension(lam) * self.subgroup_order)
        )

    def serialize(self) -> list:
        return [
            {
                "partition": list(lam),
                "prob": f"{p.numerator}/{p.denominator}",
            }
            for lam, p in self.probs.items()
        ]


def weak_distribution(n: int, prof: ClassProfile, threads: int = 1) -> IrrepDistribution:
    """P_H(lam) = d_lam / n! * sum_t count(t) chi_lam(t), exactly."""
    _check_profile(n, prof)
    items = sorted(prof.counts.items(), reverse=True)
    fact = math.factorial(n)
    lams = partitions(n)

    def one(lam):
        total = sum(c * mn_character(lam, t) for t, c in items)
        return Fraction(dimension(lam) * total, fact)

    values = _map_ordered(one, lams, threads)
    probs = dict(zip(lams, values))
    for lam, p in probs.items():
        if p < 0:
            raise ValueError(f"negative mass at {lam}: profile is not a subgroup census")
    assert sum(probs.values()) == 1
    return IrrepDistribution(n, prof.order, probs)


def plancherel(n: int) -> IrrepDistribution:
    """The identity-subgroup distribution: P(lam) = d_lam^2 / n!."""
    return weak_distribution(n, ClassProfile.identity(n))


def dh_exact(n: int, prof: ClassProfile, threads: int = 1) -> Fraction:
    """D_H = 1/n! * sum_lam d_lam |sum_{t != id} count(t) chi_lam(t)|.

    This is the direct route; it must (and, in the tests, does) agree exactly
    with the L1 distance between weak_distribution(prof) and plancherel(n).
    """
    _check_profile(n, prof)
    nonid = prof.nonidentity_items()
    fact = math.factorial(n)

    def one(lam):
        return dimension(lam) * abs(sum(c * mn_character(lam, t) for t, c in nonid))

    total = sum(_map_ordered(one, partitions(n), threads))
    return Fraction(total, fact)


def d_between(n: int, prof_a: ClassProfile, prof_b: ClassProfile, threads: int = 1) -> Fraction:
    """|P_A - P_B|_1, exactly."""
    _check_profile(n, prof_a)
    _check_profile(n, prof_b)
    return weak_distribution(n, prof_a, threads).l1(weak_distribution(n, prof_b, threads))


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundsReport:
    """Lower/upper bracket for D_H from class intersection data.

    upper_sq is the exact rational square of the upper bound when one exists
    (single radical term or rational value); otherwise None and exact
    comparisons go through the SqrtSum interval machinery.
    """

    lower: Fraction
    exact_value: Fraction | None
    upper: SqrtSum
    upper_sq: Fraction | None
    upper_float: str
    float_precision: int
    sandwich_ok: bool | None

    def serialize(self) -> dict:
        out = {
            "lower": f"{self.lower.numerator}/{self.lower.denominator}",
            "upper": self.upper.serialize(self.float_precision),
            "upper_sq": None
            if self.upper_sq is None
            else f"{self.upper_sq.numerator}/{self.upper_sq.denominator}",
            "upper_float": self.upper_float,
            "float_precision": self.float_precision,
        }
        if self.exact_value is not None:
            out["exact_value"] = (
                f"{self.exact_value.numerator}/{self.exact_value.denominator}"
            )
            out["sandwich_ok"] = self.sandwich_ok
        return out


def _bounds_report(lower: Fraction, upper: SqrtSum, exact: Fraction | None) -> BoundsReport:
    sandwich = None
    if exact is not None:
        sandwich = bool(lower < exact) and upper.compare_to(exact) >= 0
    return BoundsReport(
        lower=lower,
        exact_value=exact,
        upper=upper,
        upper_sq=upper.square(),
        upper_float=upper.decimal(DECIMAL_DIGITS),
        float_precision=DECIMAL_DIGITS,
        sandwich_ok=sandwich,
    )


def thm1_bounds(
    n: int, prof: ClassProfile, with_exact: bool = True, threads: int = 1
) -> BoundsReport:
    """sum |C∩H|^2 / (|H||C|)  <  D_H  <=  sum |C∩H| |C|^(-1/2), both exact."""
    _check_profile(n, prof)
    if prof.order < 2:
        raise PreconditionError("the strict lower bound requires |H| >= 2")
    order = prof.order
    nonid = prof.nonidentity_items()
    lower = sum(
        (Fraction(c * c, order * sn_class_size(t)) for t, c in nonid), Fraction(0)
    )
    upper = SqrtSum.from_terms((c, sn_class_size(t)) for t, c in nonid)
    exact = dh_exact(n, prof, threads) if with_exact else None
    return _bounds_report(lower, upper, exact)


@dataclass(frozen=True)
class CminBounds:
    """Single-class corollary bounds, with the minimal class identified."""

    report: BoundsReport
    cmin_type: tuple
    cmin_size: int

    def serialize(self) -> dict:
        out = self.report.serialize()
        out["cmin_type"] = list(self.cmin_type)
        out["cmin_size"] = str(self.cmin_size)
        return out


def cmin_bounds(
    n: int, prof: ClassProfile, with_exact: bool = True, threads: int = 1
) -> CminBounds:
    """1/(|H||C_min|) < D_H <= (|H|-1) |C_min|^(-1/2) for the smallest
    non-identity class meeting H."""
    _check_profile(n, prof)
    if prof.order < 2:
        raise PreconditionError("the corollary bounds require |H| >= 2")
    order = prof.order
    candidates = [(sn_class_size(t), t) for t, c in prof.nonidentity_items()]
    size, t = min(candidates)
    lower = Fraction(1, order * size)
    upper = SqrtSum.from_terms([(order - 1, size)])
    exact = dh_exact(n, prof, threads) if with_exact else None
    return CminBounds(_bounds_report(lower, upper, exact), t, size)


def prop_upper(n: int, prof: ClassProfile) -> SqrtSum:
    """sum over non-identity h in H of |h^G|^(-1/2), grouped by cycle type."""
    _check_profile(n, prof)
    return SqrtSum.from_terms(
        (c, sn_class_size(t)) for t, c in prof.nonidentity_items()
    )


# ---------------------------------------------------------------------------
# distinguishability verdicts
# ---------------------------------------------------------------------------


def distinguishability_threshold(group_order: int, c: float) -> float:
    """(log2 |G|)^(-c); the base-2 convention is reported with every verdict."""
    if group_order < 2:
        raise PreconditionError("thresholds need |G| >= 2")
    return math.log2(group_order) ** (-c)


def verdict(D: Fraction, group_order: int, c: float) -> bool:
    """True iff D >= (log2 |G|)^(-c).  A report at fixed n, not an asymptotic
    claim; the exact rational D is compared against the double-precision
    threshold."""
    if D < 0:
        raise PreconditionError("distances are non-negative")
    return bool(D >= distinguishability_threshold(group_order, c))


@dataclass(frozen=True)
class PolyVerdict:
    applicable: bool
    reason: str | None
    group_order: int
    subgroup_order: int
    log_base: int
    c: float
    c_prime: float
    size_bound: float | None
    class_threshold: float | None
    min_class_size: int | None
    witness: Permutation | None
    witness_support: int | None
    distinguishable_side: bool | None

    def serialize(self) -> dict:
        return {
            "applicable": self.applicable,
            "reason": self.reason,
            "group_order": str(self.group_order),
            "subgroup_order": str(self.subgroup_order),
            "log_base": self.log_base,
            "c": self.c,
            "c_prime": self.c_prime,
            "size_bound": self.size_bound,
            "class_threshold": self.class_threshold,
            "min_class_size": None if self.min_class_size is None else str(self.min_class_size),
            "witness": None if self.witness is None else self.witness.cycles(),
            "witness_support": self.witness_support,
            "distinguishable_side": self.distinguishable_side,
        }


def poly_subgroup_verdict(
    G: PermGroup, H: PermGroup, c: float, c_prime: float
) -> PolyVerdict:
    """Small-subgroup dichotomy: some non-identity h in H has a conjugacy
    class |h^G| below (log2|G|)^c' iff H sits on the distinguishable side.

    Inapplicability (trivial H, or |H| above the polylog size bound) is a
    verdict, not an error.
    """
    if not H.is_subgroup_of(G):
        raise PreconditionError("H is not a subgroup of G")
    base_kwargs = dict(
        group_order=G.order,
        subgroup_order=H.order,
        log_base=2,
        c=c,
        c_prime=c_prime,
    )
    if H.order < 2:
        return PolyVerdict(
            applicable=False,
            reason="trivial subgroup has no non-identity element",
            size_bound=None,
            class_threshold=None,
            min_class_size=None,
            witness=None,
            witness_support=None,
            distinguishable_side=None,
            **base_kwargs,
        )
    size_bound = math.log2(G.order) ** c
    if H.order > size_bound:
        return PolyVerdict(
            applicable=False,
            reason=f"|H| = {H.order} exceeds (log2|G|)^c = {size_bound:.6g}",
            size_bound=size_bound,
            class_threshold=None,
            min_class_size=None,
            witness=None,
            witness_support=None,
            distinguishable_side=None,
            **base_kwargs,
        )
    is_symmetric = G.order == math.factorial(G.degree)
    if is_symmetric:
        def class_size_of(arr):
            return sn_class_size(Permutation(arr).cycle_type())
    else:
        classes, class_id = element_class_map(G)
        sizes_by_id = [s for _, s in classes]

        def class_size_of(arr):
            return sizes_by_id[class_id[arr.tobytes()]]

    best = None
    idimgs = list(range(H.degree))
    for arr in H.element_arrays():
        if list(map(int, arr)) == idimgs:
            continue
        size = class_size_of(arr)
        if best is None or size < best[0]:
            best = (size, Permutation(arr.copy()))
    min_size, witness = best
    threshold = math.log2(G.order) ** c_prime
    return PolyVerdict(
        applicable=True,
        reason=None,
        size_bound=size_bound,
        class_threshold=threshold,
        min_class_size=min_size,
        witness=witness,
        witness_support=witness.support(),
        distinguishable_side=bool(min_size <= threshold),
        **base_kwargs,
    )
