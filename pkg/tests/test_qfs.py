import math
import random
from fractions import Fraction

import pytest

from hsplab.errors import PreconditionError
from hsplab.perm import ClassProfile, PermGroup, class_profile, sn_class_size
from hsplab.qfs import (
    cmin_bounds,
    d_between,
    dh_exact,
    distinguishability_threshold,
    plancherel,
    poly_subgroup_verdict,
    prop_upper,
    thm1_bounds,
    verdict,
    weak_distribution,
)

H12_S3 = class_profile(PermGroup.from_cycles(["(1 2)"], 3))
A3 = class_profile(PermGroup.from_cycles(["(1 2 3)"], 3))
S3 = class_profile(PermGroup.symmetric(3))
BLOCK_S4 = class_profile(PermGroup.from_cycles(["(1 3)(2 4)"], 4))


def frac(a, b):
    return Fraction(a, b)


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------


def test_plancherel_s3():
    d = plancherel(3)
    assert d.probs == {(3,): frac(1, 6), (2, 1): frac(4, 6), (1, 1, 1): frac(1, 6)}


def test_weak_distribution_examples():
    d = weak_distribution(3, H12_S3)
    assert d.probs == {(3,): frac(1, 3), (2, 1): frac(2, 3), (1, 1, 1): 0}
    d = weak_distribution(3, A3)
    assert d.probs == {(3,): frac(1, 2), (2, 1): 0, (1, 1, 1): frac(1, 2)}


def test_distribution_normalization_and_integrality(s4_subgroups):
    for H in s4_subgroups:
        prof = class_profile(H)
        dist = weak_distribution(4, prof)
        assert sum(dist.probs.values()) == 1
        for lam in dist.probs:
            mult = dist.trivial_multiplicity(lam)
            assert mult.denominator == 1 and mult >= 0


def test_negative_mass_detected():
    bogus = ClassProfile(3, {(1, 1, 1): 1, (2, 1): 5})
    with pytest.raises(ValueError, match="negative mass"):
        weak_distribution(3, bogus)


def test_degree_mismatch():
    with pytest.raises(PreconditionError):
        weak_distribution(4, H12_S3)
    with pytest.raises(PreconditionError):
        d_between(3, H12_S3, BLOCK_S4)


# ---------------------------------------------------------------------------
# distances
# ---------------------------------------------------------------------------


def test_dh_examples():
    assert dh_exact(3, ClassProfile.identity(3)) == 0
    assert dh_exact(3, H12_S3) == frac(1, 3)
    assert dh_exact(3, A3) == frac(4, 3)
    assert dh_exact(4, BLOCK_S4) == frac(1, 2)


def test_dh_equals_l1_route(s4_subgroups):
    for H in s4_subgroups:
        prof = class_profile(H)
        assert dh_exact(4, prof) == weak_distribution(4, prof).l1(plancherel(4))


def test_d_between_examples():
    assert d_between(3, A3, A3) == 0
    conj_a = class_profile(PermGroup.from_cycles(["(1 2)"], 3))
    conj_b = class_profile(PermGroup.from_cycles(["(1 3)"], 3))
    assert conj_a.counts == conj_b.counts
    assert d_between(3, conj_a, conj_b) == 0
    assert d_between(3, H12_S3, A3) == frac(4, 3)


def test_threads_do_not_change_results():
    prof = class_profile(PermGroup.from_cycles(["(1 3)(2 4)", "(1 2 3 4)"], 4))
    assert dh_exact(4, prof) == dh_exact(4, prof, threads=4)
    assert weak_distribution(4, prof).probs == weak_distribution(4, prof, threads=3).probs


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def test_thm1_examples():
    r = thm1_bounds(3, H12_S3)
    assert r.lower == frac(1, 6)
    assert r.upper_sq == frac(1, 3)  # upper = 1/sqrt(3)
    assert r.exact_value == frac(1, 3) and r.sandwich_ok

    r = thm1_bounds(3, A3)
    assert r.lower == frac(2, 3)
    assert r.upper_sq == 2  # upper = 2/sqrt(2) = sqrt(2)
    assert r.exact_value == frac(4, 3) and r.sandwich_ok

    r = thm1_bounds(4, BLOCK_S4)
    assert r.lower == frac(1, 6)
    assert r.upper_sq == frac(1, 3)
    assert r.exact_value == frac(1, 2) and r.sandwich_ok


def test_thm1_rejects_trivial_subgroup():
    with pytest.raises(PreconditionError):
        thm1_bounds(3, ClassProfile.identity(3))
    with pytest.raises(PreconditionError):
        cmin_bounds(3, ClassProfile.identity(3))


def test_thm1_upper_equality_case():
    # H = S_2 <= S_2: D_H = 1 equals the upper bound exactly (class size 1)
    prof = class_profile(PermGroup.symmetric(2))
    r = thm1_bounds(2, prof)
    assert r.exact_value == 1
    assert r.upper.compare_to(1) == 0 and r.sandwich_ok


def test_cmin_examples():
    r = cmin_bounds(3, H12_S3)
    assert r.cmin_type == (2, 1) and r.cmin_size == 3
    assert r.report.lower == frac(1, 6)
    assert r.report.upper_sq == frac(1, 3)

    r = cmin_bounds(3, A3)
    assert r.cmin_type == (3,) and r.cmin_size == 2
    assert r.report.lower == frac(1, 6)
    assert r.report.upper_sq == 2  # (|H|-1)/sqrt(2) squared

    r = cmin_bounds(3, S3)
    assert r.cmin_type == (3,) and r.report.lower == frac(1, 12)


def test_cmin_consistency(s4_subgroups):
    for H in s4_subgroups:
        if H.order < 2:
            continue
        prof = class_profile(H)
        t = thm1_bounds(4, prof, with_exact=False)
        c = cmin_bounds(4, prof, with_exact=False)
        assert c.report.lower <= t.lower
        assert prof.count(c.cmin_type) <= prof.order - 1


def test_prop_upper_examples():
    s = prop_upper(3, H12_S3)
    assert s.radicals == {3: Fraction(1, 3)} and s.compare_to(frac(1, 3)) >= 0
    assert prop_upper(3, ClassProfile.identity(3)).compare_to(0) == 0
    from hsplab.lab import block_group_profile

    prof = block_group_profile(4, 2)
    assert prop_upper(8, prof).compare_to(dh_exact(8, prof)) >= 0


def test_prop_upper_dominates_dh(s4_subgroups):
    for H in s4_subgroups:
        prof = class_profile(H)
        assert prop_upper(4, prof).compare_to(dh_exact(4, prof)) >= 0


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------


def test_verdict_examples():
    assert verdict(frac(1, 3), 6, 1.0) is False  # 1/3 < 1/log2(6)
    assert verdict(frac(4, 3), 6, 1.0) is True
    assert verdict(Fraction(0), 120, 2.0) is False
    with pytest.raises(PreconditionError):
        verdict(frac(-1, 2), 6, 1.0)


def test_threshold_convention():
    assert distinguishability_threshold(2**10, 1.0) == pytest.approx(0.1)


def test_poly_verdict_transposition():
    S8 = PermGroup.symmetric(8)
    v = poly_subgroup_verdict(S8, PermGroup.from_cycles(["(1 2)"], 8), 1.0, 3.0)
    assert v.applicable
    assert v.min_class_size == 28 and v.witness.cycles() == "(1 2)"
    assert v.witness_support == 2
    assert v.distinguishable_side is True


def test_poly_verdict_eight_cycle():
    S8 = PermGroup.symmetric(8)
    H = PermGroup.from_cycles(["(1 2 3 4 5 6 7 8)"], 8)
    # independent oracle: enumerate the 8 elements and their class sizes
    expected_min = min(
        sn_class_size(p.cycle_type()) for p in H.elements() if not p.is_identity()
    )
    v = poly_subgroup_verdict(S8, H, 3.0, 1.0)
    assert v.applicable
    assert v.min_class_size == expected_min == 105
    assert v.class_threshold == pytest.approx(math.log2(math.factorial(8)))
    assert v.distinguishable_side is False  # 105 > log2(8!) ~ 15.3


def test_poly_verdict_inapplicable():
    S8 = PermGroup.symmetric(8)
    v = poly_subgroup_verdict(S8, PermGroup([], degree=8), 1.0, 1.0)
    assert not v.applicable and v.distinguishable_side is None
    # subgroup bigger than the polylog bound
    v = poly_subgroup_verdict(S8, PermGroup.alternating(8), 1.0, 1.0)
    assert not v.applicable and "exceeds" in v.reason


def test_poly_verdict_general_parent():
    from hsplab.lab import gl32_group

    G = gl32_group()
    H = PermGroup([G.generators[0]], degree=7)
    v = poly_subgroup_verdict(G, H, 2.0, 3.0)
    assert v.applicable
    assert v.min_class_size == 21  # transvection class in GL(3,2)


# ---------------------------------------------------------------------------
# random corpus properties (small here; the full corpus runs in acceptance)
# ---------------------------------------------------------------------------


def test_random_subgroup_properties():
    rng = random.Random(17)
    for n in (5, 6):
        Sn = PermGroup.symmetric(n)
        for _ in range(10):
            H = PermGroup([Sn.random_element(rng) for _ in range(rng.randint(1, 2))], n)
            prof = class_profile(H)
            dist = weak_distribution(n, prof)
            assert sum(dist.probs.values()) == 1
            d = dh_exact(n, prof)
            assert d == dist.l1(plancherel(n))
            if H.order >= 2:
                r = thm1_bounds(n, prof)
                assert r.lower < d
                assert r.upper.compare_to(d) >= 0
            for lam in dist.probs:
                m = dist.trivial_multiplicity(lam)
                assert m.denominator == 1 and m >= 0
