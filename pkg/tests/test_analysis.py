"""Analysis tests: non-zero-divisor seeds, injectivity reports,
localization preconditions, field-likeness, and the headline comparison."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tlab.analysis import (
    check_field_like,
    check_restriction_injectivity,
    localization_preconditions,
    localized_burnside,
    maximal_nzd_subfunctor,
    minimal_nzd_subfunctor,
    nonzerodivisor_seed,
    rational_marks_morphism,
    verify_burnside_localization,
)
from tlab.burnside import burnside
from tlab.carriers import IntRing
from tlab.errors import UndecidableCarrier
from tlab.fixedpoint import (
    FixedPointTambara,
    fixed_point_integers,
    fixed_point_rationals,
    fixed_point_residues,
    permutation_gring,
)
from tlab.groups import build_group, full_subgroup, trivial_subgroup
from tlab.gsets import free_orbit, one_point, transitive
from tlab.mackey import MEMBER, Element, maximal_subfunctor, saturate_membership


# --- seeds ------------------------------------------------------------------------


def test_nzd_seed_burnside_is_nonzero_integers():
    g = build_group("C2")
    om = burnside(g)
    seed = nonzerodivisor_seed(om)
    assert seed.contains((5,))
    assert seed.contains((-3,))
    assert not seed.contains((0,))


def test_nzd_seed_rationals():
    g = build_group("S3")
    pq = fixed_point_rationals(g)
    seed = nonzerodivisor_seed(pq)
    assert seed.contains(Fraction(3, 7))
    assert not seed.contains(Fraction(0))


def test_nzd_seed_swap_product_excludes_partial_zeros():
    g = build_group("C2")
    gr = permutation_gring(g, IntRing(), [(0, 1), (1, 0)])
    pt = FixedPointTambara(g, gr)
    seed = nonzerodivisor_seed(pt)
    assert seed.contains((2, 3))
    assert not seed.contains((2, 0))
    assert not seed.contains((0, 0))


# --- L and U from the seed ---------------------------------------------------------


def test_min_and_max_families_on_burnside_c2():
    g = build_group("C2")
    om = burnside(g)
    lo = minimal_nzd_subfunctor(om)
    hi = maximal_nzd_subfunctor(om)
    top = full_subgroup(g)
    triv = trivial_subgroup(g)
    # free level recovers the seed on both sides
    for v in ((2,), (-1,), (7,)):
        assert lo.contains_level(triv, v).status is MEMBER
        assert hi.contains_level(triv, v).status is MEMBER
    assert lo.contains_level(triv, (0,)).status is not MEMBER
    assert hi.contains_level(triv, (0,)).status is not MEMBER
    # the norm of 2 is among the minimal family's top generators
    assert (1, 2) in lo.level_generators(top)
    # every minimal generator is accepted by the maximal family
    for gen in lo.level_generators(top):
        assert hi.contains_level(top, gen).status is MEMBER
    # the class of the free orbit has nonzero free mark: accepted upstairs
    assert hi.contains_level(top, (1, 0)).status is MEMBER
    # a kernel element has zero free mark: rejected
    assert hi.contains_level(top, (1, -2)).status is not MEMBER


def test_unit_multiples_are_denominators():
    g = build_group("S3")
    om = burnside(g)
    hi = maximal_nzd_subfunctor(om)
    for rep in __import__("tlab.groups", fromlist=["subgroup_classes"]).subgroup_classes(
        full_subgroup(g)
    ).representatives:
        lvl = om.level(rep)
        for m in (1, -1, 2, 5):
            vec = tuple(m * v for v in lvl.one())
            hit = hi.contains_level(rep, vec)
            assert hit.status is MEMBER, (rep, m)


def test_saturation_cross_check_on_max_family():
    # the generic bounded search agrees with the complete decision where it
    # reaches a verdict
    g = build_group("C2")
    om = burnside(g)
    hi = maximal_nzd_subfunctor(om)
    x = transitive(g, full_subgroup(g))
    e = om.element(x, ((2, 1),))
    direct = hi.contains(e)
    searched = saturate_membership(hi, x, e, bound=3)
    assert direct.status is MEMBER
    assert searched.status is MEMBER


# --- restriction injectivity --------------------------------------------------------


def test_injectivity_fixed_points_pass():
    for token in ["C2", "S3"]:
        g = build_group(token)
        assert check_restriction_injectivity(fixed_point_integers(g)).ok
        assert check_restriction_injectivity(fixed_point_rationals(g)).ok


def test_injectivity_burnside_fails():
    for token in ["C2", "S3"]:
        g = build_group(token)
        report = check_restriction_injectivity(burnside(g))
        assert not report.ok
        assert any(r.witness for r in report.failures)


def test_injectivity_localization_passes():
    for token in ["C2", "S3"]:
        g = build_group(token)
        bundle = localized_burnside(g)
        report = check_restriction_injectivity(bundle.localization)
        assert report.ok, (token, report.failures[:1])


# --- localization preconditions ------------------------------------------------------


def test_preconditions_burnside():
    for token in ["C2", "C3", "C4", "C2xC2", "S3"]:
        g = build_group(token)
        om = burnside(g)
        denom = maximal_nzd_subfunctor(om)
        seed = nonzerodivisor_seed(om)
        report = localization_preconditions(om, denom, seed=seed)
        assert report.ok, (token, report.failures[:1])


def test_preconditions_detect_torsion():
    g = build_group("C2")
    pt = fixed_point_residues(g, 2)  # 2-torsion everywhere
    seed = nonzerodivisor_seed(pt)
    denom = maximal_subfunctor(pt.multiplicative_view(), seed)
    report = localization_preconditions(pt, denom, seed=seed)
    assert any(r.check_id == "torsion" and r.status == "fail" for r in report.records)


def test_preconditions_pass_odd_torsion_free_case():
    g = build_group("C2")
    pt = fixed_point_residues(g, 3)  # no 2-torsion mod 3
    seed = nonzerodivisor_seed(pt)
    denom = maximal_subfunctor(pt.multiplicative_view(), seed)
    report = localization_preconditions(pt, denom, seed=seed)
    assert all(r.status == "pass" for r in report.records if r.check_id == "torsion")


# --- field-likeness -------------------------------------------------------------------


def test_field_like_rationals():
    for token in ["C2", "S3"]:
        g = build_group(token)
        report = check_field_like(fixed_point_rationals(g), seed=1, samples=30)
        assert report.ok, (token, report.failures[:1])


def test_field_like_burnside_fails():
    g = build_group("C2")
    report = check_field_like(burnside(g), seed=1)
    assert not report.ok


def test_field_like_localized_burnside():
    for token in ["C2", "S3"]:
        g = build_group(token)
        bundle = localized_burnside(g)
        report = check_field_like(bundle.localization, seed=1, samples=10)
        assert report.ok, (token, report.failures[:1])


def test_units_identity_on_rationals():
    g = build_group("C2")
    report = check_field_like(fixed_point_rationals(g), seed=2, samples=100)
    unit_checks = [r for r in report.records if r.check_id == "units"]
    assert len(unit_checks) == 100
    assert all(r.status == "pass" for r in unit_checks)


# --- the headline comparison ----------------------------------------------------------


@pytest.mark.parametrize("token", ["C2", "C3"])
def test_headline_verification_small(token):
    g = build_group(token)
    cert = verify_burnside_localization(
        g, seed=1, naturality_samples=30, rationals_per_level=8, kernel_samples=8
    )
    assert cert.ok, cert.report.failures[:1]


def test_headline_comparison_values_c2():
    g = build_group("C2")
    cert = verify_burnside_localization(
        g, seed=2, naturality_samples=9, rationals_per_level=4, kernel_samples=4
    )
    loc = cert.bundle.localization
    pq = fixed_point_rationals(g)
    x = transitive(g, full_subgroup(g))
    # the unit maps to 1 at every level
    assert pq.eq(cert.comparison.apply(loc.one(x)), pq.one(x))
    # [C2/e]/1 maps to 2
    e = loc.localization_map(
        Element(x, (cert.bundle.omega.basis_vector(full_subgroup(g),
                                                   trivial_subgroup(g)),))
    )
    assert cert.comparison.apply(e).parts == (Fraction(2),)


def test_localized_burnside_equality_via_oracle():
    g = build_group("C2")
    bundle = localized_burnside(g)
    loc = bundle.localization
    om = bundle.omega
    x = transitive(g, full_subgroup(g))
    from tlab.mackey import FracValue, TriState

    one = om.level(full_subgroup(g)).one()
    # [C2/e]/1 equals 2/1 in the localization: difference has zero free mark
    a = loc.element(x, (FracValue((1, 0), one),))
    b = loc.element(x, (FracValue((0, 2), one),))
    assert loc.eq3(a, b) is TriState.EQUAL
    c = loc.element(x, (FracValue((0, 3), one),))
    assert loc.eq3(a, c) is TriState.NOT_EQUAL
