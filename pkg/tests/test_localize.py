"""Fraction-of-Tambara tests: transfers with witnesses, universal maps,
image/preimage families, iterated fractions."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tlab.analysis import (
    localized_burnside,
    maximal_nzd_subfunctor,
    nonzerodivisor_seed,
    rational_marks_morphism,
)
from tlab.burnside import burnside
from tlab.errors import InvalidDenominator, NotInvertibleImage
from tlab.fixedpoint import fixed_point_integers, fixed_point_rationals
from tlab.groups import build_group, full_subgroup, trivial_subgroup
from tlab.gsets import free_orbit, from_free, one_point, to_point, transitive
from tlab.localize import (
    ImageSubfunctor,
    PreimageSubfunctor,
    fraction_tambara,
    induced_fraction_morphism,
    iterated_fraction_iso,
    universal_factorization,
)
from tlab.mackey import (
    Element,
    FracValue,
    MEMBER,
    TriState,
    UnitsSubfunctor,
    check_mackey,
    maximal_subfunctor,
    minimal_subfunctor,
)
from tlab.tambara import check_distributive, check_tambara_morphism, identity_morphism


def pz_with_nzd(group):
    pz = fixed_point_integers(group)
    seed = nonzerodivisor_seed(pz)
    denom = maximal_subfunctor(pz.multiplicative_view(), seed)
    loc = fraction_tambara(pz, denom, denominators_nzd=True, trivial_level_field=True)
    return pz, denom, loc


# --- basic fraction arithmetic ---------------------------------------------------


def test_fixed_point_fraction_equality():
    g = build_group("C2")
    pz, denom, loc = pz_with_nzd(g)
    x = one_point(g)
    a = loc.element(x, (FracValue(3, 2),))
    b = loc.element(x, (FracValue(6, 4),))
    c = loc.element(x, (FracValue(5, 2),))
    assert loc.eq(a, b)
    assert not loc.eq(a, c)
    assert loc.eq3(a, c) is TriState.NOT_EQUAL


def test_fraction_rejects_bad_denominator():
    g = build_group("C2")
    pz, denom, loc = pz_with_nzd(g)
    x = one_point(g)
    with pytest.raises(InvalidDenominator):
        loc.fraction(pz.one(x), pz.zero(x))


def test_fraction_transfer_unit_denominator():
    # transfers of x/1 are transfers of x over 1
    g = build_group("C3")
    pz, denom, loc = pz_with_nzd(g)
    free = free_orbit(g)
    e = loc.localization_map(pz.element(free, (5,)))
    up = loc.transfer(to_point(free), e)
    expect = loc.localization_map(pz.transfer(to_point(free), pz.element(free, (5,))))
    assert loc.eq(up, expect)


def test_fraction_transfer_direct_matches_engine():
    g = build_group("S3")
    pz, denom, loc = pz_with_nzd(g)
    rng = random.Random(3)
    from tlab.mackey import maps_between, transitive_gsets

    objs = transitive_gsets(g)
    for x in objs:
        for y in objs:
            for f in maps_between(x, y)[:2]:
                e = loc.sample(x, rng)
                assert loc.eq(loc.transfer(f, e), loc.transfer_direct(f, e))


def test_fraction_transfer_witness_independence():
    g = build_group("C2")
    pz, denom, loc = pz_with_nzd(g)
    rng = random.Random(4)
    free = free_orbit(g)
    f = to_point(free)
    e = loc.sample(free, rng)
    results = [
        loc.transfer_direct(f, e, witness=w)
        for w in loc.admissible_witnesses(f, e, rng, count=3)
    ]
    for r in results[1:]:
        assert loc.eq(results[0], r)


def test_fraction_mackey_condition_small():
    g = build_group("C2")
    pz, denom, loc = pz_with_nzd(g)
    assert check_mackey(loc.additive_view(), seed=6, samples=1).ok
    assert check_mackey(loc.multiplicative_view(), seed=6, samples=1).ok


def test_fraction_distributive_small():
    g = build_group("C2")
    pz, denom, loc = pz_with_nzd(g)
    report = check_distributive(loc, seed=7, samples=1, max_sections=64)
    assert report.ok, report.failures[:1]


def test_units_localization_is_identity_like():
    # denominators inside the units: the canonical map is invertible
    g = build_group("C2")
    pz = fixed_point_integers(g)
    units = UnitsSubfunctor(pz.multiplicative_view())
    loc = fraction_tambara(pz, units, denominators_nzd=True)
    x = one_point(g)
    val = loc.element(x, (FracValue(-6, -1),))
    assert loc.eq(val, loc.localization_map(pz.element(x, (6,))))
    tilde = universal_factorization(loc, identity_morphism(pz))
    assert tilde.apply(val).parts == (6,)


# --- universal factorization -----------------------------------------------------


def test_universal_factorization_requires_units():
    g = build_group("C2")
    pz, denom, loc = pz_with_nzd(g)
    # the identity into integer fixed points does not invert 2
    with pytest.raises(NotInvertibleImage):
        universal_factorization(loc, identity_morphism(pz))


def test_universal_factorization_into_rationals():
    g = build_group("C2")
    pz, denom, loc = pz_with_nzd(g)
    pq = fixed_point_rationals(g)
    from tlab.tambara import TambaraMorphism

    embed = TambaraMorphism(pz, pq, lambda sub, v: Fraction(v), name="embed")
    tilde = universal_factorization(loc, embed)
    tilde2 = universal_factorization(loc, embed, inverse_by_solving=True)
    rng = random.Random(5)
    for x in [one_point(g), free_orbit(g)]:
        for _ in range(20):
            e = loc.sample(x, rng)
            assert pq.eq(tilde.apply(e), tilde2.apply(e))
        t = pz.sample(x, rng)
        assert pq.eq(tilde.apply(loc.localization_map(t)), embed.apply(t))
    # the factorization is a morphism
    assert check_tambara_morphism(tilde, seed=8, samples=2).ok


# --- image and preimage families ------------------------------------------------


def test_image_subfunctor_identity():
    g = build_group("C2")
    pz, denom, loc = pz_with_nzd(g)
    img = ImageSubfunctor(identity_morphism(pz), denom)
    triv = trivial_subgroup(g)
    for gen in denom.level_generators(triv):
        assert img.contains_level(triv, gen).status is MEMBER


def test_image_of_denominators_under_marks():
    g = build_group("C2")
    bundle = localized_burnside(g)
    from tlab.burnside import marks_morphism

    wp = marks_morphism(g)
    img = ImageSubfunctor(wp, bundle.denominators)
    triv = trivial_subgroup(g)
    # the image family at the free level consists of nonzero integers
    for gen in img.level_generators(triv):
        assert gen != 0


def test_preimage_subfunctor_units_of_rationals():
    g = build_group("C2")
    omega = burnside(g)
    pq = fixed_point_rationals(g)
    phi = rational_marks_morphism(g)
    units = UnitsSubfunctor(pq.multiplicative_view())
    pre = PreimageSubfunctor(phi, units)
    top = full_subgroup(g)
    # m·unit has nonzero count for every m != 0
    omega_level = omega.level(top)
    for m in (1, -1, 2, 5):
        vec = tuple(m * v for v in omega_level.one())
        assert pre.contains_level(top, vec).status is MEMBER
    assert pre.contains_level(top, (1, -2)).status is not MEMBER


def test_induced_fraction_morphism():
    g = build_group("C2")
    bundle = localized_burnside(g)
    pq = fixed_point_rationals(g)
    phi = rational_marks_morphism(g)
    img = ImageSubfunctor(phi, bundle.denominators)
    target_loc = fraction_tambara(pq, img, denominators_nzd=True)
    induced = induced_fraction_morphism(phi, bundle.localization, target_loc)
    rng = random.Random(9)
    x = transitive(g, full_subgroup(g))
    e = bundle.localization.sample(x, rng)
    out = induced.apply(e)
    # numerators and denominators are the marks of the originals
    assert out.parts[0].num == phi.level_map(full_subgroup(g), e.parts[0].num)


# --- iterated fractions ----------------------------------------------------------


def test_iterated_fraction_iso_fixed_points():
    g = build_group("C2")
    pz = fixed_point_integers(g)
    seed = nonzerodivisor_seed(pz)
    small = minimal_subfunctor(pz.multiplicative_view(), seed)
    large = maximal_subfunctor(pz.multiplicative_view(), seed)
    iso = iterated_fraction_iso(pz, small, large, seed=10, samples=8,
                                small_nzd=True, large_nzd=True)
    assert iso.report.ok, iso.report.failures[:1]


def test_iterated_fraction_iso_same_family():
    g = build_group("C2")
    pz = fixed_point_integers(g)
    seed = nonzerodivisor_seed(pz)
    large = maximal_subfunctor(pz.multiplicative_view(), seed)
    iso = iterated_fraction_iso(pz, large, large, seed=11, samples=6,
                                small_nzd=True, large_nzd=True)
    assert iso.report.ok, iso.report.failures[:1]


def test_iterated_fraction_iso_burnside_example():
    # the minimal-inside-maximal comparison for the Burnside functor: both
    # sides collapse to rational levels through the free-orbit mark
    g = build_group("C2")
    bundle = localized_burnside(g)
    om = bundle.omega
    seed = nonzerodivisor_seed(om)
    small = minimal_subfunctor(om.multiplicative_view(), seed)
    large = bundle.denominators
    iso = iterated_fraction_iso(
        om, small, large, seed=12, samples=10,
        small_nzd=True,                      # minimal members have all marks nonzero
        large_oracle=bundle.localization.eq_oracle,
    )
    assert iso.report.ok, (iso.report.failures[:1], iso.report.undecided[:1])
