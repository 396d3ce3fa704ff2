"""Suite runner: turns the verification toolkit into named, reproducible
check suites with machine-readable reports.

Suite map:
  axioms             pullback-square and distributivity laws for the
                     Burnside and integer fixed-point functors, plus the
                     index-transfer identities over every subgroup
  subfunctors        the diagonal-complement witness identity, and the
                     minimal/maximal denominator families of the
                     non-zero-divisor seed (free-level recovery, inclusion
                     with witnesses, saturation idempotence)
  fractions          well-definedness of the fraction transfer across
                     independent witnesses, additivity, functoriality, and
                     the universal factorization into rational fixed points
  ideals             the kernel ideal's closure laws, quotient-vs-fraction
                     interchange, and the descended marks isomorphism
  mrc-fieldlike      injective-restriction and field-likeness verdicts
  omega-localization the certified comparison of the localized Burnside
                     functor with the rational fixed points
  all                everything above
"""

from __future__ import annotations

import random
from time import perf_counter

from .analysis import (
    check_field_like,
    check_index_transfer,
    check_restriction_injectivity,
    localized_burnside,
    nonzerodivisor_seed,
    rational_marks_morphism,
    verify_burnside_localization,
)
from .burnside import burnside, index_weights, marks_morphism
from .carriers import kernel_basis, lattice_equal
from .errors import BadSpec, NotInvertibleImage
from .fixedpoint import fixed_point_integers, fixed_point_rationals
from .groups import build_group, full_subgroup, subgroup_classes, trivial_subgroup
from .gsets import compose
from .ideals import (
    check_ideal_conditions,
    localized_ideal_iso,
    quotient,
    restriction_kernel_ideal,
)
from .localize import universal_factorization
from .mackey import (
    CheckReport,
    MEMBER,
    TriState,
    check_mackey,
    maps_between,
    maximal_subfunctor,
    minimal_subfunctor,
    seed_saturation,
    transitive_gsets,
)
from .report import VerificationReport
from .tambara import check_distributive, check_tambara_morphism
from .mackey import UnitsSubfunctor, is_subfunctor

SUITES = (
    "axioms",
    "subfunctors",
    "fractions",
    "ideals",
    "mrc-fieldlike",
    "omega-localization",
    "all",
)


def run_suite(suite: str, group_spec, *, seed: int = 1, samples: int = 100,
              max_points: int = 24, max_sections: int = 10**4,
              lenient: bool = False) -> VerificationReport:
    if suite not in SUITES:
        raise BadSpec(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    group = build_group(group_spec)
    report = VerificationReport(
        suite=suite,
        group=group.name,
        seed=seed,
        config={
            "samples": samples,
            "max_points": max_points,
            "max_sections": max_sections,
            "lenient": lenient,
        },
    )
    wanted = SUITES[:-1] if suite == "all" else (suite,)
    runners = {
        "axioms": _suite_axioms,
        "subfunctors": _suite_subfunctors,
        "fractions": _suite_fractions,
        "ideals": _suite_ideals,
        "mrc-fieldlike": _suite_mrc_fieldlike,
        "omega-localization": _suite_localization,
    }
    for name in wanted:
        for section in runners[name](group, seed=seed, samples=samples,
                                     max_points=max_points,
                                     max_sections=max_sections):
            report.extend(section)
    return report


def _suite_axioms(group, *, seed, samples, max_points, max_sections):
    sections = []
    for tam in (burnside(group), fixed_point_integers(group)):
        sections.append(check_mackey(
            tam.additive_view(), seed=seed, samples=2,
            max_total_points=max_points,
            report_name=f"mackey-additive[{tam.name}]",
        ))
        sections.append(check_mackey(
            tam.multiplicative_view(), seed=seed, samples=2,
            max_total_points=max_points,
            report_name=f"mackey-multiplicative[{tam.name}]",
        ))
        sections.append(check_distributive(
            tam, seed=seed, samples=2, max_sections=max_sections,
            random_diagrams=200,
            report_name=f"distributive[{tam.name}]",
        ))
        sections.append(check_index_transfer(tam))
    return sections


def _suite_subfunctors(group, *, seed, samples, max_points, max_sections):
    rng = random.Random(seed)
    sections = []
    om = burnside(group)
    pz = fixed_point_integers(group)

    witness = CheckReport("restriction-witness-identity")
    from .gsets import diagonal_complement

    for tam in (om, pz):
        objs = transitive_gsets(group)
        all_maps = [f for x in objs for y in objs for f in maps_between(x, y)]
        for n in range(samples):
            f = all_maps[rng.randrange(len(all_maps))]
            s = tam.sample(f.source, rng)
            started = perf_counter()
            z, q1, q2 = diagonal_complement(f)
            a = tam.norm(q1, tam.restrict(q2, s))
            lhs = tam.restrict(f, tam.norm(f, s))
            rhs = tam.mul(a, s)
            witness.add(f"{tam.name}-{n}",
                        "restricted norm equals the diagonal-complement witness times the element",
                        tam.eq(lhs, rhs), started=started)
    sections.append(witness)

    zseed = nonzerodivisor_seed(om)
    lo = minimal_subfunctor(om.multiplicative_view(), zseed)
    hi = maximal_subfunctor(om.multiplicative_view(), zseed)
    triv = trivial_subgroup(group)
    free_level = CheckReport("free-level-recovery")
    half = max(1, samples // 2)
    for n in range(half):
        started = perf_counter()
        v = zseed.sample(rng)
        free_level.add(f"seed-into-min-{n}", "seed values belong to the minimal family",
                       lo.contains_level(triv, v).status is MEMBER, started=started)
        free_level.add(f"seed-into-max-{n}", "seed values belong to the maximal family",
                       hi.contains_level(triv, v).status is MEMBER, started=started)
        w = lo.sample_level(triv, rng)
        free_level.add(f"min-into-seed-{n}", "minimal members at the free level satisfy the seed",
                       zseed.contains(w), started=started)
        u = hi.sample_level(triv, rng)
        free_level.add(f"max-into-seed-{n}", "maximal members at the free level satisfy the seed",
                       zseed.contains(u), started=started)
    sections.append(free_level)

    inclusion = CheckReport("minimal-inside-maximal")
    for rep in subgroup_classes(full_subgroup(group)).representatives:
        started = perf_counter()
        for gen in lo.level_generators(rep):
            hit = hi.contains_level(rep, gen)
            inclusion.add(
                f"gen-{rep.members}",
                "every minimal generator is a maximal member with a witness",
                hit.status is MEMBER and hit.witness is not None,
                started=started,
            )
    sections.append(inclusion)

    idem = CheckReport("saturation-idempotence")
    sat1 = seed_saturation(om.multiplicative_view(), zseed)
    sat2 = seed_saturation(om.multiplicative_view(), sat1)
    carrier = om.level(triv)
    for n in range(half):
        started = perf_counter()
        v = carrier.sample(rng)
        idem.add(f"sample-{n}", "saturating twice answers like saturating once",
                 sat1.contains(v) == sat2.contains(v) == zseed.contains(v),
                 started=started)
    sections.append(idem)

    sections.append(is_subfunctor(
        UnitsSubfunctor(om.multiplicative_view()),
        report_name="units-family-closure",
    ))
    return sections


def _suite_fractions(group, *, seed, samples, max_points, max_sections):
    rng = random.Random(seed)
    sections = []
    bundle = localized_burnside(group)
    loc = bundle.localization
    objs = transitive_gsets(group)
    all_maps = [f for x in objs for y in objs for f in maps_between(x, y)]

    well = CheckReport("transfer-well-definedness")
    for n in range(samples):
        f = all_maps[rng.randrange(len(all_maps))]
        e = loc.sample(f.source, rng)
        started = perf_counter()
        results = [
            loc.transfer_direct(f, e, witness=w)
            for w in loc.admissible_witnesses(f, e, rng, count=3)
        ]
        verdicts = [loc.eq3(results[0], r) for r in results[1:]]
        engine = loc.eq3(results[0], loc.transfer(f, e))
        ok = all(v is TriState.EQUAL for v in verdicts) and engine is TriState.EQUAL
        well.add(f"pair-{n}",
                 "independent admissible witnesses give the same transfer",
                 ok, started=started,
                 undecided=any(v is TriState.UNKNOWN for v in verdicts))
    sections.append(well)

    addf = CheckReport("transfer-additivity-functoriality")
    for n in range(samples):
        f = all_maps[rng.randrange(len(all_maps))]
        a = loc.sample(f.source, rng)
        b = loc.sample(f.source, rng)
        started = perf_counter()
        lhs = loc.transfer(f, loc.add(a, b))
        rhs = loc.add(loc.transfer(f, a), loc.transfer(f, b))
        addf.add(f"add-{n}", "fraction transfer is additive",
                 loc.eq(lhs, rhs), started=started)
        # composable second leg out of the target
        outs = [h for h in all_maps if h.source is f.target]
        h = outs[rng.randrange(len(outs))]
        lhs = loc.transfer(compose(h, f), a)
        rhs = loc.transfer(h, loc.transfer(f, a))
        addf.add(f"comp-{n}", "fraction transfer respects composition",
                 loc.eq(lhs, rhs), started=started)
    sections.append(addf)

    uni = CheckReport("universal-factorization")
    pq = fixed_point_rationals(group)
    phi = rational_marks_morphism(group)
    try:
        theta = universal_factorization(loc, phi)
        theta2 = universal_factorization(loc, phi, inverse_by_solving=True)
        for n in range(samples):
            x = objs[rng.randrange(len(objs))]
            started = perf_counter()
            t = bundle.omega.sample(x, rng)
            uni.add(f"ell-{n}", "the factorization composed with the canonical map is the original",
                    pq.eq(theta.apply(loc.localization_map(t)), phi.apply(t)),
                    started=started)
            e = loc.sample(x, rng)
            uni.add(f"two-{n}", "two independent constructions agree",
                    pq.eq(theta.apply(e), theta2.apply(e)), started=started)
    except NotInvertibleImage as exc:
        uni.add("setup", "denominator generators map to units", False,
                witness=str(exc))
    sections.append(uni)
    return sections


def _suite_ideals(group, *, seed, samples, max_points, max_sections):
    sections = []
    om = burnside(group)
    ideal = restriction_kernel_ideal(om)
    sections.append(check_ideal_conditions(ideal, seed=seed))

    bundle = localized_burnside(group)
    iso = localized_ideal_iso(
        om, ideal, bundle.denominators,
        seed=seed, samples=max(20, samples // 3),
        eq_oracle=bundle.localization.eq_oracle,
        denominators_nzd=False,
        quotient_denominators_nzd=True,
    )
    sections.append(iso.report)

    lattices = CheckReport("marks-kernel-vs-ideal")
    for rep in subgroup_classes(full_subgroup(group)).representatives:
        started = perf_counter()
        weights = index_weights(rep)
        lattices.add(
            f"level-{rep.members}",
            "the index-weight kernel equals the ideal lattice",
            lattice_equal(kernel_basis([weights]), ideal.lattice(rep)),
            started=started,
        )
    sections.append(lattices)

    q, proj = quotient(om, ideal)
    pz = fixed_point_integers(group)
    wp = marks_morphism(group)
    from .tambara import TambaraMorphism

    descended = TambaraMorphism(q, pz, wp.level_map, name="marks-descended")
    sections.append(check_tambara_morphism(
        descended, seed=seed, samples=2, report_name="descended-marks-morphism"
    ))
    onto = CheckReport("descended-marks-bijective")
    for rep in subgroup_classes(full_subgroup(group)).representatives:
        started = perf_counter()
        onto.add(f"onto-{rep.members}", "the descended map hits one, hence everything",
                 descended.level_map(rep, om.unit_vector(rep)) == 1, started=started)
    sections.append(onto)
    return sections


def _suite_mrc_fieldlike(group, *, seed, samples, max_points, max_sections):
    sections = []
    pz = fixed_point_integers(group)
    pq = fixed_point_rationals(group)
    om = burnside(group)
    bundle = localized_burnside(group)

    verdicts = CheckReport("injective-restriction-verdicts")
    started = perf_counter()
    verdicts.add("pz", "integer fixed points have injective restrictions",
                 check_restriction_injectivity(pz).ok, started=started)
    verdicts.add("pq", "rational fixed points have injective restrictions",
                 check_restriction_injectivity(pq).ok, started=started)
    verdicts.add("loc", "the localized Burnside functor has injective restrictions",
                 check_restriction_injectivity(bundle.localization).ok, started=started)
    burnside_report = check_restriction_injectivity(om)
    verdicts.add("omega", "the Burnside functor fails injectivity (kernel detected)",
                 not burnside_report.ok and bool(burnside_report.failures),
                 started=started)
    sections.append(verdicts)

    field = CheckReport("field-likeness-verdicts")
    started = perf_counter()
    field.add("pq", "rational fixed points are field-like",
              check_field_like(pq, seed=seed, samples=samples).ok, started=started)
    field.add("loc", "the localized Burnside functor is field-like",
              check_field_like(bundle.localization, seed=seed, samples=10).ok,
              started=started)
    field.add("omega", "the Burnside functor is not field-like",
              not check_field_like(om, seed=seed, samples=4).ok, started=started)
    sections.append(field)

    units = check_field_like(pq, seed=seed + 1, samples=samples,
                             report_name="rational-units-identity")
    sections.append(units)
    return sections


def _suite_localization(group, *, seed, samples, max_points, max_sections):
    cert = verify_burnside_localization(
        group, seed=seed,
        naturality_samples=2 * samples,
        rationals_per_level=max(1, samples // 2),
        kernel_samples=max(1, samples // 2),
    )
    return [cert.report]
