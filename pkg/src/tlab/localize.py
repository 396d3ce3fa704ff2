"""Fractions of Tambara functors by a multiplicative subfunctor.

Restriction, multiplicative transfer and conjugation act on numerator and
denominator componentwise.  The additive transfer of x/s along f uses a
witness pair (a, s_bar) with f^*(s_bar) = a·s, built by default over the
complement of the diagonal; any admissible witness gives the same result,
which the test suite exercises.

Fraction equality x/s = x'/s' means some denominator t kills x·s' - x'·s.
Strategy order: a caller-supplied annihilator oracle, the cancellation
shortcut when denominators are known non-zero-divisors, then a bounded
witness search; comparisons that exhaust every complete strategy surface
UndecidedEquality rather than guessing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from time import perf_counter

from .carriers import Ring
from .errors import (
    InvalidDenominator,
    LevelMismatch,
    NotInvertibleImage,
    UndecidedEquality,
)
from .groups import full_subgroup, subgroup_classes
from .gsets import GMap, coset_projection, orbit_decompose
from .mackey import (
    CheckReport,
    Element,
    FracValue,
    MEMBER,
    Membership,
    SubMonoidFunctor,
    TriState,
    UNKNOWN,
    maps_between,
    transitive_gsets,
)
from .tambara import TambaraFunctor, TambaraMorphism, restriction_witness


class FractionRingCarrier(Ring):
    """Level ring of pairs x/s with tri-state equality."""

    def __init__(self, base: Ring, sub_level, *, oracle=None,
                 cancellative=False, is_field=False, name=None):
        self.base = base
        self.sub_level = sub_level  # (contains, generators, sampler)
        self.oracle = oracle  # value -> ("kills", t) | ("kills-nothing", why) | None
        self.cancellative = cancellative
        self.is_field = is_field
        self.is_domain = is_field or (cancellative and base.is_domain)
        self.name = name or f"frac[{base.name}]"

    def zero(self):
        return FracValue(self.base.zero(), self.base.one())

    def one(self):
        return FracValue(self.base.one(), self.base.one())

    def add(self, a, b):
        return FracValue(
            self.base.add(self.base.mul(a.num, b.den), self.base.mul(b.num, a.den)),
            self.base.mul(a.den, b.den),
        )

    def mul(self, a, b):
        return FracValue(self.base.mul(a.num, b.num), self.base.mul(a.den, b.den))

    def neg(self, a):
        return FracValue(self.base.neg(a.num), a.den)

    def eq3(self, a, b) -> TriState:
        diff = self.base.sub(
            self.base.mul(a.num, b.den), self.base.mul(b.num, a.den)
        )
        if self.base.is_zero(diff):
            return TriState.EQUAL
        if self.oracle is not None:
            verdict = self.oracle(diff)
            if verdict is not None:
                kind, _ = verdict
                return TriState.EQUAL if kind == "kills" else TriState.NOT_EQUAL
        if self.cancellative:
            return TriState.NOT_EQUAL
        contains, gens, _ = self.sub_level
        seen = [self.base.one()]
        frontier = [self.base.one()]
        for _ in range(6):
            nxt = []
            for t in frontier:
                for g in gens:
                    cand = self.base.mul(t, g)
                    if all(not self.base.eq(cand, v) for v in seen):
                        seen.append(cand)
                        nxt.append(cand)
            frontier = nxt
        for t in seen:
            if self.base.is_zero(self.base.mul(t, diff)):
                return TriState.EQUAL
        return TriState.UNKNOWN

    def eq(self, a, b) -> bool:
        verdict = self.eq3(a, b)
        if verdict is TriState.UNKNOWN:
            raise UndecidedEquality("fraction comparison exhausted its strategies")
        return verdict is TriState.EQUAL

    def is_zero(self, a):
        return self.eq(a, self.zero())

    def sample(self, rng):
        _, _, sampler = self.sub_level
        return FracValue(self.base.sample(rng), sampler(rng))

    def sample_unit(self, rng):
        _, _, sampler = self.sub_level
        return FracValue(sampler(rng), sampler(rng))

    def invert(self, a):
        contains, _, _ = self.sub_level
        if contains(a.num).status is MEMBER:
            return FracValue(a.den, a.num)
        if self.is_field and not self.is_zero(a):
            # field flag is only set when the numerator test is complete,
            # so reaching here means a is zero or not invertible
            return None
        return None

    def is_zero_divisor(self, a):
        if self.is_field:
            return self.is_zero(a)
        from .errors import UndecidableCarrier

        raise UndecidableCarrier("fraction carrier has no zero-divisor test")

    def try_divide(self, s, x):
        contains, _, _ = self.sub_level
        if contains(x.num).status is MEMBER:
            return self.mul(s, FracValue(x.den, x.num))
        return None


class FractionTambara(TambaraFunctor):
    """The fraction of a Tambara functor by a multiplicative subfunctor."""

    def __init__(self, base: TambaraFunctor, sub: SubMonoidFunctor, *,
                 eq_oracle=None, denominators_nzd=False,
                 trivial_level_field=False):
        self.base = base
        self.denoms = sub
        self.group = base.group
        self.name = f"{sub.name}^-1 {base.name}"
        self.eq_oracle = eq_oracle  # (sub, value) -> verdict as in the carrier
        self.denominators_nzd = denominators_nzd
        self.trivial_level_field = trivial_level_field
        self._levels = {}

    def level(self, h) -> FractionRingCarrier:
        if h not in self._levels:
            oracle = None
            if self.eq_oracle is not None:
                oracle = lambda value, h=h: self.eq_oracle(h, value)
            self._levels[h] = FractionRingCarrier(
                self.base.level(h),
                (
                    lambda v, h=h: self.denoms.contains_level(h, v),
                    self.denoms.level_generators(h),
                    lambda rng, h=h: self.denoms.sample_level(h, rng),
                ),
                oracle=oracle,
                cancellative=self.denominators_nzd,
                is_field=self.trivial_level_field and h.order == 1,
            )
        return self._levels[h]

    # --- level maps ---

    def res_level(self, upper, lower, value):
        return FracValue(
            self.base.res_level(upper, lower, value.num),
            self.base.res_level(upper, lower, value.den),
        )

    def nm_level(self, upper, lower, value):
        return FracValue(
            self.base.nm_level(upper, lower, value.num),
            self.base.nm_level(upper, lower, value.den),
        )

    def conj_level(self, g, sub, value):
        return FracValue(
            self.base.conj_level(g, sub, value.num),
            self.base.conj_level(g, sub, value.den),
        )

    def tr_level(self, upper, lower, value):
        proj = coset_projection(self.group, lower, upper)
        src = proj.source
        num = Element(src, (value.num,))
        den = Element(src, (value.den,))
        a, sbar = restriction_witness(self.base, proj, den)
        out_num = self.base.transfer(proj, self.base.mul(a, num))
        return FracValue(out_num.parts[0], sbar.parts[0])

    # --- fraction-specific API ---

    def localization_map(self, elem: Element) -> Element:
        d = orbit_decompose(elem.gset)
        parts = tuple(
            FracValue(v, self.base.level(o.stabilizer).one())
            for o, v in zip(d.orbits, elem.parts)
        )
        return Element(elem.gset, parts)

    def ell(self) -> TambaraMorphism:
        def level_map(sub, value):
            return FracValue(value, self.base.level(sub).one())

        return TambaraMorphism(self.base, self, level_map, name="ell")

    def fraction(self, num: Element, den: Element) -> Element:
        """Build x/s after verifying the denominator's membership."""
        if num.gset is not den.gset:
            raise LevelMismatch("numerator and denominator at different G-sets")
        verdict = self.denoms.contains(den)
        if verdict.status is not MEMBER:
            raise InvalidDenominator(
                f"denominator not verified in {self.denoms.name}: {verdict.reason}"
            )
        return Element(num.gset, tuple(
            FracValue(n, d) for n, d in zip(num.parts, den.parts)
        ))

    def numerator(self, elem: Element) -> Element:
        return Element(elem.gset, tuple(v.num for v in elem.parts))

    def denominator(self, elem: Element) -> Element:
        return Element(elem.gset, tuple(v.den for v in elem.parts))

    def transfer_direct(self, f: GMap, elem: Element, witness=None) -> Element:
        """Whole-map additive transfer from one witness pair (a, s_bar) with
        f^*(s_bar) = a·s; the default witness is the diagonal-complement one.
        Independent of the per-component route used by the engine."""
        num = self.numerator(elem)
        den = self.denominator(elem)
        if witness is None:
            a, sbar = restriction_witness(self.base, f, den)
        else:
            a, sbar = witness
            lhs = self.base.restrict(f, sbar)
            if not self.base.eq(lhs, self.base.mul(a, den)):
                raise InvalidDenominator("witness pair fails f^*(s_bar) = a·s")
            if self.denoms.contains(sbar).status is not MEMBER:
                raise InvalidDenominator("witness denominator not in the subfunctor")
        out_num = self.base.transfer(f, self.base.mul(a, num))
        return Element(f.target, tuple(
            FracValue(n, d) for n, d in zip(out_num.parts, sbar.parts)
        ))

    def admissible_witnesses(self, f: GMap, elem: Element, rng, count: int = 3):
        """Several admissible pairs: the default one, and (a·f^*(u), s_bar·u)
        for denominators u sampled at the target."""
        den = self.denominator(elem)
        a, sbar = restriction_witness(self.base, f, den)
        out = [(a, sbar)]
        while len(out) < count:
            u = self.denoms.sample(f.target, rng)
            out.append((
                self.base.mul(a, self.base.restrict(f, u)),
                self.base.mul(sbar, u),
            ))
        return out

    def eq3(self, a: Element, b: Element) -> TriState:
        d = orbit_decompose(a.gset)
        verdict = TriState.EQUAL
        for orbit, va, vb in zip(d.orbits, a.parts, b.parts):
            v = self.level(orbit.stabilizer).eq3(va, vb)
            if v is TriState.NOT_EQUAL:
                return TriState.NOT_EQUAL
            if v is TriState.UNKNOWN:
                verdict = TriState.UNKNOWN
        return verdict

    def eq(self, a, b) -> bool:
        if a.gset is not b.gset:
            raise LevelMismatch("cannot compare across G-sets")
        verdict = self.eq3(a, b)
        if verdict is TriState.UNKNOWN:
            raise UndecidedEquality("fraction comparison exhausted its strategies")
        return verdict is TriState.EQUAL


def fraction_tambara(base: TambaraFunctor, sub: SubMonoidFunctor, *,
                     eq_oracle=None, denominators_nzd=False,
                     trivial_level_field=False) -> FractionTambara:
    return FractionTambara(
        base, sub,
        eq_oracle=eq_oracle,
        denominators_nzd=denominators_nzd,
        trivial_level_field=trivial_level_field,
    )


# ---------------------------------------------------------------------------
# Universal factorization through the localization


def universal_factorization(loc: FractionTambara, phi: TambaraMorphism, *,
                            inverse_by_solving=False) -> TambaraMorphism:
    """The unique morphism out of the fraction with value phi(x)·phi(s)^-1.

    Raises NotInvertibleImage when a denominator generator maps to a
    non-unit.  With inverse_by_solving the inverse is found by exact
    division instead of the carrier's inverse: an independent construction
    that must agree with the direct one.
    """
    base, sub, target = loc.base, loc.denoms, phi.target
    for rep in subgroup_classes(full_subgroup(base.group)).representatives:
        carrier = target.level(rep)
        for gen in sub.level_generators(rep):
            img = phi.level_map(rep, gen)
            if carrier.invert(img) is None:
                raise NotInvertibleImage(f"generator image {img!r} is not a unit")

    def level_map(sub_h, value: FracValue):
        carrier = target.level(sub_h)
        num = phi.level_map(sub_h, value.num)
        den = phi.level_map(sub_h, value.den)
        if inverse_by_solving:
            inv = carrier.try_divide(carrier.one(), den)
        else:
            inv = carrier.invert(den)
        if inv is None:
            raise NotInvertibleImage(f"denominator image {den!r} is not a unit")
        return carrier.mul(num, inv)

    tag = "~solve" if inverse_by_solving else "~"
    return TambaraMorphism(loc, target, level_map, name=f"{phi.name}{tag}")


# ---------------------------------------------------------------------------
# Images and preimages of subfunctors along morphisms


class ImageSubfunctor(SubMonoidFunctor):
    """phi(S): generated by images of generators; membership is verified by
    bounded products of image generators (tri-state in general)."""

    def __init__(self, phi: TambaraMorphism, sub: SubMonoidFunctor, *,
                 use_multiplicative_parent=True, search_bound: int = 5):
        self.phi = phi
        self.inner = sub
        self.parent = (phi.target.multiplicative_view()
                       if use_multiplicative_parent else phi.target)
        self.search_bound = search_bound
        self.name = f"{phi.name}({sub.name})"

    def contains_level(self, sub_h, value):
        carrier = self.phi.target.level(sub_h)
        gens = self.level_generators(sub_h)
        seen = [carrier.one()]
        frontier = [carrier.one()]
        if any(carrier.eq(value, v) for v in seen):
            return Membership(MEMBER, witness="unit")
        for _ in range(self.search_bound):
            nxt = []
            for t in frontier:
                for g in gens:
                    cand = carrier.mul(t, g)
                    if all(not carrier.eq(cand, v) for v in seen):
                        seen.append(cand)
                        nxt.append(cand)
                        if carrier.eq(value, cand):
                            return Membership(MEMBER, witness="generator product")
            frontier = nxt
        return Membership(UNKNOWN, reason="no bounded generator-product preimage")

    def level_generators(self, sub_h):
        return tuple(
            self.phi.level_map(sub_h, g) for g in self.inner.level_generators(sub_h)
        )

    def sample_level(self, sub_h, rng):
        return self.phi.level_map(sub_h, self.inner.sample_level(sub_h, rng))


class PreimageSubfunctor(SubMonoidFunctor):
    """phi^-1(S'): the predicate pullback; complete whenever S' is."""

    def __init__(self, phi: TambaraMorphism, outer: SubMonoidFunctor):
        self.phi = phi
        self.outer = outer
        self.parent = phi.source.multiplicative_view()
        self.name = f"{phi.name}^-1({outer.name})"

    def contains_level(self, sub_h, value):
        return self.outer.contains_level(sub_h, self.phi.level_map(sub_h, value))

    def level_generators(self, sub_h):
        return (self.phi.source.level(sub_h).one(),)

    def sample_level(self, sub_h, rng):
        carrier = self.phi.source.level(sub_h)
        for _ in range(32):
            v = carrier.sample(rng)
            if self.contains_level(sub_h, v).status is MEMBER:
                return v
        return carrier.one()


def induced_fraction_morphism(phi: TambaraMorphism, loc_source: FractionTambara,
                              loc_target: FractionTambara) -> TambaraMorphism:
    """The componentwise map x/s ↦ phi(x)/phi(s) between fractions, defined
    whenever the target denominators include the images."""

    def level_map(sub_h, value: FracValue):
        return FracValue(
            phi.level_map(sub_h, value.num), phi.level_map(sub_h, value.den)
        )

    return TambaraMorphism(loc_source, loc_target, level_map, name=f"{phi.name}/")


# ---------------------------------------------------------------------------
# Iterated fractions: S ⊆ S' gives S'^-1 T ≅ (image of S')^-1 (S^-1 T)


@dataclass
class IteratedFractionIso:
    outer: FractionTambara          # S'^-1 T
    inner: FractionTambara          # S^-1 T
    twice: FractionTambara          # bar^-1 (S^-1 T)
    bar: SubMonoidFunctor
    forward: TambaraMorphism        # outer -> twice
    report: CheckReport

    def backward(self, elem: Element) -> Element:
        """Flatten (x/s)/(s'/1) to x/(s·s'); defined on the sampled shapes."""
        base = self.inner.base
        d = orbit_decompose(elem.gset)
        parts = []
        for orbit, v in zip(d.orbits, elem.parts):
            lvl = base.level(orbit.stabilizer)
            inner_num: FracValue = v.num
            inner_den: FracValue = v.den
            num = lvl.mul(inner_num.num, inner_den.den)
            den = lvl.mul(inner_num.den, inner_den.num)
            parts.append(FracValue(num, den))
        return Element(elem.gset, tuple(parts))


def iterated_fraction_iso(base: TambaraFunctor, small: SubMonoidFunctor,
                          large: SubMonoidFunctor, *, seed: int = 0,
                          samples: int = 12,
                          small_nzd=False, small_oracle=None,
                          large_nzd=False, large_oracle=None) -> IteratedFractionIso:
    """Build both sides of the iterated-fraction comparison, certify the
    round trips and compatibility with the canonical maps on samples.

    The two denominator families may need different equality strategies
    (the smaller one can consist of non-zero-divisors while the larger one
    needs an annihilator oracle), hence the separate settings.  The doubly
    localized side inherits the large family's oracle through numerators:
    a nested difference is annihilated by an image denominator exactly when
    its numerator's numerator is annihilated by a large denominator.
    """
    rng = random.Random(seed)
    report = CheckReport("iterated-fraction")
    # containment of the denominator families, on generators
    for rep in subgroup_classes(full_subgroup(base.group)).representatives:
        for g in small.level_generators(rep):
            m = large.contains_level(rep, g)
            report.add("containment", "small denominators lie in the large family",
                       m.status is MEMBER, witness=m.reason or None)
    inner = fraction_tambara(base, small, denominators_nzd=small_nzd,
                             eq_oracle=small_oracle)
    outer = fraction_tambara(base, large, denominators_nzd=large_nzd,
                             eq_oracle=large_oracle)
    bar = ImageSubfunctor(inner.ell(), large)
    oracle2 = None
    if large_oracle is not None:
        def oracle2(sub_h, value: FracValue, _oracle=large_oracle):
            return _oracle(sub_h, value.num)
    twice = fraction_tambara(inner, bar, denominators_nzd=large_nzd,
                             eq_oracle=oracle2)

    def forward_level(sub_h, value: FracValue):
        lvl = base.level(sub_h)
        return FracValue(FracValue(value.num, lvl.one()), FracValue(value.den, lvl.one()))

    forward = TambaraMorphism(outer, twice, forward_level, name="iterate")
    iso = IteratedFractionIso(outer, inner, twice, bar, forward, report)

    objs = transitive_gsets(base.group)
    for x in objs:
        started = perf_counter()
        for _ in range(max(1, samples // max(1, len(objs)))):
            a = outer.sample(x, rng)
            round1 = iso.backward(forward.apply(a))
            report.add("round-trip", "flattening inverts the comparison map",
                       outer.eq(round1, a), started=started)
            b = twice.sample(x, rng)
            round2 = forward.apply(iso.backward(b))
            verdict = twice.eq3(round2, b)
            report.add("round-trip-2", "comparison map inverts flattening",
                       verdict is TriState.EQUAL, started=started,
                       undecided=verdict is TriState.UNKNOWN)
        # compatibility with the canonical maps
        t = base.sample(x, rng)
        lhs = forward.apply(outer.localization_map(t))
        rhs = twice.localization_map(inner.localization_map(t))
        report.add("ell-compat", "comparison commutes with the canonical maps",
                   twice.eq(lhs, rhs), started=started)
        # ring-map spot checks
        u, v = outer.sample(x, rng), outer.sample(x, rng)
        report.add("ring-hom", "comparison preserves sums",
                   twice.eq(forward.apply(outer.add(u, v)),
                            twice.add(forward.apply(u), forward.apply(v))),
                   started=started)
        report.add("ring-hom", "comparison preserves products",
                   twice.eq(forward.apply(outer.mul(u, v)),
                            twice.mul(forward.apply(u), forward.apply(v))),
                   started=started)
    for x in objs:
        for y in objs:
            for f in maps_between(x, y)[:2]:
                started = perf_counter()
                a = outer.sample(x, rng)
                report.add("nat-tr", "comparison commutes with additive transfer",
                           twice.eq(forward.apply(outer.transfer(f, a)),
                                    twice.transfer(f, forward.apply(a))),
                           started=started)
                b = outer.sample(y, rng)
                report.add("nat-res", "comparison commutes with restriction",
                           twice.eq(forward.apply(outer.restrict(f, b)),
                                    twice.restrict(f, forward.apply(b))),
                           started=started)
    return iso
