"""Tambara functors: ring-valued levels with restriction, additive transfer
and multiplicative transfer, presented levelwise and evaluated through the
same orbit-component engine as the semi-Mackey layer.

The two semi-Mackey views (additive and multiplicative) are first-class, so
every pullback-square checker runs on Tambara functors unchanged; the
distributive law gets its own checker over generated dependent-product
diagrams.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from time import perf_counter

from .carriers import ProductCarrier, Ring, RingAddMonoid, RingMulMonoid
from .errors import LevelMismatch, SectionBlowup
from .groups import Subgroup, full_subgroup, subgroup_classes
from .gsets import (
    GMap,
    GSet,
    coproduct,
    copair,
    diagonal_complement,
    empty_gset,
    exponential,
    orbit_decompose,
    transitive,
)
from .mackey import (
    CheckReport,
    Element,
    SemiMackeyFunctor,
    map_components,
    maps_between,
    transitive_gsets,
)


class TambaraFunctor:
    """Levelwise Tambara presentation; subclasses provide the level data."""

    group = None
    name = "T"

    # --- level data ---

    def level(self, sub: Subgroup) -> Ring:
        raise NotImplementedError

    def res_level(self, upper, lower, value):
        raise NotImplementedError

    def tr_level(self, upper, lower, value):
        raise NotImplementedError

    def nm_level(self, upper, lower, value):
        raise NotImplementedError

    def conj_level(self, g, sub, value):
        raise NotImplementedError

    # --- ring structure at arbitrary G-sets ---

    def evaluate(self, x: GSet) -> Ring:
        d = orbit_decompose(x)
        return ProductCarrier([self.level(o.stabilizer) for o in d.orbits])

    def element(self, x: GSet, parts) -> Element:
        parts = tuple(parts)
        d = orbit_decompose(x)
        if len(parts) != len(d.orbits):
            raise LevelMismatch(f"expected {len(d.orbits)} orbit components")
        return Element(x, parts)

    def zero(self, x: GSet) -> Element:
        d = orbit_decompose(x)
        return Element(x, tuple(self.level(o.stabilizer).zero() for o in d.orbits))

    def one(self, x: GSet) -> Element:
        d = orbit_decompose(x)
        return Element(x, tuple(self.level(o.stabilizer).one() for o in d.orbits))

    def add(self, a: Element, b: Element) -> Element:
        self._same(a, b)
        return Element(a.gset, self.evaluate(a.gset).add(a.parts, b.parts))

    def mul(self, a: Element, b: Element) -> Element:
        self._same(a, b)
        return Element(a.gset, self.evaluate(a.gset).mul(a.parts, b.parts))

    def neg(self, a: Element) -> Element:
        return Element(a.gset, self.evaluate(a.gset).neg(a.parts))

    def sub(self, a: Element, b: Element) -> Element:
        return self.add(a, self.neg(b))

    def eq(self, a: Element, b: Element) -> bool:
        self._same(a, b)
        return self.evaluate(a.gset).eq(a.parts, b.parts)

    def sample(self, x: GSet, rng) -> Element:
        return Element(x, self.evaluate(x).sample(rng))

    def probe(self, x: GSet, rng, k: int = 2) -> list:
        d = orbit_decompose(x)
        out = [self.zero(x), self.one(x)]
        for _ in range(k):
            out.append(self.sample(x, rng))
        return out

    def _same(self, a, b):
        if a.gset is not b.gset:
            raise LevelMismatch("operands live on different G-sets")

    # --- structure maps along arbitrary maps ---

    def restrict(self, f: GMap, y: Element) -> Element:
        if y.gset is not f.target:
            raise LevelMismatch("restriction expects an element at the target")
        comps, dx, dy = map_components(f)
        parts = []
        for (i, j, g, h, k) in comps:
            gk = k.conjugate(g)
            mid = self.conj_level(g, k, y.parts[j])
            parts.append(self.res_level(gk, h, mid))
        return Element(f.source, tuple(parts))

    def transfer(self, f: GMap, x: Element) -> Element:
        """Additive transfer; vanishes off the image."""
        if x.gset is not f.source:
            raise LevelMismatch("transfer expects an element at the source")
        comps, dx, dy = map_components(f)
        group = self.group
        acc = [self.level(o.stabilizer).zero() for o in dy.orbits]
        for (i, j, g, h, k) in comps:
            gk = k.conjugate(g)
            up = self.tr_level(gk, h, x.parts[i])
            down = self.conj_level(group.inverse[g], gk, up)
            acc[j] = self.level(k).add(acc[j], down)
        return Element(f.target, tuple(acc))

    def norm(self, f: GMap, x: Element) -> Element:
        """Multiplicative transfer; equals one off the image (empty product)."""
        if x.gset is not f.source:
            raise LevelMismatch("norm expects an element at the source")
        comps, dx, dy = map_components(f)
        group = self.group
        acc = [self.level(o.stabilizer).one() for o in dy.orbits]
        for (i, j, g, h, k) in comps:
            gk = k.conjugate(g)
            up = self.nm_level(gk, h, x.parts[i])
            down = self.conj_level(group.inverse[g], gk, up)
            acc[j] = self.level(k).mul(acc[j], down)
        return Element(f.target, tuple(acc))

    # --- semi-Mackey views ---

    def additive_view(self) -> "AdditiveView":
        return AdditiveView(self)

    def multiplicative_view(self) -> "MultiplicativeView":
        return MultiplicativeView(self)


class AdditiveView(SemiMackeyFunctor):
    """The additive semi-Mackey functor of a Tambara functor (group-valued)."""

    def __init__(self, tam: TambaraFunctor):
        self.tam = tam
        self.group = tam.group
        self.name = f"{tam.name}^add"

    def level(self, sub):
        return RingAddMonoid(self.tam.level(sub))

    def res_level(self, upper, lower, value):
        return self.tam.res_level(upper, lower, value)

    def cov_level(self, upper, lower, value):
        return self.tam.tr_level(upper, lower, value)

    def conj_level(self, g, sub, value):
        return self.tam.conj_level(g, sub, value)

    def probe(self, x, rng, k=2):
        return self.tam.probe(x, rng, k)


class MultiplicativeView(SemiMackeyFunctor):
    """The multiplicative semi-Mackey functor of a Tambara functor."""

    def __init__(self, tam: TambaraFunctor):
        self.tam = tam
        self.group = tam.group
        self.name = f"{tam.name}^mul"

    def level(self, sub):
        return RingMulMonoid(self.tam.level(sub))

    def res_level(self, upper, lower, value):
        return self.tam.res_level(upper, lower, value)

    def cov_level(self, upper, lower, value):
        return self.tam.nm_level(upper, lower, value)

    def conj_level(self, g, sub, value):
        return self.tam.conj_level(g, sub, value)

    def probe(self, x, rng, k=2):
        return self.tam.probe(x, rng, k)


# ---------------------------------------------------------------------------
# The diagonal-complement witness


def restriction_witness(tam: TambaraFunctor, f: GMap, s: Element):
    """The pair (a, s_bar) with f^*(s_bar) = a·s, built over the complement
    of the diagonal in X ×_Y X: a is the norm along the first projection of
    the second projection's restriction, and s_bar is the norm of s.

    The identity is verified exactly before returning.
    """
    z, q1, q2 = diagonal_complement(f)
    a = tam.norm(q1, tam.restrict(q2, s))
    sbar = tam.norm(f, s)
    lhs = tam.restrict(f, sbar)
    rhs = tam.mul(a, s)
    if not tam.eq(lhs, rhs):
        raise AssertionError("witness identity f^*(norm s) = a·s failed")
    return a, sbar


# ---------------------------------------------------------------------------
# Distributive-law checking


def enumerate_exponential_inputs(group, *, max_sections: int = 10**4,
                                 max_summands: int = 2):
    """The finite universe of dependent-product inputs used by the axiom
    suite: transitive X and Y, every map f: X → Y, and A a coproduct of at
    most `max_summands` transitive objects over X, filtered by the total
    section count."""
    objs = transitive_gsets(group)
    out = []
    for x in objs:
        overs = _transitive_overs(group, x)
        configs = [()]
        configs += [(o,) for o in overs]
        if max_summands >= 2:
            configs += [
                (overs[i], overs[j])
                for i in range(len(overs))
                for j in range(i, len(overs))
            ]
        for y in objs:
            for f in maps_between(x, y):
                for cfg in configs:
                    pair = _assemble_over(group, x, cfg)
                    if pair is None:
                        continue
                    a, p = pair
                    if _section_total(f, p) > max_sections:
                        continue
                    out.append((f, p))
    return out


def _transitive_overs(group, x):
    """All (W, m: W → X) with W a transitive class representative."""
    overs = []
    for w in transitive_gsets(group):
        for m in maps_between(w, x):
            overs.append((w, m))
    return overs


def _assemble_over(group, x, cfg):
    if not cfg:
        a = empty_gset(group)
        return a, GMap(a, x, [])
    parts = [w for (w, _) in cfg]
    whole, _ = coproduct(parts)
    p = copair([m for (_, m) in cfg], whole)
    return whole, p


def _section_total(f: GMap, p: GMap) -> int:
    total = 0
    for y in range(f.target.size):
        count = 1
        for x in f.fiber(y):
            count *= len(p.fiber(x))
            if count == 0:
                break
        total += count
    return total


def random_exponential_input(group, rng, *, max_sections: int = 10**5,
                             tries: int = 40):
    """A seeded random (f, p) pair, usually larger than the enumerated ones."""
    classes = subgroup_classes(full_subgroup(group)).representatives
    for _ in range(tries):
        x_parts = [transitive(group, rng.choice(classes))
                   for _ in range(rng.randint(1, 2))]
        if len(x_parts) == 1:
            x = x_parts[0]
            include = [None]
        else:
            x, include = coproduct(x_parts)
        y = transitive(group, rng.choice(classes))
        try:
            if len(x_parts) == 1:
                f = rng.choice(maps_between(x, y))
            else:
                legs = []
                for part in x_parts:
                    cands = maps_between(part, y)
                    if not cands:
                        raise IndexError
                    legs.append(rng.choice(cands))
                f = copair(legs, x)
        except IndexError:
            continue
        summands = []
        for _ in range(rng.randint(0, 3)):
            w = transitive(group, rng.choice(classes))
            cands = maps_between(w, x)
            if cands:
                summands.append((w, rng.choice(cands)))
        pair = _assemble_over(group, x, tuple(summands))
        if pair is None:
            continue
        a, p = pair
        if _section_total(f, p) > max_sections:
            continue
        return f, p
    return None


def check_distributive(tam: TambaraFunctor, *, seed: int = 0, samples: int = 2,
                       max_sections: int = 10**4, random_diagrams: int = 0,
                       random_max_sections: int = 2 * 10**4,
                       report_name=None) -> CheckReport:
    """Exact interchange of norm and transfer over dependent products:
    norm(f)∘transfer(p) = transfer(q)∘norm(ρ)∘restrict(λ) on probed inputs."""
    rng = random.Random(seed)
    report = CheckReport(report_name or f"distributive[{tam.name}]")
    inputs = enumerate_exponential_inputs(tam.group, max_sections=max_sections)
    extra = []
    for _ in range(random_diagrams):
        pair = random_exponential_input(tam.group, rng, max_sections=random_max_sections)
        if pair is not None:
            extra.append(pair)
    for n, (f, p) in enumerate(inputs + extra):
        try:
            diag = exponential(f, p, max_sections=max(max_sections, random_max_sections))
        except SectionBlowup:
            continue
        started = perf_counter()
        for a in tam.probe(diag.a, rng, samples):
            lhs = tam.norm(diag.f, tam.transfer(diag.p, a))
            rhs = tam.transfer(diag.q, tam.norm(diag.rho, tam.restrict(diag.lam, a)))
            ok = tam.eq(lhs, rhs)
            report.add(
                f"exp-{n}",
                "norm of a transfer equals the routed transfer of the norm",
                ok,
                witness=None if ok else {
                    "X": f.source.size, "Y": f.target.size, "A": p.source.size,
                    "element": repr(a.parts),
                    "lhs": repr(lhs.parts), "rhs": repr(rhs.parts),
                },
                started=started,
            )
            if not ok:
                return report
    return report


def check_projection_formula(tam: TambaraFunctor, *, seed: int = 0,
                             samples: int = 2) -> CheckReport:
    """transfer(f, x·restrict(f, y)) = transfer(f, x)·y on sampled data."""
    rng = random.Random(seed)
    report = CheckReport(f"projection[{tam.name}]")
    objs = transitive_gsets(tam.group)
    for x in objs:
        for y in objs:
            for f in maps_between(x, y):
                started = perf_counter()
                for a in tam.probe(x, rng, samples):
                    for b in tam.probe(y, rng, samples):
                        lhs = tam.transfer(f, tam.mul(a, tam.restrict(f, b)))
                        rhs = tam.mul(tam.transfer(f, a), b)
                        report.add(
                            "proj",
                            "projection formula",
                            tam.eq(lhs, rhs),
                            started=started,
                        )
    return report


# ---------------------------------------------------------------------------
# Morphisms


@dataclass
class TambaraMorphism:
    source: TambaraFunctor
    target: TambaraFunctor
    level_map: object  # (sub, value) -> value
    name: str = "phi"

    def apply(self, elem: Element) -> Element:
        d = orbit_decompose(elem.gset)
        return Element(
            elem.gset,
            tuple(self.level_map(o.stabilizer, v) for o, v in zip(d.orbits, elem.parts)),
        )

    def compose_with(self, earlier: "TambaraMorphism") -> "TambaraMorphism":
        if earlier.target is not self.source:
            raise LevelMismatch("composition needs matching middle functor")

        def level_map(sub, value):
            return self.level_map(sub, earlier.level_map(sub, value))

        return TambaraMorphism(earlier.source, self.target,
                               level_map, name=f"{self.name}∘{earlier.name}")


def identity_morphism(tam: TambaraFunctor) -> TambaraMorphism:
    return TambaraMorphism(tam, tam, lambda sub, v: v, name="id")


def check_tambara_morphism(phi: TambaraMorphism, *, seed: int = 0, samples: int = 2,
                           eq_target=None, report_name=None) -> CheckReport:
    """Ring-hom levels plus naturality for all three structure-map families
    on transitive maps, and conjugation naturality; exact on probed data."""
    rng = random.Random(seed)
    report = CheckReport(report_name or f"morphism[{phi.name}]")
    src, tgt = phi.source, phi.target
    eq = eq_target or tgt.eq
    objs = transitive_gsets(src.group)
    for x in objs:
        started = perf_counter()
        probes = src.probe(x, rng, samples)
        for a in probes:
            for b in probes:
                report.add("hom-add", "level maps preserve addition",
                           eq(phi.apply(src.add(a, b)), tgt.add(phi.apply(a), phi.apply(b))),
                           started=started)
                report.add("hom-mul", "level maps preserve multiplication",
                           eq(phi.apply(src.mul(a, b)), tgt.mul(phi.apply(a), phi.apply(b))),
                           started=started)
        report.add("hom-one", "level maps preserve one",
                   eq(phi.apply(src.one(x)), tgt.one(x)), started=started)
        report.add("hom-zero", "level maps preserve zero",
                   eq(phi.apply(src.zero(x)), tgt.zero(x)), started=started)
    for x in objs:
        for y in objs:
            for f in maps_between(x, y):
                started = perf_counter()
                for a in src.probe(x, rng, samples):
                    report.add("nat-tr", "naturality of additive transfer",
                               eq(phi.apply(src.transfer(f, a)), tgt.transfer(f, phi.apply(a))),
                               started=started)
                    report.add("nat-nm", "naturality of multiplicative transfer",
                               eq(phi.apply(src.norm(f, a)), tgt.norm(f, phi.apply(a))),
                               started=started)
                for b in src.probe(y, rng, samples):
                    report.add("nat-res", "naturality of restriction",
                               eq(phi.apply(src.restrict(f, b)), tgt.restrict(f, phi.apply(b))),
                               started=started)
    # conjugation naturality at the level data
    classes = subgroup_classes(full_subgroup(src.group)).representatives
    for sub in classes:
        carrier = src.level(sub)
        for g in range(src.group.order):
            started = perf_counter()
            tsub = sub.conjugate(g)
            for _ in range(samples):
                v = carrier.sample(rng)
                lhs = phi.level_map(tsub, src.conj_level(g, sub, v))
                rhs = tgt.conj_level(g, sub, phi.level_map(sub, v))
                report.add("nat-conj", "naturality of conjugation",
                           tgt.level(tsub).eq(lhs, rhs), started=started)
    return report
