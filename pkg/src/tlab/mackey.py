"""Semi-Mackey functors presented levelwise, and everything built on them:
structure maps along arbitrary equivariant maps, subfunctors, saturation,
the minimal/maximal subfunctors with a prescribed free-orbit level, monoid
fractions, and the group-completion / unit-group lifts.

A functor stores one carrier per subgroup together with restriction,
covariant and conjugation data between levels; evaluation at an arbitrary
G-set is the orbit-wise product, and a structure map along any equivariant
map decomposes into conjugation-of-projection components per orbit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from time import perf_counter

from .carriers import (
    GroupCompletionMonoid,
    Monoid,
    ProductMonoid,
    UnitGroupMonoid,
)
from .errors import (
    LevelMismatch,
    NotInvariant,
    NotSaturated,
    UndecidedEquality,
)
from .groups import (
    Subgroup,
    coset_reps,
    full_subgroup,
    subgroup_classes,
    trivial_subgroup,
)
from .gsets import (
    GMap,
    GSet,
    diagonal_complement,
    from_free,
    one_point,
    orbit_decompose,
    pullback,
    to_point,
    transitive,
)


@dataclass(frozen=True)
class Element:
    """A functor value at a G-set: one raw carrier value per orbit."""

    gset: GSet
    parts: tuple

    def __repr__(self):
        return f"Element{self.parts}"


class TriState(enum.Enum):
    EQUAL = "equal"
    NOT_EQUAL = "not-equal"
    UNKNOWN = "unknown"


class MemberStatus(enum.Enum):
    MEMBER = "member"
    NOT_MEMBER = "not-member"
    UNKNOWN = "unknown"


@dataclass
class Membership:
    status: MemberStatus
    witness: object = None
    reason: str = ""

    def __bool__(self):
        return self.status is MemberStatus.MEMBER


MEMBER = MemberStatus.MEMBER
NOT_MEMBER = MemberStatus.NOT_MEMBER
UNKNOWN = MemberStatus.UNKNOWN


# ---------------------------------------------------------------------------
# Check reports (shared by every verification suite)


@dataclass
class CheckRecord:
    check_id: str
    law: str
    status: str  # "pass" | "fail" | "undecided"
    witness: object = None
    ms: float = 0.0


@dataclass
class CheckReport:
    name: str
    records: list = field(default_factory=list)

    def add(self, check_id, law, ok, witness=None, started=None, undecided=False):
        ms = (perf_counter() - started) * 1000.0 if started else 0.0
        status = "undecided" if undecided else ("pass" if ok else "fail")
        self.records.append(CheckRecord(check_id, law, status, witness, ms))

    @property
    def failures(self):
        return [r for r in self.records if r.status == "fail"]

    @property
    def undecided(self):
        return [r for r in self.records if r.status == "undecided"]

    @property
    def ok(self):
        return not self.failures and not self.undecided

    def summary(self) -> str:
        n = len(self.records)
        return f"{self.name}: {n - len(self.failures) - len(self.undecided)}/{n} pass"


# ---------------------------------------------------------------------------
# The levelwise engine


def map_components(f: GMap):
    """Per-orbit decomposition of f into conjugated projections.

    For each source orbit i mapping into target orbit j, returns
    (i, j, g, H, K) where H stabilizes the source base, K the target base,
    and g carries the target base to the image of the source base, so that
    the component is the projection G/H → G/gKg^-1 followed by the
    translation isomorphism G/gKg^-1 → G/K.
    """
    dx = orbit_decompose(f.source)
    dy = orbit_decompose(f.target)
    comps = []
    for i, ox in enumerate(dx.orbits):
        img = f.mapping[ox.base]
        j = dy.orbit_of[img]
        oy = dy.orbits[j]
        g = oy.transversal[img]
        comps.append((i, j, g, ox.stabilizer, oy.stabilizer))
    return comps, dx, dy


class SemiMackeyFunctor:
    """Monoid-valued levelwise presentation; subclasses provide level data."""

    group = None
    name = "M"

    # --- level data (to implement) ---

    def level(self, sub: Subgroup) -> Monoid:
        raise NotImplementedError

    def res_level(self, upper: Subgroup, lower: Subgroup, value):
        """Contravariant map along G/lower → G/upper (lower ≤ upper)."""
        raise NotImplementedError

    def cov_level(self, upper: Subgroup, lower: Subgroup, value):
        """Covariant map along G/lower → G/upper (lower ≤ upper)."""
        raise NotImplementedError

    def conj_level(self, g: int, sub: Subgroup, value):
        """Translation isomorphism value: level sub → level g·sub·g^-1."""
        raise NotImplementedError

    # --- derived evaluation ---

    def evaluate(self, x: GSet) -> Monoid:
        d = orbit_decompose(x)
        return ProductMonoid([self.level(o.stabilizer) for o in d.orbits])

    def element(self, x: GSet, parts) -> Element:
        parts = tuple(parts)
        d = orbit_decompose(x)
        if len(parts) != len(d.orbits):
            raise LevelMismatch(f"expected {len(d.orbits)} orbit components")
        return Element(x, parts)

    def unit(self, x: GSet) -> Element:
        d = orbit_decompose(x)
        return Element(x, tuple(self.level(o.stabilizer).unit() for o in d.orbits))

    def op(self, a: Element, b: Element) -> Element:
        if a.gset is not b.gset:
            raise LevelMismatch("operands live on different G-sets")
        return Element(a.gset, self.evaluate(a.gset).op(a.parts, b.parts))

    def eq(self, a: Element, b: Element) -> bool:
        if a.gset is not b.gset:
            raise LevelMismatch("cannot compare across G-sets")
        return self.evaluate(a.gset).eq(a.parts, b.parts)

    def sample(self, x: GSet, rng) -> Element:
        return Element(x, self.evaluate(x).sample(rng))

    def probe(self, x: GSet, rng, k: int = 2) -> list:
        """Unit plus k samples; deterministic given the rng state."""
        out = [self.unit(x)]
        for _ in range(k):
            out.append(self.sample(x, rng))
        return out

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

    def cov(self, f: GMap, x: Element) -> Element:
        if x.gset is not f.source:
            raise LevelMismatch("covariant map expects an element at the source")
        comps, dx, dy = map_components(f)
        group = self.group
        acc = [self.level(o.stabilizer).unit() for o in dy.orbits]
        for (i, j, g, h, k) in comps:
            gk = k.conjugate(g)
            up = self.cov_level(gk, h, x.parts[i])
            down = self.conj_level(group.inverse[g], gk, up)
            acc[j] = self.level(k).op(acc[j], down)
        return Element(f.target, tuple(acc))


def evaluate(functor, x: GSet):
    """Carrier of the functor at an arbitrary G-set (orbit-wise product)."""
    return functor.evaluate(x)


def structure_map(functor, kind: str, f: GMap, x: Element) -> Element:
    """Dispatch a named structure map along f ("restrict" or "transfer")."""
    if kind == "restrict":
        return functor.restrict(f, x)
    if kind == "transfer":
        return functor.cov(f, x)
    raise LevelMismatch(f"unknown structure map kind {kind!r}")


# ---------------------------------------------------------------------------
# Concrete semi-Mackey functor: fixed points of a G-monoid


class GMonoid:
    """A monoid carrier with a G-action by monoid automorphisms."""

    def __init__(self, group, monoid: Monoid, act=None, name=None):
        self.group = group
        self.monoid = monoid
        self._act = act or (lambda g, v: v)
        self.name = name or f"{monoid.name}^G"

    def act(self, g, v):
        return self._act(g, v)

    def fixed_sample(self, sub: Subgroup, rng):
        for _ in range(64):
            v = self.monoid.sample(rng)
            if all(self.monoid.eq(self.act(h, v), v) for h in sub.members):
                return v
        return self.monoid.unit()


class FixedPointSemiMackey(SemiMackeyFunctor):
    """Levels are fixed submonoids of a G-monoid; covariance multiplies over
    cosets, restriction is inclusion, conjugation is the action."""

    def __init__(self, group, gmonoid: GMonoid):
        self.group = group
        self.gm = gmonoid
        self.name = f"P[{gmonoid.name}]"

    def level(self, sub):
        return self.gm.monoid

    def res_level(self, upper, lower, value):
        return value

    def cov_level(self, upper, lower, value):
        out = self.gm.monoid.unit()
        for rep in coset_reps(upper, lower):
            out = self.gm.monoid.op(out, self.gm.act(rep, value))
        return out

    def conj_level(self, g, sub, value):
        return self.gm.act(g, value)

    def sample(self, x, rng):
        d = orbit_decompose(x)
        return Element(x, tuple(self.gm.fixed_sample(o.stabilizer, rng) for o in d.orbits))


# ---------------------------------------------------------------------------
# Pullback-square checking


def transitive_gsets(group, max_points=None):
    classes = subgroup_classes(full_subgroup(group))
    out = []
    for rep in classes.representatives:
        x = transitive(group, rep)
        if max_points is None or x.size <= max_points:
            out.append(x)
    return out


def maps_between(x: GSet, y: GSet) -> list[GMap]:
    """All equivariant maps from a transitive X into Y."""
    d = orbit_decompose(x)
    if len(d.orbits) != 1:
        raise LevelMismatch("map enumeration expects a transitive source")
    base_stab = d.orbits[0].stabilizer
    orb = d.orbits[0]
    out = []
    for target_pt in range(y.size):
        if all(y.action[h][target_pt] == target_pt for h in base_stab.members):
            mapping = [0] * x.size
            for pt in orb.points:
                mapping[pt] = y.action[orb.transversal[pt]][target_pt]
            out.append(GMap(x, y, mapping))
    return out


def enumerate_squares(group, max_total_points: int = 24):
    """Cospans (f: X→W, η: Y→W) of transitive objects, |X|+|Y|+|W| bounded."""
    objs = transitive_gsets(group)
    squares = []
    for w in objs:
        for x in objs:
            if x.size + w.size > max_total_points:
                continue
            for y in objs:
                if x.size + y.size + w.size > max_total_points:
                    continue
                for f in maps_between(x, w):
                    for eta in maps_between(y, w):
                        squares.append((f, eta))
    return squares


def check_mackey(functor, *, seed: int = 0, samples: int = 2,
                 max_total_points: int = 24, report_name=None) -> CheckReport:
    """Exact commutation of both composites around generated pullback squares.

    For each cospan (f: X→W, η: Y→W) the square is the pullback P with
    projections ξ: P→X and f′: P→Y, and the law is
    restrict(f)∘cov(η) = cov(ξ)∘restrict(f′) on probed elements of the
    η-source level.
    """
    import random

    rng = random.Random(seed)
    report = CheckReport(report_name or f"mackey[{functor.name}]")
    for n, (f, eta) in enumerate(enumerate_squares(functor.group, max_total_points)):
        p, xi, fprime = pullback(f, eta)
        started = perf_counter()
        for y in functor.probe(eta.source, rng, samples):
            lhs = functor.restrict(f, functor.cov(eta, y))
            rhs = functor.cov(xi, functor.restrict(fprime, y))
            ok = functor.eq(lhs, rhs)
            report.add(
                f"square-{n}",
                "pullback square commutation",
                ok,
                witness=None if ok else {
                    "X": f.source.size, "Y": eta.source.size, "W": f.target.size,
                    "element": repr(y.parts), "lhs": repr(lhs.parts), "rhs": repr(rhs.parts),
                },
                started=started,
            )
            if not ok:
                return report
    return report


# ---------------------------------------------------------------------------
# Subfunctors of the multiplicative structure


class SubMonoidFunctor:
    """Intensional multiplicative subfunctor: membership + generators."""

    parent = None
    name = "S"

    def contains_level(self, sub: Subgroup, value) -> Membership:
        raise NotImplementedError

    def level_generators(self, sub: Subgroup) -> tuple:
        return (self.parent.level(sub).unit(),)

    def sample_level(self, sub: Subgroup, rng):
        gens = self.level_generators(sub)
        carrier = self.parent.level(sub)
        out = carrier.unit()
        for _ in range(rng.randint(0, 2)):
            out = carrier.op(out, rng.choice(gens))
        return out

    # --- derived, orbit-wise ---

    def contains(self, elem: Element) -> Membership:
        d = orbit_decompose(elem.gset)
        witnesses = []
        status = MEMBER
        for orbit, value in zip(d.orbits, elem.parts):
            m = self.contains_level(orbit.stabilizer, value)
            if m.status is NOT_MEMBER:
                return Membership(NOT_MEMBER, reason=m.reason or "component rejected")
            if m.status is UNKNOWN:
                status = UNKNOWN
            witnesses.append(m.witness)
        return Membership(status, witness=witnesses)

    def sample(self, x: GSet, rng) -> Element:
        d = orbit_decompose(x)
        return Element(x, tuple(self.sample_level(o.stabilizer, rng) for o in d.orbits))

    def generators(self, x: GSet) -> list[Element]:
        d = orbit_decompose(x)
        units = [self.parent.level(o.stabilizer).unit() for o in d.orbits]
        out = []
        for i, orbit in enumerate(d.orbits):
            for gen in self.level_generators(orbit.stabilizer):
                parts = list(units)
                parts[i] = gen
                out.append(Element(x, tuple(parts)))
        return out or [Element(x, tuple(units))]


class FullSubfunctor(SubMonoidFunctor):
    def __init__(self, parent):
        self.parent = parent
        self.name = f"all[{parent.name}]"

    def contains_level(self, sub, value):
        return Membership(MEMBER)

    def sample_level(self, sub, rng):
        return self.parent.level(sub).sample(rng)


class UnitsSubfunctor(SubMonoidFunctor):
    """Invertible elements; membership is complete for the shipped carriers."""

    def __init__(self, parent):
        self.parent = parent
        self.name = f"units[{parent.name}]"

    def contains_level(self, sub, value):
        inv = self.parent.level(sub).invert(value)
        if inv is None:
            return Membership(NOT_MEMBER, reason="no inverse")
        return Membership(MEMBER, witness=inv)

    def sample_level(self, sub, rng):
        carrier = self.parent.level(sub)
        for _ in range(64):
            v = carrier.sample(rng)
            if carrier.invert(v) is not None:
                return v
        return carrier.unit()


class LevelPredicateSubfunctor(SubMonoidFunctor):
    """Explicit per-level predicate; used for custom and corrupted families."""

    def __init__(self, parent, predicate, generators=None, sampler=None, name="custom"):
        self.parent = parent
        self._pred = predicate  # (sub, value) -> bool
        self._gens = generators or (lambda sub: (parent.level(sub).unit(),))
        self._sampler = sampler
        self.name = name

    def contains_level(self, sub, value):
        return Membership(MEMBER) if self._pred(sub, value) else Membership(
            NOT_MEMBER, reason="predicate rejected"
        )

    def level_generators(self, sub):
        return tuple(self._gens(sub))

    def sample_level(self, sub, rng):
        if self._sampler:
            return self._sampler(sub, rng)
        return super().sample_level(sub, rng)


# --- seeds at the free-orbit level -----------------------------------------


@dataclass
class Seed:
    """A submonoid of the free-orbit level, given intensionally."""

    contains: object  # value -> bool
    generators: tuple
    sample: object  # rng -> value
    name: str = "S"


def validate_seed(functor: SemiMackeyFunctor, seed: Seed, rng, checks: int = 40):
    """Spot-check G-invariance and saturation of a seed on samples.

    Full validation is impossible for infinite seeds; generators plus
    sampled elements are checked, and failures raise eagerly.
    """
    group = functor.group
    triv = trivial_subgroup(group)
    carrier = functor.level(triv)
    for gen in seed.generators:
        if not seed.contains(gen):
            raise NotSaturated(f"declared generator {gen!r} fails membership")
    members = list(seed.generators)
    for _ in range(checks):
        members.append(seed.sample(rng))
    for s in members:
        for g in range(group.order):
            if not seed.contains(functor.conj_level(g, triv, s)):
                raise NotInvariant(f"conjugate of {s!r} by {g} left the seed")
    for _ in range(checks):
        a = carrier.sample(rng)
        x = carrier.sample(rng)
        if seed.contains(carrier.op(a, x)) and not seed.contains(x):
            raise NotSaturated(f"{x!r} divides a member but is not a member")


class MinimalSubfunctor(SubMonoidFunctor):
    """The smallest subfunctor whose free-orbit level contains the seed:
    each transitive level is the covariant image of the seed."""

    def __init__(self, functor: SemiMackeyFunctor, seed: Seed, rng=None, search_bound: int = 5):
        import random

        self.parent = functor
        self.seed = seed
        self.search_bound = search_bound
        self.name = f"min[{seed.name}]"
        rng = rng or random.Random(7)
        validate_seed(functor, seed, rng)
        self._check_cover_independence()

    def _image(self, sub: Subgroup, value, point: int = 0):
        free = from_free(transitive(self.parent.group, sub), point)
        elem = Element(free.source, (value,))
        return self.parent.cov(free, elem).parts[0]

    def _check_cover_independence(self):
        # the level does not depend on which free-orbit map is used
        for sub in subgroup_classes(full_subgroup(self.parent.group)).representatives:
            x = transitive(self.parent.group, sub)
            if x.size < 2:
                continue
            for gen in self.seed.generators:
                a = self._image(sub, gen, point=0)
                b = self._image(sub, gen, point=1)
                carrier = self.parent.level(sub)
                # images differ by a conjugation that fixes the seed's orbit,
                # so the generated level is the same; witness on generators
                if not any(
                    carrier.eq(b, self._image(sub, g2, point=0))
                    for g2 in self._alt_gens(gen)
                ):
                    raise NotInvariant("covariant image depends on the free cover")

    def _alt_gens(self, gen):
        group = self.parent.group
        triv = trivial_subgroup(group)
        return [self.parent.conj_level(g, triv, gen) for g in range(group.order)]

    def contains_level(self, sub, value):
        if sub.order == 1:
            ok = self.seed.contains(value)
            return Membership(MEMBER if ok else NOT_MEMBER,
                              reason="" if ok else "seed predicate rejected")
        carrier = self.parent.level(sub)
        for cand, provenance in self._bounded_products():
            img = self._image(sub, cand)
            if carrier.eq(img, value):
                return Membership(MEMBER, witness={"seed_value": cand, "from": provenance})
        return Membership(UNKNOWN, reason="no bounded covariant preimage found")

    def _bounded_products(self):
        carrier = self.parent.level(trivial_subgroup(self.parent.group))
        seen = [(carrier.unit(), "unit")]
        frontier = [(carrier.unit(), "unit")]
        for _ in range(self.search_bound):
            nxt = []
            for val, prov in frontier:
                for g in self.seed.generators:
                    cand = carrier.op(val, g)
                    if all(not carrier.eq(cand, v) for v, _ in seen):
                        entry = (cand, f"{prov}*{g!r}")
                        seen.append(entry)
                        nxt.append(entry)
            frontier = nxt
        return seen

    def level_generators(self, sub):
        return tuple(self._image(sub, gen) for gen in self.seed.generators)

    def sample_level(self, sub, rng):
        return self._image(sub, self.seed.sample(rng))


class MaximalSubfunctor(SubMonoidFunctor):
    """The largest subfunctor whose free-orbit level sits inside the seed.

    Membership at a transitive level is decided exactly: x belongs iff the
    free-orbit restriction of its full covariant image lies in the seed.
    Necessity follows from the seed being saturated and G-invariant;
    sufficiency is witnessed by an explicit pair (a, t0) with
    a·x = restriction of t0, verified at runtime.
    """

    def __init__(self, functor: SemiMackeyFunctor, seed: Seed, rng=None):
        import random

        self.parent = functor
        self.seed = seed
        self.name = f"max[{seed.name}]"
        self._cache = {}
        validate_seed(functor, seed, rng or random.Random(11))

    def contains_level(self, sub, value):
        key = (sub, value) if _hashable(value) else None
        if key is not None and key in self._cache:
            return self._cache[key]
        result = self._decide(sub, value)
        if key is not None:
            self._cache[key] = result
        return result

    def _decide(self, sub, value):
        functor = self.parent
        group = functor.group
        x = transitive(group, sub)
        elem = Element(x, (value,))
        pt = to_point(x)
        t0 = functor.cov(pt, elem)  # at G/G
        free_cover = from_free(one_point(group))
        r = functor.restrict(free_cover, t0).parts[0]
        if not self.seed.contains(r):
            return Membership(
                NOT_MEMBER,
                reason="free-orbit restriction of the covariant image left the seed",
            )
        # witness (a, t0): a·x equals the pullback of t0 along the collapse map
        z, q1, q2 = diagonal_complement(pt)
        a = functor.cov(q1, functor.restrict(q2, elem))
        lhs = functor.op(a, elem)
        rhs = functor.restrict(pt, t0)
        if not functor.eq(lhs, rhs):
            raise AssertionError("internal witness identity a·x = collapse^*(t0) failed")
        return Membership(MEMBER, witness={"a": a, "t0": t0, "restriction": r})

    def level_generators(self, sub):
        functor = self.parent
        group = functor.group
        triv = trivial_subgroup(group)
        gens = []
        for s in self.seed.generators:
            t0 = functor.cov_level(full_subgroup(group), triv, s)
            img = functor.restrict(
                to_point(transitive(group, sub)),
                Element(one_point(group), (t0,)),
            )
            gens.append(img.parts[0])
        return tuple(gens)

    def sample_level(self, sub, rng):
        carrier = self.parent.level(sub)
        gens = self.level_generators(sub)
        out = carrier.unit()
        for _ in range(rng.randint(0, 2)):
            out = carrier.op(out, rng.choice(gens))
        return out


def _hashable(value) -> bool:
    try:
        hash(value)
        return True
    except TypeError:
        return False


def minimal_subfunctor(functor, seed: Seed, rng=None) -> MinimalSubfunctor:
    return MinimalSubfunctor(functor, seed, rng=rng)


def maximal_subfunctor(functor, seed: Seed, rng=None) -> MaximalSubfunctor:
    return MaximalSubfunctor(functor, seed, rng=rng)


def saturate_membership(sub: SubMonoidFunctor, x: GSet, elem: Element,
                        bound: int = 6) -> Membership:
    """Search for (a, s) with a·elem = s and s in the subfunctor at x.

    Tries membership of elem itself, then a carrier-specific division
    against bounded products of subfunctor generators.  Returns UNKNOWN
    when the bound is exhausted without a decision.
    """
    functor = sub.parent
    direct = sub.contains(elem)
    if direct.status is MEMBER:
        return Membership(MEMBER, witness={"a": functor.unit(x), "s": elem})
    d = orbit_decompose(x)
    # integral-domain special case: zero divides only zero
    not_member = _zero_in_domain_excluded(sub, d, elem)
    if not_member is not None:
        return not_member
    gens = sub.generators(x)
    candidates = [functor.unit(x)] + gens
    frontier = list(candidates)
    for _ in range(bound - 1):
        nxt = []
        for c in frontier:
            for g in gens:
                cand = functor.op(c, g)
                if all(not functor.eq(cand, known) for known in candidates):
                    candidates.append(cand)
                    nxt.append(cand)
        frontier = nxt
        if not frontier:
            break
    for s in candidates:
        if sub.contains(s).status is not MEMBER:
            continue
        parts = []
        okay = True
        for orbit, sv, xv in zip(d.orbits, s.parts, elem.parts):
            try:
                a = functor.level(orbit.stabilizer).try_divide(sv, xv)
            except Exception:
                a = None
            if a is None:
                okay = False
                break
            parts.append(a)
        if okay:
            witness_a = Element(x, tuple(parts))
            if functor.eq(functor.op(witness_a, elem), s):
                return Membership(MEMBER, witness={"a": witness_a, "s": s})
    return Membership(UNKNOWN, reason=f"no witness within degree {bound}")


def seed_saturation(functor: SemiMackeyFunctor, seed: Seed, bound: int = 4) -> Seed:
    """The saturation of a seed: divisors of members are members.

    Membership is the seed test plus a bounded divisor search against
    products of the seed generators, so it under-approximates in general
    and is exact for seeds that are already saturated.
    """
    carrier = functor.level(trivial_subgroup(functor.group))
    products = [carrier.unit()]
    frontier = [carrier.unit()]
    for _ in range(bound):
        nxt = []
        for v in frontier:
            for g in seed.generators:
                cand = carrier.op(v, g)
                if all(not carrier.eq(cand, w) for w in products):
                    products.append(cand)
                    nxt.append(cand)
        frontier = nxt

    def contains(v):
        if seed.contains(v):
            return True
        for s in products:
            if not seed.contains(s):
                continue
            try:
                a = carrier.try_divide(s, v)
            except Exception:
                a = None
            if a is not None and carrier.eq(carrier.op(a, v), s):
                return True
        return False

    return Seed(contains=contains, generators=seed.generators,
                sample=seed.sample, name=f"~{seed.name}")


def _zero_in_domain_excluded(sub, decomp, elem):
    """NOT_MEMBER when some component is zero in a domain whose zero the
    subfunctor rejects: a·0 = 0 can never reach a member."""
    from .carriers import RingMulMonoid

    functor = sub.parent
    for orbit, value in zip(decomp.orbits, elem.parts):
        carrier = functor.level(orbit.stabilizer)
        ring = getattr(carrier, "ring", None)
        if isinstance(carrier, RingMulMonoid) and ring is not None and ring.is_domain:
            if ring.is_zero(value):
                zero_member = sub.contains_level(orbit.stabilizer, ring.zero())
                if zero_member.status is NOT_MEMBER:
                    return Membership(
                        NOT_MEMBER, reason="zero component in a domain level"
                    )
    return None


def is_subfunctor(sub: SubMonoidFunctor, *, max_points: int = 24,
                  report_name=None) -> CheckReport:
    """Closure of the level family under both structure-map directions,
    checked exactly on generators over all transitive-to-transitive maps."""
    functor = sub.parent
    report = CheckReport(report_name or f"subfunctor[{sub.name}]")
    objs = transitive_gsets(functor.group, max_points)
    for x in objs:
        hx = orbit_decompose(x).orbits[0].stabilizer
        for y in objs:
            hy = orbit_decompose(y).orbits[0].stabilizer
            for n, f in enumerate(maps_between(x, y)):
                started = perf_counter()
                for gen in sub.level_generators(hx):
                    img = functor.cov(f, Element(x, (gen,)))
                    m = sub.contains_level(hy, img.parts[0])
                    report.add(
                        f"cov-{x.size}-{y.size}-{n}",
                        "covariant image of a generator stays in the family",
                        m.status is MEMBER,
                        witness=None if m else {"gen": repr(gen), "reason": m.reason},
                        started=started,
                        undecided=m.status is UNKNOWN,
                    )
                for gen in sub.level_generators(hy):
                    img = functor.restrict(f, Element(y, (gen,)))
                    m = sub.contains_level(hx, img.parts[0])
                    report.add(
                        f"res-{x.size}-{y.size}-{n}",
                        "restriction of a generator stays in the family",
                        m.status is MEMBER,
                        witness=None if m else {"gen": repr(gen), "reason": m.reason},
                        started=started,
                        undecided=m.status is UNKNOWN,
                    )
    return report


# ---------------------------------------------------------------------------
# Fractions of semi-Mackey functors


@dataclass(frozen=True)
class FracValue:
    num: object
    den: object


class FractionMonoidCarrier(Monoid):
    """Level monoid of pairs x/s with existential-witness equality."""

    def __init__(self, base: Monoid, sub_level, name="frac"):
        self.base = base
        self.sub_level = sub_level  # (contains, generators, sample)
        self.name = name

    def op(self, a: FracValue, b: FracValue) -> FracValue:
        return FracValue(self.base.op(a.num, b.num), self.base.op(a.den, b.den))

    def unit(self):
        u = self.base.unit()
        return FracValue(u, u)

    def eq3(self, a: FracValue, b: FracValue) -> TriState:
        cross1 = self.base.op(a.num, b.den)
        cross2 = self.base.op(b.num, a.den)
        if self.base.eq(cross1, cross2):
            return TriState.EQUAL
        if self.base.is_cancellative:
            return TriState.NOT_EQUAL
        contains, gens, _ = self.sub_level
        # bounded witness search over denominator generator products
        seen = [self.base.unit()]
        frontier = [self.base.unit()]
        for _ in range(6):
            nxt = []
            for t in frontier:
                for g in gens:
                    cand = self.base.op(t, g)
                    if all(not self.base.eq(cand, v) for v in seen):
                        seen.append(cand)
                        nxt.append(cand)
            frontier = nxt
        for t in seen:
            if self.base.eq(self.base.op(t, cross1), self.base.op(t, cross2)):
                return TriState.EQUAL
        return TriState.UNKNOWN

    def eq(self, a, b) -> bool:
        verdict = self.eq3(a, b)
        if verdict is TriState.UNKNOWN:
            raise UndecidedEquality("fraction comparison exhausted its strategies")
        return verdict is TriState.EQUAL

    def sample(self, rng):
        _, _, sampler = self.sub_level
        return FracValue(self.base.sample(rng), sampler(rng))

    def invert(self, a: FracValue):
        contains, _, _ = self.sub_level
        if contains(a.num).status is MEMBER:
            return FracValue(a.den, a.num)
        return None


class FractionSemiMackey(SemiMackeyFunctor):
    """The fraction functor: componentwise structure maps on pairs."""

    def __init__(self, base: SemiMackeyFunctor, sub: SubMonoidFunctor):
        self.base = base
        self.denoms = sub
        self.group = base.group
        self.name = f"{sub.name}^-1 {base.name}"

    def level(self, h):
        return FractionMonoidCarrier(
            self.base.level(h),
            (
                lambda v, h=h: self.denoms.contains_level(h, v),
                self.denoms.level_generators(h),
                lambda rng, h=h: self.denoms.sample_level(h, rng),
            ),
            name=f"frac[{self.base.level(h).name}]",
        )

    def res_level(self, upper, lower, value):
        return FracValue(
            self.base.res_level(upper, lower, value.num),
            self.base.res_level(upper, lower, value.den),
        )

    def cov_level(self, upper, lower, value):
        return FracValue(
            self.base.cov_level(upper, lower, value.num),
            self.base.cov_level(upper, lower, value.den),
        )

    def conj_level(self, g, sub, value):
        return FracValue(
            self.base.conj_level(g, sub, value.num),
            self.base.conj_level(g, sub, value.den),
        )

    def localization_map(self, elem: Element) -> Element:
        """The canonical map x ↦ x/1 from the base functor."""
        d = orbit_decompose(elem.gset)
        parts = tuple(
            FracValue(v, self.base.level(o.stabilizer).unit())
            for o, v in zip(d.orbits, elem.parts)
        )
        return Element(elem.gset, parts)

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

    def eq(self, a, b):
        verdict = self.eq3(a, b)
        if verdict is TriState.UNKNOWN:
            raise UndecidedEquality("fraction comparison exhausted its strategies")
        return verdict is TriState.EQUAL


def fraction_semi(base: SemiMackeyFunctor, sub: SubMonoidFunctor) -> FractionSemiMackey:
    return FractionSemiMackey(base, sub)


# ---------------------------------------------------------------------------
# Morphisms of semi-Mackey functors


@dataclass
class SemiMackeyMorphism:
    source: SemiMackeyFunctor
    target: SemiMackeyFunctor
    level_map: object  # (sub, value) -> value
    name: str = "theta"

    def apply(self, elem: Element) -> Element:
        d = orbit_decompose(elem.gset)
        return Element(
            elem.gset,
            tuple(self.level_map(o.stabilizer, v) for o, v in zip(d.orbits, elem.parts)),
        )


def check_semi_morphism(phi: SemiMackeyMorphism, *, seed=0, samples=2,
                        max_points: int = 24) -> CheckReport:
    """Monoid-hom + naturality (both variances) on transitive maps."""
    import random

    rng = random.Random(seed)
    report = CheckReport(f"morphism[{phi.name}]")
    objs = transitive_gsets(phi.source.group, max_points)
    for x in objs:
        started = perf_counter()
        probes = phi.source.probe(x, rng, samples)
        for a in probes:
            for b in probes:
                lhs = phi.apply(phi.source.op(a, b))
                rhs = phi.target.op(phi.apply(a), phi.apply(b))
                report.add("hom", "level maps are monoid maps",
                           phi.target.eq(lhs, rhs), started=started)
        lhs = phi.apply(phi.source.unit(x))
        report.add("hom-unit", "level maps preserve the unit",
                   phi.target.eq(lhs, phi.target.unit(x)), started=started)
    for x in objs:
        for y in objs:
            for f in maps_between(x, y):
                started = perf_counter()
                for a in phi.source.probe(x, rng, samples):
                    lhs = phi.apply(phi.source.cov(f, a))
                    rhs = phi.target.cov(f, phi.apply(a))
                    report.add("nat-cov", "naturality of the covariant part",
                               phi.target.eq(lhs, rhs), started=started)
                for b in phi.source.probe(y, rng, samples):
                    lhs = phi.apply(phi.source.restrict(f, b))
                    rhs = phi.target.restrict(f, phi.apply(b))
                    report.add("nat-res", "naturality of the contravariant part",
                               phi.target.eq(lhs, rhs), started=started)
    return report


def factor_through_fraction_semi(frac: FractionSemiMackey, phi: SemiMackeyMorphism) -> SemiMackeyMorphism:
    """Factor a morphism sending denominators to units through the fraction."""
    target = phi.target

    def level_map(sub, value: FracValue):
        num = phi.level_map(sub, value.num)
        den = phi.level_map(sub, value.den)
        inv = target.level(sub).invert(den)
        if inv is None:
            from .errors import NotInvertibleImage

            raise NotInvertibleImage(f"denominator image {den!r} is not a unit")
        return target.level(sub).op(num, inv)

    return SemiMackeyMorphism(frac, target, level_map, name=f"{phi.name}~")


class SemiImageSubfunctor(SubMonoidFunctor):
    """theta(S) inside the target of a semi-Mackey morphism; membership by
    bounded products of image generators (tri-state in general)."""

    def __init__(self, theta: SemiMackeyMorphism, inner: SubMonoidFunctor,
                 search_bound: int = 5):
        self.theta = theta
        self.inner = inner
        self.parent = theta.target
        self.search_bound = search_bound
        self.name = f"{theta.name}({inner.name})"

    def level_generators(self, sub):
        return tuple(
            self.theta.level_map(sub, g) for g in self.inner.level_generators(sub)
        )

    def sample_level(self, sub, rng):
        return self.theta.level_map(sub, self.inner.sample_level(sub, rng))

    def contains_level(self, sub, value):
        carrier = self.parent.level(sub)
        seen = [carrier.unit()]
        frontier = [carrier.unit()]
        if carrier.eq(value, carrier.unit()):
            return Membership(MEMBER, witness="unit")
        gens = self.level_generators(sub)
        for _ in range(self.search_bound):
            nxt = []
            for t in frontier:
                for g in gens:
                    cand = carrier.op(t, g)
                    if all(not carrier.eq(cand, v) for v in seen):
                        seen.append(cand)
                        nxt.append(cand)
                        if carrier.eq(value, cand):
                            return Membership(MEMBER, witness="generator product")
            frontier = nxt
        return Membership(UNKNOWN, reason="no bounded generator-product preimage")


class SemiPreimageSubfunctor(SubMonoidFunctor):
    """theta^-1(S'): the predicate pullback; complete whenever S' is."""

    def __init__(self, theta: SemiMackeyMorphism, outer: SubMonoidFunctor):
        self.theta = theta
        self.outer = outer
        self.parent = theta.source
        self.name = f"{theta.name}^-1({outer.name})"

    def contains_level(self, sub, value):
        return self.outer.contains_level(sub, self.theta.level_map(sub, value))

    def level_generators(self, sub):
        return (self.parent.level(sub).unit(),)

    def sample_level(self, sub, rng):
        carrier = self.parent.level(sub)
        for _ in range(32):
            v = carrier.sample(rng)
            if self.contains_level(sub, v).status is MEMBER:
                return v
        return carrier.unit()


# ---------------------------------------------------------------------------
# Lifts along product-preserving functors on monoids


class LiftedSemiMackey(SemiMackeyFunctor):
    def __init__(self, base: SemiMackeyFunctor, lift, name):
        self.base = base
        self.group = base.group
        self._lift = lift  # Monoid -> Monoid wrapper
        self.name = f"{name}({base.name})"
        self._kind = name

    def level(self, sub):
        return self._lift(self.base.level(sub))

    def _map_value(self, mapper, value):
        if self._kind == "K0":
            return (mapper(value[0]), mapper(value[1]))
        return mapper(value)

    def res_level(self, upper, lower, value):
        return self._map_value(lambda v: self.base.res_level(upper, lower, v), value)

    def cov_level(self, upper, lower, value):
        return self._map_value(lambda v: self.base.cov_level(upper, lower, v), value)

    def conj_level(self, g, sub, value):
        return self._map_value(lambda v: self.base.conj_level(g, sub, v), value)


def group_completion_lift(base: SemiMackeyFunctor) -> LiftedSemiMackey:
    """Levelwise group completion; the result is group-valued everywhere."""
    return LiftedSemiMackey(base, GroupCompletionMonoid, "K0")


def units_lift(base: SemiMackeyFunctor) -> LiftedSemiMackey:
    """Levelwise unit groups; structure maps restrict because both
    variances are monoid maps."""
    return LiftedSemiMackey(base, UnitGroupMonoid, "units")
