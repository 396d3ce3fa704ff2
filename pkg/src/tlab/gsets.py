"""The category of finite G-sets: objects, equivariant maps, and the diagram
constructions (orbit decomposition, pullbacks, coproducts, dependent
products) that every levelwise computation reduces to.

G-sets carry explicit points because section enumeration and stabilizer
bookkeeping need element-level data; orbit-type summaries are derived views.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import prod

from .errors import BadSpec, BoundExceeded, SectionBlowup
from .groups import (
    FiniteGroup,
    Subgroup,
    full_subgroup,
    subgroup_classes,
    trivial_subgroup,
)

MAX_POINTS = 64
MAX_SECTIONS = 10**5


class GSet:
    """A finite left G-set: `action[g][x]` is the point g·x.

    Validated on construction (identity acts trivially, action is
    compatible with composition); immutable afterwards.  Equality is
    object identity; use `find_iso` for isomorphism testing.
    """

    __slots__ = ("group", "size", "action", "labels", "_decomposition")

    def __init__(self, group: FiniteGroup, action, labels=None, max_points: int | None = None):
        act = tuple(tuple(int(p) for p in row) for row in action)
        if len(act) != group.order:
            raise BadSpec("action table must have one row per group element")
        size = len(act[0]) if act else 0
        bound = MAX_POINTS if max_points is None else max_points
        if size > bound:
            raise BoundExceeded(f"G-set with {size} points exceeds bound {bound}")
        for row in act:
            if len(row) != size or any(not 0 <= p < size for p in row):
                raise BadSpec("action table rows must index points")
        if act and act[0] != tuple(range(size)):
            raise BadSpec("identity must act trivially")
        table = group.table
        for g in range(group.order):
            for h in range(group.order):
                gh = table[g][h]
                for x in range(size):
                    if act[g][act[h][x]] != act[gh][x]:
                        raise BadSpec(f"action not compatible at g={g}, h={h}, x={x}")
        self.group = group
        self.size = size
        self.action = act
        self.labels = tuple(labels) if labels else tuple(str(i) for i in range(size))
        self._decomposition = None

    def apply(self, g: int, x: int) -> int:
        return self.action[g][x]

    def __repr__(self):
        return f"GSet(size={self.size} over {self.group.name})"


class GMap:
    """An equivariant map between G-sets over the same group."""

    __slots__ = ("source", "target", "mapping")

    def __init__(self, source: GSet, target: GSet, mapping):
        if source.group is not target.group:
            raise BadSpec("source and target must share the group")
        mp = tuple(int(v) for v in mapping)
        if len(mp) != source.size or any(not 0 <= v < target.size for v in mp):
            raise BadSpec("mapping must send points to points")
        for g in range(source.group.order):
            for x in range(source.size):
                if mp[source.action[g][x]] != target.action[g][mp[x]]:
                    raise BadSpec(f"map not equivariant at g={g}, x={x}")
        self.source = source
        self.target = target
        self.mapping = mp

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def fiber(self, y: int) -> tuple[int, ...]:
        return tuple(x for x, v in enumerate(self.mapping) if v == y)

    def __repr__(self):
        return f"GMap({self.source.size}->{self.target.size})"


def identity_map(x: GSet) -> GMap:
    return GMap(x, x, range(x.size))


def compose(g: GMap, f: GMap) -> GMap:
    """g ∘ f."""
    if f.target is not g.source:
        raise BadSpec("composition needs matching middle object")
    return GMap(f.source, g.target, tuple(g.mapping[v] for v in f.mapping))


# ---------------------------------------------------------------------------
# Construction of standard objects


@lru_cache(maxsize=None)
def transitive(group: FiniteGroup, sub: Subgroup) -> GSet:
    """The left coset G-set G/H; point 0 is the coset H itself.

    Memoized: repeated calls return the identical object, so maps built on
    separately-constructed coset spaces compose without relabelling.
    """
    if sub.group is not group:
        raise BadSpec("subgroup belongs to a different group")
    mset = set(sub.members)
    cosets = []
    seen = set()
    for g in group.elements():
        if g in seen:
            continue
        coset = frozenset(group.table[g][m] for m in mset)
        cosets.append((g, coset))
        seen.update(coset)
    index = {}
    for i, (_, coset) in enumerate(cosets):
        for member in coset:
            index[member] = i
    action = [
        [index[group.table[g][rep]] for (rep, _) in cosets]
        for g in group.elements()
    ]
    labels = [f"{group.labels[rep]}·H" for (rep, _) in cosets]
    return GSet(group, action, labels=labels)


def one_point(group: FiniteGroup) -> GSet:
    return transitive(group, full_subgroup(group))


def free_orbit(group: FiniteGroup) -> GSet:
    return transitive(group, trivial_subgroup(group))


def coproduct(parts: list[GSet], max_points: int | None = None):
    """Disjoint union with its inclusion maps."""
    if not parts:
        raise BadSpec("coproduct of no parts needs an explicit group")
    group = parts[0].group
    if any(p.group is not group for p in parts):
        raise BadSpec("coproduct parts must share the group")
    offsets = []
    total = 0
    for p in parts:
        offsets.append(total)
        total += p.size
    action = [
        [off + p.action[g][x] for p, off in zip(parts, offsets) for x in range(p.size)]
        for g in group.elements()
    ]
    labels = [f"{i}:{p.labels[x]}" for i, p in enumerate(parts) for x in range(p.size)]
    whole = GSet(group, action, labels=labels, max_points=max_points)
    inclusions = [
        GMap(p, whole, [off + x for x in range(p.size)]) for p, off in zip(parts, offsets)
    ]
    return whole, inclusions


def empty_gset(group: FiniteGroup) -> GSet:
    return GSet(group, [[] for _ in group.elements()])


def copair(maps: list[GMap], source: GSet) -> GMap:
    """[f_1, ..., f_n] out of a coproduct built by `coproduct` (same order)."""
    target = maps[0].target
    mapping = []
    for m in maps:
        if m.target is not target:
            raise BadSpec("copair components must share the target")
        mapping.extend(m.mapping)
    return GMap(source, target, mapping)


# ---------------------------------------------------------------------------
# Orbit decomposition


@dataclass(frozen=True, eq=False)
class Orbit:
    """One orbit: base point, exact stabilizer, transversal u with p = u·base."""

    base: int
    stabilizer: Subgroup
    class_index: int
    points: tuple[int, ...]
    transversal: dict  # point -> group element


@dataclass(frozen=True, eq=False)
class OrbitDecomposition:
    gset: GSet
    orbits: tuple[Orbit, ...]
    orbit_of: tuple[int, ...]


def orbit_decompose(x: GSet) -> OrbitDecomposition:
    """Partition into orbits with stabilizers, classified against O(G).

    Deterministic: orbit bases are the least unvisited point indices and the
    transversal picks the least group element carrying base to each point.
    """
    if x._decomposition is not None:
        return x._decomposition
    group = x.group
    classes = subgroup_classes(full_subgroup(group))
    orbit_of = [-1] * x.size
    orbits = []
    for base in range(x.size):
        if orbit_of[base] != -1:
            continue
        transversal = {}
        stab = []
        for g in group.elements():
            p = x.action[g][base]
            if p not in transversal:
                transversal[p] = g
            if p == base:
                stab.append(g)
        idx = len(orbits)
        points = tuple(sorted(transversal))
        for p in points:
            orbit_of[p] = idx
        stabilizer = Subgroup(group, stab)
        orbits.append(
            Orbit(base, stabilizer, classes.index_of(stabilizer), points, transversal)
        )
    decomp = OrbitDecomposition(x, tuple(orbits), tuple(orbit_of))
    x._decomposition = decomp
    return decomp


def to_point(x: GSet) -> GMap:
    """The unique map X → G/G."""
    return GMap(x, one_point(x.group), [0] * x.size)


def from_free(x: GSet, point: int = 0) -> GMap:
    """A map G/e → X, g ↦ g·point (any choice of point gives such a map)."""
    free = free_orbit(x.group)
    group = x.group
    decomp = orbit_decompose(free)
    # point i of G/e is the coset {g}; find that g
    reps = [decomp.orbits[0].transversal[i] for i in range(free.size)]
    return GMap(free, x, [x.action[g][point] for g in reps])


def coset_projection(group: FiniteGroup, k: Subgroup, h: Subgroup) -> GMap:
    """The canonical projection G/K → G/H for K ≤ H."""
    if not k <= h:
        raise BadSpec("projection needs K ≤ H")
    src, tgt = transitive(group, k), transitive(group, h)
    # point i of G/K is rep_i·K; send it to rep_i·H
    reps = [src_decomp_rep(src, i) for i in range(src.size)]
    return GMap(src, tgt, [tgt.action[r][0] for r in reps])


def src_decomp_rep(x: GSet, point: int) -> int:
    """A group element carrying the orbit base of `point` to `point`."""
    decomp = orbit_decompose(x)
    orb = decomp.orbits[decomp.orbit_of[point]]
    return orb.transversal[point]


# ---------------------------------------------------------------------------
# Limits: pullback, diagonal complement


def pullback(f: GMap, g: GMap, max_points: int | None = None):
    """The pullback {(x, z) | f(x) = g(z)} with its two projections."""
    if f.target is not g.target:
        raise BadSpec("pullback legs must share the target")
    x, z = f.source, g.source
    pts = [(a, b) for a in range(x.size) for b in range(z.size) if f.mapping[a] == g.mapping[b]]
    index = {p: i for i, p in enumerate(pts)}
    group = x.group
    action = [
        [index[(x.action[h][a], z.action[h][b])] for (a, b) in pts]
        for h in group.elements()
    ]
    labels = [f"({x.labels[a]},{z.labels[b]})" for (a, b) in pts]
    p = GSet(group, action, labels=labels, max_points=max_points)
    p1 = GMap(p, x, [a for (a, _) in pts])
    p2 = GMap(p, z, [b for (_, b) in pts])
    return p, p1, p2


def diagonal_complement(f: GMap, max_points: int | None = None):
    """X ×_Y X minus the diagonal, with the two restricted projections."""
    x = f.source
    pts = [
        (a, b)
        for a in range(x.size)
        for b in range(x.size)
        if a != b and f.mapping[a] == f.mapping[b]
    ]
    index = {p: i for i, p in enumerate(pts)}
    group = x.group
    action = [
        [index[(x.action[h][a], x.action[h][b])] for (a, b) in pts]
        for h in group.elements()
    ]
    z = GSet(group, action, max_points=max_points)
    q1 = GMap(z, x, [a for (a, _) in pts])
    q2 = GMap(z, x, [b for (_, b) in pts])
    return z, q1, q2


# ---------------------------------------------------------------------------
# Dependent product (the pentagon of norm-transfer interchange)


@dataclass(frozen=True, eq=False)
class ExponentialDiagram:
    """The five objects and maps of the norm-distributivity pentagon.

    Given f: X→Y and p: A→X, the object B is the dependent product along f:
    a point of B is a pair (y, σ) with σ a section of p over the fiber
    f^-1(y).  Z is the pullback X ×_Y B, λ evaluates the section, and
    q: B→Y, ρ: Z→B are the projections.
    """

    x: GSet
    y: GSet
    a: GSet
    z: GSet
    b: GSet
    f: GMap
    p: GMap
    lam: GMap
    rho: GMap
    q: GMap


def exponential(f: GMap, p: GMap, max_sections: int | None = None) -> ExponentialDiagram:
    """Build the exponential diagram of (f, p).

    Section enumeration is lexicographic over the sorted fiber traversal, so
    the point order of B is deterministic.  Raises SectionBlowup when the
    total section count exceeds the bound.
    """
    if p.target is not f.source:
        raise BadSpec("exponential needs p: A → X over f: X → Y")
    x, y, a = f.source, f.target, p.source
    bound = MAX_SECTIONS if max_sections is None else max_sections
    group = x.group

    fibers_f = [f.fiber(yy) for yy in range(y.size)]
    fibers_p = [p.fiber(xx) for xx in range(x.size)]

    total = sum(prod(len(fibers_p[xx]) for xx in fib) for fib in fibers_f)
    if total > bound:
        raise SectionBlowup(f"{total} sections exceed bound {bound}")

    b_points = []  # (y, sections as tuple aligned with fibers_f[y])
    for yy in range(y.size):
        fib = fibers_f[yy]
        for choice in itertools.product(*(fibers_p[xx] for xx in fib)):
            b_points.append((yy, choice))
    b_index = {pt: i for i, pt in enumerate(b_points)}

    def act_b(g: int, pt):
        yy, choice = pt
        y2 = y.action[g][yy]
        fib2 = fibers_f[y2]
        ginv = group.inverse[g]
        sigma = dict(zip(fibers_f[yy], choice))
        choice2 = tuple(a.action[g][sigma[x.action[ginv][x2]]] for x2 in fib2)
        return (y2, choice2)

    b_action = [[b_index[act_b(g, pt)] for pt in b_points] for g in group.elements()]
    b = GSet(group, b_action, max_points=max(MAX_POINTS, total))
    q = GMap(b, y, [yy for (yy, _) in b_points])

    z_pts = []
    for i, (yy, choice) in enumerate(b_points):
        for pos, xx in enumerate(fibers_f[yy]):
            z_pts.append((xx, i, pos))
    z_index = {(xx, i): k for k, (xx, i, _) in enumerate(z_pts)}
    z_action = [
        [z_index[(x.action[g][xx], b_action[g][i])] for (xx, i, _) in z_pts]
        for g in group.elements()
    ]
    z = GSet(group, z_action, max_points=max(MAX_POINTS, len(z_pts)))
    rho = GMap(z, b, [i for (_, i, _) in z_pts])
    lam = GMap(z, a, [b_points[i][1][pos] for (_, i, pos) in z_pts])

    return ExponentialDiagram(x=x, y=y, a=a, z=z, b=b, f=f, p=p, lam=lam, rho=rho, q=q)


# ---------------------------------------------------------------------------
# Isomorphism search


def find_iso(f1: GMap, f2: GMap):
    """Equivariant isomorphisms (α: A1→A2, β: X1→X2) with f2∘α = β∘f1.

    Returns None when no such pair exists.  Backtracks over orbit base-point
    images after a stabilizer-class multiset filter.
    """
    a1, x1 = f1.source, f1.target
    a2, x2 = f2.source, f2.target
    if a1.size != a2.size or x1.size != x2.size:
        return None
    # iterate over candidate betas; for each, try to match the fibers
    for beta_map in _iso_candidates(x1, x2):
        alpha_map = _match_over(f1, f2, beta_map)
        if alpha_map is not None:
            return GMap(a1, a2, alpha_map), GMap(x1, x2, beta_map)
    return None


def gset_iso(x: GSet, y: GSet):
    """An equivariant bijection X → Y, or None."""
    for cand in _iso_candidates(x, y):
        return GMap(x, y, cand)
    return None


def _iso_candidates(x: GSet, y: GSet):
    """Yield mapping tables of equivariant bijections X → Y."""
    if x.size != y.size:
        return
    dx, dy = orbit_decompose(x), orbit_decompose(y)
    if sorted(o.class_index for o in dx.orbits) != sorted(
        o.class_index for o in dy.orbits
    ):
        return
    used = [False] * len(dy.orbits)
    assignment = [None] * len(dx.orbits)  # orbit -> (target orbit, image of base)

    def extend(k):
        if k == len(dx.orbits):
            mapping = [0] * x.size
            for i, orb in enumerate(dx.orbits):
                _, img = assignment[i]
                for pt in orb.points:
                    mapping[pt] = y.action[orb.transversal[pt]][img]
            yield tuple(mapping)
            return
        orb = dx.orbits[k]
        for j, tgt in enumerate(dy.orbits):
            if used[j]:
                continue
            for img in tgt.points:
                # equivariance forces Stab(img) == Stab(base)
                if _stabilizer_of(y, img) != orb.stabilizer:
                    continue
                used[j] = True
                assignment[k] = (j, img)
                yield from extend(k + 1)
                used[j] = False
                assignment[k] = None

    yield from extend(0)


def _stabilizer_of(x: GSet, point: int) -> Subgroup:
    group = x.group
    return Subgroup(group, [g for g in group.elements() if x.action[g][point] == point])


def _match_over(f1: GMap, f2: GMap, beta_map) -> tuple | None:
    """An equivariant bijection α with f2∘α = β∘f1, if one exists."""
    a1, a2 = f1.source, f2.source
    d1, d2 = orbit_decompose(a1), orbit_decompose(a2)
    if len(d1.orbits) != len(d2.orbits):
        return None
    used = [False] * len(d2.orbits)
    assignment = [None] * len(d1.orbits)

    def extend(k):
        if k == len(d1.orbits):
            mapping = [0] * a1.size
            for i, orb in enumerate(d1.orbits):
                img = assignment[i]
                for pt in orb.points:
                    mapping[pt] = a2.action[orb.transversal[pt]][img]
            return tuple(mapping)
        orb = d1.orbits[k]
        want = beta_map[f1.mapping[orb.base]]
        for j, tgt in enumerate(d2.orbits):
            if used[j]:
                continue
            for img in tgt.points:
                if f2.mapping[img] != want:
                    continue
                if _stabilizer_of(a2, img) != orb.stabilizer:
                    continue
                used[j] = True
                assignment[k] = img
                res = extend(k + 1)
                if res is not None:
                    return res
                used[j] = False
                assignment[k] = None
        return None

    return extend(0)


# ---------------------------------------------------------------------------
# JSON literals (CLI custom inputs)


def gset_from_json(payload: dict, group: FiniteGroup | None = None) -> GSet:
    """Parse {"group": <spec>, "points": n, "action": [[...]]}; an explicit
    `group` argument overrides the embedded spec."""
    from .groups import build_group

    if group is None:
        if "group" not in payload:
            raise BadSpec("G-set literal needs a 'group' spec")
        group = build_group(payload["group"])
    try:
        n = int(payload["points"])
        action = payload["action"]
    except (KeyError, TypeError, ValueError) as exc:
        raise BadSpec(f"G-set literal needs 'points' and 'action': {exc}")
    if any(len(row) != n for row in action):
        raise BadSpec("action rows must match the point count")
    return GSet(group, action)


def gmap_from_json(source: GSet, target: GSet, payload: dict) -> GMap:
    try:
        mapping = payload["map"]
    except (KeyError, TypeError) as exc:
        raise BadSpec(f"G-map literal needs 'map': {exc}")
    return GMap(source, target, mapping)
