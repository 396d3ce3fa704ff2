"""Finite group arithmetic on integer indices: tables, subgroups, cosets.

Elements of a group of order n are the indices 0..n-1, with 0 the identity.
Everything is computed from the composition table; all values are immutable
after validation so they can be shared and used as cache keys.
"""

from __future__ import annotations

import itertools
import json
import os
import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    BadSpec,
    MissingInverse,
    NonAssociative,
    OrderBoundExceeded,
)

DEFAULT_MAX_ORDER = 24


def order_bound(override: int | None = None) -> int:
    """Desk-scale group order bound; TLAB_MAX_ORDER overrides the default."""
    if override is not None:
        return override
    env = os.environ.get("TLAB_MAX_ORDER")
    return int(env) if env else DEFAULT_MAX_ORDER


class FiniteGroup:
    """A finite group on elements 0..order-1 with 0 the identity.

    `table[a][b]` is the index of a*b, `inverse[a]` the index of a^-1.
    Identity-based equality/hash: downstream caches key on group identity.
    """

    __slots__ = ("name", "order", "table", "inverse", "labels")

    def __init__(self, table, labels=None, name="G", max_order=None):
        order = len(table)
        if order == 0:
            raise BadSpec("empty composition table")
        bound = order_bound(max_order)
        if order > bound:
            raise OrderBoundExceeded(f"group order {order} exceeds bound {bound}")
        tbl = tuple(tuple(int(v) for v in row) for row in table)
        for row in tbl:
            if len(row) != order or any(not 0 <= v < order for v in row):
                raise BadSpec("composition table is not square over element indices")
        if any(tbl[0][j] != j or tbl[j][0] != j for j in range(order)):
            raise MissingInverse("element 0 is not a two-sided identity")
        inv = []
        for a in range(order):
            b = next((b for b in range(order) if tbl[a][b] == 0 and tbl[b][a] == 0), None)
            if b is None:
                raise MissingInverse(f"element {a} has no inverse")
            inv.append(b)
        for a in range(order):
            for b in range(order):
                ab = tbl[a][b]
                row_b = tbl[b]
                row_a = tbl[a]
                row_ab = tbl[ab]
                for c in range(order):
                    if row_ab[c] != row_a[row_b[c]]:
                        raise NonAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})")
        self.name = name
        self.order = order
        self.table = tbl
        self.inverse = tuple(inv)
        self.labels = tuple(labels) if labels else tuple(str(i) for i in range(order))
        if len(self.labels) != order:
            raise BadSpec("label count does not match group order")

    identity = 0

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.table[self.table[g][x]][self.inverse[g]]

    def element_order(self, a: int) -> int:
        x, n = a, 1
        while x != 0:
            x = self.table[x][a]
            n += 1
        return n

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


class Subgroup:
    """A validated subgroup, stored as a sorted tuple of element indices."""

    __slots__ = ("group", "members", "_mset")

    def __init__(self, group: FiniteGroup, members):
        mems = tuple(sorted(set(int(m) for m in members)))
        mset = frozenset(mems)
        if 0 not in mset:
            raise BadSpec("subgroup must contain the identity")
        for a in mems:
            if group.inverse[a] not in mset:
                raise BadSpec(f"subgroup not closed under inverse at {a}")
            for b in mems:
                if group.table[a][b] not in mset:
                    raise BadSpec(f"subgroup not closed under product at ({a},{b})")
        self.group = group
        self.members = mems
        self._mset = mset

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self._mset

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and other.group is self.group
            and other.members == self.members
        )

    def __hash__(self):
        return hash((id(self.group), self.members))

    def __le__(self, other: "Subgroup") -> bool:
        return self._mset <= other._mset

    def conjugate(self, g: int) -> "Subgroup":
        """The subgroup g H g^-1."""
        grp = self.group
        return Subgroup(grp, (grp.conj(g, x) for x in self.members))

    def __repr__(self):
        return f"Subgroup{self.members}"


def trivial_subgroup(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, (0,))


def full_subgroup(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, range(group.order))


def generated_subgroup(group: FiniteGroup, gens) -> Subgroup:
    """Closure of a generating set (identity always included)."""
    members = {0}
    frontier = [0]
    gens = list(set(gens) | {0})
    while frontier:
        x = frontier.pop()
        for g in gens:
            for y in (group.table[x][g], group.table[g][x]):
                if y not in members:
                    members.add(y)
                    frontier.append(y)
    # the closure of a finite set under products is inverse-closed
    return Subgroup(group, members)


@lru_cache(maxsize=None)
def all_subgroups(group: FiniteGroup) -> tuple[Subgroup, ...]:
    """Every subgroup of `group`, sorted by (order, member tuple).

    BFS over single-generator extensions: each subgroup arises as a closure
    of element subsets, so this enumeration is exhaustive at desk scale.
    """
    found = {(0,): trivial_subgroup(group)}
    frontier = [found[(0,)]]
    while frontier:
        nxt = []
        for sub in frontier:
            if sub.order == group.order:
                continue
            for g in range(1, group.order):
                if g in sub:
                    continue
                ext = generated_subgroup(group, sub.members + (g,))
                if ext.members not in found:
                    found[ext.members] = ext
                    nxt.append(ext)
        frontier = nxt
    return tuple(sorted(found.values(), key=lambda s: (s.order, s.members)))


@lru_cache(maxsize=None)
def subgroups_within(ambient: Subgroup) -> tuple[Subgroup, ...]:
    """All subgroups of the ambient's parent group contained in `ambient`."""
    return tuple(s for s in all_subgroups(ambient.group) if s <= ambient)


@dataclass(frozen=True, eq=False)
class SubgroupClassSet:
    """Conjugacy classes of subgroups of `ambient`, fused by ambient-conjugation.

    `representatives` is in canonical order: ascending subgroup order, then
    the lexicographically minimal member tuple among the class conjugates.
    """

    ambient: Subgroup
    representatives: tuple[Subgroup, ...]
    _index: dict

    def __len__(self):
        return len(self.representatives)

    def index_of(self, sub: Subgroup) -> int:
        """Class index of a subgroup of the ambient."""
        try:
            return self._index[sub.members]
        except KeyError:
            raise BadSpec(f"{sub} is not a subgroup of the ambient {self.ambient}")


@lru_cache(maxsize=None)
def subgroup_classes(ambient: Subgroup) -> SubgroupClassSet:
    group = ambient.group
    remaining = {s.members: s for s in subgroups_within(ambient)}
    classes = []
    index = {}
    while remaining:
        seed = min(remaining.values(), key=lambda s: (s.order, s.members))
        orbit = {seed.members: seed}
        frontier = [seed]
        while frontier:
            s = frontier.pop()
            for h in ambient.members:
                c = s.conjugate(h)
                if c.members not in orbit:
                    orbit[c.members] = c
                    frontier.append(c)
        rep = min(orbit.values(), key=lambda s: s.members)
        classes.append(rep)
        for mem in orbit:
            index[mem] = rep
            del remaining[mem]
    classes.sort(key=lambda s: (s.order, s.members))
    pos = {rep.members: i for i, rep in enumerate(classes)}
    final_index = {mem: pos[rep.members] for mem, rep in index.items()}
    return SubgroupClassSet(ambient, tuple(classes), final_index)


def conjugate_and_intersect(h: Subgroup, g: int, k: Subgroup) -> Subgroup:
    """H ∩ gKg^-1 as a subgroup (stabilizer arithmetic for pullback orbits)."""
    grp = h.group
    conj = {grp.conj(g, x) for x in k.members}
    return Subgroup(grp, set(h.members) & conj)


def intersect(h: Subgroup, k: Subgroup) -> Subgroup:
    return Subgroup(h.group, set(h.members) & set(k.members))


@lru_cache(maxsize=None)
def coset_reps(h: Subgroup, k: Subgroup) -> tuple[int, ...]:
    """Left coset representatives of K in H (K ≤ H), ascending by index."""
    if not k <= h:
        raise BadSpec("coset_reps requires K ≤ H")
    grp = h.group
    seen = set()
    reps = []
    for x in h.members:
        if x in seen:
            continue
        reps.append(x)
        seen.update(grp.table[x][m] for m in k.members)
    return tuple(reps)


@lru_cache(maxsize=None)
def double_coset_reps(ambient: Subgroup, a: Subgroup, b: Subgroup) -> tuple[int, ...]:
    """Representatives of the double cosets A\\ambient/B, ascending by index."""
    grp = ambient.group
    seen = set()
    reps = []
    for g in ambient.members:
        if g in seen:
            continue
        reps.append(g)
        for x in a.members:
            xg = grp.table[x][g]
            for y in b.members:
                seen.add(grp.table[xg][y])
    return tuple(reps)


def double_cosets(group: FiniteGroup, h: Subgroup, k: Subgroup) -> tuple[int, ...]:
    """One representative g per double coset HgK of the whole group."""
    return double_coset_reps(full_subgroup(group), h, k)


# ---------------------------------------------------------------------------
# Group construction


def _table_from_permutations(perms, labels, name, max_order):
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    table = [[index[tuple(p[q[i]] for i in range(len(p)))] for q in perms] for p in perms]
    return FiniteGroup(table, labels=labels, name=name, max_order=max_order)


def _perm_label(p) -> str:
    cycles = []
    seen = set()
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        cur = p[start]
        while cur != start:
            cyc.append(cur)
            seen.add(cur)
            cur = p[cur]
        cycles.append("(" + " ".join(str(i + 1) for i in cyc) + ")")
    return "".join(cycles) if cycles else "e"


def _cyclic(n: int, max_order) -> FiniteGroup:
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    labels = ["e"] + [f"r{'' if i == 1 else i}" for i in range(1, n)]
    return FiniteGroup(table, labels=labels, name=f"C{n}", max_order=max_order)


def _symmetric(n: int, max_order) -> FiniteGroup:
    perms = sorted(itertools.permutations(range(n)))
    return _table_from_permutations(perms, [_perm_label(p) for p in perms], f"S{n}", max_order)


def _alternating4(max_order) -> FiniteGroup:
    def sign(p):
        return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j]) % 2

    perms = [p for p in sorted(itertools.permutations(range(4))) if sign(p) == 0]
    return _table_from_permutations(perms, [_perm_label(p) for p in perms], "A4", max_order)


def _klein(max_order) -> FiniteGroup:
    pairs = [(0, 0), (0, 1), (1, 0), (1, 1)]
    index = {p: i for i, p in enumerate(pairs)}
    table = [
        [index[((a + c) % 2, (b + d) % 2)] for (c, d) in pairs]
        for (a, b) in pairs
    ]
    return FiniteGroup(table, labels=["e", "b", "a", "ab"], name="C2xC2", max_order=max_order)


def _dihedral(order: int, max_order) -> FiniteGroup:
    if order % 2 or order < 2:
        raise BadSpec(f"dihedral family needs an even order, got {order}")
    m = order // 2
    # index i -> r^i, index m+i -> r^i f;  f r f = r^-1
    def mul(x, y):
        i, a = x % m, x // m
        j, b = y % m, y // m
        if a == 0:
            return ((i + j) % m) + m * b
        return ((i - j) % m) + m * (1 - b)

    table = [[mul(x, y) for y in range(order)] for x in range(order)]
    labels = [f"r{i}" if i else "e" for i in range(m)] + [f"r{i}f" if i else "f" for i in range(m)]
    return FiniteGroup(table, labels=labels, name=f"D{order}", max_order=max_order)


_FAMILY = re.compile(r"^([A-Za-z]+)(\d*)$")


def build_group(spec, max_order: int | None = None) -> FiniteGroup:
    """Build a validated group from a family token or an explicit table.

    Accepts "Cn", "Dn" (n = order, even), "Sn" (n ≤ 4), "A4", "C2xC2"/"V4",
    or a dict {"order": n, "table": [[...]]} with table[i][j] = i*j.  For
    explicit tables the identity is relabelled to index 0 when necessary.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, dict):
        return _group_from_table(spec, max_order)
    if not isinstance(spec, str):
        raise BadSpec(f"unsupported group spec {spec!r}")
    token = spec.strip()
    if token.startswith("{"):
        return _group_from_table(json.loads(token), max_order)
    upper = token.upper()
    if upper in ("C2XC2", "V4"):
        return _klein(max_order)
    m = _FAMILY.match(upper)
    if not m:
        raise BadSpec(f"unrecognized group token {spec!r}")
    family, num = m.group(1), m.group(2)
    if not num:
        raise BadSpec(f"family token {spec!r} needs a numeric suffix")
    n = int(num)
    if family == "C":
        return _cyclic(n, max_order)
    if family == "S":
        if n > 4:
            raise OrderBoundExceeded(f"S{n} exceeds the desk-scale bound")
        return _symmetric(n, max_order)
    if family == "A":
        if n != 4:
            raise BadSpec("only A4 is provided")
        return _alternating4(max_order)
    if family == "D":
        return _dihedral(n, max_order)
    raise BadSpec(f"unrecognized group family {spec!r}")


def _group_from_table(payload: dict, max_order) -> FiniteGroup:
    try:
        order = int(payload["order"])
        table = payload["table"]
    except (KeyError, TypeError, ValueError) as exc:
        raise BadSpec(f"table spec needs 'order' and 'table': {exc}")
    if len(table) != order:
        raise BadSpec("declared order does not match table size")
    # locate the identity and relabel it to index 0
    ident = None
    for e in range(order):
        if all(table[e][j] == j and table[j][e] == j for j in range(order)):
            ident = e
            break
    if ident is None:
        raise MissingInverse("table has no two-sided identity")
    if ident != 0:
        perm = list(range(order))
        perm[0], perm[ident] = ident, 0
        table = [[perm.index(table[perm[i]][perm[j]]) for j in range(order)] for i in range(order)]
    name = payload.get("name", f"G{order}")
    return FiniteGroup(table, labels=payload.get("labels"), name=name, max_order=max_order)
