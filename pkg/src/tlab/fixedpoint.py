"""Fixed-point Tambara functors of G-rings.

A G-ring is an exact carrier with a G-action by ring automorphisms; the
level at a subgroup is its fixed subring, restriction is inclusion,
transfer sums over cosets, and the norm multiplies over them.  Supported
carriers: exact integers, exact rationals, residue rings (for torsion
fault injection) and finite products with a permutation action.
"""

from __future__ import annotations

from .carriers import IntRing, ProductRing, RatField, Ring, ZModRing
from .errors import BadSpec
from .groups import FiniteGroup, Subgroup, coset_reps
from .tambara import TambaraFunctor


class GRing:
    """A ring carrier together with a G-action by ring automorphisms."""

    def __init__(self, group: FiniteGroup, ring: Ring, act=None, name=None,
                 fixed_sampler=None, trivial=False):
        self.group = group
        self.ring = ring
        self._act = act or (lambda g, v: v)
        self.trivial = trivial or act is None
        self._fixed_sampler = fixed_sampler
        self.name = name or ring.name

    def act(self, g: int, v):
        return self._act(g, v)

    def fixed_sample(self, sub: Subgroup, rng):
        if self.trivial or sub.order == 1:
            return self.ring.sample(rng)
        if self._fixed_sampler is not None:
            return self._fixed_sampler(sub, rng)
        # additive symmetrization is always fixed
        v = self.ring.sample(rng)
        out = self.ring.zero()
        for h in sub.members:
            out = self.ring.add(out, self.act(h, v))
        return out


def trivial_gring(group, ring: Ring, name=None) -> GRing:
    return GRing(group, ring, act=None, name=name, trivial=True)


def permutation_gring(group, base: Ring, perms, name=None) -> GRing:
    """Product ring base^n with G permuting the coordinates.

    `perms[g]` is the image tuple of a homomorphism into the symmetric
    group on the coordinates: coordinate i of g·v is v at the preimage of i.
    """
    n = len(perms[0])
    ring = ProductRing([base] * n)
    perms = tuple(tuple(p) for p in perms)
    if len(perms) != group.order:
        raise BadSpec("need one coordinate permutation per group element")
    if perms[0] != tuple(range(n)):
        raise BadSpec("identity must act trivially on coordinates")
    for g in range(group.order):
        for h in range(group.order):
            composed = tuple(perms[g][perms[h][i]] for i in range(n))
            if composed != perms[group.table[g][h]]:
                raise BadSpec("coordinate permutations are not a homomorphism")
    inv = [None] * group.order
    for g in range(group.order):
        inv[g] = perms[group.inverse[g]]

    def act(g, v):
        return tuple(v[inv[g][i]] for i in range(n))

    def fixed_sampler(sub: Subgroup, rng):
        # constant on each coordinate orbit of the subgroup
        seen = [False] * n
        values = [None] * n
        for i in range(n):
            if seen[i]:
                continue
            val = base.sample(rng)
            orbit = {i}
            frontier = [i]
            while frontier:
                j = frontier.pop()
                for h in sub.members:
                    k = perms[h][j]
                    if k not in orbit:
                        orbit.add(k)
                        frontier.append(k)
            for j in orbit:
                seen[j] = True
                values[j] = val
        return tuple(values)

    return GRing(group, ring, act=act, name=name or f"{base.name}^{n}",
                 fixed_sampler=fixed_sampler)


class FixedSubring(Ring):
    """The fixed subring of a G-ring at one subgroup; values are carrier
    values of the underlying ring (fixedness is maintained by construction)."""

    def __init__(self, gring: GRing, sub: Subgroup):
        self.gring = gring
        self.subgroup = sub
        base = gring.ring
        self.name = f"{gring.name}^{{{len(sub.members)}}}"
        self.is_field = base.is_field and (gring.trivial or sub.order == 1)
        self.is_domain = base.is_domain

    @property
    def base(self):
        return self.gring.ring

    def zero(self):
        return self.base.zero()

    def one(self):
        return self.base.one()

    def add(self, a, b):
        return self.base.add(a, b)

    def mul(self, a, b):
        return self.base.mul(a, b)

    def neg(self, a):
        return self.base.neg(a)

    def eq(self, a, b):
        return self.base.eq(a, b)

    def sample(self, rng):
        return self.gring.fixed_sample(self.subgroup, rng)

    def sample_unit(self, rng):
        if self.gring.trivial or self.subgroup.order == 1:
            return self.base.sample_unit(rng)
        for _ in range(64):
            v = self.sample(rng)
            if self.base.invert(v) is not None:
                return v
        return self.one()

    def invert(self, a):
        # the inverse of a fixed unit is fixed (inverses are unique)
        return self.base.invert(a)

    def is_zero_divisor(self, a):
        # for the shipped carriers a fixed element is a zero divisor in the
        # fixed subring iff it is one in the ambient product
        return self.base.is_zero_divisor(a)

    def has_torsion(self, n):
        return self.base.has_torsion(n)

    def try_divide(self, s, x):
        from .carriers import ring_try_divide

        return ring_try_divide(self.base, s, x)


class FixedPointTambara(TambaraFunctor):
    """Levels are fixed subrings; transfer sums and norm multiplies over
    cosets, restriction is the inclusion."""

    def __init__(self, group: FiniteGroup, gring: GRing):
        self.group = group
        self.gring = gring
        self.name = f"FixedPoints[{gring.name}]"
        self._levels = {}

    def level(self, sub: Subgroup) -> FixedSubring:
        if sub not in self._levels:
            self._levels[sub] = FixedSubring(self.gring, sub)
        return self._levels[sub]

    def res_level(self, upper, lower, value):
        return value

    def tr_level(self, upper, lower, value):
        ring = self.gring.ring
        out = ring.zero()
        for rep in coset_reps(upper, lower):
            out = ring.add(out, self.gring.act(rep, value))
        return out

    def nm_level(self, upper, lower, value):
        ring = self.gring.ring
        out = ring.one()
        for rep in coset_reps(upper, lower):
            out = ring.mul(out, self.gring.act(rep, value))
        return out

    def conj_level(self, g, sub, value):
        return self.gring.act(g, value)


def fixed_point(group: FiniteGroup, gring: GRing) -> FixedPointTambara:
    return FixedPointTambara(group, gring)


def fixed_point_integers(group: FiniteGroup) -> FixedPointTambara:
    return FixedPointTambara(group, trivial_gring(group, IntRing(), name="Z"))


def fixed_point_rationals(group: FiniteGroup) -> FixedPointTambara:
    return FixedPointTambara(group, trivial_gring(group, RatField(), name="Q"))


def fixed_point_residues(group: FiniteGroup, m: int) -> FixedPointTambara:
    """Fixed points of Z/m with trivial action; carries |G|-torsion when
    gcd(|G|, m) > 1, which the localization prechecks must detect."""
    return FixedPointTambara(group, trivial_gring(group, ZModRing(m), name=f"Z/{m}"))
