"""The Burnside Tambara functor: levels are free integer modules on
conjugacy classes of subgroups, with the table of marks as an exact,
injective coordinate system.

Restriction and additive transfer act on the class basis directly.
Multiplication of basis classes is computed honestly from the category:
realize both classes as G-sets over the coset space, pull back, decompose.
The multiplicative transfer of an arbitrary (possibly virtual) element is
computed through marks: the mark of a norm is the product of marks of the
argument over double cosets, and the result is solved back to integer
coordinates, which always succeeds.  Norms of effective elements are also
computable by direct section enumeration over a dependent product; the two
routes are cross-checked in the test suite.
"""

from __future__ import annotations

from functools import lru_cache

from .carriers import Ring, solve_integer_combination
from .errors import LevelMismatch
from .groups import (
    FiniteGroup,
    Subgroup,
    conjugate_and_intersect,
    coset_reps,
    double_coset_reps,
    subgroup_classes,
)
from .gsets import (
    GMap,
    GSet,
    compose,
    coproduct,
    copair,
    coset_projection,
    empty_gset,
    exponential,
    orbit_decompose,
    pullback,
    transitive,
)
from .mackey import Element
from .tambara import TambaraFunctor, TambaraMorphism


class BurnsideLevel(Ring):
    """Integer vectors over the subgroup classes of one level."""

    is_domain = False

    def __init__(self, functor: "BurnsideFunctor", sub: Subgroup):
        self.functor = functor
        self.subgroup = sub
        self.classes = subgroup_classes(sub)
        self.dim = len(self.classes.representatives)
        self.name = f"A({len(sub.members)})@{sub.members}"
        self.is_domain = self.dim == 1

    def zero(self):
        return (0,) * self.dim

    def one(self):
        return self.functor.unit_vector(self.subgroup)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        out = [0] * self.dim
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                prod = self.functor.basis_product(self.subgroup, i, j)
                for k, ck in enumerate(prod):
                    out[k] += ai * bj * ck
        return tuple(out)

    def sample(self, rng):
        return tuple(rng.randint(-3, 3) for _ in range(self.dim))

    def sample_unit(self, rng):
        return self.one() if rng.random() < 0.75 else self.neg(self.one())

    def basis(self):
        out = []
        for k in range(self.dim):
            v = [0] * self.dim
            v[k] = 1
            out.append(tuple(v))
        return out

    def invert(self, a):
        # units are exactly the vectors with all marks ±1, and they square to one
        marks = self.functor.to_marks(self.subgroup, a)
        if all(m in (-1, 1) for m in marks):
            return a
        return None

    def is_zero_divisor(self, a):
        return any(m == 0 for m in self.functor.to_marks(self.subgroup, a))

    def has_torsion(self, n):
        return False

    def try_divide(self, s, x):
        """Solve a·x = s exactly over the integer lattice."""
        cols = [self.mul(x, e) for e in self.basis()]
        coeffs = solve_integer_combination(cols, s)
        return coeffs if coeffs is None else tuple(coeffs)


class BurnsideFunctor(TambaraFunctor):
    def __init__(self, group: FiniteGroup):
        self.group = group
        self.name = f"Burnside[{group.name}]"
        self._levels = {}
        self._products = {}
        self._marks = {}
        self._norm_cache = {}

    # --- levels and marks ---

    def level(self, sub: Subgroup) -> BurnsideLevel:
        if sub not in self._levels:
            self._levels[sub] = BurnsideLevel(self, sub)
        return self._levels[sub]

    def probe(self, x: GSet, rng, k: int = 2) -> list:
        """Zero, one, every per-orbit basis class, and k random vectors; the
        basis makes additive-law checks complete by linearity."""
        d = orbit_decompose(x)
        out = [self.zero(x), self.one(x)]
        for i, orbit in enumerate(d.orbits):
            zeros = [self.level(o.stabilizer).zero() for o in d.orbits]
            for bvec in self.level(orbit.stabilizer).basis():
                parts = list(zeros)
                parts[i] = bvec
                out.append(Element(x, tuple(parts)))
        for _ in range(k):
            out.append(self.sample(x, rng))
        return out

    def unit_vector(self, sub: Subgroup):
        classes = subgroup_classes(sub)
        v = [0] * len(classes.representatives)
        v[classes.index_of(sub)] = 1
        return tuple(v)

    def basis_vector(self, sub: Subgroup, k: Subgroup):
        classes = subgroup_classes(sub)
        v = [0] * len(classes.representatives)
        v[classes.index_of(k)] = 1
        return tuple(v)

    def marks_table(self, sub: Subgroup):
        """Row L, column K: the number of K-cosets in `sub` fixed by L."""
        if sub in self._marks:
            return self._marks[sub]
        classes = subgroup_classes(sub)
        reps = classes.representatives
        table = []
        for low in reps:
            row = []
            for k in reps:
                count = 0
                for rep in coset_reps(sub, k):
                    conj = k.conjugate(rep)
                    if all(m in conj for m in low.members):
                        count += 1
                row.append(count)
            table.append(tuple(row))
        out = tuple(table)
        self._marks[sub] = out
        return out

    def mark_at(self, sub: Subgroup, low: Subgroup, vec) -> int:
        """The mark of `vec` at the subgroup `low` ≤ `sub`."""
        classes = subgroup_classes(sub)
        row = self.marks_table(sub)[classes.index_of(low)]
        return sum(r * v for r, v in zip(row, vec))

    def to_marks(self, sub: Subgroup, vec) -> tuple[int, ...]:
        table = self.marks_table(sub)
        return tuple(sum(r * v for r, v in zip(row, vec)) for row in table)

    def from_marks(self, sub: Subgroup, marks) -> tuple[int, ...]:
        cols = [tuple(row[k] for row in self.marks_table(sub))
                for k in range(len(self.marks_table(sub)))]
        coeffs = solve_integer_combination(cols, marks)
        if coeffs is None:
            raise AssertionError("mark vector does not come from an integer class vector")
        return tuple(coeffs)

    # --- level structure maps ---

    def res_level(self, upper, lower, value):
        out = [0] * self.level(lower).dim
        upper_classes = subgroup_classes(upper)
        lower_classes = subgroup_classes(lower)
        for idx, coeff in enumerate(value):
            if not coeff:
                continue
            l = upper_classes.representatives[idx]
            for rep in double_coset_reps(upper, lower, l):
                stab = conjugate_and_intersect(lower, rep, l)
                out[lower_classes.index_of(stab)] += coeff
        return tuple(out)

    def tr_level(self, upper, lower, value):
        out = [0] * self.level(upper).dim
        lower_classes = subgroup_classes(lower)
        upper_classes = subgroup_classes(upper)
        for idx, coeff in enumerate(value):
            if not coeff:
                continue
            l = lower_classes.representatives[idx]
            out[upper_classes.index_of(l)] += coeff
        return tuple(out)

    def nm_level(self, upper, lower, value):
        """Multiplicative transfer through marks: the mark at L of the norm
        is the product over double cosets LhK of the mark at h^-1Lh ∩ K."""
        key = (upper, lower, tuple(value))
        if key in self._norm_cache:
            return self._norm_cache[key]
        group = self.group
        upper_classes = subgroup_classes(upper)
        marks = []
        for low in upper_classes.representatives:
            m = 1
            for rep in double_coset_reps(upper, low, lower):
                inner = conjugate_and_intersect(lower, group.inverse[rep], low)
                m *= self.mark_at(lower, inner, value)
            marks.append(m)
        out = self.from_marks(upper, tuple(marks))
        self._norm_cache[key] = out
        return out

    def conj_level(self, g, sub, value):
        target = sub.conjugate(g)
        classes = subgroup_classes(sub)
        target_classes = subgroup_classes(target)
        out = [0] * len(target_classes.representatives)
        for idx, coeff in enumerate(value):
            if not coeff:
                continue
            l = classes.representatives[idx]
            out[target_classes.index_of(l.conjugate(g))] += coeff
        return tuple(out)

    # --- honest products via pullback + orbit decomposition ---

    def basis_product(self, sub: Subgroup, i: int, j: int):
        key = (sub, i, j) if i <= j else (sub, j, i)
        if key in self._products:
            return self._products[key]
        classes = subgroup_classes(sub)
        base = transitive(self.group, sub)
        pi = self.realize_basis(sub, classes.representatives[key[1]])
        pj = self.realize_basis(sub, classes.representatives[key[2]])
        p, pr1, pr2 = pullback(pi, pj)
        over = compose(pi, pr1)
        vec = self.class_vector(over).parts[0]
        self._products[key] = vec
        return vec

    def realize_basis(self, sub: Subgroup, k: Subgroup) -> GMap:
        """The coset space of k over the coset space of `sub` (k ≤ sub)."""
        return coset_projection(self.group, k, sub)

    def class_vector(self, p: GMap) -> Element:
        """Canonical class of a G-set over X: per X-orbit, count the classes
        of shifted stabilizers of the A-orbits above it."""
        a, x = p.source, p.target
        dx = orbit_decompose(x)
        da = orbit_decompose(a)
        vectors = []
        for orbit in dx.orbits:
            vectors.append([0] * len(subgroup_classes(orbit.stabilizer).representatives))
        for orb in da.orbits:
            img = p.mapping[orb.base]
            jx = dx.orbit_of[img]
            xo = dx.orbits[jx]
            u = xo.transversal[img]
            shifted = orb.stabilizer.conjugate(self.group.inverse[u])
            classes = subgroup_classes(xo.stabilizer)
            vectors[jx][classes.index_of(shifted)] += 1
        return Element(x, tuple(tuple(v) for v in vectors))

    def realize(self, elem: Element):
        """A G-set over the element's base realizing an effective class."""
        x = elem.gset
        dx = orbit_decompose(x)
        parts = []
        legs = []
        for orbit, vec in zip(dx.orbits, elem.parts):
            if any(c < 0 for c in vec):
                raise LevelMismatch("only effective classes can be realized")
            classes = subgroup_classes(orbit.stabilizer)
            for k_idx, count in enumerate(vec):
                k = classes.representatives[k_idx]
                for _ in range(count):
                    w = transitive(self.group, k)
                    reps = [orbit_decompose(w).orbits[0].transversal[i] for i in range(w.size)]
                    leg = GMap(w, x, [x.action[r][orbit.base] for r in reps])
                    parts.append(w)
                    legs.append(leg)
        if not parts:
            a = empty_gset(self.group)
            return GMap(a, x, [])
        whole, _ = coproduct(parts, max_points=None if len(parts) < 8 else 10**6)
        return copair(legs, whole)

    def norm_via_sections(self, f: GMap, elem: Element, max_sections: int = 10**5) -> Element:
        """Independent route for norms of effective classes: enumerate the
        sections of the realization over the dependent product."""
        p = self.realize(elem)
        diag = exponential(f, p, max_sections=max_sections)
        return self.class_vector(diag.q)

    def transfer_via_composition(self, f: GMap, elem: Element) -> Element:
        p = self.realize(elem)
        return self.class_vector(compose(f, p))

    def restrict_via_pullback(self, f: GMap, elem: Element) -> Element:
        p = self.realize(elem)
        pb, pr1, pr2 = pullback(p, f)
        return self.class_vector(pr2)


@lru_cache(maxsize=None)
def burnside(group: FiniteGroup) -> BurnsideFunctor:
    return BurnsideFunctor(group)


# ---------------------------------------------------------------------------
# Marks morphism into the integer fixed-point functor


def index_weights(sub: Subgroup) -> tuple[int, ...]:
    """|H:K| for each class representative K of the level at H."""
    classes = subgroup_classes(sub)
    return tuple(len(sub.members) // len(k.members) for k in classes.representatives)


def marks_morphism(group: FiniteGroup) -> TambaraMorphism:
    """The index-weighted count sending each class to the size of its fiber
    over the base point; the level kernel is exactly the kernel of the
    free-orbit restriction."""
    from .fixedpoint import fixed_point_integers

    omega = burnside(group)
    p_z = fixed_point_integers(group)

    def level_map(sub, vec):
        w = index_weights(sub)
        return sum(wi * vi for wi, vi in zip(w, vec))

    return TambaraMorphism(omega, p_z, level_map, name="marks")
