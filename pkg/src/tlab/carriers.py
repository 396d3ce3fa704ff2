"""Exact arithmetic carriers (commutative monoids and rings) and integer
lattice helpers.

Carriers hold no elements; they interpret raw values (ints, Fractions,
tuples) with decidable equality.  Decision procedures that a carrier cannot
support raise UndecidableCarrier rather than guessing.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import UndecidableCarrier


class Monoid:
    """Commutative monoid interface over raw hashable values."""

    name = "monoid"
    is_group = False
    is_cancellative = False

    def op(self, a, b):
        raise NotImplementedError

    def unit(self):
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return a == b

    def sample(self, rng):
        raise UndecidableCarrier(f"{self.name} has no sampler")

    def elements(self):
        raise UndecidableCarrier(f"{self.name} is not enumerable")

    def invert(self, a):
        """The inverse of a, or None."""
        raise UndecidableCarrier(f"{self.name} cannot test invertibility")

    def try_divide(self, s, x):
        """Some a with a·x = s, or None (completeness is carrier-specific)."""
        raise UndecidableCarrier(f"{self.name} cannot divide")

    def power(self, a, n: int):
        out = self.unit()
        for _ in range(n):
            out = self.op(out, a)
        return out


class Ring:
    """Commutative ring interface over raw hashable values."""

    name = "ring"
    is_field = False
    is_domain = False

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return self.eq(a, self.zero())

    def sample(self, rng):
        raise UndecidableCarrier(f"{self.name} has no sampler")

    def sample_unit(self, rng):
        raise UndecidableCarrier(f"{self.name} has no unit sampler")

    def is_unit(self, a) -> bool:
        return self.invert(a) is not None

    def invert(self, a):
        raise UndecidableCarrier(f"{self.name} cannot test invertibility")

    def is_zero_divisor(self, a) -> bool:
        raise UndecidableCarrier(f"{self.name} cannot test zero divisors")

    def has_torsion(self, n: int) -> bool:
        """Whether some nonzero x satisfies n·x = 0."""
        raise UndecidableCarrier(f"{self.name} cannot test torsion")

    def int_mul(self, n: int, a):
        out = self.zero()
        step = a if n >= 0 else self.neg(a)
        for _ in range(abs(n)):
            out = self.add(out, step)
        return out

    def power(self, a, n: int):
        out = self.one()
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def mult_monoid(self) -> "RingMulMonoid":
        return RingMulMonoid(self)

    def add_monoid(self) -> "RingAddMonoid":
        return RingAddMonoid(self)


# ---------------------------------------------------------------------------
# Concrete rings


class IntRing(Ring):
    name = "Z"
    is_domain = True

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def sample(self, rng):
        return rng.randint(-4, 4)

    def sample_unit(self, rng):
        return rng.choice((-1, 1))

    def invert(self, a):
        return a if a in (-1, 1) else None

    def is_zero_divisor(self, a):
        return a == 0

    def has_torsion(self, n):
        return False


class RatField(Ring):
    name = "Q"
    is_field = True
    is_domain = True

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return Fraction(a) + Fraction(b)

    def mul(self, a, b):
        return Fraction(a) * Fraction(b)

    def neg(self, a):
        return -Fraction(a)

    def eq(self, a, b):
        return Fraction(a) == Fraction(b)

    def sample(self, rng):
        return Fraction(rng.randint(-6, 6), rng.randint(1, 4))

    def sample_unit(self, rng):
        num = rng.choice([n for n in range(-6, 7) if n])
        return Fraction(num, rng.randint(1, 4))

    def invert(self, a):
        a = Fraction(a)
        return None if a == 0 else 1 / a

    def is_zero_divisor(self, a):
        return Fraction(a) == 0

    def has_torsion(self, n):
        return False


class ZModRing(Ring):
    """Z/mZ; the torsion carrier for fault-injection checks."""

    def __init__(self, m: int):
        self.m = m
        self.name = f"Z/{m}"

    def zero(self):
        return 0

    def one(self):
        return 1 % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def neg(self, a):
        return (-a) % self.m

    def sample(self, rng):
        return rng.randrange(self.m)

    def sample_unit(self, rng):
        units = [x for x in range(self.m) if gcd(x, self.m) == 1]
        return rng.choice(units)

    def invert(self, a):
        a %= self.m
        if gcd(a, self.m) != 1:
            return None
        return pow(a, -1, self.m)

    def is_zero_divisor(self, a):
        return gcd(a % self.m, self.m) != 1

    def has_torsion(self, n):
        return gcd(n, self.m) != 1

    def elements(self):
        return range(self.m)


class ProductRing(Ring):
    """Finite product of rings on tuple values."""

    def __init__(self, factors):
        self.factors = tuple(factors)
        self.name = "x".join(f.name for f in self.factors)
        self.is_field = len(self.factors) == 1 and self.factors[0].is_field
        self.is_domain = len(self.factors) == 1 and self.factors[0].is_domain

    def zero(self):
        return tuple(f.zero() for f in self.factors)

    def one(self):
        return tuple(f.one() for f in self.factors)

    def add(self, a, b):
        return tuple(f.add(x, y) for f, x, y in zip(self.factors, a, b))

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def neg(self, a):
        return tuple(f.neg(x) for f, x in zip(self.factors, a))

    def eq(self, a, b):
        return all(f.eq(x, y) for f, x, y in zip(self.factors, a, b))

    def sample(self, rng):
        return tuple(f.sample(rng) for f in self.factors)

    def sample_unit(self, rng):
        return tuple(f.sample_unit(rng) for f in self.factors)

    def invert(self, a):
        out = []
        for f, x in zip(self.factors, a):
            inv = f.invert(x)
            if inv is None:
                return None
            out.append(inv)
        return tuple(out)

    def is_zero_divisor(self, a):
        return any(f.is_zero_divisor(x) for f, x in zip(self.factors, a))

    def has_torsion(self, n):
        return any(f.has_torsion(n) for f in self.factors)


# ---------------------------------------------------------------------------
# Monoid views and concrete monoids


class RingMulMonoid(Monoid):
    def __init__(self, ring: Ring):
        self.ring = ring
        self.name = f"({ring.name},*)"

    def op(self, a, b):
        return self.ring.mul(a, b)

    def unit(self):
        return self.ring.one()

    def eq(self, a, b):
        return self.ring.eq(a, b)

    def sample(self, rng):
        return self.ring.sample(rng)

    def invert(self, a):
        return self.ring.invert(a)

    def try_divide(self, s, x):
        return ring_try_divide(self.ring, s, x)


class RingAddMonoid(Monoid):
    is_group = True
    is_cancellative = True

    def __init__(self, ring: Ring):
        self.ring = ring
        self.name = f"({ring.name},+)"

    def op(self, a, b):
        return self.ring.add(a, b)

    def unit(self):
        return self.ring.zero()

    def eq(self, a, b):
        return self.ring.eq(a, b)

    def sample(self, rng):
        return self.ring.sample(rng)

    def invert(self, a):
        return self.ring.neg(a)


def ring_try_divide(ring: Ring, s, x):
    """Some a with a·x = s in a supported ring, else None."""
    if isinstance(ring, IntRing):
        if x == 0:
            return 1 if s == 0 else None
        return s // x if s % x == 0 else None
    if ring.is_field:
        if ring.is_zero(x):
            return ring.one() if ring.is_zero(s) else None
        return ring.mul(s, ring.invert(x))
    if isinstance(ring, ZModRing):
        for a in range(ring.m):
            if ring.mul(a, x) == s % ring.m:
                return a
        return None
    if isinstance(ring, ProductRing):
        out = []
        for f, sv, xv in zip(ring.factors, s, x):
            a = ring_try_divide(f, sv, xv)
            if a is None:
                return None
            out.append(a)
        return tuple(out)
    raise UndecidableCarrier(f"{ring.name} cannot divide")


class IntMulMonoid(Monoid):
    name = "(Z,*)"
    is_cancellative = False  # 0 breaks cancellation

    def op(self, a, b):
        return a * b

    def unit(self):
        return 1

    def sample(self, rng):
        return rng.randint(-4, 4)

    def invert(self, a):
        return a if a in (-1, 1) else None

    def try_divide(self, s, x):
        if x == 0:
            return 1 if s == 0 else None
        return s // x if s % x == 0 else None


class NatAddMonoid(Monoid):
    name = "(N,+)"
    is_cancellative = True

    def op(self, a, b):
        return a + b

    def unit(self):
        return 0

    def sample(self, rng):
        return rng.randint(0, 6)

    def invert(self, a):
        return 0 if a == 0 else None

    def try_divide(self, s, x):
        return s - x if s >= x else None


class TableMonoid(Monoid):
    """Finite commutative monoid from an explicit table; element 0 the unit."""

    def __init__(self, table, name="finite-monoid"):
        self.table = tuple(tuple(row) for row in table)
        self.name = name
        n = len(self.table)
        assert all(self.table[0][j] == j for j in range(n)), "element 0 must be the unit"
        assert all(
            self.table[i][j] == self.table[j][i] for i in range(n) for j in range(n)
        ), "monoid must be commutative"
        assert all(
            self.table[self.table[i][j]][k] == self.table[i][self.table[j][k]]
            for i in range(n)
            for j in range(n)
            for k in range(n)
        ), "monoid must be associative"
        self.is_cancellative = all(
            len({self.table[i][j] for j in range(n)}) == n for i in range(n)
        )

    def op(self, a, b):
        return self.table[a][b]

    def unit(self):
        return 0

    def sample(self, rng):
        return rng.randrange(len(self.table))

    def elements(self):
        return range(len(self.table))

    def invert(self, a):
        for b in range(len(self.table)):
            if self.table[a][b] == 0:
                return b
        return None

    def try_divide(self, s, x):
        for a in range(len(self.table)):
            if self.table[a][x] == s:
                return a
        return None


class ProductMonoid(Monoid):
    def __init__(self, factors):
        self.factors = tuple(factors)
        self.name = "x".join(f.name for f in self.factors)
        self.is_group = all(f.is_group for f in self.factors)
        self.is_cancellative = all(f.is_cancellative for f in self.factors)

    def op(self, a, b):
        return tuple(f.op(x, y) for f, x, y in zip(self.factors, a, b))

    def unit(self):
        return tuple(f.unit() for f in self.factors)

    def eq(self, a, b):
        return all(f.eq(x, y) for f, x, y in zip(self.factors, a, b))

    def sample(self, rng):
        return tuple(f.sample(rng) for f in self.factors)

    def invert(self, a):
        out = []
        for f, x in zip(self.factors, a):
            inv = f.invert(x)
            if inv is None:
                return None
            out.append(inv)
        return tuple(out)

    def try_divide(self, s, x):
        out = []
        for f, sv, xv in zip(self.factors, s, x):
            a = f.try_divide(sv, xv)
            if a is None:
                return None
            out.append(a)
        return tuple(out)


class GroupCompletionMonoid(Monoid):
    """Formal differences (p, n) of a commutative monoid, up to stable equality.

    (a,b) = (c,d) iff a+d+u = c+b+u for some u.  Equality is complete for
    cancellative bases (drop u) and for finite enumerable bases (scan u).
    """

    is_group = True
    is_cancellative = True

    def __init__(self, base: Monoid):
        self.base = base
        self.name = f"K0({base.name})"

    def op(self, a, b):
        return (self.base.op(a[0], b[0]), self.base.op(a[1], b[1]))

    def unit(self):
        u = self.base.unit()
        return (u, u)

    def eq(self, a, b):
        cross1 = self.base.op(a[0], b[1])
        cross2 = self.base.op(b[0], a[1])
        if self.base.is_cancellative:
            return self.base.eq(cross1, cross2)
        if self.base.eq(cross1, cross2):
            return True
        for u in self.base.elements():
            if self.base.eq(self.base.op(cross1, u), self.base.op(cross2, u)):
                return True
        return False

    def sample(self, rng):
        return (self.base.sample(rng), self.base.sample(rng))

    def invert(self, a):
        return (a[1], a[0])

    def embed(self, x):
        return (x, self.base.unit())


class UnitGroupMonoid(Monoid):
    """The group of invertible elements of a monoid."""

    is_group = True
    is_cancellative = True

    def __init__(self, base: Monoid):
        self.base = base
        self.name = f"{base.name}^x"

    def op(self, a, b):
        return self.base.op(a, b)

    def unit(self):
        return self.base.unit()

    def eq(self, a, b):
        return self.base.eq(a, b)

    def invert(self, a):
        inv = self.base.invert(a)
        if inv is None:
            raise UndecidableCarrier("value is not a unit of the base monoid")
        return inv

    def contains(self, a) -> bool:
        return self.base.invert(a) is not None

    def sample(self, rng):
        # rejection-sample units from the base
        for _ in range(64):
            x = self.base.sample(rng)
            if self.base.invert(x) is not None:
                return x
        return self.unit()

    def elements(self):
        return [x for x in self.base.elements() if self.base.invert(x) is not None]


class ProductCarrier(Ring):
    """Componentwise ring structure over a tuple of level carriers.

    The evaluation of a functor at a disjoint union of orbits.
    """

    def __init__(self, parts):
        self.parts = tuple(parts)
        self.name = "(" + " x ".join(p.name for p in self.parts) + ")"
        self.is_field = all(p.is_field for p in self.parts)
        self.is_domain = len(self.parts) == 1 and self.parts[0].is_domain

    def zero(self):
        return tuple(p.zero() for p in self.parts)

    def one(self):
        return tuple(p.one() for p in self.parts)

    def add(self, a, b):
        return tuple(p.add(x, y) for p, x, y in zip(self.parts, a, b))

    def mul(self, a, b):
        return tuple(p.mul(x, y) for p, x, y in zip(self.parts, a, b))

    def neg(self, a):
        return tuple(p.neg(x) for p, x in zip(self.parts, a))

    def eq(self, a, b):
        return all(p.eq(x, y) for p, x, y in zip(self.parts, a, b))

    def sample(self, rng):
        return tuple(p.sample(rng) for p in self.parts)

    def invert(self, a):
        out = []
        for p, x in zip(self.parts, a):
            inv = p.invert(x)
            if inv is None:
                return None
            out.append(inv)
        return tuple(out)

    def is_zero_divisor(self, a):
        return any(p.is_zero_divisor(x) for p, x in zip(self.parts, a))


# ---------------------------------------------------------------------------
# Integer lattices (row-style Hermite normal form)


def hnf(rows) -> tuple[tuple[int, ...], ...]:
    """Canonical Hermite normal form of the row lattice spanned by `rows`.

    Pivots are positive, entries above each pivot lie in [0, pivot).  The
    result is a canonical basis: two generating sets span the same lattice
    iff their HNFs are equal.
    """
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return ()
    m, n = len(mat), len(mat[0])
    r = 0
    for c in range(n):
        while True:
            nz = [i for i in range(r, m) if mat[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(mat[i][c]))
            mat[r], mat[i0] = mat[i0], mat[r]
            if mat[r][c] < 0:
                mat[r] = [-v for v in mat[r]]
            done = True
            for i in range(r + 1, m):
                if mat[i][c]:
                    q = mat[i][c] // mat[r][c]
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[r])]
                    if mat[i][c]:
                        done = False
            if done:
                break
        if any(mat[i][c] for i in range(r, m)):
            for i in range(r):
                q = mat[i][c] // mat[r][c]
                if q:
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[r])]
            r += 1
            if r == m:
                break
    return tuple(tuple(row) for row in mat[:r] if any(row))


def solve_integer_combination(vectors, target):
    """Integer coefficients c with sum c_i·vectors[i] = target, or None."""
    vectors = [tuple(v) for v in vectors]
    target = list(target)
    if not vectors:
        return () if not any(target) else None
    n = len(vectors[0])
    k = len(vectors)
    aug = [list(v) + [1 if i == j else 0 for j in range(k)] for i, v in enumerate(vectors)]
    h = _hnf_rows(aug)
    coeffs = [0] * k
    for row in h:
        front = row[:n]
        piv = next((c for c in range(n) if front[c]), None)
        if piv is None:
            continue
        if target[piv] == 0:
            continue
        if target[piv] % front[piv]:
            return None
        q = target[piv] // front[piv]
        for c in range(n):
            target[c] -= q * front[c]
        for j in range(k):
            coeffs[j] += q * row[n + j]
    if any(target):
        return None
    return tuple(coeffs)


def _hnf_rows(mat_rows):
    """HNF where only the leading block drives pivoting (keeps the tail exact)."""
    mat = [list(r) for r in mat_rows]
    if not mat:
        return []
    m = len(mat)
    n = len(mat[0])
    # pivot only on the original column range passed in by the caller: all
    # columns participate, which is still a valid HNF of the augmented lattice
    r = 0
    for c in range(n):
        while True:
            nz = [i for i in range(r, m) if mat[i][c]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(mat[i][c]))
            mat[r], mat[i0] = mat[i0], mat[r]
            if mat[r][c] < 0:
                mat[r] = [-v for v in mat[r]]
            done = True
            for i in range(r + 1, m):
                if mat[i][c]:
                    q = mat[i][c] // mat[r][c]
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[r])]
                    if mat[i][c]:
                        done = False
            if done:
                break
        if any(mat[i][c] for i in range(r, m)):
            r += 1
            if r == m:
                break
    return mat


def lattice_contains(basis, v) -> bool:
    """Whether v lies in the integer row span of `basis`."""
    return solve_integer_combination(basis, v) is not None


def lattice_equal(basis_a, basis_b) -> bool:
    return hnf(basis_a) == hnf(basis_b)


def kernel_basis(matrix_rows) -> tuple[tuple[int, ...], ...]:
    """Basis of the full integer kernel {v : M v = 0} for M given by rows.

    Row-reduces the augmented lattice {(M^T applied, coordinates)}; rows whose
    leading block vanishes exhibit kernel vectors, and they generate the whole
    kernel lattice because unimodular row operations preserve it.
    """
    rows = [list(r) for r in matrix_rows]
    if not rows:
        return ()
    m = len(rows)
    n = len(rows[0])
    # columns of M as leading blocks
    aug = []
    for j in range(n):
        aug.append([rows[i][j] for i in range(m)] + [1 if j == t else 0 for t in range(n)])
    h = _hnf_rows(aug)
    out = []
    for row in h:
        if not any(row[:m]) and any(row[m:]):
            out.append(tuple(row[m:]))
    return hnf(out)
