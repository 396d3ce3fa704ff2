"""G-set category tests: orbits, pullbacks, dependent products, isos."""

from __future__ import annotations

import pytest

from tlab.errors import SectionBlowup
from tlab.gsets import (
    GMap,
    GSet,
    compose,
    coproduct,
    coset_projection,
    diagonal_complement,
    exponential,
    find_iso,
    free_orbit,
    from_free,
    gset_iso,
    identity_map,
    one_point,
    orbit_decompose,
    pullback,
    to_point,
    transitive,
)
from tlab.groups import Subgroup, all_subgroups, build_group, full_subgroup, trivial_subgroup


def sub_of_order(group, n, which=0):
    return [s for s in all_subgroups(group) if s.order == n][which]


# --- transitive G-sets -------------------------------------------------------


def test_transitive_free_c2():
    g = build_group("C2")
    x = transitive(g, trivial_subgroup(g))
    assert x.size == 2
    assert x.action[1] == (1, 0)


def test_transitive_s3_mod_c3_is_sign_action():
    g = build_group("S3")
    c3 = sub_of_order(g, 3)
    x = transitive(g, c3)
    assert x.size == 2
    for a in g.elements():
        expected = (0, 1) if a in c3 else (1, 0)
        assert x.action[a] == expected


def test_transitive_full_is_point():
    g = build_group("S3")
    assert transitive(g, full_subgroup(g)).size == 1


# --- orbit decomposition -----------------------------------------------------


def test_orbit_single_with_class():
    g = build_group("S3")
    h = sub_of_order(g, 2)
    x = transitive(g, h)
    d = orbit_decompose(x)
    assert len(d.orbits) == 1
    orb = d.orbits[0]
    assert orb.base == 0
    assert orb.stabilizer == h
    # transversal actually carries the base to each point
    for p, u in orb.transversal.items():
        assert x.action[u][orb.base] == p


def test_orbit_coproduct_concatenates():
    g = build_group("C2")
    whole, _ = coproduct([free_orbit(g), one_point(g)])
    d = orbit_decompose(whole)
    assert [o.stabilizer.order for o in d.orbits] == [1, 2]
    assert d.orbit_of == (0, 0, 1)


def test_orbit_double_swap_two_free_orbits():
    g = build_group("C2")
    x = GSet(g, [[0, 1, 2, 3], [1, 0, 3, 2]])
    d = orbit_decompose(x)
    assert len(d.orbits) == 2
    assert all(o.stabilizer.order == 1 for o in d.orbits)


# --- pullbacks ---------------------------------------------------------------


@pytest.mark.parametrize("token,order", [("C2", 2), ("S3", 2), ("S3", 3)])
def test_pullback_with_free_cover_is_free(token, order):
    # X ×_pt G/e decomposes as |X| copies of G/e
    g = build_group(token)
    h = sub_of_order(g, order)
    x = transitive(g, h)
    p, p1, p2 = pullback(to_point(x), to_point(free_orbit(g)))
    d = orbit_decompose(p)
    assert len(d.orbits) == x.size
    assert all(o.stabilizer.order == 1 for o in d.orbits)


def test_pullback_along_identity():
    g = build_group("S3")
    x = transitive(g, sub_of_order(g, 2))
    y = one_point(g)
    p, p1, p2 = pullback(to_point(x), identity_map(y))
    assert gset_iso(p, x) is not None


def test_pullback_c2_free_square():
    g = build_group("C2")
    f = to_point(free_orbit(g))
    p, p1, p2 = pullback(f, f)
    d = orbit_decompose(p)
    assert p.size == 4
    assert len(d.orbits) == 2
    assert all(o.stabilizer.order == 1 for o in d.orbits)


def test_pullback_universal_property_sample():
    # both composites agree, and the mediating map from a sample cone is unique
    g = build_group("S3")
    x = transitive(g, sub_of_order(g, 2))
    f = to_point(x)
    gmap = to_point(free_orbit(g))
    p, p1, p2 = pullback(f, gmap)
    assert [f.mapping[a] for a in p1.mapping] == [gmap.mapping[b] for b in p2.mapping]
    # cone: the free orbit with maps into both legs
    c1 = from_free(x)
    c2 = identity_map(free_orbit(g))
    mediators = []
    for i in range(p.size):
        cand = []
        ok = True
        for pt in range(free_orbit(g).size):
            want = (c1.mapping[pt], c2.mapping[pt])
            hits = [
                k
                for k in range(p.size)
                if (p1.mapping[k], p2.mapping[k]) == want
            ]
            if len(hits) != 1:
                ok = False
                break
            cand.append(hits[0])
        if ok:
            mediators.append(tuple(cand))
        break
    assert len(mediators) == 1
    GMap(free_orbit(g), p, mediators[0])  # equivariance validates


# --- diagonal complement ------------------------------------------------------


def test_diagonal_complement_injective_empty():
    g = build_group("S3")
    x = transitive(g, sub_of_order(g, 2))
    z, q1, q2 = diagonal_complement(identity_map(x))
    assert z.size == 0


def test_diagonal_complement_c2():
    g = build_group("C2")
    f = to_point(free_orbit(g))
    z, q1, q2 = diagonal_complement(f)
    assert z.size == 2
    assert gset_iso(z, free_orbit(g)) is not None
    # the two projections differ by the group flip
    assert [q2.mapping[i] for i in range(2)] == [1 - q1.mapping[i] for i in range(2)]


def test_diagonal_complement_c3():
    g = build_group("C3")
    f = to_point(free_orbit(g))
    z, q1, q2 = diagonal_complement(f)
    assert z.size == 6
    d = orbit_decompose(z)
    assert len(d.orbits) == 2
    assert all(o.stabilizer.order == 1 for o in d.orbits)


def test_diagonal_complement_completes_pullback():
    # X ⨿ Z with (id ∪ q1, id ∪ q2) is isomorphic to X ×_Y X over X
    g = build_group("S3")
    for h_order in (1, 2, 3):
        x = transitive(g, sub_of_order(g, h_order))
        f = to_point(x)
        p, p1, p2 = pullback(f, f)
        z, q1, q2 = diagonal_complement(f)
        assert z.size == p.size - x.size
        whole, (ix, iz) = coproduct([x, z])
        from tlab.gsets import copair

        j1 = copair([identity_map(x), q1], whole)
        assert find_iso(j1, p1) is not None


# --- exponential diagrams ----------------------------------------------------


def test_exponential_identity_section():
    g = build_group("S3")
    x = transitive(g, sub_of_order(g, 3))
    f = to_point(x)
    diag = exponential(f, identity_map(x))
    assert diag.b.size == 1
    assert gset_iso(diag.b, one_point(g)) is not None


def test_exponential_c2_four_sections():
    # A = G/e ⨿ G/e folded over G/e, f: G/e → G/G
    g = build_group("C2")
    free = free_orbit(g)
    a, (i1, i2) = coproduct([free, free])
    from tlab.gsets import copair

    p = copair([identity_map(free), identity_map(free)], a)
    diag = exponential(to_point(free), p)
    assert diag.b.size == 4
    d = orbit_decompose(diag.b)
    stabs = sorted(o.stabilizer.order for o in d.orbits)
    assert stabs == [1, 2, 2]
    # oracle: hand enumeration of the four sections and the swap action
    # sections pick a copy (1 or 2) for each of the two fiber points; the
    # group flip swaps the two coordinates, fixing (1,1) and (2,2).


def test_exponential_empty_sections():
    g = build_group("C2")
    free = free_orbit(g)
    from tlab.gsets import empty_gset

    a = empty_gset(g)
    p = GMap(a, free, [])
    diag = exponential(to_point(free), p)
    assert diag.b.size == 0


def test_exponential_fiber_counts():
    g = build_group("S3")
    x = transitive(g, sub_of_order(g, 2))
    free = free_orbit(g)
    a, _ = coproduct([free, transitive(g, sub_of_order(g, 2))])
    # map both summands onto x
    from tlab.gsets import copair

    m1 = GMap(free, x, [x.action[u][0] for u in _free_reps(g)])
    m2 = identity_map(x)
    p = copair([m1, m2], a)
    f = to_point(x)
    diag = exponential(f, p, max_sections=10**5)
    from math import prod

    for y in range(diag.y.size):
        fib = diag.f.fiber(y)
        expect = prod(len(p.fiber(xx)) for xx in fib)
        assert len(diag.q.fiber(y)) == expect
    # pentagon commutation: q∘rho = f∘p∘lam
    left = compose(diag.q, diag.rho)
    right = compose(diag.f, compose(diag.p, diag.lam))
    assert left.mapping == right.mapping


def _free_reps(g):
    free = free_orbit(g)
    d = orbit_decompose(free)
    return [d.orbits[0].transversal[i] for i in range(free.size)]


def test_exponential_blowup():
    g = build_group("C2")
    free = free_orbit(g)
    parts = [free] * 8
    a, _ = coproduct(parts, max_points=64)
    from tlab.gsets import copair

    p = copair([identity_map(free)] * 8, a)
    with pytest.raises(SectionBlowup):
        exponential(to_point(free), p, max_sections=10)


# --- isomorphism search -------------------------------------------------------


def test_find_iso_identity():
    g = build_group("S3")
    x = transitive(g, sub_of_order(g, 2))
    f = to_point(x)
    res = find_iso(f, f)
    assert res is not None
    alpha, beta = res
    assert compose(f, alpha).mapping == tuple(
        beta.mapping[v] for v in f.mapping
    )


def test_find_iso_relabelled_cosets():
    g = build_group("S3")
    h = sub_of_order(g, 2)
    x = transitive(g, h)
    # same orbit type with points cyclically relabelled
    perm = [1, 2, 0]
    inv = [perm.index(i) for i in range(3)]
    y = GSet(g, [[perm[x.action[a][inv[i]]] for i in range(3)] for a in g.elements()])
    iso = gset_iso(x, y)
    assert iso is not None
    for a in g.elements():
        for pt in range(3):
            assert iso.mapping[x.action[a][pt]] == y.action[a][iso.mapping[pt]]


def test_find_iso_size_mismatch():
    g = build_group("C2")
    assert find_iso(to_point(free_orbit(g)), to_point(one_point(g))) is None


def test_coset_projection():
    g = build_group("S3")
    k = sub_of_order(g, 2)
    proj = coset_projection(g, k, full_subgroup(g))
    assert proj.source.size == 3 and proj.target.size == 1
    c3 = sub_of_order(g, 3)
    proj2 = coset_projection(g, trivial_subgroup(g), c3)
    assert proj2.source.size == 6 and proj2.target.size == 2
