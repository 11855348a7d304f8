from __future__ import annotations

import itertools
import random
from fractions import Fraction as F

import pytest

from precubical import (
    NO_COARSEST,
    CubeChain,
    PrecubicalError,
    boundary_cube,
    chain_diagonal,
    coarsest_common_refinement,
    common_refinement_exists,
    elementary_refinements,
    enumerate_chains,
    euclidean,
    finest_chain,
    full_cube,
    is_strict,
    is_tame,
    refinement_set,
    refines,
    subordinate_to_collar,
    z_complex,
)
from precubical.chains import _ccr_brute
from precubical.dpath import path

from helpers import glued_squares, random_monotone_grid_path, random_strict_tame_path, random_two_facet_path

SQ = full_cube(2)
B3 = boundary_cube(3)
SQ_POSET = enumerate_chains(SQ, "v00", "v11", 2)
B3_POSET = enumerate_chains(B3, "v000", "v111", 3)


def chain(src, tgt, *cubes):
    return CubeChain(src, tgt, tuple(cubes))


def test_chain_validation():
    c = chain("v00", "v11", "*0", "1*")
    c.validate(SQ)
    assert c.vertex_sequence(SQ) == ("v00", "v10", "v11")
    assert c.length(SQ) == 2
    with pytest.raises(PrecubicalError):
        chain("v00", "v11", "0*", "*0").validate(SQ)
    with pytest.raises(PrecubicalError):
        chain("v00", "v11").validate(SQ)  # empty needs equal endpoints
    chain("v00", "v00").validate(SQ)


def test_elementary_refinements_of_a_square():
    refs = elementary_refinements(SQ, chain("v00", "v11", "**"))
    assert sorted(r.cubes for r in refs) == [("*0", "1*"), ("0*", "*1")]
    # splitting along axis set {1} freezes axis 1 first at 0 (left edge),
    # then the complement at 1 (top edge)
    assert ("0*", "*1") in {r.cubes for r in refs}
    assert elementary_refinements(SQ, chain("v00", "v10", "*0")) == []


def test_refinement_preserves_length_and_endpoints():
    for c in B3_POSET.objects:
        for r in elementary_refinements(B3, c):
            r.validate(B3)
            assert r.length(B3) == c.length(B3)
            assert (r.source, r.target) == (c.source, c.target)


def test_refines_basic():
    square = chain("v00", "v11", "**")
    br = chain("v00", "v11", "*0", "1*")
    lt = chain("v00", "v11", "0*", "*1")
    assert refines(SQ, square, square)
    assert refines(SQ, br, square)
    assert not refines(SQ, br, lt)
    assert not refines(SQ, square, br)


def test_refines_is_a_partial_order_on_desk_posets():
    for X, poset in ((SQ, SQ_POSET), (B3, B3_POSET)):
        objs = poset.objects
        rel = {(i, j): refines(X, a, b) for i, a in enumerate(objs) for j, b in enumerate(objs)}
        for i in range(len(objs)):
            assert rel[i, i]
        for i, j in itertools.permutations(range(len(objs)), 2):
            if rel[i, j] and rel[j, i]:
                assert objs[i] == objs[j]
        for i, j, k in itertools.product(range(len(objs)), repeat=3):
            if rel[i, j] and rel[j, k]:
                assert rel[i, k]


def test_enumerate_full_square():
    assert [c.cubes for c in SQ_POSET.objects] == [("**",), ("*0", "1*"), ("0*", "*1")]
    assert SQ_POSET.covers == ((0, 1), (0, 2))
    assert not SQ_POSET.truncated


def test_enumerate_boundary_cube_is_a_twelve_cycle():
    assert len(B3_POSET.objects) == 12
    assert not B3_POSET.truncated
    by_len = {}
    for c in B3_POSET.objects:
        by_len.setdefault(len(c.cubes), []).append(c)
    assert len(by_len[2]) == 6 and len(by_len[3]) == 6
    # cover graph: every coarse chain covers exactly 2, every fine chain is
    # covered by exactly 2, and the graph is a single 12-cycle
    deg = {i: 0 for i in range(12)}
    for a, b in B3_POSET.covers:
        deg[a] += 1
        deg[b] += 1
    assert all(d == 2 for d in deg.values())
    seen = {0}
    adj = {i: set() for i in range(12)}
    for a, b in B3_POSET.covers:
        adj[a].add(b)
        adj[b].add(a)
    frontier = [0]
    while frontier:
        cur = frontier.pop()
        for nxt in adj[cur]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    assert seen == set(range(12))


def test_enumerate_z_complex_truncates():
    Z = z_complex(2)
    poset = enumerate_chains(Z, "c0", "c0", 2)
    cubes = {c.cubes for c in poset.objects}
    assert ("c1",) in cubes and ("c1", "c1") in cubes and ("c2",) in cubes
    assert poset.truncated


def test_finest_chain_examples():
    diag = path([("**", [(0, (0, 0)), (1, (1, 1))])])
    assert finest_chain(SQ, diag).cubes == ("**",)
    bent = path([("**", [(0, (0, 0)), (F(1, 2), (F(1, 2), F(1, 5))), (1, (1, 1))])])
    assert finest_chain(SQ, bent).cubes == ("*0", "1*")
    const = path([("v00", [(0, ()), (1, ())])])
    assert finest_chain(SQ, const).cubes == ()


def test_finest_chain_requires_strictness():
    paused = path([("**", [(0, (0, 0)), (F(1, 3), (F(1, 4), F(1, 4))), (F(2, 3), (F(1, 4), F(1, 2))), (1, (1, 1))])])
    with pytest.raises(PrecubicalError):
        finest_chain(SQ, paused)


def test_subordinate_to_collar_examples():
    diag = path([("**", [(0, (0, 0)), (1, (1, 1))])])
    assert subordinate_to_collar(SQ, diag, chain("v00", "v11", "**"))
    assert not subordinate_to_collar(SQ, diag, chain("v00", "v11", "*0", "1*"))
    bent = path([("**", [(0, (0, 0)), (F(1, 2), (F(4, 5), F(1, 10))), (1, (1, 1))])])
    assert subordinate_to_collar(SQ, bent, chain("v00", "v11", "*0", "1*"))
    assert subordinate_to_collar(SQ, bent, chain("v00", "v11", "**"))
    assert not subordinate_to_collar(SQ, bent, chain("v00", "v11", "0*", "*1"))


def test_half_height_path_subordinate_to_nothing():
    # running along the half-height line of a horizontal strip touches no
    # collar chain at all
    E = euclidean([((0, 0), (1, 1)), ((1, 0), (2, 1))])
    p = path(
        [
            ("0,0|1,1", [(0, (0, 0)), (F(1, 4), (0, F(1, 2))), (F(1, 2), (1, F(1, 2)))]),
            ("1,0|2,1", [(F(1, 2), (0, F(1, 2))), (F(3, 4), (1, F(1, 2))), (1, (1, 1))]),
        ]
    )
    p.validate(E)
    poset = enumerate_chains(E, "0,0|0,0", "2,1|2,1", 3)
    assert len(poset.objects) > 0
    assert not any(subordinate_to_collar(E, p, c) for c in poset.objects)


def test_strict_path_subordinate_to_its_finest_chain():
    rng = random.Random(11)
    for _ in range(10):
        p = random_two_facet_path(B3, rng)
        fc = finest_chain(B3, p)
        assert subordinate_to_collar(B3, p, fc)


def test_chain_diagonal_is_strict_tame_and_subordinate():
    for c in B3_POSET.objects:
        d = chain_diagonal(B3, c)
        assert is_strict(B3, d) and is_tame(B3, d)[0]
        assert subordinate_to_collar(B3, d, c)
        assert finest_chain(B3, d).cubes == c.cubes


def test_ccr_reflexive_and_worked_example():
    byc = {c.cubes: c for c in B3_POSET.objects}
    a = byc[("**0", "11*")]
    assert coarsest_common_refinement(B3, a, a) == a
    b = byc[("*00", "1**")]
    r = coarsest_common_refinement(B3, a, b)
    assert r.cubes == ("*00", "1*0", "11*")
    # chains around opposite sides of the hexagon share nothing
    zxy = byc[("00*", "**1")]
    assert coarsest_common_refinement(B3, a, zxy) is None


def test_ccr_glued_squares_has_no_coarsest():
    GS = glued_squares()
    a = chain("v00", "v11", "sqA")
    b = chain("v00", "v11", "sqB")
    assert coarsest_common_refinement(GS, a, b) is NO_COARSEST


def test_ccr_recursive_matches_brute_force():
    fixtures = [
        (SQ, SQ_POSET),
        (B3, B3_POSET),
    ]
    E = euclidean([((i, j), (i + 1, j + 1)) for i in range(2) for j in range(2)])
    fixtures.append((E, enumerate_chains(E, "0,0|0,0", "2,2|2,2", 4)))
    for X, poset in fixtures:
        for a in poset.objects:
            for b in poset.objects:
                fast = coarsest_common_refinement(X, a, b)
                slow = _ccr_brute(X, a, b)
                assert fast == slow or fast is slow


def test_common_refinement_exists():
    byc = {c.cubes: c for c in B3_POSET.objects}
    trio = [byc[("**0", "11*")], byc[("*00", "1**")], byc[("*00", "1*0", "11*")]]
    assert common_refinement_exists(B3, trio)
    assert not common_refinement_exists(B3, [byc[("**0", "11*")], byc[("00*", "**1")]])
    assert common_refinement_exists(B3, [byc[("**0", "11*")]])


def test_refinement_sets_are_down_sets():
    for c in B3_POSET.objects:
        down = refinement_set(B3, c)
        for d in down:
            assert refines(B3, d, c)


def test_finest_chain_minimality_randomized():
    rng = random.Random(23)
    E = euclidean([((i, j), (i + 1, j + 1)) for i in range(2) for j in range(2)])
    E_POSET = enumerate_chains(E, "0,0|0,0", "2,2|2,2", 4)
    cases = []
    for _ in range(6):
        cases.append((SQ, SQ_POSET, random_strict_tame_path(SQ, rng.choice(SQ_POSET.objects), rng)))
        cases.append((B3, B3_POSET, random_two_facet_path(B3, rng)))
        cases.append((E, E_POSET, random_monotone_grid_path(E, (2, 2), rng)))
    for X, poset, p in cases:
        fc = finest_chain(X, p)
        hits = 0
        for c in poset.objects:
            if subordinate_to_collar(X, p, c):
                hits += 1
                assert refines(X, fc, c)
        assert hits >= 1


def test_enumerate_loop_free_same_endpoint_gives_empty_chain_only():
    poset = enumerate_chains(SQ, "v00", "v00", 2)
    assert [c.cubes for c in poset.objects] == [()]
    assert not poset.truncated


def test_enumerate_unreachable_target_is_empty():
    poset = enumerate_chains(SQ, "v11", "v00", 4)
    assert poset.objects == ()
    assert not poset.truncated


def test_enumerate_chains_on_self_linked_quotient_cube():
    from precubical import q_complex

    Q = q_complex(2)
    poset = enumerate_chains(Q, "q0_0", "q0_2", 2)
    assert [c.cubes for c in poset.objects] == [("q2_0",), ("q1_0", "q1_1")]
    # both axis splits of the quotient square collapse to the same pair
    assert poset.covers == ((0, 1),)
    refs = elementary_refinements(Q, poset.objects[0])
    assert len(refs) == 1
