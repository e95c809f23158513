"""Certifier checks: MIS, beta assignment, witnesses, projected multigraph."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from rainbowfree.certifier import (
    Bipartition,
    CertifierError,
    ColoredMultigraph,
    MISLimitError,
    RainbowFamilyError,
    bipartition,
    build_beta,
    build_tb,
    build_witness,
    certify,
    check_eq1,
    check_eq2,
    check_master_chain,
    check_matched_pairs,
    check_step1,
    check_tb_properties,
    max_independent_set,
    render_report,
)
from rainbowfree.constructions import doubled_nine, pair_family, t_star
from rainbowfree.family import MULTISET, family_from_triangles, union_graph
from rainbowfree.rainbow import verify_certificate

from oracles import brute_max_independent_sets, random_family


def test_mis_matches_brute_force_on_random_graphs():
    rng = random.Random(515)
    for _ in range(200):
        n = rng.randint(2, 10)
        f = random_family(rng, n, 7, MULTISET)
        g = union_graph(f)
        got = max_independent_set(g)
        best = brute_max_independent_sets(n, list(g.edges))
        assert got == best[0]  # size-maximal and lex-least


def test_mis_empty_graph_takes_everything():
    g = union_graph(family_from_triangles(5, []))
    assert max_independent_set(g) == (0, 1, 2, 3, 4)


def test_mis_vertex_limit():
    g = union_graph(family_from_triangles(70, [(0, 1, 2)]))
    with pytest.raises(MISLimitError):
        max_independent_set(g, limit=64)


def test_bipartition_t_star8():
    p = bipartition(union_graph(t_star(8)))
    assert p.a == (4, 5, 6, 7)
    assert p.b == (0, 1, 2, 3)
    assert p.e_b == ((0, 1), (2, 3))


def test_beta_prefers_the_shared_b_edge():
    f = t_star(8)
    p = bipartition(union_graph(f))
    beta = build_beta(f, p)
    # every member projects to its pair edge, four copies each
    assert sorted(beta.d.items()) == [((0, 1), 4), ((2, 3), 4)]
    assert all(e in ((0, 1), (2, 3)) for e in beta.beta.values())


def test_beta_requires_a_b_edge():
    # A = {0, 3}: member (0,1,2) has B-edge (1,2); member (0,1,3) has none
    f = family_from_triangles(4, [(0, 1, 2), (0, 1, 3)])
    p = Bipartition(a=(0, 3), b=(1, 2), e_b=((1, 2),))
    with pytest.raises(CertifierError):
        build_beta(f, p)


def test_eq1_counts_every_copy_twice():
    for f in (t_star(8), pair_family(7, 2, 3), doubled_nine()):
        support = f if f.mode == "set" else family_from_triangles(
            f.n, list(f.support), "set"
        )
        p = bipartition(union_graph(support))
        beta = build_beta(support, p)
        ok, value = check_eq1(support, p, beta)
        assert ok and value == 2 * support.size


def test_witnesses_on_t_star8():
    f = t_star(8)
    p = bipartition(union_graph(f))
    beta = build_beta(f, p)
    for b in p.b:
        w = build_witness(f, p, beta, b)
        assert len(w.i_b) == sum(beta.d.get(e, 0) for e in p.e_b if b in e)
        assert set(w.i_b) <= set(p.a)


def test_witness_pick_collision_on_doubled_member():
    # both copies of the doubled member contribute to (1,2) and both
    # pick the outside vertex 6
    f = family_from_triangles(7, [(1, 2, 6, 2)], MULTISET)
    p = Bipartition(a=(0, 3, 4, 5, 6), b=(1, 2), e_b=((1, 2),))
    beta = build_beta(f, p)
    assert beta.d[(1, 2)] == 2
    with pytest.raises(CertifierError, match="collide"):
        build_witness(f, p, beta, 1)


def test_witness_dependence_is_reported():
    # picks 2 and 3 for b=1 are joined by the edge of member (0,2,3)
    f = family_from_triangles(7, [(1, 2, 5), (1, 3, 6), (0, 2, 3)])
    p = Bipartition(a=(0, 4, 5, 6), b=(1, 2, 3), e_b=((1, 2), (1, 3), (2, 3)))
    beta = build_beta(f, p)
    with pytest.raises(CertifierError, match="not independent"):
        build_witness(f, p, beta, 1)


def test_eq2_rows_track_tightness():
    f = t_star(8)
    p = bipartition(union_graph(f))
    beta = build_beta(f, p)
    ok, rows = check_eq2(f, p, beta)
    assert ok
    assert rows == ((0, 4, True), (1, 4, True), (2, 4, True), (3, 4, True))


def test_master_chain_values():
    f = pair_family(5, 1, 3)
    p = bipartition(union_graph(f))
    ok, (lhs, mid, rhs) = check_master_chain(f, p)
    assert ok and (lhs, mid, rhs) == (6, 6, Fraction(25, 4))
    one = family_from_triangles(3, [(0, 1, 2)])
    ok, (lhs, mid, rhs) = check_master_chain(one, bipartition(union_graph(one)))
    assert ok and (lhs, mid, rhs) == (2, 2, Fraction(9, 4))


def test_step1_false_on_hub_with_pendants():
    # the hub triangle keeps all three vertices in B because the MIS
    # prefers pendant vertices; not extremal, so the verdict still passes
    members = [(0, 1, 2)]
    nxt = 3
    for v in (0, 1, 2):
        for _ in range(2):
            members.append((v, nxt, nxt + 1))
            nxt += 2
    f = family_from_triangles(15, members)
    r = certify(f)
    assert not r.step1_holds
    assert r.tb_properties is None and r.matched_pairs is None
    assert not r.extremal and r.verdict


def test_certify_t_star_all_true():
    r = certify(t_star(8))
    assert r.size == 8 and r.support_size == 8
    assert r.eq1_holds and r.eq1_value == 16
    assert r.eq2_holds and r.chain_holds
    assert r.chain_values == (16, 16, Fraction(16))
    assert r.step1_holds and r.tb_properties == (True, True, True, True)
    assert r.matched_pairs and r.extremal and r.is_tstar
    assert r.verdict


def test_certify_non_extremal_pass():
    # step1 holds here, so the projection is still analyzed: its degree
    # and matched-pairs checks fail, which a non-extremal verdict ignores
    r = certify(pair_family(7, 2, 3))
    assert r.verdict and not r.extremal
    assert r.is_tstar is None
    assert r.step1_holds
    assert r.tb_properties == (True, True, True, False)
    assert r.matched_pairs is False


def test_certify_multiset_uses_support():
    r = certify(doubled_nine())
    assert r.mode == MULTISET and r.size == 12 and r.support_size == 6
    assert r.eq1_value == 12
    assert r.verdict and not r.extremal


def test_certify_empty_family():
    # A swallows every vertex, so B and all the sums are empty
    r = certify(family_from_triangles(4, []))
    assert r.verdict and r.chain_values == (0, 0, Fraction(4))


def test_certify_rejects_rainbow_input():
    f = family_from_triangles(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    with pytest.raises(RainbowFamilyError) as exc_info:
        certify(f)
    cert = exc_info.value.certificate
    assert verify_certificate(f, cert)


def test_tb_properties_on_constructed_violations():
    # P1: a triangle in the simple graph
    g = ColoredMultigraph(
        vertices=(0, 1, 2),
        edges=(((0, 1), 9), ((0, 2), 8), ((1, 2), 7)),
        m=2,
    )
    p1, _, _, p4 = check_tb_properties(g)
    assert not p1 and p4
    # P2: 3-edge path with equal end colors
    g = ColoredMultigraph(
        vertices=(0, 1, 2, 3),
        edges=(((0, 1), 9), ((1, 2), 8), ((2, 3), 9)),
        m=2,
    )
    _, p2, _, _ = check_tb_properties(g)
    assert not p2
    # same shape with distinct end colors passes P2
    g = ColoredMultigraph(
        vertices=(0, 1, 2, 3),
        edges=(((0, 1), 9), ((1, 2), 8), ((2, 3), 7)),
        m=2,
    )
    _, p2, _, _ = check_tb_properties(g)
    assert p2
    # P3: same-colored edges meet at a vertex and one is doubled
    g = ColoredMultigraph(
        vertices=(0, 1, 2),
        edges=(((0, 1), 9), ((0, 1), 8), ((1, 2), 9)),
        m=3,
    )
    _, _, p3, _ = check_tb_properties(g)
    assert not p3
    # P4: degree deficit
    g = ColoredMultigraph(vertices=(0, 1, 2), edges=(((0, 1), 9),), m=1)
    _, _, _, p4 = check_tb_properties(g)
    assert not p4


def _mg(vertices, edges, m):
    return ColoredMultigraph(vertices=vertices, edges=edges, m=m)


def test_matched_pairs_cases():
    # m = |B| = 4: two pairs, each carrying all four colors
    full = tuple(((0, 1), c) for c in (8, 9, 10, 11)) + tuple(
        ((2, 3), c) for c in (8, 9, 10, 11)
    )
    assert check_matched_pairs(_mg((0, 1, 2, 3), full, 4))
    # palette differs between the pairs
    skew = full[:7] + (((2, 3), 12),)
    assert not check_matched_pairs(_mg((0, 1, 2, 3), skew, 4))
    # an edge leaves the matching
    stray = full[:7] + (((1, 2), 11),)
    assert not check_matched_pairs(_mg((0, 1, 2, 3), stray, 4))
    # duplicated color inside one pair
    dup = full[:7] + (((2, 3), 8),)
    assert not check_matched_pairs(_mg((0, 1, 2, 3), dup, 4))
    # single pair, both colors
    assert check_matched_pairs(_mg((0, 1), (((0, 1), 8), ((0, 1), 9)), 2))
    # no edges: vacuously matched only at m = 0
    assert check_matched_pairs(_mg((), (), 0))
    assert not check_matched_pairs(_mg((0, 1), (), 2))
    # odd m can never split into pairs
    assert not check_matched_pairs(_mg((0, 1, 2), (((0, 1), 8),), 3))


def test_step1_checker_directly():
    f = family_from_triangles(4, [(0, 1, 2)])
    assert check_step1(f, Bipartition(a=(3, 0), b=(1, 2), e_b=((1, 2),)))
    assert not check_step1(f, Bipartition(a=(3,), b=(0, 1, 2), e_b=()))


def test_build_tb_requires_two_b_vertices():
    f = family_from_triangles(4, [(0, 1, 2)])
    with pytest.raises(CertifierError):
        build_tb(f, Bipartition(a=(3,), b=(0, 1, 2), e_b=()))


def test_certify_t_star_sweep_is_fast_and_true():
    for n in (4, 12, 16, 20, 24):
        r = certify(t_star(n))
        assert r.verdict and r.extremal and r.is_tstar
        assert r.chain_values[0] == 2 * (n * n // 8)


def test_render_report_stable_fields():
    r = certify(t_star(8))
    plain = render_report(r)
    pore = render_report(r, porcelain=True)
    assert "verdict = pass" in plain
    assert pore.splitlines()[0] == "n=8"
    assert "verdict=pass" in pore
    for key in ("eq1", "eq2", "chain", "step1", "matched_pairs", "is_tstar"):
        assert any(line.startswith(key) for line in pore.splitlines())
