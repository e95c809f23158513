"""Certifying checks for rainbow-free families.

Given a rainbow-free family, this module recomputes the counting
argument that bounds its size: split the vertices into a maximum
independent set A of the union graph and its complement B, assign every
member a B-edge (beta), and verify the degree identity, the per-vertex
bound via explicit independent witness sets, and the master chain
2|T| <= |A||B| <= n^2/4. For families of the extremal size n^2/8 it
additionally checks the structural facts that force the family to be
t_star: no member inside B, the four colored-multigraph properties, and
the matched-pairs decomposition.

All arithmetic is exact (integers and fractions); every witness set is
re-verified against the union graph rather than trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .constructions import is_tstar_family
from .family import (
    MULTISET,
    SET,
    Edge,
    MemberRef,
    TriangleFamily,
    UnionGraph,
    Vertex,
    family_from_triangles,
    triangle_edges,
    union_graph,
)
from .rainbow import RainbowCertificate, find_rainbow

MIS_VERTEX_LIMIT = 64


class CertifierError(ValueError):
    """A certifier input contract was broken."""


class MISLimitError(CertifierError):
    """Graph too large for the exact independent-set solver."""


class RainbowFamilyError(CertifierError):
    """The family to certify contains a rainbow triangle."""

    def __init__(self, certificate: RainbowCertificate):
        self.certificate = certificate
        t = certificate.triple
        super().__init__(f"family has a rainbow triangle on {t}")


@dataclass(frozen=True)
class Bipartition:
    """Vertex split: A independent (maximum when built here), B the rest."""

    a: tuple[Vertex, ...]
    b: tuple[Vertex, ...]
    e_b: tuple[Edge, ...]


@dataclass(frozen=True)
class BetaAssignment:
    """Choice of one B-edge per member, with preimage counts d."""

    beta: dict[MemberRef, Edge]
    d: dict[Edge, int]


@dataclass(frozen=True)
class IndependentWitness:
    """Independent set proving sum of d(e) over edges at b is <= |A|."""

    b: Vertex
    i_b: tuple[Vertex, ...]
    contributor: dict[Vertex, MemberRef]


@dataclass(frozen=True)
class ColoredMultigraph:
    """One B-edge per member, colored by the member's A-vertex."""

    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[Edge, Vertex], ...]
    m: int


@dataclass(frozen=True)
class CertifierReport:
    n: int
    mode: str
    size: int
    support_size: int
    partition: Bipartition
    beta: BetaAssignment
    witnesses: tuple[IndependentWitness, ...]
    eq1_holds: bool
    eq1_value: int
    eq2_holds: bool
    eq2_values: tuple[tuple[Vertex, int, bool], ...]
    chain_holds: bool
    chain_values: tuple[int, int, Fraction]
    step1_holds: bool
    tb_properties: tuple[bool, bool, bool, bool] | None
    matched_pairs: bool | None
    extremal: bool
    is_tstar: bool | None

    @property
    def verdict(self) -> bool:
        ok = self.eq1_holds and self.eq2_holds and self.chain_holds
        if self.extremal:
            ok = ok and self.step1_holds
            ok = ok and self.tb_properties is not None and all(self.tb_properties)
            ok = ok and bool(self.matched_pairs) and bool(self.is_tstar)
        return ok


def max_independent_set(g: UnionGraph, limit: int = MIS_VERTEX_LIMIT) -> tuple[Vertex, ...]:
    """Lexicographically least maximum independent set of g.

    Exact branch and bound over vertex bitmasks with memoization;
    degree-0 and degree-1 vertices are taken greedily (always safe for
    the size). The lex-least maximum set is then grown front to back,
    keeping a vertex exactly when the remainder can still reach the
    optimum.
    """
    n = g.n
    if n > limit:
        raise MISLimitError(f"graph has {n} vertices, exact solver limit is {limit}")
    adj = g.adj
    memo: dict[int, int] = {}

    def mis_size(mask: int) -> int:
        if mask == 0:
            return 0
        known = memo.get(mask)
        if known is not None:
            return known
        result = None
        best_v = -1
        best_deg = -1
        m = mask
        while m:
            low = m & -m
            v = low.bit_length() - 1
            m ^= low
            dv = bin(adj[v] & mask).count("1")
            if dv <= 1:
                # safe reduction: some maximum set keeps v
                result = 1 + mis_size(mask & ~(adj[v] | (1 << v)))
                break
            if dv > best_deg:
                best_deg = dv
                best_v = v
        if result is None:
            v = best_v
            take = 1 + mis_size(mask & ~(adj[v] | (1 << v)))
            skip = mis_size(mask & ~(1 << v))
            result = max(take, skip)
        memo[mask] = result
        return result

    full = (1 << n) - 1
    target = mis_size(full)
    chosen: list[Vertex] = []
    mask = full
    for v in range(n):
        if not (mask >> v) & 1:
            continue
        after = mask & ~(adj[v] | (1 << v))
        if len(chosen) + 1 + mis_size(after) == target:
            chosen.append(v)
            mask = after
        else:
            mask &= ~(1 << v)
    assert len(chosen) == target
    return tuple(chosen)


def bipartition(g: UnionGraph, limit: int = MIS_VERTEX_LIMIT) -> Bipartition:
    """Split vertices into a maximum independent set A and B = V - A."""
    a = max_independent_set(g, limit)
    a_set = set(a)
    b = tuple(v for v in range(g.n) if v not in a_set)
    e_b = tuple(e for e in g.edges if e[0] not in a_set and e[1] not in a_set)
    return Bipartition(a, b, e_b)


def _member_edges_in_b(t: tuple[int, int, int], b_set: set[int]) -> list[Edge]:
    return [e for e in triangle_edges(t) if e[0] in b_set and e[1] in b_set]


def build_beta(f: TriangleFamily, p: Bipartition) -> BetaAssignment:
    """Assign each member one of its edges lying inside B.

    A member with a single B-edge takes it. A member entirely inside B
    takes the edge it shares with another member when one exists (there
    is at most one in a rainbow-free family), otherwise its
    lexicographically least B-edge.
    """
    g = union_graph(f)
    b_set = set(p.b)
    beta: dict[MemberRef, Edge] = {}
    d: dict[Edge, int] = {e: 0 for e in p.e_b}
    for ref, t in f.member_copies():
        inside = _member_edges_in_b(t, b_set)
        if not inside:
            raise CertifierError(
                f"member {t} has no edge inside B: partition or family invalid"
            )
        if len(inside) == 1:
            pick = inside[0]
        else:
            shared = [e for e in inside if len(g.owners[e]) >= 2]
            if len(shared) > 1:
                raise CertifierError(
                    f"member {t} shares {len(shared)} edges: family has a rainbow"
                )
            pick = shared[0] if shared else min(inside)
        beta[ref] = pick
        d[pick] = d.get(pick, 0) + 1
    return BetaAssignment(beta, d)


def check_eq1(f: TriangleFamily, p: Bipartition, beta: BetaAssignment) -> tuple[bool, int]:
    """Each member is counted by d at one edge, hence at two B-vertices."""
    total = 0
    for b in p.b:
        for e in p.e_b:
            if b in e:
                total += beta.d.get(e, 0)
    return total == 2 * f.size, total


def build_witness(
    f: TriangleFamily, p: Bipartition, beta: BetaAssignment, b: Vertex
) -> IndependentWitness:
    """Independent set with one vertex per (edge at b, contributing member).

    For an edge e = {b, u} with a single contributor the pick is u; with
    several contributors each picks its own vertex outside e. Distinct
    picks and independence are verified, not assumed.
    """
    if b not in set(p.b):
        raise CertifierError(f"witness vertex {b} is not in B")
    g = union_graph(f)
    members = dict(f.member_copies())
    picks: dict[Vertex, MemberRef] = {}
    for e in p.e_b:
        if b not in e:
            continue
        contributors = [ref for ref, pe in beta.beta.items() if pe == e]
        for ref in contributors:
            t = members[ref]
            if len(contributors) == 1:
                v = e[0] if e[1] == b else e[1]
            else:
                (v,) = [x for x in t if x not in e]
            if v in picks:
                other = picks[v]
                raise CertifierError(
                    f"witness picks collide at vertex {v} (members "
                    f"{members[other]} and {t}): would-be rainbow near "
                    f"{tuple(sorted({b, v} | set(e)))}"
                )
            picks[v] = ref
    i_b = tuple(sorted(picks))
    for i, u in enumerate(i_b):
        for v in i_b[i + 1 :]:
            if g.has_edge(u, v):
                raise CertifierError(
                    f"witness for {b} not independent: edge ({u},{v}) between "
                    f"picks of {members[picks[u]]} and {members[picks[v]]}"
                )
    return IndependentWitness(b, i_b, picks)


def check_eq2(
    f: TriangleFamily, p: Bipartition, beta: BetaAssignment
) -> tuple[bool, tuple[tuple[Vertex, int, bool], ...]]:
    """Per B-vertex: the d-sum over incident B-edges is at most |A|."""
    limit = len(p.a)
    rows = []
    ok = True
    for b in p.b:
        s = sum(beta.d.get(e, 0) for e in p.e_b if b in e)
        rows.append((b, s, s == limit))
        if s > limit:
            ok = False
    return ok, tuple(rows)


def check_master_chain(
    f: TriangleFamily, p: Bipartition
) -> tuple[bool, tuple[int, int, Fraction]]:
    """2*size <= |A|*|B| <= n^2/4, in exact arithmetic."""
    lhs = 2 * f.size
    mid = len(p.a) * len(p.b)
    rhs = Fraction(f.n * f.n, 4)
    return lhs <= mid and mid <= rhs, (lhs, mid, rhs)


def check_step1(f: TriangleFamily, p: Bipartition) -> bool:
    """No member may have all three vertices inside B."""
    b_set = set(p.b)
    return all(not set(t) <= b_set for t, _ in f.members)


def build_tb(f: TriangleFamily, p: Bipartition) -> ColoredMultigraph:
    """Project each member to its single B-edge, colored by its A-vertex."""
    a_set = set(p.a)
    b_set = set(p.b)
    edges: list[tuple[Edge, Vertex]] = []
    for _, t in f.member_copies():
        in_a = [v for v in t if v in a_set]
        in_b = [v for v in t if v in b_set]
        if len(in_b) != 2 or len(in_a) != 1:
            raise CertifierError(
                f"member {t} does not have exactly two vertices in B"
            )
        edges.append(((in_b[0], in_b[1]), in_a[0]))
    return ColoredMultigraph(tuple(p.b), tuple(edges), len(p.b))


def check_tb_properties(g: ColoredMultigraph) -> tuple[bool, bool, bool, bool]:
    """The four structural facts about the projected multigraph.

    P1: the underlying simple graph has no triangle. P2: on every
    3-edge path the two end edges have distinct colors. P3: two edges
    of the same color sharing a vertex are both simple (no parallel
    copy). P4: every vertex has degree m, multiplicities counted.
    """
    simple: set[Edge] = set()
    count: dict[Edge, int] = {}
    deg: dict[Vertex, int] = {v: 0 for v in g.vertices}
    colors: dict[Edge, list[Vertex]] = {}
    for e, c in g.edges:
        simple.add(e)
        count[e] = count.get(e, 0) + 1
        deg[e[0]] += 1
        deg[e[1]] += 1
        colors.setdefault(e, []).append(c)

    p1 = True
    verts = g.vertices
    vn = len(verts)
    for i in range(vn):
        for j in range(i + 1, vn):
            if (verts[i], verts[j]) not in simple:
                continue
            for k in range(j + 1, vn):
                if (verts[i], verts[k]) in simple and (verts[j], verts[k]) in simple:
                    p1 = False

    # 3-edge paths e1,e2,e3 on 4 distinct vertices: ends must differ in color
    p2 = True
    edge_list = g.edges
    for e2, _ in edge_list:
        u, w = e2
        for e1, c1 in edge_list:
            if u not in e1 or w in e1:
                continue
            for e3, c3 in edge_list:
                if w not in e3 or u in e3:
                    continue
                x = e1[0] if e1[1] == u else e1[1]
                y = e3[0] if e3[1] == w else e3[1]
                if x == y:
                    continue
                if c1 == c3:
                    p2 = False

    p3 = True
    by_color: dict[Vertex, list[Edge]] = {}
    for e, c in g.edges:
        by_color.setdefault(c, []).append(e)
    for c, es in by_color.items():
        for i in range(len(es)):
            for j in range(i + 1, len(es)):
                e1, e2 = es[i], es[j]
                if e1 == e2:
                    continue
                if set(e1) & set(e2):
                    if count[e1] > 1 or count[e2] > 1:
                        p3 = False

    p4 = all(deg[v] == g.m for v in g.vertices)
    return p1, p2, p3, p4


def check_matched_pairs(g: ColoredMultigraph) -> bool:
    """B splits into m/2 pairs, each carrying m edges of all m colors.

    All edges must lie within the pairs, every pair must carry exactly
    m edges whose colors are pairwise distinct, and the palette must be
    the same m colors for every pair.
    """
    m = g.m
    if m == 0:
        return not g.edges
    if m % 2 or len(g.vertices) != m:
        return False
    partner: dict[Vertex, Vertex] = {}
    per_pair: dict[Edge, list[Vertex]] = {}
    for e, c in g.edges:
        u, v = e
        if partner.setdefault(u, v) != v or partner.setdefault(v, u) != u:
            return False
        per_pair.setdefault(e, []).append(c)
    if len(per_pair) != m // 2:
        return False
    if set(partner) != set(g.vertices):
        return False
    palette: set[Vertex] | None = None
    for e, cs in per_pair.items():
        if len(cs) != m or len(set(cs)) != m:
            return False
        if palette is None:
            palette = set(cs)
        elif set(cs) != palette:
            return False
    return True


def certify(f: TriangleFamily, mis_limit: int = MIS_VERTEX_LIMIT) -> CertifierReport:
    """Run every check on a rainbow-free family and report the results.

    A multiset family is certified through its distinct support; the
    doubling layer is handled by the decomposition module. A rainbow
    input raises RainbowFamilyError carrying the certificate.
    """
    cert = find_rainbow(f)
    if cert is not None:
        raise RainbowFamilyError(cert)
    support = f
    if f.mode == MULTISET:
        support = family_from_triangles(f.n, list(f.support), SET)
    g = union_graph(support)
    p = bipartition(g, mis_limit)
    beta = build_beta(support, p)
    eq1_ok, eq1_val = check_eq1(support, p, beta)
    witnesses = tuple(build_witness(support, p, beta, b) for b in p.b)
    eq2_ok, eq2_rows = check_eq2(support, p, beta)
    chain_ok, chain_vals = check_master_chain(support, p)
    step1 = check_step1(support, p)
    tb_props: tuple[bool, bool, bool, bool] | None = None
    matched: bool | None = None
    if step1:
        tb = build_tb(support, p)
        tb_props = check_tb_properties(tb)
        matched = check_matched_pairs(tb)
    extremal = 8 * support.size == support.n * support.n
    is_tstar = is_tstar_family(support) if extremal else None
    return CertifierReport(
        n=f.n,
        mode=f.mode,
        size=f.size,
        support_size=support.size,
        partition=p,
        beta=beta,
        witnesses=witnesses,
        eq1_holds=eq1_ok,
        eq1_value=eq1_val,
        eq2_holds=eq2_ok,
        eq2_values=eq2_rows,
        chain_holds=chain_ok,
        chain_values=chain_vals,
        step1_holds=step1,
        tb_properties=tb_props,
        matched_pairs=matched,
        extremal=extremal,
        is_tstar=is_tstar,
    )


def _fmt_bool(v: bool | None) -> str:
    if v is None:
        return "n/a"
    return "true" if v else "false"


def render_report(r: CertifierReport, porcelain: bool = False) -> str:
    """Stable key-value rendering of a report; porcelain uses key=value."""
    sep = "=" if porcelain else " = "
    chain_lhs, chain_mid, chain_rhs = r.chain_values
    lines = [
        f"n{sep}{r.n}",
        f"mode{sep}{r.mode}",
        f"size{sep}{r.size}",
        f"support_size{sep}{r.support_size}",
        f"A{sep}{','.join(map(str, r.partition.a))}",
        f"B{sep}{','.join(map(str, r.partition.b))}",
        f"eb_edges{sep}{len(r.partition.e_b)}",
        f"eq1{sep}{_fmt_bool(r.eq1_holds)}",
        f"eq1_value{sep}{r.eq1_value}",
        f"eq2{sep}{_fmt_bool(r.eq2_holds)}",
    ]
    for b, s, tight in r.eq2_values:
        suffix = "" if porcelain else (" (tight)" if tight else "")
        lines.append(f"eq2.{b}{sep}{s}{suffix}")
    for w in r.witnesses:
        lines.append(f"witness.{w.b}{sep}{','.join(map(str, w.i_b))}")
    lines += [
        f"chain{sep}{_fmt_bool(r.chain_holds)}",
        f"chain_lhs{sep}{chain_lhs}",
        f"chain_mid{sep}{chain_mid}",
        f"chain_rhs{sep}{chain_rhs}",
        f"step1{sep}{_fmt_bool(r.step1_holds)}",
    ]
    if r.tb_properties is None:
        lines.append(f"tb{sep}n/a")
    else:
        for i, v in enumerate(r.tb_properties, start=1):
            lines.append(f"tb.p{i}{sep}{_fmt_bool(v)}")
    lines += [
        f"matched_pairs{sep}{_fmt_bool(r.matched_pairs)}",
        f"extremal{sep}{_fmt_bool(r.extremal)}",
        f"is_tstar{sep}{_fmt_bool(r.is_tstar)}",
        f"verdict{sep}{'pass' if r.verdict else 'fail'}",
    ]
    return "\n".join(lines) + "\n"
