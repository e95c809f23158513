"""Hot numeric kernels, JIT-compiled with numba when available.

Set RAINBOWFREE_NO_NUMBA=1 to force the pure-Python fallback; the same
source then runs uncompiled, so both paths share one implementation.
USING_NUMBA reports which path is active.  All kernels work on int64
numpy arrays and plain ints, with vertices < 64.

Rainbow test used throughout: a vertex triple is rainbow iff its three
edges exist and admit a system of distinct representatives among owner
copies.  Two different edges of a triple can only share an owner that is
a copy of the triple itself, so Hall's condition reduces to counting:
with edge owner counts c1, c2, c3 and cm copies of the triple itself,
an SDR exists iff every ci >= 1, every ci + cj - cm >= 2, and
c1 + c2 + c3 - 2 * cm >= 3.
"""

from __future__ import annotations

import itertools
import os

import numpy as np


def _want_numba() -> bool:
    flag = os.environ.get("RAINBOWFREE_NO_NUMBA", "").strip().lower()
    return flag not in ("1", "true", "yes")


USING_NUMBA = False
if _want_numba():
    try:
        from numba import njit  # type: ignore[import-untyped]

        USING_NUMBA = True
    except ImportError:
        USING_NUMBA = False

if USING_NUMBA:

    def _jit(fn):
        return njit(cache=True)(fn)

else:

    def _jit(fn):
        return fn


_INF = np.int64(1) << 62


def build_pool(n: int) -> tuple[list[tuple[int, int, int]], np.ndarray]:
    """All triangles on 0..n-1 in lexicographic order, plus a rank table.

    tri_index[a, b, c] = pool rank for a < b < c, -1 elsewhere.
    """
    pool = list(itertools.combinations(range(n), 3))
    tri_index = np.full((n, n, n), -1, dtype=np.int64)
    for i, (a, b, c) in enumerate(pool):
        tri_index[a, b, c] = i
    return pool, tri_index


@_jit
def _hall3(c1, c2, c3, cm):
    # SDR over the three edge slots of a triple, by counting (see module doc)
    if c1 < 1 or c2 < 1 or c3 < 1:
        return 0
    if c1 + c2 - cm < 2:
        return 0
    if c1 + c3 - cm < 2:
        return 0
    if c2 + c3 - cm < 2:
        return 0
    if c1 + c2 + c3 - 2 * cm < 3:
        return 0
    return 1


@_jit
def rainbow_triple_scan(cnt, tri_mult, tri_index, n):
    """First rainbow triple in lexicographic order, packed x*4096+y*64+z.

    cnt is the symmetric edge owner-count matrix, tri_mult the per-pool
    member multiplicities.  Returns -1 when the family is rainbow-free.
    """
    for x in range(n):
        for y in range(x + 1, n):
            if cnt[x, y] == 0:
                continue
            for z in range(y + 1, n):
                if cnt[x, z] == 0 or cnt[y, z] == 0:
                    continue
                cm = tri_mult[tri_index[x, y, z]]
                if _hall3(cnt[x, y], cnt[x, z], cnt[y, z], cm) == 1:
                    return x * 4096 + y * 64 + z
    return -1


@_jit
def rainbow_after_add(cnt, tri_mult, tri_index, n, x, y, z, add_m):
    """Would adding add_m copies of (x, y, z) create a rainbow triple?

    Assumes the current family is rainbow-free, so only triples using an
    edge of the new member need checking.  Returns 1 if a rainbow appears.
    """
    for k in range(3):
        if k == 0:
            a, b = x, y
        elif k == 1:
            a, b = x, z
        else:
            a, b = y, z
        for w in range(n):
            if w == a or w == b:
                continue
            # sort (a, b, w); a < b already
            if w < a:
                p, q, r = w, a, b
            elif w < b:
                p, q, r = a, w, b
            else:
                p, q, r = a, b, w
            own = 1 if (p == x and q == y and r == z) else 0
            cm = tri_mult[tri_index[p, q, r]] + add_m * own
            c1 = cnt[p, q]
            if p == x and q == y or p == x and q == z or p == y and q == z:
                c1 += add_m
            c2 = cnt[p, r]
            if p == x and r == y or p == x and r == z or p == y and r == z:
                c2 += add_m
            c3 = cnt[q, r]
            if q == x and r == y or q == x and r == z or q == y and r == z:
                c3 += add_m
            if _hall3(c1, c2, c3, cm) == 1:
                return 1
    return 0


@_jit
def list_extensions(cnt, tri_mult, tri_index, n, pool_a, pool_b, pool_c, start, max_mult, out):
    """Record the largest rainbow-safe multiplicity per pool triangle >= start.

    out[idx] becomes 0 (cannot extend), 1, or 2; entries below start are
    untouched.  Returns the summed capacity of all recorded extensions.
    Unaddable triangles stay unaddable as the family grows, so the sum
    bounds everything a whole subtree can still add; label-contiguity is
    a per-node constraint and is left to the caller.
    """
    total = pool_a.shape[0]
    cap = 0
    for idx in range(start, total):
        out[idx] = 0
        a = pool_a[idx]
        b = pool_b[idx]
        c = pool_c[idx]
        if rainbow_after_add(cnt, tri_mult, tri_index, n, a, b, c, 1) == 1:
            continue
        m = 1
        if max_mult >= 2 and rainbow_after_add(cnt, tri_mult, tri_index, n, a, b, c, 2) == 0:
            m = 2
        out[idx] = m
        cap += m
    return cap


@_jit
def is_min_labeled(ta, tb, tc, tm, sup, n):
    """Is the identity labeling lexicographically minimal for these members?

    ta/tb/tc/tm are the member vertex columns and multiplicities sorted by
    member code; sup lists the support vertices ascending.  Tries every
    injection of the support onto labels 0..s-1 by DFS, comparing the
    emerging sorted code sequence against the identity sequence, pruning
    branches as soon as a determined prefix decides the comparison.
    Returns 0 when a strictly smaller labeling exists, else 1.
    """
    k = ta.shape[0]
    s = sup.shape[0]
    if k == 0:
        return 1
    target = np.empty(k, np.int64)
    for i in range(k):
        target[i] = ((ta[i] * 64 + tb[i]) * 64 + tc[i]) * 4 + tm[i]
    lab = np.full(n, -1, np.int64)
    used = np.zeros(s, np.uint8)
    choice = np.full(s, -1, np.int64)
    det = np.empty(k, np.int64)
    level = 0
    while level >= 0:
        prev = choice[level]
        if prev >= 0:
            used[prev] = 0
            lab[sup[prev]] = -1
        c = prev + 1
        while c < s and used[c] == 1:
            c += 1
        if c >= s:
            choice[level] = -1
            level -= 1
            continue
        choice[level] = c
        used[c] = 1
        lab[sup[c]] = level
        nass = level + 1
        lb = _INF
        ndet = 0
        for i in range(k):
            a0 = _INF
            a1 = _INF
            a2 = _INF
            na = 0
            for j in range(3):
                if j == 0:
                    xv = lab[ta[i]]
                elif j == 1:
                    xv = lab[tb[i]]
                else:
                    xv = lab[tc[i]]
                if xv < 0:
                    continue
                na += 1
                if xv < a0:
                    a2 = a1
                    a1 = a0
                    a0 = xv
                elif xv < a1:
                    a2 = a1
                    a1 = xv
                else:
                    a2 = xv
            # unassigned slots take the smallest fresh labels, which exceed
            # every assigned label
            if na == 0:
                q0, q1, q2 = nass, nass + 1, nass + 2
            elif na == 1:
                q0, q1, q2 = a0, nass, nass + 1
            elif na == 2:
                q0, q1, q2 = a0, a1, nass
            else:
                q0, q1, q2 = a0, a1, a2
            code = ((q0 * 64 + q1) * 64 + q2) * 4 + tm[i]
            if na == 3:
                det[ndet] = code
                ndet += 1
            elif code < lb:
                lb = code
        for ii in range(1, ndet):
            key = det[ii]
            jj = ii - 1
            while jj >= 0 and det[jj] > key:
                det[jj + 1] = det[jj]
                jj -= 1
            det[jj + 1] = key
        p = 0
        while p < ndet and det[p] < lb:
            p += 1
        # codes below lb are final; undetermined members cannot land there
        cmp = 0
        for ii in range(p):
            if det[ii] != target[ii]:
                cmp = -1 if det[ii] < target[ii] else 1
                break
        if cmp == -1:
            return 0
        prune = 0
        if cmp == 1:
            prune = 1
        elif p == k:
            prune = 1  # full tie: an automorphism, not an improvement
        elif lb > target[p]:
            prune = 1  # every completion exceeds the target at position p
        if prune == 0 and level < s - 1:
            level += 1
        # otherwise stay and advance to the next sibling
    return 1


@_jit
def min_labeling(ta, tb, tc, tm, sup, n, out_lab):
    """Fill out_lab with the labeling minimizing the sorted code sequence.

    Same DFS as is_min_labeled but against a running best instead of a
    fixed target.  out_lab[v] is the new label of support vertex v, -1 for
    vertices outside the support.
    """
    k = ta.shape[0]
    s = sup.shape[0]
    for v in range(n):
        out_lab[v] = -1
    if k == 0 or s == 0:
        return
    best = np.full(k, _INF, np.int64)
    best_set = 0
    lab = np.full(n, -1, np.int64)
    used = np.zeros(s, np.uint8)
    choice = np.full(s, -1, np.int64)
    det = np.empty(k, np.int64)
    level = 0
    while level >= 0:
        prev = choice[level]
        if prev >= 0:
            used[prev] = 0
            lab[sup[prev]] = -1
        c = prev + 1
        while c < s and used[c] == 1:
            c += 1
        if c >= s:
            choice[level] = -1
            level -= 1
            continue
        choice[level] = c
        used[c] = 1
        lab[sup[c]] = level
        nass = level + 1
        lb = _INF
        ndet = 0
        for i in range(k):
            a0 = _INF
            a1 = _INF
            a2 = _INF
            na = 0
            for j in range(3):
                if j == 0:
                    xv = lab[ta[i]]
                elif j == 1:
                    xv = lab[tb[i]]
                else:
                    xv = lab[tc[i]]
                if xv < 0:
                    continue
                na += 1
                if xv < a0:
                    a2 = a1
                    a1 = a0
                    a0 = xv
                elif xv < a1:
                    a2 = a1
                    a1 = xv
                else:
                    a2 = xv
            if na == 0:
                q0, q1, q2 = nass, nass + 1, nass + 2
            elif na == 1:
                q0, q1, q2 = a0, nass, nass + 1
            elif na == 2:
                q0, q1, q2 = a0, a1, nass
            else:
                q0, q1, q2 = a0, a1, a2
            code = ((q0 * 64 + q1) * 64 + q2) * 4 + tm[i]
            if na == 3:
                det[ndet] = code
                ndet += 1
            elif code < lb:
                lb = code
        for ii in range(1, ndet):
            key = det[ii]
            jj = ii - 1
            while jj >= 0 and det[jj] > key:
                det[jj + 1] = det[jj]
                jj -= 1
            det[jj + 1] = key
        p = 0
        while p < ndet and det[p] < lb:
            p += 1
        prune = 0
        if best_set == 1:
            cmp = 0
            for ii in range(p):
                if det[ii] != best[ii]:
                    cmp = -1 if det[ii] < best[ii] else 1
                    break
            if cmp == 1:
                prune = 1
            elif cmp == 0:
                if p == k:
                    prune = 1  # ties the best; keep the earlier labeling
                elif lb > best[p]:
                    prune = 1
        if prune == 0:
            if level == s - 1:
                # complete labeling; p == k here since support is exhausted
                take = 0
                if best_set == 0:
                    take = 1
                else:
                    for ii in range(k):
                        if det[ii] != best[ii]:
                            take = 1 if det[ii] < best[ii] else 0
                            break
                if take == 1:
                    for ii in range(k):
                        best[ii] = det[ii]
                    for v in range(n):
                        out_lab[v] = lab[v]
                    best_set = 1
            else:
                level += 1
    return
