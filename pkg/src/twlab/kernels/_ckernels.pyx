# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels.

Operation-for-operation mirror of _pykernels (same search order, same
propagation rules), so both backends return identical results and witnesses.
See _pykernels for the determinism contracts.
"""

import array

from cpython cimport array

cdef extern from *:
    int __builtin_ctz(unsigned int) nogil

BACKEND = "c"


# --- capped orientation search -------------------------------------------------

cdef struct OrientCtx:
    int n
    int m
    int* eu
    int* ev
    long long* w
    long long* residual
    signed char* dirs
    int* inc_off
    int* inc_edge
    int* trail
    int trail_len
    int* prop_stack


cdef bint _decide(OrientCtx* c, int e, int d) noexcept:
    cdef int tail = c.eu[e] if d == 0 else c.ev[e]
    if c.residual[tail] < c.w[e]:
        return False
    c.dirs[e] = d
    c.residual[tail] -= c.w[e]
    c.trail[c.trail_len] = e
    c.trail_len += 1
    return True


cdef void _undo(OrientCtx* c, int mark) noexcept:
    cdef int e, tail
    while c.trail_len > mark:
        c.trail_len -= 1
        e = c.trail[c.trail_len]
        tail = c.eu[e] if c.dirs[e] == 0 else c.ev[e]
        c.residual[tail] += c.w[e]
        c.dirs[e] = -1


cdef bint _propagate(OrientCtx* c, int stack_len) noexcept:
    cdef int z, f, o, a
    while stack_len > 0:
        stack_len -= 1
        z = c.prop_stack[stack_len]
        for a in range(c.inc_off[z], c.inc_off[z + 1]):
            f = c.inc_edge[a]
            if c.dirs[f] != -1:
                continue
            if c.w[f] > c.residual[z]:
                o = c.ev[f] if c.eu[f] == z else c.eu[f]
                if c.w[f] > c.residual[o]:
                    return False
                if not _decide(c, f, 0 if o == c.eu[f] else 1):
                    return False
                c.prop_stack[stack_len] = o
                stack_len += 1
    return True


cdef bint _orient_dfs(OrientCtx* c, int start) noexcept:
    cdef int e = start
    cdef int d, tail, mark
    while e < c.m and c.dirs[e] != -1:
        e += 1
    if e == c.m:
        return True
    for d in range(2):
        tail = c.eu[e] if d == 0 else c.ev[e]
        mark = c.trail_len
        if _decide(c, e, d):
            c.prop_stack[0] = tail
            if _propagate(c, 1) and _orient_dfs(c, e + 1):
                return True
        _undo(c, mark)
    return False


def orient_search(n, eu, ev, w, rho):
    cdef int m = len(eu)
    cdef array.array eu_a = array.array("i", eu)
    cdef array.array ev_a = array.array("i", ev)
    cdef array.array w_a = array.array("q", w)
    cdef array.array res_a = array.array("q", rho)
    cdef array.array dirs_a = array.array("b", bytes(m))
    cdef array.array off_a = array.array("i", bytes(4 * (n + 1)))
    cdef array.array incedge_a = array.array("i", bytes(4 * 2 * m))
    cdef array.array trail_a = array.array("i", bytes(4 * max(m, 1)))
    cdef array.array prop_a = array.array("i", bytes(4 * max(n + m, 1)))
    cdef OrientCtx c
    cdef int i, v

    c.n = n
    c.m = m
    c.eu = eu_a.data.as_ints
    c.ev = ev_a.data.as_ints
    c.w = w_a.data.as_longlongs
    c.residual = res_a.data.as_longlongs
    c.dirs = dirs_a.data.as_schars
    c.inc_off = off_a.data.as_ints
    c.inc_edge = incedge_a.data.as_ints
    c.trail = trail_a.data.as_ints
    c.trail_len = 0
    c.prop_stack = prop_a.data.as_ints

    for i in range(m):
        c.dirs[i] = -1
        c.inc_off[c.eu[i] + 1] += 1
        c.inc_off[c.ev[i] + 1] += 1
    for v in range(n):
        c.inc_off[v + 1] += c.inc_off[v]
    cdef array.array cursor_a = array.array("i", off_a.tobytes()[: 4 * n])
    cdef int* cursor = cursor_a.data.as_ints
    for i in range(m):
        c.inc_edge[cursor[c.eu[i]]] = i
        cursor[c.eu[i]] += 1
        c.inc_edge[cursor[c.ev[i]]] = i
        cursor[c.ev[i]] += 1

    for v in range(n):
        c.prop_stack[v] = v
    if not _propagate(&c, n):
        return None
    if not _orient_dfs(&c, 0):
        return None
    return [c.dirs[i] for i in range(m)]


# --- list-coloring backtracking --------------------------------------------------

cdef bint _color_alive(
    int u,
    long long* colors,
    int* adj_off,
    int* adj_tgt,
    int* pal_off,
    long long* pal_val,
) noexcept:
    cdef int ci, ni
    cdef long long c
    cdef bint clash
    for ci in range(pal_off[u], pal_off[u + 1]):
        c = pal_val[ci]
        clash = False
        for ni in range(adj_off[u], adj_off[u + 1]):
            if colors[adj_tgt[ni]] == c:
                clash = True
                break
        if not clash:
            return True
    return False


cdef bint _color_dfs(
    int v,
    int n,
    long long* colors,
    int* adj_off,
    int* adj_tgt,
    int* pal_off,
    long long* pal_val,
) noexcept:
    cdef int ci, ni, u
    cdef long long col
    cdef bint ok
    if v == n:
        return True
    for ci in range(pal_off[v], pal_off[v + 1]):
        col = pal_val[ci]
        ok = True
        for ni in range(adj_off[v], adj_off[v + 1]):
            if colors[adj_tgt[ni]] == col:
                ok = False
                break
        if ok:
            colors[v] = col
            # forward check: every uncolored neighbor keeps a live color
            for ni in range(adj_off[v], adj_off[v + 1]):
                u = adj_tgt[ni]
                if colors[u] == 0 and not _color_alive(
                    u, colors, adj_off, adj_tgt, pal_off, pal_val
                ):
                    ok = False
                    break
            if ok and _color_dfs(v + 1, n, colors, adj_off, adj_tgt, pal_off, pal_val):
                return True
            colors[v] = 0
    return False


def list_color_search(n, adj_offsets, adj_targets, pal_offsets, pal_values):
    cdef array.array colors_a = array.array("q", bytes(8 * max(n, 1)))
    cdef array.array ao = array.array("i", adj_offsets)
    cdef array.array at = array.array("i", adj_targets or [0])
    cdef array.array po = array.array("i", pal_offsets)
    cdef array.array pv = array.array("q", pal_values or [0])
    if _color_dfs(
        0,
        n,
        colors_a.data.as_longlongs,
        ao.data.as_ints,
        at.data.as_ints,
        po.data.as_ints,
        pv.data.as_longlongs,
    ):
        return [colors_a.data.as_longlongs[i] for i in range(n)]
    return None


# --- generalized satisfiability ----------------------------------------------------

cdef struct SatCtx:
    int num_vars
    int num_cons
    unsigned long long* assigned_mask
    unsigned long long* assigned_val
    int* occ_off
    int* occ_con
    int* occ_pos
    int* tup_off
    unsigned long long* tup_masks
    signed char* values


cdef bint _consistent(SatCtx* c, int j) noexcept:
    cdef unsigned long long am = c.assigned_mask[j]
    cdef unsigned long long av = c.assigned_val[j]
    cdef int ti
    for ti in range(c.tup_off[j], c.tup_off[j + 1]):
        if (c.tup_masks[ti] & am) == av:
            return True
    return False


cdef bint _sat_dfs(SatCtx* c, int x) noexcept:
    cdef int val, a, j, p
    cdef bint ok
    if x == c.num_vars:
        return True
    for val in range(2):
        c.values[x] = val
        ok = True
        for a in range(c.occ_off[x], c.occ_off[x + 1]):
            j = c.occ_con[a]
            p = c.occ_pos[a]
            c.assigned_mask[j] |= 1ULL << p
            if val:
                c.assigned_val[j] |= 1ULL << p
            if ok and not _consistent(c, j):
                ok = False
        if ok and _sat_dfs(c, x + 1):
            return True
        for a in range(c.occ_off[x], c.occ_off[x + 1]):
            j = c.occ_con[a]
            p = c.occ_pos[a]
            c.assigned_mask[j] &= ~(1ULL << p)
            c.assigned_val[j] &= ~(1ULL << p)
    c.values[x] = 0
    return False


def gensat_search(num_vars, scope_offsets, scope_vars, tup_offsets, tup_masks):
    cdef int num_cons = len(scope_offsets) - 1
    cdef int total_scope = len(scope_vars)
    cdef array.array am = array.array("Q", bytes(8 * max(num_cons, 1)))
    cdef array.array av = array.array("Q", bytes(8 * max(num_cons, 1)))
    cdef array.array oo = array.array("i", bytes(4 * (num_vars + 1)))
    cdef array.array oc = array.array("i", bytes(4 * max(total_scope, 1)))
    cdef array.array op = array.array("i", bytes(4 * max(total_scope, 1)))
    cdef array.array to = array.array("i", tup_offsets)
    cdef array.array tm = array.array("Q", tup_masks or [0])
    cdef array.array vals = array.array("b", bytes(max(num_vars, 1)))
    cdef array.array so = array.array("i", scope_offsets)
    cdef array.array sv = array.array("i", scope_vars or [0])
    cdef SatCtx c
    cdef int j, p, x, a

    c.num_vars = num_vars
    c.num_cons = num_cons
    c.assigned_mask = am.data.as_ulonglongs
    c.assigned_val = av.data.as_ulonglongs
    c.occ_off = oo.data.as_ints
    c.occ_con = oc.data.as_ints
    c.occ_pos = op.data.as_ints
    c.tup_off = to.data.as_ints
    c.tup_masks = tm.data.as_ulonglongs
    c.values = vals.data.as_schars

    cdef int* s_off = so.data.as_ints
    cdef int* s_var = sv.data.as_ints
    for j in range(num_cons):
        for p in range(s_off[j + 1] - s_off[j]):
            c.occ_off[s_var[s_off[j] + p] + 1] += 1
    for x in range(num_vars):
        c.occ_off[x + 1] += c.occ_off[x]
    cdef array.array cursor_a = array.array("i", oo.tobytes()[: 4 * max(num_vars, 1)])
    cdef int* cursor = cursor_a.data.as_ints
    for j in range(num_cons):
        for p in range(s_off[j + 1] - s_off[j]):
            x = s_var[s_off[j] + p]
            c.occ_con[cursor[x]] = j
            c.occ_pos[cursor[x]] = p
            cursor[x] += 1

    for j in range(num_cons):
        if not _consistent(&c, j):
            return None
    if not _sat_dfs(&c, 0):
        return None
    return [c.values[x] for x in range(num_vars)]


# --- exact treewidth ------------------------------------------------------------------

cdef int _back_degree(unsigned int* adj, int v, unsigned int inside, int n) noexcept:
    cdef unsigned int reach = adj[v]
    cdef unsigned int frontier = reach & inside
    cdef unsigned int seen = frontier
    cdef unsigned int nxt, rest, outside
    cdef int u, count
    while frontier:
        nxt = 0
        rest = frontier
        while rest:
            u = __builtin_ctz(rest)
            rest &= rest - 1
            nxt |= adj[u]
        reach |= nxt
        frontier = nxt & inside & ~seen
        seen |= frontier
    outside = reach & ~inside & ~(1u << v)
    count = 0
    while outside:
        outside &= outside - 1
        count += 1
    return count


def exact_treewidth(n, adj_masks):
    if n == 0:
        return -1, []
    if n > 26:
        raise ValueError("exact treewidth kernel supports at most 26 vertices")
    cdef unsigned int full = (1u << n) - 1
    cdef array.array adj_a = array.array("I", adj_masks)
    cdef array.array dp_a = array.array("b", bytes(full + 1))
    cdef array.array ch_a = array.array("b", bytes(full + 1))
    cdef unsigned int* adj = adj_a.data.as_uints
    cdef signed char* dp = dp_a.data.as_schars
    cdef signed char* choice = ch_a.data.as_schars
    cdef unsigned int s, rest, vbit, prev
    cdef int v, q, cost, best, best_v, i

    for s in range(1, full + 1):
        best = n
        best_v = -1
        rest = s
        while rest:
            vbit = rest & (~rest + 1)
            rest ^= vbit
            v = __builtin_ctz(vbit)
            prev = s ^ vbit
            q = _back_degree(adj, v, prev, n)
            cost = dp[prev]
            if q > cost:
                cost = q
            if cost < best:
                best = cost
                best_v = v
        dp[s] = <signed char> best
        choice[s] = <signed char> best_v

    order = [0] * n
    s = full
    for i in range(n - 1, -1, -1):
        v = choice[s]
        order[i] = v
        s ^= 1u << v
    return dp[full], order
