"""Solvers driven by nice tree decompositions, plus the network-flow solver
for uniformly weighted orientation.

Both DP solvers keep sparse per-node tables (only reachable bag states) and
extract witnesses through back-pointers resolved root-to-leaves, so every
yes-answer ships a certificate that is re-checked before being returned.
"""

from __future__ import annotations

from collections import deque

from twlab.errors import InputError
from twlab.graphs import EdgeWeighting, Graph, Orientation, canon
from twlab.problems import (
    ChosenOutdegreeInstance,
    ListColoringInstance,
    MinMaxOutdegreeInstance,
    check_admissible,
    check_list_coloring,
)
from twlab.treewidth import (
    FORGET,
    INTRODUCE,
    INTRODUCE_EDGE,
    JOIN,
    LEAF,
    NiceTreeDecomposition,
    check_nice,
)


def _require_nice(ntd: NiceTreeDecomposition, g: Graph) -> None:
    check = check_nice(ntd, g)
    if not check.ok:
        raise InputError("invalid nice decomposition: " + "; ".join(check.violations[:3]))


def _topo_order(ntd: NiceTreeDecomposition) -> list[int]:
    """Node ids with children before parents."""
    order: list[int] = []
    stack = [ntd.root]
    while stack:
        i = stack.pop()
        order.append(i)
        stack.extend(ntd.nodes[i].children)
    order.reverse()
    return order


def _sorted_bags(ntd: NiceTreeDecomposition) -> list[tuple[int, ...]]:
    return [tuple(sorted(n.bag)) for n in ntd.nodes]


def dp_list_coloring(inst: ListColoringInstance, ntd: NiceTreeDecomposition) -> dict[int, int] | None:
    """List coloring by DP over the nice decomposition.

    A bag state assigns each bag vertex a color from its list; introduce
    branches over the fresh vertex's list, introduce_edge discards states
    coloring the endpoints equally, forget projects, join keeps states
    present on both sides.
    """
    g = inst.graph
    _require_nice(ntd, g)
    bags = _sorted_bags(ntd)
    order = _topo_order(ntd)
    tables: list[dict[tuple[int, ...], object]] = [None] * len(ntd.nodes)  # type: ignore[list-item]

    for i in order:
        node = ntd.nodes[i]
        bag = bags[i]
        if node.kind == LEAF:
            tables[i] = {(): None}
        elif node.kind == INTRODUCE:
            pos = bag.index(node.vertex)
            palette = sorted(inst.lists[node.vertex])
            table: dict[tuple[int, ...], object] = {}
            for s in sorted(tables[node.children[0]]):
                for c in palette:
                    table.setdefault(s[:pos] + (c,) + s[pos:], s)
            tables[i] = table
        elif node.kind == INTRODUCE_EDGE:
            u, v = node.edge
            pu, pv = bag.index(u), bag.index(v)
            tables[i] = {
                s: s for s in sorted(tables[node.children[0]]) if s[pu] != s[pv]
            }
        elif node.kind == FORGET:
            child_bag = bags[node.children[0]]
            pos = child_bag.index(node.vertex)
            table = {}
            for s in sorted(tables[node.children[0]]):
                table.setdefault(s[:pos] + s[pos + 1 :], s)
            tables[i] = table
        else:  # JOIN
            left, right = node.children
            common = sorted(set(tables[left]) & set(tables[right]))
            tables[i] = {s: s for s in common}

    if () not in tables[ntd.root]:
        return None

    colors: dict[int, int] = {}
    stack: list[tuple[int, tuple[int, ...]]] = [(ntd.root, ())]
    while stack:
        i, s = stack.pop()
        node = ntd.nodes[i]
        if node.kind == LEAF:
            continue
        if node.kind == INTRODUCE:
            pos = bags[i].index(node.vertex)
            stack.append((node.children[0], s[:pos] + s[pos + 1 :]))
        elif node.kind == INTRODUCE_EDGE:
            stack.append((node.children[0], s))
        elif node.kind == FORGET:
            child_state = tables[i][s]
            pos = bags[node.children[0]].index(node.vertex)
            colors.setdefault(node.vertex, child_state[pos])
            stack.append((node.children[0], child_state))
        else:  # JOIN
            stack.append((node.children[0], s))
            stack.append((node.children[1], s))
    assert check_list_coloring(inst, colors)
    return colors


def dp_chosen_outdegree(
    inst: ChosenOutdegreeInstance, ntd: NiceTreeDecomposition
) -> Orientation | None:
    """Capped-orientation DP over the nice decomposition.

    A bag state carries each bag vertex's accumulated outgoing weight;
    introduce starts at 0, introduce_edge branches over the edge direction
    (smaller tail tried first) and prunes past the cap, forget drops the
    accumulator, join adds accumulators pointwise — sound because every edge
    is introduced exactly once.
    """
    g = inst.graph
    _require_nice(ntd, g)
    rho = inst.rho
    wmap = dict(zip(g.edges, inst.weights.weights))
    bags = _sorted_bags(ntd)
    order = _topo_order(ntd)
    tables: list[dict[tuple[int, ...], object]] = [None] * len(ntd.nodes)  # type: ignore[list-item]

    for i in order:
        node = ntd.nodes[i]
        bag = bags[i]
        if node.kind == LEAF:
            tables[i] = {(): None}
        elif node.kind == INTRODUCE:
            pos = bag.index(node.vertex)
            tables[i] = {
                s[:pos] + (0,) + s[pos:]: s for s in sorted(tables[node.children[0]])
            }
        elif node.kind == INTRODUCE_EDGE:
            u, v = canon(*node.edge)
            w = wmap[(u, v)]
            pu, pv = bag.index(u), bag.index(v)
            table: dict[tuple[int, ...], object] = {}
            for s in sorted(tables[node.children[0]]):
                if s[pu] + w <= rho[u]:
                    t = list(s)
                    t[pu] += w
                    table.setdefault(tuple(t), (s, u))
                if s[pv] + w <= rho[v]:
                    t = list(s)
                    t[pv] += w
                    table.setdefault(tuple(t), (s, v))
            tables[i] = table
        elif node.kind == FORGET:
            child_bag = bags[node.children[0]]
            pos = child_bag.index(node.vertex)
            table = {}
            for s in sorted(tables[node.children[0]]):
                table.setdefault(s[:pos] + s[pos + 1 :], s)
            tables[i] = table
        else:  # JOIN
            left, right = node.children
            table = {}
            for s1 in sorted(tables[left]):
                for s2 in sorted(tables[right]):
                    merged = tuple(a + b for a, b in zip(s1, s2))
                    if all(
                        m <= rho[v] for m, v in zip(merged, bag)
                    ):
                        table.setdefault(merged, (s1, s2))
            tables[i] = table
        cap = 1
        for v in bag:
            cap *= rho[v] + 1
        assert len(tables[i]) <= cap, "state table exceeded the accumulator bound"

    if () not in tables[ntd.root]:
        return None

    direction: dict[tuple[int, int], tuple[int, int]] = {}
    stack: list[tuple[int, tuple[int, ...]]] = [(ntd.root, ())]
    while stack:
        i, s = stack.pop()
        node = ntd.nodes[i]
        if node.kind == LEAF:
            continue
        if node.kind == INTRODUCE:
            pos = bags[i].index(node.vertex)
            stack.append((node.children[0], s[:pos] + s[pos + 1 :]))
        elif node.kind == INTRODUCE_EDGE:
            child_state, tail = tables[i][s]
            e = canon(*node.edge)
            direction[e] = (tail, e[1] if tail == e[0] else e[0])
            stack.append((node.children[0], child_state))
        elif node.kind == FORGET:
            stack.append((node.children[0], tables[i][s]))
        else:  # JOIN
            s1, s2 = tables[i][s]
            stack.append((node.children[0], s1))
            stack.append((node.children[1], s2))
    lam = Orientation(g, direction)
    assert check_admissible(inst, lam)
    return lam


def min_max_outdegree(
    inst: MinMaxOutdegreeInstance, ntd: NiceTreeDecomposition
) -> Orientation | None:
    """Uniform-cap decision via the capped-orientation DP."""
    chosen = ChosenOutdegreeInstance(inst.graph, inst.weights, (inst.r,) * inst.graph.n)
    return dp_chosen_outdegree(chosen, ntd)


# --- network flow -------------------------------------------------------------

class _FlowNet:
    """Residual adjacency-list max flow with capacity scaling."""

    def __init__(self, size: int):
        self.size = size
        self.head: list[list[int]] = [[] for _ in range(size)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, c: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        max_cap = max(self.cap, default=0)
        delta = 1
        while delta * 2 <= max_cap:
            delta *= 2
        while delta >= 1:
            while True:
                parent_arc = [-1] * self.size
                parent_arc[s] = -2
                queue = deque([s])
                while queue and parent_arc[t] == -1:
                    u = queue.popleft()
                    for a in self.head[u]:
                        if self.cap[a] >= delta and parent_arc[self.to[a]] == -1:
                            parent_arc[self.to[a]] = a
                            queue.append(self.to[a])
                if parent_arc[t] == -1:
                    break
                bottleneck = None
                v = t
                while v != s:
                    a = parent_arc[v]
                    bottleneck = self.cap[a] if bottleneck is None else min(bottleneck, self.cap[a])
                    v = self.to[a ^ 1]
                v = t
                while v != s:
                    a = parent_arc[v]
                    self.cap[a] -= bottleneck
                    self.cap[a ^ 1] += bottleneck
                    v = self.to[a ^ 1]
                flow += bottleneck
            delta //= 2
        return flow


def _orientable_within(g: Graph, d: int) -> bool:
    """Is there an orientation with plain outdegree <= d at every vertex?

    Flow network: source feeds each edge-node one unit, an edge-node feeds
    its two endpoints, a vertex passes at most d units to the sink.
    """
    m = len(g.edges)
    source, sink = 0, 1 + m + g.n
    net = _FlowNet(m + g.n + 2)
    for i, (u, v) in enumerate(g.edges):
        net.add(source, 1 + i, 1)
        net.add(1 + i, 1 + m + u, 1)
        net.add(1 + i, 1 + m + v, 1)
    for v in g.vertices():
        net.add(1 + m + v, sink, d)
    return net.max_flow(source, sink) == m


def flow_min_max_uniform(g: Graph, c: int, weights: EdgeWeighting | None = None) -> int:
    """Minimum achievable maximum outgoing weight when every edge weighs c.

    Binary search on the per-vertex edge budget d between ceil(|E|/|V|) and
    the maximum degree, each step decided by a max-flow feasibility test.
    """
    if c < 1:
        raise InputError(f"uniform weight must be positive, got {c}")
    if weights is not None and any(w != c for w in weights.weights):
        raise InputError("weighting is not uniform")
    if not g.edges:
        return 0
    m = len(g.edges)
    lo = -(-m // g.n)  # some vertex must emit at least the average
    hi = g.max_degree()
    while lo < hi:
        mid = (lo + hi) // 2
        if _orientable_within(g, mid):
            hi = mid
        else:
            lo = mid + 1
    return c * lo
