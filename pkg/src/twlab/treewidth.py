"""Tree decompositions: validation, width, construction (heuristic, exact,
fill-in from an elimination order), forest decomposition, bag augmentation,
and normalization to the nice form consumed by the DP solvers."""

from __future__ import annotations

import random
from dataclasses import dataclass

from twlab import kernels
from twlab.errors import GuardError, InputError
from twlab.graphs import Graph, canon, induced_subgraph

EXACT_DEFAULT_LIMIT = 18


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed by the nodes of a host tree.

    The constructor only checks shape (one bag per node, non-negative vertex
    ids); whether the host is a tree and the bags cover the decomposed graph
    is the job of validate(), which reports violations instead of raising.
    """

    tree: Graph
    bags: tuple[frozenset[int], ...]

    def __init__(self, tree: Graph, bags):
        bags = tuple(frozenset(b) for b in bags)
        if len(bags) != tree.n:
            raise InputError(f"{len(bags)} bags for {tree.n} tree nodes")
        for b in bags:
            for v in b:
                if v < 0:
                    raise InputError(f"negative vertex {v} in a bag")
        object.__setattr__(self, "tree", tree)
        object.__setattr__(self, "bags", bags)


@dataclass(frozen=True)
class Validity:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def width(td: TreeDecomposition) -> int:
    """Largest bag size minus one.  A single empty bag has width -1."""
    if not td.bags:
        raise InputError("decomposition has no bags")
    return max(len(b) for b in td.bags) - 1


def _is_tree(g: Graph) -> bool:
    if g.n == 0 or len(g.edges) != g.n - 1:
        return False
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in g.neighbors(v):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == g.n


def validate(td: TreeDecomposition, g: Graph) -> Validity:
    """Check the two decomposition conditions against g.

    Structural problems with the host tree are reported first; otherwise each
    violation names the offending vertex or edge and the bags involved.
    """
    if not _is_tree(td.tree):
        return Validity(("host is not a tree (must be connected with |E| = |V| - 1)",))
    violations: list[str] = []
    where: dict[int, list[int]] = {}
    for t, bag in enumerate(td.bags):
        for v in bag:
            if v >= g.n:
                violations.append(f"bag {t} contains vertex {v} >= n={g.n}")
            where.setdefault(v, []).append(t)
    for v in g.vertices():
        if v not in where:
            violations.append(f"vertex {v} appears in no bag")
    for u, v in g.edges:
        if not any(u in td.bags[t] and v in td.bags[t] for t in where.get(u, ())):
            violations.append(f"edge ({u},{v}) is contained in no bag")
    # occurrences of each vertex must induce a connected subtree
    for v, nodes in sorted(where.items()):
        if len(nodes) == 1:
            continue
        nodeset = set(nodes)
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            t = stack.pop()
            for s in td.tree.neighbors(t):
                if s in nodeset and s not in seen:
                    seen.add(s)
                    stack.append(s)
        if len(seen) != len(nodeset):
            stray = sorted(nodeset - seen)
            violations.append(
                f"vertex {v} occurs in disconnected tree nodes (e.g. bags {nodes[0]} and {stray[0]})"
            )
    return Validity(tuple(violations))


def relabel(td: TreeDecomposition, mapping: dict[int, int]) -> TreeDecomposition:
    """Rename every bag vertex through mapping (which must cover them all)."""
    try:
        bags = [frozenset(mapping[v] for v in b) for b in td.bags]
    except KeyError as exc:
        raise InputError(f"mapping misses vertex {exc.args[0]}") from exc
    return TreeDecomposition(td.tree, bags)


def _link_components(n: int, edges: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Extra edges chaining the components of (n, edges) into one tree."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    reps = sorted({find(v) for v in range(n)})
    return [(reps[i], reps[i + 1]) for i in range(len(reps) - 1)]


def from_elimination_order(g: Graph, order) -> TreeDecomposition:
    """Fill-in construction: bag of v = v plus its not-yet-eliminated
    neighborhood at elimination time; each bag hangs under the bag of the
    earliest-eliminated such neighbor."""
    order = list(order)
    if sorted(order) != list(range(g.n)):
        raise InputError("order is not a permutation of the vertices")
    if g.n == 0:
        return TreeDecomposition(Graph(1), [frozenset()])
    position = {v: i for i, v in enumerate(order)}
    adj = {v: set(g.neighbors(v)) for v in g.vertices()}
    bags: list[frozenset[int]] = [frozenset()] * g.n
    tree_edges: list[tuple[int, int]] = []
    for i, v in enumerate(order):
        rest = adj[v]
        bags[i] = frozenset(rest | {v})
        if rest:
            nxt = min(rest, key=position.__getitem__)
            tree_edges.append((i, position[nxt]))
        for a in rest:
            for b in rest:
                if a != b:
                    adj[a].add(b)
        for a in rest:
            adj[a].discard(v)
        del adj[v]
    tree_edges += _link_components(g.n, tree_edges)
    return TreeDecomposition(Graph(g.n, tree_edges), bags)


def _greedy_order(g: Graph, method: str, rng: random.Random | None) -> list[int]:
    adj = {v: set(g.neighbors(v)) for v in g.vertices()}
    order = []
    while adj:
        if method == "min-degree":
            crit = {v: len(ns) for v, ns in adj.items()}
        else:  # min-fill
            crit = {
                v: sum(
                    1
                    for a in ns
                    for b in ns
                    if a < b and b not in adj[a]
                )
                for v, ns in adj.items()
            }
        best = min(crit.values())
        candidates = sorted(v for v, c in crit.items() if c == best)
        v = candidates[0] if rng is None else rng.choice(candidates)
        order.append(v)
        ns = adj.pop(v)
        for a in ns:
            adj[a] |= ns - {a}
            adj[a].discard(v)
    return order


def heuristic_decomposition(
    g: Graph, method: str = "min-fill", seed: int = 0, restarts: int = 0
) -> TreeDecomposition:
    """Greedy elimination decomposition, min-fill or min-degree.

    The base run is fully deterministic (ties go to the smallest vertex);
    restarts > 0 adds seeded random-tie-break reruns and keeps the best
    width found.
    """
    if method not in ("min-fill", "min-degree"):
        raise InputError(f"unknown method {method!r}")
    best = from_elimination_order(g, _greedy_order(g, method, None))
    if restarts:
        rng = random.Random(seed)
        for _ in range(restarts):
            cand = from_elimination_order(g, _greedy_order(g, method, rng))
            if width(cand) < width(best):
                best = cand
    return best


def exact_treewidth(g: Graph, limit: int = EXACT_DEFAULT_LIMIT) -> tuple[int, TreeDecomposition]:
    """Exact treewidth with a witness decomposition, for small graphs only.

    Subset dynamic programming over elimination prefixes; refuses graphs
    larger than `limit` vertices (use the heuristics instead).
    """
    if g.n > limit:
        raise GuardError(
            f"exact treewidth is gated to {limit} vertices (graph has {g.n}); "
            "raise the limit or use heuristic_decomposition"
        )
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    tw, order = kernels.exact_treewidth(g.n, masks)
    if g.n == 0:
        return -1, TreeDecomposition(Graph(1), [frozenset()])
    td = from_elimination_order(g, order)
    assert width(td) == tw, "witness width disagrees with the DP value"
    return tw, td


def augment_with_set(td: TreeDecomposition, xs, g: Graph) -> TreeDecomposition:
    """Add the vertex set xs to every bag, turning a decomposition of
    g minus xs (same vertex labels) into one of g.  Width grows by at
    most |xs|."""
    xs = g._check_vertex_set(xs)
    sub, index = induced_subgraph(g, set(g.vertices()) - xs)
    try:
        lowered = relabel(td, index)
    except InputError as exc:
        raise InputError(f"decomposition mentions a vertex outside V \\ X: {exc}") from exc
    check = validate(lowered, sub)
    if not check.ok:
        raise InputError(
            "decomposition is not valid for the graph without the set: "
            + "; ".join(check.violations[:3])
        )
    return TreeDecomposition(td.tree, [bag | xs for bag in td.bags])


def decompose_forest(g: Graph) -> TreeDecomposition:
    """Width <= 1 decomposition of an acyclic graph: one bag per vertex,
    {v, parent(v)} under a rooting of each component, components chained."""
    bags: list[frozenset[int]] = [frozenset()] * g.n
    tree_edges: list[tuple[int, int]] = []
    parent = [-2] * g.n  # -2 unvisited, -1 component root
    for root in g.vertices():
        if parent[root] != -2:
            continue
        parent[root] = -1
        bags[root] = frozenset({root})
        stack = [root]
        while stack:
            v = stack.pop()
            for u in sorted(g.neighbors(v)):
                if parent[u] != -2:
                    if u != parent[v]:
                        raise InputError(
                            f"graph has a cycle through edge ({min(u, v)},{max(u, v)})"
                        )
                    continue
                parent[u] = v
                bags[u] = frozenset({u, v})
                tree_edges.append((u, v))
                stack.append(u)
    if g.n == 0:
        return TreeDecomposition(Graph(1), [frozenset()])
    tree_edges += _link_components(g.n, tree_edges)
    return TreeDecomposition(Graph(g.n, tree_edges), bags)


# --- nice form ---------------------------------------------------------------

LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"
INTRODUCE_EDGE = "introduce_edge"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset[int]
    children: tuple[int, ...]
    vertex: int = -1  # introduce/forget payload
    edge: tuple[int, int] = (-1, -1)  # introduce_edge payload


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Rooted normalized decomposition: leaf (empty bag), introduce(v),
    forget(v), join (two children with equal bags), introduce_edge(uv) with
    every graph edge introduced exactly once.  The root bag is empty."""

    nodes: tuple[NiceNode, ...]
    root: int

    def as_tree_decomposition(self) -> TreeDecomposition:
        edges = [
            (i, c) for i, node in enumerate(self.nodes) for c in node.children
        ]
        return TreeDecomposition(Graph(len(self.nodes), edges), [n.bag for n in self.nodes])

    def width(self) -> int:
        return max(len(n.bag) for n in self.nodes) - 1


class _NiceBuilder:
    def __init__(self):
        self.kinds: list[str] = []
        self.bags: list[frozenset[int]] = []
        self.children: list[tuple[int, ...]] = []
        self.payload_v: list[int] = []
        self.payload_e: list[tuple[int, int]] = []

    def add(self, kind, bag, children=(), vertex=-1, edge=(-1, -1)) -> int:
        self.kinds.append(kind)
        self.bags.append(frozenset(bag))
        self.children.append(tuple(children))
        self.payload_v.append(vertex)
        self.payload_e.append(edge)
        return len(self.kinds) - 1

    def chain_to(self, node: int, target: frozenset[int]) -> int:
        """Forget/introduce one vertex at a time until the bag equals target."""
        bag = self.bags[node]
        for v in sorted(bag - target):
            bag = bag - {v}
            node = self.add(FORGET, bag, (node,), vertex=v)
        for v in sorted(target - bag):
            bag = bag | {v}
            node = self.add(INTRODUCE, bag, (node,), vertex=v)
        return node

    def leaf_chain(self, target: frozenset[int]) -> int:
        return self.chain_to(self.add(LEAF, frozenset()), target)

    def freeze(self, root: int) -> NiceTreeDecomposition:
        nodes = tuple(
            NiceNode(k, b, c, v, e)
            for k, b, c, v, e in zip(
                self.kinds, self.bags, self.children, self.payload_v, self.payload_e
            )
        )
        return NiceTreeDecomposition(nodes, root)


def to_nice(td: TreeDecomposition, g: Graph) -> NiceTreeDecomposition:
    """Normalize a valid decomposition of g to nice form of the same width."""
    check = validate(td, g)
    if not check.ok:
        raise InputError("invalid decomposition: " + "; ".join(check.violations[:3]))
    b = _NiceBuilder()

    # root the host tree at node 0 and build bottom-up (iterative post-order)
    root_t = 0
    order: list[tuple[int, int]] = []  # (node, parent)
    stack = [(root_t, -1)]
    seen = {root_t}
    while stack:
        t, p = stack.pop()
        order.append((t, p))
        for s in td.tree.neighbors(t):
            if s not in seen:
                seen.add(s)
                stack.append((s, t))
    built: dict[int, int] = {}
    for t, _p in reversed(order):
        kids = [s for s, p in order if p == t]
        bag = td.bags[t]
        if not kids:
            built[t] = b.leaf_chain(bag)
            continue
        lifted = [b.chain_to(built[s], bag) for s in kids]
        node = lifted[0]
        for other in lifted[1:]:
            node = b.add(JOIN, bag, (node, other))
        built[t] = node
    top = b.chain_to(built[root_t], frozenset())

    ntd = _place_edge_introductions(b, top, g)
    assert ntd.width() == max(width(td), -1), "normalization changed the width"
    return ntd


def _place_edge_introductions(b: _NiceBuilder, root: int, g: Graph) -> NiceTreeDecomposition:
    """Insert one introduce_edge node per graph edge, directly above an
    introduce node whose fresh vertex completes the edge inside the bag."""
    pending = set(g.edges)
    parent_slot: dict[int, tuple[int, int]] = {}  # node -> (parent, child index)
    for i in range(len(b.kinds)):
        for ci, c in enumerate(b.children[i]):
            parent_slot[c] = (i, ci)

    for i in list(range(len(b.kinds))):
        if b.kinds[i] != INTRODUCE:
            continue
        v = b.payload_v[i]
        here = [
            e
            for e in sorted(pending)
            if (v in e) and e[0] in b.bags[i] and e[1] in b.bags[i]
        ]
        node = i
        for e in here:
            pending.discard(e)
            slot = parent_slot.get(node)
            new = b.add(INTRODUCE_EDGE, b.bags[i], (node,), edge=e)
            if slot is None:
                root = new if node == root else root
            else:
                p, ci = slot
                ch = list(b.children[p])
                ch[ci] = new
                b.children[p] = tuple(ch)
                parent_slot[new] = (p, ci)
            parent_slot[node] = (new, 0)
            node = new
    if pending:
        raise AssertionError(f"edges never introduced: {sorted(pending)}")
    return b.freeze(root)


def check_nice(ntd: NiceTreeDecomposition, g: Graph) -> Validity:
    """Structural checks for nice decompositions (used by solvers and tests)."""
    violations = []
    introduced: list[tuple[int, int]] = []
    for i, node in enumerate(ntd.nodes):
        kids = [ntd.nodes[c] for c in node.children]
        if node.kind == LEAF:
            if node.bag or kids:
                violations.append(f"node {i}: leaf must have an empty bag and no children")
        elif node.kind == INTRODUCE:
            if len(kids) != 1 or node.bag != kids[0].bag | {node.vertex} or node.vertex in kids[0].bag:
                violations.append(f"node {i}: bad introduce of {node.vertex}")
        elif node.kind == FORGET:
            if len(kids) != 1 or node.bag != kids[0].bag - {node.vertex} or node.vertex not in kids[0].bag:
                violations.append(f"node {i}: bad forget of {node.vertex}")
        elif node.kind == JOIN:
            if len(kids) != 2 or any(k.bag != node.bag for k in kids):
                violations.append(f"node {i}: join children must repeat the bag")
        elif node.kind == INTRODUCE_EDGE:
            u, v = node.edge
            if len(kids) != 1 or node.bag != kids[0].bag or u not in node.bag or v not in node.bag:
                violations.append(f"node {i}: bad introduce_edge {node.edge}")
            introduced.append(canon(u, v))
        else:
            violations.append(f"node {i}: unknown kind {node.kind}")
    if ntd.nodes[ntd.root].bag:
        violations.append("root bag must be empty")
    if sorted(introduced) != sorted(g.edges):
        violations.append("introduced edges do not match the graph's edge set exactly once")
    flat = validate(ntd.as_tree_decomposition(), g)
    violations.extend(flat.violations)
    return Validity(tuple(violations))


# --- JSON wire format --------------------------------------------------------
#
# {"nodes": int, "tree_edges": [[a,b],...], "bags": [[v,...],...]}

def decomposition_to_json(td: TreeDecomposition) -> dict:
    return {
        "nodes": td.tree.n,
        "tree_edges": [list(e) for e in td.tree.edges],
        "bags": [sorted(b) for b in td.bags],
    }


def decomposition_from_json(obj: dict) -> TreeDecomposition:
    try:
        tree = Graph(obj["nodes"], [tuple(e) for e in obj["tree_edges"]])
        return TreeDecomposition(tree, [frozenset(b) for b in obj["bags"]])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed decomposition object: {exc}") from exc


def decomposition_of_subset(g: Graph, xs, method: str = "min-fill") -> TreeDecomposition:
    """Heuristic decomposition of g's induced subgraph on V \\ xs, expressed
    in g's original vertex labels."""
    keep = sorted(set(g.vertices()) - g._check_vertex_set(xs))
    sub, index = induced_subgraph(g, keep)
    back = {i: v for v, i in index.items()}
    return relabel(heuristic_decomposition(sub, method), back)
