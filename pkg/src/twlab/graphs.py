"""Simple undirected graphs with edge weightings, balanced partitions, and
edge orientations.

Vertices are dense 0-based integers.  Edges are stored canonically with the
smaller endpoint first; all maps keyed by edges use the canonical form.  All
values are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from twlab.errors import InputError

Edge = tuple[int, int]


def canon(u: int, v: int) -> Edge:
    """Canonical form of the edge {u, v}: smaller endpoint first."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """A finite simple undirected graph on vertices 0..n-1.

    Loops, duplicate edges, and out-of-range endpoints are rejected at
    construction time.
    """

    n: int
    edges: tuple[Edge, ...]
    _adj: tuple[frozenset[int], ...] = field(repr=False, compare=False, default=())

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise InputError(f"vertex count must be non-negative, got {n}")
        seen: set[Edge] = set()
        canonical: list[Edge] = []
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise InputError(f"loop at vertex {u} is not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) out of range for n={n}")
            e = canon(u, v)
            if e in seen:
                raise InputError(f"duplicate edge {e}")
            seen.add(e)
            canonical.append(e)
            adj[u].add(v)
            adj[v].add(u)
        canonical.sort()
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(canonical))
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))

    @property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u] if 0 <= u < self.n else False

    def neighbors(self, v: int) -> frozenset[int]:
        self._check_vertex(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise InputError(f"vertex {v} out of range for n={self.n}")

    def _check_vertex_set(self, xs) -> frozenset[int]:
        xs = frozenset(xs)
        for v in xs:
            self._check_vertex(v)
        return xs


@dataclass(frozen=True)
class EdgeWeighting:
    """Positive integer weights, one per edge of a companion graph."""

    graph: Graph
    weights: tuple[int, ...]  # aligned with graph.edges

    def __init__(self, graph: Graph, weights):
        if isinstance(weights, dict):
            if set(weights) != set(graph.edges):
                missing = set(graph.edges) - set(weights)
                extra = set(weights) - set(graph.edges)
                raise InputError(
                    f"weight domain mismatch: missing={missing} extra={extra}"
                )
            weights = tuple(weights[e] for e in graph.edges)
        else:
            weights = tuple(weights)
        if len(weights) != len(graph.edges):
            raise InputError(
                f"{len(weights)} weights for {len(graph.edges)} edges"
            )
        for e, w in zip(graph.edges, weights):
            if not isinstance(w, int) or w < 1:
                raise InputError(f"weight of edge {e} must be a positive integer, got {w}")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "weights", weights)

    def weight(self, u: int, v: int) -> int:
        return self.weights[self.graph.edges.index(canon(u, v))]

    def as_dict(self) -> dict[Edge, int]:
        return dict(zip(self.graph.edges, self.weights))

    @property
    def total_weight(self) -> int:
        return sum(self.weights)


@dataclass(frozen=True)
class PartitionedGraph:
    """A k-partite graph with equal-size parts and no intra-part edges.

    Parts are stored as sorted tuples; the position of a vertex inside its
    sorted part is its member rank, used by generators and reductions.
    """

    graph: Graph
    parts: tuple[tuple[int, ...], ...]

    def __init__(self, graph: Graph, parts):
        parts = tuple(tuple(sorted(p)) for p in parts)
        seen: set[int] = set()
        for p in parts:
            for v in p:
                graph._check_vertex(v)
                if v in seen:
                    raise InputError(f"vertex {v} appears in two parts")
                seen.add(v)
        if len(seen) != graph.n:
            raise InputError("parts do not cover every vertex")
        sizes = {len(p) for p in parts}
        if len(sizes) > 1:
            raise InputError(f"parts must have equal sizes, got {sorted(len(p) for p in parts)}")
        owner = {v: i for i, p in enumerate(parts) for v in p}
        for u, v in graph.edges:
            if owner[u] == owner[v]:
                raise InputError(f"edge ({u},{v}) lies inside part {owner[u]}")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "parts", parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    @property
    def part_size(self) -> int:
        return len(self.parts[0]) if self.parts else 0


@dataclass(frozen=True)
class Orientation:
    """A direction (tail, head) for every edge of a companion graph."""

    graph: Graph
    direction: tuple[Edge, ...]  # aligned with graph.edges; each a reordering of its edge

    def __init__(self, graph: Graph, direction):
        if isinstance(direction, dict):
            if set(direction) != set(graph.edges):
                raise InputError("orientation domain must equal the edge set")
            direction = tuple(direction[e] for e in graph.edges)
        else:
            direction = tuple(tuple(d) for d in direction)
        if len(direction) != len(graph.edges):
            raise InputError(
                f"{len(direction)} directions for {len(graph.edges)} edges"
            )
        for e, d in zip(graph.edges, direction):
            if d != e and d != (e[1], e[0]):
                raise InputError(f"direction {d} is not an ordering of edge {e}")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "direction", direction)

    def tail(self, u: int, v: int) -> int:
        return self.direction[self.graph.edges.index(canon(u, v))][0]

    def as_dict(self) -> dict[Edge, Edge]:
        return dict(zip(self.graph.edges, self.direction))


def induced_subgraph(g: Graph, xs) -> tuple[Graph, dict[int, int]]:
    """Subgraph induced by the vertex set xs, reindexed to 0..|xs|-1.

    Returns the subgraph and the old->new index map (sorted order).
    """
    xs = g._check_vertex_set(xs)
    order = sorted(xs)
    index = {v: i for i, v in enumerate(order)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in xs and v in xs]
    return Graph(len(order), edges), index


def remove_vertices(g: Graph, xs) -> Graph:
    """The graph left after deleting xs, reindexed to dense integers."""
    xs = g._check_vertex_set(xs)
    sub, _ = induced_subgraph(g, set(g.vertices()) - xs)
    return sub


def subgraph_without(g: Graph, xs) -> Graph:
    """Like remove_vertices but keeps the original vertex labels.

    Deleted vertices remain as isolated ids with their incident edges removed;
    useful when a decomposition of the remainder must stay label-compatible
    with g.
    """
    xs = g._check_vertex_set(xs)
    edges = [e for e in g.edges if e[0] not in xs and e[1] not in xs]
    return Graph(g.n, edges)


def is_clique(g: Graph, s) -> bool:
    """True iff every unordered pair in s is an edge of g (vacuously true
    for |s| <= 1)."""
    s = sorted(g._check_vertex_set(s))
    return all(g.has_edge(u, v) for i, u in enumerate(s) for v in s[i + 1 :])


def weighted_outdegree(g: Graph, w: EdgeWeighting, lam: Orientation, v: int) -> int:
    """Total weight of the edges directed out of v under lam."""
    if w.graph is not g and w.graph != g:
        raise InputError("weighting does not belong to this graph")
    if lam.graph is not g and lam.graph != g:
        raise InputError("orientation does not belong to this graph")
    g._check_vertex(v)
    return sum(
        wt for d, wt in zip(lam.direction, w.weights) if d[0] == v
    )


def all_outdegrees(g: Graph, w: EdgeWeighting, lam: Orientation) -> list[int]:
    """Weighted outdegree of every vertex in one pass."""
    out = [0] * g.n
    for d, wt in zip(lam.direction, w.weights):
        out[d[0]] += wt
    return out


# --- JSON wire format -------------------------------------------------------
#
# {"n": int, "edges": [[u,v],...]} with u < v; optional "weights" aligned
# with "edges"; optional "parts"; optional "orientation" ([tail, head] pairs
# aligned with "edges").

def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


def graph_from_json(obj: dict) -> Graph:
    try:
        return Graph(obj["n"], [tuple(e) for e in obj["edges"]])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed graph object: {exc}") from exc


def weighting_to_json(w: EdgeWeighting) -> dict:
    obj = graph_to_json(w.graph)
    obj["weights"] = list(w.weights)
    return obj


def weighting_from_json(obj: dict) -> EdgeWeighting:
    g = graph_from_json(obj)
    try:
        return EdgeWeighting(g, list(obj["weights"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed weighting object: {exc}") from exc


def partitioned_to_json(pg: PartitionedGraph) -> dict:
    obj = graph_to_json(pg.graph)
    obj["parts"] = [list(p) for p in pg.parts]
    return obj


def partitioned_from_json(obj: dict) -> PartitionedGraph:
    g = graph_from_json(obj)
    try:
        return PartitionedGraph(g, [tuple(p) for p in obj["parts"]])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed partitioned graph object: {exc}") from exc


def orientation_to_json(lam: Orientation) -> dict:
    obj = graph_to_json(lam.graph)
    obj["orientation"] = [list(d) for d in lam.direction]
    return obj


def orientation_from_json(obj: dict) -> Orientation:
    g = graph_from_json(obj)
    try:
        return Orientation(g, [tuple(d) for d in obj["orientation"]])
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed orientation object: {exc}") from exc
