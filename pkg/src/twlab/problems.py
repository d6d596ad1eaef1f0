"""Problem instance types with exact brute-force oracles.

Every oracle returns a witness (or None for "no") and validates the witness
against a direct transcription of the defining condition before returning,
so a yes-answer is always certified.  Witnesses are deterministic: the
lexicographically first one under the documented search order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from twlab import kernels
from twlab.errors import InputError
from twlab.graphs import (
    EdgeWeighting,
    Graph,
    Orientation,
    PartitionedGraph,
    all_outdegrees,
    graph_from_json,
    graph_to_json,
    is_clique,
)

DEFAULT_WEIGHT_CEILING = 10**6

# the compiled kernels use 64-bit integers; values at or beyond this bound
# are routed to the pure-Python twins, which use arbitrary precision
_INT64_SAFE = 1 << 62


# --- instance types ----------------------------------------------------------

@dataclass(frozen=True)
class ListColoringInstance:
    graph: Graph
    lists: tuple[frozenset[int], ...]  # allowed colors per vertex; may be empty

    def __init__(self, graph: Graph, lists):
        lists = tuple(frozenset(l) for l in lists)
        if len(lists) != graph.n:
            raise InputError(f"{len(lists)} lists for {graph.n} vertices")
        for v, l in enumerate(lists):
            if any(not isinstance(c, int) or c < 1 for c in l):
                raise InputError(f"colors must be positive integers (vertex {v})")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "lists", lists)


@dataclass(frozen=True)
class PrecoloringExtensionInstance:
    graph: Graph
    precolor: tuple[tuple[int, int], ...]  # (vertex, color) pairs, sorted
    r: int

    def __init__(self, graph: Graph, precolor, r: int):
        if r < 1:
            raise InputError(f"r must be positive, got {r}")
        items = sorted(dict(precolor).items()) if not isinstance(precolor, dict) else sorted(precolor.items())
        for v, c in items:
            graph._check_vertex(v)
            if not 1 <= c <= r:
                raise InputError(f"precolor {c} of vertex {v} outside 1..{r}")
        cmap = dict(items)
        for u, v in graph.edges:
            if u in cmap and v in cmap and cmap[u] == cmap[v]:
                raise InputError(f"precoloring is not proper on edge ({u},{v})")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "precolor", tuple(items))
        object.__setattr__(self, "r", r)

    @property
    def precolor_map(self) -> dict[int, int]:
        return dict(self.precolor)


@dataclass(frozen=True)
class EquitableColoringInstance:
    graph: Graph
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise InputError(f"r must be positive, got {self.r}")


@dataclass(frozen=True)
class GeneralFactorInstance:
    graph: Graph
    cardinality_sets: tuple[frozenset[int], ...]  # allowed incident counts per vertex

    def __init__(self, graph: Graph, cardinality_sets):
        sets = tuple(frozenset(s) for s in cardinality_sets)
        if len(sets) != graph.n:
            raise InputError(f"{len(sets)} cardinality sets for {graph.n} vertices")
        for v, s in enumerate(sets):
            if any(k < 0 or k > graph.degree(v) for k in s):
                raise InputError(
                    f"cardinality set of vertex {v} must lie within 0..deg={graph.degree(v)}"
                )
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "cardinality_sets", sets)


@dataclass(frozen=True)
class BooleanRelation:
    arity: int
    tuples: frozenset[tuple[int, ...]]

    def __init__(self, arity: int, tuples):
        if arity < 1:
            raise InputError(f"arity must be positive, got {arity}")
        tuples = frozenset(tuple(t) for t in tuples)
        for t in tuples:
            if len(t) != arity or any(b not in (0, 1) for b in t):
                raise InputError(f"tuple {t} is not a 0/1 sequence of length {arity}")
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "tuples", tuples)


@dataclass(frozen=True)
class Constraint:
    scope: tuple[int, ...]
    relation: BooleanRelation

    def __init__(self, scope, relation: BooleanRelation):
        scope = tuple(scope)
        if len(scope) != relation.arity:
            raise InputError(f"scope length {len(scope)} != arity {relation.arity}")
        if len(set(scope)) != len(scope):
            raise InputError(f"scope variables must be distinct: {scope}")
        object.__setattr__(self, "scope", scope)
        object.__setattr__(self, "relation", relation)


@dataclass(frozen=True)
class GensatInstance:
    """Conjunction of explicit Boolean relations over variables 0..m-1."""

    num_variables: int
    constraints: tuple[Constraint, ...]

    def __init__(self, num_variables: int, constraints):
        if num_variables < 0:
            raise InputError("variable count must be non-negative")
        constraints = tuple(constraints)
        for c in constraints:
            for x in c.scope:
                if not 0 <= x < num_variables:
                    raise InputError(f"scope variable {x} outside 0..{num_variables - 1}")
        object.__setattr__(self, "num_variables", num_variables)
        object.__setattr__(self, "constraints", constraints)


@dataclass(frozen=True)
class ChosenOutdegreeInstance:
    graph: Graph
    weights: EdgeWeighting
    rho: tuple[int, ...]  # per-vertex outgoing-weight cap

    def __init__(self, graph: Graph, weights: EdgeWeighting, rho):
        rho = tuple(rho)
        if weights.graph != graph:
            raise InputError("weighting belongs to a different graph")
        if len(rho) != graph.n:
            raise InputError(f"{len(rho)} caps for {graph.n} vertices")
        if any(r < 0 for r in rho):
            raise InputError("caps must be non-negative")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "rho", rho)


@dataclass(frozen=True)
class MinMaxOutdegreeInstance:
    """Uniform-cap variant; weights are integers standing in for a unary
    encoding, so the total weight is capped (configurable ceiling)."""

    graph: Graph
    weights: EdgeWeighting
    r: int

    def __init__(self, graph: Graph, weights: EdgeWeighting, r: int,
                 weight_ceiling: int = DEFAULT_WEIGHT_CEILING):
        if r < 1:
            raise InputError(f"r must be positive, got {r}")
        if weights.graph != graph:
            raise InputError("weighting belongs to a different graph")
        if weights.total_weight > weight_ceiling:
            raise InputError(
                f"total weight {weights.total_weight} exceeds the ceiling "
                f"{weight_ceiling} (weights are treated as unary)"
            )
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "r", r)


# --- witness checkers (direct transcriptions of the defining conditions) -----

def is_proper_coloring(g: Graph, colors: dict[int, int]) -> bool:
    return all(v in colors for v in g.vertices()) and all(
        colors[u] != colors[v] for u, v in g.edges
    )


def check_list_coloring(inst: ListColoringInstance, colors: dict[int, int]) -> bool:
    return is_proper_coloring(inst.graph, colors) and all(
        colors[v] in inst.lists[v] for v in inst.graph.vertices()
    )


def check_precoloring(inst: PrecoloringExtensionInstance, colors: dict[int, int]) -> bool:
    return (
        is_proper_coloring(inst.graph, colors)
        and all(1 <= colors[v] <= inst.r for v in inst.graph.vertices())
        and all(colors[v] == c for v, c in inst.precolor)
    )


def check_equitable(inst: EquitableColoringInstance, colors: dict[int, int]) -> bool:
    if not is_proper_coloring(inst.graph, colors):
        return False
    if any(not 1 <= colors[v] <= inst.r for v in inst.graph.vertices()):
        return False
    sizes = [0] * inst.r  # unused colors count as empty classes
    for v in inst.graph.vertices():
        sizes[colors[v] - 1] += 1
    return max(sizes) - min(sizes) <= 1


def check_general_factor(inst: GeneralFactorInstance, chosen: frozenset) -> bool:
    if not chosen <= inst.graph.edge_set:
        return False
    deg = [0] * inst.graph.n
    for u, v in chosen:
        deg[u] += 1
        deg[v] += 1
    return all(deg[v] in inst.cardinality_sets[v] for v in inst.graph.vertices())


def check_gensat(inst: GensatInstance, tau) -> bool:
    tau = tuple(tau)
    if len(tau) != inst.num_variables or any(b not in (0, 1) for b in tau):
        return False
    return all(
        tuple(tau[x] for x in c.scope) in c.relation.tuples for c in inst.constraints
    )


def check_admissible(inst: ChosenOutdegreeInstance, lam: Orientation) -> bool:
    out = all_outdegrees(inst.graph, inst.weights, lam)
    return all(out[v] <= inst.rho[v] for v in inst.graph.vertices())


def check_minmax(inst: MinMaxOutdegreeInstance, lam: Orientation) -> bool:
    out = all_outdegrees(inst.graph, inst.weights, lam)
    return all(o <= inst.r for o in out)


# --- brute-force oracles ------------------------------------------------------

def _pick_backend(largest_value: int):
    """Selected kernel backend, or the pure twin when a value would not fit
    the compiled backend's 64-bit integers."""
    if largest_value >= _INT64_SAFE:
        from twlab.kernels import _pykernels

        return _pykernels
    return kernels


def degeneracy_order(g: Graph) -> list[int]:
    """Vertices ordered so each has few earlier neighbors: reverse of a
    repeated minimum-degree peel (ties to the smallest index)."""
    adj = {v: set(g.neighbors(v)) for v in g.vertices()}
    removed = []
    while adj:
        v = min(adj, key=lambda x: (len(adj[x]), x))
        removed.append(v)
        for u in adj[v]:
            adj[u].discard(v)
        del adj[v]
    removed.reverse()
    return removed


def bf_list_coloring(inst: ListColoringInstance) -> dict[int, int] | None:
    """Backtracking over vertices in degeneracy order; colors tried in
    ascending order."""
    g = inst.graph
    if any(not l for l in inst.lists):
        return None
    order = degeneracy_order(g)
    rank = {v: i for i, v in enumerate(order)}
    adj_offsets = [0]
    adj_targets: list[int] = []
    pal_offsets = [0]
    pal_values: list[int] = []
    for v in order:
        adj_targets.extend(rank[u] for u in sorted(g.neighbors(v), key=rank.__getitem__))
        adj_offsets.append(len(adj_targets))
        pal_values.extend(sorted(inst.lists[v]))
        pal_offsets.append(len(pal_values))
    search = _pick_backend(max(pal_values, default=0)).list_color_search
    got = search(g.n, adj_offsets, adj_targets, pal_offsets, pal_values)
    if got is None:
        return None
    colors = {order[i]: c for i, c in enumerate(got)}
    assert check_list_coloring(inst, colors)
    return colors


def bf_precoloring(inst: PrecoloringExtensionInstance) -> dict[int, int] | None:
    """Backtracking over uncolored vertices in index order, colors 1..r
    ascending."""
    g = inst.graph
    colors = dict(inst.precolor)
    free = [v for v in g.vertices() if v not in colors]

    def place(i: int) -> bool:
        if i == len(free):
            return True
        v = free[i]
        for c in range(1, inst.r + 1):
            if all(colors.get(u) != c for u in g.neighbors(v)):
                colors[v] = c
                if place(i + 1):
                    return True
                del colors[v]
        return False

    if not place(0):
        return None
    assert check_precoloring(inst, colors)
    return colors


def bf_equitable(inst: EquitableColoringInstance) -> dict[int, int] | None:
    """Backtracking over vertices in index order; class sizes are pruned
    against the ceiling floor(n/r)+1 and checked exactly at the end."""
    g, r = inst.graph, inst.r
    cap = -(-g.n // r) if g.n else 1  # ceil(n / r); every class size is floor or ceil
    colors: dict[int, int] = {}
    sizes = [0] * r

    def place(v: int) -> bool:
        if v == g.n:
            return max(sizes) - min(sizes) <= 1
        for c in range(1, r + 1):
            if sizes[c - 1] >= cap:
                continue
            if any(colors.get(u) == c for u in g.neighbors(v)):
                continue
            colors[v] = c
            sizes[c - 1] += 1
            if place(v + 1):
                return True
            sizes[c - 1] -= 1
            del colors[v]
        return False

    if not place(0):
        return None
    assert check_equitable(inst, colors)
    return colors


def bf_general_factor(inst: GeneralFactorInstance) -> frozenset | None:
    """Include/exclude search over edges in canonical order (exclude first),
    pruning on per-vertex degree bounds."""
    g = inst.graph
    m = len(g.edges)
    incident_left = [g.degree(v) for v in g.vertices()]
    deg = [0] * g.n
    lo = [min(s) if s else None for s in inst.cardinality_sets]
    hi = [max(s) if s else None for s in inst.cardinality_sets]
    if any(l is None for l in lo):
        return None  # an empty cardinality set is unsatisfiable
    chosen: list[tuple[int, int]] = []

    def feasible(v: int) -> bool:
        return deg[v] <= hi[v] and deg[v] + incident_left[v] >= lo[v]

    def place(i: int) -> bool:
        if i == m:
            return all(deg[v] in inst.cardinality_sets[v] for v in g.vertices())
        u, v = g.edges[i]
        incident_left[u] -= 1
        incident_left[v] -= 1
        if feasible(u) and feasible(v) and place(i + 1):
            return True
        deg[u] += 1
        deg[v] += 1
        chosen.append((u, v))
        if feasible(u) and feasible(v) and place(i + 1):
            return True
        chosen.pop()
        deg[u] -= 1
        deg[v] -= 1
        incident_left[u] += 1
        incident_left[v] += 1
        return False

    if not place(0):
        return None
    out = frozenset(chosen)
    assert check_general_factor(inst, out)
    return out


def _gensat_arrays(inst: GensatInstance):
    scope_offsets = [0]
    scope_vars: list[int] = []
    tup_offsets = [0]
    tup_masks: list[int] = []
    for c in inst.constraints:
        scope_vars.extend(c.scope)
        scope_offsets.append(len(scope_vars))
        for t in sorted(c.relation.tuples):
            tup_masks.append(sum(b << p for p, b in enumerate(t)))
        tup_offsets.append(len(tup_masks))
    return scope_offsets, scope_vars, tup_offsets, tup_masks


def bf_gensat(inst: GensatInstance) -> tuple[int, ...] | None:
    """Assignment search in variable-index order (0 before 1), pruning any
    prefix some constraint can no longer match."""
    arrays = _gensat_arrays(inst)
    if max((c.relation.arity for c in inst.constraints), default=0) > 64:
        # the compiled kernel packs tuples into 64-bit masks; fall back
        from twlab.kernels import _pykernels

        search = _pykernels.gensat_search
    else:
        search = kernels.gensat_search
    got = search(inst.num_variables, *arrays)
    if got is None:
        return None
    tau = tuple(got)
    assert check_gensat(inst, tau)
    return tau


def bf_chosen_outdegree(inst: ChosenOutdegreeInstance) -> Orientation | None:
    """Orientation search with capacity propagation (see kernels).

    Edges are searched heaviest first (ties by canonical index) so the most
    constrained decisions come early; the witness is the lexicographically
    first admissible direction vector under that documented order, with the
    smaller endpoint tried as tail first.
    """
    g = inst.graph
    w = inst.weights.weights
    order = sorted(range(len(g.edges)), key=lambda i: (-w[i], i))
    search = _pick_backend(max(max(w, default=0), max(inst.rho, default=0))).orient_search
    got = search(
        g.n,
        [g.edges[i][0] for i in order],
        [g.edges[i][1] for i in order],
        [w[i] for i in order],
        list(inst.rho),
    )
    if got is None:
        return None
    dirs = [0] * len(g.edges)
    for pos, i in enumerate(order):
        dirs[i] = got[pos]
    lam = Orientation(
        g, [(e if d == 0 else (e[1], e[0])) for e, d in zip(g.edges, dirs)]
    )
    assert check_admissible(inst, lam)
    return lam


def enumerate_orientations(g: Graph):
    """All 2^|E| orientations in lexicographic direction order (test oracle
    for the propagation search; keep |E| small)."""
    m = len(g.edges)
    for bits in range(1 << m):
        yield Orientation(
            g,
            [
                (e if not (bits >> (m - 1 - i)) & 1 else (e[1], e[0]))
                for i, e in enumerate(g.edges)
            ],
        )


def bf_min_max_outdegree(inst: MinMaxOutdegreeInstance) -> Orientation | None:
    """Decision via the chosen-cap search with every cap equal to r."""
    chosen = ChosenOutdegreeInstance(inst.graph, inst.weights, (inst.r,) * inst.graph.n)
    lam = bf_chosen_outdegree(chosen)
    if lam is not None:
        assert check_minmax(inst, lam)
    return lam


def bf_min_max_value(g: Graph, w: EdgeWeighting) -> int:
    """Least r admitting an orientation with all outgoing weights <= r
    (binary search over [0, total weight])."""
    if not g.edges:
        return 0
    lo, hi = 0, w.total_weight

    def ok(r: int) -> bool:
        inst = ChosenOutdegreeInstance(g, w, (r,) * g.n)
        return bf_chosen_outdegree(inst) is not None

    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def bf_partitioned_clique(pg: PartitionedGraph) -> tuple[int, ...] | None:
    """First transversal (one vertex per part, parts in order, members by
    rank) that induces a clique."""
    g = pg.graph
    picked: list[int] = []

    def place(i: int) -> bool:
        if i == pg.k:
            return True
        for v in pg.parts[i]:
            if all(g.has_edge(u, v) for u in picked):
                picked.append(v)
                if place(i + 1):
                    return True
                picked.pop()
        return False

    if not place(0):
        return None
    out = tuple(picked)
    assert is_clique(g, out)
    return out


def bf_clique(g: Graph, k: int) -> tuple[int, ...] | None:
    """First k-subset (lexicographic) of vertices inducing a clique."""
    if k < 0:
        raise InputError("k must be non-negative")
    for cand in itertools.combinations(range(g.n), k):
        if is_clique(g, cand):
            return cand
    return None


# --- constraint graphs --------------------------------------------------------

def build_primal(inst: GensatInstance) -> Graph:
    """Variables, adjacent when they share a constraint."""
    edges = {
        (min(x, y), max(x, y))
        for c in inst.constraints
        for x, y in itertools.combinations(c.scope, 2)
    }
    return Graph(inst.num_variables, sorted(edges))


def build_dual(inst: GensatInstance) -> Graph:
    """Constraints (by position), adjacent when they share a variable."""
    scopes = [set(c.scope) for c in inst.constraints]
    edges = [
        (i, j)
        for i in range(len(scopes))
        for j in range(i + 1, len(scopes))
        if scopes[i] & scopes[j]
    ]
    return Graph(len(scopes), edges)


def build_incidence(inst: GensatInstance) -> Graph:
    """Bipartite: variables 0..m-1, then constraints m..m+|S|-1; a pair is
    adjacent when the variable occurs in the constraint."""
    m = inst.num_variables
    edges = [
        (x, m + j) for j, c in enumerate(inst.constraints) for x in sorted(c.scope)
    ]
    return Graph(m + len(inst.constraints), edges)


# --- JSON wire format -----------------------------------------------------------
#
# Discriminated by "type"; graph fields are embedded flat (n, edges, weights).

def instance_to_json(inst) -> dict:
    if isinstance(inst, ListColoringInstance):
        obj = graph_to_json(inst.graph)
        obj.update(type="list_coloring", lists=[sorted(l) for l in inst.lists])
        return obj
    if isinstance(inst, PrecoloringExtensionInstance):
        obj = graph_to_json(inst.graph)
        obj.update(
            type="precoloring", precolor=[list(p) for p in inst.precolor], r=inst.r
        )
        return obj
    if isinstance(inst, EquitableColoringInstance):
        obj = graph_to_json(inst.graph)
        obj.update(type="equitable", r=inst.r)
        return obj
    if isinstance(inst, GeneralFactorInstance):
        obj = graph_to_json(inst.graph)
        obj.update(
            type="general_factor",
            cardinality_sets=[sorted(s) for s in inst.cardinality_sets],
        )
        return obj
    if isinstance(inst, GensatInstance):
        relations: list[BooleanRelation] = []
        rel_index: dict[BooleanRelation, int] = {}
        constraints = []
        for c in inst.constraints:
            if c.relation not in rel_index:
                rel_index[c.relation] = len(relations)
                relations.append(c.relation)
            constraints.append(
                {"scope": list(c.scope), "relation": rel_index[c.relation]}
            )
        return {
            "type": "gensat",
            "variables": inst.num_variables,
            "relations": [
                {"arity": r.arity, "tuples": [list(t) for t in sorted(r.tuples)]}
                for r in relations
            ],
            "constraints": constraints,
        }
    if isinstance(inst, ChosenOutdegreeInstance):
        obj = graph_to_json(inst.graph)
        obj.update(
            type="chosen_outdegree",
            weights=list(inst.weights.weights),
            rho=list(inst.rho),
        )
        return obj
    if isinstance(inst, MinMaxOutdegreeInstance):
        obj = graph_to_json(inst.graph)
        obj.update(
            type="minmax_outdegree", weights=list(inst.weights.weights), r=inst.r
        )
        return obj
    raise InputError(f"unknown instance type {type(inst).__name__}")


def instance_from_json(obj: dict):
    try:
        kind = obj["type"]
        if kind == "list_coloring":
            return ListColoringInstance(graph_from_json(obj), obj["lists"])
        if kind == "precoloring":
            return PrecoloringExtensionInstance(
                graph_from_json(obj), [tuple(p) for p in obj["precolor"]], obj["r"]
            )
        if kind == "equitable":
            return EquitableColoringInstance(graph_from_json(obj), obj["r"])
        if kind == "general_factor":
            return GeneralFactorInstance(graph_from_json(obj), obj["cardinality_sets"])
        if kind == "gensat":
            relations = [
                BooleanRelation(r["arity"], [tuple(t) for t in r["tuples"]])
                for r in obj["relations"]
            ]
            constraints = [
                Constraint(c["scope"], relations[c["relation"]])
                for c in obj["constraints"]
            ]
            return GensatInstance(obj["variables"], constraints)
        if kind == "chosen_outdegree":
            g = graph_from_json(obj)
            return ChosenOutdegreeInstance(
                g, EdgeWeighting(g, obj["weights"]), obj["rho"]
            )
        if kind == "minmax_outdegree":
            g = graph_from_json(obj)
            return MinMaxOutdegreeInstance(
                g, EdgeWeighting(g, obj["weights"]), obj["r"]
            )
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"malformed instance object: {exc}") from exc
    raise InputError(f"unknown instance type {obj.get('type')!r}")
