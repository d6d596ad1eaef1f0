"""Gadget reductions between problem families.

Every reduction returns a ReductionOutput bundling the target instance, a
constructively built witness tree decomposition certifying a width bound,
and a provenance index mapping gadget vertices to their roles.  The witness
is validated (and its width checked against the claimed bound) before the
output is returned.

Gadget role tags used by the provenance index:

* ``v``       selector vertex standing for a part (list-coloring target)
* ``pad``     conflict vertex for a nonadjacent cross pair
* ``pendant`` degree-one precolored vertex encoding a forbidden color
* ``a``       per-part pick vertex (budget 1, one unit edge per member)
* ``u x y``   per-member lever triple relaying the pick to the hubs
* ``b c``     per-pair budget hubs on the low/high side
* ``d``       per-pair vertex forcing exactly one candidate inward
* ``e``       candidate vertex for one cross edge of a part pair
* ``xv yv``   slack triangle attached to a vertex with unused budget
"""

from __future__ import annotations

from dataclasses import dataclass, field

from twlab.errors import InputError
from twlab.graphs import (
    EdgeWeighting,
    Graph,
    Orientation,
    PartitionedGraph,
    canon,
    graph_to_json,
    induced_subgraph,
    is_clique,
)
from twlab.problems import (
    ChosenOutdegreeInstance,
    BooleanRelation,
    Constraint,
    GensatInstance,
    ListColoringInstance,
    MinMaxOutdegreeInstance,
    PrecoloringExtensionInstance,
    build_dual,
    build_incidence,
    check_admissible,
    instance_to_json,
)
from twlab.treewidth import (
    TreeDecomposition,
    augment_with_set,
    decompose_forest,
    decomposition_to_json,
    heuristic_decomposition,
    relabel,
    validate,
    width,
)


@dataclass(frozen=True)
class GadgetParameters:
    """Numeric frame of the orientation gadget: member ranks are encoded in
    base radix = n + 1, and big = k * (radix^3 + radix^2) exceeds the total
    special weight at any lever vertex."""

    k: int
    n: int

    @property
    def radix(self) -> int:
        return self.n + 1

    @property
    def big(self) -> int:
        r = self.radix
        return self.k * (r**3 + r**2)


class GadgetIndex:
    """Bijection between gadget vertex ids and role tags like ('e', i, ip, q, qp).

    Part indices and member ranks are 0-based throughout.
    """

    def __init__(self, pairs):
        self._vertex_of: dict[tuple, int] = {}
        self._role_of: dict[int, tuple] = {}
        for tag, vertex in pairs:
            tag = tuple(tag)
            if tag in self._vertex_of or vertex in self._role_of:
                raise InputError(f"index entry ({tag}, {vertex}) breaks bijectivity")
            self._vertex_of[tag] = vertex
            self._role_of[vertex] = tag

    def vertex(self, *tag) -> int:
        return self._vertex_of[tuple(tag)]

    def role(self, vertex: int) -> tuple:
        return self._role_of[vertex]

    def __len__(self) -> int:
        return len(self._vertex_of)

    def entries(self) -> list[dict]:
        fields_of = {
            "a": ("i",),
            "u": ("i", "j"),
            "x": ("i", "j"),
            "y": ("i", "j"),
            "b": ("i", "ip"),
            "c": ("i", "ip"),
            "d": ("i", "ip"),
            "e": ("i", "ip", "q", "qp"),
        }
        out = []
        for tag, vertex in sorted(self._vertex_of.items(), key=lambda kv: kv[1]):
            entry = {"tag": tag[0]}
            entry.update(zip(fields_of[tag[0]], tag[1:]))
            entry["vertex"] = vertex
            out.append(entry)
        return out


@dataclass(frozen=True)
class ReductionOutput:
    """Target instance + witness decomposition + provenance.

    ``meta`` carries in-memory companions (source instance, gadget index,
    secondary graphs/witnesses, notes); it is not part of the JSON format
    except for the documented dual/incidence extras.
    """

    instance: object
    witness: TreeDecomposition
    claimed_width_bound: int
    index: tuple[dict, ...]
    meta: dict = field(default_factory=dict, compare=False, repr=False)


def _certify(instance, witness, bound, index, graph, meta) -> ReductionOutput:
    check = validate(witness, graph)
    if not check.ok:
        raise AssertionError(
            "constructed witness is invalid: " + "; ".join(check.violations[:3])
        )
    if width(witness) > bound:
        raise AssertionError(f"witness width {width(witness)} exceeds claimed bound {bound}")
    return ReductionOutput(instance, witness, bound, tuple(index), meta)


# --- clique selection via list coloring ---------------------------------------

def pc_to_list_coloring(pg: PartitionedGraph) -> ReductionOutput:
    """One selector vertex per part, its list naming the part's members
    (color of vertex v is v+1); every nonadjacent cross pair gets a pad
    vertex adjacent to both selectors whose list holds exactly those two
    member colors.  Colorable iff the source has a transversal clique."""
    k = pg.k
    g = pg.graph
    color = {v: v + 1 for v in g.vertices()}
    lists: list[frozenset[int]] = [frozenset(color[v] for v in part) for part in pg.parts]
    edges: list[tuple[int, int]] = []
    index = [{"tag": "v", "i": i, "vertex": i} for i in range(k)]
    next_id = k
    for i in range(k):
        for j in range(i + 1, k):
            for u in pg.parts[i]:
                for v in pg.parts[j]:
                    if g.has_edge(u, v):
                        continue
                    lists.append(frozenset({color[u], color[v]}))
                    edges.append((i, next_id))
                    edges.append((j, next_id))
                    index.append({"tag": "pad", "u": u, "v": v, "vertex": next_id})
                    next_id += 1
    h = Graph(next_id, edges)
    inst = ListColoringInstance(h, lists)

    selectors = frozenset(range(k))
    if next_id == k:
        td = TreeDecomposition(Graph(1), [selectors])
    else:
        pads = range(k, next_id)
        tree = Graph(1 + len(pads), [(0, 1 + t) for t in range(len(pads))])
        td = TreeDecomposition(tree, [selectors] + [selectors | {p} for p in pads])
    return _certify(inst, td, k + 1, index, h, {"source": pg})


# --- lists via precolored pendants ---------------------------------------------

def lc_to_precoloring(inst: ListColoringInstance) -> ReductionOutput:
    """Replace lists by pendant precolored neighbors: the color universe is
    relabeled 1..r and every color missing from a vertex's list is blocked
    by a fresh degree-one neighbor precolored with it."""
    g = inst.graph
    universe = sorted(set().union(*inst.lists)) if inst.lists else []
    if g.n > 0 and not universe:
        # every list is empty: no coloring can exist; emit the canonical
        # infeasible target (r = 0 is outside the problem's domain)
        h = Graph(2, [(0, 1)])
        target = PrecoloringExtensionInstance(h, {}, 1)
        td = TreeDecomposition(Graph(1), [frozenset({0, 1})])
        return _certify(
            target, td, 1, [{"tag": "note", "detail": "canonical infeasible"}], h,
            {"source": inst, "note": "all lists empty"},
        )
    rank = {c: i + 1 for i, c in enumerate(universe)}
    r = max(len(universe), 1)
    edges = list(g.edges)
    precolor: dict[int, int] = {}
    index = [{"tag": "orig", "v": v, "vertex": v} for v in g.vertices()]
    next_id = g.n
    pendants: list[tuple[int, int]] = []  # (owner, pendant)
    for v in g.vertices():
        for c in universe:
            if c in inst.lists[v]:
                continue
            edges.append((v, next_id))
            precolor[next_id] = rank[c]
            index.append({"tag": "pendant", "v": v, "color": rank[c], "vertex": next_id})
            pendants.append((v, next_id))
            next_id += 1
    h = Graph(next_id, edges)
    target = PrecoloringExtensionInstance(h, precolor, r)

    base = heuristic_decomposition(g, "min-fill")
    td = _attach_leaf_bags(base, [(owner, frozenset({owner, p})) for owner, p in pendants])
    bound = max(width(base), 1) if g.n else 0
    return _certify(target, td, bound, index, h, {"source": inst})


def _attach_leaf_bags(
    base: TreeDecomposition, additions: list[tuple[int, frozenset[int]]]
) -> TreeDecomposition:
    """Hang each new bag as a leaf under some base node containing its anchor
    vertex."""
    home: dict[int, int] = {}
    for t, bag in enumerate(base.bags):
        for v in bag:
            home.setdefault(v, t)
    bags = list(base.bags)
    tree_edges = list(base.tree.edges)
    for anchor, bag in additions:
        t = home[anchor]
        bags.append(bag)
        tree_edges.append((t, len(bags) - 1))
    return TreeDecomposition(Graph(len(bags), tree_edges), bags)


# --- clique via generalized satisfiability --------------------------------------

def clique_to_gensat(g: Graph, k: int) -> ReductionOutput:
    """One relation of arity 2n listing, per edge (p, q) with p < q, the
    concatenated indicator vectors of p and q; one constraint per position
    pair (i, j) over the i-th and j-th variable blocks.  Satisfiable iff g
    has a k-clique."""
    if k < 2:
        raise InputError(f"k must be at least 2, got {k}")
    n = g.n
    if n == 0:
        raise InputError("source graph must have at least one vertex")
    tuples = []
    for p, q in g.edges:
        t = [0] * (2 * n)
        t[p] = 1
        t[n + q] = 1
        tuples.append(tuple(t))
    relation = BooleanRelation(2 * n, tuples)

    def block(i: int) -> list[int]:
        return list(range(i * n, (i + 1) * n))

    constraints = []
    con_tags = []
    for i in range(k):
        for j in range(i + 1, k):
            constraints.append(Constraint(block(i) + block(j), relation))
            con_tags.append((i, j))
    inst = GensatInstance(k * n, constraints)

    index = [
        {"tag": "var", "i": i, "l": l, "variable": i * n + l}
        for i in range(k)
        for l in range(n)
    ] + [
        {"tag": "con", "i": i, "j": j, "constraint": idx}
        for idx, (i, j) in enumerate(con_tags)
    ]

    dual = build_dual(inst)
    num_cons = len(constraints)
    dual_witness = TreeDecomposition(Graph(1), [frozenset(range(num_cons))])
    incidence = build_incidence(inst)
    variables_only, _ = induced_subgraph(incidence, range(k * n))
    inc_witness = augment_with_set(
        decompose_forest(variables_only),
        range(k * n, k * n + num_cons),
        incidence,
    )
    meta = {
        "source": (g, k),
        "dual_graph": dual,
        "dual_witness": dual_witness,
        "dual_width_bound": num_cons - 1,
        "incidence_graph": incidence,
        "incidence_witness": inc_witness,
        "incidence_width_bound": num_cons,
    }
    out = _certify(inst, dual_witness, num_cons - 1, index, dual, meta)
    inc_check = validate(inc_witness, incidence)
    if not inc_check.ok or width(inc_witness) > num_cons:
        raise AssertionError("incidence witness failed its bound")
    return out


# --- clique selection via capped orientation ------------------------------------

def _canonical_infeasible_chosen() -> ChosenOutdegreeInstance:
    g = Graph(2, [(0, 1)])
    return ChosenOutdegreeInstance(g, EdgeWeighting(g, [1]), (0, 0))


def pc_to_chosen_outdegree(pg: PartitionedGraph) -> ReductionOutput:
    """Orientation gadget selecting one member per part.

    Per part i: a pick vertex ``a`` with budget 1 joined by unit edges to n
    lever triples ``u–x, u–y``.  Per part pair: budget hubs ``b`` (low side)
    and ``c`` (high side) joined by special edges to every lever, a hub ``d``
    that can pay for all but one of the pair's candidate vertices ``e``, and
    one ``e`` per cross edge whose special weights equal the sum of the two
    matching lever weights.  The hub budgets make an admissible orientation
    encode a transversal clique and vice versa.
    """
    k, n = pg.k, pg.part_size
    params = GadgetParameters(k, n)
    bound = 2 * (k * (k - 1) // 2) + 1

    pair_edges: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for i in range(k):
        for ip in range(i + 1, k):
            pair_edges[(i, ip)] = [
                (q, qp)
                for q in range(n)
                for qp in range(n)
                if pg.graph.has_edge(pg.parts[i][q], pg.parts[ip][qp])
            ]
    degenerate = n == 0 or any(not es for es in pair_edges.values())
    if degenerate and k >= 1:
        inst = _canonical_infeasible_chosen()
        td = TreeDecomposition(Graph(1), [frozenset({0, 1})])
        note = "a part pair has no cross edges; no transversal clique exists"
        return _certify(
            inst, td, max(bound, 1),
            [{"tag": "note", "detail": "canonical infeasible"}],
            inst.graph, {"source": pg, "note": note},
        )
    if k == 0:
        g = Graph(1)
        inst = ChosenOutdegreeInstance(g, EdgeWeighting(g, []), (0,))
        td = TreeDecomposition(Graph(1), [frozenset({0})])
        return _certify(
            inst, td, max(bound, 0),
            [{"tag": "note", "detail": "canonical feasible"}],
            g, {"source": pg, "note": "empty partition: the empty clique exists"},
        )

    radix = params.radix
    r3 = radix**3
    big = params.big

    pairs: list[tuple[tuple, int]] = []
    next_id = 0

    def new(*tag) -> int:
        nonlocal next_id
        pairs.append((tag, next_id))
        next_id += 1
        return next_id - 1

    for i in range(k):
        new("a", i)
        for j in range(n):
            new("u", i, j)
            new("x", i, j)
            new("y", i, j)
    for i in range(k):
        for ip in range(i + 1, k):
            new("b", i, ip)
            new("c", i, ip)
            new("d", i, ip)
            for q, qp in pair_edges[(i, ip)]:
                new("e", i, ip, q, qp)
    idx = GadgetIndex(pairs)

    # rank weights: member j of the lower part encodes as j+1, of the upper
    # part as (j+1)*radix; the +1 on the high side keeps c strictly costlier
    def xw(i_lower: bool, j: int) -> int:
        return r3 + (j + 1) if i_lower else r3 + (j + 1) * radix

    def yw(i_lower: bool, j: int) -> int:
        return xw(i_lower, j) + 1

    edges: dict[tuple[int, int], int] = {}

    def add_edge(u: int, v: int, w: int) -> None:
        edges[canon(u, v)] = w

    rho = [0] * next_id
    for i in range(k):
        a = idx.vertex("a", i)
        rho[a] = 1
        for j in range(n):
            u, x, y = idx.vertex("u", i, j), idx.vertex("x", i, j), idx.vertex("y", i, j)
            add_edge(a, u, 1)
            add_edge(u, x, big)
            add_edge(u, y, big + 1)
            rho[u] = big + 1
            rho[x] = big
            rho[y] = big + 1
    for (i, ip), es in pair_edges.items():
        b, c, d = idx.vertex("b", i, ip), idx.vertex("c", i, ip), idx.vertex("d", i, ip)
        for j in range(n):
            add_edge(idx.vertex("x", i, j), b, xw(True, j))
            add_edge(idx.vertex("y", i, j), c, yw(True, j))
            add_edge(idx.vertex("x", ip, j), b, xw(False, j))
            add_edge(idx.vertex("y", ip, j), c, yw(False, j))
        rho[d] = len(es) - 1
        rho_b = 0
        for q, qp in es:
            e = idx.vertex("e", i, ip, q, qp)
            web = xw(True, q) + xw(False, qp)
            wec = yw(True, q) + yw(False, qp)
            add_edge(d, e, 1)
            add_edge(e, b, web)
            add_edge(e, c, wec)
            rho[e] = wec
            rho_b += web
        rho[b] = rho_b
        rho[c] = sum(yw(True, j) + yw(False, j) for j in range(n))

    h = Graph(next_id, edges.keys())
    weighting = EdgeWeighting(h, {e: w for e, w in edges.items()})
    inst = ChosenOutdegreeInstance(h, weighting, rho)

    _check_gadget_arithmetic(pg, params, idx, pair_edges, inst)

    num_pairs = k * (k - 1) // 2
    total_cross = sum(len(es) for es in pair_edges.values())
    assert h.n == k * (3 * n + 1) + 3 * num_pairs + total_cross
    assert len(h.edges) == 3 * k * n + 3 * total_cross + 4 * n * num_pairs

    hubs = frozenset(
        idx.vertex(t, i, ip)
        for (i, ip) in pair_edges
        for t in ("b", "c")
    )
    rest, back = induced_subgraph(h, set(h.vertices()) - hubs)
    forest_td = relabel(decompose_forest(rest), {v: u for u, v in back.items()})
    witness = augment_with_set(forest_td, hubs, h)
    meta = {"source": pg, "gadget": idx, "params": params, "pair_edges": pair_edges}
    return _certify(inst, witness, bound, idx.entries(), h, meta)


def _check_gadget_arithmetic(pg, params, idx, pair_edges, inst) -> None:
    """Construction-time checks of the capacity algebra the forcing argument
    relies on."""
    k, n = params.k, params.n
    radix, big = params.radix, params.big
    r3 = radix**3
    wmap = dict(zip(inst.graph.edges, inst.weights.weights))

    def special_sum(v: int) -> int:
        hubs = {idx.vertex(t, i, ip) for (i, ip) in pair_edges for t in ("b", "c")}
        return sum(w for e, w in wmap.items() if (e[0] == v or e[1] == v) and (set(e) & hubs))

    if pair_edges:  # a single part has no special edges and nothing to order
        for i in range(k):
            for j in range(n):
                mx = special_sum(idx.vertex("x", i, j))
                my = special_sum(idx.vertex("y", i, j))
                assert mx < my < big, f"lever budgets out of order at part {i} member {j}"
    for (i, ip), es in pair_edges.items():
        b, c, d = idx.vertex("b", i, ip), idx.vertex("c", i, ip), idx.vertex("d", i, ip)
        assert inst.rho[c] // r3 == 2 * n
        for e_tag in es:
            e = idx.vertex("e", i, ip, *e_tag)
            web = wmap[canon(e, b)]
            wec = wmap[canon(e, c)]
            assert wec == web + 2
            assert inst.rho[e] - web >= 2
            assert wec > 2 * r3
        for j in range(n):
            for xv, hub in (
                (idx.vertex("x", i, j), b),
                (idx.vertex("y", i, j), c),
                (idx.vertex("x", ip, j), b),
                (idx.vertex("y", ip, j), c),
            ):
                assert wmap[canon(xv, hub)] > r3


def extract_clique(out: ReductionOutput, lam: Orientation) -> tuple[int, ...]:
    """Read the selected transversal out of an admissible orientation of the
    selection gadget.

    Normalization first: a pick vertex with no outgoing edge has its first
    member edge turned outward, and a hub ``d`` with several incoming
    candidate edges keeps only the first — both reversals preserve
    admissibility.  The member picked at each part is the one whose ``a``
    edge points outward; the result is checked to be a clique.
    """
    idx: GadgetIndex = out.meta.get("gadget")
    if idx is None:
        raise InputError("output does not carry a selection gadget")
    inst: ChosenOutdegreeInstance = out.instance
    if not check_admissible(inst, lam):
        raise InputError("orientation is not admissible for the gadget instance")
    pg: PartitionedGraph = out.meta["source"]
    pair_edges = out.meta["pair_edges"]
    k, n = out.meta["params"].k, out.meta["params"].n

    direction = lam.as_dict()
    for i in range(k):
        a = idx.vertex("a", i)
        member_edges = [canon(a, idx.vertex("u", i, j)) for j in range(n)]
        if not any(direction[e][0] == a for e in member_edges):
            e = member_edges[0]
            direction[e] = (a, idx.vertex("u", i, 0))
    for (i, ip), es in pair_edges.items():
        d = idx.vertex("d", i, ip)
        incoming = [
            (q, qp)
            for q, qp in es
            if direction[canon(d, idx.vertex("e", i, ip, q, qp))][0] != d
        ]
        for q, qp in incoming[1:]:
            e = idx.vertex("e", i, ip, q, qp)
            direction[canon(d, e)] = (d, e)
    normalized = Orientation(inst.graph, direction)
    assert check_admissible(inst, normalized), "normalization broke admissibility"

    picked = []
    for i in range(k):
        a = idx.vertex("a", i)
        outgoing = [
            j
            for j in range(n)
            if normalized.as_dict()[canon(a, idx.vertex("u", i, j))][0] == a
        ]
        assert len(outgoing) == 1, f"pick vertex {i} selects {len(outgoing)} members"
        picked.append(pg.parts[i][outgoing[0]])
    clique = tuple(picked)
    assert is_clique(pg.graph, clique), "selected transversal is not a clique"
    return clique


def orientation_from_clique(out: ReductionOutput, clique) -> Orientation:
    """The explicit admissible orientation encoding a given transversal
    clique (built directly from the clique, independent of any search)."""
    idx: GadgetIndex = out.meta.get("gadget")
    if idx is None:
        raise InputError("output does not carry a selection gadget")
    inst: ChosenOutdegreeInstance = out.instance
    pg: PartitionedGraph = out.meta["source"]
    pair_edges = out.meta["pair_edges"]
    k, n = out.meta["params"].k, out.meta["params"].n

    clique = tuple(clique)
    if len(clique) != k or not is_clique(pg.graph, clique):
        raise InputError("argument is not a transversal clique of the source")
    pick = {}
    for v in clique:
        for i, part in enumerate(pg.parts):
            if v in part:
                pick[i] = part.index(v)
    if sorted(pick) != list(range(k)):
        raise InputError("clique does not pick one vertex per part")

    direction: dict[tuple[int, int], tuple[int, int]] = {}

    def orient(tail: int, head: int) -> None:
        direction[canon(tail, head)] = (tail, head)

    for i in range(k):
        a = idx.vertex("a", i)
        for j in range(n):
            u, x, y = idx.vertex("u", i, j), idx.vertex("x", i, j), idx.vertex("y", i, j)
            cs = [idx.vertex("c", min(i, ip), max(i, ip)) for ip in range(k) if ip != i]
            bs = [idx.vertex("b", min(i, ip), max(i, ip)) for ip in range(k) if ip != i]
            if j == pick[i]:
                orient(a, u)
                orient(u, y)
                orient(x, u)
                for c in cs:
                    orient(y, c)
                for b in bs:
                    orient(b, x)
            else:
                orient(u, a)
                orient(y, u)
                orient(u, x)
                for c in cs:
                    orient(c, y)
                for b in bs:
                    orient(x, b)
    for (i, ip), es in pair_edges.items():
        b, c, d = idx.vertex("b", i, ip), idx.vertex("c", i, ip), idx.vertex("d", i, ip)
        sel = (pick[i], pick[ip])
        for q, qp in es:
            e = idx.vertex("e", i, ip, q, qp)
            if (q, qp) == sel:
                orient(e, d)
                orient(e, b)
                orient(c, e)
            else:
                orient(d, e)
                orient(b, e)
                orient(e, c)
    lam = Orientation(inst.graph, direction)
    assert check_admissible(inst, lam), "constructive orientation is not admissible"
    return lam


# --- capped orientation via uniform cap ------------------------------------------

def chosen_to_minmax(inst: ChosenOutdegreeInstance) -> ReductionOutput:
    """Equalize the caps: r becomes the largest cap, and every vertex with
    slack r - rho(v) gets a triangle (two slack edges of that weight plus a
    weight-r brace) that forces it to spend exactly the slack."""
    g = inst.graph
    if g.n < 1:
        raise InputError("instance must have at least one vertex")
    r = max(inst.rho)
    if r == 0:
        # no budget anywhere: feasible iff there is nothing to orient
        if g.edges:
            h = Graph(2, [(0, 1)])
            target = MinMaxOutdegreeInstance(h, EdgeWeighting(h, [2]), 1)
            note = "zero caps with edges present: canonical infeasible"
        else:
            h = Graph(1)
            target = MinMaxOutdegreeInstance(h, EdgeWeighting(h, []), 1)
            note = "zero caps, edgeless: canonical feasible"
        td = TreeDecomposition(Graph(1), [frozenset(range(h.n))])
        return _certify(
            target, td, max(width(td), 2),
            [{"tag": "note", "detail": note.split(":")[1].strip()}],
            h, {"source": inst, "note": note},
        )

    edges = {e: w for e, w in zip(g.edges, inst.weights.weights)}
    index = [{"tag": "orig", "v": v, "vertex": v} for v in g.vertices()]
    next_id = g.n
    triangles: list[tuple[int, int, int]] = []  # (v, xv, yv)
    for v in g.vertices():
        slack = r - inst.rho[v]
        if slack == 0:
            continue
        xv, yv = next_id, next_id + 1
        next_id += 2
        edges[canon(v, xv)] = slack
        edges[canon(v, yv)] = slack
        edges[canon(xv, yv)] = r
        index.append({"tag": "xv", "v": v, "vertex": xv})
        index.append({"tag": "yv", "v": v, "vertex": yv})
        triangles.append((v, xv, yv))
    h = Graph(next_id, edges.keys())
    target = MinMaxOutdegreeInstance(h, EdgeWeighting(h, edges), r)

    base = heuristic_decomposition(g, "min-fill")
    td = _attach_leaf_bags(
        base, [(v, frozenset({v, xv, yv})) for v, xv, yv in triangles]
    )
    bound = max(width(base), 2)
    return _certify(target, td, bound, index, h, {"source": inst})


# --- serialization ----------------------------------------------------------------

def reduction_output_to_json(out: ReductionOutput) -> dict:
    obj = {
        "instance": instance_to_json(out.instance),
        "witness": decomposition_to_json(out.witness),
        "claimed_width_bound": out.claimed_width_bound,
        "index": list(out.index),
    }
    if "dual_graph" in out.meta:
        obj["dual"] = {
            "graph": graph_to_json(out.meta["dual_graph"]),
            "witness": decomposition_to_json(out.meta["dual_witness"]),
            "claimed_width_bound": out.meta["dual_width_bound"],
        }
        obj["incidence"] = {
            "graph": graph_to_json(out.meta["incidence_graph"]),
            "witness": decomposition_to_json(out.meta["incidence_witness"]),
            "claimed_width_bound": out.meta["incidence_width_bound"],
        }
    return obj
