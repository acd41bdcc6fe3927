"""
Quantifier-free types of tuples in graphs and the G* construction.

Types are coded by a fixed enumeration e: by arity first, then by the
restricted growth string of the equality pattern (lex), then by the
adjacency mask over pairs of equality classes. alpha(n) is the code of
the first n-ary type, so arity 0, 1, 2 and 3 occupy codes 0, 1, 2..4
and 5..19.
"""

import logging
from collections import Counter
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

try:
    from finite_forge import domain, graph_core, normal_trees
    from finite_forge.repositories import BudgetExceededError, PreconditionError, SetupInvariantError
except ModuleNotFoundError:
    import domain
    import graph_core
    import normal_trees
    from repositories import BudgetExceededError, PreconditionError, SetupInvariantError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def _patterns(n: int) -> Tuple[Tuple[int, ...], ...]:
    """Restricted growth strings of length n in lex order."""
    out = [()]
    for _ in range(n):
        out = [p + (c,) for p in out for c in range(max(p, default=-1) + 2)]
    return tuple(sorted(out))


def _pattern_width(pattern: Tuple[int, ...]) -> int:
    classes = max(pattern, default=-1) + 1
    return 2 ** (classes * (classes - 1) // 2)


@lru_cache(maxsize=None)
def type_count(n: int) -> int:
    return sum(_pattern_width(p) for p in _patterns(n))


def alpha(n: int) -> int:
    """The least code of an n-ary type."""
    return sum(type_count(k) for k in range(n))


def qf_type(g: domain.Graph, t: Sequence[int]) -> domain.QfType:
    first: Dict[int, int] = {}
    pattern = []
    for v in t:
        if not 0 <= v < g.n:
            raise PreconditionError(f"{v} is not a vertex of the graph")
        pattern.append(first.setdefault(v, len(first)))
    reps = list(first)
    adjacent = frozenset(
        (a, c)
        for a, c in combinations(range(len(reps)), 2)
        if graph_core.has_edge(g, reps[a], reps[c])
    )
    return domain.QfType(arity=len(t), pattern=tuple(pattern), adjacent=adjacent)


def encode_type(q: domain.QfType) -> int:
    classes = max(q.pattern, default=-1) + 1
    pairs = list(combinations(range(classes), 2))
    mask = sum(1 << k for k, pair in enumerate(pairs) if pair in q.adjacent)
    offset = 0
    for p in _patterns(q.arity):
        if p == q.pattern:
            return alpha(q.arity) + offset + mask
        offset += _pattern_width(p)
    raise PreconditionError(f"{q.pattern} is not a restricted growth string")


def decode_type(code: int) -> domain.QfType:
    n = 0
    while code >= alpha(n + 1):
        n += 1
    rest = code - alpha(n)
    for p in _patterns(n):
        width = _pattern_width(p)
        if rest < width:
            classes = max(p, default=-1) + 1
            pairs = list(combinations(range(classes), 2))
            adjacent = frozenset(pair for k, pair in enumerate(pairs) if rest >> k & 1)
            return domain.QfType(arity=n, pattern=p, adjacent=adjacent)
        rest -= width
    raise PreconditionError(f"no type has code {code}")


def type_code(g: domain.Graph, t: Sequence[int]) -> int:
    return encode_type(qf_type(g, t))


def tau(g: domain.Graph, t: Sequence[int]) -> int:
    """Type code of t read as vertices of g, entries reduced mod |g|."""
    return type_code(g, [x % g.n for x in t])


def epi_vertex_count(g: domain.Graph, d: int, b: int, reservoir: Optional[int] = None) -> int:
    r = b if reservoir is None else reservoir
    return sum(tau(g, t) + 3 + b + r for t in normal_trees.sequences(b, d))


def build_epi_gadget(
    g: domain.Graph,
    d: int,
    b: int,
    limits: Optional[domain.SearchLimits] = None,
    reservoir: Optional[int] = None,
) -> domain.EpiGadget:
    """Truncated G*: one block per t in {0..b-1}^{<=d}, length-lex.

    Block t with n = tau(t) holds a, b_1..b_{n+2}, c_0..c_{b-1} and
    d_0..d_{r-1}, r being the reservoir (b unless given). B = {a, b_j}
    and C = {c_i, d_i} are cliques, b_{n+2} is joined to all of C, and
    c_i of t is joined to a of t^i.
    """
    if g.n == 0:
        raise PreconditionError("G* needs a non-empty graph")
    limits = limits or graph_core.suite_limits()
    r = b if reservoir is None else reservoir
    if r < 0:
        raise PreconditionError(f"reservoir must be non-negative, got {r}")
    required = epi_vertex_count(g, d, b, r)
    if required > limits.max_vertices:
        raise BudgetExceededError(
            f"G* needs {required} vertices, the cap is {limits.max_vertices}",
            limit=limits.max_vertices,
            required=required,
        )
    blocks = normal_trees.sequences(b, d)
    vertices: List[domain.EpiVertex] = []
    index: Dict[domain.EpiVertex, int] = {}
    types = []
    edges = []

    def add(tag: domain.EpiVertex) -> int:
        index[tag] = len(vertices)
        vertices.append(tag)
        return index[tag]

    for t in blocks:
        n = tau(g, t)
        types.append((t, n))
        clique_b = [add(domain.EpiVertex("a", t))]
        clique_b += [add(domain.EpiVertex("b", t, j)) for j in range(1, n + 3)]
        clique_c = [add(domain.EpiVertex("c", t, i)) for i in range(b)]
        clique_c += [add(domain.EpiVertex("d", t, i)) for i in range(r)]
        edges.extend(combinations(clique_b, 2))
        edges.extend(combinations(clique_c, 2))
        edges.extend((clique_b[-1], w) for w in clique_c)
    for t in blocks:
        if len(t) < d:
            for i in range(b):
                edges.append(
                    (index[domain.EpiVertex("c", t, i)], index[domain.EpiVertex("a", t + (i,))])
                )
    graph = graph_core.make_graph(len(vertices), edges)
    logger.debug(f"built G* with {graph.n} vertices, d={d} b={b} r={r}")
    return domain.EpiGadget(
        graph=graph,
        depth=d,
        branch=b,
        vertices=tuple(vertices),
        block_types=tuple(types),
        source=g,
        reservoir=r,
    )


def simple_labels(g: domain.Graph) -> List[Tuple]:
    """(0, clique) for a vertex in a unique maximal clique, (1, (v,)) otherwise."""
    cliques: Dict[int, List[Tuple[int, ...]]] = {v: [] for v in range(g.n)}
    for clique in nx.find_cliques(graph_core.to_networkx(g)):
        members = tuple(sorted(clique))
        for v in members:
            cliques[v].append(members)
    return [
        (0, cliques[v][0]) if len(cliques[v]) == 1 else (1, (v,)) for v in range(g.n)
    ]


def simple_automorphism_group(
    e: domain.EpiGadget, limits: Optional[domain.SearchLimits] = None
) -> domain.AutomorphismGroup:
    """Automorphisms moving a vertex only inside its unique maximal clique."""
    limits = limits or graph_core.suite_limits()
    return graph_core.automorphisms(e.graph, colors=simple_labels(e.graph), limits=limits)


def simple_order_formula(e: domain.EpiGadget) -> int:
    order = 1
    for t, n in e.block_types:
        order *= factorial(n + 1 + (1 if not t else 0))
        order *= factorial(e.reservoir) if len(t) < e.depth else factorial(e.branch + e.reservoir)
    return order


def block_tree_automorphisms(e: domain.EpiGadget) -> int:
    """Automorphisms of the tree of blocks that keep every block type.

    Children of a block whose subtrees have equal typed shape can be
    permuted freely, so the count is a product of factorials.
    """
    types = dict(e.block_types)
    shapes: Dict[Tuple[int, ...], Tuple] = {}
    count = 1
    for t, n in reversed(e.block_types):
        children = [shapes[t + (i,)] for i in range(e.branch)] if len(t) < e.depth else []
        for size in Counter(children).values():
            count *= factorial(size)
        shapes[t] = (types[t], tuple(sorted(children)))
    return count


def full_order_formula(e: domain.EpiGadget) -> int:
    """|Aut(G*)|: simple automorphisms times the typed block-tree symmetries."""
    return simple_order_formula(e) * block_tree_automorphisms(e)


def always_fixed(e: domain.EpiGadget) -> List[int]:
    """Vertices every simple automorphism fixes: a^t (t != ∅), b_{n+2}, inner c_i."""
    types = dict(e.block_types)
    fixed = []
    for v, tag in enumerate(e.vertices):
        if tag.role == "a" and tag.t:
            fixed.append(v)
        elif tag.role == "b" and tag.index == types[tag.t] + 2:
            fixed.append(v)
        elif tag.role == "c" and len(tag.t) < e.depth:
            fixed.append(v)
    return fixed


def _clique_neighbourhood(adj: Sequence[frozenset], v: int) -> bool:
    return all(y in adj[x] for x, y in combinations(sorted(adj[v]), 2))


def can_extend_simple(e: domain.EpiGadget, a: Sequence[int]) -> bool:
    """Whether i -> a_i (i < len(a)) extends to a simple automorphism.

    For all i, j in the domain: i ~ j iff a_i ~ a_j, and whenever
    a_i != i both neighbourhoods of i and a_i are cliques and i ~ a_i.
    """
    g = e.graph
    adj = graph_core.adjacency(g)
    for i, ai in enumerate(a):
        if not 0 <= ai < g.n or i >= g.n:
            raise PreconditionError(f"{i} -> {ai} leaves the vertex set")
    for i, j in combinations(range(len(a)), 2):
        if (j in adj[i]) != (a[j] in adj[a[i]]):
            return False
    for i, ai in enumerate(a):
        if ai != i:
            if not _clique_neighbourhood(adj, i) or not _clique_neighbourhood(adj, ai):
                return False
            if ai not in adj[i]:
                return False
    return True


def extends_simple_brute_force(
    e: domain.EpiGadget, a: Sequence[int], limits: Optional[domain.SearchLimits] = None
) -> bool:
    """Search a simple automorphism through i -> a_i directly."""
    labels = simple_labels(e.graph)
    pinned_left = {i: k + 1 for k, i in enumerate(range(len(a)))}
    pinned_right = {ai: k + 1 for k, ai in enumerate(a)}
    left = [(labels[v], pinned_left.get(v, 0)) for v in range(e.graph.n)]
    right = [(labels[v], pinned_right.get(v, 0)) for v in range(e.graph.n)]
    found = graph_core.find_isomorphism(
        e.graph, e.graph, left, right, limits=limits or graph_core.suite_limits()
    )
    return found is not None


def bridge_parameters(g: domain.Graph) -> Tuple[int, int]:
    """(d, b) at which the iso bridge is exact on small graphs."""
    return 2, g.n


def check_iso_bridge(
    g: domain.Graph, h: domain.Graph, d: int, b: int, limits=None
) -> Tuple[bool, bool]:
    """(G ≅ H, G* ≅ H*) at truncation (d, b)."""
    limits = limits or graph_core.suite_limits()
    graphs_iso = graph_core.find_isomorphism(g, h, limits=limits) is not None
    if g.n != h.n:
        return graphs_iso, False
    gs, hs = build_epi_gadget(g, d, b, limits), build_epi_gadget(h, d, b, limits)
    return graphs_iso, graph_core.find_isomorphism(gs.graph, hs.graph, limits=limits) is not None


def verify_iso_bridge(
    corpus: Sequence[domain.Graph], d: Optional[int] = None, b: Optional[int] = None, limits=None
) -> List[domain.CheckResult]:
    """G ≅ H iff G* ≅ H*, for every pair of equal-size graphs in the corpus.

    Without explicit (d, b) each pair runs at bridge_parameters. Pairs of
    different sizes are never isomorphic and are counted, not compared.
    """
    results = []
    unequal = 0
    for i, g in enumerate(corpus):
        for j in range(i, len(corpus)):
            h = corpus[j]
            if g.n != h.n:
                unequal += 1
                continue
            pd, pb = bridge_parameters(g)
            left, right = check_iso_bridge(g, h, d or pd, b or pb, limits)
            results.append(
                domain.CheckResult(
                    lhs=i, rhs=j, passed=left == right, detail=f"G≅H={left} G*≅H*={right}"
                )
            )
    logger.info(f"iso bridge compared {len(results)} pairs, {unequal} pairs differ in size")
    return results


def forward_reservoirs(g: domain.Graph, h: domain.Graph, d: int) -> Tuple[int, int]:
    """(r_G, r_H) letting H* at branch |H| fold onto G* at branch |G|.

    Both C-cliques get |H| + r_H members, and r_H is large enough that
    the B-clique of any block at depth <= d fits inside one of them.
    """
    if g.n > h.n:
        raise PreconditionError(f"G has {g.n} vertices, H only {h.n}")
    rh = max(h.n, alpha(d + 1) + 1 - h.n)
    return rh + h.n - g.n, rh


def gadget_epimorphism_from_witness(
    h: domain.Graph,
    g: domain.Graph,
    f: domain.VertexMap,
    d: int,
    limits: Optional[domain.SearchLimits] = None,
) -> Tuple[domain.EpiGadget, domain.EpiGadget, domain.VertexMap]:
    """Fold H* onto G* along an induced embedding f of G into H.

    Block f∘t of H* has the type of block t of G* and goes onto it: a and
    the b_j keep their place, c_{f(i)} goes to c_i, and the remaining c_k
    and d_i of H fill the d-vertices of G in order. A block whose index
    leaves the image of f is coloured into the clique C ∪ {b_{n+2}} of
    the last block above it inside the image; its b_{n+2} takes the colour
    of the c it hangs from.

    Returns (H*, G*, m) with m defined on the vertices of H*.
    """
    if not graph_core.is_embedding(g, h, f):
        raise PreconditionError("the witness is not an induced embedding of G into H")
    limits = limits or graph_core.suite_limits()
    rg, rh = forward_reservoirs(g, h, d)
    gs = build_epi_gadget(g, d, g.n, limits, reservoir=rg)
    hs = build_epi_gadget(h, d, h.n, limits, reservoir=rh)
    pull = {w: v for v, w in enumerate(f.images)}
    g_at = {tag: v for v, tag in enumerate(gs.vertices)}
    h_at = {tag: v for v, tag in enumerate(hs.vertices)}
    g_types = dict(gs.block_types)
    images = [-1] * hs.graph.n

    def clique(t: Tuple[int, ...]) -> List[int]:
        return (
            [g_at[domain.EpiVertex("c", t, i)] for i in range(g.n)]
            + [g_at[domain.EpiVertex("d", t, i)] for i in range(rg)]
            + [g_at[domain.EpiVertex("b", t, g_types[t] + 2)]]
        )

    # block of H outside the image -> (block of G it lands in, colour above it)
    anchor: Dict[Tuple[int, ...], Tuple[Tuple[int, ...], int]] = {}
    for s, n in hs.block_types:
        b_clique = [h_at[domain.EpiVertex("a", s)]]
        b_clique += [h_at[domain.EpiVertex("b", s, j)] for j in range(1, n + 3)]
        c_clique = [h_at[domain.EpiVertex("c", s, k)] for k in range(h.n)]
        c_clique += [h_at[domain.EpiVertex("d", s, i)] for i in range(rh)]
        if all(x in pull for x in s):
            t = tuple(pull[x] for x in s)
            if g_types[t] != n:
                raise SetupInvariantError(
                    f"block {s} of H* has type {n}, block {t} of G* {g_types[t]}",
                    "type-transfer",
                )
            images[b_clique[0]] = g_at[domain.EpiVertex("a", t)]
            for j in range(1, n + 3):
                images[b_clique[j]] = g_at[domain.EpiVertex("b", t, j)]
            spare = [k for k in range(h.n) if k not in pull]
            for k, w in pull.items():
                images[c_clique[k]] = g_at[domain.EpiVertex("c", t, w)]
            rest = [c_clique[k] for k in spare] + c_clique[h.n:]
            for i, v in enumerate(rest):
                images[v] = g_at[domain.EpiVertex("d", t, i)]
            if len(s) < d:
                for k in spare:
                    anchor[s + (k,)] = (t, images[c_clique[k]])
        else:
            t, above = anchor[s]
            colours = [x for x in clique(t) if x != above]
            images[b_clique[-1]] = above
            for v, x in zip(b_clique[:-1], colours):
                images[v] = x
            for v, x in zip(c_clique, colours):
                images[v] = x
            if len(s) < d:
                for k in range(h.n):
                    anchor[s + (k,)] = (t, images[c_clique[k]])
    return hs, gs, domain.VertexMap(images=tuple(images), injective=False)


def verify_epi_bridge(
    corpus: Sequence[domain.Graph], d: Optional[int] = None, limits=None
) -> List[domain.CheckResult]:
    """For every ordered pair with G embedded in H, the fold of H* along
    the least embedding is an epimorphism onto G*."""
    limits = limits or graph_core.suite_limits()
    results = []
    for i, g in enumerate(corpus):
        for j, h in enumerate(corpus):
            f = graph_core.find_embedding(g, h, limits)
            if f is None:
                continue
            depth = d or bridge_parameters(g)[0]
            hs, gs, m = gadget_epimorphism_from_witness(h, g, f, depth, limits)
            results.append(
                domain.CheckResult(
                    lhs=j,
                    rhs=i,
                    passed=graph_core.is_epimorphism(gs.graph, hs.graph, m),
                    detail=f"H* ({hs.graph.n} vertices) onto G* ({gs.graph.n} vertices)",
                )
            )
    return results
