"""
Gadget graphs G_T of finite normal trees.

The spine is the full tree of sequences over 0..b-1 up to depth d, with
a Star vertex subdividing every spine edge. Every spine vertex Seq(s)
carries a Plus/PlusPlus pair with rank(s) + 3 pendant tines of lengths
1..rank(s) + 3, and one code path per node (u, s) of T, whose side leaf
sits at distance 2 from the end of the path.

Vertices are numbered kind-major (Seq, Star, Plus, PlusPlus, Tine, Code)
and length-lex inside a kind, so numbering depends only on (d, b, T).
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

try:
    from finite_forge import domain, graph_core, normal_trees
    from finite_forge.repositories import BudgetExceededError, ConventionMismatchError
except ModuleNotFoundError:
    import domain
    import graph_core
    import normal_trees
    from repositories import BudgetExceededError, ConventionMismatchError

logger = logging.getLogger(__name__)

KINDS = ("Seq", "Star", "Plus", "PlusPlus", "Tine", "Code")


def code_strings(u: str) -> List[str]:
    """x-labels of the code path of u: prefixes of 0^(2θ+4), then the side leaf."""
    length = 2 * normal_trees.theta(u) + 4
    return ["0" * k for k in range(length + 1)] + ["0" * (length - 2) + "1"]


def count_gadget_vertices(t: domain.FiniteNormalTree) -> int:
    seqs = normal_trees.sequences(t.branch, t.depth)
    tines = 0
    for s in seqs:
        r = normal_trees.rank(s, t.branch)
        tines += (r + 3) * (r + 4) // 2
    codes = sum(2 * normal_trees.theta(u) + 6 for u, _ in t.nodes)
    return 4 * len(seqs) - 1 + tines + codes


def _code_order(t: domain.FiniteNormalTree) -> List[Tuple[str, Tuple[int, ...]]]:
    return sorted(
        t.nodes,
        key=lambda node: (
            normal_trees.rank(node[1], t.branch),
            normal_trees.theta(node[0]),
        ),
    )


def build_gadget(
    t: domain.FiniteNormalTree, limits: Optional[domain.SearchLimits] = None
) -> domain.GadgetGraph:
    limits = limits or graph_core.suite_limits()
    required = count_gadget_vertices(t)
    if required > limits.max_vertices:
        raise BudgetExceededError(
            f"G_T needs {required} vertices, the cap is {limits.max_vertices}",
            limit=limits.max_vertices,
            required=required,
        )
    b = t.branch
    seqs = normal_trees.sequences(b, t.depth)
    kinds: List[domain.VertexKind] = []
    index: Dict[domain.VertexKind, int] = {}

    def add(tag: domain.VertexKind) -> int:
        index[tag] = len(kinds)
        kinds.append(tag)
        return index[tag]

    for s in seqs:
        add(domain.VertexKind("Seq", s))
    for s in seqs[1:]:
        add(domain.VertexKind("Star", s))
    for s in seqs:
        add(domain.VertexKind("Plus", s))
    for s in seqs:
        add(domain.VertexKind("PlusPlus", s))
    for s in seqs:
        for i in range(normal_trees.rank(s, b) + 3):
            for j in range(i + 1):
                add(domain.VertexKind("Tine", s, i=i, j=j))
    for u, s in _code_order(t):
        for x in code_strings(u):
            add(domain.VertexKind("Code", s, u=u, x=x))

    edges = []
    for s in seqs:
        seq = index[domain.VertexKind("Seq", s)]
        if s:
            star = index[domain.VertexKind("Star", s)]
            edges.append((index[domain.VertexKind("Seq", s[:-1])], star))
            edges.append((star, seq))
        plus = index[domain.VertexKind("Plus", s)]
        plusplus = index[domain.VertexKind("PlusPlus", s)]
        edges.append((seq, plus))
        edges.append((plus, plusplus))
        for i in range(normal_trees.rank(s, b) + 3):
            previous = plusplus
            for j in range(i + 1):
                tine = index[domain.VertexKind("Tine", s, i=i, j=j)]
                edges.append((previous, tine))
                previous = tine
    for u, s in _code_order(t):
        labels = code_strings(u)
        previous = index[domain.VertexKind("Seq", s)]
        for x in labels[:-1]:
            code = index[domain.VertexKind("Code", s, u=u, x=x)]
            edges.append((previous, code))
            previous = code
        side = index[domain.VertexKind("Code", s, u=u, x=labels[-1])]
        edges.append((index[domain.VertexKind("Code", s, u=u, x=labels[-1][:-1])], side))

    graph = graph_core.make_graph(len(kinds), edges)
    logger.debug(f"built G_T with {graph.n} vertices for d={t.depth} b={b}")
    return domain.GadgetGraph(graph=graph, kinds=tuple(kinds), source=t)


def kind_index(g: domain.GadgetGraph) -> Dict[domain.VertexKind, int]:
    return {tag: v for v, tag in enumerate(g.kinds)}


def branch_leaves(g: domain.GadgetGraph) -> List[int]:
    """Ends of the maximal paths starting at Seq(∅), in vertex order."""
    adj = graph_core.adjacency(g.graph)
    root = kind_index(g)[domain.VertexKind("Seq", ())]
    return [v for v in range(g.graph.n) if v != root and len(adj[v]) == 1]


def gadget_embedding_from_witness(
    gs: domain.GadgetGraph, gt: domain.GadgetGraph, f: domain.LipschitzMap
) -> domain.VertexMap:
    """The vertex map s -> f(s) induced by an injective rank-monotone witness.

    Star, Plus and PlusPlus follow their spine vertex, Tine(s, i, j) goes
    to Tine(f(s), i, j) and Code(u, s, x) to Code(u, f(s), x).
    """
    table = dict(f.pairs)
    target = kind_index(gt)
    images = []
    for tag in gs.kinds:
        image = domain.VertexKind(tag.kind, table[tag.s], u=tag.u, i=tag.i, j=tag.j, x=tag.x)
        images.append(target[image])
    return domain.VertexMap(images=tuple(images))


def _check_conventions(gs: domain.GadgetGraph, gt: domain.GadgetGraph):
    s, t = gs.source, gt.source
    if s.depth != t.depth or s.branch > t.branch:
        raise ConventionMismatchError(
            f"G_S built at (d={s.depth}, b={s.branch}) cannot be compared with "
            f"G_T at (d={t.depth}, b={t.branch})"
        )


def structured_embed(
    gs: domain.GadgetGraph,
    gt: domain.GadgetGraph,
    limits: Optional[domain.SearchLimits] = None,
) -> Optional[domain.VertexMap]:
    """Kind-preserving embedding G_S -> G_T, or None.

    Searches the spine map f over every sequence of the source bound:
    injective, length- and prefix-preserving, rank(f(s)) >= rank(s), and
    (u, s) in S implies (u, f(s)) in T. The first f in length-lex order
    with ascending entries wins; the induced vertex map is re-validated.
    """
    _check_conventions(gs, gt)
    limits = limits or graph_core.suite_limits()
    s_tree, t_tree = gs.source, gt.source
    bs, bt = s_tree.branch, t_tree.branch
    order = [s for s in normal_trees.sequences(bs, s_tree.depth) if s]
    codes: Dict[Tuple[int, ...], List[str]] = {}
    for u, s in s_tree.nodes:
        codes.setdefault(s, []).append(u)
    counter = graph_core.NodeCounter(limits, "structured_embed")
    table: Dict[Tuple[int, ...], Tuple[int, ...]] = {(): ()}
    if any((u, ()) not in t_tree.nodes for u in codes.get((), ())):
        return None

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        s = order[k]
        parent = table[s[:-1]]
        taken = {table[s[:-1] + (i,)][-1] for i in range(s[-1])}
        for c in range(bt):
            if c in taken:
                continue
            counter.tick()
            t = parent + (c,)
            if normal_trees.rank(t, bt) < normal_trees.rank(s, bs):
                continue
            if any((u, t) not in t_tree.nodes for u in codes.get(s, ())):
                continue
            table[s] = t
            if extend(k + 1):
                return True
        table.pop(s, None)
        return False

    if not extend(0):
        return None
    f = domain.LipschitzMap(
        pairs=tuple((s, table[s]) for s in [()] + order), bound=bt
    )
    witness = gadget_embedding_from_witness(gs, gt, f)
    if not graph_core.is_embedding(gs.graph, gt.graph, witness):
        return None
    return witness


def spine_map(gs: domain.GadgetGraph, gt: domain.GadgetGraph, m: domain.VertexMap):
    """Read the spine map s -> f(s) back off a kind-preserving vertex map."""
    return {
        tag.s: gt.kinds[m.images[v]].s for v, tag in enumerate(gs.kinds) if tag.kind == "Seq"
    }


def bridge_target(t: domain.FiniteNormalTree) -> domain.FiniteNormalTree:
    """T re-presented in bound 2b - 1, which leaves room for injective witnesses."""
    return normal_trees.normal_closure(t, max(2 * t.branch - 1, 1))


def free_embedding_diagnostic(
    gs: domain.GadgetGraph, gt: domain.GadgetGraph, limits: domain.SearchLimits
) -> str:
    """"holds", "fails" or "undecided" (budget) for kind-blind embeddability."""
    try:
        found = graph_core.find_embedding(gs.graph, gt.graph, limits)
    except BudgetExceededError:
        return "undecided"
    return "holds" if found is not None else "fails"


def check_iso_equality(
    gs: domain.GadgetGraph, gt: domain.GadgetGraph, limits=None
) -> bool:
    isomorphic = graph_core.find_isomorphism(gs.graph, gt.graph, limits=limits) is not None
    return isomorphic == (gs.source == gt.source)


def verify_iso_equality(
    corpus: Sequence[domain.FiniteNormalTree], limits=None
) -> List[domain.CheckResult]:
    """G_S ≅ G_T iff S = T, for every pair of the corpus."""
    limits = limits or graph_core.suite_limits()
    gadgets = [build_gadget(t, limits) for t in corpus]
    results = []
    for i, gs in enumerate(gadgets):
        for j in range(i, len(gadgets)):
            passed = check_iso_equality(gs, gadgets[j], limits)
            results.append(domain.CheckResult(lhs=i, rhs=j, passed=passed))
    return results


def verify_rigidity(
    corpus: Sequence[domain.FiniteNormalTree], limits=None
) -> List[domain.CheckResult]:
    limits = limits or graph_core.suite_limits()
    results = []
    for i, t in enumerate(corpus):
        order = graph_core.automorphisms(build_gadget(t, limits).graph, limits=limits).order
        results.append(
            domain.CheckResult(
                lhs=i, rhs=-1, passed=order == 1, detail=f"|Aut(G_T)| = {order}"
            )
        )
    return results
