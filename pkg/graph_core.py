"""
Finite simple graphs and the exhaustive search kernels.

"Embedding" means induced embedding everywhere in the forge: an
isomorphism onto an induced subgraph (the graph language has a single
binary relation, so substructure means induced subgraph).

All searches are exhaustive with pruning, deterministic, and charged
against a SearchLimits budget. Domain vertices are assigned in order
0..n-1 with candidates tried in ascending order, so the first witness
found is the lexicographically least one.

Isomorphism and automorphism searches use colour refinement with
individualisation. Twin classes (vertices with the same colour and the
same open or closed neighbourhood) are collapsed first, the quotient is
searched, and the result is lifted back.
"""

import logging
import random
from collections import Counter, defaultdict, deque
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

try:
    from finite_forge import domain, settings
    from finite_forge.repositories import (
        BudgetExceededError,
        MalformedMapError,
        SchemaError,
    )
except ModuleNotFoundError:
    import domain
    import settings
    from repositories import BudgetExceededError, MalformedMapError, SchemaError

logger = logging.getLogger(__name__)


def default_limits() -> domain.SearchLimits:
    return domain.SearchLimits(
        max_nodes=settings.FORGE_BUDGET,
        max_vertices=settings.FORGE_MAX_VERTICES,
    )


def suite_limits() -> domain.SearchLimits:
    return domain.SearchLimits(
        max_nodes=settings.FORGE_BUDGET,
        max_vertices=settings.FORGE_SUITE_MAX_VERTICES,
    )


class NodeCounter:
    """Counts expanded search nodes and refuses past the budget."""

    def __init__(self, limits: domain.SearchLimits, what: str):
        self.limit = limits.max_nodes
        self.used = 0
        self.what = what

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceededError(
                f"{self.what}: budget of {self.limit} search nodes exhausted",
                limit=self.limit,
                required=self.used,
            )


def admit(limits: domain.SearchLimits, *graphs: domain.Graph):
    for g in graphs:
        if g.n > limits.max_vertices:
            raise BudgetExceededError(
                f"graph has {g.n} vertices, the cap is {limits.max_vertices}",
                limit=limits.max_vertices,
                required=g.n,
            )


def make_graph(n: int, edges) -> domain.Graph:
    """Build a graph, normalising every edge to (min, max)."""
    if not isinstance(n, int) or n < 0:
        raise SchemaError(f"vertex count must be a natural number, got {n}", "n")
    normalised = set()
    for k, edge in enumerate(edges):
        if len(edge) != 2:
            raise SchemaError(f"edge {edge} is not a pair", f"edges.{k}")
        i, j = int(edge[0]), int(edge[1])
        if i == j:
            raise SchemaError(f"self-loop at {i}", f"edges.{k}")
        if not (0 <= i < n and 0 <= j < n):
            raise SchemaError(
                f"edge {edge} leaves the vertex range 0..{n - 1}", f"edges.{k}"
            )
        normalised.add((min(i, j), max(i, j)))
    return domain.Graph(n=n, edges=frozenset(normalised))


def sorted_edges(g: domain.Graph) -> List[Tuple[int, int]]:
    return sorted(g.edges)


@lru_cache(maxsize=4096)
def adjacency(g: domain.Graph) -> Tuple[frozenset, ...]:
    neighbours = [set() for _ in range(g.n)]
    for i, j in g.edges:
        neighbours[i].add(j)
        neighbours[j].add(i)
    return tuple(frozenset(a) for a in neighbours)


def has_edge(g: domain.Graph, i: int, j: int) -> bool:
    return (min(i, j), max(i, j)) in g.edges


@lru_cache(maxsize=1024)
def distance_matrix(g: domain.Graph) -> Tuple[Tuple[Optional[int], ...], ...]:
    """All-pairs path lengths by breadth-first search, None if unreachable."""
    adj = adjacency(g)
    rows = []
    for source in range(g.n):
        dist: List[Optional[int]] = [None] * g.n
        dist[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if dist[w] is None:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        rows.append(tuple(dist))
    return tuple(rows)


def complement(g: domain.Graph) -> domain.Graph:
    return domain.Graph(
        n=g.n,
        edges=frozenset(
            pair for pair in combinations(range(g.n), 2) if pair not in g.edges
        ),
    )


def relabel(g: domain.Graph, perm: Sequence[int]) -> domain.Graph:
    """The image of g under the vertex bijection perm."""
    return make_graph(g.n, [(perm[i], perm[j]) for i, j in g.edges])


def to_networkx(g: domain.Graph) -> nx.Graph:
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.n))
    nxg.add_edges_from(g.edges)
    return nxg


def _check_map(images: Sequence[int], size: int, codomain_size: int):
    if len(images) != size:
        raise MalformedMapError(
            f"map has {len(images)} images for {size} domain vertices"
        )
    for v, w in enumerate(images):
        if not isinstance(w, int) or not 0 <= w < codomain_size:
            raise MalformedMapError(
                f"image {w} of vertex {v} is outside 0..{codomain_size - 1}"
            )


def is_embedding(g: domain.Graph, h: domain.Graph, m: domain.VertexMap) -> bool:
    """True iff m is injective and {i,j} in g <=> {m(i),m(j)} in h."""
    images = m.images
    _check_map(images, g.n, h.n)
    if len(set(images)) != len(images):
        return False
    for i, j in combinations(range(g.n), 2):
        if has_edge(g, i, j) != has_edge(h, images[i], images[j]):
            return False
    return True


def is_isomorphism(g: domain.Graph, h: domain.Graph, m: domain.VertexMap) -> bool:
    return g.n == h.n and len(g.edges) == len(h.edges) and is_embedding(g, h, m)


def is_epimorphism(
    h: domain.Graph, hprime: domain.Graph, m: domain.VertexMap
) -> bool:
    """True iff m maps hprime onto the vertices of h, edges to edges."""
    images = m.images
    _check_map(images, hprime.n, h.n)
    if len(set(images)) != h.n:
        return False
    return all(has_edge(h, images[i], images[j]) for i, j in hprime.edges)


def compose_maps(
    first: domain.VertexMap, second: domain.VertexMap
) -> domain.VertexMap:
    """second after first."""
    return domain.VertexMap(
        images=tuple(second.images[w] for w in first.images),
        injective=first.injective and second.injective,
        domain_id=first.domain_id,
        codomain_id=second.codomain_id,
    )


def find_embedding(
    g: domain.Graph,
    h: domain.Graph,
    limits: Optional[domain.SearchLimits] = None,
) -> Optional[domain.VertexMap]:
    """Lexicographically least induced embedding of g into h, or None.

    Pruning: degree (deg_g(v) <= deg_h(w)), adjacency and non-adjacency
    with every earlier vertex, and d_h(m(u), m(v)) <= d_g(u, v).
    """
    limits = limits or default_limits()
    admit(limits, g, h)
    if g.n > h.n:
        return None
    if g.n == 0:
        return domain.VertexMap(images=())
    adj_g, adj_h = adjacency(g), adjacency(h)
    dist_g, dist_h = distance_matrix(g), distance_matrix(h)
    deg_h = [len(a) for a in adj_h]
    counter = NodeCounter(limits, "find_embedding")
    images = [-1] * g.n
    used = [False] * h.n

    def consistent(v: int, w: int) -> bool:
        for u in range(v):
            wu = images[u]
            if (u in adj_g[v]) != (wu in adj_h[w]):
                return False
            dg = dist_g[u][v]
            if dg is not None:
                dh = dist_h[wu][w]
                if dh is None or dh > dg:
                    return False
        return True

    def extend(v: int) -> bool:
        if v == g.n:
            return True
        need = len(adj_g[v])
        for w in range(h.n):
            if used[w] or deg_h[w] < need:
                continue
            counter.tick()
            if not consistent(v, w):
                continue
            images[v] = w
            used[w] = True
            if extend(v + 1):
                return True
            used[w] = False
        images[v] = -1
        return False

    if extend(0):
        return domain.VertexMap(images=tuple(images))
    return None


def find_epimorphism(
    h: domain.Graph,
    hprime: domain.Graph,
    limits: Optional[domain.SearchLimits] = None,
) -> Optional[domain.VertexMap]:
    """Lexicographically least surjective edge-preserving map hprime -> h.

    A witness means h is an epimorphic image of hprime.
    """
    limits = limits or default_limits()
    admit(limits, h, hprime)
    if hprime.n < h.n:
        return None
    if h.n == 0:
        return domain.VertexMap(images=(), injective=False) if hprime.n == 0 else None
    adj_h, adj_p = adjacency(h), adjacency(hprime)
    counter = NodeCounter(limits, "find_epimorphism")
    images = [-1] * hprime.n
    hits = [0] * h.n
    uncovered = h.n

    def extend(x: int) -> bool:
        nonlocal uncovered
        if x == hprime.n:
            return uncovered == 0
        if hprime.n - x < uncovered:
            return False
        earlier = [z for z in adj_p[x] if z < x]
        for y in range(h.n):
            counter.tick()
            if adj_p[x] and not adj_h[y]:
                continue
            if any(images[z] not in adj_h[y] for z in earlier):
                continue
            images[x] = y
            hits[y] += 1
            if hits[y] == 1:
                uncovered -= 1
            if extend(x + 1):
                return True
            hits[y] -= 1
            if hits[y] == 0:
                uncovered += 1
        images[x] = -1
        return False

    if extend(0):
        return domain.VertexMap(images=tuple(images), injective=False)
    return None


def _rank_labels(*labellings: Sequence) -> List[List[int]]:
    """Replace arbitrary sortable labels by ranks shared across labellings."""
    ranking = {
        label: r
        for r, label in enumerate(
            sorted({label for labels in labellings for label in labels})
        )
    }
    return [[ranking[label] for label in labels] for labels in labellings]


def _refine(adj: Sequence[frozenset], colors: Sequence[int]) -> List[int]:
    """Coarsest equitable partition finer than colors.

    Cells are renumbered by sorted signature, so the result does not
    depend on vertex names.
    """
    colors = list(colors)
    cells = len(set(colors))
    while True:
        signatures = [
            (colors[v], tuple(sorted(colors[w] for w in adj[v])))
            for v in range(len(adj))
        ]
        ranking = {sig: r for r, sig in enumerate(sorted(set(signatures)))}
        refined = [ranking[sig] for sig in signatures]
        if len(ranking) == cells:
            return refined
        colors, cells = refined, len(ranking)


class _Quotient:
    """A coloured graph with its twin classes collapsed."""

    def __init__(self, adj: Sequence[frozenset], colors: Sequence[int]):
        n = len(adj)
        closed = defaultdict(list)
        for v in range(n):
            closed[(colors[v], adj[v] | {v})].append(v)
        classes = []
        placed = [False] * n
        for members in closed.values():
            if len(members) > 1:
                classes.append((1, members))
                for v in members:
                    placed[v] = True
        opened = defaultdict(list)
        for v in range(n):
            if not placed[v]:
                opened[(colors[v], adj[v])].append(v)
        for members in opened.values():
            classes.append((2 if len(members) > 1 else 0, members))
        classes.sort(key=lambda kind_members: kind_members[1][0])
        self.members = [sorted(members) for _, members in classes]
        owner = [0] * n
        for c, members in enumerate(self.members):
            for v in members:
                owner[v] = c
        self.adj = [
            frozenset(owner[w] for w in adj[members[0]]) - {c}
            for c, members in enumerate(self.members)
        ]
        self.labels = [
            (colors[members[0]], kind, len(members))
            for (kind, _), members in zip(classes, self.members)
        ]

    def lift(self, other: "_Quotient", mapping: Sequence[int], n: int) -> List[int]:
        images = [0] * n
        for c, members in enumerate(self.members):
            for v, w in zip(members, other.members[mapping[c]]):
                images[v] = w
        return images


def _union(adj_a: Sequence[frozenset], adj_b: Sequence[frozenset]) -> List[frozenset]:
    shift = len(adj_a)
    return list(adj_a) + [frozenset(w + shift for w in a) for a in adj_b]


def _pair_search(
    adj: Sequence[frozenset], n: int, colors: List[int], counter: NodeCounter
) -> Optional[Tuple[int, ...]]:
    """Colour-preserving bijection from the left half of a union onto the right."""
    colors = _refine(adj, colors)
    left, right = colors[:n], colors[n:]
    if Counter(left) != Counter(right):
        return None
    sizes = Counter(left)
    target = next((v for v in range(n) if sizes[left[v]] > 1), None)
    if target is None:
        where = {c: w for w, c in enumerate(right)}
        return tuple(where[c] for c in left)
    fresh = max(colors) + 1
    for w in range(n):
        if right[w] != left[target]:
            continue
        counter.tick()
        trial = list(colors)
        trial[target] = fresh
        trial[n + w] = fresh
        found = _pair_search(adj, n, trial, counter)
        if found is not None:
            return found
    return None


def find_isomorphism(
    g: domain.Graph,
    h: domain.Graph,
    g_colors: Optional[Sequence] = None,
    h_colors: Optional[Sequence] = None,
    limits: Optional[domain.SearchLimits] = None,
) -> Optional[domain.VertexMap]:
    """A colour-preserving isomorphism g -> h, or None.

    Colours are arbitrary mutually comparable labels; both sides are ranked
    together, so a vertex may only map to a vertex with an equal label.
    """
    limits = limits or default_limits()
    admit(limits, g, h)
    if g.n != h.n or len(g.edges) != len(h.edges):
        return None
    if g.n == 0:
        return domain.VertexMap(images=())
    g_labels = list(g_colors) if g_colors is not None else [0] * g.n
    h_labels = list(h_colors) if h_colors is not None else [0] * h.n
    gc, hc = _rank_labels(g_labels, h_labels)
    if Counter(gc) != Counter(hc):
        return None
    gq = _Quotient(adjacency(g), gc)
    hq = _Quotient(adjacency(h), hc)
    if len(gq.members) != len(hq.members):
        return None
    ql, qr = _rank_labels(gq.labels, hq.labels)
    counter = NodeCounter(limits, "find_isomorphism")
    mapping = _pair_search(
        _union(gq.adj, hq.adj), len(gq.members), ql + qr, counter
    )
    if mapping is None:
        return None
    witness = domain.VertexMap(images=tuple(gq.lift(hq, mapping, g.n)))
    if not is_isomorphism(g, h, witness):
        return None
    if any(gc[v] != hc[w] for v, w in enumerate(witness.images)):
        return None
    return witness


def is_isomorphic(g: domain.Graph, h: domain.Graph, limits=None) -> bool:
    return find_isomorphism(g, h, limits=limits) is not None


def automorphisms(
    g: domain.Graph,
    colors: Optional[Sequence] = None,
    limits: Optional[domain.SearchLimits] = None,
) -> domain.AutomorphismGroup:
    """Generators and exact order of the colour-preserving automorphisms.

    The order is the product of orbit sizes along a stabiliser chain of
    the twin quotient, times the factorial of every twin-class size.
    Generators are the adjacent transpositions inside twin classes plus
    one lifted automorphism per non-trivial coset of the chain.
    """
    limits = limits or default_limits()
    admit(limits, g)
    labels = list(colors) if colors is not None else [0] * g.n
    (ranked,) = _rank_labels(labels)
    q = _Quotient(adjacency(g), ranked)
    (qcolors,) = _rank_labels(q.labels)
    nq = len(q.members)
    generators = []
    order = 1
    for members in q.members:
        order *= factorial(len(members))
        for a, b in zip(members, members[1:]):
            perm = list(range(g.n))
            perm[a], perm[b] = b, a
            generators.append(tuple(perm))
    counter = NodeCounter(limits, "automorphisms")
    union = _union(q.adj, q.adj)
    fixed = list(qcolors)
    while True:
        refined = _refine(q.adj, fixed)
        sizes = Counter(refined)
        base = next((v for v in range(nq) if sizes[refined[v]] > 1), None)
        if base is None:
            break
        fresh = max(refined) + 1
        orbit = 1
        for w in range(nq):
            if w == base or refined[w] != refined[base]:
                continue
            counter.tick()
            left = list(refined)
            right = list(refined)
            left[base] = fresh
            right[w] = fresh
            found = _pair_search(union, nq, left + right, counter)
            if found is not None:
                orbit += 1
                generators.append(tuple(q.lift(q, found, g.n)))
        order *= orbit
        fixed = list(refined)
        fixed[base] = fresh
    logger.debug(f"automorphisms: n={g.n} quotient={nq} order={order}")
    return domain.AutomorphismGroup(
        degree=g.n, generators=tuple(generators), order=order
    )


def canonical_form(g: domain.Graph) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
    """Complete isomorphism invariant: least relabelled edge list over the
    leaves of the individualisation-refinement tree."""
    adj = adjacency(g)
    best = None

    def descend(colors: List[int]):
        nonlocal best
        colors = _refine(adj, colors)
        sizes = Counter(colors)
        cell = min((c for c in sizes if sizes[c] > 1), default=None)
        if cell is None:
            form = tuple(
                sorted(
                    (min(colors[i], colors[j]), max(colors[i], colors[j]))
                    for i, j in g.edges
                )
            )
            if best is None or form < best:
                best = form
            return
        fresh = max(colors) + 1
        for v in range(g.n):
            if colors[v] == cell:
                trial = list(colors)
                trial[v] = fresh
                descend(trial)

    descend([0] * g.n)
    return (g.n, best if best is not None else ())


def enumerate_graphs(n: int, up_to_iso: bool = False) -> Iterator[domain.Graph]:
    """All graphs on exactly n vertices, in edge-mask order.

    With up_to_iso, only the first labelled graph of each isomorphism
    class is emitted.
    """
    pairs = list(combinations(range(n), 2))
    total = 2 ** len(pairs)
    if total > settings.FORGE_MAX_CORPUS:
        raise BudgetExceededError(
            f"{total} labelled graphs on {n} vertices exceed the corpus cap "
            f"of {settings.FORGE_MAX_CORPUS}",
            limit=settings.FORGE_MAX_CORPUS,
            required=total,
        )
    seen = set()
    for mask in range(total):
        edges = frozenset(p for k, p in enumerate(pairs) if mask >> k & 1)
        g = domain.Graph(n=n, edges=edges)
        if up_to_iso:
            form = canonical_form(g)
            if form in seen:
                continue
            seen.add(form)
        yield g


def graph_corpus(max_n: int, min_n: int = 1) -> List[domain.Graph]:
    """Graphs on min_n..max_n vertices, one per isomorphism class."""
    corpus = []
    for n in range(min_n, max_n + 1):
        corpus.extend(enumerate_graphs(n, up_to_iso=True))
    return corpus


def rigid_graph_corpus(count: int, n: int = 6, seed: int = 0) -> List[domain.Graph]:
    """count pairwise non-isomorphic rigid graphs on n vertices.

    Drawn from a seeded G(n, 1/2); the smallest non-trivial rigid graphs
    have 6 vertices.
    """
    rng = random.Random(seed)
    pairs = list(combinations(range(n), 2))
    found: List[domain.Graph] = []
    forms = set()
    attempts = 0
    while len(found) < count:
        attempts += 1
        if attempts > 10000:
            raise BudgetExceededError(
                f"found only {len(found)} rigid graphs on {n} vertices",
                limit=10000,
                required=count,
            )
        g = domain.Graph(
            n=n, edges=frozenset(p for p in pairs if rng.random() < 0.5)
        )
        if automorphisms(g).order != 1:
            continue
        form = canonical_form(g)
        if form in forms:
            continue
        forms.add(form)
        found.append(g)
    return found


def graph_from_networkx(nxg: nx.Graph) -> domain.Graph:
    """Relabel a networkx graph to 0..n-1 in sorted node order."""
    index: Dict = {v: k for k, v in enumerate(sorted(nxg.nodes))}
    return make_graph(len(index), [(index[a], index[b]) for a, b in nxg.edges])
