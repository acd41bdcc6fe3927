"""
Finite metric spaces from graphs: geodesic spaces of combinatorial trees
and ultrametric branch spaces of gadget graphs, with ball structures.

Branch space of G_T: one point per maximal path starting at Seq(∅); two
points at distance 2**-(n) when their paths share n + 1 vertices. The
tines at s form a fork at distance 2**-(2|s|+2), the two code branches
of (u, s) a fork at distance 2**-(2|s|+2θ(u)+3).

Point slots follow a fixed layout: slot 3·rank(s) is the branch through
s continued by zeros to full depth and ending in tine 0, slot 3n+1 is
the n-th tine branch ordered by (rank(s), i), slot 3n+2 the n-th code
branch ordered by (rank(s), θ(u), side).
"""

import logging
from collections import Counter
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

try:
    from finite_forge import domain, graph_core, normal_trees, tree_gadget
    from finite_forge.repositories import PreconditionError, SchemaError
except ModuleNotFoundError:
    import domain
    import graph_core
    import normal_trees
    import tree_gadget
    from repositories import PreconditionError, SchemaError

logger = logging.getLogger(__name__)


def make_metric(rows: Sequence[Sequence]) -> domain.FiniteMetric:
    n = len(rows)
    dist = tuple(tuple(Fraction(x) for x in row) for row in rows)
    for i, row in enumerate(dist):
        if len(row) != n:
            raise SchemaError(f"row {i} has {len(row)} entries for {n} points", f"dist.{i}")
        if row[i] != 0:
            raise SchemaError(f"d({i},{i}) is not zero", f"dist.{i}")
    for i, j in combinations(range(n), 2):
        if dist[i][j] != dist[j][i] or dist[i][j] <= 0:
            raise SchemaError(f"d({i},{j}) is not symmetric and positive", f"dist.{i}")
    return domain.FiniteMetric(n=n, dist=dist)


def is_metric(m: domain.FiniteMetric) -> bool:
    d = m.dist
    return all(
        d[x][z] <= d[x][y] + d[y][z]
        for x in range(m.n)
        for y in range(m.n)
        for z in range(m.n)
    )


def is_ultrametric(m: domain.FiniteMetric) -> bool:
    d = m.dist
    return all(
        d[x][z] <= max(d[x][y], d[y][z])
        for x in range(m.n)
        for y in range(m.n)
        for z in range(m.n)
    )


def build_discrete(g: domain.Graph) -> domain.FiniteMetric:
    """Path-length metric of a combinatorial tree."""
    if g.n == 0 or not nx.is_tree(graph_core.to_networkx(g)):
        raise PreconditionError("the geodesic space needs a connected acyclic graph")
    rows = graph_core.distance_matrix(g)
    return domain.FiniteMetric(
        n=g.n, dist=tuple(tuple(Fraction(x) for x in row) for row in rows)
    )


def recover_graph(m: domain.FiniteMetric) -> domain.Graph:
    return graph_core.make_graph(
        m.n, [(i, j) for i, j in combinations(range(m.n), 2) if m.dist[i][j] == 1]
    )


def tree_corpus(max_n: int) -> List[domain.Graph]:
    """Combinatorial trees on 1..max_n vertices, one per isomorphism class."""
    corpus = [graph_core.make_graph(1, [])] if max_n >= 1 else []
    for n in range(2, max_n + 1):
        corpus.extend(graph_core.graph_from_networkx(t) for t in nx.nonisomorphic_trees(n))
    return corpus


def is_isometric_embedding(
    a: domain.FiniteMetric, b: domain.FiniteMetric, m: domain.VertexMap
) -> bool:
    images = m.images
    if len(images) != a.n or any(not 0 <= w < b.n for w in images):
        return False
    if len(set(images)) != a.n:
        return False
    return all(
        a.dist[x][y] == b.dist[images[x]][images[y]] for x, y in combinations(range(a.n), 2)
    )


def iso_embed_metric(
    a: domain.FiniteMetric,
    b: domain.FiniteMetric,
    limits: Optional[domain.SearchLimits] = None,
) -> Optional[domain.VertexMap]:
    """Least injective distance-preserving map a -> b, or None.

    A point may only go where its distance multiset fits inside the
    candidate's.
    """
    limits = limits or graph_core.default_limits()
    if a.n > b.n:
        return None
    rows_a = [Counter(row) for row in a.dist]
    rows_b = [Counter(row) for row in b.dist]
    allowed = [
        [w for w in range(b.n) if all(rows_b[w][x] >= c for x, c in rows_a[v].items())]
        for v in range(a.n)
    ]
    counter = graph_core.NodeCounter(limits, "iso_embed_metric")
    images: List[int] = []
    used = [False] * b.n

    def extend(v: int) -> bool:
        if v == a.n:
            return True
        for w in allowed[v]:
            if used[w]:
                continue
            counter.tick()
            if any(a.dist[u][v] != b.dist[images[u]][w] for u in range(v)):
                continue
            images.append(w)
            used[w] = True
            if extend(v + 1):
                return True
            images.pop()
            used[w] = False
        return False

    if extend(0):
        return domain.VertexMap(images=tuple(images))
    return None


def iso_metric(
    a: domain.FiniteMetric, b: domain.FiniteMetric, limits=None
) -> Optional[domain.VertexMap]:
    if a.n != b.n:
        return None
    return iso_embed_metric(a, b, limits)


def _root_paths(g: domain.GadgetGraph, leaves: Sequence[int]) -> List[List[int]]:
    adj = graph_core.adjacency(g.graph)
    root = tree_gadget.kind_index(g)[domain.VertexKind("Seq", ())]
    parent = {root: None}
    queue = [root]
    for v in queue:
        for w in sorted(adj[v]):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    paths = []
    for leaf in leaves:
        path = []
        v = leaf
        while v is not None:
            path.append(v)
            v = parent[v]
        paths.append(path[::-1])
    return paths


def _shared(p: Sequence[int], q: Sequence[int]) -> int:
    k = 0
    while k < min(len(p), len(q)) and p[k] == q[k]:
        k += 1
    return k


def build_branch_space(g: domain.GadgetGraph) -> domain.BranchSpace:
    t = g.source
    leaves = tree_gadget.branch_leaves(g)
    paths = _root_paths(g, leaves)
    n = len(leaves)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for x, y in combinations(range(n), 2):
        rows[x][y] = rows[y][x] = Fraction(1, 2 ** (_shared(paths[x], paths[y]) - 1))
    metric = domain.FiniteMetric(n=n, dist=tuple(tuple(r) for r in rows))
    kinds = tuple(g.kinds[v] for v in leaves)
    point_of = {tag: p for p, tag in enumerate(kinds)}

    forks = []
    for s in normal_trees.sequences(t.branch, t.depth):
        tines = frozenset(p for p, tag in enumerate(kinds) if tag.kind == "Tine" and tag.s == s)
        forks.append(
            domain.Fork(kind="tine", s=s, u="", points=tines, distance=Fraction(1, 2 ** (2 * len(s) + 2)))
        )
    for u, s in tree_gadget._code_order(t):
        codes = frozenset(
            p for p, tag in enumerate(kinds) if tag.kind == "Code" and tag.s == s and tag.u == u
        )
        exponent = 2 * len(s) + 2 * normal_trees.theta(u) + 3
        forks.append(
            domain.Fork(kind="code", s=s, u=u, points=codes, distance=Fraction(1, 2**exponent))
        )

    slots = []
    tine_points = sorted(
        (p for p, tag in enumerate(kinds) if tag.kind == "Tine"),
        key=lambda p: (normal_trees.rank(kinds[p].s, t.branch), kinds[p].i),
    )
    code_points = sorted(
        (p for p, tag in enumerate(kinds) if tag.kind == "Code"),
        key=lambda p: (
            normal_trees.rank(kinds[p].s, t.branch),
            normal_trees.theta(kinds[p].u),
            kinds[p].x.endswith("1"),
        ),
    )
    for s in normal_trees.sequences(t.branch, t.depth):
        through = s + (0,) * (t.depth - len(s))
        rep = point_of[domain.VertexKind("Tine", through, i=0, j=0)]
        slots.append((3 * normal_trees.rank(s, t.branch), rep))
    slots.extend((3 * k + 1, p) for k, p in enumerate(tine_points))
    slots.extend((3 * k + 2, p) for k, p in enumerate(code_points))
    return domain.BranchSpace(
        metric=metric,
        leaves=tuple(leaves),
        leaf_kinds=kinds,
        forks=tuple(forks),
        slots=tuple(sorted(slots)),
    )


def check_forks(space: domain.BranchSpace) -> List[str]:
    """Fork pairs whose distance is not the prescribed one."""
    problems = []
    for fork in space.forks:
        for x, y in combinations(sorted(fork.points), 2):
            if space.metric.dist[x][y] != fork.distance:
                problems.append(
                    f"{fork.kind} fork at s={fork.s} u={fork.u!r}: d({x},{y}) = "
                    f"{space.metric.dist[x][y]}, expected {fork.distance}"
                )
    return problems


def induced_branch_map(
    gs: domain.GadgetGraph,
    gt: domain.GadgetGraph,
    m: domain.VertexMap,
    us: domain.BranchSpace,
    ut: domain.BranchSpace,
) -> domain.VertexMap:
    """Point map U_{G_S} -> U_{G_T} read off a kind-preserving gadget embedding."""
    target = {v: p for p, v in enumerate(ut.leaves)}
    images = []
    for v in us.leaves:
        w = m.images[v]
        if w not in target:
            raise PreconditionError(f"leaf {v} is not sent to a leaf")
        images.append(target[w])
    return domain.VertexMap(images=tuple(images))


def ball(m: domain.FiniteMetric, p: int, radius: Fraction) -> frozenset:
    """Open ball {x : d(p, x) < radius}."""
    return frozenset(x for x in range(m.n) if m.dist[p][x] < radius)


def diameter(m: domain.FiniteMetric, points) -> Fraction:
    return max((m.dist[x][y] for x in points for y in points), default=Fraction(0))


def radius_grid(m: domain.FiniteMetric) -> Tuple[Fraction, ...]:
    """Half the least distance, the distances, the midpoints between
    consecutive distances, and two values above the largest."""
    values = sorted({m.dist[x][y] for x, y in combinations(range(m.n), 2)})
    if not values:
        return (Fraction(1, 2), Fraction(1))
    grid = {values[0] / 2, values[-1] * Fraction(3, 2), values[-1] * 2}
    grid.update(values)
    grid.update((x + y) / 2 for x, y in zip(values, values[1:]))
    return tuple(sorted(grid))


def build_ball_structure(
    m: domain.FiniteMetric,
    slots: Optional[Sequence[Tuple[int, int]]] = None,
    forks: Sequence[frozenset] = (),
) -> domain.BallStructure:
    """Names (slot, q) over the radius grid with their balls and diameters.

    R((n, q), (n', q')) is containment of the named balls; Q_r holds of a
    name iff the diameter of its ball is below r.
    """
    slots = tuple(slots) if slots is not None else tuple((p, p) for p in range(m.n))
    radii = radius_grid(m)
    names, balls, diameters = [], [], []
    for slot, p in slots:
        for q in radii:
            names.append((slot, q))
            members = ball(m, p, q)
            balls.append(members)
            diameters.append(diameter(m, members))
    return domain.BallStructure(
        names=tuple(names),
        balls=tuple(balls),
        diameters=tuple(diameters),
        radii=radii,
        slots=slots,
        forks=tuple(frozenset(f) for f in forks),
    )


def branch_ball_structure(space: domain.BranchSpace) -> domain.BallStructure:
    return build_ball_structure(
        space.metric, space.slots, [fork.points for fork in space.forks]
    )


def contains(s: domain.BallStructure, x: int, y: int) -> bool:
    """R(x, y) for name indices x, y."""
    return s.balls[x] <= s.balls[y]


def has_diameter_below(s: domain.BallStructure, r: Fraction, x: int) -> bool:
    return s.diameters[x] < r


def _ball_consistent(s: domain.BallStructure, h: Dict[int, int]) -> bool:
    for x, y in combinations(sorted(h), 2):
        if (s.balls[x] == s.balls[y]) != (s.balls[h[x]] == s.balls[h[y]]):
            return False
    return True


def same_fork(s: domain.BallStructure, p: int, q: int) -> bool:
    return any(p in fork and q in fork for fork in s.forks)


def can_extend_ball_auto(s: domain.BallStructure, h: Dict[int, int]) -> bool:
    """Whether a partial name map extends to an automorphism of the structure.

    A name of a ball with two or more points must go to a name of the same
    ball. A name of a singleton {p} must go to a singleton {p'} carrying as
    many names, with p' = p or p, p' in one fork. Names of one ball must go
    to names of one ball.

    The spine-through slots put a second name on some tine leaves, so a
    fork can hold singletons with different name counts.
    """
    if len(set(h.values())) != len(h):
        raise PreconditionError("the partial map is not injective")
    names_of = Counter(s.balls)
    for x, y in h.items():
        if len(s.balls[x]) > 1:
            if s.balls[y] != s.balls[x]:
                return False
        else:
            if len(s.balls[y]) != 1 or names_of[s.balls[x]] != names_of[s.balls[y]]:
                return False
            (p,), (q,) = tuple(s.balls[x]), tuple(s.balls[y])
            if p != q and not same_fork(s, p, q):
                return False
    return _ball_consistent(s, h)


def _ball_graph(s: domain.BallStructure):
    distinct = sorted(set(s.balls), key=lambda b: (len(b), sorted(b)))
    where = {b: k for k, b in enumerate(distinct)}
    multiplicity = Counter(s.balls)
    diam = {b: d for b, d in zip(s.balls, s.diameters)}
    edges = [
        (i, j)
        for i, j in combinations(range(len(distinct)), 2)
        if distinct[i] < distinct[j] or distinct[j] < distinct[i]
    ]
    graph = graph_core.make_graph(len(distinct), edges)
    colors = [(len(b), diam[b], multiplicity[b]) for b in distinct]
    return graph, colors, where


def can_extend_ball_brute_force(
    s: domain.BallStructure, h: Dict[int, int], limits=None
) -> bool:
    """Search a containment- and diameter-preserving permutation of the
    distinct balls that moves each named ball where h sends it."""
    if not _ball_consistent(s, h):
        return False
    graph, colors, where = _ball_graph(s)
    left_pin: Dict[int, int] = {}
    right_pin: Dict[int, int] = {}
    for k, (x, y) in enumerate(sorted(h.items())):
        source, target = where[s.balls[x]], where[s.balls[y]]
        pin = left_pin.setdefault(source, k + 1)
        right_pin.setdefault(target, pin)
        if right_pin[target] != pin:
            return False
    left = [(colors[v], left_pin.get(v, 0)) for v in range(graph.n)]
    right = [(colors[v], right_pin.get(v, 0)) for v in range(graph.n)]
    found = graph_core.find_isomorphism(
        graph, graph, left, right, limits=limits or graph_core.suite_limits()
    )
    return found is not None


def structures_isomorphic(
    a: domain.BallStructure, b: domain.BallStructure, limits=None
) -> bool:
    """Isomorphism of two ball structures, compared through their ball graphs."""
    ga, ca, _ = _ball_graph(a)
    gb, cb, _ = _ball_graph(b)
    if len(a.names) != len(b.names):
        return False
    found = graph_core.find_isomorphism(ga, gb, ca, cb, limits=limits or graph_core.suite_limits())
    return found is not None
