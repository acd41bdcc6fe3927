"""
The verification-suite registry.

A suite turns its parameters and seed into a list of instances and a list
of CheckResult whose lhs/rhs index that list. Everything a suite does is a
function of (params, seed, corpus), so two runs with the same inputs give
the same results in the same order. Checks fan out through the
TaskDispatchRepository, which hands results back in submission order.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Any, Callable, Dict, List, Optional

try:
    from finite_forge import (
        colored_orders,
        domain,
        epi_gadget,
        finite_actions,
        graph_core,
        graph_norm,
        metric_gadget,
        normal_trees,
        tree_gadget,
    )
    from finite_forge.interfaces import requests
    from finite_forge.repositories import TaskDispatchRepository, UnknownSuiteError
except ModuleNotFoundError:
    import colored_orders
    import domain
    import epi_gadget
    import finite_actions
    import graph_core
    import graph_norm
    import metric_gadget
    import normal_trees
    import tree_gadget
    from interfaces import requests
    from repositories import TaskDispatchRepository, UnknownSuiteError

logger = logging.getLogger(__name__)

# node budget for the kind-blind embedding diagnostic, per pair
FREE_EMBED_BUDGET = 5000


@dataclass
class SuiteContext:
    params: Dict[str, int]
    seed: int
    dispatch: TaskDispatchRepository
    limits: domain.SearchLimits
    corpus: Optional[List[Any]] = None

    def get(self, name: str, default: int) -> int:
        return self.params.get(name, default)

    def map(self, fn: Callable, items: List) -> List:
        return self.dispatch.map_ordered(fn, list(items))


@dataclass
class SuiteRun:
    instances: List[Dict] = field(default_factory=list)
    results: List[domain.CheckResult] = field(default_factory=list)

    def add_instance(self, obj) -> int:
        payload = obj if isinstance(obj, dict) else requests.dump_instance(obj)
        self.instances.append(payload)
        return len(self.instances) - 1


@dataclass(frozen=True)
class Suite:
    name: str
    corpus_kind: Optional[str]
    run: Callable[[SuiteContext], SuiteRun]


REGISTRY: Dict[str, Suite] = {}


def suite(name: str, corpus_kind: Optional[str] = None):
    def register(fn: Callable[[SuiteContext], SuiteRun]):
        REGISTRY[name] = Suite(name=name, corpus_kind=corpus_kind, run=fn)
        return fn

    return register


def get_suite(name: str) -> Suite:
    if name not in REGISTRY:
        raise UnknownSuiteError(
            f"no suite called {name!r}; known suites are {sorted(REGISTRY)}"
        )
    return REGISTRY[name]


def _trees(ctx: SuiteContext, depth: int, branch: int) -> List[domain.FiniteNormalTree]:
    if ctx.corpus is not None:
        return list(ctx.corpus)
    return list(normal_trees.enumerate_trees(ctx.get("depth", depth), ctx.get("branch", branch)))


def _graphs(ctx: SuiteContext, vertices: int, min_n: int = 1) -> List[domain.Graph]:
    if ctx.corpus is not None:
        return [g for g in ctx.corpus if g.n >= min_n]
    return graph_core.graph_corpus(ctx.get("vertices", vertices), min_n=min_n)


def _pairs(n: int):
    return [(i, j) for i in range(n) for j in range(n)]


def _result(lhs: int, rhs: int, passed: bool, detail: str = "") -> domain.CheckResult:
    return domain.CheckResult(lhs=lhs, rhs=rhs, passed=passed, detail=detail)


@suite("normal-form", corpus_kind="tree3")
def normal_form(ctx: SuiteContext) -> SuiteRun:
    """Normal-form trees of every quasi-order pass all three conditions,
    project back to their relation and reduce it through slices; the
    checker agrees with the naive recomputation on random triple trees."""
    d, b = ctx.get("depth", 2), ctx.get("branch", 2)
    run = SuiteRun()
    closed = []
    if ctx.corpus is None:
        for relation in normal_trees.quasi_orders(d):
            t = normal_trees.tree_from_quasi_order(relation, d, b)
            closed.append((run.add_instance(t), t, relation))
        rng = random.Random(ctx.seed)
        randoms = [normal_trees.random_tree3(d, b, rng) for _ in range(ctx.get("samples", 100))]
    else:
        randoms = list(ctx.corpus)
    sampled = [(run.add_instance(t), t) for t in randoms]
    points = normal_trees.bitstrings(d, exact=True)

    def check_closed(case):
        k, t, relation = case
        report = normal_trees.check_normal_form(t)
        if not (report.reflexive and report.locally_transitive and report.antisymmetric_at_zero):
            return _result(k, -1, False, "; ".join(report.counterexamples))
        if normal_trees.project_quasi_order(t) != relation:
            return _result(k, -1, False, "p[S] differs from the relation")
        slices = {x: normal_trees.slice_tree(t, x) for x in points}
        for x in points:
            for y in points:
                below = normal_trees.le_max(slices[x], slices[y]) is not None
                if below != ((x, y) in relation):
                    return _result(k, -1, False, f"slices {x!r}, {y!r} disagree with R")
        return _result(k, -1, True)

    def check_sampled(case):
        k, t = case
        report = normal_trees.check_normal_form(t)
        mine = (report.reflexive, report.locally_transitive, report.antisymmetric_at_zero)
        naive = normal_trees.naive_normal_form(t)
        return _result(k, -1, mine == naive, f"checker={mine} naive={naive}")

    run.results = ctx.map(check_closed, closed) + ctx.map(check_sampled, sampled)
    return run


def _signature(t: domain.FiniteNormalTree):
    """The (code set, top set) pair projection_criterion reads off a tree."""
    top = t.branch - 1
    codes = frozenset(u for u, _ in t.nodes)
    tops = frozenset(u for u, s in t.nodes if s == (top,) * len(s))
    return codes, tops


@suite("le-max-order-axioms", corpus_kind="tree")
def le_max_order_axioms(ctx: SuiteContext) -> SuiteRun:
    """Reflexivity on every tree; transitivity by composing witnesses.

    Corpora with at most `samples` triples are checked on every triple.
    Larger ones are split into classes by signature: transitivity runs on
    every triple of class representatives, and every other tree must
    relate to each representative, both ways, as its own representative
    does.
    """
    corpus = _trees(ctx, 2, 2)
    run = SuiteRun()
    for t in corpus:
        run.add_instance(t)
    n = len(corpus)
    owner: Dict[int, int] = {}
    if n**3 <= ctx.get("samples", 2000):
        reps = list(range(n))
    else:
        first: Dict[Any, int] = {}
        for i, t in enumerate(corpus):
            owner[i] = first.setdefault(_signature(t), i)
        reps = sorted(first.values())
        logger.info(f"le-max-order-axioms: {n} trees in {len(reps)} signature classes")
    triples = [(i, j, k) for i in reps for j in reps for k in reps]

    def reflexive(i: int):
        t = corpus[i]
        f = normal_trees.le_max(t, t)
        return _result(i, i, f is not None and normal_trees.is_lipschitz_witness(t, t, f))

    def transitive(triple):
        i, j, k = triple
        s, t, u = corpus[i], corpus[j], corpus[k]
        f = normal_trees.le_max(s, t)
        if (f is not None) != normal_trees.projection_criterion(s, t):
            return _result(i, j, False, "search and projection criterion disagree")
        g = normal_trees.le_max(t, u)
        if f is None or g is None:
            return _result(i, k, True, f"via {j}: vacuous")
        h = normal_trees.compose_witnesses(f, g)
        ok = normal_trees.is_lipschitz_witness(s, u, h)
        return _result(i, k, ok, f"via {j}")

    results = ctx.map(reflexive, range(n)) + ctx.map(transitive, triples)
    if owner:
        below = {
            (i, j): normal_trees.le_max(corpus[i], corpus[j]) is not None
            for i in reps
            for j in reps
        }

        def same_as_owner(case):
            i, r = case
            own = owner[i]
            x, y = corpus[i], corpus[r]
            forward = normal_trees.le_max(x, y)
            backward = normal_trees.le_max(y, x)
            ok = (forward is not None) == below[(own, r)]
            ok = ok and (backward is not None) == below[(r, own)]
            ok = ok and (forward is None or normal_trees.is_lipschitz_witness(x, y, forward))
            ok = ok and (backward is None or normal_trees.is_lipschitz_witness(y, x, backward))
            return _result(
                i, r, ok,
                f"class of {own}: forward={forward is not None} backward={backward is not None}",
            )

        members = [(i, r) for i in range(n) if owner[i] != i for r in reps]
        results += ctx.map(same_as_owner, members)
    run.results = results
    return run


@suite("gt-iso-equality", corpus_kind="tree")
def gt_iso_equality(ctx: SuiteContext) -> SuiteRun:
    corpus = _trees(ctx, 1, 2)
    run = SuiteRun()
    for t in corpus:
        run.add_instance(t)
    run.results = tree_gadget.verify_iso_equality(corpus, ctx.limits)
    return run


@suite("gt-rigidity", corpus_kind="tree")
def gt_rigidity(ctx: SuiteContext) -> SuiteRun:
    corpus = _trees(ctx, 1, 2)
    run = SuiteRun()
    for t in corpus:
        run.add_instance(t)
    run.results = tree_gadget.verify_rigidity(corpus, ctx.limits)
    return run


@suite("gt-embed-bridge", corpus_kind="tree")
def gt_embed_bridge(ctx: SuiteContext) -> SuiteRun:
    """structured_embed(G_S, G_T') found iff S <=max T, with T' the closure
    of T in bound 2b - 1. Kind-blind embeddability is a diagnostic."""
    corpus = _trees(ctx, 1, 2)
    run = SuiteRun()
    for t in corpus:
        run.add_instance(t)
    sources = ctx.map(lambda t: tree_gadget.build_gadget(t, ctx.limits), corpus)
    targets = ctx.map(
        lambda t: tree_gadget.build_gadget(tree_gadget.bridge_target(t), ctx.limits), corpus
    )
    free_limits = domain.SearchLimits(
        max_nodes=FREE_EMBED_BUDGET, max_vertices=ctx.limits.max_vertices
    )

    def check(pair):
        i, j = pair
        found = tree_gadget.structured_embed(sources[i], targets[j], ctx.limits)
        below = normal_trees.le_max(corpus[i], corpus[j]) is not None
        results = [_result(i, j, (found is not None) == below, f"embed={found is not None} le_max={below}")]
        if found is None:
            verdict = tree_gadget.free_embedding_diagnostic(sources[i], targets[j], free_limits)
            results.append(
                domain.CheckResult(
                    lhs=i, rhs=j, passed=True, detail=f"free embedding {verdict}", diagnostic=True
                )
            )
        return results

    run.results = [r for rs in ctx.map(check, _pairs(len(corpus))) for r in rs]
    return run


@suite("epi-iso-bridge", corpus_kind="graph")
def epi_iso_bridge(ctx: SuiteContext) -> SuiteRun:
    """G ≅ H iff G* ≅ H* on equal-size pairs; for every G embedded in H the
    fold of H* along the embedding is an epimorphism onto G*."""
    corpus = _graphs(ctx, 4)
    run = SuiteRun()
    for g in corpus:
        run.add_instance(g)
    d = ctx.params.get("depth")
    b = ctx.params.get("branch")
    run.results = epi_gadget.verify_iso_bridge(corpus, d, b, ctx.limits)
    run.results += epi_gadget.verify_epi_bridge(corpus, d, ctx.limits)
    return run


@suite("epi-extension", corpus_kind="graph")
def epi_extension(ctx: SuiteContext) -> SuiteRun:
    """Simple-automorphism orders match the product formula, full orders
    match it times the typed block-tree symmetries (also at the bridge
    parameters), the always-fixed vertices are fixed, and
    can_extend_simple agrees with brute force on injective sequences of
    length <= 3 (once per distinct gadget)."""
    d, b = ctx.get("depth", 1), ctx.get("branch", 2)
    corpus = ctx.corpus if ctx.corpus is not None else (
        graph_core.graph_corpus(ctx.get("vertices", 3)) + graph_core.rigid_graph_corpus(1)
    )
    run = SuiteRun()
    for g in corpus:
        run.add_instance(g)
    gadgets = ctx.map(lambda g: epi_gadget.build_epi_gadget(g, d, b, ctx.limits), corpus)
    results: List[domain.CheckResult] = []

    def full_order(i: int, e: domain.EpiGadget) -> domain.CheckResult:
        full = graph_core.automorphisms(e.graph, limits=ctx.limits).order
        expected = epi_gadget.full_order_formula(e)
        return _result(
            i, -1, full == expected,
            f"|Aut(G*)| = {full} at (d={e.depth}, b={e.branch}), formula {expected}",
        )

    def orders(i: int):
        e = gadgets[i]
        group = epi_gadget.simple_automorphism_group(e, ctx.limits)
        expected = epi_gadget.simple_order_formula(e)
        fixed = epi_gadget.always_fixed(e)
        moved = [v for v in fixed if any(gen[v] != v for gen in group.generators)]
        out = [
            _result(i, -1, group.order == expected, f"|simple Aut| = {group.order}, formula {expected}"),
            _result(i, -1, not moved, f"moved always-fixed vertices {moved}"),
        ]
        out.append(full_order(i, e))
        pd, pb = epi_gadget.bridge_parameters(corpus[i])
        if (pd, pb) != (d, b):
            out.append(full_order(i, epi_gadget.build_epi_gadget(corpus[i], pd, pb, ctx.limits)))
        return out

    results.extend(r for rs in ctx.map(orders, range(len(corpus))) for r in rs)

    distinct: Dict[Any, int] = {}
    for i, e in enumerate(gadgets):
        distinct.setdefault(graph_core.canonical_form(e.graph), i)
    cases = []
    for i in distinct.values():
        n = gadgets[i].graph.n
        for length in range(1, 4):
            cases.extend((i, seq) for seq in permutations(range(n), length))

    def extension(case):
        i, seq = case
        auto = epi_gadget.can_extend_simple(gadgets[i], seq)
        brute = epi_gadget.extends_simple_brute_force(gadgets[i], seq, ctx.limits)
        return _result(i, -1, auto == brute, f"{seq}: criterion={auto} search={brute}")

    results.extend(ctx.map(extension, cases))
    run.results = results
    return run


@suite("colored-dp-oracle", corpus_kind="colored-sum")
def colored_dp_oracle(ctx: SuiteContext) -> SuiteRun:
    """Greedy decision against full monotone-assignment enumeration."""
    rng = random.Random(ctx.seed)
    run = SuiteRun()
    cases = []
    if ctx.corpus is not None:
        sums = list(ctx.corpus)
        for s in sums:
            run.add_instance(s)
        cases = [(i, j, colored_orders.EQUALITY) for i, j in _pairs(len(sums))]
    else:
        sums = []
        for _ in range(ctx.get("samples", 10000)):
            a, c = colored_orders.random_sum(rng), colored_orders.random_sum(rng)
            relation = rng.choice([colored_orders.EQUALITY, colored_orders.GEQ])
            i, j = run.add_instance(a), run.add_instance(c)
            sums.extend([a, c])
            cases.append((i, j, relation))

    def check(case):
        i, j, relation = case
        fast = colored_orders.embeds(sums[i], sums[j], relation)
        slow = colored_orders.embeds_naive(sums[i], sums[j], relation)
        ok = (fast is None) == (slow is None)
        if fast is not None:
            ok = ok and colored_orders.is_valid_assignment(sums[i], sums[j], relation, fast)
        return _result(i, j, ok, f"{relation.kind}: greedy={fast} naive={slow}")

    results = ctx.map(check, cases)
    if ctx.corpus is None:
        successor = colored_orders.make_sum([(1, 0), (0, 0)])
        limit = colored_orders.make_sum([(1, 0)])
        i, j = run.add_instance(successor), run.add_instance(limit)
        stuck = colored_orders.embeds(successor, limit, colored_orders.EQUALITY) is None
        results.append(_result(i, j, stuck, "omega + 1 into omega"))
        for x in range(5):
            for y in range(5):
                ok = colored_orders.ordinal_type_embeds(x, y) == (x <= y)
                results.append(_result(-1, -1, ok, f"omega^{x} into omega^{y}"))
    run.results = results
    return run


@suite("colored-identity", corpus_kind="graph")
def colored_identity(ctx: SuiteContext) -> SuiteRun:
    corpus = _graphs(ctx, 4)
    run = SuiteRun()
    for g in corpus:
        run.add_instance(g)
    run.results = colored_orders.verify_identity_lemma(
        corpus, ctx.get("depth", 2), ctx.get("branch", 2)
    )
    return run


@suite("metric-forks", corpus_kind="tree")
def metric_forks(ctx: SuiteContext) -> SuiteRun:
    """Branch spaces are ultrametric with the prescribed fork distances, and
    the geodesic metric of every gadget gives the gadget back."""
    corpus = _trees(ctx, 1, 2)
    run = SuiteRun()
    for t in corpus:
        run.add_instance(t)

    def check(i: int):
        g = tree_gadget.build_gadget(corpus[i], ctx.limits)
        space = metric_gadget.build_branch_space(g)
        problems = metric_gadget.check_forks(space)
        recovered = metric_gadget.recover_graph(metric_gadget.build_discrete(g.graph))
        return [
            _result(i, -1, metric_gadget.is_ultrametric(space.metric), "ultrametric inequality"),
            _result(i, -1, not problems, "; ".join(problems)),
            _result(i, -1, recovered == g.graph, "recover_graph(build_discrete(G_T)) = G_T"),
        ]

    run.results = [r for rs in ctx.map(check, range(len(corpus))) for r in rs]
    return run


@suite("metric-bridges", corpus_kind="tree")
def metric_bridges(ctx: SuiteContext) -> SuiteRun:
    """U_S and U_T are isometric iff S = T; gadget embeddings induce isometric
    embeddings of branch spaces; geodesic metrics of trees are isometric
    iff the trees are isomorphic, and isometric ones have isomorphic ball
    structures."""
    corpus = _trees(ctx, 1, 2)
    run = SuiteRun()
    for t in corpus:
        run.add_instance(t)
    gadgets = ctx.map(lambda t: tree_gadget.build_gadget(t, ctx.limits), corpus)
    spaces = ctx.map(metric_gadget.build_branch_space, gadgets)

    def isometric(pair):
        i, j = pair
        found = metric_gadget.iso_metric(spaces[i].metric, spaces[j].metric, ctx.limits)
        return _result(i, j, (found is not None) == (corpus[i] == corpus[j]), f"isometric={found is not None}")

    def forward(pair):
        i, j = pair
        target = tree_gadget.build_gadget(tree_gadget.bridge_target(corpus[j]), ctx.limits)
        m = tree_gadget.structured_embed(gadgets[i], target, ctx.limits)
        if m is None:
            return _result(i, j, True, "no gadget embedding")
        ut = metric_gadget.build_branch_space(target)
        induced = metric_gadget.induced_branch_map(gadgets[i], target, m, spaces[i], ut)
        ok = metric_gadget.is_isometric_embedding(spaces[i].metric, ut.metric, induced)
        return _result(i, j, ok, "induced branch map")

    pairs = _pairs(len(corpus))
    results = ctx.map(isometric, [(i, j) for i, j in pairs if i <= j]) + ctx.map(forward, pairs)

    trees = metric_gadget.tree_corpus(ctx.get("vertices", 6))
    offset = len(run.instances)
    for g in trees:
        run.add_instance(g)
    metrics = [metric_gadget.build_discrete(g) for g in trees]
    structures = ctx.map(metric_gadget.build_ball_structure, metrics)

    def discrete(pair):
        i, j = pair
        found = metric_gadget.iso_metric(metrics[i], metrics[j], ctx.limits) is not None
        same = graph_core.is_isomorphic(trees[i], trees[j], ctx.limits)
        out = [_result(offset + i, offset + j, found == same, f"isometric={found} isomorphic={same}")]
        if found:
            balls = metric_gadget.structures_isomorphic(structures[i], structures[j], ctx.limits)
            out.append(_result(offset + i, offset + j, balls, f"ball structures isomorphic={balls}"))
        return out

    results += [
        r for rs in ctx.map(discrete, [(i, j) for i, j in _pairs(len(trees)) if i <= j]) for r in rs
    ]
    run.results = results
    return run


@suite("ball-extension", corpus_kind="tree")
def ball_extension(ctx: SuiteContext) -> SuiteRun:
    """The extension criterion on ball structures against a search over ball
    permutations, on the smallest gadget and every tree of T(1, 2).

    A one-name map is decided by its two balls, so one name per ball covers
    every one-point map. Maps on 2 and 3 names are sampled, with targets
    drawn among names of balls of the same size.
    """
    if ctx.corpus is not None:
        corpus = list(ctx.corpus)
    else:
        corpus = [next(normal_trees.enumerate_trees(0, 1))] + _trees(ctx, 1, 2)
    run = SuiteRun()
    rng = random.Random(ctx.seed)
    samples = ctx.get("samples", 200)
    cases = []
    structures = []
    for t in corpus:
        k = run.add_instance(t)
        space = metric_gadget.build_branch_space(tree_gadget.build_gadget(t, ctx.limits))
        s = metric_gadget.branch_ball_structure(space)
        structures.append(s)
        first_name: Dict[frozenset, int] = {}
        by_size: Dict[int, List[int]] = {}
        for x, members in enumerate(s.balls):
            first_name.setdefault(members, x)
            by_size.setdefault(len(members), []).append(x)
        representatives = sorted(first_name.values())
        cases.extend((k, {x: y}) for x in representatives for y in representatives)
        for size in (2, 3):
            for _ in range(samples):
                h: Dict[int, int] = {}
                for x in rng.sample(range(len(s.names)), size):
                    taken = set(h.values())
                    fits = [y for y in by_size[len(s.balls[x])] if y not in taken]
                    h[x] = rng.choice(fits or [y for y in range(len(s.names)) if y not in taken])
                cases.append((k, h))
    logger.info(f"ball-extension: {len(cases)} partial maps over {len(corpus)} structures")

    def check(case):
        k, h = case
        s = structures[k]
        auto = metric_gadget.can_extend_ball_auto(s, h)
        brute = metric_gadget.can_extend_ball_brute_force(s, h, ctx.limits)
        return _result(k, -1, auto == brute, f"{sorted(h.items())}: criterion={auto} search={brute}")

    run.results = ctx.map(check, cases)
    return run


def _random_vector(rng: random.Random, dimension: int) -> List[Fraction]:
    return [Fraction(rng.randint(-20, 20), rng.randint(1, 12)) for _ in range(dimension)]


def _random_graph(rng: random.Random, n: int) -> domain.Graph:
    return graph_core.make_graph(
        n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5]
    )


def _extreme_graphs() -> List[domain.Graph]:
    out = []
    for n in range(2, 5):
        out.append(graph_core.make_graph(n, []))
        out.append(graph_core.make_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)]))
        out.append(graph_core.make_graph(n, [(i, i + 1) for i in range(n - 1)]))
    return out


@suite("norm-sandwich", corpus_kind="graph")
def norm_sandwich(ctx: SuiteContext) -> SuiteRun:
    """The sandwich bound on random rational vectors, the two-point norms
    against chi, and strongly-extreme certificates for every e_p."""
    rng = random.Random(ctx.seed)
    run = SuiteRun()
    samples = []
    for _ in range(ctx.get("samples", 10000)):
        g = _random_graph(rng, rng.randint(2, 6))
        samples.append((run.add_instance(g), g, _random_vector(rng, g.n)))

    def sandwich(case):
        k, g, v = case
        n = graph_norm.make_norm(g)
        return _result(k, -1, graph_norm.sandwich_check(n, v), f"v = {[str(x) for x in v]}")

    results = ctx.map(sandwich, samples)

    graphs = _graphs(ctx, 5, min_n=2)
    indexed = [(run.add_instance(g), g) for g in graphs]

    def pairs(case):
        k, g = case
        n = graph_norm.make_norm(g)
        bad = [
            (p, q, sp, sq, str(value))
            for p, q, sp, sq, value in graph_norm.pair_norms(n)
            if value != graph_norm.expected_pair_norm(n, p, q)
        ]
        return _result(k, -1, not bad, f"two-point norms off chi: {bad}")

    results += ctx.map(pairs, indexed)

    cases = []
    for g in _extreme_graphs():
        k = run.add_instance(g)
        for p in range(g.n):
            for epsilon in (Fraction(1, 4), Fraction(1, 2), Fraction(1)):
                cases.append((k, g, p, epsilon))

    def extreme(case):
        k, g, p, epsilon = case
        c = graph_norm.strongly_extreme_certificate(graph_norm.make_norm(g), p, epsilon)
        return _result(
            k, -1, c.valid,
            f"e_{p}, eps={epsilon}: max separation {c.max_separation} over {c.vertex_count} vertices",
        )

    results += ctx.map(extreme, cases)
    run.results = results
    return run


@suite("norm-li-bridge", corpus_kind="graph")
def norm_li_bridge(ctx: SuiteContext) -> SuiteRun:
    """A signed isometric embedding X_G -> X_H exists iff G embeds in H."""
    graphs = _graphs(ctx, 5, min_n=2)
    run = SuiteRun()
    for g in graphs:
        run.add_instance(g)
    norms = [graph_norm.make_norm(g) for g in graphs]

    def check(pair):
        i, j = pair
        signed = graph_norm.signed_isometric_embedding(norms[i], norms[j], ctx.limits)
        embedded = graph_core.find_embedding(graphs[i], graphs[j], ctx.limits)
        ok = (signed is not None) == (embedded is not None)
        if signed is not None:
            ok = ok and graph_norm.is_signed_isometric(norms[i], norms[j], signed)
        return _result(i, j, ok, f"signed={signed is not None} embedding={embedded is not None}")

    run.results = ctx.map(check, _pairs(len(graphs)))
    return run


@suite("norm-extension", corpus_kind="graph")
def norm_extension(ctx: SuiteContext) -> SuiteRun:
    """On rigid graphs, a partial point map of S(X_G) extends to an
    automorphism iff every point goes to itself or its opposite."""
    graphs = ctx.corpus if ctx.corpus is not None else graph_core.rigid_graph_corpus(1, seed=ctx.seed)
    rng = random.Random(ctx.seed)
    run = SuiteRun()
    cases = []
    structures = []
    groups = []
    for g in graphs:
        k = run.add_instance(g)
        s = graph_norm.build_norm_structure(graph_norm.make_norm(g))
        structures.append(s)
        groups.append(graph_norm.structure_automorphisms(s))
        points = range(2 * s.dimension)
        for length in (1, 2):
            cases.extend((k, seq) for seq in permutations(points, length))
        for _ in range(ctx.get("samples", 200)):
            cases.append((k, tuple(rng.sample(points, 3))))

    def check(case):
        k, seq = case
        auto = graph_norm.can_extend_norm_auto(structures[k], seq)
        brute = graph_norm.brute_force_norm_extension(structures[k], seq, groups[k])
        return _result(k, -1, auto == brute, f"{seq}: criterion={auto} search={brute}")

    run.results = ctx.map(check, cases)
    return run


@suite("saturation", corpus_kind="setup")
def saturation(ctx: SuiteContext) -> SuiteRun:
    """P from the uniqueness set equals the direct E-saturation of f(B); a
    corrupted setup is caught; selectors and stabilizers behave.

    Generated setups always leave room for the corruption. A loaded setup
    with no spare code gets a diagnostic in place of that check.
    """
    rng = random.Random(ctx.seed)
    run = SuiteRun()
    if ctx.corpus is not None:
        setups = list(ctx.corpus)
    else:
        setups = [finite_actions.corruptible_setup(rng) for _ in range(ctx.get("samples", 100))]
    cases = []
    for setup, a in setups:
        k = run.add_instance(requests.SetupSchema.from_domain(setup, a).model_dump(mode="json"))
        y = rng.choice(sorted(finite_actions.group_elements(a.degree, a.generators)))
        cases.append((k, setup, a, y, rng.randrange(a.degree)))

    def check(case):
        k, setup, a, y, w = case
        found = finite_actions.saturation_by_uniqueness(setup, a)
        direct = finite_actions.direct_saturation(setup)
        out = [_result(k, -1, found == direct, f"P={sorted(found)} Sat={sorted(direct)}")]
        broken = finite_actions.corrupt_setup(setup)
        if broken is None:
            out.append(
                domain.CheckResult(
                    lhs=k, rhs=-1, passed=True, diagnostic=True,
                    detail="every class meeting f(B) is a single code; nothing to corrupt",
                )
            )
        else:
            drifted = finite_actions.saturation_by_uniqueness(broken, a, check=False)
            out.append(
                _result(k, -1, drifted != finite_actions.direct_saturation(broken), "corrupted setup detected")
            )
        attached = finite_actions.with_stabilizers(setup, a)
        order = len(finite_actions.group_elements(a.degree, a.generators))
        for instance, generators in sorted(attached.parameters.items()):
            point = setup.g[setup.f[instance]]
            sigma = domain.Subgroup(
                degree=a.degree,
                generators=generators,
                order=len(finite_actions.group_elements(a.degree, generators)),
            )
            selector = finite_actions.coset_selector(a, sigma)
            fixes = all(gen[point] == point for gen in generators)
            idempotent = all(selector.choice[s] == s for s in selector.choice.values())
            out.append(
                _result(
                    k, -1,
                    fixes and idempotent and len(selector.transversal) * sigma.order == order,
                    f"Σ({instance}) at {point}: |T|={len(selector.transversal)} "
                    f"|H|={sigma.order} |Y|={order}",
                )
            )
        out.append(
            _result(k, -1, finite_actions.conjugation_covariant(a, y, w), f"Stab(y.{w}) = y Stab({w}) y^-1")
        )
        return out

    run.results = [r for rs in ctx.map(check, cases) for r in rs]
    return run
