"""
Finite presentations of normal trees on 2 x omega and 2 x 2 x omega.

A FiniteNormalTree with bound b denotes the infinite tree obtained by
closing its nodes upwards in the numeric coordinate. Because a tree is
normal inside its bound, (u, t) lies in that closure iff
(u, clip(t, b)) is a node, which is what makes the bounded
representation enough to decide the max-embeddability order.

Conventions frozen here and recorded in every artifact:

- theta(u) is the length-lex rank of a bit string,
  theta(u) = 2**len(u) - 1 + int(u, 2);
- rank(s, b) is the length-lex rank of s among sequences over 0..b-1.
"""

import logging
import random
from functools import lru_cache
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Set, Tuple

try:
    from finite_forge import domain, settings
    from finite_forge.repositories import (
        BudgetExceededError,
        PreconditionError,
        SchemaError,
    )
except ModuleNotFoundError:
    import domain
    import settings
    from repositories import BudgetExceededError, PreconditionError, SchemaError

logger = logging.getLogger(__name__)

Seq = Tuple[int, ...]


def theta(u: str) -> int:
    return 2 ** len(u) - 1 + (int(u, 2) if u else 0)


def rank(s: Sequence[int], b: int) -> int:
    value = 0
    for x in s:
        value = value * b + x
    return sum(b**k for k in range(len(s))) + value


def clip(s: Sequence[int], b: int) -> Seq:
    return tuple(min(x, b - 1) for x in s)


def sequences(b: int, d: int, exact: bool = False) -> List[Seq]:
    """Sequences over 0..b-1 of length <= d (or == d), length-lex ordered."""
    out: List[Seq] = []
    level: List[Seq] = [()]
    for k in range(d + 1):
        if not exact or k == d:
            out.extend(level)
        level = [s + (i,) for s in level for i in range(b)]
    return out


def bitstrings(d: int, exact: bool = False) -> List[str]:
    out: List[str] = []
    level = [""]
    for k in range(d + 1):
        if not exact or k == d:
            out.extend(level)
        level = [u + c for u in level for c in "01"]
    return out


def _covers(s: Seq, b: int) -> List[Seq]:
    return [s[:i] + (s[i] + 1,) + s[i + 1 :] for i in range(len(s)) if s[i] + 1 < b]


def projection(t: domain.FiniteNormalTree) -> List[Seq]:
    """The s-projection, length-lex ordered."""
    return sorted({s for _, s in t.nodes}, key=lambda s: (len(s), s))


def validate_tree(t: domain.FiniteNormalTree) -> domain.FiniteNormalTree:
    d, b = t.depth, t.branch
    if d < 0 or b < 1:
        raise SchemaError(f"depth {d} and branch {b} must be >= 0 and >= 1", "d")
    if ("", ()) not in t.nodes:
        raise SchemaError("the root (∅, ∅) is missing", "nodes")
    for u, s in t.nodes:
        where = f"nodes.{u or '∅'}"
        if len(u) != len(s) or len(u) > d:
            raise SchemaError(f"node ({u!r}, {s}) has bad length", where)
        if any(c not in "01" for c in u):
            raise SchemaError(f"{u!r} is not a bit string", where)
        if any(not 0 <= x < b for x in s):
            raise SchemaError(f"node ({u!r}, {s}) leaves the bound {b}", where)
        if u and (u[:-1], s[:-1]) not in t.nodes:
            raise SchemaError(f"node ({u!r}, {s}) has no parent", where)
        for above in _covers(s, b):
            if (u, above) not in t.nodes:
                raise SchemaError(
                    f"not normal: ({u!r}, {s}) present but ({u!r}, {above}) missing",
                    where,
                )
    return t


def is_normal(t: domain.FiniteNormalTree) -> bool:
    try:
        validate_tree(t)
    except SchemaError:
        return False
    return True


def validate_tree3(t: domain.FiniteNormalTree3) -> domain.FiniteNormalTree3:
    d, b = t.depth, t.branch
    if d < 0 or b < 1:
        raise SchemaError(f"depth {d} and branch {b} must be >= 0 and >= 1", "d")
    if ("", "", ()) not in t.nodes:
        raise SchemaError("the root (∅, ∅, ∅) is missing", "nodes")
    for u, v, s in t.nodes:
        where = f"nodes.{u or '∅'}.{v or '∅'}"
        if not len(u) == len(v) == len(s) <= d:
            raise SchemaError(f"node ({u!r}, {v!r}, {s}) has bad length", where)
        if any(c not in "01" for c in u + v):
            raise SchemaError(f"({u!r}, {v!r}) are not bit strings", where)
        if any(not 0 <= x < b for x in s):
            raise SchemaError(f"node ({u!r}, {v!r}, {s}) leaves the bound", where)
        if u and (u[:-1], v[:-1], s[:-1]) not in t.nodes:
            raise SchemaError(f"node ({u!r}, {v!r}, {s}) has no parent", where)
        for above in _covers(s, b):
            if (u, v, above) not in t.nodes:
                raise SchemaError(f"node ({u!r}, {v!r}, {s}) is not normal", where)
    return t


def normal_closure(t: domain.FiniteNormalTree, bound: int) -> domain.FiniteNormalTree:
    """The same infinite tree presented inside a larger bound."""
    if bound < t.branch:
        raise PreconditionError(f"bound {bound} is below the tree bound {t.branch}")
    nodes = {
        (u, s)
        for u in bitstrings(t.depth)
        for s in sequences(bound, len(u), exact=True)
        if (u, clip(s, t.branch)) in t.nodes
    }
    return domain.FiniteNormalTree(depth=t.depth, branch=bound, nodes=frozenset(nodes))


def in_closure(t: domain.FiniteNormalTree, u: str, s: Sequence[int]) -> bool:
    return (u, clip(s, t.branch)) in t.nodes


def _upsets(elements: Sequence[Seq], b: int) -> Iterator[FrozenSet[Seq]]:
    """Up-closed subsets of an up-closed family, exclusion first."""
    ordered = sorted(elements, key=lambda s: (-sum(s), s))
    chosen: Set[Seq] = set()

    def walk(k: int):
        if k == len(ordered):
            yield frozenset(chosen)
            return
        x = ordered[k]
        yield from walk(k + 1)
        if all(c in chosen for c in _covers(x, b)):
            chosen.add(x)
            yield from walk(k + 1)
            chosen.discard(x)

    yield from walk(0)


def _children(upset: FrozenSet[Seq], b: int) -> List[Seq]:
    return sorted(s + (i,) for s in upset for i in range(b))


def count_trees(d: int, b: int) -> int:
    """Exact number of FiniteNormalTree with parameters (d, b)."""

    @lru_cache(maxsize=None)
    def below(level: int, upset: FrozenSet[Seq]) -> int:
        if level == d:
            return 1
        per_child = sum(
            below(level + 1, child) for child in _upsets(_children(upset, b), b)
        )
        return per_child**2

    return below(0, frozenset({()}))


def enumerate_trees(d: int, b: int) -> Iterator[domain.FiniteNormalTree]:
    """Every FiniteNormalTree with parameters (d, b), each exactly once.

    The node set at each bit string u is an up-set of the children of its
    parent's node set; bit strings are filled in length-lex order.
    """
    total = count_trees(d, b)
    if total > settings.FORGE_MAX_CORPUS:
        raise BudgetExceededError(
            f"{total} normal trees at (d={d}, b={b}) exceed the corpus cap "
            f"of {settings.FORGE_MAX_CORPUS}",
            limit=settings.FORGE_MAX_CORPUS,
            required=total,
        )
    logger.info(f"enumerating {total} normal trees at d={d} b={b}")
    order = [u for u in bitstrings(d) if u]
    chosen: Dict[str, FrozenSet[Seq]] = {"": frozenset({()})}

    def extend(k: int):
        if k == len(order):
            yield domain.FiniteNormalTree(
                depth=d,
                branch=b,
                nodes=frozenset((u, s) for u, ss in chosen.items() for s in ss),
            )
            return
        u = order[k]
        for upset in _upsets(_children(chosen[u[:-1]], b), b):
            chosen[u] = upset
            yield from extend(k + 1)
        del chosen[u]

    yield from extend(0)


def _check_depths(s: domain.FiniteNormalTree, t: domain.FiniteNormalTree):
    if s.depth != t.depth:
        raise PreconditionError(
            f"trees compared at different depths {s.depth} and {t.depth}"
        )


def le_max(
    s_tree: domain.FiniteNormalTree, t_tree: domain.FiniteNormalTree
) -> Optional[domain.LipschitzMap]:
    """Lexicographically least Lipschitz witness for S <=max T, or None.

    The witness is defined on the s-projection of S.
    """
    _check_depths(s_tree, t_tree)
    bt = t_tree.branch
    domain_seqs = set(projection(s_tree))
    codes: Dict[Seq, List[str]] = {}
    for u, s in s_tree.nodes:
        codes.setdefault(s, []).append(u)

    @lru_cache(maxsize=None)
    def feasible(s: Seq, t: Seq) -> Optional[Tuple[Tuple[Seq, Seq], ...]]:
        if any((u, t) not in t_tree.nodes for u in codes.get(s, ())):
            return None
        assignment = [(s, t)]
        for i in range(s_tree.branch):
            child = s + (i,)
            if child not in domain_seqs:
                continue
            for k in range(bt):
                below = feasible(child, t + (k,))
                if below is not None:
                    assignment.extend(below)
                    break
            else:
                return None
        return tuple(assignment)

    found = feasible((), ())
    if found is None:
        return None
    return domain.LipschitzMap(
        pairs=tuple(sorted(found, key=lambda p: (len(p[0]), p[0]))), bound=bt
    )


def projection_criterion(
    s_tree: domain.FiniteNormalTree, t_tree: domain.FiniteNormalTree
) -> bool:
    """S <=max T iff every code of S survives at the top of T's bound."""
    _check_depths(s_tree, t_tree)
    top = t_tree.branch - 1
    return all((u, (top,) * len(s)) in t_tree.nodes for u, s in s_tree.nodes)


def is_lipschitz_witness(
    s_tree: domain.FiniteNormalTree,
    t_tree: domain.FiniteNormalTree,
    f: domain.LipschitzMap,
) -> bool:
    """f is length- and prefix-preserving on the projection of S, and maps
    every node (u, s) of S into the upward closure of T."""
    table = dict(f.pairs)
    for s in projection(s_tree):
        if s not in table:
            return False
        image = table[s]
        if len(image) != len(s) or any(not 0 <= x < f.bound for x in image):
            return False
        if s and s[:-1] in table and table[s[:-1]] != image[:-1]:
            return False
    return all(in_closure(t_tree, u, table[s]) for u, s in s_tree.nodes)


def is_injective(f: domain.LipschitzMap) -> bool:
    images = [t for _, t in f.pairs]
    return len(set(images)) == len(images)


def is_rank_monotone(f: domain.LipschitzMap, source_bound: int) -> bool:
    return all(rank(t, f.bound) >= rank(s, source_bound) for s, t in f.pairs)


def compose_witnesses(
    f: domain.LipschitzMap, g: domain.LipschitzMap
) -> domain.LipschitzMap:
    """g after f."""
    table = dict(g.pairs)
    pairs = []
    for s, t in f.pairs:
        if t not in table:
            raise PreconditionError(f"second witness is undefined at {t}")
        pairs.append((s, table[t]))
    return domain.LipschitzMap(pairs=tuple(pairs), bound=g.bound)


def canonical_injective_witness(
    s_tree: domain.FiniteNormalTree,
    t_tree: domain.FiniteNormalTree,
    f0: domain.LipschitzMap,
) -> domain.InjectiveWitness:
    """Refine a witness into an injective, rank-monotone one.

    Built on every sequence of the source bound, level by level in lex
    order: the image of s extends the image of its parent by the least k
    that is at least the last entry of f0(s), unused by an earlier
    sibling, and gives rank(f(s)) >= rank(s). Outside the domain of f0 the
    lower bound is 0. If the target bound leaves no room, it is enlarged
    and the target is re-presented as its normal closure in the new bound.
    """
    if not is_lipschitz_witness(s_tree, t_tree, f0):
        raise PreconditionError("the supplied witness does not witness S <=max T")
    d, bs = s_tree.depth, s_tree.branch
    lower = dict(f0.pairs)
    for bound in range(t_tree.branch, bs + t_tree.branch + d + 1):
        table = _greedy_injective(d, bs, bound, lower)
        if table is not None:
            pairs = tuple((s, table[s]) for s in sequences(bs, d))
            logger.debug(f"injective witness found in bound {bound}")
            return domain.InjectiveWitness(
                witness=domain.LipschitzMap(pairs=pairs, bound=bound),
                bound=bound,
                closure=normal_closure(t_tree, bound),
            )
    raise PreconditionError("no injective rank-monotone refinement exists")


def _greedy_injective(
    d: int, bs: int, bound: int, lower: Dict[Seq, Seq]
) -> Optional[Dict[Seq, Seq]]:
    table: Dict[Seq, Seq] = {(): ()}
    for s in sequences(bs, d):
        if not s:
            continue
        parent = table[s[:-1]]
        used = {table[s[:-1] + (i,)][-1] for i in range(s[-1])}
        least = lower[s][-1] if s in lower else 0
        for k in range(least, bound):
            t = parent + (k,)
            if k not in used and rank(t, bound) >= rank(s, bs):
                table[s] = t
                break
        else:
            return None
    return table


def check_normal_form(t: domain.FiniteNormalTree3) -> domain.NormalFormReport:
    """Reflexivity, local transitivity (with clipped sums) and
    antisymmetry at zero of a triple tree."""
    d, b = t.depth, t.branch
    problems: List[str] = []
    reflexive = True
    for u in bitstrings(d):
        for s in sequences(b, len(u), exact=True):
            if (u, u, s) not in t.nodes:
                reflexive = False
                problems.append(f"missing ({u!r}, {u!r}, {s})")
                break
        if not reflexive:
            break
    by_first: Dict[str, List[Tuple[str, Seq]]] = {}
    for u, v, s in t.nodes:
        by_first.setdefault(u, []).append((v, s))
    transitive = True
    for u, v, s in sorted(t.nodes):
        for w, r in by_first.get(v, ()):
            total = clip(tuple(x + y for x, y in zip(s, r)), b)
            if (u, w, total) not in t.nodes:
                transitive = False
                problems.append(f"({u!r}, {v!r}, {s}) and ({v!r}, {w!r}, {r}) not closed")
                break
        if not transitive:
            break
    antisymmetric = True
    for u, v, s in sorted(t.nodes):
        if u != v and not any(s):
            antisymmetric = False
            problems.append(f"({u!r}, {v!r}, {s}) with u != v")
            break
    return domain.NormalFormReport(
        reflexive=reflexive,
        locally_transitive=transitive,
        antisymmetric_at_zero=antisymmetric,
        counterexamples=tuple(problems),
    )


def naive_normal_form(t: domain.FiniteNormalTree3) -> Tuple[bool, bool, bool]:
    """Independent recheck of check_normal_form by plain loops."""
    d, b = t.depth, t.branch
    nodes = list(t.nodes)
    reflexive = all(
        (u, u, s) in t.nodes
        for u in bitstrings(d)
        for s in sequences(b, len(u), exact=True)
    )
    transitive = True
    for u, v, s in nodes:
        for v2, w, r in nodes:
            if v2 == v and len(r) == len(s):
                total = tuple(min(x + y, b - 1) for x, y in zip(s, r))
                if (u, w, total) not in t.nodes:
                    transitive = False
    antisymmetric = all(u == v for u, v, s in nodes if all(x == 0 for x in s))
    return reflexive, transitive, antisymmetric


def slice_tree(t: domain.FiniteNormalTree3, x: str) -> domain.FiniteNormalTree:
    """S^x = {(u, s) : (u, x restricted to |u|, s) in S}."""
    if len(x) < t.depth:
        raise PreconditionError(f"slice point {x!r} is shorter than depth {t.depth}")
    nodes = frozenset((u, s) for u, v, s in t.nodes if v == x[: len(v)])
    return domain.FiniteNormalTree(depth=t.depth, branch=t.branch, nodes=nodes)


def _first_difference(u: str, v: str) -> int:
    return next((i for i, (a, c) in enumerate(zip(u, v)) if a != c), len(u))


def tree_from_quasi_order(
    relation: FrozenSet[Tuple[str, str]], d: int, b: int = 2
) -> domain.FiniteNormalTree3:
    """Normal-form tree of a quasi-order on {0,1}^d.

    (u, v, s) is a node iff u == v, or s is non-zero somewhere up to the
    first index where u and v differ and, at full length, u R v.
    """
    if b < 2:
        raise PreconditionError("normal-form trees need branch >= 2")
    points = bitstrings(d, exact=True)
    for x in points:
        if (x, x) not in relation:
            raise PreconditionError(f"relation is not reflexive at {x!r}")
    for x, y in relation:
        for y2, z in relation:
            if y2 == y and (x, z) not in relation:
                raise PreconditionError(f"relation is not transitive at {x!r}, {z!r}")
    nodes = set()
    for u in bitstrings(d):
        for v in bitstrings(len(u), exact=True):
            split = _first_difference(u, v)
            for s in sequences(b, len(u), exact=True):
                if u == v or (
                    any(s[: split + 1])
                    and (len(u) < d or (u, v) in relation)
                ):
                    nodes.add((u, v, s))
    return domain.FiniteNormalTree3(depth=d, branch=b, nodes=frozenset(nodes))


def project_quasi_order(t: domain.FiniteNormalTree3) -> FrozenSet[Tuple[str, str]]:
    """p[S] at depth d: the pairs reached by some full-length node."""
    return frozenset((u, v) for u, v, s in t.nodes if len(u) == t.depth)


def quasi_orders(d: int) -> Iterator[FrozenSet[Tuple[str, str]]]:
    """Every reflexive transitive relation on {0,1}^d."""
    points = bitstrings(d, exact=True)
    off = [(x, y) for x in points for y in points if x != y]
    diagonal = {(x, x) for x in points}
    for mask in range(2 ** len(off)):
        rel = diagonal | {p for k, p in enumerate(off) if mask >> k & 1}
        if all((x, z) in rel for x, y in rel for y2, z in rel if y == y2):
            yield frozenset(rel)


def diagonal_tree3(d: int, b: int) -> domain.FiniteNormalTree3:
    nodes = frozenset(
        (u, u, s) for u in bitstrings(d) for s in sequences(b, len(u), exact=True)
    )
    return domain.FiniteNormalTree3(depth=d, branch=b, nodes=nodes)


def full_tree3(d: int, b: int) -> domain.FiniteNormalTree3:
    nodes = frozenset(
        (u, v, s)
        for u in bitstrings(d)
        for v in bitstrings(len(u), exact=True)
        for s in sequences(b, len(u), exact=True)
    )
    return domain.FiniteNormalTree3(depth=d, branch=b, nodes=nodes)


def random_tree3(
    d: int, b: int, rng: random.Random, density: float = 0.35
) -> domain.FiniteNormalTree3:
    """A random prefix-closed triple tree, closed upwards in s."""
    nodes = {("", "", ())}
    level = [("", "", ())]
    for _ in range(d):
        candidates = [
            (u + a, v + c, s + (i,))
            for u, v, s in level
            for a in "01"
            for c in "01"
            for i in range(b)
        ]
        chosen = {node for node in candidates if rng.random() < density}
        frontier = list(chosen)
        while frontier:
            u, v, s = frontier.pop()
            for above in _covers(s, b):
                if (u, v, above) not in chosen:
                    chosen.add((u, v, above))
                    frontier.append((u, v, above))
        level = sorted(chosen)
        nodes.update(chosen)
    return domain.FiniteNormalTree3(depth=d, branch=b, nodes=frozenset(nodes))
