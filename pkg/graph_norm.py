"""
The graph norm ||v||_G = max over i != j of |v_i| + |v_j| / (3 - chi_G(i, j)),
chi_G(i, j) = 1 on edges and 0 otherwise.

Everything is exact: vectors are tuples of Fraction, polytopes are handed
to the Parma Polyhedra Library with integer-scaled constraints and read
back as rational vertices.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import ppl

try:
    from finite_forge import domain, graph_core, settings
    from finite_forge.repositories import BudgetExceededError, PreconditionError
except ModuleNotFoundError:
    import domain
    import graph_core
    import settings
    from repositories import BudgetExceededError, PreconditionError

logger = logging.getLogger(__name__)

Vector = Tuple[Fraction, ...]

COEFFICIENTS = (
    Fraction(0),
    Fraction(1),
    Fraction(-1),
    Fraction(1, 2),
    Fraction(-1, 2),
)


def make_norm(g: domain.Graph) -> domain.GraphNorm:
    if g.n < 2:
        raise PreconditionError(f"a graph norm needs n >= 2, got {g.n}")
    return domain.GraphNorm(graph=g)


def chi(n: domain.GraphNorm, i: int, j: int) -> int:
    return 1 if graph_core.has_edge(n.graph, i, j) else 0


def unit_vector(dimension: int, p: int, sign: int = 1) -> Vector:
    return tuple(Fraction(sign) if k == p else Fraction(0) for k in range(dimension))


def norm(n: domain.GraphNorm, v: Sequence) -> Fraction:
    dimension = n.graph.n
    if dimension < 2:
        raise PreconditionError("the graph norm needs at least two coordinates")
    if len(v) != dimension:
        raise PreconditionError(f"vector of length {len(v)} in dimension {dimension}")
    values = [abs(Fraction(x)) for x in v]
    support = [k for k, x in enumerate(values) if x]
    best = Fraction(0)
    for i in support:
        partner = max(
            (values[j] / (3 - chi(n, i, j)) for j in support if j != i),
            default=Fraction(0),
        )
        best = max(best, values[i] + partner)
    return best


def sup_norm(v: Sequence) -> Fraction:
    return max((abs(Fraction(x)) for x in v), default=Fraction(0))


def sandwich_check(n: domain.GraphNorm, v: Sequence) -> bool:
    """||v||_inf <= ||v||_G <= 3/2 ||v||_inf."""
    top = sup_norm(v)
    value = norm(n, v)
    return top <= value <= Fraction(3, 2) * top


def _norm_constraints(
    n: domain.GraphNorm, variables: Sequence, bound_num: int, bound_den: int, centre=None
) -> List:
    """Integer constraints for ||x - centre|| <= bound_num / bound_den."""
    dimension = n.graph.n
    out = []
    for i, j in permutations(range(dimension), 2):
        weight = 3 - chi(n, i, j)
        for si, sj in product((1, -1), repeat=2):
            # bound_den * (weight*si*(x_i - c_i) + sj*(x_j - c_j)) <= weight*bound_num
            ci = centre[i] if centre else 0
            cj = centre[j] if centre else 0
            expr = bound_den * weight * si * variables[i] + bound_den * sj * variables[j]
            constant = bound_den * (weight * si * ci + sj * cj)
            out.append(expr <= weight * bound_num + constant)
    return out


def _vertices(polyhedron) -> List[Vector]:
    points = []
    for gen in polyhedron.minimized_generators():
        if gen.is_point():
            divisor = int(gen.divisor())
            points.append(tuple(Fraction(int(c), divisor) for c in gen.coefficients()))
    return sorted(points)


def unit_ball_vertices(n: domain.GraphNorm) -> List[Vector]:
    """Vertices of {x : ||x||_G <= 1}; includes points other than ±e_p."""
    variables = [ppl.Variable(k) for k in range(n.graph.n)]
    cs = ppl.Constraint_System()
    for c in _norm_constraints(n, variables, 1, 1):
        cs.insert(c)
    return _vertices(ppl.C_Polyhedron(cs))


def strongly_extreme_certificate(
    n: domain.GraphNorm, p: int, epsilon: Fraction
) -> domain.ExtremeCertificate:
    """Check that e_p is strongly extreme with delta = epsilon / 18.

    The pairs (y, z) of unit vectors with ||e_p - (y+z)/2|| <= delta form
    a polytope in dimension 2n; ||y - z|| is convex, so its maximum over
    that polytope is reached at a vertex.
    """
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise PreconditionError("epsilon must be positive")
    dimension = n.graph.n
    delta = epsilon / 18
    y = [ppl.Variable(k) for k in range(dimension)]
    z = [ppl.Variable(dimension + k) for k in range(dimension)]
    cs = ppl.Constraint_System()
    for c in _norm_constraints(n, y, 1, 1):
        cs.insert(c)
    for c in _norm_constraints(n, z, 1, 1):
        cs.insert(c)
    # ||2 e_p - (y + z)|| <= 2 delta
    sums = [y[k] + z[k] for k in range(dimension)]
    centre = [2 if k == p else 0 for k in range(dimension)]
    for c in _norm_constraints(n, sums, 2 * delta.numerator, delta.denominator, centre):
        cs.insert(c)
    vertices = _vertices(ppl.C_Polyhedron(cs))
    separation = max(
        (
            norm(n, [v[k] - v[dimension + k] for k in range(dimension)])
            for v in vertices
        ),
        default=Fraction(0),
    )
    logger.debug(
        f"extreme certificate p={p} eps={epsilon}: {len(vertices)} vertices, max {separation}"
    )
    return domain.ExtremeCertificate(
        dimension=dimension,
        p=p,
        epsilon=epsilon,
        delta=delta,
        vertex_count=len(vertices),
        max_separation=separation,
        valid=separation <= epsilon,
    )


@lru_cache(maxsize=None)
def _pair_vector_norm(n: domain.GraphNorm, p: int, q: int, sp: int, sq: int) -> Fraction:
    return norm(n, _pair_vector(n.graph.n, p, q, sp, sq))


def _pair_vector(dimension: int, p: int, q: int, sp: int, sq: int) -> Vector:
    return tuple(
        Fraction(sp) if k == p else Fraction(sq) if k == q else Fraction(0)
        for k in range(dimension)
    )


def signed_isometric_embedding(
    ng: domain.GraphNorm,
    nh: domain.GraphNorm,
    limits: Optional[domain.SearchLimits] = None,
) -> Optional[domain.SignedEmbedding]:
    """Injective h and signs eps with e_p -> eps_p e_h(p) preserving the norm
    on every e_p and every ±e_p ± e_q; None if there is none.

    Candidates are tried in ascending h(p), + before -.
    """
    limits = limits or graph_core.default_limits()
    dg, dh = ng.graph.n, nh.graph.n
    if dg > dh:
        return None
    counter = graph_core.NodeCounter(limits, "signed_isometric_embedding")
    images: List[int] = []
    signs: List[int] = []

    def preserved(p: int, hp: int, ep: int) -> bool:
        if norm(nh, unit_vector(dh, hp, ep)) != norm(ng, unit_vector(dg, p)):
            return False
        for q in range(p):
            for sp, sq in product((1, -1), repeat=2):
                if _pair_vector_norm(ng, p, q, sp, sq) != _pair_vector_norm(
                    nh, hp, images[q], sp * ep, sq * signs[q]
                ):
                    return False
        return True

    def extend(p: int) -> bool:
        if p == dg:
            return True
        for hp in range(dh):
            if hp in images:
                continue
            for ep in (1, -1):
                counter.tick()
                if not preserved(p, hp, ep):
                    continue
                images.append(hp)
                signs.append(ep)
                if extend(p + 1):
                    return True
                images.pop()
                signs.pop()
        return False

    if extend(0):
        return domain.SignedEmbedding(images=tuple(images), signs=tuple(signs))
    return None


def point_vector(dimension: int, k: int) -> Vector:
    """f_k: f_{2p} = e_p, f_{2p+1} = -e_p."""
    return unit_vector(dimension, k // 2, -1 if k % 2 else 1)


def _combination_keys(dimension: int, max_length: int) -> Iterator[Tuple[Tuple[Fraction, ...], Tuple[int, ...]]]:
    points = range(2 * dimension)
    for length in range(1, max_length + 1):
        for ks in permutations(points, length):
            for alpha in product(COEFFICIENTS, repeat=length):
                yield alpha, ks


def combination_count(dimension: int, max_length: int = 3) -> int:
    total = 0
    for length in range(1, max_length + 1):
        arrangements = 1
        for k in range(length):
            arrangements *= 2 * dimension - k
        total += arrangements * len(COEFFICIENTS) ** length
    return total


def build_norm_structure(
    n: domain.GraphNorm, max_combinations: Optional[int] = None, max_length: int = 3
) -> domain.NormStructure:
    """Finite part of S(X_G) over points ±e_p.

    Combinations are coefficient tuples of length <= 3 over {0, ±1, ±1/2} on
    tuples of distinct points; thresholds are the realised values, the
    midpoints between consecutive values, and one value above the top.
    """
    max_combinations = max_combinations or settings.FORGE_MAX_CORPUS
    dimension = n.graph.n
    required = combination_count(dimension, max_length)
    if required > max_combinations:
        raise BudgetExceededError(
            f"S(X) needs {required} combinations, the cap is {max_combinations}",
            limit=max_combinations,
            required=required,
        )
    values: Dict[Tuple[Tuple[Fraction, ...], Tuple[int, ...]], Fraction] = {}
    for alpha, ks in _combination_keys(dimension, max_length):
        vector = [Fraction(0)] * dimension
        for a, k in zip(alpha, ks):
            for p, x in enumerate(point_vector(dimension, k)):
                vector[p] += a * x
        values[(alpha, ks)] = norm(n, vector)
    realised = sorted(set(values.values()))
    thresholds = set(realised)
    thresholds.update((x + y) / 2 for x, y in zip(realised, realised[1:]))
    thresholds.add(realised[-1] + 1)
    opposite = frozenset(
        pair for p in range(dimension) for pair in ((2 * p, 2 * p + 1), (2 * p + 1, 2 * p))
    )
    return domain.NormStructure(
        dimension=dimension,
        coefficients=COEFFICIENTS,
        thresholds=tuple(sorted(thresholds)),
        values=values,
        opposite=opposite,
    )


def norm_structure_value(
    s: domain.NormStructure, alpha: Sequence, ks: Sequence[int]
) -> Fraction:
    return s.values[(tuple(Fraction(a) for a in alpha), tuple(ks))]


def holds(s: domain.NormStructure, alpha: Sequence, q: Fraction, ks: Sequence[int]) -> bool:
    """R^alpha_q(ks): the listed combination has norm below q."""
    return norm_structure_value(s, alpha, ks) < q


def can_extend_norm_auto(s: domain.NormStructure, seq: Sequence[int]) -> bool:
    """Every s_i is i itself or the opposite point of i."""
    if len(set(seq)) != len(seq):
        raise PreconditionError("the sequence is not injective")
    for i, si in enumerate(seq):
        if not 0 <= si < 2 * s.dimension:
            raise PreconditionError(f"{si} does not index a point")
        if si != i and (i, si) not in s.opposite:
            return False
    return True


def structure_automorphisms(s: domain.NormStructure) -> List[Tuple[int, ...]]:
    """Every permutation of the points that preserves all listed values.

    Combinations on one and two points prune the search; each complete
    permutation is then checked against every combination.
    """
    points = 2 * s.dimension
    length = max(len(ks) for _, ks in s.values)
    by_points: Dict[Tuple[int, ...], List[Tuple[Tuple[Fraction, ...], Fraction]]] = {}
    for (alpha, ks), value in s.values.items():
        if len(ks) <= 2:
            by_points.setdefault(ks, []).append((alpha, value))
    found = []
    images: List[int] = []

    def agrees(ks: Tuple[int, ...]) -> bool:
        target = tuple(images[k] for k in ks)
        return all(s.values[(alpha, target)] == value for alpha, value in by_points[ks])

    def extend(k: int):
        if k == points:
            if length < 3 or all(
                s.values[(alpha, tuple(images[x] for x in ks))] == value
                for (alpha, ks), value in s.values.items()
                if len(ks) == 3
            ):
                found.append(tuple(images))
            return
        for w in range(points):
            if w in images:
                continue
            images.append(w)
            if agrees((k,)) and all(agrees((j, k)) and agrees((k, j)) for j in range(k)):
                extend(k + 1)
            images.pop()

    extend(0)
    return found


def brute_force_norm_extension(
    s: domain.NormStructure,
    seq: Sequence[int],
    automorphisms: Optional[List[Tuple[int, ...]]] = None,
) -> bool:
    group = automorphisms if automorphisms is not None else structure_automorphisms(s)
    return any(all(pi[i] == si for i, si in enumerate(seq)) for pi in group)


def pair_norms(n: domain.GraphNorm) -> List[Tuple[int, int, int, int, Fraction]]:
    """||eps_p e_p + eps_q e_q|| for every pair p < q and every sign choice."""
    dimension = n.graph.n
    out = []
    for p, q in combinations(range(dimension), 2):
        for sp, sq in product((1, -1), repeat=2):
            out.append((p, q, sp, sq, norm(n, _pair_vector(dimension, p, q, sp, sq))))
    return out


def expected_pair_norm(n: domain.GraphNorm, p: int, q: int) -> Fraction:
    return 1 + Fraction(1, 3 - chi(n, p, q))


def is_signed_isometric(
    ng: domain.GraphNorm, nh: domain.GraphNorm, e: domain.SignedEmbedding
) -> bool:
    """Re-check a signed embedding on every e_p and every ±e_p ± e_q."""
    dg, dh = ng.graph.n, nh.graph.n
    if len(e.images) != dg or len(e.signs) != dg:
        return False
    if len(set(e.images)) != dg or any(not 0 <= w < dh for w in e.images):
        return False
    if any(sign not in (1, -1) for sign in e.signs):
        return False
    for p in range(dg):
        if norm(nh, unit_vector(dh, e.images[p], e.signs[p])) != norm(ng, unit_vector(dg, p)):
            return False
    for p, q in combinations(range(dg), 2):
        for sp, sq in product((1, -1), repeat=2):
            source = _pair_vector(dg, p, q, sp, sq)
            target = _pair_vector(dh, e.images[p], e.images[q], sp * e.signs[p], sq * e.signs[q])
            if norm(ng, source) != norm(nh, target):
                return False
    return True
