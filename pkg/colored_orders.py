"""
Colored sums of powers of omega.

A ColoredOrdinalSum (a_0, c_0), ..., (a_k, c_k) stands for
omega**a_0 + ... + omega**a_k with every point of block i colored c_i.
Because omega**a is additively indecomposable, A embeds into B under a
color relation R iff some monotone block assignment phi has
c_i R c'_phi(i), a_i <= b_phi(i), and a_i < b_j for every source block
that is not the last one sent to target block j.
"""

import logging
import math
import random
from itertools import combinations_with_replacement
from typing import Iterable, List, Optional, Sequence, Tuple

try:
    from finite_forge import domain, epi_gadget, normal_trees
    from finite_forge.repositories import PreconditionError, SchemaError
except ModuleNotFoundError:
    import domain
    import epi_gadget
    import normal_trees
    from repositories import PreconditionError, SchemaError

logger = logging.getLogger(__name__)

EQUALITY = domain.ColorRelation(kind="eq")
GEQ = domain.ColorRelation(kind="geq")


def make_sum(blocks: Iterable[Sequence[int]]) -> domain.ColoredOrdinalSum:
    normalised = []
    for k, block in enumerate(blocks):
        a, c = int(block[0]), int(block[1])
        if a < 0 or c < 0:
            raise SchemaError(f"block {block} must hold naturals", f"blocks.{k}")
        normalised.append((a, c))
    return domain.ColoredOrdinalSum(blocks=tuple(normalised))


def relation_from_table(pairs: Iterable[Sequence[int]]) -> domain.ColorRelation:
    return domain.ColorRelation(
        kind="table", pairs=frozenset((int(p[0]), int(p[1])) for p in pairs)
    )


def related(r: domain.ColorRelation, c: int, c_prime: int) -> bool:
    if r.kind == "eq":
        return c == c_prime
    if r.kind == "geq":
        return c >= c_prime
    if r.kind == "table":
        return (c, c_prime) in r.pairs
    raise PreconditionError(f"unknown color relation {r.kind!r}")


def is_valid_assignment(
    a: domain.ColoredOrdinalSum,
    b: domain.ColoredOrdinalSum,
    r: domain.ColorRelation,
    phi: Sequence[int],
) -> bool:
    if len(phi) != len(a.blocks):
        return False
    for i, j in enumerate(phi):
        if not 0 <= j < len(b.blocks):
            return False
        if i and phi[i - 1] > j:
            return False
        (ai, ci), (bj, cj) = a.blocks[i], b.blocks[j]
        if not related(r, ci, cj) or ai > bj:
            return False
        if i + 1 < len(phi) and phi[i + 1] == j and ai >= bj:
            return False
    return True


def embeds(
    a: domain.ColoredOrdinalSum, b: domain.ColoredOrdinalSum, r: domain.ColorRelation
) -> Optional[Tuple[int, ...]]:
    """Least block assignment by earliest placement, or None.

    The pointer stays on a target block while the source exponent is
    strictly smaller and moves past it on equality.
    """
    phi = []
    pointer = 0
    for ai, ci in a.blocks:
        j = pointer
        while j < len(b.blocks):
            bj, cj = b.blocks[j]
            if related(r, ci, cj) and ai <= bj:
                break
            j += 1
        else:
            return None
        phi.append(j)
        pointer = j if ai < b.blocks[j][0] else j + 1
    return tuple(phi)


def embeds_naive(
    a: domain.ColoredOrdinalSum, b: domain.ColoredOrdinalSum, r: domain.ColorRelation
) -> Optional[Tuple[int, ...]]:
    """First valid monotone assignment in lex order, no pruning."""
    for phi in combinations_with_replacement(range(len(b.blocks)), len(a.blocks)):
        if is_valid_assignment(a, b, r, phi):
            return phi
    return None


def compose_assignments(phi: Sequence[int], psi: Sequence[int]) -> Tuple[int, ...]:
    return tuple(psi[j] for j in phi)


def normal_form(a: domain.ColoredOrdinalSum) -> domain.ColoredOrdinalSum:
    """Drop every block absorbed by a larger block of the same color to its right."""
    stack: List[Tuple[int, int]] = []
    for block in a.blocks:
        stack.append(block)
        while len(stack) > 1 and stack[-2][1] == stack[-1][1] and stack[-2][0] < stack[-1][0]:
            del stack[-2]
    return domain.ColoredOrdinalSum(blocks=tuple(stack))


def iso_colored(a: domain.ColoredOrdinalSum, b: domain.ColoredOrdinalSum) -> bool:
    return normal_form(a) == normal_form(b)


def ordinal_type_embeds(x: int, y: int) -> bool:
    """omega**x embeds in omega**y."""
    return embeds(make_sum([(x, 0)]), make_sum([(y, 0)]), EQUALITY) is not None


def k_sequence(n: int) -> int:
    """First coordinate of the Cantor unpairing of n: 0, 1, 0, 2, 1, 0, 3, ..."""
    w = (math.isqrt(8 * n + 1) - 1) // 2
    return w - (n - w * (w + 1) // 2)


def lambda_t(t: Sequence[int]) -> Tuple[int, ...]:
    return tuple(k_sequence(x) for x in t)


def lg_profile(g: domain.Graph, d: int, b: int) -> Tuple[int, ...]:
    """tau_G(lambda_t) for every non-empty t, in lex order."""
    if g.n == 0:
        raise PreconditionError("L_G needs a non-empty graph")
    ts = sorted(t for t in normal_trees.sequences(b, d) if t)
    return tuple(epi_gadget.tau(g, lambda_t(t)) for t in ts)


def build_lg(g: domain.Graph, d: int, b: int) -> domain.ColoredOrdinalSum:
    """Blocks omega**(2 tau) colored tau, one per non-empty t in lex order."""
    return domain.ColoredOrdinalSum(
        blocks=tuple((2 * code, code) for code in lg_profile(g, d, b))
    )


def random_sum(
    rng: random.Random, max_blocks: int = 6, max_exponent: int = 4, colors: int = 3
) -> domain.ColoredOrdinalSum:
    return domain.ColoredOrdinalSum(
        blocks=tuple(
            (rng.randint(0, max_exponent), rng.randrange(colors))
            for _ in range(rng.randint(0, max_blocks))
        )
    )


def verify_identity_lemma(
    corpus: Sequence[domain.Graph], d: int, b: int
) -> List[domain.CheckResult]:
    """L_G ≅ L_H iff the block sequences are equal iff the profiles agree
    iff each embeds in the other; a round trip L_G -> L_H -> L_G is the
    identity assignment."""
    sums = [build_lg(g, d, b) for g in corpus]
    profiles = [lg_profile(g, d, b) for g in corpus]
    results = []
    for i in range(len(corpus)):
        for j in range(i, len(corpus)):
            iso = iso_colored(sums[i], sums[j])
            literal = sums[i] == sums[j]
            same_profile = profiles[i] == profiles[j]
            there = embeds(sums[i], sums[j], EQUALITY)
            back = embeds(sums[j], sums[i], EQUALITY)
            mutual = there is not None and back is not None
            passed = iso == literal == same_profile == mutual
            if mutual:
                round_trip = compose_assignments(there, back)
                passed = passed and round_trip == tuple(range(len(sums[i].blocks)))
                passed = passed and is_valid_assignment(sums[i], sums[i], EQUALITY, round_trip)
            results.append(
                domain.CheckResult(
                    lhs=i,
                    rhs=j,
                    passed=passed,
                    detail=f"iso={iso} literal={literal} profile={same_profile} mutual={mutual}",
                )
            )
    return results
