"""
Finite permutation groups acting on W = {0..degree-1}, and the
saturation-by-uniqueness construction over a ReductionSetup.

Permutations are tuples; a(y, w) = y[w] and (p ∘ q)[x] = p[q[x]].
"""

import logging
import random
from collections import deque
from itertools import combinations, permutations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

try:
    from finite_forge import domain
    from finite_forge.repositories import PreconditionError, SetupInvariantError
except ModuleNotFoundError:
    import domain
    from repositories import PreconditionError, SetupInvariantError

logger = logging.getLogger(__name__)

Perm = Tuple[int, ...]


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def act(y: Perm, w: int) -> int:
    return y[w]


def compose(p: Perm, q: Perm) -> Perm:
    """p ∘ q: apply q first."""
    return tuple(p[x] for x in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for x, px in enumerate(p):
        out[px] = x
    return tuple(out)


def make_action(degree: int, generators: Iterable[Sequence[int]]) -> domain.PermGroupAction:
    gens = []
    for k, gen in enumerate(generators):
        gen = tuple(int(x) for x in gen)
        if sorted(gen) != list(range(degree)):
            raise PreconditionError(f"generator {k} is not a permutation of {degree} points")
        gens.append(gen)
    return domain.PermGroupAction(degree=degree, generators=tuple(gens))


def group_elements(degree: int, generators: Sequence[Perm]) -> FrozenSet[Perm]:
    """Closure of the generators under composition, identity included."""
    start = identity(degree)
    seen = {start}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for gen in generators:
            q = compose(gen, p)
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return frozenset(seen)


def orbit(a: domain.PermGroupAction, w: int) -> List[int]:
    return sorted(_orbit_transversal(a, w))


def _orbit_transversal(a: domain.PermGroupAction, w: int) -> Dict[int, Perm]:
    """x -> some u_x in Y with u_x[w] = x, for x in the orbit of w."""
    if not 0 <= w < a.degree:
        raise PreconditionError(f"{w} is not a point of W")
    reps = {w: identity(a.degree)}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        for gen in a.generators:
            y = gen[x]
            if y not in reps:
                reps[y] = compose(gen, reps[x])
                queue.append(y)
    return reps


def stabilizer(a: domain.PermGroupAction, w: int) -> domain.Subgroup:
    """Stab_Y(w) from Schreier generators u_{s(x)}^-1 s u_x."""
    reps = _orbit_transversal(a, w)
    ident = identity(a.degree)
    gens: Set[Perm] = set()
    for x, ux in reps.items():
        for s in a.generators:
            schreier = compose(inverse(reps[s[x]]), compose(s, ux))
            if schreier != ident:
                gens.add(schreier)
    generators = tuple(sorted(gens))
    order = len(group_elements(a.degree, generators))
    group_order = len(group_elements(a.degree, a.generators))
    if group_order != len(reps) * order:
        raise SetupInvariantError(
            f"|Y| = {group_order} but the orbit of {w} has {len(reps)} points and "
            f"its stabilizer {order} elements",
            "orbit-stabilizer",
        )
    return domain.Subgroup(degree=a.degree, generators=generators, order=order)


def subgroup_elements(h: domain.Subgroup) -> FrozenSet[Perm]:
    return group_elements(h.degree, h.generators)


def coset_selector(a: domain.PermGroupAction, h: domain.Subgroup) -> domain.CosetSelector:
    """s(y) = lex-least element of yH; the transversal is {y : s(y) = y}."""
    ys = group_elements(a.degree, a.generators)
    if h.degree != a.degree or any(gen not in ys for gen in h.generators):
        raise PreconditionError("H is not a subgroup of Y")
    hs = subgroup_elements(h)
    choice: Dict[Perm, Perm] = {}
    for y in sorted(ys):
        if y in choice:
            continue
        coset = [compose(y, x) for x in hs]
        representative = min(coset)
        for member in coset:
            choice[member] = representative
    transversal = tuple(sorted(y for y, s in choice.items() if y == s))
    return domain.CosetSelector(choice=choice, transversal=transversal)


def conjugation_covariant(a: domain.PermGroupAction, y: Perm, w: int) -> bool:
    """Stab(y w) = y Stab(w) y^-1."""
    left = subgroup_elements(stabilizer(a, act(y, w)))
    right = {compose(compose(y, s), inverse(y)) for s in subgroup_elements(stabilizer(a, w))}
    return left == right


def _class_of(setup: domain.ReductionSetup) -> Dict[int, int]:
    return {z: k for k, cls in enumerate(setup.classes) for z in cls}


def check_setup(setup: domain.ReductionSetup, a: domain.PermGroupAction):
    """Raise SetupInvariantError naming the first hypothesis that fails."""
    if len(set(setup.f)) != len(setup.f) or len(setup.f) != setup.instances:
        raise SetupInvariantError("f is not injective on B", "f-injective")
    covered = [z for cls in setup.classes for z in cls]
    if sorted(covered) != list(range(setup.codes)) or any(not cls for cls in setup.classes):
        raise SetupInvariantError("the E-classes do not partition Z", "partition")
    cls = _class_of(setup)
    images = [cls[z] for z in setup.f]
    if len(set(images)) != len(images):
        raise SetupInvariantError("two instances have E-equivalent codes", "f-images-inequivalent")
    orbit_of = {}
    for w in range(a.degree):
        if w not in orbit_of:
            for x in orbit(a, w):
                orbit_of[x] = w
    for z, z2 in combinations(range(setup.codes), 2):
        if (cls[z] == cls[z2]) != (orbit_of[setup.g[z]] == orbit_of[setup.g[z2]]):
            raise SetupInvariantError(
                f"codes {z} and {z2} break the reduction of E to orbit equivalence",
                "g-reduces-E",
            )


def direct_saturation(setup: domain.ReductionSetup) -> FrozenSet[int]:
    """Union of the E-classes meeting f(B)."""
    images = set(setup.f)
    return frozenset(z for cls in setup.classes if cls & images for z in cls)


def saturation_by_uniqueness(
    setup: domain.ReductionSetup, a: domain.PermGroupAction, check: bool = True
) -> FrozenSet[int]:
    """P = {z : exactly one (G, y) in T with a(y, g(f(G))) = g(z)}.

    T pairs each instance G with the transversal of Σ(G), the stabilizer
    of g(f(G)). With check=False a broken setup goes through, which is how
    the corrupted-setup test sees P drift from the direct saturation.
    """
    if check:
        check_setup(setup, a)
    hits: Dict[int, int] = {}
    for instance in range(setup.instances):
        w = setup.g[setup.f[instance]]
        sigma = stabilizer(a, w)
        for y in coset_selector(a, sigma).transversal:
            target = act(y, w)
            hits[target] = hits.get(target, 0) + 1
    result = frozenset(z for z in range(setup.codes) if hits.get(setup.g[z], 0) == 1)
    logger.debug(f"uniqueness set has {len(result)} of {setup.codes} codes")
    return result


def with_stabilizers(
    setup: domain.ReductionSetup, a: domain.PermGroupAction
) -> domain.PermGroupAction:
    """The action with Σ(G) attached for every instance G."""
    return domain.PermGroupAction(
        degree=a.degree,
        generators=a.generators,
        parameters={
            instance: stabilizer(a, setup.g[setup.f[instance]]).generators
            for instance in range(setup.instances)
        },
    )


# W for random setups: ordered pairs of distinct elements of {0..3}
PAIRS = tuple(p for p in permutations(range(4), 2))
_PAIR_INDEX = {p: k for k, p in enumerate(PAIRS)}


def induced_on_pairs(sigma: Sequence[int]) -> Perm:
    return tuple(_PAIR_INDEX[(sigma[i], sigma[j])] for i, j in PAIRS)


def random_setup(
    rng: random.Random, max_instances: int = 4, max_codes: int = 16
) -> Tuple[domain.ReductionSetup, domain.PermGroupAction]:
    """A subgroup of S4 acting on the 12 ordered pairs, E pulled back along g."""
    s4 = list(permutations(range(4)))
    gens = [induced_on_pairs(rng.choice(s4)) for _ in range(rng.randint(0, 2))]
    a = domain.PermGroupAction(degree=len(PAIRS), generators=tuple(gens))
    codes = rng.randint(1, max_codes)
    g = tuple(rng.randrange(len(PAIRS)) for _ in range(codes))
    orbit_of = {}
    for w in range(a.degree):
        if w not in orbit_of:
            for x in orbit(a, w):
                orbit_of[x] = w
    grouped: Dict[int, Set[int]] = {}
    for z, w in enumerate(g):
        grouped.setdefault(orbit_of[w], set()).add(z)
    classes = tuple(frozenset(c) for _, c in sorted(grouped.items()))
    chosen = rng.sample(range(len(classes)), rng.randint(1, min(max_instances, len(classes))))
    f = tuple(rng.choice(sorted(classes[k])) for k in chosen)
    setup = domain.ReductionSetup(
        instances=len(f), codes=codes, points=len(PAIRS), f=f, g=g, classes=classes
    )
    return setup, a


def corrupt_setup(setup: domain.ReductionSetup) -> Optional[domain.ReductionSetup]:
    """Add an instance whose code is E-equivalent to, but distinct from, some
    f(G), taking the first instance whose class has a spare code.

    None when every class meeting f(B) is a single code.
    """
    spare = []
    for code in setup.f:
        cls = next(c for c in setup.classes if code in c)
        spare = sorted(z for z in cls if z not in setup.f)
        if spare:
            break
    if not spare:
        return None
    return domain.ReductionSetup(
        instances=setup.instances + 1,
        codes=setup.codes,
        points=setup.points,
        f=setup.f + (spare[0],),
        g=setup.g,
        classes=setup.classes,
        label="corrupted",
    )


def corruptible_setup(
    rng: random.Random, attempts: int = 1000
) -> Tuple[domain.ReductionSetup, domain.PermGroupAction]:
    """A random setup whose f(B) meets a class with a spare code."""
    for _ in range(attempts):
        setup, a = random_setup(rng)
        if corrupt_setup(setup) is not None:
            return setup, a
    raise PreconditionError(f"no corruptible setup in {attempts} draws")
