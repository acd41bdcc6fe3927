"""
The logical entities of the forge.

Everything here is plain immutable data. The behaviour lives in the
kernel modules (graph_core, normal_trees, ...), which take and return
these objects, so instances can be shared freely between workers.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Optional, Tuple


@dataclass(frozen=True)
class Graph:
    """A finite simple graph on vertices 0..n-1.

    Attributes:
        n: vertex count
        edges: unordered pairs stored as (i, j) with i < j
    """

    n: int
    edges: FrozenSet[Tuple[int, int]]


@dataclass(frozen=True)
class VertexMap:
    """A map between the vertex sets of two graphs.

    Attributes:
        images: image of each domain vertex, indexed by domain vertex
        injective: True when the map was produced as an embedding
        domain_id: optional hash of the domain instance
        codomain_id: optional hash of the codomain instance
    """

    images: Tuple[int, ...]
    injective: bool = True
    domain_id: str = ""
    codomain_id: str = ""


@dataclass(frozen=True)
class SearchLimits:
    """Caps applied to every exhaustive search."""

    max_nodes: int
    max_vertices: int


@dataclass(frozen=True)
class AutomorphismGroup:
    """Generating set and exact order of a (sub)group of Sym(n)."""

    degree: int
    generators: Tuple[Tuple[int, ...], ...]
    order: int


@dataclass(frozen=True)
class FiniteNormalTree:
    """Depth- and branch-bounded normal tree on 2 x omega.

    Attributes:
        depth: maximal length d of a node
        branch: bound b, every numeric entry is < b
        nodes: pairs (u, s), u a bit string, s a tuple, |u| = |s|
    """

    depth: int
    branch: int
    nodes: FrozenSet[Tuple[str, Tuple[int, ...]]]


@dataclass(frozen=True)
class FiniteNormalTree3:
    """Depth- and branch-bounded normal tree on 2 x 2 x omega."""

    depth: int
    branch: int
    nodes: FrozenSet[Tuple[str, str, Tuple[int, ...]]]


@dataclass(frozen=True)
class NormalFormReport:
    reflexive: bool
    locally_transitive: bool
    antisymmetric_at_zero: bool
    counterexamples: Tuple[str, ...] = ()


@dataclass(frozen=True)
class CheckResult:
    """One checked case of a verification run.

    Attributes:
        lhs: corpus index of the left instance
        rhs: corpus index of the right instance, -1 for single-instance checks
        passed: whether the checked property held
        detail: readable description of the case
        diagnostic: a failure that is recorded but not counted as a violation
    """

    lhs: int
    rhs: int
    passed: bool
    detail: str = ""
    diagnostic: bool = False


@dataclass(frozen=True)
class LipschitzMap:
    """A length- and prefix-preserving map on finite sequences.

    Attributes:
        pairs: (s, f(s)) for every s in the domain, length-lex sorted
        bound: every entry of an image is < bound
    """

    pairs: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]
    bound: int


@dataclass(frozen=True)
class InjectiveWitness:
    """An injective, rank-monotone Lipschitz witness.

    Attributes:
        witness: the map itself, defined on every sequence of the source bound
        bound: the (possibly enlarged) codomain bound b'
        closure: the target tree re-closed upwards inside bound b'
    """

    witness: LipschitzMap
    bound: int
    closure: FiniteNormalTree


@dataclass(frozen=True)
class VertexKind:
    """Kind tag of a gadget vertex.

    kind is one of Seq, Star, Plus, PlusPlus, Tine, Code. Only the fields
    the kind uses are meaningful: Tine uses (s, i, j), Code uses (u, s, x).
    """

    kind: str
    s: Tuple[int, ...]
    u: str = ""
    i: int = 0
    j: int = 0
    x: str = ""


@dataclass(frozen=True)
class GadgetGraph:
    graph: Graph
    kinds: Tuple[VertexKind, ...]
    source: FiniteNormalTree


@dataclass(frozen=True)
class QfType:
    """Quantifier-free type of a tuple in a graph.

    Attributes:
        arity: tuple length
        pattern: restricted growth string of the equality pattern
        adjacent: pairs (a, b), a < b, of equality classes that are adjacent
    """

    arity: int
    pattern: Tuple[int, ...]
    adjacent: FrozenSet[Tuple[int, int]]


@dataclass(frozen=True)
class EpiVertex:
    """Role tag of an epi-gadget vertex: a, b, c or d of block t."""

    role: str
    t: Tuple[int, ...]
    index: int = 0


@dataclass(frozen=True)
class EpiGadget:
    """Truncated G* of a graph.

    Attributes:
        graph: the gadget itself
        depth: truncation depth d
        branch: truncation bound b
        vertices: role tag per gadget vertex
        block_types: (t, tau(t)) for every block, length-lex order
        source: the provenance graph G
        reservoir: d-vertices per block
    """

    graph: Graph
    depth: int
    branch: int
    vertices: Tuple[EpiVertex, ...]
    block_types: Tuple[Tuple[Tuple[int, ...], int], ...]
    source: Graph
    reservoir: int


@dataclass(frozen=True)
class ColoredOrdinalSum:
    """Sum of blocks omega**a, each point of a block colored c.

    Attributes:
        blocks: (exponent a, color c) in order
    """

    blocks: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class ColorRelation:
    """A relation on colors: "eq", "geq" or an explicit "table"."""

    kind: str
    pairs: FrozenSet[Tuple[int, int]] = frozenset()


@dataclass(frozen=True)
class FiniteMetric:
    n: int
    dist: Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class Fork:
    """A set of branches with prescribed pairwise distance.

    kind is "tine" (F_s) or "code" (F_{s,u}).
    """

    kind: str
    s: Tuple[int, ...]
    u: str
    points: FrozenSet[int]
    distance: Fraction


@dataclass(frozen=True)
class BranchSpace:
    """Ultrametric space of the maximal root paths of a gadget.

    Attributes:
        metric: the distances
        leaves: gadget vertex ending each branch, one per point
        leaf_kinds: kind tag of each leaf
        forks: the fork index
        slots: (slot, point) pairs of the fixed point enumeration
    """

    metric: FiniteMetric
    leaves: Tuple[int, ...]
    leaf_kinds: Tuple[VertexKind, ...]
    forks: Tuple[Fork, ...]
    slots: Tuple[Tuple[int, int], ...]


@dataclass(frozen=True)
class BallStructure:
    """Ball-containment structure over a finite radius grid.

    Attributes:
        names: (slot, radius) per element of the universe
        balls: the open ball each name denotes, aligned with names
        diameters: diameter of each ball, aligned with names
        radii: the radius grid
        slots: (slot, point) pairs the names are drawn from
        forks: point sets of the forks, empty for plain metrics
    """

    names: Tuple[Tuple[int, Fraction], ...]
    balls: Tuple[FrozenSet[int], ...]
    diameters: Tuple[Fraction, ...]
    radii: Tuple[Fraction, ...]
    slots: Tuple[Tuple[int, int], ...]
    forks: Tuple[FrozenSet[int], ...] = ()


@dataclass(frozen=True)
class GraphNorm:
    graph: Graph


@dataclass(frozen=True)
class NormStructure:
    """Finite part of S(X) for a graph norm.

    Points are f_{2p} = e_p and f_{2p+1} = -e_p. values holds the norm of
    every listed combination, keyed by (coefficients, point indices);
    R^alpha_q(k) holds iff values[(alpha, k)] < q.
    """

    dimension: int
    coefficients: Tuple[Fraction, ...]
    thresholds: Tuple[Fraction, ...]
    values: Dict[Tuple[Tuple[Fraction, ...], Tuple[int, ...]], Fraction]
    opposite: FrozenSet[Tuple[int, int]]


@dataclass(frozen=True)
class ExtremeCertificate:
    dimension: int
    p: int
    epsilon: Fraction
    delta: Fraction
    vertex_count: int
    max_separation: Fraction
    valid: bool


@dataclass(frozen=True)
class SignedEmbedding:
    images: Tuple[int, ...]
    signs: Tuple[int, ...]


@dataclass(frozen=True)
class PermGroupAction:
    """A permutation group acting on W = {0..degree-1}.

    Attributes:
        degree: |W|
        generators: generating permutations of W
        parameters: optional family x -> generators of a subgroup
    """

    degree: int
    generators: Tuple[Tuple[int, ...], ...]
    parameters: Dict[int, Tuple[Tuple[int, ...], ...]] = field(
        default_factory=dict
    )


@dataclass(frozen=True)
class Subgroup:
    degree: int
    generators: Tuple[Tuple[int, ...], ...]
    order: int


@dataclass(frozen=True)
class CosetSelector:
    """Selector for left cosets yH: choice[y] is the representative."""

    choice: Dict[Tuple[int, ...], Tuple[int, ...]]
    transversal: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class ReductionSetup:
    """Finite analogue of the saturation theorem's hypotheses.

    Attributes:
        instances: |B|
        codes: |Z|
        points: |W|
        f: code of each instance, B -> Z
        g: point of each code, Z -> W
        classes: the partition of Z into E-classes
    """

    instances: int
    codes: int
    points: int
    f: Tuple[int, ...]
    g: Tuple[int, ...]
    classes: Tuple[FrozenSet[int], ...]
    label: Optional[str] = None
