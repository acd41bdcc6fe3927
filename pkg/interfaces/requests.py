"""
Request interface definitions for forge.

This module holds the request models the use cases accept, and the JSON
schemas of the instances they work on. Every instance schema converts to
its domain object with ``to_domain()`` and back with ``from_domain()``.
"""

import hashlib
import json
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator

try:
    from finite_forge import (
        colored_orders,
        domain,
        finite_actions,
        graph_core,
        metric_gadget,
        normal_trees,
    )
except ModuleNotFoundError:
    import colored_orders
    import domain
    import finite_actions
    import graph_core
    import metric_gadget
    import normal_trees


def fraction_text(x: Fraction) -> str:
    return str(Fraction(x))


def canonical_json(payload: Dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def instance_hash(payload: Dict) -> str:
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


class GraphSchema(BaseModel):
    kind: str = "graph"
    n: int = Field(ge=0)
    edges: List[Tuple[int, int]] = []

    def to_domain(self) -> domain.Graph:
        return graph_core.make_graph(self.n, self.edges)

    @classmethod
    def from_domain(cls, g: domain.Graph) -> "GraphSchema":
        return cls(n=g.n, edges=graph_core.sorted_edges(g))


class TreeSchema(BaseModel):
    kind: str = "tree"
    depth: int = Field(ge=0)
    branch: int = Field(ge=1)
    nodes: List[Tuple[str, List[int]]]

    def to_domain(self) -> domain.FiniteNormalTree:
        return normal_trees.validate_tree(
            domain.FiniteNormalTree(
                depth=self.depth,
                branch=self.branch,
                nodes=frozenset((u, tuple(s)) for u, s in self.nodes),
            )
        )

    @classmethod
    def from_domain(cls, t: domain.FiniteNormalTree) -> "TreeSchema":
        nodes = sorted(t.nodes, key=lambda node: (len(node[0]), node[0], node[1]))
        return cls(depth=t.depth, branch=t.branch, nodes=[(u, list(s)) for u, s in nodes])


class Tree3Schema(BaseModel):
    kind: str = "tree3"
    depth: int = Field(ge=0)
    branch: int = Field(ge=1)
    nodes: List[Tuple[str, str, List[int]]]

    def to_domain(self) -> domain.FiniteNormalTree3:
        return normal_trees.validate_tree3(
            domain.FiniteNormalTree3(
                depth=self.depth,
                branch=self.branch,
                nodes=frozenset((u, v, tuple(s)) for u, v, s in self.nodes),
            )
        )

    @classmethod
    def from_domain(cls, t: domain.FiniteNormalTree3) -> "Tree3Schema":
        nodes = sorted(t.nodes, key=lambda node: (len(node[0]), node))
        return cls(
            depth=t.depth, branch=t.branch, nodes=[(u, v, list(s)) for u, v, s in nodes]
        )


class ColoredSumSchema(BaseModel):
    kind: str = "colored-sum"
    blocks: List[Tuple[int, int]]

    def to_domain(self) -> domain.ColoredOrdinalSum:
        return colored_orders.make_sum(self.blocks)

    @classmethod
    def from_domain(cls, a: domain.ColoredOrdinalSum) -> "ColoredSumSchema":
        return cls(blocks=list(a.blocks))


class MetricSchema(BaseModel):
    """Distances as exact rationals, written "p/q" or as integers."""

    kind: str = "metric"
    dist: List[List[str]]

    @field_validator("dist", mode="before")
    @classmethod
    def stringify(cls, rows: Any) -> Any:
        if isinstance(rows, list):
            return [[str(x) for x in row] if isinstance(row, list) else row for row in rows]
        return rows

    @field_validator("dist")
    @classmethod
    def rational(cls, rows: List[List[str]]) -> List[List[str]]:
        for row in rows:
            for x in row:
                try:
                    Fraction(x)
                except (ValueError, ZeroDivisionError):
                    raise ValueError(f"{x!r} is not a rational number")
        return rows

    def to_domain(self) -> domain.FiniteMetric:
        return metric_gadget.make_metric([[Fraction(x) for x in row] for row in self.dist])

    @classmethod
    def from_domain(cls, m: domain.FiniteMetric) -> "MetricSchema":
        return cls(dist=[[fraction_text(x) for x in row] for row in m.dist])


class GroupSchema(BaseModel):
    kind: str = "group"
    degree: int = Field(ge=0)
    gens: List[List[int]] = []

    def to_domain(self) -> domain.PermGroupAction:
        return finite_actions.make_action(self.degree, self.gens)

    @classmethod
    def from_domain(cls, a: domain.PermGroupAction) -> "GroupSchema":
        return cls(degree=a.degree, gens=[list(g) for g in a.generators])


class SetupSchema(BaseModel):
    """A ReductionSetup bundled with the group acting on W."""

    kind: str = "setup"
    instances: int = Field(ge=0)
    codes: int = Field(ge=0)
    points: int = Field(ge=0)
    f: List[int]
    g: List[int]
    classes: List[List[int]]
    group: GroupSchema

    def to_domain(self) -> Tuple[domain.ReductionSetup, domain.PermGroupAction]:
        setup = domain.ReductionSetup(
            instances=self.instances,
            codes=self.codes,
            points=self.points,
            f=tuple(self.f),
            g=tuple(self.g),
            classes=tuple(frozenset(c) for c in self.classes),
        )
        return setup, self.group.to_domain()

    @classmethod
    def from_domain(
        cls, setup: domain.ReductionSetup, a: domain.PermGroupAction
    ) -> "SetupSchema":
        return cls(
            instances=setup.instances,
            codes=setup.codes,
            points=setup.points,
            f=list(setup.f),
            g=list(setup.g),
            classes=[sorted(c) for c in setup.classes],
            group=GroupSchema.from_domain(a),
        )


INSTANCE_SCHEMAS = {
    "graph": GraphSchema,
    "tree": TreeSchema,
    "tree3": Tree3Schema,
    "colored-sum": ColoredSumSchema,
    "metric": MetricSchema,
    "group": GroupSchema,
    "setup": SetupSchema,
}

InstanceSchema = Union[
    GraphSchema,
    TreeSchema,
    Tree3Schema,
    ColoredSumSchema,
    MetricSchema,
    GroupSchema,
    SetupSchema,
]


def parse_instance(payload: Dict, expected: Optional[str] = None) -> InstanceSchema:
    """Validate a raw JSON instance against the schema its "kind" names."""
    kind = payload.get("kind", expected) if isinstance(payload, dict) else None
    if expected is not None and kind != expected:
        raise ValueError(f"expected a {expected} instance, got {kind!r}")
    if kind not in INSTANCE_SCHEMAS:
        raise ValueError(f"unknown instance kind {kind!r}")
    return INSTANCE_SCHEMAS[kind].model_validate(payload)


def dump_instance(obj) -> Dict:
    """JSON payload of a domain instance."""
    if isinstance(obj, domain.Graph):
        return GraphSchema.from_domain(obj).model_dump(mode="json")
    if isinstance(obj, domain.FiniteNormalTree):
        return TreeSchema.from_domain(obj).model_dump(mode="json")
    if isinstance(obj, domain.FiniteNormalTree3):
        return Tree3Schema.from_domain(obj).model_dump(mode="json")
    if isinstance(obj, domain.ColoredOrdinalSum):
        return ColoredSumSchema.from_domain(obj).model_dump(mode="json")
    if isinstance(obj, domain.FiniteMetric):
        return MetricSchema.from_domain(obj).model_dump(mode="json")
    if isinstance(obj, domain.PermGroupAction):
        return GroupSchema.from_domain(obj).model_dump(mode="json")
    raise TypeError(f"no instance schema for {type(obj).__name__}")


class RunSuiteRequest(BaseModel):
    """Request to run one verification suite."""

    suite: str
    depth: Optional[int] = Field(default=None, ge=0)
    branch: Optional[int] = Field(default=None, ge=1)
    vertices: Optional[int] = Field(default=None, ge=1)
    samples: Optional[int] = Field(default=None, ge=0)
    seed: int = 0
    corpus: Optional[str] = None
    report: Optional[str] = None
    timings: bool = False

    def params(self) -> Dict[str, int]:
        """The explicitly given parameters, as recorded in the report."""
        fields = ("depth", "branch", "vertices", "samples")
        return {k: getattr(self, k) for k in fields if getattr(self, k) is not None}


class EnumerateRequest(BaseModel):
    """Request to write a corpus of trees or graphs."""

    kind: str
    out: str
    depth: int = Field(default=1, ge=0)
    branch: int = Field(default=1, ge=1)
    vertices: int = Field(default=3, ge=0)
    min_vertices: Optional[int] = Field(default=None, ge=0)
    up_to_iso: bool = False

    @field_validator("kind")
    @classmethod
    def known_kind(cls, kind: str) -> str:
        if kind not in ("trees", "graphs"):
            raise ValueError("kind must be 'trees' or 'graphs'")
        return kind


class DecideRequest(BaseModel):
    """Request to decide a relation between two instances."""

    relation: str
    lhs: Dict[str, Any]
    rhs: Dict[str, Any]
    color_relation: str = "eq"
    color_table: List[Tuple[int, int]] = []
    certificate: Optional[str] = None


class BuildRequest(BaseModel):
    """Request to build one of the constructions from an instance."""

    construction: str
    instance: Dict[str, Any]
    depth: Optional[int] = Field(default=None, ge=0)
    branch: Optional[int] = Field(default=None, ge=1)


class EvaluateNormRequest(BaseModel):
    """Request to evaluate ||v||_G."""

    graph: GraphSchema
    vector: List[str]

    @field_validator("vector", mode="before")
    @classmethod
    def stringify(cls, vector: Any) -> Any:
        if isinstance(vector, list):
            return [str(x) for x in vector]
        return vector

    @field_validator("vector")
    @classmethod
    def rational(cls, vector: List[str]) -> List[str]:
        for x in vector:
            try:
                Fraction(x)
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"{x!r} is not a rational number")
        return vector

    def fractions(self) -> List[Fraction]:
        return [Fraction(x) for x in self.vector]


class RevalidateRequest(BaseModel):
    """Request to re-check a stored certificate."""

    path: str


class ExtremePointRequest(BaseModel):
    """Request to certify that e_p is strongly extreme in X_G."""

    graph: GraphSchema
    p: int = Field(ge=0)
    epsilon: str = "1/2"

    @field_validator("epsilon", mode="before")
    @classmethod
    def positive(cls, epsilon: Any) -> str:
        try:
            value = Fraction(str(epsilon))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{epsilon!r} is not a rational number")
        if value <= 0:
            raise ValueError("epsilon must be positive")
        return str(value)
