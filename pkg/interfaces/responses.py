"""
Response interface definitions for forge.

This module contains the response models the use cases return and the
artifacts written to disk: certificates, suite reports, corpus manifests.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel

try:
    from finite_forge import domain, settings
except ModuleNotFoundError:
    import domain
    import settings

# frozen definitions every artifact records, so runs under other choices
# can be told apart
CONVENTIONS = {
    "theta": "length-lex rank of a bit string: 2**len(u) - 1 + int(u, 2)",
    "rank": "length-lex rank of a sequence over 0..b-1",
    "k": "first coordinate of the Cantor unpairing: 0, 1, 0, 2, 1, 0, ...",
    "e": "arity, then equality pattern as restricted growth string (lex), "
    "then adjacency mask over pairs of classes",
    "gadget-numbering": "kind-major (Seq, Star, Plus, PlusPlus, Tine, Code), length-lex",
}


class Certificate(BaseModel):
    """A verdict between two instances, with the witness when there is one.

    Suite violations are certificates too, with verdict "violation" and
    the failed check's detail as witness.
    """

    relation: str
    lhs: str
    rhs: Optional[str] = None
    verdict: str
    witness: Dict[str, Any] = {}
    instances: List[Dict[str, Any]] = []
    tool_version: str = settings.TOOL_VERSION
    conventions: Dict[str, str] = CONVENTIONS


class SuiteReport(BaseModel):
    """Outcome of one suite run; passed + failed == instance_count."""

    suite: str
    params: Dict[str, int]
    seed: int
    instance_count: int
    passed: int
    failed: int
    violations: List[Certificate] = []
    diagnostics: List[str] = []
    wall_time: Optional[float] = None
    report_path: Optional[str] = None

    def to_payload(self) -> Dict[str, Any]:
        """What goes on disk: no wall time unless it was asked for."""
        return self.model_dump(exclude_none=True, exclude={"report_path"})


class CorpusResponse(BaseModel):
    kind: str
    path: str
    count: int
    manifest: Dict[str, Any]


class DecisionResponse(BaseModel):
    relation: str
    holds: bool
    certificate: Certificate
    certificate_path: Optional[str] = None


class ConstructionResponse(BaseModel):
    construction: str
    vertex_count: int
    payload: Dict[str, Any]


class NormResponse(BaseModel):
    value: str
    sup: str
    sandwich: bool

    @classmethod
    def from_domain(cls, value, sup, sandwich: bool) -> "NormResponse":
        return cls(value=str(value), sup=str(sup), sandwich=sandwich)


class RevalidationResponse(BaseModel):
    relation: str
    valid: bool
    detail: str = ""


class ExtremeCertificateResponse(BaseModel):
    dimension: int
    p: int
    epsilon: str
    delta: str
    vertex_count: int
    max_separation: str
    valid: bool

    @classmethod
    def from_domain(cls, c: domain.ExtremeCertificate) -> "ExtremeCertificateResponse":
        return cls(
            dimension=c.dimension,
            p=c.p,
            epsilon=str(c.epsilon),
            delta=str(c.delta),
            vertex_count=c.vertex_count,
            max_separation=str(c.max_separation),
            valid=c.valid,
        )
