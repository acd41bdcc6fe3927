"""
These are called usecases because that's what "Unkle Bob" called them.
I think of them as definitions of the system's features.

Used by the command line (forge.py). Each one takes a RepoSet,
so the files it reads and writes, and the pool it fans out through,
are whatever config.py (or a test) wires in.

Kernels raise ForgeError subclasses; use cases let them through,
and forge.py maps them onto exit codes.
"""

import logging
import time
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

try:
    from finite_forge import (
        colored_orders,
        domain,
        epi_gadget,
        graph_core,
        graph_norm,
        metric_gadget,
        normal_trees,
        settings,
        suites,
        tree_gadget,
    )
    from finite_forge.config_management import RepoSet
    from finite_forge.interfaces import requests, responses
    from finite_forge.repositories import (
        ConventionMismatchError,
        MalformedMapError,
        PreconditionError,
    )
except ModuleNotFoundError:
    import colored_orders
    import domain
    import epi_gadget
    import graph_core
    import graph_norm
    import metric_gadget
    import normal_trees
    import settings
    import suites
    import tree_gadget
    from config_management import RepoSet
    from interfaces import requests, responses
    from repositories import ConventionMismatchError, MalformedMapError, PreconditionError

logger = logging.getLogger(__name__)


class RunSuite:
    """Run one registered verification suite.

    The suite's checks become the report's instance count; checks
    flagged as diagnostics are listed but never counted as failures.
    Every failed check becomes a violation certificate naming the
    instances involved by hash.
    """

    def __init__(self, reposet: RepoSet):
        self.dispatch_repository = reposet["task_dispatch_repository"]
        self.corpus_repository = reposet["corpus_repository"]
        self.report_repository = reposet["report_repository"]

    def execute(self, request: requests.RunSuiteRequest) -> responses.SuiteReport:
        suite = suites.get_suite(request.suite)
        corpus = None
        if request.corpus:
            if suite.corpus_kind is None:
                raise PreconditionError(f"suite {suite.name} does not take a corpus")
            raw = self.corpus_repository.load_corpus(request.corpus)
            corpus = [
                requests.parse_instance(doc, suite.corpus_kind).to_domain() for doc in raw
            ]
            logger.info(f"loaded {len(corpus)} instances from {request.corpus}")

        ctx = suites.SuiteContext(
            params=request.params(),
            seed=request.seed,
            dispatch=self.dispatch_repository,
            limits=graph_core.suite_limits(),
            corpus=corpus,
        )
        logger.info(f"running suite {suite.name} with {ctx.params} seed={ctx.seed}")
        started = time.perf_counter()
        run = suite.run(ctx)
        elapsed = time.perf_counter() - started

        hashes = [requests.instance_hash(p) for p in run.instances]
        checks = [r for r in run.results if not r.diagnostic]
        failed = [r for r in checks if not r.passed]
        diagnostics = [
            f"{self._label(hashes, r.lhs)} {self._label(hashes, r.rhs)}: {r.detail}".strip()
            for r in run.results
            if r.diagnostic
        ]
        violations = [self._violation(suite.name, run.instances, hashes, r) for r in failed]
        report = responses.SuiteReport(
            suite=suite.name,
            params=ctx.params,
            seed=ctx.seed,
            instance_count=len(checks),
            passed=len(checks) - len(failed),
            failed=len(failed),
            violations=violations,
            diagnostics=diagnostics,
            wall_time=round(elapsed, 3) if request.timings else None,
        )
        logger.info(
            f"suite {suite.name}: {report.passed} passed, {report.failed} failed "
            f"of {report.instance_count}"
        )
        if request.report:
            report.report_path = self.report_repository.save_report(
                report.to_payload(), request.report
            )
        return report

    @staticmethod
    def _label(hashes: List[str], index: int) -> str:
        return hashes[index][:12] if 0 <= index < len(hashes) else ""

    @staticmethod
    def _violation(
        name: str, instances: List[Dict], hashes: List[str], r: domain.CheckResult
    ) -> responses.Certificate:
        involved = [k for k in dict.fromkeys((r.lhs, r.rhs)) if 0 <= k < len(hashes)]
        return responses.Certificate(
            relation=name,
            lhs=hashes[r.lhs] if 0 <= r.lhs < len(hashes) else "",
            rhs=hashes[r.rhs] if 0 <= r.rhs < len(hashes) else None,
            verdict="violation",
            witness={"detail": r.detail},
            instances=[instances[k] for k in involved],
        )


class EnumerateCorpus:
    """Write every tree or graph for the given parameters as a JSONL corpus.

    The first line is the manifest (count, params, conventions). Trees come
    out in canonical enumeration order; graphs in edge-mask order, one per
    isomorphism class when up_to_iso is set.
    """

    def __init__(self, reposet: RepoSet):
        self.corpus_repository = reposet["corpus_repository"]

    def execute(self, request: requests.EnumerateRequest) -> responses.CorpusResponse:
        if request.kind == "trees":
            params = {"depth": request.depth, "branch": request.branch}
            instances = [
                requests.dump_instance(t)
                for t in normal_trees.enumerate_trees(request.depth, request.branch)
            ]
        else:
            low = request.vertices if request.min_vertices is None else request.min_vertices
            params = {
                "vertices": request.vertices,
                "min_vertices": low,
                "up_to_iso": request.up_to_iso,
            }
            instances = [
                requests.dump_instance(g)
                for n in range(low, request.vertices + 1)
                for g in graph_core.enumerate_graphs(n, up_to_iso=request.up_to_iso)
            ]
        manifest = {
            "kind": request.kind,
            "count": len(instances),
            "params": params,
            "conventions": responses.CONVENTIONS,
            "tool_version": settings.TOOL_VERSION,
        }
        count = self.corpus_repository.save_corpus(request.out, manifest, instances)
        return responses.CorpusResponse(
            kind=request.kind, path=request.out, count=count, manifest=manifest
        )


def _images(m: Optional[domain.VertexMap]) -> Optional[Dict[str, Any]]:
    return None if m is None else {"images": list(m.images)}


def _color_relation(request: requests.DecideRequest) -> domain.ColorRelation:
    if request.color_relation == "eq":
        return colored_orders.EQUALITY
    if request.color_relation == "geq":
        return colored_orders.GEQ
    if request.color_relation == "table":
        return colored_orders.relation_from_table(request.color_table)
    raise PreconditionError(f"unknown color relation {request.color_relation!r}")


def _witness_map(witness: Dict[str, Any]) -> domain.VertexMap:
    return domain.VertexMap(images=tuple(int(x) for x in witness["images"]))


def _lipschitz(witness: Dict[str, Any]) -> domain.LipschitzMap:
    return domain.LipschitzMap(
        pairs=tuple((tuple(s), tuple(t)) for s, t in witness["pairs"]),
        bound=int(witness["bound"]),
    )


def _decide_le_max(a, b, request):
    f = normal_trees.le_max(a, b)
    if f is None:
        return None
    return {"pairs": [[list(s), list(t)] for s, t in f.pairs], "bound": f.bound}


def _decide_colored_embed(a, b, request):
    relation = _color_relation(request)
    phi = colored_orders.embeds(a, b, relation)
    if phi is None:
        return None
    return {
        "assignment": list(phi),
        "color_relation": relation.kind,
        "color_table": sorted(list(p) for p in relation.pairs),
    }


def _decide_colored_iso(a, b, request):
    if not colored_orders.iso_colored(a, b):
        return None
    return {"normal_form": [list(x) for x in colored_orders.normal_form(a).blocks]}


def _decide_signed_li(a, b, request):
    found = graph_norm.signed_isometric_embedding(
        graph_norm.make_norm(a), graph_norm.make_norm(b), graph_core.default_limits()
    )
    if found is None:
        return None
    return {"images": list(found.images), "signs": list(found.signs)}


# relation -> (instance kind, decision returning a witness payload or None)
DECISIONS: Dict[str, Tuple[str, Callable]] = {
    "le-max": ("tree", _decide_le_max),
    "embed": (
        "graph",
        lambda a, b, r: _images(graph_core.find_embedding(a, b, graph_core.default_limits())),
    ),
    "iso": (
        "graph",
        lambda a, b, r: _images(
            graph_core.find_isomorphism(a, b, limits=graph_core.default_limits())
        ),
    ),
    "epi": (
        "graph",
        lambda a, b, r: _images(graph_core.find_epimorphism(b, a, graph_core.default_limits())),
    ),
    "colored-embed": ("colored-sum", _decide_colored_embed),
    "colored-iso": ("colored-sum", _decide_colored_iso),
    "iso-embed-metric": (
        "metric",
        lambda a, b, r: _images(metric_gadget.iso_embed_metric(a, b, graph_core.default_limits())),
    ),
    "signed-li": ("graph", _decide_signed_li),
}


def _relation(name: str) -> Tuple[str, Callable]:
    if name not in DECISIONS:
        raise PreconditionError(
            f"unknown relation {name!r}; known relations are {sorted(DECISIONS)}"
        )
    return DECISIONS[name]


class DecideRelation:
    """Decide relation(A, B) and certify the answer.

    For "epi", A epi B means some edge-preserving map takes A onto B.
    A certificate is written only when the relation holds, since only
    then is there a witness to re-check.
    """

    def __init__(self, reposet: RepoSet):
        self.certificate_repository = reposet["certificate_repository"]

    def execute(self, request: requests.DecideRequest) -> responses.DecisionResponse:
        kind, decide = _relation(request.relation)
        lhs = requests.parse_instance(request.lhs, kind).to_domain()
        rhs = requests.parse_instance(request.rhs, kind).to_domain()
        witness = decide(lhs, rhs, request)
        payloads = [requests.dump_instance(lhs), requests.dump_instance(rhs)]
        certificate = responses.Certificate(
            relation=request.relation,
            lhs=requests.instance_hash(payloads[0]),
            rhs=requests.instance_hash(payloads[1]),
            verdict="holds" if witness is not None else "fails",
            witness=witness or {},
            instances=payloads,
        )
        path = None
        if witness is not None:
            path = self.certificate_repository.save_certificate(
                certificate.model_dump(mode="json"), request.certificate
            )
        logger.info(f"{request.relation}: {certificate.verdict}")
        return responses.DecisionResponse(
            relation=request.relation,
            holds=witness is not None,
            certificate=certificate,
            certificate_path=path,
        )


def _check_le_max(a, b, witness) -> bool:
    return normal_trees.is_lipschitz_witness(a, b, _lipschitz(witness))


def _check_colored_embed(a, b, witness) -> bool:
    relation = domain.ColorRelation(
        kind=witness["color_relation"],
        pairs=frozenset(tuple(p) for p in witness.get("color_table", [])),
    )
    return colored_orders.is_valid_assignment(a, b, relation, witness["assignment"])


def _check_colored_iso(a, b, witness) -> bool:
    blocks = tuple(tuple(x) for x in witness["normal_form"])
    return (
        colored_orders.normal_form(a).blocks == blocks
        and colored_orders.normal_form(b).blocks == blocks
    )


def _check_signed_li(a, b, witness) -> bool:
    e = domain.SignedEmbedding(
        images=tuple(witness["images"]), signs=tuple(witness["signs"])
    )
    return graph_norm.is_signed_isometric(graph_norm.make_norm(a), graph_norm.make_norm(b), e)


CHECKS: Dict[str, Callable] = {
    "le-max": _check_le_max,
    "embed": lambda a, b, w: graph_core.is_embedding(a, b, _witness_map(w)),
    "iso": lambda a, b, w: graph_core.is_isomorphism(a, b, _witness_map(w)),
    "epi": lambda a, b, w: graph_core.is_epimorphism(b, a, _witness_map(w)),
    "colored-embed": _check_colored_embed,
    "colored-iso": _check_colored_iso,
    "iso-embed-metric": lambda a, b, w: metric_gadget.is_isometric_embedding(
        a, b, _witness_map(w)
    ),
    "signed-li": _check_signed_li,
}


class RevalidateCertificate:
    """Re-check a stored certificate from its own contents."""

    def __init__(self, reposet: RepoSet):
        self.certificate_repository = reposet["certificate_repository"]

    def execute(self, request: requests.RevalidateRequest) -> responses.RevalidationResponse:
        certificate = responses.Certificate.model_validate(
            self.certificate_repository.load_certificate(request.path)
        )
        if certificate.verdict != "holds":
            raise PreconditionError(
                f"only certificates with a witness can be re-checked, got {certificate.verdict!r}"
            )
        if certificate.conventions != responses.CONVENTIONS:
            raise ConventionMismatchError(
                "certificate was written under different conventions"
            )
        kind, _ = _relation(certificate.relation)
        if len(certificate.instances) != 2:
            raise PreconditionError("certificate does not carry both instances")
        hashes = [requests.instance_hash(p) for p in certificate.instances]
        if hashes != [certificate.lhs, certificate.rhs]:
            return responses.RevalidationResponse(
                relation=certificate.relation, valid=False, detail="instance hashes do not match"
            )
        lhs, rhs = (requests.parse_instance(p, kind).to_domain() for p in certificate.instances)
        try:
            valid = bool(CHECKS[certificate.relation](lhs, rhs, certificate.witness))
        except (KeyError, TypeError, ValueError, MalformedMapError) as e:
            return responses.RevalidationResponse(
                relation=certificate.relation, valid=False, detail=f"malformed witness: {e}"
            )
        return responses.RevalidationResponse(
            relation=certificate.relation,
            valid=valid,
            detail="witness re-checked" if valid else "witness does not satisfy the relation",
        )


def _gadget_payload(g: domain.GadgetGraph) -> Dict[str, Any]:
    return {
        "graph": requests.dump_instance(g.graph),
        "kinds": [
            {"kind": k.kind, "s": list(k.s), "u": k.u, "i": k.i, "j": k.j, "x": k.x}
            for k in g.kinds
        ],
    }


def _epi_payload(e: domain.EpiGadget) -> Dict[str, Any]:
    return {
        "graph": requests.dump_instance(e.graph),
        "depth": e.depth,
        "branch": e.branch,
        "reservoir": e.reservoir,
        "vertices": [{"role": v.role, "t": list(v.t), "index": v.index} for v in e.vertices],
        "block_types": [[list(t), n] for t, n in e.block_types],
    }


def _ball_payload(s: domain.BallStructure) -> Dict[str, Any]:
    return {
        "names": [[slot, str(q)] for slot, q in s.names],
        "balls": [sorted(b) for b in s.balls],
        "diameters": [str(x) for x in s.diameters],
        "radii": [str(x) for x in s.radii],
        "slots": [list(x) for x in s.slots],
        "forks": [sorted(f) for f in s.forks],
    }


def _norm_structure_payload(s: domain.NormStructure) -> Dict[str, Any]:
    return {
        "dimension": s.dimension,
        "coefficients": [str(x) for x in s.coefficients],
        "thresholds": [str(x) for x in s.thresholds],
        "opposite": sorted(list(p) for p in s.opposite),
        "values": [
            [[str(a) for a in alpha], list(ks), str(value)]
            for (alpha, ks), value in s.values.items()
        ],
    }


class BuildConstruction:
    """Build one construction from an instance and return it as JSON.

    g-t, u-g take a tree; g-star, l-g take a graph and (depth, branch);
    discrete takes a graph (which must be a tree); ball-structure takes a
    metric; norm-structure takes a graph on at least two vertices.
    """

    INPUTS = {
        "g-t": "tree",
        "u-g": "tree",
        "g-star": "graph",
        "l-g": "graph",
        "discrete": "graph",
        "ball-structure": "metric",
        "norm-structure": "graph",
    }

    def __init__(self, reposet: RepoSet):
        pass

    def execute(self, request: requests.BuildRequest) -> responses.ConstructionResponse:
        if request.construction not in self.INPUTS:
            raise PreconditionError(
                f"unknown construction {request.construction!r}; "
                f"known constructions are {sorted(self.INPUTS)}"
            )
        x = requests.parse_instance(request.instance, self.INPUTS[request.construction]).to_domain()
        limits = graph_core.suite_limits()
        d = 1 if request.depth is None else request.depth
        b = 2 if request.branch is None else request.branch
        name = request.construction
        if name == "g-t":
            g = tree_gadget.build_gadget(x, limits)
            count, payload = g.graph.n, _gadget_payload(g)
        elif name == "u-g":
            space = metric_gadget.build_branch_space(tree_gadget.build_gadget(x, limits))
            count = space.metric.n
            payload = {
                "metric": requests.dump_instance(space.metric),
                "slots": [list(s) for s in space.slots],
                "forks": [
                    {"kind": f.kind, "s": list(f.s), "u": f.u,
                     "points": sorted(f.points), "distance": str(f.distance)}
                    for f in space.forks
                ],
            }
        elif name == "g-star":
            e = epi_gadget.build_epi_gadget(x, d, b, limits)
            count, payload = e.graph.n, _epi_payload(e)
        elif name == "l-g":
            a = colored_orders.build_lg(x, d, b)
            count, payload = len(a.blocks), requests.dump_instance(a)
        elif name == "discrete":
            m = metric_gadget.build_discrete(x)
            count, payload = m.n, requests.dump_instance(m)
        elif name == "ball-structure":
            s = metric_gadget.build_ball_structure(x)
            count, payload = len(s.names), _ball_payload(s)
        else:
            s = graph_norm.build_norm_structure(graph_norm.make_norm(x))
            count, payload = 2 * s.dimension, _norm_structure_payload(s)
        logger.info(f"built {name} with {count} elements")
        return responses.ConstructionResponse(
            construction=name, vertex_count=count, payload=payload
        )


class EvaluateNorm:
    def __init__(self, reposet: RepoSet):
        pass

    def execute(self, request: requests.EvaluateNormRequest) -> responses.NormResponse:
        n = graph_norm.make_norm(request.graph.to_domain())
        v = request.fractions()
        return responses.NormResponse.from_domain(
            graph_norm.norm(n, v), graph_norm.sup_norm(v), graph_norm.sandwich_check(n, v)
        )


class CertifyExtremePoint:
    def __init__(self, reposet: RepoSet):
        pass

    def execute(
        self, request: requests.ExtremePointRequest
    ) -> responses.ExtremeCertificateResponse:
        g = request.graph.to_domain()
        if request.p >= g.n:
            raise PreconditionError(f"e_{request.p} is not a unit vector in dimension {g.n}")
        c = graph_norm.strongly_extreme_certificate(
            graph_norm.make_norm(g), request.p, Fraction(request.epsilon)
        )
        return responses.ExtremeCertificateResponse.from_domain(c)
