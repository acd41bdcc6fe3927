"""
The forge command line.

Each sub-command parses its arguments into a request, runs one use case
against the wired-in reposet and prints the response as JSON on stdout.
Exit codes: 0 when the relation holds or the suite passes, 1 when it does
not, 2 on any usage, schema or budget error.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

try:
    from finite_forge import settings, suites, usecases
    from finite_forge.config import reposet
    from finite_forge.interfaces import requests
    from finite_forge.repositories import ForgeError, SchemaError
except ModuleNotFoundError:
    import settings
    import suites
    import usecases
    from config import reposet
    from interfaces import requests
    from repositories import ForgeError, SchemaError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_ERROR = 2


def _emit(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _instance(path: str):
    return reposet["corpus_repository"].load_instance(path)


def cmd_enumerate_trees(args) -> int:
    response = usecases.EnumerateCorpus(reposet).execute(
        requests.EnumerateRequest(
            kind="trees", out=args.out, depth=args.depth, branch=args.branch
        )
    )
    _emit({"path": response.path, "count": response.count})
    return EXIT_OK


def cmd_enumerate_graphs(args) -> int:
    response = usecases.EnumerateCorpus(reposet).execute(
        requests.EnumerateRequest(
            kind="graphs",
            out=args.out,
            vertices=args.vertices,
            min_vertices=args.min_vertices,
            up_to_iso=args.up_to_iso,
        )
    )
    _emit({"path": response.path, "count": response.count})
    return EXIT_OK


def cmd_verify(args) -> int:
    report = usecases.RunSuite(reposet).execute(
        requests.RunSuiteRequest(
            suite=args.suite,
            depth=args.depth,
            branch=args.branch,
            vertices=args.vertices,
            samples=args.samples,
            seed=args.seed,
            corpus=args.corpus,
            report=args.report,
            timings=args.timings,
        )
    )
    _emit(report.to_payload())
    return EXIT_OK if report.failed == 0 else EXIT_FAILS


def cmd_decide(args) -> int:
    table = [tuple(int(c) for c in pair.split(",")) for pair in args.color_table or []]
    response = usecases.DecideRelation(reposet).execute(
        requests.DecideRequest(
            relation=args.relation,
            lhs=_instance(args.lhs),
            rhs=_instance(args.rhs),
            color_relation=args.colors,
            color_table=table,
            certificate=args.certificate,
        )
    )
    _emit(
        {
            "relation": response.relation,
            "holds": response.holds,
            "witness": response.certificate.witness,
            "certificate_path": response.certificate_path,
        }
    )
    return EXIT_OK if response.holds else EXIT_FAILS


def cmd_build(args) -> int:
    response = usecases.BuildConstruction(reposet).execute(
        requests.BuildRequest(
            construction=args.construction,
            instance=_instance(args.instance),
            depth=args.depth,
            branch=args.branch,
        )
    )
    payload = response.model_dump(mode="json")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")
        _emit({"construction": response.construction, "vertex_count": response.vertex_count})
    else:
        _emit(payload)
    return EXIT_OK


def cmd_norm_eval(args) -> int:
    response = usecases.EvaluateNorm(reposet).execute(
        requests.EvaluateNormRequest(graph=_instance(args.graph), vector=args.vector)
    )
    _emit(response.model_dump())
    return EXIT_OK


def cmd_norm_extreme(args) -> int:
    response = usecases.CertifyExtremePoint(reposet).execute(
        requests.ExtremePointRequest(
            graph=_instance(args.graph), p=args.p, epsilon=args.epsilon
        )
    )
    _emit(response.model_dump())
    return EXIT_OK if response.valid else EXIT_FAILS


def cmd_revalidate(args) -> int:
    response = usecases.RevalidateCertificate(reposet).execute(
        requests.RevalidateRequest(path=args.certificate)
    )
    _emit(response.model_dump())
    return EXIT_OK if response.valid else EXIT_FAILS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forge",
        description="Finite-scale constructions, decision procedures and verification suites.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate-trees", help="write every normal tree of T(d, b)")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--branch", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_enumerate_trees)

    p = sub.add_parser("enumerate-graphs", help="write every graph on a vertex range")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--min-vertices", type=int)
    p.add_argument("--up-to-iso", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_enumerate_graphs)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", help=", ".join(suites.REGISTRY))
    p.add_argument("--corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report")
    p.add_argument("--timings", action="store_true")
    p.add_argument("--depth", type=int)
    p.add_argument("--branch", type=int)
    p.add_argument("--vertices", type=int)
    p.add_argument("--samples", type=int)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("decide", help="decide a relation between two instances")
    p.add_argument("relation", help=", ".join(usecases.DECISIONS))
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--colors", choices=("eq", "geq", "table"), default="eq")
    p.add_argument("--color-table", nargs="*", metavar="C,C'")
    p.add_argument("--certificate", help="where to write the certificate")
    p.set_defaults(handler=cmd_decide)

    p = sub.add_parser("build", help="build a construction from an instance")
    p.add_argument("construction", choices=sorted(usecases.BuildConstruction.INPUTS))
    p.add_argument("instance")
    p.add_argument("--depth", type=int)
    p.add_argument("--branch", type=int)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_build)

    norm = sub.add_parser("norm", help="graph norms")
    norm_sub = norm.add_subparsers(dest="norm_command", required=True)
    p = norm_sub.add_parser("eval", help="evaluate ||v||_G")
    p.add_argument("graph")
    p.add_argument("vector", nargs="+")
    p.set_defaults(handler=cmd_norm_eval)
    p = norm_sub.add_parser("extreme", help="certify that e_p is strongly extreme")
    p.add_argument("graph")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--epsilon", default="1/2")
    p.set_defaults(handler=cmd_norm_extreme)

    p = sub.add_parser("revalidate", help="re-check a stored certificate")
    p.add_argument("certificate")
    p.set_defaults(handler=cmd_revalidate)
    return parser


def _configure_logging(verbose: int):
    level = settings.FORGE_LOG_LEVEL
    if verbose == 1:
        level = "INFO"
    elif verbose > 1:
        level = "DEBUG"
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except ValidationError as e:
        first = e.errors()[0]
        pointer = ".".join(str(part) for part in first["loc"])
        print(f"forge: invalid input at {pointer or '<root>'}: {first['msg']}", file=sys.stderr)
    except SchemaError as e:
        print(f"forge: {e} (at {e.pointer or '<root>'})", file=sys.stderr)
    except (ForgeError, ValueError) as e:
        print(f"forge: {e}", file=sys.stderr)
    except OSError as e:
        logger.error(f"I/O failed: {e}")
        print(f"forge: {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
