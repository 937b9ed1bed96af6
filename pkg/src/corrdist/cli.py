"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 size guard hit, 3 a cross-check
or built-in assertion failed.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import (
    Correspondence,
    FiniteMetricSpace,
    check_functional_properties,
    check_pseudo_distance_axioms,
    inf_functional,
)
from .errors import TooLarge, ValidationError
from .frechet import FRECHET, PolygonalCurve, enumerate_couplings, optimal_coupling
from .gromov_hausdorff import GROMOV_HAUSDORFF, gh_diameter_lower_bound, gh_exact
from .hausdorff import HAUSDORFF, AmbientSubset, hausdorff_closed_form, hausdorff_via_correspondences
from .homeo import PLHomeo, divergence_report, make_contraction, power, proof_walkthrough
from .io import Document, DocumentError, exact, load_document, write_document
from .natural_pd import NATURAL_PSEUDO_DISTANCE, MeasuredSpace, npd_bruteforce, npd_exact

EXIT_OK, EXIT_INVALID, EXIT_TOO_LARGE, EXIT_ASSERTION = 0, 1, 2, 3

FUNCTIONALS = {
    "hausdorff": HAUSDORFF,
    "gh": GROMOV_HAUSDORFF,
    "frechet": FRECHET,
    "npd": NATURAL_PSEUDO_DISTANCE,
}


class CheckFailed(Exception):
    """A cross-check or built-in assertion did not hold."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _number(x: float) -> float | str:
    return "infinity" if math.isinf(x) else x


def _exact_with_float(x: Fraction) -> dict:
    return {"exact": exact(x), "float": float(x)}


def _pairs(rho) -> list[list[int]]:
    return [list(p) for p in rho]


def _expect(doc: Document, *types) -> Any:
    if not isinstance(doc.value, types):
        names = " or ".join(t.__name__ for t in types)
        raise DocumentError(doc.source, "kind", f"'{doc.kind}' cannot be used here, need {names}")
    return doc.value


def _as_metric(doc: Document) -> FiniteMetricSpace:
    value = _expect(doc, FiniteMetricSpace, AmbientSubset)
    if isinstance(value, AmbientSubset):
        return FiniteMetricSpace.from_points(value.points)
    return value


def _as_context(doc: Document, functional: str):
    if functional == "hausdorff":
        return _expect(doc, AmbientSubset)
    if functional == "gh":
        return _as_metric(doc)
    if functional == "frechet":
        return _expect(doc, PolygonalCurve)
    return _expect(doc, MeasuredSpace)


def cmd_hausdorff(args) -> dict:
    a, b = load_document(args.a), load_document(args.b)
    X, Y = _expect(a, AmbientSubset), _expect(b, AmbientSubset)
    report: dict[str, Any] = {"command": "hausdorff", "value": hausdorff_closed_form(X, Y)}
    if args.via_correspondences:
        value, rho = hausdorff_via_correspondences(X, Y, threads=args.threads)
        report["via_correspondences"] = {"value": value, "argmin": _pairs(rho)}
        if value != report["value"]:
            raise CheckFailed(f"correspondence minimum {value!r} != closed form {report['value']!r}")
        if args.emit:
            write_document(args.emit, rho, "hausdorff argmin")
    return report


def cmd_gh(args) -> dict:
    X, Y = _as_metric(load_document(args.a)), _as_metric(load_document(args.b))
    value, rho = gh_exact(X, Y)
    bound = gh_diameter_lower_bound(X, Y)
    if bound > value:
        raise CheckFailed(f"diameter lower bound {bound!r} exceeds {value!r}")
    if args.emit:
        write_document(args.emit, rho, "gh argmin")
    return {"command": "gh", "value": value, "argmin": _pairs(rho), "diameter_lower_bound": bound}


def cmd_frechet(args) -> dict:
    P = _expect(load_document(args.a), PolygonalCurve)
    Q = _expect(load_document(args.b), PolygonalCurve)
    value, coupling = optimal_coupling(P, Q)
    report: dict[str, Any] = {"command": "frechet", "value": value, "coupling": _pairs(coupling)}
    if args.oracle:
        oracle, best = inf_functional(P, Q, FRECHET, enumerate_couplings(len(P), len(Q)), threads=args.threads)
        report["oracle"] = {"value": oracle, "coupling": _pairs(best)}
        if oracle != value:
            raise CheckFailed(f"coupling enumeration gives {oracle!r}, dynamic programming {value!r}")
    if args.emit:
        write_document(args.emit, coupling.as_correspondence(), "frechet coupling")
    return report


def cmd_npd(args) -> dict:
    phi = _expect(load_document(args.a), MeasuredSpace)
    psi = _expect(load_document(args.b), MeasuredSpace)
    value, h = npd_exact(phi, psi)
    report: dict[str, Any] = {
        "command": "npd",
        "value": _number(value),
        "bijection": None if h is None else list(h.mapping),
    }
    if args.brute:
        brute = npd_bruteforce(phi, psi)
        report["brute"] = _number(brute)
        if brute != value:
            raise CheckFailed(f"brute force gives {brute!r}, bottleneck matching {value!r}")
    if args.emit and h is not None:
        rho = Correspondence._trusted(tuple(enumerate(h.mapping)), len(h), len(h))
        write_document(args.emit, rho, "npd bijection")
    return report


def _violations(violations) -> list[dict]:
    return [{"rule": v.rule, "detail": v.detail} for v in violations]


def cmd_axioms(args) -> dict:
    directory = Path(args.spaces)
    if not directory.is_dir():
        raise DocumentError(str(directory), "spaces", "not a directory")
    docs = [load_document(p) for p in sorted(directory.glob("*.json"))]
    if not docs:
        raise DocumentError(str(directory), "spaces", "no .json documents found")
    F = FUNCTIONALS[args.functional]
    spaces = [_as_context(d, args.functional) for d in docs]
    axioms = check_pseudo_distance_axioms(spaces, F, exhaustive=args.exhaustive)

    n = len(spaces)
    candidates = list(itertools.combinations(range(n), 3)) if n >= 3 else [tuple((list(range(n)) * 3)[:3])]
    if args.functional == "npd":
        candidates = [t for t in candidates if len({len(spaces[k]) for k in t}) == 1]
    triples = candidates[: args.max_triples]
    checks: dict[str, int] = {}
    violations = []
    for offset, triple in enumerate(triples):
        rep = check_functional_properties(F, tuple(spaces[k] for k in triple), args.trials, args.seed + offset)
        for key, count in rep.checks.items():
            checks[key] = checks.get(key, 0) + count
        violations += [{"triple": list(triple), **v} for v in _violations(rep.violations)]

    ok = axioms.ok and not violations
    return {
        "command": "axioms",
        "functional": F.name,
        "spaces": [d.name or Path(d.source).name for d in docs],
        "pseudo_distance": {
            "delta": [[_number(v) for v in row] for row in axioms.delta],
            "violations": _violations(axioms.violations),
        },
        "properties": {
            "seed": args.seed,
            "trials_per_triple": args.trials,
            "triples": [list(t) for t in triples],
            "checks": checks,
            "violations": violations,
        },
        "ok": ok,
    }


def _parse_subsequence(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise DocumentError("--subsequence", "subsequence", f"cannot read {text!r} as integers") from exc


def cmd_theorem_demo(args) -> dict:
    contraction = make_contraction()
    if args.homeo:
        h = _expect(load_document(args.homeo), PLHomeo)
    else:
        h = contraction
    if args.max_power < 1:
        raise DocumentError("--max-power", "max_power", "must be at least 1")
    divergence = divergence_report(h, args.max_power)
    walk = proof_walkthrough(h, _parse_subsequence(args.subsequence))
    report = {
        "command": "theorem-demo",
        "homeomorphism": [[exact(x), exact(y)] for x, y in h.breakpoints],
        "max_power": args.max_power,
        "rows": [{"m": m, "sup_distance": _exact_with_float(d)} for m, d in divergence.rows],
        "min_sup_distance": _exact_with_float(divergence.min_over_m),
        "argmin_m": divergence.argmin_m,
        "walkthrough": {
            "subsequence": list(walk.subsequence),
            "steps": [
                {
                    "i": s.i,
                    "cancels_exactly": s.cancels,
                    "gap": s.gap,
                    "gap_sup_distance": None if s.gap is None else _exact_with_float(s.gap_distance),
                }
                for s in walk.steps
            ],
        },
        "plot_table": [[m, float(d)] for m, d in divergence.rows],
    }
    if args.plot:
        lines = ["m\tsup_distance"] + [f"{m}\t{float(d)!r}" for m, d in divergence.rows]
        Path(args.plot).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if args.emit:
        write_document(args.emit, power(h, args.max_power), f"h^{args.max_power}")
    if not walk.all_cancel:
        raise CheckFailed("h^i o g^i is not the identity for some i")
    if h == contraction and divergence.min_over_m < Fraction(1, 4):
        raise CheckFailed(f"contraction powers came within {divergence.min_over_m} of the identity")
    return report


def _flat(value) -> bool:
    return not isinstance(value, (list, dict)) or (
        isinstance(value, list) and all(not isinstance(v, (list, dict)) for v in value)
    )


def dumps(report, indent: str = "") -> str:
    """JSON with one field per line and short numeric lists kept inline."""
    inner = indent + "  "
    if isinstance(report, dict):
        if not report:
            return "{}"
        body = ",\n".join(f"{inner}{json.dumps(k)}: {dumps(v, inner)}" for k, v in report.items())
        return "{\n" + body + "\n" + indent + "}"
    if isinstance(report, list) and report and not all(_flat(v) for v in report) or (
        isinstance(report, list) and any(isinstance(v, dict) for v in report)
    ):
        body = ",\n".join(inner + dumps(v, inner) for v in report)
        return "[\n" + body + "\n" + indent + "]"
    return json.dumps(report, separators=(", ", ": "))


def _is_exact(value) -> bool:
    return isinstance(value, dict) and set(value) == {"exact", "float"}


def _cell(value) -> str:
    if _is_exact(value):
        return f"{value['exact']} ({value['float']!r})"
    if isinstance(value, (list, dict)):
        return json.dumps(value)
    return str(value)


def _render_table(report: dict, indent: str = "") -> list[str]:
    lines = []
    for key, value in report.items():
        if isinstance(value, dict) and not _is_exact(value):
            lines.append(f"{indent}{key}:")
            lines += _render_table(value, indent + "  ")
        elif isinstance(value, list) and value and all(isinstance(row, dict) for row in value):
            columns = list(value[0])
            lines.append(f"{indent}{key}:")
            lines.append(indent + "  " + "  ".join(f"{c:>20}" for c in columns))
            for row in value:
                lines.append(indent + "  " + "  ".join(f"{_cell(row.get(c)):>20}" for c in columns))
        else:
            lines.append(f"{indent}{key}: {_cell(value)}")
    return lines


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--threads", type=int, default=1, help="worker threads for exhaustive searches")
    common.add_argument("--seed", type=int, default=0)

    parser = _Parser(prog="corrdist", description="Correspondence-based dissimilarity measures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("hausdorff", parents=[common], help="Hausdorff distance of two point sets")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--via-correspondences", action="store_true")
    p.add_argument("--emit", metavar="PATH", help="write the argmin correspondence")
    p.set_defaults(func=cmd_hausdorff)

    p = sub.add_parser("gh", parents=[common], help="Gromov-Hausdorff distance")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--emit", metavar="PATH")
    p.set_defaults(func=cmd_gh)

    p = sub.add_parser("frechet", parents=[common], help="discrete Fréchet distance")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--oracle", action="store_true", help="cross-check against coupling enumeration")
    p.add_argument("--emit", metavar="PATH")
    p.set_defaults(func=cmd_frechet)

    p = sub.add_parser("npd", parents=[common], help="natural pseudo-distance")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--brute", action="store_true", help="cross-check against all permutations")
    p.add_argument("--emit", metavar="PATH")
    p.set_defaults(func=cmd_npd)

    p = sub.add_parser("axioms", parents=[common], help="check pseudo-distance axioms and functional properties")
    p.add_argument("--functional", choices=sorted(FUNCTIONALS), required=True)
    p.add_argument("--spaces", required=True, metavar="DIR")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-triples", type=int, default=20)
    p.add_argument("--exhaustive", action="store_true")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("theorem-demo", parents=[common], help="powers of a contraction never approach the identity")
    p.add_argument("--max-power", type=int, default=60)
    p.add_argument("--subsequence", default="1,2,4,8,16")
    p.add_argument("--homeo", metavar="PATH", help="plhomeo document to use instead of the contraction")
    p.add_argument("--plot", metavar="PATH", help="write an m / sup-distance table for plotting")
    p.add_argument("--emit", metavar="PATH", help="write h^max_power as a plhomeo document")
    p.set_defaults(func=cmd_theorem_demo)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = args.func(args)
    except TooLarge as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_TOO_LARGE
    except ValidationError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    except CheckFailed as exc:
        print(f"check failed: {exc}", file=stderr)
        return EXIT_ASSERTION
    if args.format == "table":
        stdout.write("\n".join(_render_table(report)) + "\n")
    else:
        stdout.write(dumps(report) + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())
