"""Command-line front end.

Every command reads a JSON document (``--input``), validates it against a
schema, runs one engine operation and prints a deterministic report.

Exit codes: 0 definite positive result, 1 invalid input, 2 undecided,
3 definite negative result.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

import jsonschema

from . import __version__
from .derivations import halperin_check
from .fp_algebra import FPAlgebra, betti_table
from .gca import FreeGCA, Generator, as_rational, tensor
from .parsing import ParseError, parse_poly
from .relmodel import (NoSectionCertificate, RelativeModel, SectionWitness, Undecided,
                       check_certificate, solve_section, validate_relative)
from .secat import CPnFibration, cpn_secat, join_spheres, universal_secat_verdict
from .sullivan import (SullivanAlgebra, build_minimal_model, cohomology_report,
                       comparison_is_quasi_iso, derivation_homology, pure_model,
                       top_gottlieb_degree, validate_sullivan)

log = logging.getLogger("ratsecat")

EXIT_OK, EXIT_INVALID, EXIT_UNDECIDED, EXIT_NEGATIVE = 0, 1, 2, 3

_GENERATORS = {
    "type": "array",
    "items": {
        "type": "object",
        "properties": {"name": {"type": "string", "pattern": "^[A-Za-z_][A-Za-z0-9_]*$"},
                       "degree": {"type": "integer", "minimum": 1}},
        "required": ["name", "degree"],
        "additionalProperties": False,
    },
}
_RATIONAL = {"oneOf": [{"type": "integer"},
                       {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}]}
_SULLIVAN = {
    "type": "object",
    "properties": {
        "kind": {"const": "sullivan"},
        "generators": _GENERATORS,
        "differential": {"type": "object", "additionalProperties": {"type": "string"}},
        "cutoff": {"type": ["integer", "null"], "minimum": 0},
    },
    "required": ["generators"],
    "additionalProperties": False,
}
SCHEMAS: Dict[str, dict] = {
    "algebra": {
        "type": "object",
        "properties": {
            "kind": {"const": "algebra"},
            "generators": _GENERATORS,
            "relations": {"type": "array", "items": {"type": "string"}},
        },
        "required": ["generators", "relations"],
        "additionalProperties": False,
    },
    "sullivan": _SULLIVAN,
    "relative-model": {
        "type": "object",
        "properties": {
            "kind": {"const": "relative-model"},
            "base": _SULLIVAN,
            "fibre": _SULLIVAN,
            "D": {"type": "object", "additionalProperties": {"type": "string"}},
            "cutoff": {"type": ["integer", "null"], "minimum": 0},
        },
        "required": ["base", "fibre", "D"],
        "additionalProperties": False,
    },
    "cpn-fibration": {
        "type": "object",
        "properties": {
            "kind": {"const": "cpn-fibration"},
            "m": {"type": "integer", "minimum": 1},
            "n": {"type": "integer", "minimum": 2},
            "coeffs": {"type": "array", "items": _RATIONAL},
        },
        "required": ["m", "n", "coeffs"],
        "additionalProperties": False,
    },
}


class InputError(Exception):
    """Raised for anything that should exit with code 1."""


# ---------------------------------------------------------------- documents

def detect_kind(doc: Any) -> str:
    if not isinstance(doc, dict):
        raise InputError("input must be a JSON object")
    kind = doc.get("kind")
    if kind is not None:
        if kind not in SCHEMAS:
            raise InputError(f"unknown kind {kind!r}; expected one of {sorted(SCHEMAS)}")
        return kind
    if "base" in doc or "fibre" in doc:
        return "relative-model"
    if "m" in doc:
        return "cpn-fibration"
    if "differential" in doc or "cutoff" in doc:
        return "sullivan"
    return "algebra"


def validate_document(doc: Any, kinds: Sequence[str]) -> str:
    kind = detect_kind(doc)
    if kind not in kinds:
        raise InputError(f"this command needs a {' or '.join(kinds)} document, got {kind}")
    try:
        jsonschema.validate(doc, SCHEMAS[kind])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"schema violation at {where}: {exc.message}") from None
    return kind


def _free(gens: List[dict]) -> FreeGCA:
    try:
        return FreeGCA([Generator(g["name"], g["degree"]) for g in gens])
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _poly(text: str, alg: FreeGCA, where: str, degree: Optional[int] = None):
    try:
        return parse_poly(text, alg, degree)
    except ParseError as exc:
        raise InputError(f"{where}: {exc}") from None
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def algebra_from_doc(doc: dict) -> FPAlgebra:
    amb = _free(doc["generators"])
    rels = [_poly(r, amb, f"relation {i}") for i, r in enumerate(doc["relations"])]
    try:
        return FPAlgebra(amb, rels)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def sullivan_from_doc(doc: dict) -> SullivanAlgebra:
    alg = _free(doc["generators"])
    diff = {}
    for name, text in doc.get("differential", {}).items():
        if name not in alg.index:
            raise InputError(f"differential given for unknown generator {name!r}")
        diff[name] = _poly(text, alg, f"d({name})")
    return SullivanAlgebra(alg, diff, doc.get("cutoff"))


def relative_from_doc(doc: dict) -> RelativeModel:
    base = sullivan_from_doc(doc["base"])
    fibre = sullivan_from_doc(doc["fibre"])
    try:
        total = tensor(base.algebra, fibre.algebra)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    D = {}
    for name, text in doc["D"].items():
        if name not in fibre.algebra.index:
            raise InputError(f"D given for {name!r}, which is not a fibre generator")
        D[name] = _poly(text, total, f"D({name})")
    return RelativeModel(base, fibre, D, doc.get("cutoff"))


def cpn_from_doc(doc: dict) -> CPnFibration:
    try:
        return CPnFibration(doc["m"], doc["n"], tuple(as_rational(c) for c in doc["coeffs"]))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(str(exc)) from None


def _model_for_homotopy(doc: dict, kind: str) -> SullivanAlgebra:
    if kind == "algebra":
        try:
            return pure_model(algebra_from_doc(doc))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    S = sullivan_from_doc(doc)
    if not S.is_complete:
        raise InputError("this command needs a complete model (cutoff null or absent)")
    return S


# ---------------------------------------------------------------- commands

def cmd_validate(doc, kind, args) -> Tuple[int, dict]:
    if kind == "algebra":
        A = algebra_from_doc(doc)
        return EXIT_OK, {"valid": True, "evenly_graded": A.is_evenly_graded}
    if kind == "sullivan":
        S = sullivan_from_doc(doc)
        diag = validate_sullivan(S)
        cut = S.cutoff
    else:
        M = relative_from_doc(doc)
        diag = validate_relative(M)
        cut = M.cutoff
    payload = {"valid": diag is None, "diagnostic": diag.to_json() if diag else None,
               "certified_range": {"cutoff": cut}}
    return (EXIT_OK if diag is None else EXIT_NEGATIVE), payload


def cmd_cohomology(doc, kind, args) -> Tuple[int, dict]:
    N = _need(args.max_degree, "--max-degree")
    if kind == "algebra":
        A = algebra_from_doc(doc)
        table = betti_table(A, N)
        return EXIT_OK, {"betti": table.as_list(), "finite_certified": table.finite,
                         "certified_range": {"max_degree": N}}
    S = sullivan_from_doc(doc)
    if not S.certifies(N + 1):
        raise InputError(f"--max-degree {N} needs cutoff >= {N + 1} (model cutoff {S.cutoff})")
    rep = cohomology_report(S, N)
    out = rep.to_json()
    out["certified_range"] = {"max_degree": N, "cutoff": S.cutoff}
    return EXIT_OK, out


def cmd_minimal_model(doc, kind, args) -> Tuple[int, dict]:
    N = _need(args.cutoff, "--cutoff")
    A = algebra_from_doc(doc)
    try:
        S, phi = build_minimal_model(A, N)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    check = comparison_is_quasi_iso(S, phi, A, N - 1)
    return EXIT_OK, {
        "generators": [{"name": g.name, "degree": g.degree} for g in S.generators],
        "differential": {g.name: str(S.differential[g.name]) for g in S.generators},
        "comparison_map": {k: str(v) for k, v in phi.items()},
        "minimal": S.is_minimal(),
        "quasi_isomorphism_verified": check,
        "certified_range": {"cutoff": N, "cohomology_checked_through": N - 1},
    }


def cmd_halperin(doc, kind, args) -> Tuple[int, dict]:
    A = algebra_from_doc(doc)
    bound = args.max_degree if args.max_degree is not None else 64
    try:
        res = halperin_check(A, bound)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = res.to_json()
    out["certified_range"] = {"max_degree": bound}
    return (EXIT_OK if res.holds else EXIT_NEGATIVE), out


def cmd_aut_homotopy(doc, kind, args) -> Tuple[int, dict]:
    S = _model_for_homotopy(doc, kind)
    top = max((g.degree for g in S.generators), default=0)
    N = args.max_degree if args.max_degree is not None else top
    if N < 1:
        raise InputError("--max-degree must be >= 1")
    dims = {}
    for n in range(1, N + 1):
        dims[str(n)] = derivation_homology(S, n).dimension
    return EXIT_OK, {
        "aut1_homotopy": dims,
        "baut1_homotopy_degrees": sorted(int(n) + 1 for n, d in dims.items() if d),
        "certified_range": {"max_degree": N, "complete_model": True},
    }


def cmd_gottlieb(doc, kind, args) -> Tuple[int, dict]:
    S = _model_for_homotopy(doc, kind)
    try:
        top = top_gottlieb_degree(S)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return EXIT_OK, {"top_gottlieb_degree": top, "lower_bound": "at_least_1",
                     "generators_in_top_degree": [g.name for g in S.generators if g.degree == top]}


def cmd_join(doc, kind, args) -> Tuple[int, dict]:
    A = algebra_from_doc(doc)
    bound = args.max_degree if args.max_degree is not None else 64
    table = betti_table(A, bound)
    if not table.finite:
        raise InputError(f"finite dimensionality not certified up to degree {bound}")
    try:
        spheres = join_spheres(table)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return EXIT_OK, {"spheres": spheres.to_json(), "count": len(spheres),
                     "certified_range": {"max_degree": bound}}


def cmd_section(doc, kind, args) -> Tuple[int, dict]:
    M = relative_from_doc(doc)
    diag = validate_relative(M)
    if diag is not None:
        raise InputError(f"invalid relative model: {diag}")
    res = solve_section(M)
    out = {"certified_range": {"cutoff": M.cutoff}}
    if isinstance(res, SectionWitness):
        out.update({"result": "section", "witness": res.to_json()["values"], "verified": True})
        return EXIT_OK, out
    if isinstance(res, NoSectionCertificate):
        out.update({"result": "no_section", "certificate": res.to_json(),
                    "rechecked": check_certificate(M, res)})
        return EXIT_NEGATIVE, out
    out.update({"result": "undecided", "undecided": res.to_json()})
    return EXIT_UNDECIDED, out


def cmd_cpn_secat(doc, kind, args) -> Tuple[int, dict]:
    if doc is not None:
        f = cpn_from_doc(doc)
    else:
        if args.m is None or args.n is None or args.coeffs is None:
            raise InputError("cpn-secat needs --input or all of --m, --n, --coeffs")
        try:
            coeffs = tuple(as_rational(c) for c in args.coeffs.split(","))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"--coeffs: {exc}") from None
        try:
            f = CPnFibration(args.m, args.n, coeffs)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    verdict = cpn_secat(f)
    out = verdict.to_json()
    out["fibration"] = f.to_json()
    return EXIT_OK, out


def cmd_universal(doc, kind, args) -> Tuple[int, dict]:
    A = algebra_from_doc(doc)
    bound = args.max_degree if args.max_degree is not None else 64
    try:
        verdict = universal_secat_verdict(A, bound)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    code = EXIT_UNDECIDED if verdict.value == "undecided" else EXIT_OK
    return code, verdict.to_json()


def _need(value, flag):
    if value is None:
        raise InputError(f"{flag} is required for this command")
    if value < 0:
        raise InputError(f"{flag} must be >= 0")
    return value


COMMANDS = {
    "validate": (cmd_validate, ("algebra", "sullivan", "relative-model")),
    "cohomology": (cmd_cohomology, ("algebra", "sullivan")),
    "minimal-model": (cmd_minimal_model, ("algebra",)),
    "halperin": (cmd_halperin, ("algebra",)),
    "aut-homotopy": (cmd_aut_homotopy, ("algebra", "sullivan")),
    "gottlieb": (cmd_gottlieb, ("algebra", "sullivan")),
    "join": (cmd_join, ("algebra",)),
    "section": (cmd_section, ("relative-model",)),
    "cpn-secat": (cmd_cpn_secat, ("cpn-fibration",)),
    "universal": (cmd_universal, ("algebra",)),
}


# ---------------------------------------------------------------- driver

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ratsecat",
                                description="Exact rational homotopy and sectional category engine.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--input", help="path to a JSON input document ('-' for stdin)")
    p.add_argument("--max-degree", type=int)
    p.add_argument("--cutoff", type=int)
    p.add_argument("--output", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--coeffs", help="comma-separated a_m,...,a_0 (e.g. 0,-3/4)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _read_input(path: Optional[str]) -> Tuple[Optional[Any], bytes]:
    if path is None:
        return None, b""
    try:
        raw = sys.stdin.buffer.read() if path == "-" else open(path, "rb").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(raw), raw
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def execute(args: argparse.Namespace) -> Tuple[int, Optional[dict]]:
    """Execute one parsed command; returns ``(exit code, report or None)``."""
    func, kinds = COMMANDS[args.command]
    try:
        doc, raw = _read_input(args.input)
        if doc is None:
            if args.command != "cpn-secat":
                raise InputError(f"{args.command} needs --input")
            kind = None
            raw = json.dumps({"m": args.m, "n": args.n, "coeffs": args.coeffs},
                             sort_keys=True).encode()
        else:
            kind = validate_document(doc, kinds)
        code, payload = func(doc, kind, args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID, None
    report = {
        "command": args.command,
        "engine_version": __version__,
        "input_digest": "sha256:" + hashlib.sha256(raw).hexdigest(),
        "seed": args.seed,
    }
    report.update(payload)
    return code, report


def run(argv: Optional[Sequence[str]] = None) -> Tuple[int, Optional[dict]]:
    return execute(build_parser().parse_args(argv))


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2)
    lines = []
    for key in sorted(report):
        val = report[key]
        if isinstance(val, (dict, list)):
            val = json.dumps(val, sort_keys=True)
        lines.append(f"{key}: {val}")
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    code, report = execute(args)
    if report is not None:
        print(render(report, args.output))
    return code


if __name__ == "__main__":
    sys.exit(main())
