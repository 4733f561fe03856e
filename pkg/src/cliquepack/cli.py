"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 domain failure (stage-tagged
JSON on stdout), 3 negative answer (no decomposition, failed verification,
nonexistent design). JSON goes to stdout with sorted keys; messages go to
stderr.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
import warnings
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import clique_fraction_bound, edge_clique_bound, edge_bound_to_json, verify_edge_bound
from .decomposer import (
    DecomposerConfig,
    DecompositionFailure,
    certificate_from_json,
    certificate_to_json,
    decompose,
)
from .designs import (
    DesignError,
    design_to_json,
    parse_design,
    projective_plane_design,
    search_design,
    serialize_design,
    validate_design,
)
from .errors import BudgetExceeded, ParameterError, ParseError, SolverError
from .extremal import (
    SamplerError,
    blow_up,
    scaled_instance,
    scaled_report,
    random_regular,
    report_to_json as extremal_to_json,
    structural_bound_report,
)
from .fracpack import (
    fractional_packing_number,
    packing_from_json,
    packing_lp,
    report_to_json as fracpack_to_json,
    validate_fractional,
)
from .graph import Graph, cycle_graph, write_graph
from .intpack import (
    gap_report,
    gap_to_json,
    greedy_packing,
    integral_from_json,
    integral_to_json,
    is_maximal,
    max_packing_exact,
    round_fractional,
)
from .lp import lp_format
from .schemas import SCHEMAS
from .verify import verify_certificate, verify_integral_packing

EXIT_OK, EXIT_USAGE, EXIT_FAILURE, EXIT_NEGATIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for domain failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class _Run:
    """Collects input hashes and timings for the optional run manifest."""

    def __init__(self):
        self.inputs: dict[str, str] = {}
        self.timings: dict[str, float] = {}

    def read(self, path: str) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
        self.inputs[path] = hashlib.sha256(data).hexdigest()
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError:
            raise UsageError(f"{path} is not UTF-8 text") from None

    def graph(self, path: str) -> Graph:
        from .graph import parse_graph

        text = self.read(path)
        try:
            return parse_graph(text)
        except ParseError as exc:
            raise UsageError(f"{path}: {exc}") from None

    def json(self, path: str):
        try:
            return json.loads(self.read(path))
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON: {exc}") from None


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def failure(stage: str, message: str, details: dict | None = None) -> dict:
    return {"status": "failure", "stage": stage, "message": message, "details": details or {}}


# --- subcommands: each returns (exit code, payload) --------------------------


def cmd_fracpack(a, run: _Run):
    g = run.graph(a.graph)
    rep = fractional_packing_number(g, a.k, exact=not a.float, tol=a.tol)
    if a.lp_dump:
        lp, cliques = packing_lp(g, a.k)
        names = ["x_" + "_".join(str(v + 1) for v in c) for c in cliques]
        Path(a.lp_dump).write_text(lp_format(lp, names))
    code = EXIT_OK if rep.is_fractional_decomposition else EXIT_NEGATIVE
    return code, fracpack_to_json(g, rep)


def cmd_intpack(a, run: _Run):
    g = run.graph(a.graph)
    if a.method == "exact":
        try:
            p = max_packing_exact(g, a.k, a.node_budget)
        except BudgetExceeded as exc:
            best = integral_to_json(exc.best) if exc.best is not None else None
            return EXIT_FAILURE, failure("branch-and-bound", str(exc), {"best": best})
    elif a.method == "greedy":
        p = greedy_packing(g, a.k, a.seed)
    else:
        p = round_fractional(g, fractional_packing_number(g, a.k).witness)
    out = integral_to_json(p)
    out.update(size=len(p), method=a.method, maximal=is_maximal(g, p))
    return EXIT_OK, out


def cmd_gap(a, run: _Run):
    g = run.graph(a.graph)
    try:
        rep = gap_report(g, a.k, exact=not a.greedy, node_budget=a.node_budget, order_seed=a.seed)
    except BudgetExceeded as exc:
        return EXIT_FAILURE, failure("branch-and-bound", str(exc))
    return EXIT_OK, gap_to_json(rep)


def cmd_decompose(a, run: _Run):
    g = run.graph(a.graph)
    if a.design:
        try:
            design = parse_design(run.read(a.design))
        except (ParseError, DesignError) as exc:
            raise UsageError(f"{a.design}: {exc}") from None
    elif a.pg is not None:
        design = projective_plane_design(a.pg)
    else:
        budget = a.search_budget

        def design(n, t):
            return search_design(n, t, budget)

    cfg = DecomposerConfig(
        k=a.k,
        maxdeg_cap=a.maxdeg_cap,
        saturation_cap=a.saturation_cap,
        sample_attempts=a.attempts,
        rng_seed=a.seed,
        keep_near_kt=a.keep_near_kt,
    )
    try:
        cert = decompose(g, cfg, design)
    except DecompositionFailure as exc:
        return EXIT_FAILURE, failure(exc.stage, exc.message, exc.details)
    run.timings.update(cert.timings)
    return EXIT_OK, certificate_to_json(cert)


def cmd_design(a, run: _Run):
    if a.validate:
        try:
            d = parse_design(run.read(a.validate))
        except DesignError as exc:
            return EXIT_NEGATIVE, {"valid": False, "violations": [str(exc)], "reason": exc.reason}
        except ParseError as exc:
            raise UsageError(f"{a.validate}: {exc}") from None
        rep = validate_design(d)
        return (EXIT_OK if rep.valid else EXIT_NEGATIVE), {"valid": rep.valid, "violations": rep.violations}
    if a.pg is not None:
        d = projective_plane_design(a.pg)
    else:
        n, t = a.search
        try:
            d = search_design(n, t, a.search_budget)
        except DesignError as exc:
            return EXIT_NEGATIVE, failure("design", str(exc), {"reason": exc.reason})
        except BudgetExceeded as exc:
            return EXIT_FAILURE, failure("design", str(exc), {"reason": "budget"})
    if a.out:
        Path(a.out).write_text(serialize_design(d))
    return EXIT_OK, design_to_json(d)


def cmd_extremal(a, run: _Run):
    if a.scaled:
        if a.build:
            g, spec = scaled_instance(a.k, a.s, a.eps, a.seed)
            rep = structural_bound_report(g, spec, lp=a.lp)
        else:
            if a.lp:
                raise UsageError("--lp needs a built graph; add --build")
            rep, g = scaled_report(a.k, a.s, a.eps), None
        out = extremal_to_json(rep)
        out["parameters"] = {"s": a.s, "eps": str(Fraction(a.eps))}
    else:
        if a.part_cycle is not None:
            part = cycle_graph(a.part_cycle)
        elif a.part_regular is not None:
            nv, deg = a.part_regular
            part = random_regular(nv, deg, a.seed)
        else:
            raise UsageError("--mini needs --part-cycle L or --part-regular NV DEG")
        g, spec = blow_up(a.k, part)
        out = extremal_to_json(structural_bound_report(g, spec, lp=a.lp))
    if a.write_graph:
        if g is None:
            raise UsageError("--write-graph needs a built graph; add --build")
        write_graph(g, a.write_graph)
    return EXIT_OK, out


def cmd_bounds(a, run: _Run):
    if a.edge_bound:
        n, r, t = a.edge_bound
        b = edge_clique_bound(n, r, t)
        return EXIT_OK, {"kind": "edge-bound", "n_star": n, "degree_deficit": r, "t": t,
                         "bound": str(b.value), "vacuous": b.flagged}
    if a.fraction_bound:
        gamma, t = a.fraction_bound
        b = clique_fraction_bound(Fraction(gamma), int(t))
        return EXIT_OK, {"kind": "fraction-bound", "gamma": str(Fraction(gamma)), "t": int(t),
                         "bound": str(b.value), "clamped": b.flagged}
    g = run.graph(a.verify)
    rep = verify_edge_bound(g, a.t)
    out = {"kind": "verify", **edge_bound_to_json(rep)}
    return (EXIT_OK if rep.holds else EXIT_NEGATIVE), out


def cmd_verify(a, run: _Run):
    obj = run.json(a.file)
    g = run.graph(a.graph)
    if not isinstance(obj, dict):
        raise UsageError(f"{a.file}: expected a JSON object")
    try:
        if "parts" in obj:
            cert = certificate_from_json(obj)
            k = a.k if a.k is not None else cert.k
            rep = verify_certificate(g, cert, k)
            out = {"kind": "certificate", "valid": rep.valid, "violations": rep.violations,
                   "counts": rep.counts}
        elif "copies" in obj:
            p = integral_from_json(obj)
            rep = verify_integral_packing(g, a.k if a.k is not None else p.k, p.copies)
            out = {"kind": "integral-packing", "valid": rep.valid, "violations": rep.violations,
                   "counts": rep.counts}
        elif "weights" in obj or "witness" in obj:
            p = packing_from_json(obj.get("witness", obj))
            rep = validate_fractional(g, p, require_decomposition=a.strict)
            out = {"kind": "fractional-packing", "valid": rep.valid, "violations": rep.violations,
                   "counts": {"support": len(p.support())}}
        else:
            raise UsageError(f"{a.file}: not a certificate or packing")
    except ParseError as exc:
        raise UsageError(f"{a.file}: {exc}") from None
    return (EXIT_OK if out["valid"] else EXIT_NEGATIVE), out


# --- parser -----------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed (default 0)")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS,
                   help="cap on internal parallelism (all pipelines currently run serially)")
    p.add_argument("--manifest", default=argparse.SUPPRESS, metavar="FILE",
                   help="write a run manifest (inputs, seed, config, timings) to FILE")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    p = _Parser(prog="cliquepack", description="Clique packings, decompositions and designs.",
                parents=[common])
    p.add_argument("--version", action="version", version=f"cliquepack {__version__}")
    p.add_argument("--json-schema", choices=sorted(SCHEMAS), metavar="NAME",
                   help="print the JSON schema of a subcommand's output and exit")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    s = add("fracpack", "fractional K_k-packing number (exact LP by default)")
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--float", action="store_true", help="floating-point LP instead of exact")
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--lp-dump", metavar="FILE", help="write the LP in CPLEX LP format")
    s.add_argument("graph")
    s.set_defaults(func=cmd_fracpack)

    s = add("intpack", "integral K_k-packing")
    s.add_argument("-k", type=int, required=True)
    s.add_argument("--method", choices=["exact", "greedy", "round"], default="exact")
    s.add_argument("--node-budget", type=int, default=1_000_000)
    s.add_argument("graph")
    s.set_defaults(func=cmd_intpack)

    s = add("gap", "fractional minus integral packing number")
    s.add_argument("-k", type=int, required=True)
    m = s.add_mutually_exclusive_group()
    m.add_argument("--exact", action="store_true", help="exact nu by branch-and-bound (default)")
    m.add_argument("--greedy", action="store_true", help="greedy lower bound for nu")
    s.add_argument("--node-budget", type=int, default=1_000_000)
    s.add_argument("graph")
    s.set_defaults(func=cmd_gap)

    s = add("decompose", "design-based {K_k, K_t, K_t^-}-decomposition, t = 2k-1")
    s.add_argument("-k", type=int, default=3)
    m = s.add_mutually_exclusive_group(required=True)
    m.add_argument("--design", metavar="FILE")
    m.add_argument("--pg", type=int, metavar="Q", help="projective plane of order Q")
    m.add_argument("--search", action="store_true", help="search for a design of the needed size")
    s.add_argument("--search-budget", type=int, default=1_000_000)
    s.add_argument("--maxdeg-cap", type=int)
    s.add_argument("--saturation-cap", type=int)
    s.add_argument("--attempts", type=int, default=100, help="permutation draws")
    s.add_argument("--keep-near-kt", action="store_true",
                   help="keep elements that are K_t minus one edge as KtMinus parts")
    s.add_argument("graph")
    s.set_defaults(func=cmd_decompose)

    s = add("design", "build, search or validate an S(2,t,n) design")
    m = s.add_mutually_exclusive_group(required=True)
    m.add_argument("--pg", type=int, metavar="Q")
    m.add_argument("--search", type=int, nargs=2, metavar=("N", "T"))
    m.add_argument("--validate", metavar="FILE")
    s.add_argument("--search-budget", type=int, default=1_000_000)
    s.add_argument("--out", metavar="FILE", help="also write the design in text format")
    s.set_defaults(func=cmd_design)

    s = add("extremal", "blow-up graphs with a small fractional packing number")
    s.add_argument("-k", type=int, default=3)
    m = s.add_mutually_exclusive_group(required=True)
    m.add_argument("--mini", action="store_true", help="blow up a small part graph")
    m.add_argument("--scaled", action="store_true", help="parameterized instance from s and eps")
    s.add_argument("--part-cycle", type=int, metavar="L")
    s.add_argument("--part-regular", type=int, nargs=2, metavar=("NV", "DEG"))
    s.add_argument("--s", type=int, default=1)
    s.add_argument("--eps", default="0.05")
    s.add_argument("--build", action="store_true", help="construct the parameterized graph")
    s.add_argument("--lp", choices=["exact", "float"])
    s.add_argument("--write-graph", metavar="FILE")
    s.set_defaults(func=cmd_extremal)

    s = add("bounds", "K_t counts through an edge")
    m = s.add_mutually_exclusive_group(required=True)
    m.add_argument("--edge-bound", type=int, nargs=3, metavar=("NSTAR", "DEFICIT", "T"))
    m.add_argument("--fraction-bound", nargs=2, metavar=("GAMMA", "T"))
    m.add_argument("--verify", metavar="GRAPH")
    s.add_argument("-t", type=int, default=4, help="clique order for --verify")
    s.set_defaults(func=cmd_bounds)

    s = add("verify", "re-check a certificate or packing against its graph")
    s.add_argument("-k", type=int, help="override the clique order stored in the file")
    s.add_argument("--strict", action="store_true",
                   help="fractional packings must cover every edge exactly once")
    s.add_argument("file")
    s.add_argument("graph")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if a.json_schema:
            sys.stdout.write(dumps(SCHEMAS[a.json_schema]))
            return EXIT_OK
        if not a.cmd:
            parser.print_usage(sys.stderr)
            raise UsageError("a subcommand is required")
        a.seed = getattr(a, "seed", 0)
        a.jobs = getattr(a, "jobs", 1)
        if a.jobs < 1:
            raise UsageError("--jobs must be positive")
        run = _Run()
        start = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            code, payload = a.func(a, run)
        run.timings["total"] = time.perf_counter() - start
    except UsageError as exc:
        print(f"cliquepack: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, ParseError, DesignError, ValueError) as exc:
        print(f"cliquepack: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, SamplerError) as exc:
        payload = failure("solver", str(exc))
        sys.stdout.write(dumps(payload))
        return EXIT_FAILURE
    sys.stdout.write(dumps(payload))
    if getattr(a, "manifest", None):
        _write_manifest(a, argv, run, code)
    return code


def _write_manifest(a, argv, run: _Run, code: int):
    config = {k: v for k, v in sorted(vars(a).items())
              if k not in ("func", "manifest", "json_schema", "cmd") and v is not None}
    manifest = {
        "subcommand": a.cmd,
        "argv": argv,
        "inputs": run.inputs,
        "seed": a.seed,
        "config": {k: (list(v) if isinstance(v, tuple) else v) for k, v in config.items()},
        "version": __version__,
        "exit_code": code,
        "timings": run.timings,
    }
    Path(a.manifest).write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


if __name__ == "__main__":
    sys.exit(main())
