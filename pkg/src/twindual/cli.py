"""Command-line entry point.

Subcommands: admissible, rep, density, diagrams, action, duality.  Reports
are emitted as JSON (schema 1) by default, with pretty and CSV modes.

Exit codes: 0 all requested checks pass; 1 a check failed (the report
carries the witness); 2 usage or parameter domain error; 3 the parameter q
was refused as inadmissible (pass --force to proceed anyway).
"""

from __future__ import annotations

import argparse
import csv as csv_module
import io
import json
import sys

from . import density as density_mod
from . import diagrams as diagrams_mod
from . import duality as duality_mod
from . import hecke as hecke_mod
from . import tensor_action as tensor_mod
from .cache import MatrixCache, cache_key
from .scalars import (
    DomainError,
    QContext,
    is_q_admissible,
    parse_rational,
    rational_sqrt,
    scalar_to_json,
)

SCHEMA = 1


class UsageError(Exception):
    pass


def _add_q_arguments(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, required=True, help="dimension n >= 2")
    p.add_argument("--q", type=str, help="rational q as p/q or an integer")
    p.add_argument("--sqrt-q", type=str, help="rational square root of q (exact mode)")
    p.add_argument("--approx", type=str, metavar="RE,IM",
                   help="complex q; switches to approx mode")
    p.add_argument("--mode", choices=["exact", "approx"], default="exact",
                   help="scalar mode for rational q (default exact)")
    p.add_argument("--tolerance", type=float, default=1e-9,
                   help="approx comparison/rank tolerance (default 1e-9)")


def _add_output_arguments(p: argparse.ArgumentParser):
    p.add_argument("--output", choices=["json", "pretty", "csv"], default="json")
    p.add_argument("--out", type=str, help="write the report to this file instead of stdout")
    p.add_argument("--cache-dir", type=str, help="matrix cache directory (or $TWINDUAL_CACHE)")


def build_qcontext(args) -> QContext:
    if args.approx:
        try:
            re_s, im_s = (args.approx.split(",") + ["0"])[:2] if "," in args.approx else (args.approx, "0")
            q = complex(float(re_s), float(im_s))
        except ValueError as exc:
            raise UsageError(f"cannot parse --approx {args.approx!r}: {exc}") from None
        return QContext.approx(q, tolerance=args.tolerance)
    if not args.q:
        raise UsageError("--q is required (or --approx for a complex value)")
    q = parse_rational(args.q)
    if args.sqrt_q:
        s = parse_rational(args.sqrt_q)
        if s * s != q:
            raise UsageError(f"(--sqrt-q)^2 = {s * s} != {q}")
    else:
        s = rational_sqrt(q)
        if s is None:
            raise UsageError(f"q = {q} is not a perfect rational square; pass --sqrt-q or --approx")
    if args.mode == "approx":
        return QContext.approx_from_exact(s, tolerance=args.tolerance)
    return QContext.exact(s)


def build_repcontext(args) -> hecke_mod.RepContext:
    return hecke_mod.RepContext(args.n, build_qcontext(args))


def emit(payload: dict, args) -> None:
    if args.output == "json":
        text = json.dumps(payload, sort_keys=True, indent=2)
    elif args.output == "pretty":
        text = _pretty(payload)
    else:
        text = _csv(payload)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _pretty(payload, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(payload, dict):
        for k, v in payload.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(payload, list):
        for v in payload:
            if isinstance(v, (dict, list)):
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{payload}")
    return "\n".join(lines)


def _csv(payload: dict) -> str:
    rows = payload.get("csv_rows")
    if not rows:
        raise UsageError("csv output is only available for duality sweeps")
    buf = io.StringIO()
    writer = csv_module.DictWriter(buf, fieldnames=list(rows[0].keys()))
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue().rstrip("\n")


# -- subcommands -------------------------------------------------------------


def cmd_admissible(args):
    qc = build_qcontext(args)
    report = is_q_admissible(qc, args.n)
    payload = {"schema": SCHEMA, "command": "admissible", "report": report.to_json(),
               "ok": report.admissible}
    return payload, report.admissible


REP_CHECKS = ("hecke", "twin", "braid-dev", "projection", "appendix")


def cmd_rep(args):
    rc = build_repcontext(args)
    wanted = args.check or list(REP_CHECKS)
    reports = []
    for name in wanted:
        if name == "hecke":
            reports.append(hecke_mod.hecke_quadratic_check(rc))
            reports.append(hecke_mod.hecke_braid_check(rc))
        elif name == "twin":
            reports.append(hecke_mod.check_twin_relations(rc))
            reports.append(hecke_mod.orthogonality_check(rc))
        elif name == "braid-dev":
            if rc.n >= 3:
                reports.append(hecke_mod.braid_deviation_check(rc))
        elif name == "projection":
            reports.append(hecke_mod.projection_check(rc))
        elif name == "appendix":
            reports.append(hecke_mod.appendix_check(rc))
        else:
            raise UsageError(f"unknown rep check {name!r}")
    ok = all(r.ok for r in reports)
    payload = {"schema": SCHEMA, "command": "rep", "n": args.n,
               "q": scalar_to_json(rc.q), "mode": rc.mode,
               "reports": [r.to_json() for r in reports], "ok": ok}
    return payload, ok


DENSITY_CHECKS = ("rodrigues", "powers", "order", "independence", "alt")


def cmd_density(args):
    rc = build_repcontext(args)
    wanted = args.check or list(DENSITY_CHECKS)
    payload = {"schema": SCHEMA, "command": "density", "n": args.n,
               "q": scalar_to_json(rc.q), "mode": rc.mode}
    ok = True
    reports = []
    for name in wanted:
        if name == "rodrigues":
            for i in range(1, rc.n - 1):
                reports.append(density_mod.rotation_block_check(i, rc))
                reports.append(density_mod.rodrigues_check(i, rc))
        elif name == "powers":
            for i in range(1, rc.n - 1):
                for k in range(1, args.k_powers + 1):
                    reports.append(density_mod.power_formula_check(i, k, rc))
        elif name == "order":
            orders = [density_mod.finite_order_detect(i, rc, args.kmax).to_json()
                      for i in range(1, rc.n - 1)]
            payload["orders"] = orders
            ok = ok and all(o["agree"] for o in orders)
        elif name == "independence":
            rep = density_mod.independence_test(rc)
            payload["independence"] = rep.to_json()
            ok = ok and (rep.independent or not rep.hypothesis_ok)
        elif name == "alt":
            rep = density_mod.alt_density_check(rc, args.kmax)
            payload["alt_density"] = rep.to_json()
        else:
            raise UsageError(f"unknown density check {name!r}")
    ok = ok and all(r.ok for r in reports)
    if reports:
        payload["reports"] = [r.to_json() for r in reports]
    payload["ok"] = ok
    return payload, ok


def _parse_scalar_arg(text: str):
    if "," in text:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    return parse_rational(text)


def cmd_diagrams(args):
    payload = {"schema": SCHEMA, "command": "diagrams", "r": args.r}
    ok = True
    counts = {}
    for family in ("all", "brauer", "rook", "permutation"):
        counts[family] = len(diagrams_mod.enumerate_diagrams(args.r, family))
    payload["counts"] = counts
    if args.list_family:
        payload["diagrams"] = [d.to_text() for d in diagrams_mod.enumerate_diagrams(args.r, args.list_family)]
    if args.verify_presentation:
        delta = _parse_scalar_arg(args.delta)
        delta_prime = _parse_scalar_arg(args.delta_prime)
        rep = diagrams_mod.verify_presentation(args.r, delta, delta_prime)
        payload["presentation"] = rep.to_json()
        ok = ok and rep.ok
    if args.scaling_check:
        delta = _parse_scalar_arg(args.delta)
        delta_prime = _parse_scalar_arg(args.delta_prime)
        rep = diagrams_mod.scaling_iso_check(args.r, delta, delta_prime)
        payload["scaling_isomorphism"] = rep.to_json()
        ok = ok and rep.ok
    payload["ok"] = ok
    return payload, ok


def cmd_action(args):
    rc = build_repcontext(args)
    tc = tensor_mod.TensorContext(rc, args.r, tensor_mod.SPACE_FULL)
    delta_prime = _parse_scalar_arg(args.delta_prime)
    cache = MatrixCache(args.cache_dir)
    emitted = {}
    for spec in args.emit:
        kind, _, detail = spec.partition(":")
        basis = "split" if rc.mode == "exact" else "u"
        key = cache_key(command="action", kind=kind, detail=detail, n=rc.n,
                        q=rc.q, sqrt_q=rc.s, r=args.r, basis=basis, mode=rc.mode,
                        tolerance=rc.tol if rc.mode == "approx" else "",
                        delta_prime=delta_prime)
        if kind == "s":
            builder = lambda: tensor_mod.place_swap(int(detail), tc)
        elif kind == "e":
            builder = lambda: tensor_mod.contraction_operator(int(detail), tc)
        elif kind == "p":
            builder = lambda: tensor_mod.slot_projection(int(detail), tc, delta_prime)
        elif kind == "diagram":
            diagram = diagrams_mod.PartialDiagram.from_text(args.r, detail)
            builder = lambda: tensor_mod.diagram_matrix(diagram, tc, delta_prime)
        else:
            raise UsageError(f"unknown emit spec {spec!r}")
        matrix = cache.get_or_build(key, builder)
        emitted[spec] = matrix.to_json()
    payload = {"schema": SCHEMA, "command": "action", "n": rc.n, "r": args.r,
               "mode": rc.mode, "matrices": emitted, "ok": True}
    return payload, True


def _run_one_duality(args, r, dp):
    # a fresh context per task keeps the worker pool free of shared caches
    rc = build_repcontext(args)
    if args.on == "E":
        return duality_mod.schur_weyl_check(
            rc, r, dp, center=args.center, reverse=args.reverse,
            force=args.force, big=args.big, max_word_len=args.max_word_len)
    return duality_mod.brauer_duality_check(
        rc, r, force=args.force, reverse=args.reverse, big=args.big,
        max_word_len=args.max_word_len)


def cmd_duality(args):
    build_qcontext(args)  # validate parameters before dispatching workers
    r_values = [int(x) for x in str(args.r).split(",")]
    delta_primes = [_parse_scalar_arg(x) for x in args.delta_prime.split(";")]
    configs = [(r, dp) for r in r_values for dp in delta_primes]
    if len(configs) == 1:
        reports = [_run_one_duality(args, *configs[0])]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=min(4, len(configs))) as pool:
            reports = list(pool.map(lambda cfg: _run_one_duality(args, *cfg), configs))
    rc = build_repcontext(args)
    ok = all(rep.ok for rep in reports)
    payload = {"schema": SCHEMA, "command": "duality", "n": rc.n,
               "q": scalar_to_json(rc.q), "mode": rc.mode,
               "reports": [rep.to_json() for rep in reports],
               "csv_rows": [rep.csv_row() for rep in reports],
               "ok": ok}
    return payload, ok


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twindual",
        description="Twin-group reflection representations, partial Brauer "
                    "diagram algebras, and duality certification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("admissible", help="check the duality hypotheses for q")
    _add_q_arguments(p)
    _add_output_arguments(p)
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("rep", help="relation checks for the representation matrices")
    _add_q_arguments(p)
    _add_output_arguments(p)
    p.add_argument("--check", action="append", choices=list(REP_CHECKS),
                   help="which suites to run (default: all)")
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("density", help="rotation, order, and independence checks")
    _add_q_arguments(p)
    _add_output_arguments(p)
    p.add_argument("--check", action="append", choices=list(DENSITY_CHECKS))
    p.add_argument("--kmax", type=int, default=2000, help="order search bound")
    p.add_argument("--k-powers", type=int, default=20, dest="k_powers",
                   help="verify the power formula for k = 1..K")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("diagrams", help="diagram enumeration and presentation checks")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--verify-presentation", action="store_true")
    p.add_argument("--scaling-check", action="store_true")
    p.add_argument("--delta", type=str, default="1")
    p.add_argument("--delta-prime", type=str, default="1")
    p.add_argument("--list", dest="list_family",
                   choices=["all", "brauer", "rook", "permutation"],
                   help="include the diagrams of this family in the report")
    _add_output_arguments(p)
    p.set_defaults(func=cmd_diagrams)

    p = sub.add_parser("action", help="emit tensor-space operator matrices")
    _add_q_arguments(p)
    _add_output_arguments(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--delta-prime", type=str, default="1")
    p.add_argument("--emit", action="append", required=True,
                   metavar="KIND:DETAIL", help="s:i | e:i | p:j | diagram:TEXT")
    p.set_defaults(func=cmd_action)

    p = sub.add_parser("duality", help="double-centralizer verification")
    _add_q_arguments(p)
    _add_output_arguments(p)
    p.add_argument("--r", type=str, required=True, help="tensor power, or comma list for a sweep")
    p.add_argument("--delta-prime", type=str, default="1",
                   help="semicolon-separated list of delta' values")
    p.add_argument("--on", choices=["E", "F"], default="E")
    p.add_argument("--center", action="store_true", help="also compute the center dimension")
    p.add_argument("--reverse", choices=["auto", "on", "off"], default="auto")
    p.add_argument("--force", action="store_true", help="run even at inadmissible q")
    p.add_argument("--big", action="store_true", help="allow large exact eliminations")
    p.add_argument("--max-word-len", type=int, default=12)
    p.set_defaults(func=cmd_duality)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, ok = args.func(args)
    except duality_mod.InadmissibleParameterError as exc:
        refusal = {"schema": SCHEMA, "command": args.command, "refused": True,
                   "reason": str(exc), "report": exc.report.to_json(),
                   "hint": "pass --force to run anyway"}
        print(json.dumps(refusal, sort_keys=True, indent=2), file=sys.stderr)
        return 3
    except (UsageError, DomainError) as exc:
        print(f"twindual: error: {exc}", file=sys.stderr)
        return 2
    emit(payload, args)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
