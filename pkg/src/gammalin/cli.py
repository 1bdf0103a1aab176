"""Command-line front end.

Exit codes: 0 when the command ran (a failing constraint is a finding, not
an error), 1 for usage errors, 2 for bad input data.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import dirac, linearize, linmat, ncalg, numsearch, specdsl
from .exactnum import IncompatibleFieldError, render_scalar

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class InputDataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

def _builtin_witness(name: str) -> tuple[linmat.ExactMatrix, linmat.ExactMatrix]:
    if name == "pauli":
        return linmat.PAULI_X, linmat.PAULI_Z
    if name.startswith("clock") and name[5:].isdigit() and int(name[5:]) >= 2:
        return linmat.clock_shift(int(name[5:]))
    raise InputDataError(f"unknown builtin witness {name!r} (try builtin:pauli or builtin:clock3)")


def load_witness(spec: str) -> tuple[linmat.ExactMatrix, linmat.ExactMatrix]:
    if spec.startswith("builtin:"):
        return _builtin_witness(spec[len("builtin:"):])
    try:
        data = json.loads(Path(spec).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputDataError(f"cannot read witness file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputDataError(f"witness file is not valid JSON: {exc}") from None
    return witness_from_json(data)


def witness_from_json(data: dict) -> tuple[linmat.ExactMatrix, linmat.ExactMatrix]:
    try:
        dim = int(data["dim"])
        field = data.get("field", "rational")
        gx = linmat.ExactMatrix.from_strings(data["gx"], field)
        gy = linmat.ExactMatrix.from_strings(data["gy"], field)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputDataError(f"malformed witness: {exc}") from None
    if gx.dim != dim or gy.dim != dim:
        raise InputDataError(f"witness matrices are not {dim}x{dim}")
    return gx, gy


def witness_to_json(gx: linmat.ExactMatrix, gy: linmat.ExactMatrix) -> dict:
    return {"dim": gx.dim, "field": gx.field, "gx": gx.to_strings(), "gy": gy.to_strings()}


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_triple(args) -> int:
    try:
        t = linmat.build_gamma_triple(args.x, args.y, args.z)
    except linmat.NotATripleError as exc:
        raise InputDataError(str(exc)) from None
    checks = t.invariant_checks()
    payload = {
        "triple": [t.x, t.y, t.z],
        "gx": t.gx.to_strings(),
        "gy": t.gy.to_strings(),
        "gz": t.gz.to_strings(),
        "gz_squared": (t.gz ** 2).to_strings(),
        "trace_gz": render_scalar(t.gz.trace()),
        "det_gz": render_scalar(t.gz.det()),
        "checks": checks,
        "all_passed": all(checks.values()),
    }
    lines = [
        f"triple ({t.x}, {t.y}, {t.z})",
        f"  Gx = {t.gx}",
        f"  Gy = {t.gy}",
        f"  Gz = {t.gz}",
        f"  Gz^2 = {t.gz ** 2}   tr Gz = {payload['trace_gz']}   det Gz = {payload['det_gz']}",
    ]
    lines += [f"  [{'PASS' if ok else 'FAIL'}] {name}" for name, ok in checks.items()]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_permsum(args) -> int:
    try:
        p = ncalg.perm_sum(args.n, args.k)
    except ValueError as exc:
        raise InputDataError(str(exc)) from None
    _emit(args, {"n": args.n, "k": args.k, "terms": len(p), "poly": str(p)}, str(p))
    return EXIT_OK


def cmd_constraints(args) -> int:
    if args.n < 1:
        raise InputDataError("n must be >= 1")
    system = linearize.constraint_system(args.n)
    verdict = linearize.counting_compatibility(args.n)
    payload = {"system": system.to_dict(), "compatibility": verdict.to_dict()}
    lines = [f"constraint system for n = {args.n}"]
    lines += [f"  {c.name}: {c}" for c in system.algebraic_constraints]
    lines.append(f"  conditions counted: {system.counted_equation_count}, unknown matrices: {system.unknown_count}")
    lines.append(f"  verdict: {'compatible' if verdict else 'incompatible'} by equation counting ({verdict.explanation})")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_certify(args) -> int:
    gx, gy = load_witness(args.witness)
    if args.z == 0:
        raise InputDataError("z must be nonzero")
    try:
        report = linearize.certify_solution(args.n, args.x, args.y, args.z, gx, gy)
    except (linmat.ShapeError, IncompatibleFieldError) as exc:
        raise InputDataError(str(exc)) from None
    _emit(args, report.to_dict(), report.render_text())
    return EXIT_OK


def cmd_dirac(args) -> int:
    s = dirac.standard_dirac_set()
    algebra = dirac.verify_dirac_algebra(s)
    clifford = dirac.verify_clifford(s.gammas())
    h2 = dirac.hamiltonian_square_symbolic()
    payload = {
        "algebra": algebra.to_dict(),
        "clifford": clifford.to_dict(),
        "hamiltonian_square": str(h2),
        "signature": list(dirac.MOSTLY_MINUS.diagonal),
    }
    text = "\n".join([algebra.render_text(), clifford.render_text(), f"H^2 reduces to {h2}"])
    _emit(args, payload, text)
    return EXIT_OK


def cmd_search(args) -> int:
    rows = []
    for n in args.n:
        for d in args.d:
            try:
                cfg = numsearch.SearchConfig(
                    n=n, d=d, restarts=args.restarts, max_iters=args.max_iters,
                    tol=args.tol, seed=args.seed, real=args.real,
                )
            except ValueError as exc:
                raise InputDataError(str(exc)) from None
            rows.append(numsearch.search(cfg).to_dict())
    header = f"{'n':>3} {'d':>3} {'mode':>7} {'residual':>12} {'iters':>6} {'restart':>7} {'seed':>6}"
    lines = [header]
    for r in rows:
        mode = "real" if r["real"] else "complex"
        lines.append(f"{r['n']:>3} {r['d']:>3} {mode:>7} {r['residual']:>12.3e} "
                     f"{r['iterations']:>6} {r['restart']:>7} {r['seed']:>6}")
    _emit(args, {"rows": rows}, "\n".join(lines))
    return EXIT_OK


def cmd_run(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputDataError(f"cannot read script: {exc}") from None
    try:
        report = specdsl.run(specdsl.parse(text))
    except specdsl.DslError as exc:
        raise InputDataError(f"{args.file}: {exc}") from None
    _emit(args, report.to_dict(), report.render_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand; the subcommand
    # copy uses SUPPRESS so it never clobbers a value given up front
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)

    parser = _Parser(prog="gammalin", description="Linearized power-sum relations and their matrix witnesses.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("triple", parents=[common], help="build and verify the 2x2 gamma triple for x^2 + y^2 = z^2")
    for name in ("x", "y", "z"):
        p.add_argument(name, type=int)
    p.set_defaults(func=cmd_triple)

    p = sub.add_parser("permsum", parents=[common], help="sum of distinct words with n-k X's and k Y's")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_permsum)

    p = sub.add_parser("constraints", parents=[common], help="constraint system and counting verdict for power n")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_constraints)

    p = sub.add_parser("certify", parents=[common], help="exactly check a candidate (Gx, Gy) pair")
    for name in ("n", "x", "y", "z"):
        p.add_argument(name, type=int)
    p.add_argument("--witness", required=True, help="JSON file, builtin:pauli, or builtin:clock<N>")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("dirac", parents=[common], help="verify the Dirac alpha/beta and gamma algebras")
    p.set_defaults(func=cmd_dirac)

    p = sub.add_parser("search", parents=[common], help="numerical residual search")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--d", type=int, nargs="+", required=True)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--max-iters", type=int, default=10_000)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--real", action="store_true", help="restrict to real matrices")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("run", parents=[common], help="run an .ncs relation script")
    p.add_argument("file")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except InputDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
