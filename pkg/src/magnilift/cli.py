"""Command-line front end.

Every subcommand reads JSON (CSV for matrices), calls the same handlers
the HTTP service uses, and prints one JSON document on stdout.  Exit
codes: 0 for definitive results, 2 for inconclusive verdicts, 1 for any
input problem.  Outputs are byte-deterministic for fixed inputs and
seeds; ``--seed`` falls back to the MAGNILIFT_SEED environment variable.
"""

from __future__ import annotations

import argparse
import os
import sys

from pydantic import ValidationError

from . import _jsonio
from .generate import KINDS
from .service import handlers, schemas

_PROG = "magnilift"


class _Parser(argparse.ArgumentParser):
    # the exit-code contract reserves 2 for inconclusive verdicts, so
    # argparse usage errors are remapped to 1
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


class _CliError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _CliError(str(exc)) from exc


def _load_json(path: str):
    import json

    text = _read_text(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _load_csv_rows(path: str, width: int | None = None) -> list:
    """Comma-separated float rows; every row must have the same width."""
    rows = []
    for lineno, line in enumerate(_read_text(path).splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            row = [float(cell) for cell in line.split(",")]
        except ValueError as exc:
            raise _CliError(f"{path}:{lineno}: {exc}") from exc
        if width is not None and len(row) != width:
            raise _CliError(f"{path}:{lineno}: expected {width} columns, got {len(row)}")
        if rows and len(row) != len(rows[0]):
            raise _CliError(f"{path}:{lineno}: ragged row")
        rows.append(row)
    if not rows:
        raise _CliError(f"{path}: no data rows")
    return rows


def _env_seed() -> int:
    raw = os.environ.get("MAGNILIFT_SEED", "0")
    try:
        return int(raw)
    except ValueError as exc:
        raise _CliError(f"MAGNILIFT_SEED must be an integer, got {raw!r}") from exc


def _common_io(sp, with_tol=True):
    sp.add_argument("--input", "-i", default="-", help="input JSON path, or - for stdin")
    sp.add_argument("--output", "-o", default="-", help="output path, default stdout")
    if with_tol:
        sp.add_argument("--tol", type=float, default=None, help="tolerance override")


def _search_flags(sp, default_budget):
    sp.add_argument("--budget", type=int, default=default_budget, help="search budget")
    sp.add_argument("--seed", type=int, default=None, help="search seed (default MAGNILIFT_SEED or 0)")


def build_parser() -> _Parser:
    parser = _Parser(prog=_PROG, description=__doc__.splitlines()[0])
    parser.add_argument("--verbose", "-v", action="count", default=0)
    parser.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker threads; 1 (the default) keeps runs reproducible",
    )
    # the same flags are accepted after the subcommand; SUPPRESS keeps a
    # pre-subcommand occurrence from being clobbered by subparser defaults
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", "-v", action="count", default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("reconstruct-field", parents=[common], help="recover a field from magnitude data")
    _common_io(sp)
    sp.add_argument("--method", choices=("auto", "complete", "propagate"), default="auto")

    sp = sub.add_parser("simplex-graph", parents=[common], help="build the simplex graph of an observation")
    _common_io(sp)

    sp = sub.add_parser("certify-range", parents=[common], help="conjugate retrievability of a matrix range")
    _common_io(sp)
    sp.add_argument("--matrix", help="matrix as CSV rows instead of JSON input")
    sp.add_argument("--vector", help='optional vector CSV, one "re,im" line per entry')
    _search_flags(sp, 100_000)

    sp = sub.add_parser("hat-check", parents=[common], help="retrievability criterion for spline coefficients")
    _common_io(sp)

    sp = sub.add_parser("hat-recover", parents=[common], help="recover coefficient classes from magnitude samples")
    _common_io(sp)

    sp = sub.add_parser("quat-check", parents=[common], help="quaternion retrievability check")
    _common_io(sp)
    sp.add_argument("--candidates", help="JSON file with a list of candidate functions")
    _search_flags(sp, 10_000)

    sp = sub.add_parser("affine-check", parents=[common], help="affine-system injectivity analysis")
    _common_io(sp)
    _search_flags(sp, 200)

    sp = sub.add_parser("gen", parents=[common], help="generate a synthetic instance")
    sp.add_argument("--output", "-o", default="-")
    sp.add_argument("--kind", required=True, choices=KINDS)
    sp.add_argument("--seed", type=int, default=None)
    for name in ("n", "d", "m", "length", "N"):
        sp.add_argument(f"--{name}", type=int, default=None)
    sp.add_argument("--graph", choices=("complete", "cycle", "path"), default=None)

    sp = sub.add_parser("observe", parents=[common], help="compute magnitude data of a field on a graph")
    _common_io(sp, with_tol=False)

    return parser


def _validate(model, payload):
    try:
        return model.model_validate(payload)
    except ValidationError as exc:
        raise _CliError(str(exc)) from exc


def _opt(payload: dict, key: str, value):
    if value is not None:
        payload[key] = value


def _dispatch(args) -> dict:
    seed = args.seed if getattr(args, "seed", None) is not None else _env_seed()

    if args.command == "reconstruct-field":
        payload = {"instance": _load_json(args.input), "method": args.method}
        _opt(payload, "tol", args.tol)
        return handlers.handle_reconstruct(_validate(schemas.ReconstructRequest, payload))

    if args.command == "simplex-graph":
        payload = {"instance": _load_json(args.input)}
        _opt(payload, "tol", args.tol)
        return handlers.handle_simplex_graph(_validate(schemas.SimplexGraphRequest, payload))

    if args.command == "certify-range":
        if args.matrix is not None:
            payload = {"matrix": _load_csv_rows(args.matrix)}
        else:
            body = _load_json(args.input)
            if not isinstance(body, dict) or "matrix" not in body:
                raise _CliError('certify-range JSON input needs a "matrix" key')
            payload = {"matrix": body["matrix"]}
            if body.get("vector") is not None:
                payload["vector"] = body["vector"]
        if args.vector is not None:
            payload["vector"] = _load_csv_rows(args.vector, width=2)
        payload["budget"] = args.budget
        payload["seed"] = seed
        _opt(payload, "tol", args.tol)
        return handlers.handle_certify_range(_validate(schemas.CertifyRangeRequest, payload))

    if args.command == "hat-check":
        payload = {"spline": _load_json(args.input)}
        _opt(payload, "tol", args.tol)
        return handlers.handle_hat_check(_validate(schemas.HatCheckRequest, payload))

    if args.command == "hat-recover":
        payload = {"samples": _load_json(args.input)}
        _opt(payload, "tol", args.tol)
        return handlers.handle_hat_recover(_validate(schemas.HatRecoverRequest, payload))

    if args.command == "quat-check":
        payload = {"function": _load_json(args.input), "budget": args.budget, "seed": seed}
        if args.candidates is not None:
            cands = _load_json(args.candidates)
            if not isinstance(cands, list):
                raise _CliError("--candidates must hold a JSON list of functions")
            payload["candidates"] = cands
        _opt(payload, "tol", args.tol)
        return handlers.handle_quat_check(_validate(schemas.QuatCheckRequest, payload))

    if args.command == "affine-check":
        payload = {"system": _load_json(args.input), "budget": args.budget, "seed": seed}
        _opt(payload, "tol", args.tol)
        return handlers.handle_affine_check(_validate(schemas.AffineCheckRequest, payload))

    if args.command == "gen":
        params = {}
        for name in ("n", "d", "m", "length", "N"):
            _opt(params, name, getattr(args, name))
        _opt(params, "graph", args.graph)
        payload = {"seed": seed, "kind": args.kind, "params": params}
        return handlers.handle_gen(_validate(schemas.GenRequest, payload))

    if args.command == "observe":
        return handlers.handle_observe(_validate(schemas.FieldOnGraph, _load_json(args.input)))

    raise _CliError(f"unknown command {args.command!r}")


def _summary(command: str, result: dict) -> str:
    for key in ("status", "verdict"):
        if key in result:
            extra = result.get("certificate") or result.get("detail") or ""
            return f"{command}: {result[key]}" + (f" ({extra})" if extra else "")
    if "count" in result:
        return f"{command}: {result['count']} class(es)"
    if "retrievable" in result:
        return f"{command}: retrievable={result['retrievable']}"
    if "certified" in result:
        return f"{command}: certified={result['certified']}"
    return f"{command}: ok"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        result = _dispatch(args)
    except (_CliError, handlers.InputError) as exc:
        sys.stderr.write(f"{_PROG}: error: {exc}\n")
        return 1
    text = _jsonio.dumps(result)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            sys.stderr.write(f"{_PROG}: error: {exc}\n")
            return 1
    if args.verbose >= 1:
        sys.stderr.write(_summary(args.command, result) + "\n")
    return handlers.exit_code(result)


if __name__ == "__main__":
    sys.exit(main())
