"""Command-line front end: ``python -m emptysimplex <command> ...``.

Exit codes: 0 success, 1 a mathematical check failed (a witness is
printed), 2 bad usage, bad parameters or resource limits.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import Any, Sequence

from .errors import EmptySimplexError, ParameterError, ResourceLimitError
from .family import (
    FamilyParams,
    build_simplex,
    idp_failure,
    idp_failure_witness,
    verify_decomposition,
    w_points,
)
from .lattice import box_points, delta_polynomial, enumerate_dilation_points, normalized_volume

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def _parse_a(values: Sequence[str] | None) -> tuple[int, ...] | None:
    if not values:
        return None
    out = []
    for v in values:
        for part in v.split(","):
            part = part.strip()
            if part:
                try:
                    out.append(int(part))
                except ValueError:
                    raise UsageError(f"-a expects integers, got {part!r}") from None
    return tuple(out)


def _params(args) -> FamilyParams:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        params = FamilyParams.create(args.k, args.m, _parse_a(args.a))
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return params


def _progress(args):
    if args.quiet:
        return lambda msg: None
    return lambda msg: print(f"[{args.command}] {msg}", file=sys.stderr, flush=True)


# ------------------------------------------------------------------ commands

def cmd_simplex(args) -> tuple[dict, int]:
    params = _params(args)
    S = build_simplex(params)
    delta = delta_polynomial(S)
    return {
        "params": _params_json(params),
        "vertices": [list(v) for v in S.vertices],
        "delta": list(delta.coeffs),
        "delta_text": str(delta),
        "normalized_volume": normalized_volume(S),
        "w_points": [list(w) for w in w_points(params)],
        "box_points": [{"point": list(p), "height": h} for p, h in box_points(S)],
        "lattice_points": len(enumerate_dilation_points(S, 1)),
    }, 0


def cmd_points(args) -> tuple[dict, int]:
    params = _params(args)
    n = args.n if args.n is not None else params.k
    S = build_simplex(params)
    pts = enumerate_dilation_points(S, n)
    data = {"params": _params_json(params), "n": n, "count": len(pts),
            "ehrhart_from_delta": delta_polynomial(S).ehrhart(n)}
    if not args.count_only:
        data["points"] = [list(p) for p in pts]
    if n >= params.k:
        rep = verify_decomposition(params, n)
        data["decomposition"] = {"ok": rep.ok, "sumset_part": rep.sumset_size, "w_part": rep.w_part_size}
    status = 0 if data["count"] == data["ehrhart_from_delta"] and data.get("decomposition", {}).get("ok", True) else 1
    return data, status


def cmd_idp(args) -> tuple[dict, int]:
    params = _params(args)
    say = _progress(args)
    S = build_simplex(params)
    depth = args.depth if args.depth is not None else max(2, params.d - 1)
    nmax = args.nmax if args.nmax is not None else params.k + 1
    rows, status = [], 0
    for n in range(1, nmax + 1):
        say(f"n = {n}")
        fail = idp_failure(S, n, depth)
        row: dict[str, Any] = {"n": n, "idp": fail is None, "expected": n >= params.k}
        if fail is not None:
            row["failure"] = {"summands": fail[0], "point": list(fail[1])}
        if n < params.k:
            row["witness"] = list(idp_failure_witness(params, n))
        if row["idp"] != row["expected"]:
            status = 1
        rows.append(row)
    return {"params": _params_json(params), "depth": depth, "threshold": params.k, "rows": rows}, status


def cmd_gb(args) -> tuple[dict, int]:
    from .families import check_scale, generate_G, sufficiency_pipeline

    say = _progress(args)
    if args.a and any(x != 1 for x in _parse_a(args.a)):
        raise ParameterError("a = (1, ..., 1)", "the explicit Gröbner basis exists only for P(1, ..., 1, m)")
    check_scale(args.k, args.budget)
    G = generate_G(args.k, args.m)
    rep = sufficiency_pipeline(args.k, args.m, args.maxdeg, args.budget, G=G, progress=say)
    data = rep.to_json()
    if args.show_basis:
        data["basis"] = G.to_json()["parts"]
    return data, 0 if rep.ok else 1


def cmd_triangulate(args) -> tuple[dict, int]:
    from .families import check_scale, generate_G
    from .groebner import buchberger_check, initial_ideal_generators, is_squarefree
    from .monomials import CompositeOrder
    from .triangulation import complex_from_initial_ideal, verify_triangulation

    say = _progress(args)
    check_scale(args.k, args.budget)
    say("generating G")
    G = generate_G(args.k, args.m)
    order = CompositeOrder(G.cat)
    say("checking S-pairs")
    if not buchberger_check(G.members(), order).ok:
        return {"error": "G is not a Gröbner basis"}, 1
    gens = initial_ideal_generators(G.members(), order)
    if not is_squarefree(gens):
        return {"error": "initial ideal is not squarefree"}, 1
    say("extracting cells")
    cx = complex_from_initial_ideal(G.cat, gens)
    rep = verify_triangulation(cx)
    data = {"k": args.k, "m": args.m, "triangulation": cx.to_json(), "report": rep.summary(),
            "witness": rep.first_witness()}
    return data, 0 if rep.ok else 1


def cmd_obstruct(args) -> tuple[dict, int]:
    from .obstruction import build_certificate

    params = _params(args)
    _progress(args)("building certificate")
    cert = build_certificate(params)
    return cert.to_json(), 0 if cert.ok else 1


def cmd_verify_certificate(args) -> tuple[dict, int]:
    from .obstruction import check_certificate

    try:
        with open(args.file, encoding="utf-8") if args.file != "-" else sys.stdin as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read certificate: {exc}") from None
    data = data.get("certificate", data)
    res = check_certificate(data)
    return {"ok": res.ok, "problems": res.problems}, 0 if res.ok else 1


def _params_json(p: FamilyParams) -> dict:
    return {"k": p.k, "m": p.m, "a": list(p.a), "d": p.d, "label": p.label()}


# ------------------------------------------------------------------- output

def _text(data: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(data, dict):
        for key in sorted(data):
            val = data[key]
            if isinstance(val, (dict, list)) and val and not _flat(val):
                lines.append(f"{pad}{key}:")
                lines += _text(val, indent + 1)
            else:
                lines.append(f"{pad}{key}: {_scalar(val)}")
    elif isinstance(data, list):
        for item in data:
            if isinstance(item, (dict, list)) and not _flat(item):
                lines.append(f"{pad}-")
                lines += _text(item, indent + 1)
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(pad + _scalar(data))
    return lines


def _flat(val) -> bool:
    if isinstance(val, list):
        return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in val)
    return False


def _scalar(val) -> str:
    if isinstance(val, list):
        return "(" + ", ".join(_scalar(x) for x in val) + ")"
    if isinstance(val, dict):
        return "{}"
    if val is None:
        return "-"
    return str(val)


def render(data: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return "\n".join(_text(data)) + "\n"


# ------------------------------------------------------------------- parser

COMMANDS = {
    "simplex": cmd_simplex,
    "points": cmd_points,
    "idp": cmd_idp,
    "gb": cmd_gb,
    "triangulate": cmd_triangulate,
    "obstruct": cmd_obstruct,
    "verify-certificate": cmd_verify_certificate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--output", "-o", help="write data here instead of stdout")
    common.add_argument("--quiet", "-q", action="store_true", help="no progress on stderr")

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("-k", type=int, required=True, help="k >= 2; the dimension is 2k-1")
    fam.add_argument("-m", type=int, required=True, help="m >= 2")
    fam.add_argument("-a", nargs="+", help="a_1 .. a_{k-1}, space or comma separated (default all 1)")

    budget = argparse.ArgumentParser(add_help=False)
    budget.add_argument("--budget", type=int, help="resource budget for k*C(d+k,k) (default 200)")

    parser = argparse.ArgumentParser(prog="emptysimplex",
                                     description="Empty simplices P(a_1..a_{k-1}, m): IDP, Gröbner bases, triangulations")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simplex", parents=[common, fam], help="vertices, delta-vector, volume, w-points")
    p = sub.add_parser("points", parents=[common, fam], help="lattice points of nP")
    p.add_argument("-n", type=int, help="dilation factor (default k)")
    p.add_argument("--count-only", action="store_true")
    p = sub.add_parser("idp", parents=[common, fam], help="IDP of nP for n = 1..nmax")
    p.add_argument("--depth", type=int, help="number of summands checked (default d-1)")
    p.add_argument("--nmax", type=int, help="largest n (default k+1)")
    p = sub.add_parser("gb", parents=[common, fam, budget], help="certify the explicit Gröbner basis for P(1..1, m)")
    p.add_argument("--maxdeg", type=int, default=3, help="Hilbert comparison up to this degree")
    p.add_argument("--show-basis", action="store_true", help="include the basis in the output")
    sub.add_parser("triangulate", parents=[common, fam, budget], help="export the unimodular triangulation of kP")
    sub.add_parser("obstruct", parents=[common, fam], help="certificate that kP has no regular unimodular triangulation")
    p = sub.add_parser("verify-certificate", parents=[common], help="re-check a certificate JSON file")
    p.add_argument("file", help="certificate path, or - for stdin")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        data, status = COMMANDS[args.command](args)
    except (UsageError, ParameterError, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EmptySimplexError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return 1
    data = {"schema_version": SCHEMA_VERSION, "command": args.command, **data}
    text = render(data, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())
