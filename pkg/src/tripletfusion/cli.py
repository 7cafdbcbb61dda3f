"""Command line interface.

Exit status: 0 on success, 1 when a verification check fails, 2 for usage,
parameter or label errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cache import dumps_canonical, save_table, table_payload
from .catalog import (
    AlgebraParams,
    K,
    KStar,
    Minimal,
    P,
    Q,
    Simple,
    block_of,
    enumerate_basis,
    parse_label,
)
from .errors import CacheCorruption, FusionError
from .vectors import IntVector


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def latex_label(m) -> str:
    if isinstance(m, Simple):
        return f"X^{m.eps}_{{{m.r},{m.s}}}"
    if isinstance(m, KStar):
        return f"K^*_{{{m.r},{m.s}}}"
    if isinstance(m, K):
        return f"K_{{{m.r},{m.s}}}"
    if isinstance(m, Minimal):
        return f"L(h_{{{m.r},{m.s}}})"
    if isinstance(m, Q):
        return f"Q(X^{m.eps}_{{{m.a},{m.b}}})_{{{m.c},{m.d}}}"
    if isinstance(m, P):
        return f"P^{m.eps}_{{{m.r},{m.s}}}"
    raise TypeError(m)


def latex_vector(v: IntVector) -> str:
    parts = [latex_label(m) if k == 1 else f"{k} {latex_label(m)}" for m, k in v.items()]
    return " \\oplus ".join(parts) if parts else "0"


def _params_json(params: AlgebraParams) -> dict:
    return {"p_plus": params.p_plus, "p_minus": params.p_minus}


def _envelope(command: str, params: AlgebraParams, **body) -> dict:
    doc = {"command": command, "params": _params_json(params)}
    doc.update(body)
    return doc


def _vector_json(v) -> list:
    return [[str(m), k] for m, k in v.items()]


def _emit_json(doc) -> None:
    sys.stdout.write(json.dumps(doc, sort_keys=True, indent=1) + "\n")


# --------------------------------------------------------------------------
# tables
# --------------------------------------------------------------------------


def _load_or_build(params: AlgebraParams, ring: str):
    from .fusion_engine import compute_structure_table, structure_constants
    from .grothendieck import compute_k_table, k_structure_constants

    loader = structure_constants if ring == "P" else k_structure_constants
    try:
        return loader(params)
    except CacheCorruption as exc:
        print(f"warning: {exc}; recomputing", file=sys.stderr)
        table = compute_structure_table(params) if ring == "P" else compute_k_table(params)
        save_table(table)
        return table


def emit_table(params: AlgebraParams, ring: str = "P", fmt: str = "json") -> str:
    """Serialized table; identical inputs give identical bytes."""
    table = _load_or_build(params, ring)
    if fmt == "json":
        doc = _envelope("table", params, ring=ring, **table_payload(table))
        return dumps_canonical(doc)
    lines = []
    for (i, j), row in sorted(table.constants().items()):
        a, b = table.basis[i], table.basis[j]
        v = IntVector.from_indices(params, ring, row)
        if fmt == "latex":
            lines.append(f"{latex_label(a)} \\boxtimes {latex_label(b)} = {latex_vector(v)}")
        else:
            lines.append(f"{a} x {b} = {v}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_catalog(args, params):
    basis = enumerate_basis(params, args.ring)
    rows = [(str(m), str(block_of(params, m))) for m in basis]
    if args.json:
        _emit_json(
            _envelope(
                "catalog",
                params,
                ring=args.ring,
                central_charge=str(params.central_charge),
                basis=[{"label": lbl, "block": blk} for lbl, blk in rows],
            )
        )
        return 0
    print(f"# c = {params.central_charge}, {len(rows)} labels in {args.ring}")
    width = max(len(lbl) for lbl, _ in rows)
    for i, (lbl, blk) in enumerate(rows):
        print(f"{i:4d}  {lbl:<{width}}  {blk}")
    return 0


def _fuse_result(params, ring, a_text, b_text):
    from .fusion_engine import fuse, minimal_fusion, mixed_minimal_fusion
    from .grothendieck import kfuse

    if ring == "K":
        a = parse_label(params, a_text, interior_plus=True)
        b = parse_label(params, b_text, interior_plus=True)
        return a, b, kfuse(params, a, b)
    a = parse_label(params, a_text)
    b = parse_label(params, b_text)
    if ring == "MINIMAL":
        for m in (a, b):
            if not isinstance(m, Minimal):
                raise UsageError(f"{m} is not a minimal label; the MINIMAL ring takes L[r,s] labels")
        return a, b, minimal_fusion(params, (a.r, a.s), (b.r, b.s))
    if isinstance(a, Minimal) or isinstance(b, Minimal):
        m, kac = (b, a) if isinstance(a, Minimal) else (a, b)
        return a, b, mixed_minimal_fusion(params, m, (kac.r, kac.s))
    return a, b, fuse(params, a, b)


def cmd_fuse(args, params):
    a, b, result = _fuse_result(params, args.ring, args.left, args.right)
    if args.json:
        payload = str(result) if not isinstance(result, IntVector) else _vector_json(result)
        _emit_json(_envelope("fuse", params, ring=args.ring, left=str(a), right=str(b), result=payload))
    elif args.latex:
        rhs = latex_vector(result) if isinstance(result, IntVector) else f"\\text{{{result}}}"
        print(f"{latex_label(a)} \\boxtimes {latex_label(b)} = {rhs}")
    else:
        print(result)
    return 0


def cmd_table(args, params):
    if args.ring == "MINIMAL":
        raise UsageError("table supports --ring P or K")
    fmt = "json" if args.json else ("latex" if args.latex else "text")
    sys.stdout.write(emit_table(params, args.ring, fmt))
    return 0


def cmd_gr(args, params):
    from .grothendieck import gr

    m = parse_label(params, args.label)
    v = gr(params, m)
    if args.json:
        _emit_json(_envelope("gr", params, label=str(m), result=_vector_json(v)))
    else:
        print(v)
    return 0


def cmd_kfuse(args, params):
    from .grothendieck import kfuse

    a = parse_label(params, args.left, interior_plus=True)
    b = parse_label(params, args.right, interior_plus=True)
    v = kfuse(params, a, b)
    if args.json:
        _emit_json(_envelope("kfuse", params, left=str(a), right=str(b), result=_vector_json(v)))
    else:
        print(v)
    return 0


def cmd_verify(args, params):
    from .fusion_engine import verify_engine
    from .grothendieck import verify_K

    reports = [verify_engine(params, level=args.level), verify_K(params, level=args.level)]
    ok = all(r.ok for r in reports)
    if args.json:
        _emit_json(_envelope("verify", params, level=args.level, ok=ok, reports=[r.to_json() for r in reports]))
    else:
        for r in reports:
            for line in r.lines():
                print(line)
        print("OK" if ok else "FAILED")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tripletfusion", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(name, help_text, latex=False, ring=None):
        sp = sub.add_parser(name, help=help_text, allow_abbrev=False)
        sp.add_argument("--p", "--p-plus", dest="p_plus", type=int, required=True, help="p+")
        sp.add_argument("--q", "--p-minus", dest="p_minus", type=int, required=True, help="p-")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if latex:
            sp.add_argument("--latex", action="store_true", help="LaTeX decomposition lines")
        if ring:
            sp.add_argument("--ring", type=str.upper, choices=ring, default=ring[0])
        return sp

    sp = common("catalog", "list basis labels and their blocks", ring=["P", "K", "MINIMAL"])
    sp.set_defaults(func=cmd_catalog)

    sp = common("fuse", "fusion product of two labels", latex=True, ring=["P", "K", "MINIMAL"])
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(func=cmd_fuse)

    sp = common("table", "full structure table", latex=True, ring=["P", "K"])
    sp.set_defaults(func=cmd_table)

    sp = common("gr", "composition factors of a ring basis element")
    sp.add_argument("label")
    sp.set_defaults(func=cmd_gr)

    sp = common("kfuse", "product of two simples in the Grothendieck ring")
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(func=cmd_kfuse)

    sp = common("verify", "run the verification suites")
    sp.add_argument("--level", choices=["quick", "full"], default="quick")
    sp.set_defaults(func=cmd_verify)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if getattr(args, "json", False) and getattr(args, "latex", False):
            raise UsageError("--json and --latex are mutually exclusive")
        params = AlgebraParams(args.p_plus, args.p_minus)
        return args.func(args, params)
    except (UsageError, FusionError) as exc:
        print(f"tripletfusion: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
