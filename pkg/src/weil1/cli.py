"""Command-line front end.

Inputs may be inline text, a path to a UTF-8 file, or ``-`` for stdin.
Exit codes: 0 ok, 1 syntax error, 2 validation error, 3 verification
failure, 4 size guard.
"""

from __future__ import annotations

import argparse
import os
import sys

from .rig import Rig
from . import cograph as cg
from . import cotree as ct
from . import dsl
from . import genexpr as ge
from . import morphism as mor
from . import verify as vf

EXIT_OK = 0
EXIT_SYNTAX = 1
EXIT_VALIDATION = 2
EXIT_VERIFICATION = 3
EXIT_TOO_LARGE = 4

_PALETTE = ("red", "blue", "forestgreen", "darkorange", "purple",
            "saddlebrown", "deeppink", "teal")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_input(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _rig(args) -> Rig:
    return Rig(args.rig)


def _guess_kind(text: str) -> str:
    if "|->" in text or (":" in text and "->" in text):
        return "morphism"
    heads = ("comp(", "tensor(", "pair(", "pairat(", "id(", "proj(", "ghat(")
    stripped = text.strip()
    if stripped in ("eps", "eta", "plus", "l", "c") or stripped.startswith(heads):
        return "genexpr"
    return "object"


def cmd_parse(args) -> int:
    text = _read_input(args.input)
    kind = args.kind if args.kind != "auto" else _guess_kind(text)
    if kind == "object":
        print(ct.format_cotree(dsl.parse_object(text)))
    elif kind == "morphism":
        print(dsl.format_morphism(dsl.parse_morphism(text, _rig(args))))
    else:
        print(ge.format_genexpr(dsl.parse_genexpr(text)))
    return EXIT_OK


def cmd_validate(args) -> int:
    f = dsl.parse_morphism(_read_input(args.input), _rig(args))
    print(f"valid: {dsl.format_morphism(f)}")
    return EXIT_OK


def cmd_compose(args) -> int:
    rig = _rig(args)
    f = dsl.parse_morphism(_read_input(args.first), rig)
    g = dsl.parse_morphism(_read_input(args.second), rig)
    print(dsl.format_morphism(mor.compose(g, f), name="g.f"))
    return EXIT_OK


def cmd_decompose(args) -> int:
    rig = _rig(args)
    f = dsl.parse_morphism(_read_input(args.input), rig)
    expr = ge.decompose(f)
    print(ge.format_genexpr(expr))
    if args.check:
        back = ge.evaluate(expr, rig)
        if back != f:
            print(f"roundtrip FAILED: {dsl.format_morphism(back)}", file=sys.stderr)
            return EXIT_VERIFICATION
        print("roundtrip OK")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    expr = dsl.parse_genexpr(_read_input(args.input))
    print(dsl.format_morphism(ge.evaluate(expr, _rig(args))))
    return EXIT_OK


def cmd_kappa(args) -> int:
    tree = dsl.parse_object(_read_input(args.input))
    derived = cg.kappa(ct.realize(tree))
    if args.format == "dot":
        sys.stdout.write(cg.to_dot(derived.graph, derived.labels))
        return EXIT_OK
    print(f"kappa({ct.format_cotree(tree)}): {derived.graph.n} vertices")
    for i, label in enumerate(derived.labels, start=1):
        body = "{" + ",".join(cg.format_mask(m) for m in label) + "}"
        print(f"  {i}: {body}")
    for u, v in sorted(derived.graph.edges):
        print(f"  {u} -- {v}")
    return EXIT_OK


def cmd_cotree(args) -> int:
    g = _parse_graph(_read_input(args.input))
    tree, perm = ct.cotree_decompose(g)
    print(f"object: {ct.format_cotree(tree)}")
    print("relabel: " + " ".join(str(p) for p in perm))
    return EXIT_OK


def _parse_graph(text: str) -> cg.Graph:
    try:
        head, _, rest = text.partition(";")
        n = int(head.strip())
        edges = []
        for piece in rest.replace(",", " ").split():
            u, _, v = piece.partition("-")
            edges.append((int(u), int(v)))
        return cg.graph(n, edges)
    except (ValueError, TypeError) as exc:
        raise dsl.DslSyntaxError(f"bad graph text: {exc}", 1, 1, expected="'n; u-v u-v ...'")


def cmd_hom(args) -> int:
    a = dsl.parse_object(_read_input(args.source))
    b = dsl.parse_object(_read_input(args.target))
    hs = vf.enumerate_hom(a, b)
    print(len(hs))
    if args.format != "lines":
        for f in hs:
            print(dsl.format_morphism(f))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = vf.run_verify(max_vertices=args.max_vertices)
    if args.format == "lines":
        sys.stdout.write(report.format_lines())
    else:
        sys.stdout.write(report.format_text())
    return EXIT_OK if report.all_passed else EXIT_VERIFICATION


def cmd_dot(args) -> int:
    text = _read_input(args.input)
    if args.morphism:
        f = dsl.parse_morphism(text, _rig(args))
        sys.stdout.write(_morphism_dot(f))
        return EXIT_OK
    tree = dsl.parse_object(text)
    g = ct.realize(tree)
    if args.kappa:
        derived = cg.kappa(g)
        sys.stdout.write(cg.to_dot(derived.graph, derived.labels))
    else:
        sys.stdout.write(cg.to_dot(g))
    return EXIT_OK


def _morphism_dot(f: mor.Morphism) -> str:
    """Target graph with one coloured node per circle, linked to its members."""
    g = f.target.graph
    lines = ["graph {"]
    for v in range(1, g.n + 1):
        lines.append(f"  {v};")
    for u, v in sorted(g.edges):
        lines.append(f"  {u} -- {v};")
    for i, p in enumerate(f.images, start=1):
        colour = _PALETTE[(i - 1) % len(_PALETTE)]
        for k, (mask, coeff) in enumerate(p.terms, start=1):
            node = f"c{i}_{k}"
            label = f"x{i}: {cg.format_mask(mask)}"
            if coeff != 1:
                label = f"x{i}: {coeff}*{cg.format_mask(mask)}"
            lines.append(f'  {node} [label="{label}", color={colour}, shape=ellipse];')
            for v in cg.vertices_of(mask):
                lines.append(f"  {node} -- {v} [style=dashed, color={colour}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rig", choices=["bool2", "nat"], default=argparse.SUPPRESS,
                        help="coefficient rig (default bool2)")
    parser = argparse.ArgumentParser(
        prog="weil1",
        description="Exact symbolic kernel for algebras built from W = k[x]/x^2.",
    )
    parser.add_argument("--rig", choices=["bool2", "nat"], default="bool2",
                        help="coefficient rig (default bool2)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and reprint canonically")
    p.add_argument("--kind", choices=["auto", "object", "morphism", "genexpr"], default="auto")
    p.add_argument("input")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("validate", parents=[common], help="check a morphism's relations")
    p.add_argument("input")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("compose", parents=[common],
                       help="compose two morphisms (first, then second)")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("decompose", parents=[common],
                       help="decompose a morphism into generating maps")
    p.add_argument("--check", action="store_true", help="re-evaluate and compare")
    p.add_argument("input")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("evaluate", parents=[common], help="evaluate an expression")
    p.add_argument("input")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("kappa", parents=[common], help="the kappa graph of an object")
    p.add_argument("--format", choices=["text", "dot", "lines"], default="text")
    p.add_argument("input")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("cotree", parents=[common],
                       help="recognise a graph ('n; u-v u-v ...') as a cograph")
    p.add_argument("input")
    p.set_defaults(func=cmd_cotree)

    p = sub.add_parser("hom", parents=[common], help="enumerate a hom-set over bool2")
    p.add_argument("--format", choices=["text", "lines"], default="text")
    p.add_argument("source")
    p.add_argument("target")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("verify", parents=[common], help="run the axiom suite")
    p.add_argument("--max-vertices", type=int, default=2)
    p.add_argument("--format", choices=["text", "lines"], default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dot", parents=[common], help="emit graphviz DOT")
    p.add_argument("--kappa", action="store_true", help="render kappa of the object")
    p.add_argument("--morphism", action="store_true", help="render a morphism's circles")
    p.add_argument("input")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except dsl.DslSyntaxError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    except (mor.MorphismError, cg.NotACograph, ge.IllTyped, ValueError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except vf.TooLarge as exc:
        print(f"too large: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE


if __name__ == "__main__":
    sys.exit(main())
