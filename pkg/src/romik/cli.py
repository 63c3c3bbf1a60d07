"""Command-line front end: ``romik <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error and 2 on bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import acceptance
from .berggren import TreeNode, Triple, descend, enumerate_bfs, is_funnel, parent, walk_tree
from .dynamics import expand_rational, expand_rational_both, expand_stream
from .errors import RomikError
from .field import parse_qfe
from .lagrange import (
    circular_root,
    construct_periodic,
    count_nkk,
    default_max_iter,
    detect_period,
    galois_check,
    graph_children,
)
from .quadspace import CirclePoint, mat_const, mat_word

FORMATS = ("json", "jsonl", "dot", "csv", "text")


def parse_point(text: str) -> CirclePoint:
    parts = text.split(",")
    if len(parts) != 2:
        raise RomikError(f"expected a point 'x,y', got {text!r}")
    return CirclePoint(parse_qfe(parts[0]), parse_qfe(parts[1]))


def parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def _vec_text(v) -> str:
    return "[" + ", ".join(str(c) for c in v) + "]"


# -- subcommands ----------------------------------------------------------


def cmd_expand(args) -> str:
    p = parse_point(args.point)
    if args.n is not None:
        digits = expand_stream(p, args.n)
        return " ".join(map(str, digits)) if args.format == "text" else _dump(digits)
    if args.both:
        pair = expand_rational_both(p)
        if args.format == "text":
            return "\n".join(str(e) for e in pair)
        return _dump([e.to_json() for e in pair])
    if p.is_rational:
        r = expand_rational(p)
        return str(r) if args.format == "text" else _dump(r.to_json())
    res = detect_period(p, args.max_iter)
    return str(res) if args.format == "text" else _dump(res.to_json())


def _tree_dot(nodes) -> str:
    lines = ["digraph berggren {"]
    for n in nodes:
        name = "_".join(map(str, n.triple))
        lines.append(f'  "{name}" [label="({n.triple.a}, {n.triple.b}, {n.triple.c})"];')
    for n in nodes:
        if n.path:
            a, b, c = n.triple
            par = next(m for m in nodes if m.path == n.path[:-1] and m.root == n.root)
            src = "_".join(map(str, par.triple))
            lines.append(f'  "{src}" -> "{a}_{b}_{c}" [label="M{n.path[-1]}"];')
    lines.append("}")
    return "\n".join(lines)


def cmd_tree(args) -> str:
    fmt = "dot" if args.dot else args.format
    if args.c_max is not None:
        triples = sorted(enumerate_bfs(args.c_max), key=lambda t: (t.c, t))
        nodes = []
        for t in triples:
            steps = descend(t)
            root = steps[-1][0] if steps else t
            path = tuple(reversed([j for _, j in steps]))
            nodes.append((t, path, root))
    else:
        nodes = [(n.triple, n.path, n.root) for n in walk_tree(args.root, args.depth)]
    if fmt == "dot":
        return _tree_dot([TreeNode(t, p, r) for t, p, r in nodes])
    rows = [{"a": t.a, "b": t.b, "c": t.c, "path": list(p), "root": list(r)} for t, p, r in nodes]
    if fmt == "json":
        return _dump(rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "b", "c", "path", "root"])
        for r in rows:
            w.writerow([r["a"], r["b"], r["c"], "".join(map(str, r["path"])), ",".join(map(str, r["root"]))])
        return buf.getvalue().rstrip("\n")
    if fmt == "text":
        return "\n".join(f"{'  ' * len(r['path'])}({r['a']}, {r['b']}, {r['c']})" for r in rows)
    return "\n".join(_dump(r) for r in rows)


def cmd_descend(args) -> str:
    t = Triple(*args.triple)
    steps = descend(t)
    last = steps[-1][0] if steps else t
    terminal, root_digit = parent(last)
    report = is_funnel(t)
    out = {
        "triple": list(t),
        "chain": [{"parent": list(p), "digit": j} for p, j in steps],
        "digits": [j for _, j in steps],
        "root": list(last),
        "terminal": {"vector": list(terminal.vector), "digit": root_digit},
        "funnel": report.to_json(),
    }
    if args.format == "text":
        chain = " <- ".join(f"{tuple(p)} [M{j}]" for p, j in reversed(steps))
        return f"{tuple(t)}" if not steps else f"{chain} <- {tuple(t)}"
    return _dump(out)


def cmd_period(args) -> str:
    p = parse_point(args.point)
    if args.d is not None and p.d not in (0, args.d):
        raise RomikError(f"point lies in Q(sqrt {p.d}), not Q(sqrt {args.d})")
    res = detect_period(p, args.max_iter)
    return str(res) if args.format == "text" else _dump(res.to_json())


def cmd_construct(args) -> str:
    data = construct_periodic(args.word)
    if args.format == "text":
        return (
            f"point = ({data.point.x}, {data.point.y})\n"
            f"lambda1 = {data.lambda1}\nlambda3 = {data.lambda3}\nD = {data.d}"
        )
    return _dump(data.to_json())


def cmd_galois(args) -> str:
    rep = galois_check(args.word, args.max_iter)
    if args.format == "text":
        status = "pass" if rep.passed else "FAIL"
        return (
            f"conjugate = ({rep.conjugate[0]}, {rep.conjugate[1]})\n"
            f"signs {rep.observed_signs} expected {rep.expected_signs}\n"
            f"|conjugate| = {rep.detected}, target period {rep.target}\n{status}"
        )
    return _dump(rep.to_json())


def cmd_count(args) -> str:
    res = count_nkk(args.k, args.d)
    if args.format == "text":
        words = " ".join("".join(map(str, w)) for w in res.witnesses)
        return f"N({args.k}, Q(sqrt {args.d})) = {res.count}\n{words}".rstrip()
    if args.format == "csv":
        return "\n".join(["word"] + ["".join(map(str, w)) for w in res.witnesses])
    return _dump(res.to_json())


def cmd_roots(args) -> str:
    root = circular_root(args.word, not args.no_normalize)
    fmt = "dot" if args.dot else args.format
    if fmt == "dot":
        lines = ["digraph circular_root {"]
        for i, cls in enumerate(root.classes):
            lines.append(f'  c{i} [label="{cls}"];')
        for s, t, j in root.edges:
            lines.append(f'  c{s} -> c{t} [label="M{j}"];')
        if args.depth:
            ids = {tuple(c.representative): f"c{i}" for i, c in enumerate(root.classes)}
            for parent_v, child, j in graph_children(root, args.depth):
                key = tuple(child)
                if key not in ids:
                    ids[key] = f"n{len(ids)}"
                    lines.append(f'  {ids[key]} [label="{_vec_text(child)}"];')
                lines.append(f'  {ids[tuple(parent_v)]} -> {ids[key]} [label="M{j}"];')
        lines.append("}")
        return "\n".join(lines)
    if fmt == "text":
        out = [str(c) for c in root.classes]
        out += [f"{root.classes[s]} --M{j}--> {root.classes[t]}" for s, t, j in root.edges]
        return "\n".join(out)
    return _dump(root.to_json())


def cmd_mat(args) -> str:
    m = mat_word(args.word) if args.word else mat_const(args.name)
    if args.format == "text":
        return "\n".join(" ".join(f"{int(x):>4d}" for x in row) for row in m)
    return _dump([[int(x) for x in row] for row in m])


def cmd_selftest(args) -> tuple[str, int]:
    results = acceptance.run_all()
    lines = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines), 0 if passed == len(results) else 1


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="romik", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, default_format="json"):
        p = sub.add_parser(name, help=help)
        p.add_argument("--format", choices=FORMATS, default=default_format)
        p.set_defaults(func=func)
        return p

    p = add("expand", cmd_expand, "digit expansion of a point")
    p.add_argument("--point", required=True, help='exact point, e.g. "3/5,4/5" or "1/2,√3/2"')
    p.add_argument("--both", action="store_true", help="both endings of a rational point")
    p.add_argument("-n", type=int, help="emit the first N canonical digits")
    p.add_argument("--max-iter", type=int, default=None)

    p = add("tree", cmd_tree, "Berggren tree enumeration", default_format="jsonl")
    p.add_argument("--root", type=parse_ints, default=(3, 4, 5))
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--c-max", type=int, default=None, help="all triples with c <= C from both trees")
    p.add_argument("--dot", action="store_true")

    p = add("descend", cmd_descend, "parent chain of a primitive triple")
    p.add_argument("triple", type=parse_ints)

    p = add("period", cmd_period, "preperiod and period of a quadratic point")
    p.add_argument("--point", required=True)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--max-iter", type=int, default=None)

    p = add("construct", cmd_construct, "purely periodic point of a digit word")
    p.add_argument("--word", type=parse_ints, required=True)

    p = add("galois", cmd_galois, "check the conjugate of a periodic point")
    p.add_argument("--word", type=parse_ints, required=True)
    p.add_argument("--max-iter", type=int, default=None)

    p = add("count", cmd_count, "count length-k words with periodic point over Q(sqrt D)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    p = add("roots", cmd_roots, "circular root of unit classes for a word")
    p.add_argument("--word", type=parse_ints, required=True)
    p.add_argument("--dot", action="store_true")
    p.add_argument("--depth", type=int, default=0, help="grow graph children this deep (DOT only)")
    p.add_argument("--no-normalize", action="store_true")

    p = add("mat", cmd_mat, "print a named matrix or a word product")
    p.add_argument("name", nargs="?", default="M1", choices=["M1", "M2", "M3", "U1", "U2", "U3", "H"])
    p.add_argument("--word", type=parse_ints, default=None)

    add("selftest", cmd_selftest, "run the acceptance criteria", default_format="text")
    return parser


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "max_iter", None) is None and hasattr(args, "max_iter"):
        args.max_iter = default_max_iter()
    try:
        out = args.func(args)
    except (RomikError, ZeroDivisionError) as exc:
        print(f"romik {args.command}: error: {exc}", file=stderr)
        return 1
    code = 0
    if isinstance(out, tuple):
        out, code = out
    print(out, file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
