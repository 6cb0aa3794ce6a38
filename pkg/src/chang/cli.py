"""Command-line front end.

Exit codes: 0 success; 1 verification failure; 2 usage, parse or semantic
error; 3 query outside the classified tables (unclassified pair,
untabulated hom group, unknown composition).
"""

from __future__ import annotations

import argparse
import json
import sys

from .complexes import WindowError, dual
from .homology import cyclic_label
from .homgroups import UntabulatedHom, hom_group, wedge_hom_order
from .matrix import (UnknownComposition, matrix_from_json, render_matrix,
                     run_script, split_cone, steps_from_json)
from .parser import (ParseError, SemanticError, homology_of_expression,
                     lower, parse_expression, sqmodule_of_expression)
from .smash import UnclassifiedPair, VerificationFailure, smash_decompose
from .verify import check_decomposition

__all__ = ["main", "run_command", "entry"]


def _emit(lines, fmt, pairs):
    """text mode prints `lines`; structured mode prints `key = value` pairs."""
    if fmt == "structured":
        return [f"{k} = {v}" for k, v in pairs]
    return lines


def _group_str(orders) -> str:
    if not orders:
        return "0"
    return " ⊕ ".join(cyclic_label(q) for q in orders)


def _cmd_smash(args) -> tuple[int, list[str]]:
    X = lower(parse_expression(args.x))
    Y = lower(parse_expression(args.y))
    res = smash_decompose(X, Y)
    v = res.verification
    lines = [str(res.output)]
    for pair, rule in res.branches:
        lines.append(f"branch: {pair} -> {rule}")
    lines.append(f"verified: homology {'ok' if v.homology_match else 'FAIL'},"
                 f" mod2 {'ok' if v.mod2_match else 'FAIL'}")
    pairs = [("command", "smash"), ("input.x", str(X)), ("input.y", str(Y)),
             ("output", str(res.output))]
    pairs += [(f"branch.{i}", f"{p} -> {r}")
              for i, (p, r) in enumerate(res.branches)]
    pairs += [("verify.homology", str(v.homology_match).lower()),
              ("verify.mod2", str(v.mod2_match).lower()),
              ("verify.sq_invariants", str(v.sq_invariants_match).lower())]
    code = 0 if (v.homology_match and v.mod2_match) else 1
    return code, _emit(lines, args.format, pairs)


def _cmd_homology(args):
    h = homology_of_expression(parse_expression(args.expr))
    degs = h.degrees()
    lines = [f"H_{d} = " + _group_str(h[d]) for d in degs] or ["0"]
    pairs = [("command", "homology"), ("input", args.expr.strip())]
    pairs += [(f"H.{d}", _group_str(h[d])) for d in degs]
    return 0, _emit(lines, args.format, pairs)


def _cmd_cohomology(args):
    m = sqmodule_of_expression(parse_expression(args.expr))
    lines = []
    for d in m.degrees():
        lines.append(f"H^{d} = " + ", ".join(m.labels(d)))
    if args.sq:
        lines += m.action_lines() or ["all Sq actions vanish"]
    pairs = [("command", "cohomology"), ("input", args.expr.strip())]
    pairs += [(f"dim.{d}", str(m.dim(d))) for d in m.degrees()]
    if args.sq:
        pairs += [(f"sq.{i}", line) for i, line in enumerate(m.action_lines())]
    return 0, _emit(lines, args.format, pairs)


def _cmd_dual(args):
    w = lower(parse_expression(args.expr))
    d = dual(w, args.sdim)
    lines = [str(d)]
    pairs = [("command", "dual"), ("input", str(w)), ("output", str(d))]
    return 0, _emit(lines, args.format, pairs)


def _cmd_pi(args):
    w = lower(parse_expression(args.expr))
    if w.is_point():
        orders, gens = [], []
    else:
        from .complexes import sphere
        orders, gens = [], []
        for c in w.summands:
            desc = hom_group(sphere(args.n), c)
            orders.extend(desc.cyclic)
            gens.extend(desc.generators)
    lines = [_group_str(orders)]
    for name, order, note in gens:
        lines.append(f"generator {name} of order {order or 'infinite'}"
                     + (f"  [{note}]" if note else ""))
    pairs = [("command", "pi"), ("degree", str(args.n)), ("input", str(w)),
             ("group", _group_str(orders))]
    pairs += [(f"generator.{i}", f"{n}:{o}") for i, (n, o, _) in enumerate(gens)]
    return 0, _emit(lines, args.format, pairs)


def _cmd_homgroup(args):
    X = lower(parse_expression(args.x))
    Y = lower(parse_expression(args.y))
    if len(X.summands) == 1 and len(Y.summands) == 1 and not args.deg:
        desc = hom_group(X.summands[0], Y.summands[0])
        lines = [desc.pretty()]
        for name, order, note in desc.generators:
            lines.append(f"generator {name} of order {order or 'infinite'}"
                         + (f"  [{note}]" if note else ""))
        pairs = [("command", "homgroup"), ("source", str(X)),
                 ("target", str(Y)), ("group", desc.pretty())]
        pairs += [(f"generator.{i}", f"{n}:{o}")
                  for i, (n, o, _) in enumerate(desc.generators)]
        return 0, _emit(lines, args.format, pairs)
    orders = wedge_hom_order(X, Y, args.deg)
    lines = [_group_str(orders)]
    pairs = [("command", "homgroup"), ("source", str(X)), ("target", str(Y)),
             ("degree", str(args.deg)), ("group", _group_str(orders))]
    return 0, _emit(lines, args.format, pairs)


def _cmd_reduce(args):
    with open(args.matrix, encoding="utf-8") as fh:
        M = matrix_from_json(json.load(fh))
    lines = ["input:", render_matrix(M)]
    pairs = [("command", "reduce"), ("matrix", args.matrix)]
    if args.script:
        with open(args.script, encoding="utf-8") as fh:
            steps = steps_from_json(json.load(fh))
        M = run_script(M, steps)
        lines += ["reduced:", render_matrix(M)]
        for i in range(len(M.rows)):
            for j in range(len(M.cols)):
                pairs.append((f"entry.{i+1}.{j+1}", str(M.entry(i, j))))
    if args.auto:
        rep = split_cone(M)
        lines.append(f"splits off: {rep.pieces}")
        for note in rep.log:
            lines.append("  " + note)
        if rep.residual:
            lines.append(f"irreducible residual blocks: {len(rep.residual)}")
            for sub in rep.residual:
                lines.append(render_matrix(sub))
        pairs.append(("splits", str(rep.pieces)))
        pairs.append(("residual_blocks", str(len(rep.residual))))
    return 0, _emit(lines, args.format, pairs)


def _cmd_verify(args):
    X = lower(parse_expression(args.x))
    Y = lower(parse_expression(args.y))
    W = lower(parse_expression(args.w))
    rep = check_decomposition(X, Y, W)
    lines = [f"homology: {'ok' if rep.homology_match else 'FAIL'}",
             f"mod2 dimensions: {'ok' if rep.mod2_match else 'FAIL'}",
             f"sq invariants: {'ok' if rep.sq_invariants_match else 'FAIL'}",
             f"sq isomorphism: {rep.sq_iso_found}"]
    lines += ["note: " + n for n in rep.obstruction_notes]
    pairs = [("command", "verify"), ("x", str(X)), ("y", str(Y)),
             ("w", str(W)),
             ("homology", str(rep.homology_match).lower()),
             ("mod2", str(rep.mod2_match).lower()),
             ("sq_invariants", str(rep.sq_invariants_match).lower()),
             ("sq_iso", str(rep.sq_iso_found).lower())]
    code = 0 if (rep.homology_match and rep.mod2_match) else 1
    return code, _emit(lines, args.format, pairs)


def _cmd_table(args):
    from itertools import product
    from .complexes import cbot, ceta, cfull, ctop, moore
    from .smash import _decompose_pair_full
    counts: dict[str, int] = {}
    P = (1, 2, 3)
    pairs_iter = []
    for p in (2, 3, 5):
        for u, v in product(P, P):
            pairs_iter.append((moore(p, u, 3), moore(2, v, 3)))
            if p != 2:
                pairs_iter.append((moore(p, u, 3), moore(p, v, 3)))
        for u in P:
            pairs_iter.append((moore(p, u, 3), ceta(5)))
            for r in P:
                pairs_iter.append((moore(p, u, 3), cbot(r, 5)))
                pairs_iter.append((moore(p, u, 3), ctop(5, r)))
            for r, s in product(P, P):
                pairs_iter.append((moore(p, u, 3), cfull(r, 5, s)))
    pairs_iter.append((ceta(5), ceta(5)))
    for r in P:
        pairs_iter.append((ceta(5), cbot(r, 5)))
        pairs_iter.append((ceta(5), ctop(5, r)))
    for r, s in product(P, P):
        pairs_iter.append((ceta(5), cfull(r, 5, s)))
        pairs_iter.append((cbot(r, 5), cbot(s, 5)))
        pairs_iter.append((cbot(r, 5), ctop(5, s)))
        pairs_iter.append((ctop(5, r), ctop(5, s)))
    for u, r, s in product(P, P, P):
        pairs_iter.append((cbot(u, 5), cfull(r, 5, s)))
        pairs_iter.append((ctop(5, u), cfull(r, 5, s)))
    for r, s, rp, sp in product(P, P, P, P):
        pairs_iter.append((cfull(r, 5, s), cfull(rp, 5, sp)))
    for a, b in pairs_iter:
        _, branches = _decompose_pair_full(a, b)
        counts[branches[0][1]] = counts.get(branches[0][1], 0) + 1
    lines = [f"{rule}: {n}" for rule, n in sorted(counts.items())]
    lines.append(f"total pairs: {len(pairs_iter)}; rules hit: {len(counts)}")
    pairs = [("command", "table")] + [(k, str(v))
                                      for k, v in sorted(counts.items())]
    return 0, _emit(lines, args.format, pairs)


def _build_argparser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="chang",
        description="smash products, homology and Steenrod data for stable "
                    "two-to-four-cell complexes")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, fn, *specs, **kw):
        p = sub.add_parser(name, **kw)
        for spec in specs:
            p.add_argument(*spec[0], **spec[1])
        p.add_argument("--format", choices=("text", "structured"),
                       default="text")
        p.set_defaults(fn=fn)
        return p

    add("smash", _cmd_smash, (("x",), {}), (("y",), {}),
        help="decompose X ^ Y")
    add("homology", _cmd_homology, (("expr",), {}),
        help="integral homology of an expression")
    p = add("cohomology", _cmd_cohomology, (("expr",), {}),
            help="mod-2 cohomology, optionally with the Sq action")
    p.add_argument("--sq", action="store_true")
    p = add("dual", _cmd_dual, (("expr",), {}),
            help="Spanier-Whitehead dual")
    p.add_argument("--sdim", type=int, default=None,
                   help="duality dimension m (inferred when omitted)")
    add("pi", _cmd_pi, (("n",), {"type": int}), (("expr",), {}),
        help="stable homotopy group in one degree")
    p = add("homgroup", _cmd_homgroup, (("x",), {}), (("y",), {}),
            help="tabulated hom group [X, Y]")
    p.add_argument("--deg", type=int, default=0)
    p = add("reduce", _cmd_reduce, (("matrix",), {}),
            help="replay a reduction script on a morphism matrix")
    p.add_argument("--script", default=None)
    p.add_argument("--auto", action="store_true")
    add("verify", _cmd_verify, (("x",), {}), (("y",), {}), (("w",), {}),
        help="cross-check the claim X ^ Y ~ W")
    p = add("table", _cmd_table,
            help="decision-table branch coverage over the parameter grid")
    p.add_argument("--branch-coverage", action="store_true")
    return ap


def main(argv=None) -> int:
    ap = _build_argparser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        code, lines = args.fn(args)
    except (ParseError, SemanticError, WindowError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UnclassifiedPair, UntabulatedHom, UnknownComposition) as exc:
        print(f"outside the classified tables: {exc}", file=sys.stderr)
        return 3
    except (VerificationFailure,) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for line in lines:
        print(line)
    return code


def run_command(argv) -> tuple[int, str]:
    """Run one invocation and capture its stdout (for scripting/tests)."""
    import contextlib
    import io
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
