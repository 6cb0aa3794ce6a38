"""Surface syntax for complexes.

Grammar (wedge binds loosest, smash tighter):

    wedge  := smash (('+' | 'v') smash)*
    smash  := atom ('^' atom)*
    atom   := S(n) | M(p^r,n) | M(p,n) | Ceta(k) | Ctop(k,s) | Cbot(r,k)
            | C(r,k,s) | susp(m, wedge) | D(wedge) | '*' | '(' wedge ')'

Printing produces the canonical spelling, with ' v ' between wedge
summands, and parse o print is the identity on printed forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import complexes as cx
from .complexes import ElementaryComplex, WedgeComplex

__all__ = ["parse_expression", "print_expression", "ParseError",
           "SemanticError", "lower", "parse_summand", "Expr"]


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, expected=()):
        super().__init__(f"{message} at offset {offset}"
                         + (f" (expected {', '.join(expected)})" if expected else ""))
        self.offset = offset
        self.expected = tuple(expected)


class SemanticError(ValueError):
    """Structurally valid expression with out-of-range parameters."""


@dataclass(frozen=True)
class Expr:
    """AST node: head in {S, M, Ceta, Ctop, Cbot, C, point, susp, dual,
    smash, wedge}; ints in args, children in kids."""
    head: str
    args: tuple[int, ...] = ()
    kids: tuple["Expr", ...] = ()


_TOKEN = re.compile(r"(\d+|[A-Za-z]+|[\^+(),*])")
_KEYWORDS = {"S", "M", "Ceta", "Ctop", "Cbot", "C", "D", "susp", "v"}


def _tokenize(text: str):
    out, i = [], 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", i)
        tok = m.group(1)
        if tok.isalpha() and tok not in _KEYWORDS:
            raise ParseError(f"unknown name {tok!r}", i,
                             sorted(_KEYWORDS - {"v"}))
        out.append((tok, i))
        i = m.end()
    out.append((None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos][0]

    def offset(self):
        return self.toks[self.pos][1]

    def take(self, expect=None):
        tok, off = self.toks[self.pos]
        if expect is not None and tok != expect:
            raise ParseError(f"got {tok!r}", off, (expect,))
        self.pos += 1
        return tok

    def int_(self) -> int:
        tok, off = self.toks[self.pos]
        if tok is None or not tok.isdigit():
            raise ParseError(f"got {tok!r}", off, ("integer",))
        self.pos += 1
        return int(tok)

    def wedge(self) -> Expr:
        parts = [self.smash()]
        while self.peek() in ("+", "v"):
            self.take()
            parts.append(self.smash())
        return parts[0] if len(parts) == 1 else Expr("wedge", kids=tuple(parts))

    def smash(self) -> Expr:
        parts = [self.atom()]
        while self.peek() == "^":
            self.take()
            parts.append(self.atom())
        return parts[0] if len(parts) == 1 else Expr("smash", kids=tuple(parts))

    def atom(self) -> Expr:
        tok = self.peek()
        off = self.offset()
        if tok == "(":
            self.take()
            e = self.wedge()
            self.take(")")
            return e
        if tok == "*":
            self.take()
            return Expr("point")
        if tok == "S":
            self.take(); self.take("(")
            n = self.int_()
            self.take(")")
            return Expr("S", (n,))
        if tok == "M":
            self.take(); self.take("(")
            p = self.int_()
            r = 1
            if self.peek() == "^":
                self.take()
                r = self.int_()
            self.take(",")
            n = self.int_()
            self.take(")")
            return Expr("M", (p, r, n))
        if tok == "Ceta":
            self.take(); self.take("(")
            k = self.int_()
            self.take(")")
            return Expr("Ceta", (k,))
        if tok == "Ctop":
            self.take(); self.take("(")
            k = self.int_(); self.take(","); s = self.int_()
            self.take(")")
            return Expr("Ctop", (k, s))
        if tok == "Cbot":
            self.take(); self.take("(")
            r = self.int_(); self.take(","); k = self.int_()
            self.take(")")
            return Expr("Cbot", (r, k))
        if tok == "C":
            self.take(); self.take("(")
            r = self.int_(); self.take(","); k = self.int_()
            self.take(","); s = self.int_()
            self.take(")")
            return Expr("C", (r, k, s))
        if tok == "D":
            self.take(); self.take("(")
            e = self.wedge()
            self.take(")")
            return Expr("dual", kids=(e,))
        if tok == "susp":
            self.take(); self.take("(")
            m = self.int_()
            self.take(",")
            e = self.wedge()
            self.take(")")
            return Expr("susp", (m,), (e,))
        raise ParseError(f"got {tok!r}", off,
                         ("S", "M", "Ceta", "Ctop", "Cbot", "C", "D",
                          "susp", "*", "("))


def parse_expression(text: str) -> Expr:
    p = _Parser(text)
    e = p.wedge()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r}", p.offset())
    return e


def print_expression(e: Expr) -> str:
    if e.head == "point":
        return "*"
    if e.head == "S":
        return f"S({e.args[0]})"
    if e.head == "M":
        p, r, n = e.args
        return f"M({p}^{r},{n})"
    if e.head == "Ceta":
        return f"Ceta({e.args[0]})"
    if e.head == "Ctop":
        return f"Ctop({e.args[0]},{e.args[1]})"
    if e.head == "Cbot":
        return f"Cbot({e.args[0]},{e.args[1]})"
    if e.head == "C":
        return f"C({e.args[0]},{e.args[1]},{e.args[2]})"
    if e.head == "susp":
        return f"susp({e.args[0]},{print_expression(e.kids[0])})"
    if e.head == "dual":
        return f"D({print_expression(e.kids[0])})"
    if e.head == "smash":
        parts = []
        for kid in e.kids:
            s = print_expression(kid)
            parts.append(f"({s})" if kid.head == "wedge" else s)
        return "^".join(parts)
    if e.head == "wedge":
        return " v ".join(print_expression(k) for k in e.kids)
    raise ValueError(f"unknown node {e.head!r}")


def _atom_complex(e: Expr) -> ElementaryComplex:
    try:
        if e.head == "point":
            return cx.POINT
        if e.head == "S":
            return cx.sphere(*e.args)
        if e.head == "M":
            return cx.moore(*e.args)
        if e.head == "Ceta":
            return cx.ceta(*e.args)
        if e.head == "Ctop":
            return cx.ctop(*e.args)
        if e.head == "Cbot":
            return cx.cbot(*e.args)
        if e.head == "C":
            return cx.cfull(*e.args)
    except ValueError as exc:
        raise SemanticError(f"{print_expression(e)}: {exc}") from None
    raise SemanticError(f"{print_expression(e)} is not an elementary piece")


def lower(e: Expr) -> WedgeComplex:
    """Evaluate to a canonical wedge; smash nodes go through the decision
    procedure, so the result is always a wedge of elementary pieces and
    certified atoms."""
    from .smash import smash_decompose
    if e.head == "wedge":
        return cx.wedge(*[lower(k) for k in e.kids])
    if e.head == "smash":
        acc = lower(e.kids[0])
        for kid in e.kids[1:]:
            acc = smash_decompose(acc, lower(kid)).output
        return acc
    if e.head == "susp":
        return cx.suspend(lower(e.kids[0]), e.args[0])
    if e.head == "dual":
        return cx.dual(lower(e.kids[0]))
    return cx.wedge(_atom_complex(e))


def parse_summand(text: str) -> ElementaryComplex:
    """Parse a single elementary piece (used by matrix files)."""
    e = parse_expression(text)
    return _atom_complex(e)


def homology_of_expression(e: Expr):
    """Integral homology along the structure of the expression: smash nodes
    use the Kunneth formula directly, independent of the decision table."""
    from .homology import integral_homology, kunneth
    if e.head == "wedge":
        out = homology_of_expression(e.kids[0])
        for kid in e.kids[1:]:
            out = out.direct_sum(homology_of_expression(kid))
        return out
    if e.head == "smash":
        out = homology_of_expression(e.kids[0])
        for kid in e.kids[1:]:
            out = kunneth(out, homology_of_expression(kid))
        return out
    if e.head == "susp":
        return homology_of_expression(e.kids[0]).shift(e.args[0])
    if e.head == "dual":
        return integral_homology(lower(e))
    return integral_homology(cx.wedge(_atom_complex(e)))


def sqmodule_of_expression(e: Expr):
    """Mod-2 cohomology along the structure: smashes by the Cartan formula."""
    from .steenrod import cartan_smash_sq, mod2_cohomology
    if e.head == "wedge":
        out = sqmodule_of_expression(e.kids[0]).relabel(lambda s: "0." + s)
        for i, kid in enumerate(e.kids[1:], start=1):
            part = sqmodule_of_expression(kid).relabel(
                lambda s, i=i: f"{i}." + s)
            out = out.direct_sum(part)
        return out
    if e.head == "smash":
        out = sqmodule_of_expression(e.kids[0])
        for kid in e.kids[1:]:
            out = cartan_smash_sq(out, sqmodule_of_expression(kid))
        return out
    if e.head == "susp":
        return sqmodule_of_expression(e.kids[0]).shift(e.args[0])
    if e.head == "dual":
        return mod2_cohomology(lower(e))
    return mod2_cohomology(cx.wedge(_atom_complex(e)))
