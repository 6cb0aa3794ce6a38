"""Formal morphism matrices between wedges and their reduction calculus.

Entries are integer-polynomial combinations of named generators, with
undetermined bits k, k', e, e' (square = itself) as first-class
coefficients; the elementary transformations are exactly the invertible
row/column moves, so the mapping cone class is preserved at every step.
Composition is resolved through a deliberately partial relation table:
anything it does not know raises UnknownComposition instead of guessing.
"""

from __future__ import annotations

import json
import os
import re
from math import gcd
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .complexes import (ElementaryComplex, SmashAtom, Summand,
                        WedgeComplex, cbot, ceta, cfull, ctop, moore,
                        sphere, suspend, wedge)
from .homology import GradedAbelianGroup, primary_factors

__all__ = ["Coef", "FormalMorphism", "MorphismMatrix", "RelationTable",
           "UnknownComposition", "NegateRow", "NegateCol", "ColCompose",
           "RowCompose", "ScaleAddRow", "ScaleAddCol", "apply_step",
           "run_script", "inverse_step", "split_cone", "SplitConeReport",
           "homology_of_cone", "parse_morphism", "matrix_from_json",
           "matrix_to_json", "steps_from_json", "render_matrix",
           "default_table", "smith_normal_form"]

BITS = ("k", "k2", "e", "e2")
_BIT_DISPLAY = {"k": "κ", "k2": "κ'", "e": "ε", "e2": "ε'"}

_ETA_FAMILY = {"eta", "ieta", "etaq", "ietaq", "ietaetaq", "etaeta",
               "ietaeta", "etaetaq", "eta_w1", "1_w_eta", "lambda11",
               "etamix", "xiM", "etaS", "xi", "rhoM", "irho"}

_DISPLAY = {"eta": "η", "ieta": "iη", "etaq": "ηq",
            "ietaq": "iηq", "ietaetaq": "iηηq",
            "etaeta": "ηη", "ietaeta": "iηη",
            "etaetaq": "ηηq", "B": "B(χ)",
            "eta_w1": "η∧1", "1_w_eta": "1∧η",
            "lambda11": "λ11", "rho": "ϱ", "irho": "iϱ",
            "i": "i", "q": "q"}


class UnknownComposition(Exception):
    """The relation table has no rule for this generator pair."""


# --- coefficients: Z[k,k2,e,e2] with bit^2 = bit ---------------------------

class Coef:
    """Multilinear integer polynomial in the undetermined bits."""

    __slots__ = ("terms",)

    def __init__(self, terms=1):
        if isinstance(terms, int):
            terms = {frozenset(): terms} if terms else {}
        self.terms = {m: c for m, c in terms.items() if c}

    @classmethod
    def bit(cls, name: str) -> "Coef":
        if name not in BITS:
            raise ValueError(f"unknown bit {name!r}")
        return cls({frozenset([name]): 1})

    def __add__(self, other: "Coef") -> "Coef":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Coef(out)

    def __neg__(self) -> "Coef":
        return Coef({m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "Coef") -> "Coef":
        out: dict[frozenset, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 | m2            # bit^2 = bit
                out[m] = out.get(m, 0) + c1 * c2
        return Coef(out)

    def scale(self, k: int) -> "Coef":
        return Coef({m: c * k for m, c in self.terms.items()})

    def reduce_mod(self, n: int) -> "Coef":
        if n == 0:
            return self
        return Coef({m: c % n for m, c in self.terms.items()})

    def evaluate(self, values: dict[str, int]) -> int:
        total = 0
        for m, c in self.terms.items():
            if all(values.get(b, 0) for b in m):
                total += c
        return total

    def is_zero(self) -> bool:
        return not self.terms

    def const_value(self) -> int | None:
        """The integer value, if no bits occur."""
        if any(m for m in self.terms):
            return None
        return self.terms.get(frozenset(), 0)

    def bits_used(self) -> set[str]:
        out: set[str] = set()
        for m in self.terms:
            out |= m
        return out

    def __eq__(self, other):
        return isinstance(other, Coef) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), sorted(m))):
            c = self.terms[m]
            mono = "".join(_BIT_DISPLAY[b] for b in sorted(m))
            if not mono:
                parts.append(_pretty_int(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{_pretty_int(c)}{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    def literal(self) -> str:
        """Parseable ASCII spelling (bits as k, k2, e, e2)."""
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), sorted(m))):
            c = self.terms[m]
            mono = "*".join(sorted(m))
            if not mono:
                parts.append(str(c))
            else:
                parts.append(f"{c}*{mono}" if c != 1 else mono)
        return " + ".join(parts).replace("+ -", "- ")


def _pretty_int(c: int) -> str:
    a, n = abs(c), abs(c)
    e = 0
    while n % 2 == 0 and n > 1:
        n //= 2
        e += 1
    if n == 1 and e >= 1:
        body = f"2^{e}" if e > 1 else "2"
        return "-" + body if c < 0 else body
    return str(c)


_ONE = Coef(1)


# --- generators and morphisms ----------------------------------------------

def _moore_exp(c: Summand) -> int | None:
    if isinstance(c, ElementaryComplex) and c.kind == "moore":
        return c.r
    return None


def _gen_display(name: str, src: Summand, tgt: Summand) -> str:
    if name in _DISPLAY:
        return _DISPLAY[name]
    se, te = _moore_exp(src), _moore_exp(tgt)
    if name == "etamix":
        return f"η_{te}^{se}"
    if name == "xiM":
        return f"ξ_{te}^{se}"
    if name == "xi":
        return f"ξ_{te}"
    if name == "etaS":
        return f"η^{se}"
    if name == "rhoM":
        return f"ρ_{te}"
    return name


@dataclass(frozen=True)
class FormalMorphism:
    source: Summand
    target: Summand
    terms: tuple[tuple[Coef, str], ...] = ()

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate_bits(self, values: dict[str, int]) -> "FormalMorphism":
        return FormalMorphism(self.source, self.target,
                              tuple((Coef(c.evaluate(values)), g)
                                    for c, g in self.terms))

    def scale(self, k: int) -> "FormalMorphism":
        return FormalMorphism(self.source, self.target,
                              tuple((c.scale(k), g) for c, g in self.terms))

    def negate(self) -> "FormalMorphism":
        return self.scale(-1)

    def literal(self) -> str:
        """Parseable spelling with semantic generator names."""
        if not self.terms:
            return "0"
        parts = []
        for c, g in self.terms:
            if g == "id":
                parts.append(c.literal() if len(c.terms) == 1
                             else f"({c.literal()})")
            elif c == _ONE:
                parts.append(g)
            else:
                parts.append(f"({c.literal()})*{g}")
        return " + ".join(parts)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, g in self.terms:
            cs = c.render()
            if g == "id":
                parts.append(cs)
            elif cs == "1":
                parts.append(_gen_display(g, self.source, self.target))
            elif cs == "-1":
                parts.append("-" + _gen_display(g, self.source, self.target))
            else:
                if "+" in cs[1:] or "-" in cs[1:]:
                    cs = f"({cs})"
                parts.append(cs + _gen_display(g, self.source, self.target))
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out


# --- the relation table -----------------------------------------------------

def _table_file(name: str) -> str:
    override = os.environ.get("CHANG_TABLE_PATH")
    if override:
        cand = os.path.join(override, name)
        if os.path.exists(cand):
            return cand
    return str(resources.files("chang").joinpath("data", name))


class RelationTable:
    """Composition fragment, generator orders and basis rewrites."""

    def __init__(self, compose_rules: dict[tuple[str, str], tuple] ):
        self.compose_rules = compose_rules

    @classmethod
    def load(cls, path: str | None = None) -> "RelationTable":
        path = path or _table_file("relations.txt")
        rules: dict[tuple[str, str], tuple] = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                _, g, f, result = [p.strip() for p in line.split(";")]
                rules[(g, f)] = _parse_terms(result)
        return cls(rules)

    def evaluate_bits(self, values: dict[str, int]) -> "RelationTable":
        """The table with the undetermined bits pinned to concrete values."""
        rules = {}
        for key, terms in self.compose_rules.items():
            rules[key] = tuple((Coef(c.evaluate(values)), g)
                               for c, g in terms)
        return RelationTable(rules)

    # generator order in [src, tgt]; 0 means no reduction applies
    def order(self, gen: str, src: Summand, tgt: Summand) -> int:
        se, te = _moore_exp(src), _moore_exp(tgt)
        if gen == "id":
            if isinstance(src, ElementaryComplex):
                if src.kind == "moore":
                    if src.p != 2:
                        return src.p ** src.r
                    return 4 if src.r == 1 else 2 ** src.r
                if src.kind == "cfull":
                    return 2 ** (max(src.r, src.s) + 1)
            return 0
        if gen == "B":
            if se == te == 1:
                return 4
            return 2 ** min(se, te)
        if gen == "rho":
            return 24
        if gen == "irho":
            return 4 if (te or 1) > 1 else 2
        if gen == "etamix":
            return 4 if se == 1 and (te or 0) > 1 else 2
        if gen == "xiM":
            return 4 if te == 1 and (se or 0) > 1 else 2
        if gen == "etaS":
            return 4 if se == 1 else 2
        if gen == "xi":
            return 4 if te == 1 else 2
        if gen == "iq":
            return 2 ** min(se or 1, te or 1)
        if gen in _ETA_FAMILY:
            return 2
        return 0

    def rewrite(self, gen: str, coef: Coef, src: Summand, tgt: Summand):
        """Rewrite a term into the canonical basis of [src, tgt]."""
        se, te = _moore_exp(src), _moore_exp(tgt)
        if se is None or te is None:
            return [(coef, gen)]
        same_dim = src.dim == tgt.dim
        if same_dim and gen == "B" and se == te:
            return [(coef, "id")]
        if same_dim and se == te == 1 and gen == "ietaq":
            return [(coef.scale(2), "id")]
        if src.dim == tgt.dim + 1 and gen == "ietaetaq":
            if se > 1 and te == 1:
                return [(coef.scale(2), "xiM")]
            if se == 1 and te > 1:
                return [(coef.scale(2), "etamix")]
        return [(coef, gen)]

    def normalize(self, m: FormalMorphism) -> FormalMorphism:
        acc: dict[str, Coef] = {}
        for coef, gen in m.terms:
            for c2, g2 in self.rewrite(gen, coef, m.source, m.target):
                acc[g2] = acc.get(g2, Coef(0)) + c2
        out = []
        for gen in sorted(acc):
            c = acc[gen].reduce_mod(self.order(gen, m.source, m.target))
            if not c.is_zero():
                out.append((c, gen))
        return FormalMorphism(m.source, m.target, tuple(out))

    def compose_gens(self, g: str, f: str) -> tuple:
        """Terms of g o f (names only; identity handled by the caller)."""
        if (g, f) in self.compose_rules:
            return self.compose_rules[(g, f)]
        raise UnknownComposition(f"no rule for {g!r} o {f!r}")

    def compose(self, f: FormalMorphism, g: FormalMorphism) -> FormalMorphism:
        """f o g (so target(g) = source(f)), bilinear over the table."""
        if g.target != f.source:
            raise ValueError(f"cannot compose: {g.target} != {f.source}")
        terms: list[tuple[Coef, str]] = []
        for cf, gf in f.terms:
            for cg, gg in g.terms:
                c = cf * cg
                if gf == "id":
                    terms.append((c, gg))
                elif gg == "id":
                    terms.append((c, gf))
                else:
                    for cr, gr in self.compose_gens(gf, gg):
                        terms.append((c * cr, gr))
        return self.normalize(FormalMorphism(g.source, f.target, tuple(terms)))


@lru_cache(maxsize=1)
def default_table() -> RelationTable:
    return RelationTable.load()


def compose(f: FormalMorphism, g: FormalMorphism,
            table: RelationTable | None = None) -> FormalMorphism:
    return (table or default_table()).compose(f, g)


# --- morphism literals ------------------------------------------------------

_LIT_TOKEN = re.compile(r"\s*([A-Za-z0-9_']+|\^|\*|\+|\-|\(|\))")


def _parse_terms(text: str) -> tuple[tuple[Coef, str], ...]:
    """Parse a morphism literal into (coefficient, generator) terms."""
    text = text.strip()
    if text == "0":
        return ()
    toks, i = [], 0
    while i < len(text):
        m = _LIT_TOKEN.match(text, i)
        if not m:
            raise ValueError(f"bad morphism literal {text!r} at offset {i}")
        toks.append(m.group(1))
        i = m.end()

    pos = [0]

    def peek():
        return toks[pos[0]] if pos[0] < len(toks) else None

    def take():
        t = peek()
        pos[0] += 1
        return t

    # values are dicts gen -> Coef ("id" holds the scalar part)
    def vadd(a, b):
        out = dict(a)
        for g, c in b.items():
            out[g] = out.get(g, Coef(0)) + c
        return out

    def vmul(a, b):
        if list(a) == ["id"]:
            return {g: a["id"] * c for g, c in b.items()}
        if list(b) == ["id"]:
            return {g: c * b["id"] for g, c in a.items()}
        raise ValueError(f"cannot multiply two generators in {text!r}")

    def expr():
        v = term()
        while peek() in ("+", "-"):
            if take() == "+":
                v = vadd(v, term())
            else:
                v = vadd(v, vmul({"id": Coef(-1)}, term()))
        return v

    def term():
        v = factor()
        while peek() == "*":
            take()
            v = vmul(v, factor())
        return v

    def factor():
        t = peek()
        if t == "-":
            take()
            return vmul({"id": Coef(-1)}, factor())
        return atom()

    def atom():
        t = take()
        if t is None:
            raise ValueError(f"unexpected end of literal {text!r}")
        if t == "(":
            v = expr()
            if take() != ")":
                raise ValueError(f"missing ')' in {text!r}")
            return v
        if t.isdigit():
            n = int(t)
            if peek() == "^":
                take()
                n = n ** int(take())
            return {"id": Coef(n)}
        if t in BITS:
            return {"id": Coef.bit(t)}
        return {t: _ONE}

    value = expr()
    if pos[0] != len(toks):
        raise ValueError(f"trailing input in morphism literal {text!r}")
    return tuple((c, g) for g, c in value.items() if not c.is_zero())


def parse_morphism(text: str, source: Summand, target: Summand,
                   table: RelationTable | None = None) -> FormalMorphism:
    m = FormalMorphism(source, target, _parse_terms(text))
    return (table or default_table()).normalize(m)


# --- matrices and transformation steps --------------------------------------

@dataclass(frozen=True)
class MorphismMatrix:
    """Grid of formal morphisms: entry (i, j) maps cols[j] to rows[i]."""

    rows: tuple[Summand, ...]
    cols: tuple[Summand, ...]
    entries: tuple[tuple[FormalMorphism, ...], ...]

    @classmethod
    def build(cls, rows, cols, entry_map,
              table: RelationTable | None = None) -> "MorphismMatrix":
        table = table or default_table()
        rows, cols = tuple(rows), tuple(cols)
        grid = []
        for i, r in enumerate(rows):
            line = []
            for j, c in enumerate(cols):
                m = entry_map.get((i, j))
                if m is None:
                    line.append(FormalMorphism(c, r))
                elif isinstance(m, str):
                    line.append(parse_morphism(m, c, r, table))
                else:
                    line.append(table.normalize(m))
            grid.append(tuple(line))
        return cls(rows, cols, tuple(grid))

    def entry(self, i: int, j: int) -> FormalMorphism:
        return self.entries[i][j]

    def with_entries(self, grid) -> "MorphismMatrix":
        return MorphismMatrix(self.rows, self.cols,
                              tuple(tuple(line) for line in grid))

    def __eq__(self, other):
        return (isinstance(other, MorphismMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)


@dataclass(frozen=True)
class NegateRow:
    n: int                  # 1-based, as in the printed grids


@dataclass(frozen=True)
class NegateCol:
    n: int


@dataclass(frozen=True)
class ColCompose:
    m: int
    f: FormalMorphism | str
    n: int


@dataclass(frozen=True)
class RowCompose:
    g: FormalMorphism | str
    m: int
    n: int


@dataclass(frozen=True)
class ScaleAddRow:
    k: int
    m: int
    n: int


@dataclass(frozen=True)
class ScaleAddCol:
    k: int
    m: int
    n: int


TransformStep = (NegateRow, NegateCol, ColCompose, RowCompose,
                 ScaleAddRow, ScaleAddCol)


def _coerce_morphism(f, source, target, table) -> FormalMorphism:
    if isinstance(f, str):
        return parse_morphism(f, source, target, table)
    if f.source != source or f.target != target:
        raise ValueError(f"morphism {f} does not have type {source} -> {target}")
    return table.normalize(f)


def apply_step(M: MorphismMatrix, step,
               table: RelationTable | None = None) -> MorphismMatrix:
    """One elementary transformation; invertible by construction."""
    table = table or default_table()
    grid = [list(line) for line in M.entries]
    add = lambda a, b: table.normalize(
        FormalMorphism(a.source, a.target, a.terms + b.terms))
    try:
        if isinstance(step, NegateRow):
            i = step.n - 1
            grid[i] = [m.negate() for m in grid[i]]
        elif isinstance(step, NegateCol):
            j = step.n - 1
            for i in range(len(grid)):
                grid[i][j] = grid[i][j].negate()
        elif isinstance(step, ColCompose):
            m_, n_ = step.m - 1, step.n - 1
            if m_ == n_:
                raise ValueError("column indices must differ")
            f = _coerce_morphism(step.f, M.cols[n_], M.cols[m_], table)
            for i in range(len(grid)):
                grid[i][n_] = add(table.compose(grid[i][m_], f), grid[i][n_])
        elif isinstance(step, RowCompose):
            m_, n_ = step.m - 1, step.n - 1
            if m_ == n_:
                raise ValueError("row indices must differ")
            g = _coerce_morphism(step.g, M.rows[m_], M.rows[n_], table)
            for j in range(len(grid[0]) if grid else 0):
                grid[n_][j] = add(table.compose(g, grid[m_][j]), grid[n_][j])
        elif isinstance(step, ScaleAddRow):
            m_, n_ = step.m - 1, step.n - 1
            if m_ == n_:
                raise ValueError("row indices must differ")
            if M.rows[m_] != M.rows[n_]:
                raise ValueError("integer row moves need equal row summands")
            for j in range(len(grid[0]) if grid else 0):
                grid[n_][j] = add(grid[m_][j].scale(step.k), grid[n_][j])
        elif isinstance(step, ScaleAddCol):
            m_, n_ = step.m - 1, step.n - 1
            if m_ == n_:
                raise ValueError("column indices must differ")
            if M.cols[m_] != M.cols[n_]:
                raise ValueError("integer column moves need equal column summands")
            for i in range(len(grid)):
                grid[i][n_] = add(grid[i][m_].scale(step.k), grid[i][n_])
        else:
            raise TypeError(f"unknown step {step!r}")
    except UnknownComposition as exc:
        raise UnknownComposition(f"{exc} while applying {step}") from None
    grid = [[table.normalize(m) for m in line] for line in grid]
    return M.with_entries(grid)


def inverse_step(step):
    if isinstance(step, (NegateRow, NegateCol)):
        return step
    if isinstance(step, ColCompose):
        f = step.f
        fneg = ("-(" + f + ")") if isinstance(f, str) else f.negate()
        return ColCompose(step.m, fneg, step.n)
    if isinstance(step, RowCompose):
        g = step.g
        gneg = ("-(" + g + ")") if isinstance(g, str) else g.negate()
        return RowCompose(gneg, step.m, step.n)
    if isinstance(step, ScaleAddRow):
        return ScaleAddRow(-step.k, step.m, step.n)
    return ScaleAddCol(-step.k, step.m, step.n)


def run_script(M: MorphismMatrix, steps,
               table: RelationTable | None = None) -> MorphismMatrix:
    for idx, step in enumerate(steps):
        try:
            M = apply_step(M, step, table)
        except UnknownComposition as exc:
            raise UnknownComposition(f"step {idx}: {exc}") from None
    return M


# --- cellular chain homology of the mapping cone ----------------------------

def _summand_chain(c: Summand):
    """(cell dims, boundary dict (from,to)->int) for one wedge summand."""
    if isinstance(c, SmashAtom):
        raise ValueError("matrix summands must be elementary pieces")
    k = c.dim
    if c.kind == "sphere":
        return [k], {}
    if c.kind == "moore":
        return [k, k + 1], {(1, 0): c.p ** c.r}
    if c.kind == "ceta":
        return [k - 2, k], {}
    if c.kind == "cbot":
        return [k - 2, k - 1, k], {(1, 0): 2 ** c.r}
    if c.kind == "ctop":
        return [k - 2, k - 1, k], {(2, 1): 2 ** c.s}
    if c.kind == "cfull":
        return [k - 2, k - 1, k - 1, k], {(1, 0): 2 ** c.r, (3, 2): 2 ** c.s}
    return [], {}


def _gen_chain(gen: str, src: Summand, tgt: Summand):
    """Cellular chain matrix of a generator, as {(src_cell, tgt_cell): int}."""
    if gen in _ETA_FAMILY or gen == "rho":
        return {}
    sc, _ = _summand_chain(src)
    tc, _ = _summand_chain(tgt)
    if gen == "id":
        if type(src) is not type(tgt) or sc != tc:
            raise ValueError(f"no identity chain map {src} -> {tgt}")
        return {(i, i): 1 for i in range(len(sc))}
    if gen == "B":
        s, t = src.r, tgt.r
        return {(0, 0): 2 ** max(t - s, 0), (1, 1): 2 ** max(s - t, 0)}
    if gen == "i":        # bottom-cell inclusion of a sphere
        return {(0, 0): 1}
    if gen == "q":        # top-cell quotient onto a sphere
        return {(len(sc) - 1, 0): 1}
    if gen == "iq":       # through the top sphere into the next bottom cell
        return {(len(sc) - 1, 0): 1}
    raise ValueError(f"no chain data for generator {gen!r}")


def homology_of_cone(M: MorphismMatrix) -> GradedAbelianGroup:
    """Homology of the mapping cone, from the cellular chain complex."""
    cells: list[tuple[int, int]] = []      # (dimension, unique id)
    index: dict[tuple, int] = {}

    def add_cell(tag, dim):
        index[tag] = len(cells)
        cells.append((dim, len(cells)))

    boundaries: dict[tuple[int, int], int] = {}
    for i, r in enumerate(M.rows):
        dims, bnd = _summand_chain(r)
        for ci, d in enumerate(dims):
            add_cell(("r", i, ci), d)
        for (a, b), v in bnd.items():
            boundaries[(index[("r", i, a)], index[("r", i, b)])] = v
    for j, c in enumerate(M.cols):
        dims, bnd = _summand_chain(c)
        for ci, d in enumerate(dims):
            add_cell(("c", j, ci), d + 1)          # cone shift
        for (a, b), v in bnd.items():
            boundaries[(index[("c", j, a)], index[("c", j, b)])] = -v
    for i in range(len(M.rows)):
        for j in range(len(M.cols)):
            entry = M.entry(i, j)
            for coef, gen in entry.terms:
                cmat = _gen_chain(gen, M.cols[j], M.rows[i])
                if not cmat:
                    continue
                c = coef.const_value()
                if c is None:
                    raise ValueError(
                        "cannot take cone homology with undetermined bits on "
                        f"a degree-carrying generator in entry ({i+1},{j+1})")
                for (a, b), v in cmat.items():
                    key = (index[("c", j, a)], index[("r", i, b)])
                    boundaries[key] = boundaries.get(key, 0) + c * v

    dims_present = sorted({d for d, _ in cells})
    by_dim = {d: [cid for (dd, cid) in cells if dd == d] for d in dims_present}

    def boundary_matrix(d):
        rows_ = by_dim.get(d - 1, [])
        cols_ = by_dim.get(d, [])
        return [[boundaries.get((c, r), 0) for c in cols_] for r in rows_]

    out: dict[int, list[int]] = {}
    for d in dims_present:
        diag_in = smith_normal_form(boundary_matrix(d + 1))
        rank_out = sum(1 for v in smith_normal_form(boundary_matrix(d)) if v)
        rank_in = sum(1 for v in diag_in if v)
        free = len(by_dim[d]) - rank_out - rank_in
        factors = [0] * free + [abs(v) for v in diag_in if abs(v) > 1]
        if factors:
            out[d] = factors
    return GradedAbelianGroup(out)


def smith_normal_form(mat) -> list[int]:
    """Diagonal of the Smith normal form of a small integer matrix."""
    m = [row[:] for row in mat]
    if not m or not m[0]:
        return []
    rows, cols = len(m), len(m[0])
    diag = []
    r = c = 0
    while r < rows and c < cols:
        # find a pivot
        pi, pj = -1, -1
        best = None
        for i in range(r, rows):
            for j in range(c, cols):
                v = abs(m[i][j])
                if v and (best is None or v < best):
                    best, pi, pj = v, i, j
        if best is None:
            break
        m[r], m[pi] = m[pi], m[r]
        for row in m:
            row[c], row[pj] = row[pj], row[c]
        while True:
            # clear column c and row r
            done = True
            for i in range(r + 1, rows):
                if m[i][c]:
                    q = m[i][c] // m[r][c]
                    for j in range(c, cols):
                        m[i][j] -= q * m[r][j]
                    if m[i][c]:
                        m[r], m[i] = m[i], m[r]
                        done = False
            for j in range(c + 1, cols):
                if m[r][j]:
                    q = m[r][j] // m[r][c]
                    for i in range(r, rows):
                        m[i][j] -= q * m[i][c]
                    if m[r][j]:
                        for row in m:
                            row[c], row[j] = row[j], row[c]
                        done = False
            if done:
                break
        diag.append(abs(m[r][c]))
        r += 1
        c += 1
    # enforce divisibility
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            if a and b and b % a:
                g = gcd(a, b)
                diag[i], diag[j] = g, a * b // g
    return sorted(diag)


# --- splitting the cone ------------------------------------------------------

@dataclass(frozen=True)
class SplitConeReport:
    pieces: WedgeComplex
    residual: tuple[MorphismMatrix, ...]
    log: tuple[str, ...]

    @property
    def irreducible(self) -> bool:
        return bool(self.residual)


def _v2(n: int) -> int:
    e = 0
    while n % 2 == 0 and n:
        n //= 2
        e += 1
    return e


def _single(entry: FormalMorphism):
    if len(entry.terms) == 1:
        return entry.terms[0]
    return None


def _const_of(entry: FormalMorphism, gen: str) -> int | None:
    t = _single(entry)
    if t is None or t[1] != gen:
        return None
    return t[0].const_value()


def _recognize_block(rows, cols, entries) -> list[Summand] | None:
    """Name the cone of one connected block, when its shape is a known
    cofibre presentation of an elementary piece or atom."""
    def ent(i, j):
        return entries[(i, j)]

    if len(rows) == 1 and len(cols) == 1:
        r, c = rows[0], cols[0]
        e = ent(0, 0)
        cid = _const_of(e, "id")
        if cid is not None and r == c:
            if r.kind == "sphere" and abs(cid) > 1:
                # cone of a degree map is the corresponding Moore space,
                # split into its primary pieces
                return [moore(_pf(q), _exp_of(q, _pf(q)), r.dim)
                        for q in primary_factors(abs(cid))]
            if r.kind == "moore" and r.p == 2:
                if r.r == 1 and cid % 4 == 2:
                    return [cfull(1, r.dim + 2, 1)]
                a = _v2(cid)
                if 0 < a < r.r:
                    return [moore(2, a, r.dim), moore(2, a, r.dim + 1)]
            return None
        g = _single(e)
        if g is None:
            return None
        coef, name = g
        cv = coef.const_value()
        if cv is None:
            return None
        if name == "eta" and c.kind == "sphere" and r.kind == "sphere" \
                and c.dim == r.dim + 1 and cv % 2 == 1:
            return [ceta(r.dim + 2)]
        if name == "ieta" and c.kind == "sphere" and r.kind == "moore" \
                and r.p == 2 and c.dim == r.dim + 1 and cv % 2 == 1:
            return [cbot(r.r, r.dim + 2)]
        if name == "etaq" and c.kind == "moore" and c.p == 2 \
                and r.kind == "sphere" and c.dim == r.dim + 1 and cv % 2 == 1:
            return [ctop(r.dim + 3, c.r)]
        if name == "ietaq" and c.kind == "moore" and r.kind == "moore" \
                and c.p == r.p == 2 and c.dim == r.dim and cv % 2 == 1:
            return [cfull(r.r, r.dim + 2, c.r)]
        if name in ("eta_w1", "1_w_eta") and c.kind == "moore" \
                and r.kind == "moore" and c.p == r.p == 2 and c.r == r.r \
                and c.dim == r.dim + 1 and cv % 2 == 1 and r.dim >= 6:
            return [SmashAtom(moore(2, r.r, 3), ceta(5), r.dim - 6)]
        if name == "lambda11" and c.kind == "moore" and r.kind == "moore" \
                and c.p == r.p == 2 and c.r == r.r == 1 \
                and c.dim == r.dim + 1 and cv % 2 == 1 and r.dim >= 6:
            return [SmashAtom(moore(2, 1, 3), ceta(5), r.dim - 6)]
        if name == "i" and c.kind == "sphere" and r.kind == "moore" \
                and c.dim == r.dim and cv % 2 == 1:
            return [sphere(r.dim + 1)]
        return None

    if len(rows) == 1 and len(cols) == 2:
        r = rows[0]
        if r.kind != "sphere":
            return None
        d = r.dim
        for j0, j1 in ((0, 1), (1, 0)):
            c0, c1 = cols[j0], cols[j1]
            deg = _const_of(ent(0, j0), "id")
            if deg is None or c0 != r:
                continue
            a = _v2(deg)
            if a < 1 or abs(deg) != 2 ** a:
                continue
            if c1.kind == "sphere" and c1.dim == d + 1 \
                    and _const_of(ent(0, j1), "eta") == 1:
                return [cbot(a, d + 2)]
            if c1.kind == "moore" and c1.p == 2 and c1.dim == d \
                    and _const_of(ent(0, j1), "etaq") == 1:
                return [cfull(a, d + 2, c1.r)]
        return None

    if len(rows) == 2 and len(cols) == 1:
        c = cols[0]
        if c.kind != "sphere":
            return None
        d = c.dim
        for i0, i1 in ((0, 1), (1, 0)):
            r0, r1 = rows[i0], rows[i1]
            deg = _const_of(ent(i1, 0), "id")
            if deg is None or r1 != c:
                continue
            a = _v2(deg)
            if a < 1 or abs(deg) != 2 ** a:
                continue
            if r0.kind == "sphere" and r0.dim == d - 1 \
                    and _const_of(ent(i0, 0), "eta") == 1:
                return [ctop(d + 1, a)]
            if r0.kind == "moore" and r0.p == 2 and r0.dim == d - 1 \
                    and _const_of(ent(i0, 0), "ieta") == 1:
                return [cfull(r0.r, d + 1, a)]
        return None
    return None


def _pf(q: int) -> int:
    """Smallest prime factor of a prime power."""
    d = 2
    while d * d <= q:
        if q % d == 0:
            return d
        d += 1
    return q


def _exp_of(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def split_cone(M: MorphismMatrix,
               table: RelationTable | None = None) -> SplitConeReport:
    """Greedy reduction of the cone: cancel units, split zero rows/columns,
    and name residual blocks that match known cell patterns."""
    table = table or default_table()
    grid = [[table.normalize(m) for m in line] for line in M.entries]
    rows = list(M.rows)
    cols = list(M.cols)
    log: list[str] = []
    pieces: list[Summand] = []

    # unit cancellation (odd multiples of the identity)
    changed = True
    while changed:
        changed = False
        for i in range(len(rows)):
            for j in range(len(cols)):
                if rows[i] != cols[j]:
                    continue
                c = _const_of(grid[i][j], "id")
                if c is None or c % 2 == 0:
                    continue
                o = table.order("id", cols[j], rows[i])
                if c in (1, -1):
                    inv = c
                elif o:
                    inv = pow(c, -1, o)
                else:
                    continue
                log.append(f"cancel unit at ({i+1},{j+1}) on {rows[i]}")
                newgrid = []
                for k in range(len(rows)):
                    if k == i:
                        continue
                    line = []
                    for l in range(len(cols)):
                        if l == j:
                            continue
                        corr = table.compose(grid[k][j],
                                             grid[i][l].scale(-inv))
                        merged = FormalMorphism(cols[l], rows[k],
                                                grid[k][l].terms + corr.terms)
                        line.append(table.normalize(merged))
                    newgrid.append(line)
                grid = newgrid
                rows.pop(i)
                cols.pop(j)
                changed = True
                break
            if changed:
                break

    # zero rows and columns split off (null attaching map)
    keep_rows = []
    for i, r in enumerate(rows):
        if all(grid[i][j].is_zero() for j in range(len(cols))):
            pieces.append(r)
            log.append(f"row {r} has zero attaching map; splits off")
        else:
            keep_rows.append(i)
    keep_cols = []
    for j, c in enumerate(cols):
        if all(grid[i][j].is_zero() for i in keep_rows):
            pieces.extend(suspend(wedge(c), 1).summands)
            log.append(f"column {c} maps by zero; its suspension splits off")
        else:
            keep_cols.append(j)
    rows = [rows[i] for i in keep_rows]
    cols = [cols[j] for j in keep_cols]
    grid = [[grid[i][j] for j in keep_cols] for i in keep_rows]

    # connected components of the entry graph
    residual: list[MorphismMatrix] = []
    unseen_rows = set(range(len(rows)))
    while unseen_rows:
        ri = [unseen_rows.pop()]
        ci = []
        frontier = list(ri)
        while frontier:
            new_cols = [j for j in range(len(cols)) if j not in ci and
                        any(not grid[i][j].is_zero() for i in frontier)]
            ci.extend(new_cols)
            frontier = [i for i in list(unseen_rows) if
                        any(not grid[i][j].is_zero() for j in new_cols)]
            for i in frontier:
                unseen_rows.discard(i)
            ri.extend(frontier)
        ri.sort()
        ci.sort()
        block_rows = [rows[i] for i in ri]
        block_cols = [cols[j] for j in ci]
        block_entries = {(a, b): grid[i][j]
                         for a, i in enumerate(ri) for b, j in enumerate(ci)}
        named = _recognize_block(block_rows, block_cols, block_entries)
        if named is not None:
            pieces.extend(named)
            log.append("block on rows " + "/".join(map(str, block_rows))
                       + " recognized as " + str(wedge(*named)))
        else:
            sub = MorphismMatrix.build(block_rows, block_cols, block_entries,
                                       table)
            residual.append(sub)
            log.append("irreducible residual block on rows "
                       + "/".join(map(str, block_rows)))
    return SplitConeReport(wedge(*pieces), tuple(residual), tuple(log))


# --- file formats and rendering ----------------------------------------------

def matrix_from_json(doc, table: RelationTable | None = None) -> MorphismMatrix:
    from .parser import parse_summand
    if isinstance(doc, str):
        doc = json.loads(doc)
    rows = [parse_summand(t) for t in doc["rows"]]
    cols = [parse_summand(t) for t in doc["cols"]]
    entries = {(i - 1, j - 1): lit for i, j, lit in doc.get("entries", [])}
    return MorphismMatrix.build(rows, cols, entries, table)


def matrix_to_json(M: MorphismMatrix) -> dict:
    return {"rows": [str(r) for r in M.rows],
            "cols": [str(c) for c in M.cols],
            "entries": [[i + 1, j + 1, M.entry(i, j).literal()]
                        for i in range(len(M.rows))
                        for j in range(len(M.cols))
                        if not M.entry(i, j).is_zero()]}


def steps_from_json(doc) -> list:
    if isinstance(doc, str):
        doc = json.loads(doc)
    out = []
    for rec in doc:
        kind = rec["kind"]
        if kind == "NegateRow":
            out.append(NegateRow(rec["n"]))
        elif kind == "NegateCol":
            out.append(NegateCol(rec["n"]))
        elif kind == "ColCompose":
            out.append(ColCompose(rec["m"], rec["f"], rec["n"]))
        elif kind == "RowCompose":
            out.append(RowCompose(rec["g"], rec["m"], rec["n"]))
        elif kind == "ScaleAddRow":
            out.append(ScaleAddRow(int(rec["k"]), rec["m"], rec["n"]))
        elif kind == "ScaleAddCol":
            out.append(ScaleAddCol(int(rec["k"]), rec["m"], rec["n"]))
        else:
            raise ValueError(f"unknown step kind {kind!r}")
    return out


def render_matrix(M: MorphismMatrix) -> str:
    col_heads = [str(c) for c in M.cols]
    row_heads = [str(r) for r in M.rows]
    body = [[str(M.entry(i, j)) for j in range(len(M.cols))]
            for i in range(len(M.rows))]
    rw = max([len(h) for h in row_heads] + [0])
    widths = [max([len(col_heads[j])] + [len(body[i][j])
                                         for i in range(len(M.rows))])
              for j in range(len(M.cols))]
    lines = [" " * (rw + 3) + "  ".join(col_heads[j].ljust(widths[j])
                                        for j in range(len(M.cols)))]
    for i in range(len(M.rows)):
        lines.append(row_heads[i].ljust(rw) + " | "
                     + "  ".join(body[i][j].ljust(widths[j])
                                 for j in range(len(M.cols))))
    return "\n".join(line.rstrip() for line in lines)
