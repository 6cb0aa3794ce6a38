"""Core model of stable complexes.

The universe is closed: spheres, Moore spaces M(Z/p^r, n), the four Chang
families built from eta and degree maps, finite wedges of these, and the
smash products of two such pieces that are certified indecomposable
("atoms").  Everything is immutable and canonicalized, so equality of
wedges is equality of stable homotopy types within this universe.

Naming convention for Chang complexes with bottom cell in dimension k-2:

    ceta(k)        -- cells k-2, k       attached by eta
    ctop(k, s)     -- cells k-2, k-1, k  (torsion Z/2^s on the k-1 cell)
    cbot(r, k)     -- cells k-2, k-1, k  (torsion Z/2^r on the k-2 cell)
    cfull(r, k, s) -- cells k-2, k-1, k-1, k
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

__all__ = [
    "ElementaryComplex", "SmashAtom", "WedgeComplex", "Summand",
    "POINT", "sphere", "moore", "ceta", "ctop", "cbot", "cfull",
    "smash_atom", "wedge", "canonicalize", "suspend", "dual",
    "dual_elementary", "cells_of", "base_form", "WindowError",
]

_KIND_RANK = {"sphere": 0, "moore": 1, "ceta": 2, "ctop": 3, "cbot": 4,
              "cfull": 5, "point": 6}

# bottom cell of the stable range for each family
_MIN_DIM = {"sphere": 3, "moore": 3, "ceta": 5, "ctop": 5, "cbot": 5, "cfull": 5}


class WindowError(ValueError):
    """No single duality window is consistent with every summand."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True, order=False)
class ElementaryComplex:
    """One indecomposable piece: kind plus integer parameters.

    dim is the anchor dimension (n for spheres and Moore spaces, k for the
    Chang families).  p/r/s are 0 when the kind does not use them.
    """

    kind: str
    dim: int
    p: int = 0
    r: int = 0
    s: int = 0

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind == "point":
            return
        if self.dim < _MIN_DIM[self.kind]:
            raise ValueError(
                f"{self.kind} at dimension {self.dim} is below the stable range")
        if self.kind == "moore":
            if not _is_prime(self.p):
                raise ValueError(f"Moore space needs a prime, got {self.p}")
            if self.r < 1:
                raise ValueError("Moore space exponent must be >= 1")
        if self.kind in ("cbot", "cfull") and self.r < 1:
            raise ValueError("Chang complex exponent r must be >= 1")
        if self.kind in ("ctop", "cfull") and self.s < 1:
            raise ValueError("Chang complex exponent s must be >= 1")

    @property
    def sort_key(self):
        return (_KIND_RANK[self.kind], self.dim, self.r, self.s, self.p)

    @property
    def bottom(self) -> int:
        """Dimension of the bottom cell."""
        if self.kind == "point":
            return 0
        return self.dim if self.kind in ("sphere", "moore") else self.dim - 2

    @property
    def top(self) -> int:
        if self.kind == "point":
            return 0
        if self.kind == "sphere":
            return self.dim
        if self.kind == "moore":
            return self.dim + 1
        return self.dim

    def cells(self) -> list[int]:
        """Cell dimensions with multiplicity."""
        k = self.dim
        return {
            "point": [],
            "sphere": [k],
            "moore": [k, k + 1],
            "ceta": [k - 2, k],
            "ctop": [k - 2, k - 1, k],
            "cbot": [k - 2, k - 1, k],
            "cfull": [k - 2, k - 1, k - 1, k],
        }[self.kind]

    def __str__(self) -> str:
        if self.kind == "point":
            return "*"
        if self.kind == "sphere":
            return f"S({self.dim})"
        if self.kind == "moore":
            return f"M({self.p}^{self.r},{self.dim})"
        if self.kind == "ceta":
            return f"Ceta({self.dim})"
        if self.kind == "ctop":
            return f"Ctop({self.dim},{self.s})"
        if self.kind == "cbot":
            return f"Cbot({self.r},{self.dim})"
        return f"C({self.r},{self.dim},{self.s})"


POINT = ElementaryComplex("point", 0)


def sphere(n: int) -> ElementaryComplex:
    return ElementaryComplex("sphere", n)


def moore(p: int, r: int, n: int) -> ElementaryComplex:
    return ElementaryComplex("moore", n, p=p, r=r)


def ceta(k: int) -> ElementaryComplex:
    return ElementaryComplex("ceta", k)


def ctop(k: int, s: int) -> ElementaryComplex:
    return ElementaryComplex("ctop", k, s=s)


def cbot(r: int, k: int) -> ElementaryComplex:
    return ElementaryComplex("cbot", k, r=r)


def cfull(r: int, k: int, s: int) -> ElementaryComplex:
    return ElementaryComplex("cfull", k, r=r, s=s)


def base_form(c: ElementaryComplex) -> tuple[ElementaryComplex, int]:
    """Desuspend to the table dimension (n=3 resp. k=5); return (base, shift)."""
    if c.kind == "point":
        return c, 0
    base_dim = 3 if c.kind in ("sphere", "moore") else 5
    return replace(c, dim=base_dim), c.dim - base_dim


def _pair_is_atom(a: ElementaryComplex, b: ElementaryComplex) -> bool:
    """Whether the base pair a ^ b (a <= b in the fixed order) stays in one
    piece.  Mirrors the decision table; only such pairs may be stored as atoms."""
    ka, kb = a.kind, b.kind
    if ka == "moore":
        if a.p != 2:
            return False
        if kb == "ceta":
            return True
        if kb == "cbot":
            return a.r > b.r
        if kb == "ctop":
            return a.r > b.s
        return False
    if ka == "ceta":
        return kb in ("ceta", "ctop", "cbot", "cfull")
    if ka == "ctop":
        if kb in ("ctop", "cbot"):
            return True
        if kb == "cfull":
            u, r, s = a.s, b.r, b.s
            return not (u >= r and u >= s) and not (u == r < s)
        return False
    if ka == "cbot":
        if kb == "cbot":
            return True
        if kb == "cfull":
            u, r, s = a.r, b.r, b.s
            return not (u >= r and u >= s) and not (u == s < r)
        return False
    return False


@dataclass(frozen=True)
class SmashAtom:
    """Smash of two elementary pieces that does not split further.

    Factors are stored at base dimension with the total suspension in
    shift, and ordered so the pair is canonical.
    """

    left: ElementaryComplex
    right: ElementaryComplex
    shift: int = 0

    def __post_init__(self):
        if self.shift < 0:
            raise ValueError("atom shift must be >= 0")
        for c in (self.left, self.right):
            if base_form(c)[1] != 0:
                raise ValueError(f"atom factor {c} is not in base form")
        if self.left.sort_key > self.right.sort_key:
            raise ValueError("atom factors out of canonical order")
        if not (_pair_is_atom(self.left, self.right) or self._is_torsion_square()):
            raise ValueError(
                f"{self.left} ^ {self.right} splits; it cannot be an atom")

    def _is_torsion_square(self) -> bool:
        # M(2,3)^M(2,3) is indecomposable but equals C(1,8,1); canonicalize
        # rewrites it, so the stored form is transient only.
        return (self.left.kind == "moore" and self.right.kind == "moore"
                and self.left.p == self.right.p == 2
                and self.left.r == self.right.r == 1)

    @property
    def sort_key(self):
        return (9, self.shift) + self.left.sort_key + self.right.sort_key

    @property
    def bottom(self) -> int:
        return self.left.bottom + self.right.bottom + self.shift

    @property
    def top(self) -> int:
        return self.left.top + self.right.top + self.shift

    def cells(self) -> list[int]:
        return sorted(x + y + self.shift
                      for x in self.left.cells() for y in self.right.cells())

    def __str__(self) -> str:
        core = f"{self.left}^{self.right}"
        return core if self.shift == 0 else f"susp({self.shift},{core})"


Summand = Union[ElementaryComplex, SmashAtom]


def smash_atom(a: ElementaryComplex, b: ElementaryComplex) -> Summand:
    """Build the canonical atom for an indecomposable pair (any dimensions)."""
    a0, sa = base_form(a)
    b0, sb = base_form(b)
    if a0.sort_key > b0.sort_key:
        a0, b0 = b0, a0
    if (a0.kind == b0.kind == "moore" and a0.p == b0.p == 2
            and a0.r == b0.r == 1):
        return cfull(1, 8 + sa + sb, 1)
    return SmashAtom(a0, b0, sa + sb)


@dataclass(frozen=True)
class WedgeComplex:
    """Finite wedge, kept in canonical (sorted, point-free) form."""

    summands: tuple[Summand, ...] = ()

    def is_point(self) -> bool:
        return not self.summands

    def cells(self) -> list[int]:
        out: list[int] = []
        for c in self.summands:
            out.extend(c.cells())
        return sorted(out)

    def __str__(self) -> str:
        if not self.summands:
            return "*"
        return " v ".join(str(c) for c in self.summands)


def wedge(*pieces: Summand | WedgeComplex) -> WedgeComplex:
    """Wedge of summands and/or wedges, canonicalized."""
    flat: list[Summand] = []
    for p in pieces:
        if isinstance(p, WedgeComplex):
            flat.extend(p.summands)
        else:
            flat.append(p)
    return canonicalize(WedgeComplex(tuple(flat)))


def canonicalize(w: WedgeComplex) -> WedgeComplex:
    """Unique normal form: points absorbed, M(2,a)^M(2,b) rewritten to the
    four-cell Chang complex it equals, summands sorted."""
    out: list[Summand] = []
    for c in w.summands:
        if isinstance(c, ElementaryComplex):
            if c.kind != "point":
                out.append(c)
        else:
            if c._is_torsion_square():
                out.append(cfull(1, 8 + c.shift, 1))
            else:
                out.append(c)
    out.sort(key=lambda c: c.sort_key)
    return WedgeComplex(tuple(out))


def suspend(x: Summand | WedgeComplex, m: int) -> WedgeComplex:
    """m-fold suspension, acting summand-wise."""
    if m < 0:
        raise ValueError("suspension count must be >= 0")
    if not isinstance(x, WedgeComplex):
        x = wedge(x)
    out: list[Summand] = []
    for c in x.summands:
        if isinstance(c, ElementaryComplex):
            out.append(replace(c, dim=c.dim + m))
        else:
            out.append(SmashAtom(c.left, c.right, c.shift + m))
    return canonicalize(WedgeComplex(tuple(out)))


def cells_of(x: Summand | WedgeComplex) -> list[tuple[int, int]]:
    """Cell census as (dimension, count) pairs."""
    if not isinstance(x, WedgeComplex):
        x = wedge(x)
    counts: dict[int, int] = {}
    for d in x.cells():
        counts[d] = counts.get(d, 0) + 1
    return sorted(counts.items())


# --- Spanier-Whitehead duality -------------------------------------------
#
# dual(X, sdim=m) is the m-duality D_m, the contravariant involution with
# X ^ D_m(X) mapping to S^m.  A wedge of pieces from one ambient window
# A_n^2 uses m = 2n+2; a smash of two window-3 pieces (an atom, or any
# decomposition output) lives at m = 16 plus twice the suspension.

def _natural_sdims(c: Summand) -> set[int] | None:
    """Candidate duality dimensions for one summand (None = unconstrained)."""
    if isinstance(c, SmashAtom):
        return {16 + 2 * c.shift}
    if c.kind == "point":
        return None
    d = c.dim
    if c.kind == "sphere":
        cands = {2 * d - 2, 2 * d, 2 * d + 2}
        return {m for m in cands if m - d >= 3}
    if c.kind == "moore":
        cands = {2 * d, 2 * d + 2}
        return {m for m in cands if m - d - 1 >= 3}
    return {2 * d - 2}


def _dualizable_at(c: Summand, m: int) -> bool:
    if isinstance(c, SmashAtom):
        _, sl = base_form(dual_elementary(c.left, 8))
        _, sr = base_form(dual_elementary(c.right, 8))
        return m - 16 - c.shift + sl + sr >= 0
    if c.kind == "point":
        return True
    if c.kind == "sphere":
        return m - c.dim >= 3
    if c.kind == "moore":
        return m - c.dim - 1 >= 3
    return m - c.dim + 2 >= 5


def dual_elementary(c: ElementaryComplex, m: int) -> ElementaryComplex:
    """m-dual of one elementary piece."""
    if c.kind == "point":
        return c
    if c.kind == "sphere":
        return sphere(m - c.dim)
    if c.kind == "moore":
        return moore(c.p, c.r, m - c.dim - 1)
    k = m - c.dim + 2
    if c.kind == "ceta":
        return ceta(k)
    if c.kind == "cbot":
        return ctop(k, c.r)
    if c.kind == "ctop":
        return cbot(c.s, k)
    return cfull(c.s, k, c.r)


def _dual_atom(a: SmashAtom, m: int) -> SmashAtom:
    dl, sl = base_form(dual_elementary(a.left, 8))
    dr, sr = base_form(dual_elementary(a.right, 8))
    shift = (m - 16 - a.shift) + sl + sr
    if dl.sort_key > dr.sort_key:
        dl, dr = dr, dl
    return SmashAtom(dl, dr, shift)


def infer_sdim(x: WedgeComplex) -> int:
    """Smallest duality dimension consistent with every summand."""
    cands: set[int] | None = None
    for c in x.summands:
        s = _natural_sdims(c)
        if s is None:
            continue
        cands = s if cands is None else cands & s
        if not cands:
            raise WindowError(
                "no common duality window; conflicting summands: "
                + ", ".join(str(t) for t in x.summands))
    if cands is None:
        # a point dualizes to itself in any window
        return 8
    return min(cands)


def dual(x: Summand | WedgeComplex, sdim: int | None = None) -> WedgeComplex:
    """Summand-wise m-duality; m inferred when not given."""
    if not isinstance(x, WedgeComplex):
        x = wedge(x)
    m = infer_sdim(x) if sdim is None else sdim
    out: list[Summand] = []
    for c in x.summands:
        if not _dualizable_at(c, m):
            raise WindowError(f"{c} has no dual in the S^{m} window")
        if isinstance(c, SmashAtom):
            out.append(_dual_atom(c, m))
        else:
            out.append(dual_elementary(c, m))
    return canonicalize(WedgeComplex(tuple(out)))
