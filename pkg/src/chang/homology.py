"""Reduced integral homology as graded abelian groups.

A graded group is a map degree -> multiset of cyclic orders, with 0 coding
an infinite cyclic factor and every finite order a prime power.  That
primary-decomposed form makes isomorphism a plain equality of sorted
tuples.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Mapping

from .complexes import ElementaryComplex, SmashAtom, Summand, WedgeComplex, wedge

__all__ = ["GradedAbelianGroup", "integral_homology", "kunneth",
           "primary_factors", "cyclic_label"]


def primary_factors(n: int) -> list[int]:
    """Prime-power factors of |Z/n| (n=0 stays as the single factor 0)."""
    if n == 0:
        return [0]
    if n < 0:
        n = -n
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            q = 1
            while n % d == 0:
                n //= d
                q *= d
            out.append(q)
        d += 1
    if n > 1:
        out.append(n)
    return out


def cyclic_label(q: int) -> str:
    return "Z" if q == 0 else f"Z/{q}"


class GradedAbelianGroup:
    """Degree-indexed sums of cyclic groups in canonical form."""

    __slots__ = ("components",)

    def __init__(self, components: Mapping[int, Iterable[int]] = ()):
        canon: dict[int, tuple[int, ...]] = {}
        for d, orders in dict(components).items():
            factors: list[int] = []
            for q in orders:
                factors.extend(primary_factors(q))
            factors = [q for q in factors if q != 1]
            if factors:
                canon[d] = tuple(sorted(factors))
        self.components = canon

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedAbelianGroup) and \
            self.components == other.components

    def __hash__(self):
        return hash(tuple(sorted(self.components.items())))

    def __bool__(self):
        return bool(self.components)

    def __getitem__(self, d: int) -> tuple[int, ...]:
        return self.components.get(d, ())

    def degrees(self) -> list[int]:
        return sorted(self.components)

    def dim(self, d: int) -> int:
        """Number of cyclic factors in degree d."""
        return len(self[d])

    def shift(self, m: int) -> "GradedAbelianGroup":
        return GradedAbelianGroup({d + m: v for d, v in self.components.items()})

    def direct_sum(self, other: "GradedAbelianGroup") -> "GradedAbelianGroup":
        out = {d: list(v) for d, v in self.components.items()}
        for d, v in other.components.items():
            out.setdefault(d, []).extend(v)
        return GradedAbelianGroup(out)

    def __str__(self) -> str:
        if not self.components:
            return "0"
        parts = []
        for d in self.degrees():
            parts.append(f"H_{d} = " + " + ".join(cyclic_label(q) for q in self[d]))
        return "; ".join(parts)

    def __repr__(self) -> str:
        return f"GradedAbelianGroup({self.components!r})"


_ZERO = GradedAbelianGroup()


def _tensor(a: int, b: int) -> int:
    # Z x Z -> Z; Z x Z/b -> Z/b; Z/a x Z/b -> Z/gcd
    if a == 0:
        return b
    if b == 0:
        return a
    return gcd(a, b)


def _tor(a: int, b: int) -> int:
    # Tor vanishes against Z
    if a == 0 or b == 0:
        return 1
    return gcd(a, b)


def kunneth(A: GradedAbelianGroup, B: GradedAbelianGroup) -> GradedAbelianGroup:
    """Reduced homology of a smash from the factors: tensor terms in degree
    i+j plus torsion-product terms in degree i+j+1."""
    out: dict[int, list[int]] = {}
    for i, ai in A.components.items():
        for j, bj in B.components.items():
            for a in ai:
                for b in bj:
                    t = _tensor(a, b)
                    if t != 1:
                        out.setdefault(i + j, []).append(t)
                    t = _tor(a, b)
                    if t != 1:
                        out.setdefault(i + j + 1, []).append(t)
    return GradedAbelianGroup(out)


def _elementary_homology(c: ElementaryComplex) -> GradedAbelianGroup:
    k = c.dim
    if c.kind == "point":
        return _ZERO
    if c.kind == "sphere":
        return GradedAbelianGroup({k: [0]})
    if c.kind == "moore":
        return GradedAbelianGroup({k: [c.p ** c.r]})
    if c.kind == "ceta":
        return GradedAbelianGroup({k - 2: [0], k: [0]})
    if c.kind == "ctop":
        return GradedAbelianGroup({k - 2: [0], k - 1: [2 ** c.s]})
    if c.kind == "cbot":
        return GradedAbelianGroup({k - 2: [2 ** c.r], k: [0]})
    return GradedAbelianGroup({k - 2: [2 ** c.r], k - 1: [2 ** c.s]})


def integral_homology(x: Summand | WedgeComplex) -> GradedAbelianGroup:
    """Reduced integral homology; atoms go through the Kunneth formula."""
    if not isinstance(x, WedgeComplex):
        x = wedge(x)
    total = _ZERO
    for c in x.summands:
        if isinstance(c, SmashAtom):
            h = kunneth(_elementary_homology(c.left),
                        _elementary_homology(c.right)).shift(c.shift)
        else:
            h = _elementary_homology(c)
        total = total.direct_sum(h)
    return total
