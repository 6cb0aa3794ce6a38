"""Stable hom-group lookups with named generators.

Everything comes from the structured table in chang/data/hom_tables.txt;
queries outside it raise UntabulatedHom instead of guessing.  Set
CHANG_TABLE_PATH to a directory with replacement files to extend it.
"""

from chang.complexes import cbot, ceta, cfull, ctop, moore, smash_atom, sphere, wedge
from chang.homgroups import (UntabulatedHom, atom_homotopy, hom_group,
                             pi9_smash_extension, wedge_hom_order)


def show(src, tgt):
    try:
        d = hom_group(src, tgt)
    except UntabulatedHom as exc:
        print(f"[{src}, {tgt}] -> untabulated ({exc})")
        return
    gens = ", ".join(f"{n} (order {o or 'infinite'})"
                     for n, o, _ in d.generators)
    print(f"[{src}, {tgt}] = {d.pretty()}   generators: {gens}")


show(sphere(8), sphere(5))
show(moore(2, 2, 5), sphere(5))
show(sphere(8), moore(2, 2, 5))
show(moore(2, 1, 6), moore(2, 3, 5))
show(sphere(8), ctop(9, 3))
show(cfull(2, 9, 3), sphere(9))
show(sphere(9), cbot(2, 9))

# Homotopy of the indecomposable smash atoms, straight from the table.
a = smash_atom(moore(2, 2, 3), ceta(5))
for d in (7, 8, 9):
    print(f"pi_{d}({a}) = {atom_homotopy(a, d).pretty()}")
b = smash_atom(ceta(5), cfull(2, 5, 3))
print(f"pi_9({b}) = {atom_homotopy(b, 9).pretty()}")

# Wedges sum cell by cell over the matrix of tabulated groups.
orders = wedge_hom_order(sphere(9), wedge(cbot(3, 9), cfull(2, 9, 3)))
print(f"[S(9), Cbot(3,9) v C(2,9,3)] has cyclic orders {orders}")

# The degree-9 group of a four-cell smash four-cell product is pinned
# between a tabulated subgroup and quotient.
sub, quot = pi9_smash_extension(2, 3, 2, 2)
print(f"pi_9(C(2,5,3) ^ C(2,5,2)) sits in an extension {sub} -> pi -> {quot}")

# Honest refusal outside the tables.
show(sphere(9), sphere(4))
