"""Decomposing smash products of the classified stable pieces.

The library's universe: spheres S(n), Moore spaces M(p^r,n) and the four
Chang families Ceta(k), Ctop(k,s), Cbot(r,k), C(r,k,s).  smash_decompose
turns a smash of wedges of these into a wedge of elementary pieces plus
indecomposable smash "atoms", and every answer is cross-checked against
the Kunneth formula before it is returned.
"""

from chang import cbot, ceta, cfull, moore, smash_decompose, sphere, wedge


def show(x, y):
    res = smash_decompose(wedge(x) if not hasattr(x, "summands") else x,
                          wedge(y) if not hasattr(y, "summands") else y)
    print(f"{x} ^ {y}")
    print(f"  = {res.output}")
    for pair, rule in res.branches:
        print(f"    via {rule:<28} {pair}")
    v = res.verification
    print(f"    checks: homology={v.homology_match} mod2={v.mod2_match} "
          f"sq={v.sq_invariants_match}\n")


# Smashing with a sphere is suspension.
show(sphere(4), cbot(2, 5))

# A Moore space against the three-cell complexes: one branch splits a
# Moore summand off, the other stays in one piece.
show(moore(2, 1, 3), cbot(3, 5))
show(moore(2, 3, 3), cbot(1, 5))

# The four-branch rule for a Moore space against the four-cell complex.
for u, r, s in [(3, 1, 1), (2, 1, 3), (2, 3, 1), (1, 2, 2)]:
    show(moore(2, u, 3), cfull(r, 5, s))

# Odd torsion against 2-primary pieces collapses (coprime) or splits into
# odd Moore spaces.
show(moore(3, 2, 3), ceta(5))
show(moore(3, 1, 3), cfull(1, 5, 1))

# Products of four-cell complexes: the maximum torsion exponent decides.
show(cfull(1, 5, 3), cfull(2, 5, 1))   # strict maximum: two splits
show(cfull(1, 5, 3), cfull(3, 5, 2))   # max shared with r': one mixed atom
show(cfull(2, 5, 2), cfull(2, 5, 2))   # a self-smash

# Everything distributes over wedges.
show(wedge(moore(2, 1, 3), cbot(2, 5)), wedge(ceta(5), sphere(4)))
