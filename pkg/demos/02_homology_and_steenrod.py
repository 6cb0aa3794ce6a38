"""Integral homology and the mod-2 Steenrod module.

integral_homology and mod2_cohomology give the invariants of any wedge in
the universe; kunneth and cartan_smash_sq compute them for smash products
directly from the factors, which is exactly how the verifier double-checks
the decomposition engine.
"""

from chang import (cartan_smash_sq, cbot, cfull, integral_homology, kunneth,
                   mod2_cohomology, moore, poincare_mod2, smash_atom, wedge)
from chang.complexes import ceta

# Homology of elementary pieces and wedges.
w = wedge(cbot(2, 5), moore(3, 2, 4))
print(f"H({w}) = {integral_homology(w)}")

# The Kunneth formula for a smash: tensor terms plus shifted torsion terms.
a, b = cfull(1, 5, 2), cfull(2, 5, 3)
h = kunneth(integral_homology(wedge(a)), integral_homology(wedge(b)))
print(f"H({a} ^ {b}) = {h}")

# The same groups organized degree by degree for the smash of two
# four-cell complexes follow the minimum-exponent pattern.
for d in h.degrees():
    print(f"  degree {d}: {h[d]}")

# Steenrod action on a smash, by the Cartan formula.  The extra middle
# term in Sq^2 appears exactly when both bottom exponents are 1.
for r, rp in [(1, 1), (1, 2)]:
    m = cartan_smash_sq(mod2_cohomology(wedge(cbot(r, 5))),
                        mod2_cohomology(wedge(cbot(rp, 5))))
    print(f"\nSq action on Cbot({r},5) ^ Cbot({rp},5):")
    for line in m.action_lines():
        print("  " + line)

# Atoms carry their Cartan module; Poincare series respect the universal
# coefficient bookkeeping.
atom = smash_atom(moore(2, 2, 3), ceta(5))
print(f"\nmod-2 dimensions of {atom}: {poincare_mod2(wedge(atom))}")
print(f"mod-2 dimensions of {cfull(2,5,3)}: {poincare_mod2(wedge(cfull(2,5,3)))}")
