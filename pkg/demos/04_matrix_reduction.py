"""The morphism-matrix calculus: replaying reductions and splitting cones.

Matrices of named-generator combinations present mapping cones between
wedges; the elementary row/column transformations are invertible, so the
cone's homotopy type never changes.  The shipped scripts reproduce the
reductions used to split the smash products, undetermined bits included.
"""

import json
from importlib import resources

from chang.matrix import (homology_of_cone, matrix_from_json, render_matrix,
                          run_script, split_cone, steps_from_json)

scripts = resources.files("chang").joinpath("data", "scripts")


def load(name):
    M = matrix_from_json(json.loads(
        scripts.joinpath(f"{name}.matrix.json").read_text()))
    steps = steps_from_json(json.loads(
        scripts.joinpath(f"{name}.steps.json").read_text()))
    return M, steps


# The 9-skeleton of the eta-complex smash four-cell product: one column
# move kills the corner entry, and the cone splits into a Moore-eta atom
# and a three-cell complex.
M, steps = load("skeleton_eta_full")
print("input matrix:")
print(render_matrix(M))
out = run_script(M, steps)
print("\nafter c1 i + c3:")
print(render_matrix(out))
rep = split_cone(out)
print(f"\nsplits off: {rep.pieces}")
print(f"cone homology: {homology_of_cone(M)}")

# The undetermined bits cancel exactly where the engineered moves say so.
M, steps = load("moore_block_r_gt_u")
print("\nMoore block (r > u), with bits:")
print(render_matrix(M))
out = run_script(M, steps)
print("after the engineered column move:")
print(render_matrix(out))
print(f"splits off: {split_cone(out).pieces}")

# The large quotient-complex matrix leaves an honest irreducible residual
# after its printed reduction: only the three-cell piece splits here.
M, steps = load("quotient_full_full")
out = run_script(M, steps)
rep = split_cone(out)
print("\nquotient complex of a four-cell smash four-cell product:")
print(render_matrix(out))
print(f"splits off {rep.pieces}; residual blocks: {len(rep.residual)}")
for sub in rep.residual:
    print(render_matrix(sub))
