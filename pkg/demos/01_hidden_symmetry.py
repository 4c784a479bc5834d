"""Hidden symmetry of the planar Coulomb Hamiltonian, checked exactly.

Run with ``python demos/01_hidden_symmetry.py``.
"""

# %% The operators
# Coefficients live in Q[k][x, y, r, 1/(x^2+y^2)] with r^2 = x^2 + y^2, so the
# 1/r potential and the r-dependent Runge-Lenz terms stay exact.
from hydrofam import diffop

H = diffop.hamiltonian()
L = diffop.angular_momentum()
Bx, By = diffop.runge_lenz_x(), diffop.runge_lenz_y()

for name, op in [("H", H), ("L", L), ("Bx", Bx), ("By", By)]:
    print(f"{name:3s}= {diffop.to_text(op)}")
print("rescaling:", diffop.RESCALE)

# %% Everything commutes with H
print()
print("\n".join(diffop.verify_centralizer().lines()))

# %% The bracket table closes on H, L, Bx, By
# [Bx, By] = 2 H L is where the energy enters the structure constants.
print()
print("\n".join(diffop.verify_bracket_table().lines()))

# %% The Casimir relation, with k left symbolic
print()
print("\n".join(diffop.verify_casimir_identity().lines()))

# %% What a broken identity looks like
broken = diffop.verify_casimir_identity(diffop.CoeffFn.const(0))
print()
print("with the constant term dropped:", broken.first_failure.name)
print("  remainder:", broken.first_failure.detail)
