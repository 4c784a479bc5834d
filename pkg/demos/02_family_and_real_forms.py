"""The Lie algebra over C[E], its matrix model, and the real forms along the energy line.

Run with ``python demos/02_family_and_real_forms.py [out.csv]``; the optional
argument receives a point cloud of the three homogeneous-space quadrics.
"""

# %% Brackets over C[E]
import sys

import numpy as np

from hydrofam import pair_and_groups as pg

FL = pg.FamilyLieElement
L, Ax, Ay = (FL.basis_element(n) for n in pg.REAL_BASIS)
J, Ap, Am = (FL.basis_element(n) for n in pg.LADDER_BASIS)

print("[Ay, L] =", pg.family_bracket(Ay, L))
print("[Ax, Ay] =", pg.family_bracket(Ax, Ay))
print("[A+, A-] =", pg.family_bracket(Ap, Am))
print("Ax in the ladder basis:", Ax.to_ladder())

# %% K-action and real structure on the ladder basis
for v in (J, Ap, Am):
    print(f"s.{v}  = {pg.reflect(v)};  sigma({v}) = {pg.sigma(v)};  weight {pg.weight(v)}")

# %% Matrix model with x = -E
rep = pg.iso_transport_check({-2, 0, 1})
print()
print("\n".join(rep.lines()))

# %% Real forms and their homogeneous spaces
print()
for x in (1, 0, -1):
    r = pg.classification_report(x)
    print(f"x = {x:+d} (E = {r['E']}): {r['real_form']:14s} {r['homogeneous_space']}")

clouds = [pg.quadric_sample(x, 1, pg.QuadricGrid(36, 14, 1.5)) for x in (1, 0, -1)]
for x, pts in zip((1, 0, -1), clouds):
    vals = x * (pts[:, 0] ** 2 + pts[:, 1] ** 2) + pts[:, 2] ** 2
    print(f"x = {x:+d}: {len(pts)} points, max |level - 1| = {np.max(np.abs(vals - 1)):.1e}")

if len(sys.argv) > 1:
    with open(sys.argv[1], "w", encoding="utf-8") as fh:
        fh.write(pg.quadric_csv(clouds[0], 1))
        for x, pts in zip((0, -1), clouds[1:]):
            fh.write("".join(pg.quadric_csv(pts, x).splitlines(keepends=True)[1:]))
    print("wrote", sys.argv[1])
