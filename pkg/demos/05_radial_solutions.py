"""Radial solutions at negative, positive and zero energy, with residuals.

Run with ``python demos/05_radial_solutions.py``.
"""

# %% Bound states: the Kummer series terminates
import numpy as np

from hydrofam import jantzen
from hydrofam import solutions as sol
from hydrofam.solutions import RadialProfile

for n in range(1, 5):
    e = sol.bound_energy(n, 1)
    same = e == jantzen.bound_point(n - 1, 1)
    worst = max(sol.radial_residual(RadialProfile.bound(n, l), r)
                for l in range(n) for r in (0.1, 0.5, 1, 2, 5, 10))
    print(f"n = {n}: E = {str(e):>7s}  matches Jantzen point: {same}  max residual {worst:.1e}")

# %% Scattering states
print()
for E in (0.5, 1.0, 2.0):
    p = RadialProfile.scattering(E, 0)
    worst = max(sol.radial_residual(p, r) for r in np.linspace(0.5, 5, 46))
    print(f"E = {E}: R(1) = {sol.radial_eval(p, 1.0):.6f}, max residual {worst:.1e}")

# %% Zero energy: a Bessel function of sqrt(8 k r)
print()
for l in (0, 1, 2):
    p = RadialProfile.zero_energy(l)
    worst = max(sol.radial_residual(p, r) for r in np.linspace(0.1, 10, 100))
    print(f"l = {l}: max residual {worst:.1e}")

# %% Analytic derivatives against central differences
print()
ok, e1, e2 = sol.finite_difference_check(RadialProfile.scattering(2.0, 1), 5.0)
print(f"finite differences agree: {ok} (R' {e1:.1e}, R'' {e2:.1e})")
print()
print(sol.solutions_csv(sol.residual_rows(RadialProfile.bound(2, 1), [0.5, 1.0, 2.0])))
