"""The two module families F and their duals: ladder actions and the Casimir scalar.

Run with ``python demos/03_module_family.py``.
"""

# %% Acting on weight vectors
from fractions import Fraction

from hydrofam.module_family import Gen, ModuleFamily, Side, module_suite

fam = ModuleFamily(k=Fraction(1), epsilon=1, N=24)
f = fam.basis
print("A+ f_0  =", fam.act(Gen.Aplus, f(0)))
print("A+ f_-1 =", fam.act(Gen.Aplus, f(-1)))
print("A- f_3  =", fam.act(Gen.Aminus, f(3)))
print("A+ q_2  =", fam.act(Gen.Aplus, f(2, Side.Dual)))

# %% The regularized Casimir acts by a scalar
print()
print("omega(E) =", fam.omega())
for n in (-3, 0, 3):
    print(f"Omega f_{n} =", fam.act(Gen.Omega, f(n)))

# %% The reflection tells the two families apart
for eps in (1, -1):
    print(f"eps = {eps:+d}: s acts on the weight-0 line by",
          ModuleFamily(epsilon=eps).weight_zero_reflection_eigenvalue())

# %% Exact checks on the whole window, for both families
rep = module_suite(k=1, N=24)
print()
print(f"{len(rep.checks)} identities checked, all pass: {rep.passed}")
