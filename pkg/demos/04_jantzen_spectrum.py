"""From intertwiners to the spectrum: Jantzen filtrations and definite forms.

Run with ``python demos/04_jantzen_spectrum.py``.
"""

# %% The intertwiner table
from fractions import Fraction

from hydrofam import jantzen as jz

for n in range(4):
    print(f"psi_{n} =", jz.psi_closed_form(n))
print("recursion agrees with closed form:", jz.psi_recursion_check(20).passed)

# %% Reducibility points are the bound-state energies
pts = jz.reducibility_points(1, jz.Interval.parse("[-3, 0)"), 5)
print()
print("reducibility points (k = 1):", ", ".join(map(str, pts)))

# %% Filtration at a bound-state energy
rep = jz.classify_fiber(Fraction(-2, 9))
print()
print(f"e = -2/9: {rep.classification}")
for q in rep.quotients:
    shown = list(q.weights) if not q.infinite else f"|n| > {max(abs(w) for w in rep.quotients[0].weights)}"
    print(f"  layer {q.order}: weights {shown}, {rep.definiteness[q.order].value}")

# %% Classification along the energy line
print()
for e in ["-3", "-2", "-1", "-2/9", "-1/10", "-2/25", "0", "1/10", "10"]:
    r = jz.classify_fiber(Fraction(e))
    print(f"  {e:>6s}: {r.classification}")

# %% The form really is invariant, on every layer
print()
for e in (Fraction(1), Fraction(-2), Fraction(-2, 9)):
    print(f"form invariance at {e}: {jz.form_invariance_check(e, N=12).passed}")
