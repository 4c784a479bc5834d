"""Exact algebra and numerics for the planar Coulomb problem as an algebraic family.

Submodules:

- ``algebra_core``: exact scalars, polynomials in ``E`` and coefficient functions in ``(x, y, k, r)``
- ``diffop``: differential operators, the hidden-symmetry generators and their identities
- ``pair_and_groups``: the family Lie algebra over ``C[E]``, matrix families and real forms
- ``module_family``: the two families of (g, K)-modules and their sigma-twisted duals
- ``jantzen``: intertwiners, Jantzen filtrations, invariant forms and spectrum classification
- ``solutions``: radial solutions and residual checks
- ``cli``: command-line front end
"""

__version__ = "0.1.0"
