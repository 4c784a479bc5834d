from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hydrofam import diffop
from hydrofam.algebra_core import CoeffFn
from hydrofam.diffop import DiffOp, commutator, formal_adjoint, random_diffop

X, Y = CoeffFn.x(), CoeffFn.y()
dx, dy = DiffOp.partial(1, 0), DiffOp.partial(0, 1)
H, L = diffop.hamiltonian(), diffop.angular_momentum()
Bx, By = diffop.runge_lenz_x(), diffop.runge_lenz_y()


def test_weyl_relation():
    assert dx * DiffOp.coeff(X) == DiffOp.coeff(X) * dx + DiffOp.identity()
    assert diffop.to_text(dx * DiffOp.coeff(X)) == "x*dx + 1"


def test_identity_is_neutral():
    assert L * DiffOp.identity() == L
    assert DiffOp.identity() * L == L


def test_square_of_hamiltonian_principal_part():
    quarter, half = Fraction(1, 4), Fraction(1, 2)
    expect = (DiffOp.partial(4, 0, quarter) + DiffOp.partial(2, 2, half)
              + DiffOp.partial(0, 4, quarter))
    assert (H * H).order_part(4) == expect


def test_angular_momentum_matches_formula():
    assert L == DiffOp.coeff(Y) * dx - DiffOp.coeff(X) * dy
    assert diffop.to_text(L) == "y*dx - x*dy"


def test_zero_operator_has_empty_terms():
    assert (L - L).terms == {}
    assert (L - L).is_zero()


@pytest.mark.parametrize("a,b,expected", [
    (L, Bx, By),
    (By, L, Bx),
    (Bx, By, DiffOp.coeff(2) * H * L),
    (H, L, DiffOp()),
])
def test_commutator_examples(a, b, expected):
    assert commutator(a, b) == expected


def test_bracket_table_and_centralizer():
    assert diffop.verify_bracket_table().passed
    rep = diffop.verify_centralizer()
    assert rep.passed and len(rep.checks) == 5


def test_casimir_identity_and_grades():
    rep = diffop.verify_casimir_identity()
    assert rep.passed
    names = [c.name for c in rep.checks]
    assert "order-3 parts agree" in names and "k^0 parts agree" in names


def test_negative_controls_name_the_identity():
    rep = diffop.verify_bracket_table({"[Bx,By]=c*H*L": Fraction(3)})
    assert rep.first_failure.name == "[Bx,By]=3*H*L"
    cas = diffop.verify_casimir_identity(CoeffFn.k() * CoeffFn.k() * Fraction(1, 2) + 1)
    assert not cas.passed and "k^2" in cas.first_failure.name


def test_adjoint_signs():
    assert [diffop.adjoint_sign(op) for op in (H, L, Bx, By)] == [1, -1, 1, 1]
    assert formal_adjoint(formal_adjoint(Bx)) == Bx


def test_jacobi_on_generators():
    gens = [H, L, Bx, By]
    for a in gens:
        for b in gens:
            for c in gens:
                assert diffop.jacobi_residual(a, b, c).is_zero()


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=120)
@given(seeds)
def test_jacobi_random_triples(seed):
    rng = random.Random(seed)
    a, b, c = (random_diffop(rng) for _ in range(3))
    assert diffop.jacobi_residual(a, b, c).is_zero()


@settings(max_examples=60)
@given(seeds)
def test_composition_is_associative(seed):
    rng = random.Random(seed)
    a, b, c = (random_diffop(rng) for _ in range(3))
    assert (a * b) * c == a * (b * c)


@settings(max_examples=60)
@given(seeds)
def test_leibniz_rule_for_first_derivatives(seed):
    rng = random.Random(seed)
    f = random_diffop(rng, max_order=0)
    g = random_diffop(rng, max_order=0)
    for d in (dx, dy):
        # [d, fg] = [d, f] g + f [d, g] for multiplication operators
        assert commutator(d, f * g) == commutator(d, f) * g + f * commutator(d, g)


def test_json_snapshot_roundtrip():
    doc = json.loads(diffop.to_json(L))
    assert isinstance(doc, (list, dict))
    assert diffop.to_json(L) == diffop.to_json(DiffOp.coeff(Y) * dx - DiffOp.coeff(X) * dy)
