from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hydrofam import pair_and_groups as pg
from hydrofam.algebra_core import I, PolyE
from hydrofam.pair_and_groups import FamilyLieElement as FL

E = PolyE.E()
L, Ax, Ay = (FL.basis_element(n) for n in pg.REAL_BASIS)
J, Ap, Am = (FL.basis_element(n) for n in pg.LADDER_BASIS)


def test_bracket_examples():
    assert pg.family_bracket(Ay, L) == Ax
    assert pg.family_bracket(Ap, Am) == J.scale(E)
    assert pg.family_bracket(L, L).is_zero()
    assert pg.family_bracket(Ax, Ay) == L.scale(-E)


def test_jacobi_both_views():
    assert pg.jacobi_check("real").passed
    assert pg.jacobi_check("ladder").passed


def test_ladder_table_follows_from_real_table():
    for a in (J, Ap, Am):
        for b in (J, Ap, Am):
            via_real = pg.family_bracket(a.to_real(), b.to_real()).to_ladder()
            assert via_real == pg.family_bracket(a, b)


coeff = st.lists(st.fractions(-3, 3, max_denominator=4), max_size=3).map(PolyE)
elements = st.tuples(coeff, coeff, coeff).map(lambda t: FL(t, "real"))


@given(elements)
def test_base_change_round_trips(a):
    assert a.to_ladder().to_real() == a
    assert a.to_ladder().to_ladder() == a.to_ladder()


@given(elements, elements)
def test_reflection_is_automorphism(a, b):
    assert pg.reflect(pg.family_bracket(a, b)) == pg.family_bracket(pg.reflect(a), pg.reflect(b))
    assert pg.reflect(pg.reflect(a)) == a


def test_k_action_examples():
    assert pg.k_action("s", L) == -L
    assert pg.k_action("s", pg.k_action("s", Ax)) == Ax
    assert pg.k_action("s", Ax) == -Ay
    assert [pg.weight(v) for v in (J, Ap, Am)] == [0, 1, -1]


def test_reflection_on_ladder_basis():
    assert pg.reflect(Ap) == Am.scale(-I)
    assert pg.reflect(Am) == Ap.scale(I)
    assert pg.reflect(J) == -J


def test_sigma_on_ladder_basis():
    assert pg.sigma(J) == -J
    assert pg.sigma(Ap) == Am
    assert pg.sigma(Am) == Ap
    assert pg.sigma_signs() == {"L": 1, "Ax": 1, "Ay": 1}


def test_iso_transport():
    rep = pg.iso_transport_check({-2, 0, 1})
    assert rep.passed and len(rep.checks) == 9


def test_iso_transport_examples():
    js = pg.j_matrices()
    assert pg.matrix_bracket(js["j2"], js["j3"]) == js["j1"]
    x = PolyE.E()
    assert pg.matrix_bracket(js["j1"], js["j2"]) == [[c * x for c in row] for row in js["j3"]]


@pytest.mark.parametrize("pair,out", [(("L", "Ax"), "Ay"), (("L", "Ay"), "L"), (("Ax", "Ay"), "Ax")])
def test_perturbed_structure_constant_is_named(pair, out):
    table = dict(pg.REAL_STRUCTURE)
    coords = list(table[pair])
    idx = pg.REAL_BASIS.index(out)
    coords[idx] = coords[idx] + 1
    table[pair] = tuple(coords)
    rep = pg.iso_transport_check({0, 1}, table)
    assert not rep.passed
    assert rep.first_failure.name.startswith(f"[{pair[0]},{pair[1]}]")


@pytest.mark.parametrize("x", [Fraction(n, 4) for n in range(-12, 13)])
def test_j_matrices_in_algebra_fiber(x):
    for m in pg.j_matrices().values():
        assert pg.fiber_membership([[c(x) for c in row] for row in m], x, "algebra")


def test_j_matrices_as_polynomial_identities():
    z = PolyE()
    D = [[E, z, z], [z, E, z], [z, z, PolyE.const(1)]]
    for Z in pg.j_matrices().values():
        Zt = [[Z[j][i] for j in range(3)] for i in range(3)]
        lhs, rhs = pg._matmul(Zt, D), pg._matmul(D, Z)
        assert all((lhs[i][j] + rhs[i][j]).is_zero() for i in range(3) for j in range(3))


def test_group_membership_examples():
    ident = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for x in (-1, 0, 1):
        assert pg.fiber_membership(ident, x)
    assert pg.fiber_membership([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], 1, "algebra")
    assert not pg.fiber_membership([[2, 0, 0], [0, Fraction(1, 2), 0], [0, 0, 1]], 1)
    # x = 0: orthogonal block with translation part, corner = det of the block
    assert pg.fiber_membership([[0, -1, 5], [1, 0, 7], [0, 0, 1]], 0)
    assert pg.fiber_membership([[1, 0, 3], [0, -1, 2], [0, 0, -1]], 0)
    assert not pg.fiber_membership([[1, 0, 3], [0, -1, 2], [0, 0, 1]], 0)


def test_real_form_table():
    assert pg.classify_real_form(1) is pg.RealFormLabel.CompactSO3
    assert pg.classify_real_form(-1) is pg.RealFormLabel.SplitSO21
    assert pg.classify_real_form(0) is pg.RealFormLabel.EuclideanO2R2


@given(st.fractions(-3, 3))
def test_real_form_locally_constant(x):
    expect = {1: "CompactSO3", -1: "SplitSO21", 0: "EuclideanO2R2"}[(x > 0) - (x < 0)]
    assert pg.classify_real_form(x).value == expect


@pytest.mark.parametrize("x,level", [(1, 1), (0, 1), (-1, 1), (-1, -1), (2, 3)])
def test_quadric_points_on_level_set(x, level):
    pts = pg.quadric_sample(x, level)
    assert len(pts) > 0
    vals = x * (pts[:, 0] ** 2 + pts[:, 1] ** 2) + pts[:, 2] ** 2
    assert np.allclose(vals, level, rtol=1e-9, atol=1e-9)


def test_quadric_special_cases():
    planes = pg.quadric_sample(0, 1)
    assert set(np.unique(planes[:, 2])) == {-1.0, 1.0}
    sheets = pg.quadric_sample(-1, 1)
    assert np.all(np.abs(sheets[:, 2]) >= 1 - 1e-12)
    assert pg.quadric_sample(1, -1).shape == (0, 3)
    with pytest.raises(ValueError):
        pg.quadric_sample(1, 0)


def test_quadric_csv_and_report():
    text = pg.quadric_csv(pg.quadric_sample(1, 1, pg.QuadricGrid(4, 3)), 1)
    assert text.splitlines()[0] == "u,v,w,x_param"
    rep = json.loads(pg.classification_json(-1))
    assert rep["real_form"] == "SplitSO21" and rep["homogeneous_space"] == "two-sheeted hyperboloid"
    assert pg.classification_report(1)["homogeneous_space"] == "ellipsoid"
