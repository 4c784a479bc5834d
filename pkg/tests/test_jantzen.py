from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hydrofam import jantzen as jz
from hydrofam.algebra_core import GaussianRational, PolyE
from hydrofam.jantzen import Definiteness, Interval, Intertwiner, Kind

E = PolyE.E()


def test_closed_form_examples():
    assert jz.psi_closed_form(0) == PolyE.const(1)
    assert jz.psi_closed_form(1) == (E + 2) * Fraction(1, 8)
    assert jz.psi_closed_form(2) == (E + 2) * (E * 9 + 2) * Fraction(1, 64)
    assert jz.psi_closed_form(7).degree == 7


def test_recursion_check_passes():
    rep = jz.psi_recursion_check(20)
    assert rep.passed


@pytest.mark.parametrize("n,deg", [(3, 0), (-5, 2), (20, 20)])
def test_perturbed_psi_is_named(n, deg):
    bump = PolyE([0] * deg + [1])
    tw = Intertwiner(overrides={n: jz.psi_closed_form(n) + bump})
    rep = jz.psi_recursion_check(20, tw)
    assert not rep.passed
    assert f"psi_{n}" in rep.first_failure.name


def test_recursion_with_other_normalization():
    psi0 = E * 3 - 1
    assert jz.psi_recursion_check(8, Intertwiner(Fraction(2), psi0)).passed


def test_filtration_examples():
    orders, qs = jz.jantzen_filtration(1)
    assert set(orders.values()) == {0} and len(qs) == 1
    orders, qs = jz.jantzen_filtration(-2)
    assert qs[0].weights == (0,) and qs[0].dim == 1
    _, qs = jz.jantzen_filtration(Fraction(-2, 9))
    assert qs[0].weights == (-1, 0, 1)
    assert set(qs[1].weights) == {n for n in range(-24, 25) if abs(n) >= 2}


@pytest.mark.parametrize("m", range(11))
def test_bound_point_quotients(m):
    e = jz.bound_point(m, 1)
    orders, qs = jz.jantzen_filtration(e)
    assert [q.order for q in qs] == [0, 1]
    assert qs[0].weights == tuple(range(-m, m + 1)) and qs[0].dim == 2 * m + 1
    assert set(qs[1].weights) == {n for n in range(-24, 25) if abs(n) > m}


@settings(max_examples=60)
@given(st.fractions(-3, 3, max_denominator=50))
def test_filtration_exhausts_window(e):
    _, qs = jz.jantzen_filtration(e, N=10)
    assert sorted(w for q in qs for w in q.weights) == list(range(-10, 11))


def test_hermitian_form_examples():
    assert jz.hermitian_form(1, 0, 1, 1) == Fraction(3, 8)
    assert jz.hermitian_form(-2, 0, 0, 0) == 1
    assert jz.hermitian_form(-2, 1, 2, 2) == Fraction(-1, 4)
    assert jz.hermitian_form(-2, 1, 2, 3) == 0
    with pytest.raises(jz.DivisionByLowerOrder):
        jz.hermitian_form(-2, 1, 0, 0)


def test_classification_examples():
    r = jz.classify_fiber(1)
    assert r.classification.kind is Kind.ScatteringContinuum
    assert all(v > 0 for v in r.form_diagonal.values())
    r = jz.classify_fiber(-1)
    assert r.classification.kind is Kind.NotInSpectrum
    assert r.form_diagonal[(0, 1)] == Fraction(1, 8) and r.form_diagonal[(0, 2)] == Fraction(-7, 64)
    r = jz.classify_fiber(-2)
    assert str(r.classification) == "BoundState(0)"
    assert r.definiteness == {0: Definiteness.PositiveDefinite, 1: Definiteness.Indefinite}
    assert r.form_diagonal[(0, 0)] == 1
    assert r.form_diagonal[(1, 1)] == Fraction(1, 8) and r.form_diagonal[(1, 2)] == Fraction(-1, 4)


def test_tail_witness_beyond_window():
    # sign change of psi_n at e = -10^-6 only happens near n = 707
    r = jz.classify_fiber(Fraction(-1, 10**6))
    assert r.classification.kind is Kind.NotInSpectrum
    assert r.tail_witness["weights"][0] > 24


def test_bound_iff_reducibility_point():
    pts = set(jz.reducibility_points(1, Interval(Fraction(-3), Fraction(0)), 10))
    samples = pts | {Fraction(-p, q) for p in range(1, 7) for q in range(1, 30)}
    for e in samples:
        is_bound = jz.classify_fiber(e).classification.kind is Kind.BoundState
        assert is_bound == (e in pts), e


@settings(max_examples=40)
@given(st.fractions(-3, 3, max_denominator=40))
def test_in_spectrum_set(e):
    r = jz.classify_fiber(e)
    bound = any(e == jz.bound_point(m, 1) for m in range(12))
    assert r.classification.in_spectrum == (e >= 0 or bound)
    if r.classification.in_spectrum:
        assert len(r.definite_quotients()) == 1


def test_other_normalization_shifts_layers():
    base = jz.classify_fiber(-2)
    shifted = jz.classify_fiber(-2, psi0=E + 2)
    assert [q.order for q in shifted.quotients] == [q.order + 1 for q in base.quotients]
    assert [q.weights for q in shifted.quotients] == [q.weights for q in base.quotients]
    assert shifted.classification == base.classification
    neg = jz.classify_fiber(-2, psi0=PolyE.const(-3))
    assert neg.definiteness[0] is Definiteness.NegativeDefinite
    assert str(neg.classification) == "BoundState(0)"


def test_non_real_point():
    r = jz.classify_fiber(GaussianRational(-2, 1))
    assert set(r.definiteness.values()) == {Definiteness.NotApplicable}
    orders, _ = jz.jantzen_filtration(GaussianRational(-2, 1))
    assert set(orders.values()) == {0}


@pytest.mark.parametrize("e", [1, 0, -1, -2, Fraction(-2, 9), Fraction(-2, 25)])
def test_form_invariance(e):
    assert jz.form_invariance_check(e, N=10).passed


def test_form_invariance_needs_sign_flip_on_J():
    from hydrofam.module_family import Gen

    rep = jz.form_invariance_check(1, N=6, sigma_table={Gen.J: (1, Gen.J)})
    assert not rep.passed and "<J f_" in rep.first_failure.name


def test_reducibility_examples():
    assert jz.reducibility_points(1, Interval.parse("[-3, 0)"), 2) == \
        [Fraction(-2), Fraction(-2, 9), Fraction(-2, 25)]
    assert jz.reducibility_points(1, Interval.parse("(0, 10)"), 5) == []
    assert jz.reducibility_points(2, Interval.parse("[-9, 0)"), 0) == [Fraction(-8)]


def test_interval_parsing():
    iv = Interval.parse("(-1/2, 3]")
    assert iv.lo == Fraction(-1, 2) and not iv.closed_lo and iv.closed_hi
    assert 3 in iv and Fraction(-1, 2) not in iv
    with pytest.raises(ValueError):
        Interval.parse("[1, 0]")


def test_report_schema_and_csv():
    doc = json.loads(jz.classify_fiber(Fraction(-2, 9)).to_json())
    assert doc["schema"] == 1
    assert set(doc) >= {"point", "k", "layers", "form", "definiteness", "classification"}
    assert doc["layers"][0] == {"order": 0, "weights": [-1, 0, 1], "dim": 3}
    csv_text = jz.classification_csv(jz.classify_many([-2, 0, 1]))
    assert csv_text.splitlines() == ["e,classification,finite_quotient_dim",
                                     "-2,BoundState(0),1", "0,ZeroEnergy,", "1,ScatteringContinuum,"]
