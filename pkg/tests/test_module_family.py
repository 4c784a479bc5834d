from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hydrofam.algebra_core import I, PolyE
from hydrofam.module_family import (Gen, ModuleFamily, ModuleVector, Side, TruncationOverflow,
                                    fiber_evaluate, module_suite, reflected_generators)

E = PolyE.E()
FAM = ModuleFamily()


def test_ladder_examples():
    assert FAM.act(Gen.Aplus, FAM.basis(0)) == FAM.basis(1)
    expect = FAM.basis(0).scale(PolyE.linear(Fraction(1, 2), Fraction(1, 4)) * Fraction(-1, 2))
    assert FAM.act(Gen.Aplus, FAM.basis(-1)) == expect
    assert FAM.act(Gen.J, FAM.basis(5)) == FAM.basis(5).scale(5)


def test_truncation_overflow():
    with pytest.raises(TruncationOverflow):
        FAM.act(Gen.Aplus, FAM.basis(24))
    with pytest.raises(TruncationOverflow):
        FAM.act(Gen.Aminus, FAM.basis(-24, Side.Dual))
    with pytest.raises(TruncationOverflow):
        ModuleVector.basis(25)


def test_omega_examples():
    w = PolyE.linear(Fraction(-1, 2), Fraction(-1, 4))
    assert FAM.act(Gen.Omega, FAM.basis(0)) == FAM.basis(0).scale(w)
    assert FAM.act(Gen.Omega, FAM.basis(3)) == FAM.basis(3).scale(w)
    assert FAM.act(Gen.Omega, FAM.basis(-3, Side.Dual)) == FAM.basis(-3, Side.Dual).scale(w)


def test_bracket_examples():
    P, M = Gen.Aplus, Gen.Aminus
    f0, f2 = FAM.basis(0), FAM.basis(2)
    assert (FAM.act_word([P, M], f0) - FAM.act_word([M, P], f0)).is_zero()
    assert FAM.act_word([P, M], f2) - FAM.act_word([M, P], f2) == f2.scale(E * 2)
    fm2 = FAM.basis(-2)
    assert FAM.act_word([Gen.J, P], fm2) - FAM.act_word([P, Gen.J], fm2) == FAM.act(P, fm2)


@pytest.mark.parametrize("eps", [1, -1])
@pytest.mark.parametrize("k", [Fraction(1), Fraction(2), Fraction(1, 3)])
def test_full_suite(eps, k):
    rep = module_suite(k, 12, (eps,))
    assert rep.passed, rep.first_failure


def test_reflected_generators_are_derived():
    table = reflected_generators()
    assert table[Gen.J] == (-1, Gen.J)
    assert table[Gen.Aplus] == (-I, Gen.Aminus)
    assert table[Gen.Aminus] == (I, Gen.Aplus)


def test_reflection_examples():
    for eps in (1, -1):
        fam = ModuleFamily(epsilon=eps)
        f1 = fam.basis(1)
        lhs = fam.act(Gen.Reflection, fam.act(Gen.J, f1))
        assert lhs == fam.basis(-1).scale(-I * eps)
        assert fam.act(Gen.Reflection, fam.act(Gen.J, fam.basis(0))).is_zero()
        assert fam.weight_zero_reflection_eigenvalue() == eps


def test_conjugation_rule_with_equal_signs_fails():
    # s.A_- = -i A_+ would make s fail to be an involution on the algebra
    fam = ModuleFamily()
    f0 = fam.basis(0)
    lhs = fam.act(Gen.Reflection, fam.act(Gen.Aminus, f0))
    rhs = fam.act(Gen.Aplus, fam.act(Gen.Reflection, f0)).scale(-I)
    assert lhs != rhs


def test_casimir_negative_control():
    rep = ModuleFamily(c_shift=Fraction(1), N=6).omega_scalar_check()
    assert not rep.passed and rep.first_failure.name.startswith("Omega")


def test_fiber_evaluation():
    assert fiber_evaluate(FAM.basis(1).scale(E + 2), -2) == {}
    assert fiber_evaluate(FAM.basis(0), Fraction(7, 3)) == {0: 1}
    psi1 = (E + 2) * Fraction(1, 8)
    assert fiber_evaluate(FAM.basis(1, Side.Dual).scale(psi1), 1) == {1: Fraction(3, 8)}


@given(st.integers(-23, 23), st.sampled_from(list(Side)), st.sampled_from([1, -1]))
def test_reflection_squares_to_identity(n, side, eps):
    fam = ModuleFamily(epsilon=eps)
    f = fam.basis(n, side)
    assert fam.act(Gen.Reflection, fam.act(Gen.Reflection, f)) == f


@given(st.integers(-22, 22))
def test_weight_spaces_rank_one(n):
    v = FAM.act_word([Gen.Aplus, Gen.Aminus], FAM.basis(n))
    assert [w for w, _ in v.entries] == [n]


def test_json_snapshot():
    v = FAM.basis(2).scale(E + 1) + FAM.basis(-1)
    doc = json.loads(v.to_json())
    assert doc == {"schema": 1, "side": "Primal", "epsilon": 1, "N": 24,
                   "entries": {"-1": "1", "2": "E + 1"}}
