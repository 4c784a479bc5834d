"""The families F (flag eps = +-1) of (g, K)-modules and their sigma-twisted duals.

Both sides are free ``C[E]``-modules on weight vectors ``f_n`` (primal) and
``q_n`` (dual), truncated to ``|n| <= N``. With ``c(t) = k^2/2 + E t^2``:

    primal   A+ f_n = f_{n+1}                    (n >= 0)
             A+ f_n = -1/2 c(n+1/2) f_{n+1}      (n < 0)
             A- f_n = -1/2 c(n-1/2) f_{n-1}      (n > 0)
             A- f_n = f_{n-1}                    (n <= 0)
    dual     A+ q_n = 1/2 c(n+1/2) q_{n+1}       (n >= 0)
             A+ q_n = -q_{n+1}                   (n < 0)
             A- q_n = -q_{n-1}                   (n > 0)
             A- q_n = 1/2 c(n-1/2) q_{n-1}       (n <= 0)

``J`` acts by the weight and ``s`` by ``s v_n = eps (-i)^n v_{-n}``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from typing import Mapping

from .algebra_core import I, PolyE, as_scalar
from .report import Report


class Side(enum.Enum):
    Primal = "Primal"
    Dual = "Dual"


class Gen(enum.Enum):
    J = "J"
    Aplus = "A+"
    Aminus = "A-"
    Omega = "Omega"
    Reflection = "s"


class TruncationOverflow(Exception):
    """A ladder step would leave the stored weight window; enlarge N."""


_E = PolyE.E()


def _prune(entries: Mapping[int, PolyE]) -> tuple[tuple[int, PolyE], ...]:
    return tuple(sorted((n, c) for n, c in entries.items() if not c.is_zero()))


@dataclass(frozen=True)
class ModuleVector:
    side: Side
    entries: tuple[tuple[int, PolyE], ...]
    epsilon: int = 1
    N: int = 24

    def __post_init__(self):
        ents = self.entries
        if isinstance(ents, Mapping):
            ents = {n: c if isinstance(c, PolyE) else PolyE.const(c) for n, c in ents.items()}
        else:
            ents = dict(ents)
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        for n in ents:
            if abs(n) > self.N:
                raise TruncationOverflow(f"weight {n} outside window |n| <= {self.N}")
        object.__setattr__(self, "entries", _prune(ents))

    @classmethod
    def basis(cls, n: int, side: Side = Side.Primal, epsilon: int = 1, N: int = 24) -> ModuleVector:
        return cls(side, {n: PolyE.const(1)}, epsilon, N)

    def as_dict(self) -> dict[int, PolyE]:
        return dict(self.entries)

    def coeff(self, n: int) -> PolyE:
        return self.as_dict().get(n, PolyE())

    def is_zero(self) -> bool:
        return not self.entries

    def _like(self, entries) -> ModuleVector:
        return ModuleVector(self.side, entries, self.epsilon, self.N)

    def _check(self, other: ModuleVector) -> None:
        if (self.side, self.epsilon, self.N) != (other.side, other.epsilon, other.N):
            raise ValueError("vectors live in different modules")

    def __add__(self, other: ModuleVector) -> ModuleVector:
        self._check(other)
        out = self.as_dict()
        for n, c in other.entries:
            out[n] = out.get(n, PolyE()) + c
        return self._like(out)

    def __sub__(self, other: ModuleVector) -> ModuleVector:
        return self + other.scale(-1)

    def scale(self, p) -> ModuleVector:
        return self._like({n: c * p for n, c in self.entries})

    def __str__(self):
        v = "f" if self.side is Side.Primal else "q"
        if not self.entries:
            return "0"
        return " + ".join(f"({c})*{v}_{n}" for n, c in self.entries)

    def to_json(self) -> str:
        return json.dumps({
            "schema": 1,
            "side": self.side.value,
            "epsilon": self.epsilon,
            "N": self.N,
            "entries": {str(n): str(c) for n, c in self.entries},
        }, sort_keys=True)


@dataclass(frozen=True)
class ModuleFamily:
    """Action data for one family; ``k`` is specialized to a rational."""

    k: Fraction = Fraction(1)
    epsilon: int = 1
    N: int = 24
    # hook for negative controls: extra term added to every c(t)
    c_shift: Fraction = field(default=Fraction(0), repr=False)

    def __post_init__(self):
        object.__setattr__(self, "k", as_scalar(self.k))
        if self.epsilon not in (1, -1):
            raise ValueError("epsilon must be +1 or -1")
        if self.N < 2:
            raise ValueError("window N must be at least 2")

    def c(self, twice_t: int) -> PolyE:
        """``k^2/2 + E (twice_t/2)^2``."""
        return PolyE.linear(self.k * self.k / 2 + self.c_shift, Fraction(twice_t * twice_t, 4))

    def omega(self) -> PolyE:
        """Scalar by which the regularized Casimir acts: ``-E/4 - k^2/2``."""
        return PolyE.linear(-self.k * self.k / 2, Fraction(-1, 4))

    def basis(self, n: int, side: Side = Side.Primal) -> ModuleVector:
        return ModuleVector.basis(n, side, self.epsilon, self.N)

    def raise_coeff(self, n: int, side: Side) -> PolyE:
        if side is Side.Primal:
            return PolyE.const(1) if n >= 0 else self.c(2 * n + 1) * Fraction(-1, 2)
        return self.c(2 * n + 1) * Fraction(1, 2) if n >= 0 else PolyE.const(-1)

    def lower_coeff(self, n: int, side: Side) -> PolyE:
        if side is Side.Primal:
            return self.c(2 * n - 1) * Fraction(-1, 2) if n > 0 else PolyE.const(1)
        return PolyE.const(-1) if n > 0 else self.c(2 * n - 1) * Fraction(1, 2)

    def reflection_coeff(self, n: int) -> object:
        return (-I) ** n * self.epsilon if n >= 0 else I ** (-n) * self.epsilon

    def _own(self, v: ModuleVector) -> None:
        if (v.epsilon, v.N) != (self.epsilon, self.N):
            raise ValueError("vector does not belong to this family")

    def act(self, g: Gen, v: ModuleVector) -> ModuleVector:
        self._own(v)
        if g is Gen.J:
            return v._like({n: c * n for n, c in v.entries})
        if g is Gen.Aplus or g is Gen.Aminus:
            step = 1 if g is Gen.Aplus else -1
            coeff = self.raise_coeff if step == 1 else self.lower_coeff
            out: dict[int, PolyE] = {}
            for n, c in v.entries:
                m = n + step
                if abs(m) > self.N:
                    raise TruncationOverflow(
                        f"{g.value} on weight {n} leaves window |n| <= {self.N}")
                out[m] = out.get(m, PolyE()) + c * coeff(n, v.side)
            return v._like(out)
        if g is Gen.Reflection:
            return v._like({-n: c * self.reflection_coeff(n) for n, c in v.entries})
        if g is Gen.Omega:
            Jv = self.act(Gen.J, v)
            JJv = self.act(Gen.J, Jv)
            AmAp = self.act(Gen.Aminus, self.act(Gen.Aplus, v))
            return JJv.scale(_E) + Jv.scale(_E) + AmAp.scale(2)
        raise ValueError(f"unknown generator {g}")

    def act_word(self, word: str | list[Gen], v: ModuleVector) -> ModuleVector:
        """Apply generators right to left, as in the product ``X1 X2 ... v``."""
        for g in reversed(list(word)):
            v = self.act(g, v)
        return v

    # -- checks ------------------------------------------------------------

    def interior(self, N: int | None = None) -> range:
        N = self.N if N is None else N
        if N < 2 or N > self.N:
            raise ValueError(f"window must satisfy 2 <= N <= {self.N}")
        return range(-(N - 1), N)

    def omega_scalar_check(self, N: int | None = None) -> Report:
        rep = Report(f"Casimir scalar (eps={self.epsilon:+d})")
        w = self.omega()
        for side in Side:
            for n in self.interior(N):
                f = self.basis(n, side)
                resid = self.act(Gen.Omega, f) - f.scale(w)
                rep.add(f"Omega {side.value} n={n}", resid.is_zero(), str(resid))
        return rep

    def bracket_consistency_check(self, N: int | None = None) -> Report:
        rep = Report(f"ladder brackets (eps={self.epsilon:+d})")
        P, M, J = Gen.Aplus, Gen.Aminus, Gen.J
        for side in Side:
            for n in self.interior(N):
                f = self.basis(n, side)
                pm = self.act_word([P, M], f) - self.act_word([M, P], f)
                rep.add(f"[A+,A-]=EJ {side.value} n={n}",
                        pm == self.act(J, f).scale(_E), str(pm))
                jp = self.act_word([J, P], f) - self.act_word([P, J], f)
                rep.add(f"[J,A+]=A+ {side.value} n={n}", jp == self.act(P, f), str(jp))
                jm = self.act_word([J, M], f) - self.act_word([M, J], f)
                rep.add(f"[J,A-]=-A- {side.value} n={n}",
                        jm == self.act(M, f).scale(-1), str(jm))
        return rep

    def ladder_product_check(self, N: int | None = None) -> Report:
        """``A-A+`` and ``A+A-`` act on ``f_n`` by the closed-form scalars."""
        rep = Report(f"ladder products (eps={self.epsilon:+d})")
        for n in self.interior(N):
            f = self.basis(n)
            mp = self.act_word([Gen.Aminus, Gen.Aplus], f)
            pm = self.act_word([Gen.Aplus, Gen.Aminus], f)
            rep.add(f"A-A+ n={n}", mp == f.scale(self.c(2 * n + 1) * Fraction(-1, 2)), str(mp))
            rep.add(f"A+A- n={n}", pm == f.scale(self.c(2 * n - 1) * Fraction(-1, 2)), str(pm))
        return rep

    def reflection_equivariance_check(self, N: int | None = None) -> Report:
        rep = Report(f"reflection equivariance (eps={self.epsilon:+d})")
        table = reflected_generators()
        for side in Side:
            for n in self.interior(N):
                f = self.basis(n, side)
                for X in (Gen.J, Gen.Aplus, Gen.Aminus):
                    lhs = self.act(Gen.Reflection, self.act(X, f))
                    coef, Y = table[X]
                    rhs = self.act(Y, self.act(Gen.Reflection, f)).scale(coef)
                    rep.add(f"s({X.value} v_{n}) {side.value}", lhs == rhs,
                            f"{lhs} != {rhs}")
                ss = self.act(Gen.Reflection, self.act(Gen.Reflection, f))
                rep.add(f"s^2 v_{n} {side.value}", ss == f, str(ss))
        return rep

    def weight_zero_reflection_eigenvalue(self) -> object:
        """Eigenvalue of ``s`` on the weight-0 line (distinguishes the two families)."""
        return self.act(Gen.Reflection, self.basis(0)).coeff(0).coeffs[0]


@cache
def reflected_generators() -> dict[Gen, tuple[object, Gen]]:
    """``s . X = c Y`` on the ladder basis, read off the real-basis K-action."""
    from .pair_and_groups import LADDER_BASIS, ladder_table, reflect

    names = {"J": Gen.J, "A+": Gen.Aplus, "A-": Gen.Aminus}
    out = {}
    for name, img in ladder_table(reflect).items():
        (idx,) = [i for i, c in enumerate(img.coords) if not c.is_zero()]
        (coef,) = img.coords[idx].coeffs
        out[names[name]] = (coef, names[LADDER_BASIS[idx]])
    return out


def fiber_evaluate(v: ModuleVector, e) -> dict[int, object]:
    """Specialize every coefficient at ``E = e``; zero values are dropped."""
    out = {}
    for n, c in v.entries:
        val = c(as_scalar(e))
        if val != 0:
            out[n] = val
    return out


def module_suite(k=1, N: int = 24, epsilons=(1, -1)) -> Report:
    rep = Report("module axioms")
    for eps in epsilons:
        fam = ModuleFamily(as_scalar(k), eps, N)
        rep.extend(fam.bracket_consistency_check())
        rep.extend(fam.omega_scalar_check())
        rep.extend(fam.ladder_product_check())
        rep.extend(fam.reflection_equivariance_check())
    return rep
