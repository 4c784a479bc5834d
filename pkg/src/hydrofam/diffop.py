"""Differential operators on the punctured plane.

Operators are kept in normal order, every coefficient to the left of every
derivative: ``sum c_{ab}(x, y, k) * dx^a dy^b``. The coupling ``k`` stays a
polynomial indeterminate, so identities checked here hold for every ``k``.

The Runge-Lenz type generators carry a factor ``i/sqrt(2)``. To keep the
arithmetic inside the rationals we work with the rescaled generators
``B = -i*sqrt(2)*A``; see :data:`RESCALE`.
"""

from __future__ import annotations

import enum
import json
import random
from fractions import Fraction
from math import comb
from typing import Iterable

from .algebra_core import (
    CoeffFn,
    GaussianRational,
    coeff_deriv,
    conj,
    mp_monomial,
)
from .report import Report

Index = tuple[int, int]


class DiffOp:
    """Normal-ordered differential operator ``{(a, b): coefficient}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Index, CoeffFn] | None = None):
        self.terms = {idx: c for idx, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def coeff(cls, c) -> DiffOp:
        """Multiplication operator."""
        return cls({(0, 0): CoeffFn._lift(c)})

    @classmethod
    def partial(cls, a: int = 0, b: int = 0, c=1) -> DiffOp:
        return cls({(a, b): CoeffFn._lift(c)})

    @classmethod
    def identity(cls) -> DiffOp:
        return cls.coeff(1)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @staticmethod
    def _lift(other):
        if isinstance(other, DiffOp):
            return other
        if isinstance(other, (int, Fraction, GaussianRational, CoeffFn)):
            return DiffOp.coeff(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for idx, c in o.terms.items():
            out[idx] = out[idx] + c if idx in out else c
        return DiffOp(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({idx: -c for idx, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return diff_mul(self, o)

    def __rmul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return diff_mul(o, self)

    def __pow__(self, n: int):
        out = DiffOp.identity()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    @property
    def order(self) -> int:
        return max((a + b for a, b in self.terms), default=-1)

    def order_part(self, n: int) -> DiffOp:
        """Terms with exactly ``n`` derivatives."""
        return DiffOp({idx: c for idx, c in self.terms.items() if sum(idx) == n})

    def subs_k(self, value) -> DiffOp:
        return DiffOp({idx: c.subs_k(value) for idx, c in self.terms.items()})

    def k_component(self, deg: int) -> DiffOp:
        return DiffOp({idx: c.k_component(deg) for idx, c in self.terms.items()})

    def __repr__(self):
        return f"DiffOp({to_text(self)})"

    __str__ = lambda self: to_text(self)  # noqa: E731


def diff_mul(a: DiffOp, b: DiffOp) -> DiffOp:
    """Composition ``a o b`` by the Leibniz rule."""
    out: dict[Index, CoeffFn] = {}
    for (a1, a2), f in a.terms.items():
        for (b1, b2), g in b.terms.items():
            derivs = _derivatives(g, a1, a2)
            for i in range(a1 + 1):
                for j in range(a2 + 1):
                    dg = derivs[i][j]
                    if dg.is_zero():
                        continue
                    w = comb(a1, i) * comb(a2, j)
                    term = f * dg
                    if w != 1:
                        term = term.scale(w)
                    idx = (a1 - i + b1, a2 - j + b2)
                    out[idx] = out[idx] + term if idx in out else term
    return DiffOp(out)


def _derivatives(g: CoeffFn, nx: int, ny: int) -> list[list[CoeffFn]]:
    table = [[g]]
    for _ in range(nx):
        table.append([coeff_deriv(table[-1][0], "x")])
    for row in table:
        for _ in range(ny):
            row.append(coeff_deriv(row[-1], "y"))
    return table


def commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return a * b - b * a


def formal_adjoint(op: DiffOp) -> DiffOp:
    """Formal adjoint for the flat measure ``dx dy``: ``(c d^a)* = (-1)^|a| d^a o conj(c)``."""
    out = DiffOp()
    for (a, b), c in op.terms.items():
        cbar = CoeffFn({key: conj(v) for key, v in c.p.items()},
                       {key: conj(v) for key, v in c.q.items()}, c.s)
        term = DiffOp.partial(a, b) * DiffOp.coeff(cbar)
        out = out + (term if (a + b) % 2 == 0 else -term)
    return out


# ---------------------------------------------------------------------------
# the named generators


class GeneratorTag(enum.Enum):
    H = "H"
    L = "L"
    Bx = "Bx"
    By = "By"
    Lsq = "Lsq"
    Identity = "Identity"


#: Bx, By are the Runge-Lenz generators times -i*sqrt(2); brackets transform as
#: [L, A] -> [L, B] unchanged and [A, A'] -> -1/2 [B, B'].
RESCALE = {"B_over_A": "-i*sqrt(2)", "A_over_B": "i/sqrt(2)", "AA_bracket_factor": Fraction(-1, 2)}

_x = CoeffFn.x()
_y = CoeffFn.y()
_k = CoeffFn.k()
_r = CoeffFn.r()
_inv_rho = CoeffFn.inv_rho()
_half = Fraction(1, 2)


def hamiltonian() -> DiffOp:
    """``-1/2 (dxx + dyy) - k/r``."""
    return (DiffOp.partial(2, 0, -_half) + DiffOp.partial(0, 2, -_half)
            + DiffOp.coeff(-(_k * _r * _inv_rho)))


def angular_momentum() -> DiffOp:
    """``y dx - x dy``."""
    return DiffOp.partial(1, 0, _y) + DiffOp.partial(0, 1, -_x)


def runge_lenz_x() -> DiffOp:
    """``x dyy - y dxy - 1/2 dx + k x/r`` (that is ``-i sqrt(2) A_x``)."""
    return (DiffOp.partial(0, 2, _x) + DiffOp.partial(1, 1, -_y)
            + DiffOp.partial(1, 0, -_half) + DiffOp.coeff(_k * _x * _r * _inv_rho))


def runge_lenz_y() -> DiffOp:
    """``y dxx - x dxy - 1/2 dy + k y/r`` (that is ``-i sqrt(2) A_y``)."""
    return (DiffOp.partial(2, 0, _y) + DiffOp.partial(1, 1, -_x)
            + DiffOp.partial(0, 1, -_half) + DiffOp.coeff(_k * _y * _r * _inv_rho))


def generator(tag: GeneratorTag | str) -> DiffOp:
    tag = GeneratorTag(tag)
    if tag is GeneratorTag.H:
        return hamiltonian()
    if tag is GeneratorTag.L:
        return angular_momentum()
    if tag is GeneratorTag.Bx:
        return runge_lenz_x()
    if tag is GeneratorTag.By:
        return runge_lenz_y()
    if tag is GeneratorTag.Lsq:
        L = angular_momentum()
        return L * L
    return DiffOp.identity()


# ---------------------------------------------------------------------------
# verification suites

#: structure constants of the rescaled bracket table:
#: [L, Bx] = c1 By, [By, L] = c2 Bx, [Bx, By] = c3 H L
BRACKET_CONSTANTS = {"[L,Bx]=c*By": Fraction(1), "[By,L]=c*Bx": Fraction(1),
                     "[Bx,By]=c*H*L": Fraction(2)}


def verify_bracket_table(constants: dict[str, Fraction] | None = None) -> Report:
    c = dict(BRACKET_CONSTANTS)
    c.update(constants or {})
    H, L, Bx, By = hamiltonian(), angular_momentum(), runge_lenz_x(), runge_lenz_y()
    cases = {
        "[L,Bx]=c*By": (commutator(L, Bx), By),
        "[By,L]=c*Bx": (commutator(By, L), Bx),
        "[Bx,By]=c*H*L": (commutator(Bx, By), H * L),
    }
    rep = Report("bracket table (rescaled)")
    for name, (lhs, rhs) in cases.items():
        resid = lhs - DiffOp.coeff(c[name]) * rhs
        rep.add(name.replace("c", str(c[name]), 1), resid.is_zero(),
                "" if resid.is_zero() else f"remainder {to_text(resid)}")
    return rep


def verify_centralizer(tags: Iterable[str] = ("L", "Lsq", "Bx", "By", "Identity")) -> Report:
    H = hamiltonian()
    rep = Report("centralizer of H")
    for tag in tags:
        resid = commutator(H, generator(tag))
        rep.add(f"[H,{tag}]=0", resid.is_zero(),
                "" if resid.is_zero() else f"remainder {to_text(resid)}")
    return rep


def casimir_sides(casimir_constant=None) -> tuple[DiffOp, DiffOp]:
    """``(-1/2 (Bx^2 + By^2) + c, H (L^2 - 1/4))``, ``c`` defaulting to ``k^2/2``."""
    H, L, Bx, By = hamiltonian(), angular_momentum(), runge_lenz_x(), runge_lenz_y()
    c = _k * _k * _half if casimir_constant is None else CoeffFn._lift(casimir_constant)
    lhs = DiffOp.coeff(-_half) * (Bx * Bx + By * By) + DiffOp.coeff(c)
    rhs = H * (L * L - DiffOp.coeff(Fraction(1, 4)))
    return lhs, rhs


def casimir_residual(casimir_constant=None) -> DiffOp:
    lhs, rhs = casimir_sides(casimir_constant)
    return lhs - rhs


def verify_casimir_identity(casimir_constant=None) -> Report:
    """Exact check of ``A_x^2 + A_y^2 + k^2/2 = H (L^2 - 1/4)`` in rescaled form.

    Besides the full identity, both sides are compared derivative order by
    derivative order and on their ``k``-free parts (the free Hamiltonian).
    """
    lhs, rhs = casimir_sides(casimir_constant)
    resid = lhs - rhs
    rep = Report("Casimir relation")
    label = "k^2/2" if casimir_constant is None else str(CoeffFn._lift(casimir_constant))
    rep.add(f"-1/2(Bx^2+By^2) + {label} - H(L^2-1/4) = 0", resid.is_zero(),
            "" if resid.is_zero() else f"remainder {to_text(resid)}")
    for n in range(5):
        diff = lhs.order_part(n) - rhs.order_part(n)
        rep.add(f"order-{n} parts agree", diff.is_zero(),
                "" if diff.is_zero() else to_text(diff))
    k0 = lhs.k_component(0) - rhs.k_component(0)
    rep.add("k^0 parts agree", k0.is_zero(), "" if k0.is_zero() else to_text(k0))
    return rep


def adjoint_sign(op: DiffOp) -> int:
    """Return ``+1`` if ``op`` is formally self-adjoint, ``-1`` if skew; else raise."""
    adj = formal_adjoint(op)
    if adj == op:
        return 1
    if adj == -op:
        return -1
    raise ValueError("operator is neither self-adjoint nor skew-adjoint")


def jacobi_residual(a: DiffOp, b: DiffOp, c: DiffOp) -> DiffOp:
    return (commutator(a, commutator(b, c)) + commutator(b, commutator(c, a))
            + commutator(c, commutator(a, b)))


def random_diffop(rng: random.Random, max_order: int = 2, max_deg: int = 1,
                  n_terms: int = 2) -> DiffOp:
    """Low-degree operator with integer coefficients, occasionally involving ``r``."""
    out = DiffOp()
    for _ in range(n_terms):
        a = rng.randint(0, max_order)
        b = rng.randint(0, max_order - a)
        p = mp_monomial(rng.randint(-3, 3), dx=rng.randint(0, max_deg),
                        dy=rng.randint(0, max_deg), dk=rng.randint(0, 1))
        q = mp_monomial(rng.choice((0, 0, 1, -1)), dx=rng.randint(0, max_deg))
        s = rng.choice((0, 0, 1))
        out = out + DiffOp.partial(a, b, CoeffFn(p, q, s))
    return out


# ---------------------------------------------------------------------------
# output

_ORDERED = lambda op: sorted(op.terms.items(), key=lambda kv: (-sum(kv[0]), -kv[0][0]))  # noqa: E731


def to_text(op: DiffOp) -> str:
    """ASCII rendering, e.g. ``y*dx - x*dy``."""
    if op.is_zero():
        return "0"
    parts = []
    for (a, b), c in _ORDERED(op):
        ds = "*".join(s for s in (_dpow("dx", a), _dpow("dy", b)) if s)
        cs = str(c)
        neg = cs.startswith("-") and " " not in cs.strip("-")
        if neg:
            cs = cs[1:]
        elif " " in cs and not cs.startswith("("):
            cs = f"({cs})"
        if ds:
            body = ds if cs == "1" else f"{cs}*{ds}"
        else:
            body = cs
        parts.append(("-" if neg else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _dpow(d: str, n: int) -> str:
    return "" if n == 0 else (d if n == 1 else f"{d}^{n}")


def _mp_json(p) -> list:
    return [[a, b, c, str(v)] for (a, b, c), v in sorted(p.items())]


def to_json_terms(op: DiffOp) -> list[dict]:
    return [
        {"dx": a, "dy": b, "p": _mp_json(c.p), "q": _mp_json(c.q), "s": c.s}
        for (a, b), c in sorted(op.terms.items())
    ]


def to_json(op: DiffOp) -> str:
    return json.dumps(to_json_terms(op), sort_keys=True)
