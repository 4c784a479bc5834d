"""Intertwiners ``F -> F^<sigma>``, Jantzen filtrations and invariant forms.

The intertwiner is diagonal, ``psi(f_n) = psi_n(E) q_n``, with

    psi_n = 2^{-|n|} psi_0 prod_{m=1}^{|n|} (k^2/2 + E (m - 1/2)^2).

At a point ``e`` the Jantzen layer of ``f_n`` is the vanishing order of
``psi_n`` at ``e``; on layer ``j`` the form is diagonal with entries
``((E - e)^{-j} psi_n)(e)``. The sign pattern of those entries decides
which quotients are infinitesimally unitary, and that in turn classifies
the point ``e`` as scattering, zero energy, bound state or not in the
spectrum.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra_core import (INFINITE_ORDER, GaussianRational, PolyE, as_scalar, conj,
                           parse_rational, vanishing_order)
from .module_family import Gen, ModuleFamily, ModuleVector, Side
from .report import Report

_ONE = PolyE.const(1)


class DivisionByLowerOrder(ArithmeticError):
    """The requested layer exceeds the vanishing order of ``psi_s``."""


def psi_factor(m: int, k) -> PolyE:
    """``k^2/2 + E (m - 1/2)^2``."""
    k = as_scalar(k)
    return PolyE.linear(k * k / 2, Fraction((2 * m - 1) ** 2, 4))


def psi_closed_form(n: int, k=1, psi0: PolyE = _ONE) -> PolyE:
    out = psi0 * Fraction(1, 2 ** abs(n))
    for m in range(1, abs(n) + 1):
        out = out * psi_factor(m, k)
    return out


@dataclass
class Intertwiner:
    """Memoized ``psi_n`` table; ``overrides`` replaces entries (negative controls)."""

    k: Fraction = Fraction(1)
    psi0: PolyE = field(default_factory=lambda: _ONE)
    overrides: dict[int, PolyE] = field(default_factory=dict)
    _cache: dict[int, PolyE] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.k = as_scalar(self.k)
        if self.psi0.is_zero():
            raise ValueError("psi0 must be nonzero")

    def psi(self, n: int) -> PolyE:
        if n in self.overrides:
            return self.overrides[n]
        if n not in self._cache:
            self._cache[n] = psi_closed_form(n, self.k, self.psi0)
        return self._cache[n]

    def apply(self, v: ModuleVector) -> ModuleVector:
        if v.side is not Side.Primal:
            raise ValueError("the intertwiner acts on the primal side")
        return ModuleVector(Side.Dual, {n: c * self.psi(n) for n, c in v.entries},
                            v.epsilon, v.N)


def psi_by_recursion(n_max: int, k=1, psi0: PolyE = _ONE, epsilon: int = 1) -> dict[int, PolyE]:
    """Solve ``psi(A_+- f_n) = A_+- psi(f_n)`` outward from weight 0.

    Going outward the primal ladder coefficient is the constant 1, so each
    step is ``psi_{n+-1} = psi_n * (dual coefficient)``.
    """
    fam = ModuleFamily(as_scalar(k), epsilon, max(n_max + 1, 2))
    out = {0: psi0}
    for n in range(0, n_max):
        prim, dual = fam.raise_coeff(n, Side.Primal), fam.raise_coeff(n, Side.Dual)
        out[n + 1] = _divide_const(out[n] * dual, prim)
    for n in range(0, -n_max, -1):
        prim, dual = fam.lower_coeff(n, Side.Primal), fam.lower_coeff(n, Side.Dual)
        out[n - 1] = _divide_const(out[n] * dual, prim)
    return out


def _divide_const(p: PolyE, c: PolyE) -> PolyE:
    if c.degree != 0:
        raise ArithmeticError("outward ladder coefficient is not a unit")
    (c0,) = c.coeffs
    return PolyE(a / c0 for a in p.coeffs)


def psi_recursion_check(n_max: int = 20, intertwiner: Intertwiner | None = None,
                        epsilons: Sequence[int] = (1, -1), fail_fast: bool = False) -> Report:
    """Recursion versus the table, symmetry, and equivariance of the whole map."""
    tw = intertwiner or Intertwiner()
    rep = Report("intertwiner")
    for eps in epsilons:
        rec = psi_by_recursion(n_max, tw.k, tw.psi0, eps)
        for n in range(-n_max, n_max + 1):
            rep.add(f"psi_{n} recursion = closed form (eps={eps:+d})", rec[n] == tw.psi(n),
                    f"recursion {rec[n]} vs table {tw.psi(n)}")
            if fail_fast and not rep.passed:
                return rep
    for n in range(1, n_max + 1):
        rep.add(f"psi_{n} = psi_{-n}", tw.psi(n) == tw.psi(-n), f"{tw.psi(n)} vs {tw.psi(-n)}")
    for eps in epsilons:
        fam = ModuleFamily(tw.k, eps, n_max + 1)
        for n in range(-n_max, n_max + 1):
            f = fam.basis(n)
            for g in (Gen.Aplus, Gen.Aminus, Gen.J, Gen.Reflection):
                if g in (Gen.Aplus, Gen.Aminus) and abs(n) == n_max and (n > 0) == (g is Gen.Aplus):
                    continue
                lhs = tw.apply(fam.act(g, f))
                rhs = fam.act(g, tw.apply(f))
                rep.add(f"psi({g.value} f_{n}) = {g.value} psi(f_{n}) (eps={eps:+d})",
                        lhs == rhs, f"{lhs} vs {rhs}")
    return rep


# ---------------------------------------------------------------------------
# filtration and forms


class Definiteness(enum.Enum):
    PositiveDefinite = "PositiveDefinite"
    NegativeDefinite = "NegativeDefinite"
    Indefinite = "Indefinite"
    Zero = "Zero"
    NotApplicable = "NotApplicable"

    @property
    def definite(self) -> bool:
        return self in (Definiteness.PositiveDefinite, Definiteness.NegativeDefinite)


class Kind(enum.Enum):
    ScatteringContinuum = "ScatteringContinuum"
    ZeroEnergy = "ZeroEnergy"
    BoundState = "BoundState"
    NotInSpectrum = "NotInSpectrum"


@dataclass(frozen=True)
class Classification:
    kind: Kind
    m: int | None = None

    def __str__(self):
        return f"BoundState({self.m})" if self.kind is Kind.BoundState else self.kind.value

    @property
    def in_spectrum(self) -> bool:
        return self.kind is not Kind.NotInSpectrum


@dataclass(frozen=True)
class Quotient:
    order: int
    weights: tuple[int, ...]
    infinite: bool

    @property
    def dim(self) -> int | str:
        return "infinite" if self.infinite else len(self.weights)


def _is_real(e) -> bool:
    return not isinstance(e, GaussianRational)


def jantzen_filtration(e, k=1, N: int = 24, psi0: PolyE = _ONE,
                       intertwiner: Intertwiner | None = None) -> tuple[dict[int, int], list[Quotient]]:
    """Layer orders of every weight in ``[-N, N]`` and the resulting quotients."""
    e = as_scalar(e)
    tw = intertwiner or Intertwiner(as_scalar(k), psi0)
    orders = {n: vanishing_order(tw.psi(n), e) for n in range(-N, N + 1)}
    if any(o == INFINITE_ORDER for o in orders.values()):
        raise ValueError("psi_n vanishes identically")
    quotients = []
    for j in sorted(set(orders.values())):
        ws = tuple(n for n in range(-N, N + 1) if orders[n] == j)
        quotients.append(Quotient(j, ws, N in ws or -N in ws))
    return orders, quotients


def hermitian_form(e, layer: int, s: int, t: int, k=1, psi0: PolyE = _ONE,
                   intertwiner: Intertwiner | None = None):
    """``<[f_s], [f_t]>`` on layer ``layer`` at the real point ``e``."""
    e = as_scalar(e)
    tw = intertwiner or Intertwiner(as_scalar(k), psi0)
    for w in (s, t):
        order = vanishing_order(tw.psi(w), e)
        if order < layer:
            raise DivisionByLowerOrder(
                f"psi_{w} has order {order} at {e}, below layer {layer}")
    if s != t:
        return Fraction(0)
    return tw.psi(s).divide_linear_power(e, layer)(e)


def _sign_label(values) -> Definiteness:
    vals = list(values)
    if any(v == 0 for v in vals):
        return Definiteness.Zero
    if all(v > 0 for v in vals):
        return Definiteness.PositiveDefinite
    if all(v < 0 for v in vals):
        return Definiteness.NegativeDefinite
    return Definiteness.Indefinite


def first_negative_factor(e: Fraction, k) -> int | None:
    """Least ``m >= 1`` with ``k^2/2 + e (m - 1/2)^2 < 0``; ``None`` if there is none."""
    k = as_scalar(k)
    if e >= 0:
        return None
    m = max(1, math.floor(math.sqrt(float(k * k / (-2 * e)))) - 1)
    while m > 1 and psi_factor(m - 1, k)(e) < 0:
        m -= 1
    while psi_factor(m, k)(e) >= 0:
        m += 1
    return m


def reduced_value(n: int, e: Fraction, k, psi0: PolyE = _ONE) -> Fraction:
    """``((E - e)^{-ord} psi_n)(e)`` from the factored form, for any ``n``."""
    k = as_scalar(k)
    val = psi0.divide_linear_power(e, vanishing_order(psi0, e))(e) / 2 ** abs(n)
    for m in range(1, abs(n) + 1):
        f = psi_factor(m, k)
        v = f(e)
        val *= v if v != 0 else f.coeffs[1]
    return val


@dataclass
class JantzenReport:
    point: object
    k: Fraction
    window: int
    layer_orders: dict[int, int]
    quotients: list[Quotient]
    form_diagonal: dict[tuple[int, int], object]
    definiteness: dict[int, Definiteness]
    classification: Classification
    tail_witness: dict | None = None

    def finite_quotient_dim(self) -> int | None:
        dims = [q.dim for q in self.quotients if not q.infinite]
        return dims[0] if dims else None

    def definite_quotients(self) -> list[Quotient]:
        return [q for q in self.quotients if self.definiteness[q.order].definite]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "point": str(self.point),
            "k": str(self.k),
            "window": self.window,
            "layers": [{"order": q.order, "weights": list(q.weights), "dim": q.dim}
                       for q in self.quotients],
            "form": [{"layer": j, "weight": n, "value": str(v)}
                     for (j, n), v in sorted(self.form_diagonal.items())],
            "definiteness": {str(j): d.value for j, d in sorted(self.definiteness.items())},
            "classification": str(self.classification),
            "tail_witness": self.tail_witness,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def classify_fiber(e, k=1, N: int = 24, psi0: PolyE = _ONE,
                   intertwiner: Intertwiner | None = None) -> JantzenReport:
    """Filtration, form diagonal, definiteness and spectral classification at ``e``.

    Definiteness of the quotient that runs past the window is decided with an
    exact witness: once a factor of ``psi_n`` turns negative every later
    factor is negative too, so two consecutive weights past that point carry
    opposite signs.
    """
    e = as_scalar(e)
    k = as_scalar(k)
    tw = intertwiner or Intertwiner(k, psi0)
    orders, quotients = jantzen_filtration(e, k, N, intertwiner=tw)
    if not _is_real(e):
        return JantzenReport(e, k, N, orders, quotients, {},
                             {q.order: Definiteness.NotApplicable for q in quotients},
                             Classification(Kind.NotInSpectrum))
    diag = {(q.order, n): hermitian_form(e, q.order, n, n, intertwiner=tw)
            for q in quotients for n in q.weights}
    definiteness, witness = {}, None
    m_neg = first_negative_factor(e, k)
    for q in quotients:
        vals = [diag[(q.order, n)] for n in q.weights]
        if q.infinite and m_neg is not None:
            pair = (m_neg - 1, m_neg)
            wvals = [reduced_value(n, e, k, tw.psi0) for n in pair]
            witness = {"weights": list(pair), "signs": [1 if v > 0 else -1 for v in wvals]}
            vals += wvals
        definiteness[q.order] = _sign_label(vals)
    definite = [q for q in quotients if definiteness[q.order].definite]
    if len(quotients) == 1 and definite:
        cls = Classification(Kind.ScatteringContinuum if e > 0 else
                             Kind.ZeroEnergy if e == 0 else Kind.NotInSpectrum)
    elif len(quotients) > 1 and len(definite) == 1 and not definite[0].infinite:
        cls = Classification(Kind.BoundState, max(abs(n) for n in definite[0].weights))
    else:
        cls = Classification(Kind.NotInSpectrum)
    return JantzenReport(e, k, N, orders, quotients, diag, definiteness, cls, witness)


def form_invariance_check(e, k=1, N: int = 24, epsilon: int = 1,
                          sigma_table: dict | None = None) -> Report:
    """``<X f, f'> + <f, sigma(X) f'> = 0`` on every layer of the fiber at real ``e``."""
    from .pair_and_groups import LADDER_BASIS, ladder_table, sigma

    e, k = as_scalar(e), as_scalar(k)
    fam = ModuleFamily(k, epsilon, N)
    tw = Intertwiner(k)
    orders, quotients = jantzen_filtration(e, k, N, intertwiner=tw)
    names = {"J": Gen.J, "A+": Gen.Aplus, "A-": Gen.Aminus}
    sig = {}
    for name, img in ladder_table(sigma).items():
        (idx,) = [i for i, c in enumerate(img.coords) if not c.is_zero()]
        (coef,) = img.coords[idx].coeffs
        sig[names[name]] = (coef, names[LADDER_BASIS[idx]])
    sig.update(sigma_table or {})

    def image(g: Gen, n: int) -> dict[int, object]:
        v = fam.act(g, fam.basis(n))
        return {m: c(e) for m, c in v.entries}

    rep = Report(f"form invariance at e={e}")
    for q in quotients:
        j = q.order
        mset = {n for n in orders if orders[n] >= j}
        members = [n for n in range(-(N - 1), N) if n in mset]

        def form(a, b):
            return hermitian_form(e, j, a, b, intertwiner=tw) if a == b else 0

        for a in members:
            for X in (Gen.J, Gen.Aplus, Gen.Aminus):
                coef, Y = sig[X]
                Xa = image(X, a)
                leak = {m: c for m, c in Xa.items() if m not in mset and c != 0}
                if leak:
                    rep.add(f"layer {j}: {X.value} f_{a} stays in layer", False, str(leak))
                for b in (a - 1, a, a + 1):
                    if b not in mset or abs(b) == N:
                        continue
                    Yb = image(Y, b)
                    t1 = sum((c * form(m, b) for m, c in Xa.items() if m in mset), Fraction(0))
                    t2 = sum((conj(coef * c) * form(a, m) for m, c in Yb.items() if m in mset),
                             Fraction(0))
                    rep.add(f"layer {j}: <{X.value} f_{a}, f_{b}> + <f_{a}, sigma({X.value}) f_{b}>",
                            t1 + t2 == 0, str(t1 + t2))
    return rep


# ---------------------------------------------------------------------------
# spectrum


_INTERVAL = re.compile(r"^\s*([\[(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\])])\s*$")


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    closed_lo: bool = True
    closed_hi: bool = False

    @classmethod
    def parse(cls, text: str) -> Interval:
        """Parse ``"[-3, 0)"`` style notation with exact endpoints."""
        m = _INTERVAL.match(text)
        if not m:
            raise ValueError(f"malformed interval {text!r}")
        iv = cls(parse_rational(m.group(2)), parse_rational(m.group(3)),
                 m.group(1) == "[", m.group(4) == "]")
        if iv.is_empty():
            raise ValueError(f"empty interval {text!r}")
        return iv

    def is_empty(self) -> bool:
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.closed_lo and self.closed_hi)

    def __contains__(self, x) -> bool:
        x = as_scalar(x)
        above = x >= self.lo if self.closed_lo else x > self.lo
        below = x <= self.hi if self.closed_hi else x < self.hi
        return above and below

    def __str__(self):
        return f"{'[' if self.closed_lo else '('}{self.lo}, {self.hi}{']' if self.closed_hi else ')'}"


def reducibility_points(k, window_E: Interval, m_max: int) -> list[Fraction]:
    """Roots of the factors of ``psi`` inside the window, in order of ``m``."""
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    roots = (psi_factor(m, k).linear_root() for m in range(1, m_max + 2))
    return [r for r in roots if r in window_E]


def bound_point(m: int, k) -> Fraction:
    """``-k^2 / (2 (m + 1/2)^2)``."""
    k = as_scalar(k)
    return -k * k / (2 * Fraction(2 * m + 1, 2) ** 2)


def sample_points(window: Interval, count: int) -> list[Fraction]:
    """Evenly spaced exact samples inside the window, with 0 added when it lies inside."""
    if count < 1:
        raise ValueError("sample count must be positive")
    step = (window.hi - window.lo) / max(count - 1, 1)
    pts = {window.lo + i * step for i in range(count)}
    pts.add(Fraction(0))
    return sorted(p for p in pts if p in window)


def classify_many(points: Iterable, k=1, N: int = 24) -> list[JantzenReport]:
    return [classify_fiber(e, k, N) for e in points]


def classification_csv(reports: Iterable[JantzenReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["e", "classification", "finite_quotient_dim"])
    for r in reports:
        d = r.finite_quotient_dim()
        w.writerow([str(r.point), str(r.classification), "" if d is None else d])
    return buf.getvalue()
