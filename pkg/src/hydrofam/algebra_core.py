"""Exact arithmetic kernel.

Scalars are :class:`fractions.Fraction` (rationals) or :class:`GaussianRational`
(``re + im*i``). :class:`GaussianSqrt2` adjoins ``sqrt(2)`` for the one place
it is needed: the change of basis between ``(L, A_x, A_y)`` and the ladder
basis ``(J, A_+, A_-)``.

:class:`PolyE` is a univariate polynomial in the energy ``E`` with exact
coefficients. :class:`CoeffFn` is an element of the coefficient ring of the
differential operators on the punctured plane, stored as
``(p + q*r) / (x^2 + y^2)^s`` with ``p, q`` polynomials in ``x, y, k`` and
``r = sqrt(x^2 + y^2)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction

#: degree of the zero polynomial
ZERO_DEGREE = -math.inf
#: vanishing order of the zero polynomial
INFINITE_ORDER = math.inf


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pow__(self, n: int):
        if n < 0:
            return GaussianRational(1) / (self ** (-n))
        out = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{_istr(self.im)}"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {_istr(abs(self.im))})"


def _istr(c: Fraction) -> str:
    if c == 1:
        return "i"
    if c == -1:
        return "-i"
    return f"{c}*i"


I = GaussianRational(0, 1)


class GaussianSqrt2:
    """Exact number ``a + b*sqrt(2)`` with Gaussian-rational ``a, b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = _as_gauss(a)
        self.b = _as_gauss(b)

    @staticmethod
    def _lift(other):
        if isinstance(other, GaussianSqrt2):
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return GaussianSqrt2(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianSqrt2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return GaussianSqrt2(self.a * o.a + 2 * self.b * o.b,
                             self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianSqrt2(-self.a, -self.b)

    def conjugate(self) -> GaussianSqrt2:
        return GaussianSqrt2(self.a.conjugate(), self.b.conjugate())

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __complex__(self):
        return complex(self.a) + complex(self.b) * math.sqrt(2)

    def __repr__(self):
        return f"GaussianSqrt2({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        return f"({self.a} + {self.b}*sqrt2)"


Scalar = Union[Fraction, GaussianRational, GaussianSqrt2]


def _as_gauss(c) -> GaussianRational:
    if isinstance(c, GaussianRational):
        return c
    if isinstance(c, GaussianSqrt2):
        raise TypeError("cannot narrow GaussianSqrt2 to GaussianRational")
    return GaussianRational(c, 0)


SQRT2 = GaussianSqrt2(0, 1)
INV_SQRT2 = GaussianSqrt2(0, Fraction(1, 2))

def as_scalar(c) -> Scalar:
    """Coerce to the narrowest exact scalar type that holds ``c``."""
    if isinstance(c, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, Fraction):
        return c
    if isinstance(c, str):
        return parse_rational(c)
    if isinstance(c, GaussianRational):
        return c.re if c.im == 0 else c
    if isinstance(c, GaussianSqrt2):
        if c.b == 0:
            return as_scalar(c.a)
        return c
    raise TypeError(f"not an exact scalar: {c!r}")


def conj(c):
    """Complex conjugate of an exact scalar."""
    if isinstance(c, (GaussianRational, GaussianSqrt2)):
        return c.conjugate()
    return c


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer string; floats are rejected."""
    s = text.strip()
    if not s or any(ch in s for ch in ".eE"):
        raise ValueError(f"not an exact rational: {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


# ---------------------------------------------------------------------------
# univariate polynomials in E


class PolyE:
    """Exact polynomial in ``E``; coefficients ascend in degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_scalar(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> PolyE:
        return cls((c,))

    @classmethod
    def E(cls) -> PolyE:
        return cls((0, 1))

    @classmethod
    def linear(cls, c0, c1) -> PolyE:
        """``c0 + c1*E``."""
        return cls((c0, c1))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _lift(self, other):
        if isinstance(other, PolyE):
            return other
        if isinstance(other, (int, Fraction, GaussianRational, GaussianSqrt2)):
            return PolyE.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return PolyE(out)

    __radd__ = __add__

    def __neg__(self):
        return PolyE(-c for c in self.coeffs)

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
        if not self.coeffs or not o.coeffs:
            return PolyE()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return PolyE(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = PolyE.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, e):
        """Evaluate by Horner's rule (exact for exact ``e``)."""
        if not _is_exact(e):
            acc = 0j if isinstance(e, complex) else 0.0
            for c in reversed(self.coeffs):
                cc = complex(c)
                acc = acc * e + (cc.real if isinstance(acc, float) and cc.imag == 0 else cc)
            return acc
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * e + c
        return as_scalar(acc)

    def conjugate(self) -> PolyE:
        """``sigma(p)(E) = conj(p(conj(E)))``."""
        return PolyE(conj(c) for c in self.coeffs)

    def compose(self, other: PolyE) -> PolyE:
        """``self(other(E))``."""
        acc = PolyE()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def divmod_linear(self, e) -> tuple[PolyE, Scalar]:
        """Synthetic division by ``(E - e)``: returns ``(quotient, remainder)``."""
        if not self.coeffs:
            return PolyE(), Fraction(0)
        n = len(self.coeffs) - 1
        q = [Fraction(0)] * n
        acc = self.coeffs[n]
        for i in range(n - 1, -1, -1):
            q[i] = acc
            acc = self.coeffs[i] + acc * e
        return PolyE(q), as_scalar(acc)

    def divide_linear_power(self, e, n: int) -> PolyE:
        """Exact quotient by ``(E - e)**n``; raises if not divisible."""
        p = self
        for _ in range(n):
            p, rem = p.divmod_linear(e)
            if rem != 0:
                raise ArithmeticError(f"(E - {e}) does not divide {self}")
        return p

    def linear_root(self):
        """Root of a degree-one polynomial."""
        if self.degree != 1:
            raise ValueError("linear_root needs a degree-one polynomial")
        c0, c1 = self.coeffs
        return as_scalar(-c0 / c1)

    def __repr__(self):
        return f"PolyE({list(map(str, self.coeffs))})"

    def __str__(self):
        return format_poly(self.coeffs, "E")


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction, GaussianRational, GaussianSqrt2))


def format_poly(coeffs, var: str) -> str:
    if not coeffs:
        return "0"
    parts = []
    for d in range(len(coeffs) - 1, -1, -1):
        c = coeffs[d]
        if c == 0:
            continue
        mono = "" if d == 0 else (var if d == 1 else f"{var}^{d}")
        if isinstance(c, Fraction):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = str(a) if not mono else (mono if a == 1 else f"{a}*{mono}")
        else:
            sign = "+"
            body = str(c) if not mono else f"{c}*{mono}"
        parts.append((sign, body))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def vanishing_order(p: PolyE, e) -> Union[int, float]:
    """Largest ``n`` with ``(E - e)**n`` dividing ``p``.

    Returns :data:`INFINITE_ORDER` for the zero polynomial.
    """
    if p.is_zero():
        return INFINITE_ORDER
    n = 0
    while True:
        q, rem = p.divmod_linear(e)
        if rem != 0:
            return n
        p = q
        n += 1


def poly_arith(a: PolyE, b: PolyE, op: str) -> PolyE:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# sparse polynomials in (x, y, k); keys are exponent triples

MPoly = dict  # {(deg_x, deg_y, deg_k): scalar}


def mp_const(c) -> MPoly:
    c = as_scalar(c)
    return {(0, 0, 0): c} if c != 0 else {}


def mp_monomial(c, dx=0, dy=0, dk=0) -> MPoly:
    c = as_scalar(c)
    return {(dx, dy, dk): c} if c != 0 else {}


def mp_add(p: MPoly, q: MPoly, sign=1) -> MPoly:
    out = dict(p)
    for key, c in q.items():
        v = out.get(key, 0) + (c if sign == 1 else -c)
        if v == 0:
            out.pop(key, None)
        else:
            out[key] = v
    return out


def mp_scale(p: MPoly, c) -> MPoly:
    if c == 0:
        return {}
    return {key: v * c for key, v in p.items()}


def mp_mul(p: MPoly, q: MPoly) -> MPoly:
    out: MPoly = {}
    for (a1, b1, c1), v1 in p.items():
        for (a2, b2, c2), v2 in q.items():
            key = (a1 + a2, b1 + b2, c1 + c2)
            out[key] = out.get(key, 0) + v1 * v2
    return {key: v for key, v in out.items() if v != 0}


def mp_shift(p: MPoly, dx=0, dy=0) -> MPoly:
    return {(a + dx, b + dy, c): v for (a, b, c), v in p.items()}


def mp_mul_rho(p: MPoly) -> MPoly:
    """Multiply by ``x^2 + y^2``."""
    return mp_add(mp_shift(p, dx=2), mp_shift(p, dy=2))


def mp_div_rho(p: MPoly):
    """Exact quotient by ``x^2 + y^2``, or ``None`` when it does not divide."""
    if not p:
        return {}
    work = dict(p)
    quot: MPoly = {}
    top = max(a for a, _, _ in work)
    for a in range(top, 1, -1):
        for key in [key for key in work if key[0] == a]:
            c = work.pop(key)
            _, b, kd = key
            quot[(a - 2, b, kd)] = quot.get((a - 2, b, kd), 0) + c
            low = (a - 2, b + 2, kd)
            v = work.get(low, 0) - c
            if v == 0:
                work.pop(low, None)
            else:
                work[low] = v
    if work:
        return None
    return {key: v for key, v in quot.items() if v != 0}


def mp_diff(p: MPoly, var: str) -> MPoly:
    idx = {"x": 0, "y": 1, "k": 2}[var]
    out: MPoly = {}
    for key, v in p.items():
        d = key[idx]
        if d:
            nk = list(key)
            nk[idx] -= 1
            out[tuple(nk)] = v * d
    return out


def mp_subs_k(p: MPoly, value) -> MPoly:
    out: MPoly = {}
    for (a, b, kd), v in p.items():
        key = (a, b, 0)
        out[key] = out.get(key, 0) + v * as_scalar(value) ** kd
    return {key: v for key, v in out.items() if v != 0}


def mp_k_component(p: MPoly, deg: int) -> MPoly:
    return {key: v for key, v in p.items() if key[2] == deg}


def mp_eval(p: MPoly, x, y, k):
    return sum(complex(v) * x ** a * y ** b * k ** c for (a, b, c), v in p.items())


def mp_str(p: MPoly) -> str:
    if not p:
        return "0"
    terms = []
    for (a, b, c), v in sorted(p.items(), reverse=True):
        mono = "*".join(
            f"{n}^{e}" if e > 1 else n
            for n, e in (("x", a), ("y", b), ("k", c)) if e
        )
        if isinstance(v, Fraction):
            sign = "-" if v < 0 else "+"
            m = abs(v)
            body = mono if (m == 1 and mono) else (f"{m}*{mono}" if mono else str(m))
        else:
            sign = "+"
            body = f"{v}*{mono}" if mono else str(v)
        terms.append((sign, body))
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# coefficient ring


class CoeffFn:
    """``(p + q*r) / (x^2 + y^2)^s`` in canonical form.

    Canonical means: when ``s > 0``, ``x^2 + y^2`` does not divide both ``p``
    and ``q``; zero is ``p = q = 0, s = 0``. With that, equality is
    componentwise.
    """

    __slots__ = ("p", "q", "s", "_hash")

    def __init__(self, p: MPoly | None = None, q: MPoly | None = None, s: int = 0):
        p = {key: as_scalar(v) for key, v in (p or {}).items() if v != 0}
        q = {key: as_scalar(v) for key, v in (q or {}).items() if v != 0}
        if s < 0:
            raise ValueError("negative power of x^2 + y^2")
        while s > 0:
            if not p and not q:
                s = 0
                break
            p2 = mp_div_rho(p)
            if p2 is None:
                break
            q2 = mp_div_rho(q)
            if q2 is None:
                break
            p, q, s = p2, q2, s - 1
        if not p and not q:
            s = 0
        self.p = p
        self.q = q
        self.s = s
        self._hash = None

    # named elements
    @classmethod
    def const(cls, c) -> CoeffFn:
        return cls(mp_const(c))

    @classmethod
    def x(cls) -> CoeffFn:
        return cls(mp_monomial(1, dx=1))

    @classmethod
    def y(cls) -> CoeffFn:
        return cls(mp_monomial(1, dy=1))

    @classmethod
    def k(cls) -> CoeffFn:
        return cls(mp_monomial(1, dk=1))

    @classmethod
    def r(cls) -> CoeffFn:
        return cls(None, mp_const(1))

    @classmethod
    def inv_rho(cls) -> CoeffFn:
        """``1 / (x^2 + y^2)``."""
        return cls(mp_const(1), None, 1)

    def is_zero(self) -> bool:
        return not self.p and not self.q

    def __bool__(self):
        return not self.is_zero()

    @staticmethod
    def _lift(other):
        if isinstance(other, CoeffFn):
            return other
        if isinstance(other, (int, Fraction, GaussianRational)):
            return CoeffFn.const(other)
        return NotImplemented

    def _lifted(self, s: int) -> tuple[MPoly, MPoly]:
        p, q = self.p, self.q
        for _ in range(s - self.s):
            p, q = mp_mul_rho(p), mp_mul_rho(q)
        return p, q

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        s = max(self.s, o.s)
        p1, q1 = self._lifted(s)
        p2, q2 = o._lifted(s)
        return CoeffFn(mp_add(p1, p2), mp_add(q1, q2), s)

    __radd__ = __add__

    def __neg__(self):
        return CoeffFn(mp_scale(self.p, -1), mp_scale(self.q, -1), self.s)

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
        if self.is_zero() or o.is_zero():
            return CoeffFn()
        p = mp_add(mp_mul(self.p, o.p), mp_mul_rho(mp_mul(self.q, o.q)))
        q = mp_add(mp_mul(self.p, o.q), mp_mul(self.q, o.p))
        return CoeffFn(p, q, self.s + o.s)

    __rmul__ = __mul__

    def scale(self, c) -> CoeffFn:
        return CoeffFn(mp_scale(self.p, c), mp_scale(self.q, c), self.s)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self.s == o.s and self.p == o.p and self.q == o.q

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.p.items()), frozenset(self.q.items()), self.s))
        return self._hash

    def canonical(self) -> CoeffFn:
        return CoeffFn(self.p, self.q, self.s)

    def subs_k(self, value) -> CoeffFn:
        return CoeffFn(mp_subs_k(self.p, value), mp_subs_k(self.q, value), self.s)

    def k_component(self, deg: int) -> CoeffFn:
        return CoeffFn(mp_k_component(self.p, deg), mp_k_component(self.q, deg), self.s)

    def k_degree(self):
        degs = [key[2] for key in self.p] + [key[2] for key in self.q]
        return max(degs) if degs else ZERO_DEGREE

    def evaluate(self, x: float, y: float, k: float) -> complex:
        rho = x * x + y * y
        r = math.sqrt(rho)
        return (mp_eval(self.p, x, y, k) + mp_eval(self.q, x, y, k) * r) / rho ** self.s

    def __repr__(self):
        return f"CoeffFn(p={self.p!r}, q={self.q!r}, s={self.s})"

    def __str__(self):
        if self.is_zero():
            return "0"
        num = []
        if self.p:
            num.append(mp_str(self.p))
        if self.q:
            qs = mp_str(self.q)
            if qs == "1":
                num.append("r")
            else:
                num.append(f"({qs})*r" if " " in qs else f"{qs}*r")
        body = " + ".join(num)
        if self.s == 0:
            return body
        den = "(x^2 + y^2)" if self.s == 1 else f"(x^2 + y^2)^{self.s}"
        return f"({body})/{den}"


def coeff_deriv(c: CoeffFn, direction: str) -> CoeffFn:
    """Exact partial derivative in ``x`` or ``y``.

    With ``rho = x^2 + y^2`` and ``dr/dx = x*r/rho``:
    ``d/dx[(p + q r) rho^-s] = (rho p_x - 2 s x p + (rho q_x + x q - 2 s x q) r) rho^-(s+1)``.
    """
    if direction not in ("x", "y"):
        raise ValueError("direction must be 'x' or 'y'")
    if c.is_zero():
        return CoeffFn()
    v = mp_monomial(1, dx=1) if direction == "x" else mp_monomial(1, dy=1)
    s = c.s
    p_new = mp_add(mp_mul_rho(mp_diff(c.p, direction)), mp_scale(mp_mul(v, c.p), -2 * s))
    q_new = mp_add(
        mp_mul_rho(mp_diff(c.q, direction)),
        mp_scale(mp_mul(v, c.q), 1 - 2 * s),
    )
    return CoeffFn(p_new, q_new, s + 1)
