"""Radial solutions of the planar Coulomb problem and residual checks.

With ``psi = R(r) e^{i l phi}`` the eigenvalue equation ``H psi = E psi`` for
``H = -1/2 Laplacian - k/r`` reduces to

    -1/2 (R'' + R'/r - l^2 R / r^2) - k R / r - E R = 0.

Writing ``R = r^|l| e^{-kappa r} w(2 kappa r)`` turns this into Kummer's
equation with ``a = |l| + 1/2 - k/kappa`` and ``b = 2|l| + 1``, where
``E = -kappa^2/2``. Bound states take ``kappa = k/(n - 1/2)``; scattering
states take ``kappa = i sqrt(2E)``. At ``E = 0`` the substitution
``t = sqrt(8 k r)`` gives Bessel's equation of order ``2|l|``.
"""

from __future__ import annotations

import cmath
import csv
import enum
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import mpmath

from .algebra_core import as_scalar


class NoConvergence(ArithmeticError):
    """The series term budget was exhausted."""


class PoleAtB(ArithmeticError):
    """``b`` is a nonpositive integer."""


class UnderflowNearNode(ArithmeticError):
    """``|R(r)|`` is below the floor; relative residuals are meaningless there."""


@dataclass(frozen=True)
class SeriesConfig:
    tol: float = 1e-14
    budget: int = 500


DEFAULT_SERIES = SeriesConfig()


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    terms: int


def _nonpositive_integer(a: complex) -> int | None:
    a = complex(a)
    if a.imag == 0 and a.real <= 0 and a.real == math.floor(a.real):
        return int(-a.real)
    return None


def _guard_digits(z: complex) -> int:
    # partial sums can exceed the result by roughly e^|z|; carry that many extra digits
    return 20 + math.ceil(abs(z) / math.log(10))


def hyp1f1_series(a: complex, b: complex, z: complex,
                  config: SeriesConfig = DEFAULT_SERIES) -> SeriesResult:
    """Kummer's ``M(a, b, z)`` by its power series.

    Terms are accumulated with enough guard digits to absorb the
    cancellation of the alternating-phase series at large ``|z|``; the
    stopping rule is applied to the double-precision term magnitudes.
    """
    a, b, z = complex(a), complex(b), complex(z)
    if _nonpositive_integer(b) is not None:
        raise PoleAtB(f"b = {b} is a nonpositive integer")
    stop = _nonpositive_integer(a)
    with mpmath.workdps(_guard_digits(z)):
        A, B, Z = mpmath.mpc(a), mpmath.mpc(b), mpmath.mpc(z)
        term = mpmath.mpc(1)
        total = term
        j = 0
        while True:
            if stop is not None and j == stop:
                return SeriesResult(complex(total), j + 1)
            term = term * (A + j) / (B + j) * Z / (j + 1)
            total += term
            j += 1
            if stop is None:
                decreasing = abs(a + j) * abs(z) < abs(b + j) * (j + 1)
                if abs(complex(term)) < config.tol and decreasing:
                    return SeriesResult(complex(total), j + 1)
            if j + 1 > config.budget:
                raise NoConvergence(f"1F1({a}; {b}; {z}) needs more than {config.budget} terms")


def hyp1f1(a: complex, b: complex, z: complex, config: SeriesConfig = DEFAULT_SERIES) -> complex:
    return hyp1f1_series(a, b, z, config).value


def bessel_j(nu: int, x: float, config: SeriesConfig = DEFAULT_SERIES) -> float:
    """``J_nu(x)`` for integer order by the ascending series."""
    if nu < 0:
        return (-1) ** (-nu) * bessel_j(-nu, x, config)
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x == 0:
        return 1.0 if nu == 0 else 0.0
    with mpmath.workdps(_guard_digits(x)):
        h = mpmath.mpf(x) / 2
        term = h ** nu / math.factorial(nu)
        total = term
        j = 0
        while True:
            j += 1
            term = -term * h * h / (j * (j + nu))
            total += term
            if abs(float(term)) < config.tol and x * x / 4 < j * (j + nu):
                return float(total)
            if j > config.budget:
                raise NoConvergence(f"J_{nu}({x}) needs more than {config.budget} terms")


class ProfileKind(enum.Enum):
    Bound = "Bound"
    Scattering = "Scattering"
    ZeroEnergy = "ZeroEnergy"


@dataclass(frozen=True)
class RadialProfile:
    kind: ProfileKind
    l: int
    k: float = 1.0
    n: int | None = None
    E: float | None = None

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("k must be positive")
        if self.kind is ProfileKind.Bound:
            if self.n is None or self.n < 1:
                raise ValueError("bound states need n >= 1")
            if abs(self.l) > self.n - 1:
                raise ValueError(f"|l| <= n-1 violated: n={self.n}, l={self.l}")
        elif self.kind is ProfileKind.Scattering:
            if self.E is None or not self.E > 0:
                raise ValueError("scattering states need E > 0")

    @classmethod
    def bound(cls, n: int, l: int, k: float = 1.0) -> RadialProfile:
        return cls(ProfileKind.Bound, l, k, n=n)

    @classmethod
    def scattering(cls, E: float, l: int, k: float = 1.0) -> RadialProfile:
        return cls(ProfileKind.Scattering, l, k, E=float(E))

    @classmethod
    def zero_energy(cls, l: int, k: float = 1.0) -> RadialProfile:
        return cls(ProfileKind.ZeroEnergy, l, k)

    @property
    def energy(self) -> float:
        if self.kind is ProfileKind.Bound:
            return -self.k ** 2 / (2 * (self.n - 0.5) ** 2)
        return self.E if self.kind is ProfileKind.Scattering else 0.0

    def kummer_params(self) -> tuple[complex, complex, complex, float]:
        """``(a, b, s, rho)`` with ``R = (rho r)^|l| e^{-s r/2} M(a, b, s r)``."""
        L = abs(self.l)
        b = 2 * L + 1
        if self.kind is ProfileKind.Bound:
            beta = 2 * self.k / (self.n - 0.5)
            return complex(-self.n + L + 1), complex(b), complex(beta), beta
        if self.kind is ProfileKind.Scattering:
            p = math.sqrt(2 * self.E)
            return complex(L + 0.5, self.k / p), complex(b), complex(0, 2 * p), 2 * p
        raise ValueError("zero-energy profiles are not of Kummer type")

    def label(self) -> str:
        if self.kind is ProfileKind.Bound:
            return f"Bound(n={self.n}, l={self.l})"
        if self.kind is ProfileKind.Scattering:
            return f"Scattering(E={self.E:g}, l={self.l})"
        return f"ZeroEnergy(l={self.l})"


def radial_eval(p: RadialProfile, r: float, deriv: int = 0,
                config: SeriesConfig = DEFAULT_SERIES) -> complex:
    """``R``, ``R'`` or ``R''`` at ``r`` from the closed forms, differentiated analytically."""
    if not r > 0:
        raise ValueError("r must be positive")
    if deriv not in (0, 1, 2):
        raise ValueError("deriv must be 0, 1 or 2")
    L = abs(p.l)
    if p.kind is ProfileKind.ZeroEnergy:
        nu = 2 * L
        t = math.sqrt(8 * p.k * r)
        if deriv == 0:
            return complex(bessel_j(nu, t, config))
        j1 = (bessel_j(nu - 1, t, config) - bessel_j(nu + 1, t, config)) / 2
        dt = 4 * p.k / t
        if deriv == 1:
            return complex(j1 * dt)
        j2 = (bessel_j(nu - 2, t, config) - 2 * bessel_j(nu, t, config)
              + bessel_j(nu + 2, t, config)) / 4
        return complex(j2 * dt * dt - j1 * 16 * p.k ** 2 / t ** 3)

    a, b, s, rho = p.kummer_params()
    z = s * r
    u = (rho * r) ** L
    v = cmath.exp(-s * r / 2)
    w = hyp1f1(a, b, z, config)
    if deriv == 0:
        return u * v * w
    du = L * u / r
    dv = -s / 2 * v
    dw = s * a / b * hyp1f1(a + 1, b + 1, z, config)
    if deriv == 1:
        return du * v * w + u * dv * w + u * v * dw
    d2u = L * (L - 1) * u / r ** 2
    d2v = s * s / 4 * v
    d2w = s * s * a * (a + 1) / (b * (b + 1)) * hyp1f1(a + 2, b + 2, z, config)
    return (d2u * v * w + u * d2v * w + u * v * d2w
            + 2 * (du * dv * w + du * v * dw + u * dv * dw))


def radial_residual(p: RadialProfile, r: float, floor: float = 1e-12,
                    config: SeriesConfig = DEFAULT_SERIES) -> float:
    """``|(radial operator - E) R| / |R|`` at ``r``."""
    R = radial_eval(p, r, 0, config)
    if abs(R) < floor:
        raise UnderflowNearNode(f"|R({r})| = {abs(R):.3e} is below {floor:g}")
    R1 = radial_eval(p, r, 1, config)
    R2 = radial_eval(p, r, 2, config)
    E = p.energy
    res = -0.5 * (R2 + R1 / r - p.l ** 2 * R / r ** 2) - p.k * R / r - E * R
    return abs(res) / max(abs(R), floor)


def finite_difference_check(p: RadialProfile, r: float, h: float = 1e-5,
                            rtol: float = 1e-6) -> tuple[bool, float, float]:
    """Central differences of ``R`` and ``R'`` against the analytic derivatives.

    Returns ``(ok, rel_err_first, rel_err_second)``.
    """
    R = radial_eval(p, r)
    d1 = radial_eval(p, r, 1)
    d2 = radial_eval(p, r, 2)
    fd1 = (radial_eval(p, r + h) - radial_eval(p, r - h)) / (2 * h)
    fd2 = (radial_eval(p, r + h, 1) - radial_eval(p, r - h, 1)) / (2 * h)
    e1 = abs(fd1 - d1) / max(abs(d1), abs(R))
    e2 = abs(fd2 - d2) / max(abs(d2), abs(R))
    return e1 < rtol and e2 < rtol, e1, e2


def bound_energy(n: int, k=1) -> Fraction:
    """``E_n = -k^2 / (2 (n - 1/2)^2)``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    k = as_scalar(k)
    return -k * k / (2 * Fraction(2 * n - 1, 2) ** 2)


def residual_rows(p: RadialProfile, grid: Iterable[float]) -> list[dict]:
    if p.kind is ProfileKind.Bound:
        n_or_E = str(p.n)
    elif p.kind is ProfileKind.Scattering:
        n_or_E = f"{p.E:g}"
    else:
        n_or_E = "0"
    rows = []
    for r in grid:
        R = radial_eval(p, r)
        rows.append({
            "kind": p.kind.value, "n_or_E": n_or_E, "l": p.l, "r": r,
            "value_re": R.real, "value_im": R.imag,
            "residual": radial_residual(p, r),
        })
    return rows


def solutions_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    cols = ["kind", "n_or_E", "l", "r", "value_re", "value_im", "residual"]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow([f"{row[c]:.12g}" if isinstance(row[c], float) else row[c] for c in cols])
    return buf.getvalue()
