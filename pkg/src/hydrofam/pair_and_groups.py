"""The family Lie algebra over C[E], its K-action and real structure, and
the matrix families it is isomorphic to.

The abstract algebra has basis ``(L, A_x, A_y)`` over ``C[E]`` with

    [A_y, L] = A_x,   [L, A_x] = A_y,   [A_x, A_y] = -E L,

and ladder basis ``J = iL``, ``A_+- = (A_x +- i A_y)/sqrt(2)``. The matrix
family consists of the 3x3 matrices ``Z`` with ``Z^T D_x + D_x Z = 0``,
``D_x = diag(x, x, 1)``, spanned by ``j_1 = e23 - x e32``,
``j_2 = e13 - x e31``, ``j_3 = e12 - e21``; the dictionary is ``x = -E``,
``A_x -> j_1``, ``A_y -> j_2``, ``L -> j_3``.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import Iterable, Sequence

import numpy as np

from .algebra_core import INV_SQRT2, I, PolyE, as_scalar
from .report import Report

REAL_BASIS = ("L", "Ax", "Ay")
LADDER_BASIS = ("J", "A+", "A-")
_BASES = {"real": REAL_BASIS, "ladder": LADDER_BASIS}

_E = PolyE.E()
_ONE = PolyE.const(1)
_ZERO = PolyE()

Coords = tuple[PolyE, PolyE, PolyE]
StructureTable = dict[tuple[str, str], tuple]


def _coords(*cs) -> Coords:
    return tuple(c if isinstance(c, PolyE) else PolyE.const(c) for c in cs)


#: brackets of basis pairs, as coordinates in the same basis
REAL_STRUCTURE: StructureTable = {
    ("L", "Ax"): _coords(0, 0, 1),        # [L, A_x] = A_y
    ("L", "Ay"): _coords(0, -1, 0),       # [L, A_y] = -A_x
    ("Ax", "Ay"): _coords(-_E, 0, 0),     # [A_x, A_y] = -E L
}
LADDER_STRUCTURE: StructureTable = {
    ("J", "A+"): _coords(0, 1, 0),        # [J, A_+] = A_+
    ("J", "A-"): _coords(0, 0, -1),       # [J, A_-] = -A_-
    ("A+", "A-"): _coords(_E, 0, 0),      # [A_+, A_-] = E J
}


@dataclass(frozen=True)
class FamilyLieElement:
    """Element of the family algebra: PolyE coordinates in one basis view."""

    coords: Coords
    basis: str = "real"

    def __post_init__(self):
        if self.basis not in _BASES:
            raise ValueError(f"unknown basis {self.basis!r}")
        object.__setattr__(self, "coords", tuple(
            c if isinstance(c, PolyE) else PolyE.const(c) for c in self.coords))

    @classmethod
    def basis_element(cls, name: str) -> FamilyLieElement:
        for basis, names in _BASES.items():
            if name in names:
                cs = [_ZERO] * 3
                cs[names.index(name)] = _ONE
                return cls(tuple(cs), basis)
        raise KeyError(name)

    @classmethod
    def zero(cls, basis: str = "real") -> FamilyLieElement:
        return cls((_ZERO, _ZERO, _ZERO), basis)

    def _same(self, other: FamilyLieElement) -> None:
        if self.basis != other.basis:
            raise ValueError("elements are in different basis views")

    def __add__(self, other: FamilyLieElement) -> FamilyLieElement:
        self._same(other)
        return FamilyLieElement(tuple(a + b for a, b in zip(self.coords, other.coords)), self.basis)

    def __sub__(self, other: FamilyLieElement) -> FamilyLieElement:
        self._same(other)
        return FamilyLieElement(tuple(a - b for a, b in zip(self.coords, other.coords)), self.basis)

    def __neg__(self) -> FamilyLieElement:
        return FamilyLieElement(tuple(-a for a in self.coords), self.basis)

    def scale(self, p) -> FamilyLieElement:
        return FamilyLieElement(tuple(a * p for a in self.coords), self.basis)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def to_ladder(self) -> FamilyLieElement:
        if self.basis == "ladder":
            return self
        return FamilyLieElement(_apply(_REAL_TO_LADDER, self.coords), "ladder")

    def to_real(self) -> FamilyLieElement:
        if self.basis == "real":
            return self
        return FamilyLieElement(_apply(_LADDER_TO_REAL, self.coords), "real")

    def view(self, basis: str) -> FamilyLieElement:
        return self.to_real() if basis == "real" else self.to_ladder()

    def __str__(self):
        names = _BASES[self.basis]
        parts = [f"({c})*{n}" for c, n in zip(self.coords, names) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"


# change of basis, columns indexed by source basis vectors
# real -> ladder: L = -i J, A_x = (A_+ + A_-)/sqrt2, A_y = -i (A_+ - A_-)/sqrt2
_REAL_TO_LADDER = (
    (-I, 0, 0),
    (0, INV_SQRT2, -I * INV_SQRT2),
    (0, INV_SQRT2, I * INV_SQRT2),
)
# ladder -> real: J = i L, A_+ = (A_x + i A_y)/sqrt2, A_- = (A_x - i A_y)/sqrt2
_LADDER_TO_REAL = (
    (I, 0, 0),
    (0, INV_SQRT2, INV_SQRT2),
    (0, I * INV_SQRT2, -I * INV_SQRT2),
)


def _apply(mat, coords: Coords) -> Coords:
    out = []
    for row in mat:
        acc = PolyE()
        for m, c in zip(row, coords):
            if m != 0:
                acc = acc + c * m
        out.append(acc)
    return tuple(out)


def family_bracket(a: FamilyLieElement, b: FamilyLieElement,
                   table: StructureTable | None = None) -> FamilyLieElement:
    """``C[E]``-bilinear bracket from a structure-constant table."""
    a._same(b)
    names = _BASES[a.basis]
    if table is None:
        table = REAL_STRUCTURE if a.basis == "real" else LADDER_STRUCTURE
    acc = [PolyE(), PolyE(), PolyE()]
    for i, ai in enumerate(a.coords):
        if ai.is_zero():
            continue
        for j, bj in enumerate(b.coords):
            if bj.is_zero() or i == j:
                continue
            key = (names[i], names[j])
            if key in table:
                sign, out = 1, table[key]
            else:
                sign, out = -1, table[(names[j], names[i])]
            w = ai * bj * sign
            for n in range(3):
                acc[n] = acc[n] + w * out[n]
    return FamilyLieElement(tuple(acc), a.basis)


def jacobi_check(basis: str = "real", table: StructureTable | None = None) -> Report:
    rep = Report(f"Jacobi identity ({basis} basis)")
    els = [FamilyLieElement.basis_element(n) for n in _BASES[basis]]
    names = _BASES[basis]
    for i in range(3):
        for j in range(3):
            for k in range(3):
                a, b, c = els[i], els[j], els[k]
                s = (family_bracket(a, family_bracket(b, c, table), table)
                     + family_bracket(b, family_bracket(c, a, table), table)
                     + family_bracket(c, family_bracket(a, b, table), table))
                rep.add(f"Jacobi({names[i]},{names[j]},{names[k]})", s.is_zero(), str(s))
    return rep


# ---------------------------------------------------------------------------
# K-action and real structure


def reflect(a: FamilyLieElement) -> FamilyLieElement:
    """Action of ``s``: ``s.L = -L``, ``s.A_x = -A_y``, ``s.A_y = -A_x``."""
    L, ax, ay = a.to_real().coords
    return FamilyLieElement((-L, -ay, -ax), "real").view(a.basis)


def rotation_generator(a: FamilyLieElement) -> FamilyLieElement:
    """Derivative at ``theta = 0`` of ``R(theta)``: ``A_x -> -A_y``, ``A_y -> A_x``, ``L -> 0``."""
    _, ax, ay = a.to_real().coords
    return FamilyLieElement((_ZERO, ay, -ax), "real").view(a.basis)


def weight(a: FamilyLieElement) -> int:
    """Integer ``n`` with ``R(theta) a = e^{i n theta} a``; raises if ``a`` is not a weight vector."""
    if a.is_zero():
        raise ValueError("zero has no weight")
    lad = a.to_ladder()
    image = rotation_generator(lad)
    for n in (-1, 0, 1):
        if image == lad.scale(I * n):
            return n
    raise ValueError(f"{a} is not a weight vector")


def k_action(g: str, a: FamilyLieElement) -> FamilyLieElement:
    """``g`` is ``"s"`` (the reflection) or ``"dR"`` (infinitesimal rotation)."""
    if g == "s":
        return reflect(a)
    if g == "dR":
        return rotation_generator(a)
    raise ValueError(f"unsupported K element {g!r}")


@cache
def sigma_signs() -> dict[str, int]:
    """Signs ``c`` with ``sigma(X) = c X`` for ``X`` in ``(L, A_x, A_y)``.

    ``sigma(T) = -T^*``; ``L`` is skew-adjoint and ``A = (i/sqrt2) B`` with
    ``B`` self-adjoint, both obtained from the formal adjoints in :mod:`diffop`.
    """
    from . import diffop

    L_sign = -diffop.adjoint_sign(diffop.angular_momentum())
    # A^* = conj(i/sqrt2) B^* = -(i/sqrt2) sB B  ->  sigma(A) = sB A
    ax_sign = diffop.adjoint_sign(diffop.runge_lenz_x())
    ay_sign = diffop.adjoint_sign(diffop.runge_lenz_y())
    return {"L": L_sign, "Ax": ax_sign, "Ay": ay_sign}


def sigma(a: FamilyLieElement) -> FamilyLieElement:
    """Conjugate-linear real structure; coefficients map by ``p -> conj(p(conj E))``."""
    signs = sigma_signs()
    L, ax, ay = a.to_real().coords
    out = (L.conjugate() * signs["L"], ax.conjugate() * signs["Ax"], ay.conjugate() * signs["Ay"])
    return FamilyLieElement(out, "real").view(a.basis)


def ladder_table(op) -> dict[str, FamilyLieElement]:
    """Image of each ladder basis vector under ``op``, in the ladder view."""
    return {n: op(FamilyLieElement.basis_element(n)).to_ladder() for n in LADDER_BASIS}


# ---------------------------------------------------------------------------
# matrix family


def j_matrices() -> dict[str, list[list[PolyE]]]:
    """``j_1, j_2, j_3`` as 3x3 matrices over ``Q[x]`` (``x`` stored as the PolyE variable)."""
    x = PolyE.E()
    z, one = PolyE(), PolyE.const(1)

    def mat(entries):
        m = [[z, z, z] for _ in range(3)]
        for (i, j), v in entries.items():
            m[i][j] = v
        return m

    return {
        "j1": mat({(1, 2): one, (2, 1): -x}),
        "j2": mat({(0, 2): one, (2, 0): -x}),
        "j3": mat({(0, 1): one, (1, 0): -one}),
    }


def _matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(3)), PolyE()) for j in range(3)]
            for i in range(3)]


def _matsub(a, b):
    return [[a[i][j] - b[i][j] for j in range(3)] for i in range(3)]


def matrix_bracket(a, b):
    return _matsub(_matmul(a, b), _matmul(b, a))


def so3_family_coords(z) -> tuple[PolyE, PolyE, PolyE]:
    """Coordinates of ``z`` in ``(j1, j2, j3)``; raises if ``z`` is not in the family."""
    c1, c2, c3 = z[1][2], z[0][2], z[0][1]
    js = j_matrices()
    recon = [[js["j1"][i][j] * c1 + js["j2"][i][j] * c2 + js["j3"][i][j] * c3
              for j in range(3)] for i in range(3)]
    if recon != z:
        raise ValueError("matrix is not in the so3~ family")
    return c1, c2, c3


_ISO = {"Ax": "j1", "Ay": "j2", "L": "j3"}


def iso_transport_check(E_sample: Iterable = (-2, 0, 1),
                        table: StructureTable | None = None) -> Report:
    """Transport matrix brackets through ``x = -E`` and compare with the table.

    The comparison is an identity of polynomials; the sample points give an
    additional pointwise check of both sides.
    """
    samples = [as_scalar(e) for e in E_sample]
    if not samples:
        raise ValueError("need a nonempty sample set")
    table = REAL_STRUCTURE if table is None else table
    js = j_matrices()
    minus_E = -PolyE.E()
    rep = Report("matrix family transport (x = -E)")
    for a in REAL_BASIS:
        for b in REAL_BASIS:
            m = matrix_bracket(js[_ISO[a]], js[_ISO[b]])
            c1, c2, c3 = so3_family_coords(m)
            transported = tuple(c.compose(minus_E) for c in (c3, c1, c2))
            ea = FamilyLieElement.basis_element(a)
            eb = FamilyLieElement.basis_element(b)
            expected = family_bracket(ea, eb, table).coords
            ok = transported == expected
            pointwise = all(t(e) == x(e) for t, x in zip(transported, expected) for e in samples)
            detail = "" if ok else (
                f"matrix side {[str(t) for t in transported]} vs table {[str(x) for x in expected]}")
            rep.add(f"[{a},{b}] <-> [{_ISO[a]},{_ISO[b]}]", ok and pointwise, detail)
    return rep


def _as_matrix(A) -> list[list[Fraction]]:
    return [[as_scalar(v) for v in row] for row in A]


def _det3(m) -> Fraction:
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _t(m):
    return [[m[j][i] for j in range(3)] for i in range(3)]


def _mm(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def fiber_membership(A: Sequence[Sequence], x, kind: str = "group") -> bool:
    """Membership of a rational 3x3 matrix in the fiber at ``x``."""
    A = _as_matrix(A)
    x = as_scalar(x)
    D = [[x, 0, 0], [0, x, 0], [0, 0, Fraction(1)]]
    if kind == "algebra":
        lhs = _mm(_t(A), D)
        rhs = _mm(D, A)
        return all(lhs[i][j] + rhs[i][j] == 0 for i in range(3) for j in range(3))
    if kind != "group":
        raise ValueError("kind must be 'group' or 'algebra'")
    if x != 0:
        return _mm(_mm(_t(A), D), A) == D and _det3(A) == 1
    # x = 0: [[B, v], [0, det B]] with B orthogonal
    if A[2][0] != 0 or A[2][1] != 0:
        return False
    B = [row[:2] for row in A[:2]]
    BtB = [[sum(B[k][i] * B[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    if BtB != [[1, 0], [0, 1]]:
        return False
    return A[2][2] == B[0][0] * B[1][1] - B[0][1] * B[1][0]


class RealFormLabel(enum.Enum):
    CompactSO3 = "CompactSO3"
    SplitSO21 = "SplitSO21"
    EuclideanO2R2 = "EuclideanO2R2"


def signature(x) -> tuple[int, int, int]:
    """``(n_plus, n_minus, n_zero)`` of ``diag(x, x, 1)``."""
    x = as_scalar(x)
    if x > 0:
        return (3, 0, 0)
    if x < 0:
        return (1, 2, 0)
    return (1, 0, 2)


def classify_real_form(x) -> RealFormLabel:
    plus, minus, zero = signature(x)
    if zero:
        return RealFormLabel.EuclideanO2R2
    if minus:
        return RealFormLabel.SplitSO21
    return RealFormLabel.CompactSO3


def quadric_geometry(x, level) -> str:
    """Shape of ``{v : x(u^2 + v^2) + w^2 = level}``."""
    x, level = as_scalar(x), as_scalar(level)
    if level == 0:
        raise ValueError("level must be nonzero")
    if x > 0:
        return "ellipsoid" if level > 0 else "empty"
    if x == 0:
        return "two parallel planes" if level > 0 else "empty"
    return "two-sheeted hyperboloid" if level > 0 else "one-sheeted hyperboloid"


#: Shape labels are read off the signature of D_x at level 1.
GEOMETRY_NOTE = ("x>0: ellipsoid; x<0: two-sheeted hyperboloid; x=0: two parallel planes "
                 "(from the signature of D_x)")


def classification_report(x) -> dict:
    x = as_scalar(x)
    return {
        "schema": 1,
        "x": str(x),
        "E": str(-x),
        "signature": list(signature(x)),
        "real_form": classify_real_form(x).value,
        "homogeneous_space": quadric_geometry(x, 1),
        "note": GEOMETRY_NOTE,
    }


@dataclass(frozen=True)
class QuadricGrid:
    n_angle: int = 24
    n_axial: int = 12
    extent: float = 2.0
    tol: float = 1e-9


def quadric_sample(x, level, grid: QuadricGrid | None = None) -> np.ndarray:
    """Points ``(u, v, w)`` on ``x(u^2 + v^2) + w^2 = level`` by parametric sweep.

    Returns an ``(n, 3)`` array, empty when the level set is empty.
    """
    grid = grid or QuadricGrid()
    if grid.n_angle < 1 or grid.n_axial < 1:
        raise ValueError("grid must be nonempty")
    xq, lq = as_scalar(x), as_scalar(level)
    shape = quadric_geometry(xq, lq)
    xf, lf = float(xq), float(lq)
    theta = np.linspace(0.0, 2 * np.pi, grid.n_angle, endpoint=False)
    if shape == "empty":
        return np.empty((0, 3))
    if shape == "ellipsoid":
        phi = np.linspace(0.0, np.pi, grid.n_axial)
        P, T = np.meshgrid(phi, theta, indexing="ij")
        rad = math.sqrt(lf / xf) * np.sin(P)
        w = math.sqrt(lf) * np.cos(P)
    elif shape == "two parallel planes":
        rho = np.linspace(0.0, grid.extent, grid.n_axial)
        R, T = np.meshgrid(rho, theta, indexing="ij")
        rad = R
        w = np.full_like(R, math.sqrt(lf))
        pts = _polar(rad, T, w)
        return _filter(np.vstack([pts, pts * np.array([1.0, 1.0, -1.0])]), xf, lf, grid.tol)
    elif shape == "two-sheeted hyperboloid":
        t = np.linspace(0.0, grid.extent, grid.n_axial)
        S, T = np.meshgrid(t, theta, indexing="ij")
        rad = math.sqrt(lf / -xf) * np.sinh(S)
        w = math.sqrt(lf) * np.cosh(S)
        pts = _polar(rad, T, w)
        return _filter(np.vstack([pts, pts * np.array([1.0, 1.0, -1.0])]), xf, lf, grid.tol)
    else:
        t = np.linspace(-grid.extent, grid.extent, grid.n_axial)
        S, T = np.meshgrid(t, theta, indexing="ij")
        rad = math.sqrt(-lf / -xf) * np.cosh(S)
        w = math.sqrt(-lf) * np.sinh(S)
    return _filter(_polar(rad, T, w), xf, lf, grid.tol)


def _polar(rad, theta, w) -> np.ndarray:
    return np.column_stack([(rad * np.cos(theta)).ravel(), (rad * np.sin(theta)).ravel(), w.ravel()])


def _filter(pts: np.ndarray, x: float, level: float, tol: float) -> np.ndarray:
    vals = x * (pts[:, 0] ** 2 + pts[:, 1] ** 2) + pts[:, 2] ** 2
    keep = np.abs(vals - level) <= tol * max(1.0, np.max(np.abs(vals), initial=1.0))
    pts = pts[keep] + 0.0  # normalizes -0.0
    _, first = np.unique(pts, axis=0, return_index=True)
    return pts[np.sort(first)]


def quadric_csv(points: np.ndarray, x) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["u", "v", "w", "x_param"])
    xs = str(as_scalar(x))
    for u, v, z in points:
        w.writerow([f"{u:.12g}", f"{v:.12g}", f"{z:.12g}", xs])
    return buf.getvalue()


def classification_json(x) -> str:
    return json.dumps(classification_report(x), sort_keys=True)
