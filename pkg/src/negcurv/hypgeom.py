"""Hyperbolic plane kernel for the model planes of constant curvature k < 0.

Everything is computed in the unit-curvature hyperboloid model and rescaled:
a length L at curvature k corresponds to the length L * sqrt(-k) in the unit
model, while angles are unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TOL = 1e-9
DEGENERACY = 1e-12


class GeometryError(ValueError):
    """Raised when a requested hyperbolic figure does not exist."""


def check_curvature(k: float) -> float:
    k = float(k)
    if not math.isfinite(k) or k >= 0:
        raise GeometryError(f"curvature must be finite and negative, got {k!r}")
    return k


def _scale(k: float) -> float:
    return math.sqrt(-check_curvature(k))


def _minkowski(u, v) -> float:
    return float(-u[0] * v[0] + u[1] * v[1] + u[2] * v[2])


@dataclass(frozen=True)
class PlanePoint:
    """A point of the model plane of curvature ``k``.

    ``coords`` lives on the upper sheet of the unit hyperboloid
    ``-x0^2 + x1^2 + x2^2 = -1``; the curvature only rescales distances.
    """

    coords: tuple[float, float, float]
    k: float = -1.0

    def __post_init__(self):
        check_curvature(self.k)
        c = tuple(float(x) for x in self.coords)
        if len(c) != 3:
            raise GeometryError("hyperboloid coordinates need three entries")
        object.__setattr__(self, "coords", c)
        q = _minkowski(c, c)
        if c[0] <= 0 or abs(q + 1.0) > TOL * max(1.0, c[0] * c[0]):
            raise GeometryError(f"{c} is not on the upper hyperboloid sheet")

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.coords)


@dataclass(frozen=True)
class FinSpec:
    """A triangle with sides ``a`` and ``b`` meeting at angle ``theta``."""

    a: float
    theta: float
    b: float
    k: float = -1.0

    def __post_init__(self):
        check_curvature(self.k)
        if not (self.a > 0 and self.b > 0):
            raise GeometryError("fin sides must be positive")
        if not (0 < self.theta < math.pi):
            raise GeometryError("fin angle must lie in (0, pi)")


@dataclass(frozen=True)
class LambertSpec:
    """Lambert quadrilateral: base ``a``, summit ``c``, summit angle ``theta``.

    Lengths are measured at curvature ``k``; the three remaining angles are
    right angles.
    """

    a: float
    c: float
    theta: float
    k: float

    @property
    def unit_base(self) -> float:
        return self.a * _scale(self.k)

    @property
    def unit_summit(self) -> float:
        return self.c * _scale(self.k)


@dataclass(frozen=True)
class AnnulusSpec:
    """Annulus made from two copies of ``quad``.

    One boundary circle is a closed geodesic of length ``A``; the other has
    length ``C`` and is geodesic except at a single corner of angle
    ``corner_angle`` (measured inside the annulus).
    """

    A: float
    C: float
    theta: float
    corner_angle: float
    k: float
    quad: LambertSpec


def origin(k: float = -1.0) -> PlanePoint:
    return PlanePoint((1.0, 0.0, 0.0), k)


def point_from_polar(r: float, phi: float, k: float = -1.0) -> PlanePoint:
    """Point at distance ``r`` from the origin in direction ``phi``."""
    t = r * _scale(k)
    return PlanePoint((math.cosh(t), math.sinh(t) * math.cos(phi), math.sinh(t) * math.sin(phi)), k)


def _unit_distance(p: np.ndarray, q: np.ndarray) -> float:
    d = p - q
    # <p-q, p-q> = 4 sinh^2(dist/2), well conditioned for nearby points
    n2 = max(_minkowski(d, d), 0.0)
    return 2.0 * math.asinh(math.sqrt(n2) / 2.0)


def distance(p: PlanePoint, q: PlanePoint) -> float:
    if p.k != q.k:
        raise GeometryError(f"curvature mismatch: {p.k} vs {q.k}")
    return _unit_distance(p.vec, q.vec) / _scale(p.k)


def geodesic_point(p: PlanePoint, q: PlanePoint, t: float) -> PlanePoint:
    """Point at distance ``t`` from ``p`` along the geodesic towards ``q``."""
    if p.k != q.k:
        raise GeometryError(f"curvature mismatch: {p.k} vs {q.k}")
    d = _unit_distance(p.vec, q.vec)
    if d < DEGENERACY:
        raise GeometryError("geodesic through coincident points is undefined")
    u = (q.vec - math.cosh(d) * p.vec) / math.sinh(d)
    s = t * _scale(p.k)
    return PlanePoint(tuple(math.cosh(s) * p.vec + math.sinh(s) * u), p.k)


def angle_at(apex: PlanePoint, p: PlanePoint, q: PlanePoint) -> float:
    """Angle at ``apex`` between the geodesics towards ``p`` and ``q``."""
    if not (apex.k == p.k == q.k):
        raise GeometryError("curvature mismatch")
    a = apex.vec
    if _unit_distance(a, p.vec) < DEGENERACY or _unit_distance(a, q.vec) < DEGENERACY:
        raise GeometryError("angle with a coincident point is undefined")
    u = p.vec + _minkowski(a, p.vec) * a
    v = q.vec + _minkowski(a, q.vec) * a
    uu, vv, uv = _minkowski(u, u), _minkowski(v, v), _minkowski(u, v)
    return math.atan2(math.sqrt(max(uu * vv - uv * uv, 0.0)), uv)


def _check_sides(a: float, b: float, c: float) -> None:
    if min(a, b, c) <= 0:
        raise GeometryError("no such simplex: side lengths must be positive")
    slack = min(b + c - a, a + c - b, a + b - c)
    if slack <= DEGENERACY * max(1.0, a, b, c):
        raise GeometryError(f"no such simplex: sides ({a}, {b}, {c}) violate the strict triangle inequality")


def triangle_angles(a: float, b: float, c: float, k: float = -1.0) -> tuple[float, float, float]:
    """Angles opposite the sides ``a``, ``b``, ``c`` of a triangle at curvature ``k``.

    Uses the half-angle form of the hyperbolic law of cosines,
    ``tan^2(A/2) = sinh(s-b) sinh(s-c) / (sinh s sinh(s-a))``, which stays
    accurate for thin triangles.
    """
    _check_sides(a, b, c)
    r = _scale(k)
    a, b, c = a * r, b * r, c * r
    s = (a + b + c) / 2
    sa, sb, sc = (b + c - a) / 2, (a + c - b) / 2, (a + b - c) / 2
    ss = math.sinh(s)
    hs = [math.sinh(sa), math.sinh(sb), math.sinh(sc)]

    def half(i: int) -> float:
        j, l = [x for x in range(3) if x != i]
        return 2.0 * math.atan(math.sqrt(hs[j] * hs[l] / (ss * hs[i])))

    return half(0), half(1), half(2)


def fin_third_side(spec: FinSpec) -> float:
    """Length of the side opposite the prescribed angle of the fin."""
    r = _scale(spec.k)
    a, b = spec.a * r, spec.b * r
    # sinh^2(c/2) = sinh^2((a-b)/2) + sinh a sinh b sin^2(theta/2)
    h = math.sinh((a - b) / 2) ** 2 + math.sinh(a) * math.sinh(b) * math.sin(spec.theta / 2) ** 2
    return 2.0 * math.asinh(math.sqrt(h)) / r


def lambert_summit_angle(a: float, c: float) -> float:
    """Summit angle of the unit-curvature Lambert quadrilateral with base ``a``, summit ``c``."""
    if a < 0 or c <= 0 or a >= c:
        raise GeometryError(f"no such quadrilateral: need 0 <= a < c, got a={a}, c={c}")
    return math.asin(math.cosh(a) / math.cosh(c))


def critical_summit_angle(c: float) -> float:
    """Infimum of admissible summit angles for summit length ``c`` at curvature -1."""
    if c <= 0:
        raise GeometryError("summit length must be positive")
    return math.asin(1.0 / math.cosh(c))


def lambert_quadrilateral(c: float, theta: float, k: float = -1.0) -> LambertSpec:
    """The unique Lambert quadrilateral with summit ``c`` and summit angle ``theta``.

    Exists exactly when ``critical_summit_angle(c) < theta < pi/2`` after
    rescaling to unit curvature.
    """
    r = _scale(k)
    cu = c * r
    lo = critical_summit_angle(cu)
    if not (lo < theta < math.pi / 2):
        raise GeometryError(
            f"no such quadrilateral: summit angle {theta} outside ({lo}, pi/2) for summit {c} at k={k}"
        )
    au = math.acosh(max(1.0, math.sin(theta) * math.cosh(cu)))
    return LambertSpec(a=au / r, c=c, theta=theta, k=k)


def lambert_for_ratio(theta: float, a: float, c: float) -> LambertSpec:
    """Choose a curvature making a Lambert quadrilateral with base ``a`` and
    summit ``c`` whose summit angle exceeds ``theta / 2``."""
    if not (0 < theta < math.pi):
        raise GeometryError("theta must lie in (0, pi)")
    if not (c > a > 0):
        raise GeometryError(f"no such quadrilateral: need c > a > 0, got a={a}, c={c}")
    cu = math.acosh(1.0 / math.sin(theta / 2))
    au = (a / c) * cu
    k = -((cu / c) ** 2)
    return LambertSpec(a=a, c=c, theta=lambert_summit_angle(au, cu), k=k)


def annulus_params(theta: float, A: float, C: float) -> AnnulusSpec:
    """Annulus with geodesic boundary ``A`` and cornered boundary ``C``, corner angle > ``theta``."""
    if not (C > A > 0):
        raise GeometryError(f"no such annulus: need C > A > 0, got A={A}, C={C}")
    quad = lambert_for_ratio(theta, A / 2, C / 2)
    return AnnulusSpec(A=A, C=C, theta=theta, corner_angle=2 * quad.theta, k=quad.k, quad=quad)


def saccheri_vertices(spec: AnnulusSpec) -> tuple[PlanePoint, PlanePoint, PlanePoint, PlanePoint]:
    """Realize the two glued quadrilaterals of ``spec`` as one Saccheri quadrilateral.

    Returns ``(base_left, base_right, summit_left, summit_right)``. The base lies
    on the geodesic ``x2 = 0`` and both legs are perpendicular to it; gluing
    the left leg to the right leg closes the quadrilateral into the annulus.
    """
    k = spec.k
    au, cu = spec.quad.unit_base, spec.quad.unit_summit
    ch = math.sinh(cu) / math.sinh(au)
    h = math.acosh(ch)
    sh = math.sinh(h)
    bl = PlanePoint((math.cosh(au), -math.sinh(au), 0.0), k)
    br = PlanePoint((math.cosh(au), math.sinh(au), 0.0), k)
    tl = PlanePoint((ch * math.cosh(au), -ch * math.sinh(au), sh), k)
    tr = PlanePoint((ch * math.cosh(au), ch * math.sinh(au), sh), k)
    return bl, br, tl, tr
