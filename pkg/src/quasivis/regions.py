"""Convex regions with exact membership for points with coordinates in Q(sqrt d).

Region data is rational; a point on the exact path is a tuple of scalars
(A, B) meaning A + B*sqrt(d).  Float-path membership reports points within
`tol` of the boundary separately so their influence can be bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .quadfield import quad_sign

Scalar = tuple[Fraction, Fraction]  # A + B*sqrt(d)

ONE: Scalar = (Fraction(1), Fraction(0))


def scalar(x) -> Scalar:
    if isinstance(x, tuple):
        return x
    return (Fraction(x), Fraction(0))


def s_mul(x: Scalar, y: Scalar, d: int) -> Scalar:
    return (x[0] * y[0] + x[1] * y[1] * d, x[0] * y[1] + x[1] * y[0])


def s_float(x: Scalar, d: int) -> float:
    return float(x[0]) + float(x[1]) * math.sqrt(d)


class RegionUnbounded(ValueError):
    pass


# status codes for float membership
OUT, IN, BOUNDARY = 0, 1, 2


@dataclass(frozen=True)
class Box:
    """Axis-aligned box; per-side open/closed flags (closed by default)."""

    bounds: tuple  # of (lo: Fraction, hi: Fraction)
    lo_open: tuple = ()
    hi_open: tuple = ()

    @staticmethod
    def cube(half_width, dim: int) -> "Box":
        h = Fraction(half_width)
        return Box(tuple((-h, h) for _ in range(dim)))

    @staticmethod
    def make(bounds, lo_open=None, hi_open=None) -> "Box":
        bs = tuple((Fraction(lo), Fraction(hi)) for lo, hi in bounds)
        k = len(bs)
        return Box(bs, tuple(lo_open or [False] * k), tuple(hi_open or [False] * k))

    @property
    def dim(self) -> int:
        return len(self.bounds)

    def _flags(self):
        k = self.dim
        lo = self.lo_open or (False,) * k
        hi = self.hi_open or (False,) * k
        return lo, hi

    def contains_exact(self, point: tuple[Scalar, ...], d: int,
                       mult: Scalar = ONE) -> bool:
        lo_open, hi_open = self._flags()
        for i, w in enumerate(point):
            w = s_mul(w, mult, d)
            lo, hi = self.bounds[i]
            s = quad_sign(w[0] - lo, w[1], d)
            if s < 0 or (s == 0 and lo_open[i]):
                return False
            s = quad_sign(hi - w[0], -w[1], d)
            if s < 0 or (s == 0 and hi_open[i]):
                return False
        return True

    def contains_float(self, x: np.ndarray, tol: float) -> np.ndarray:
        lo = np.array([float(b[0]) for b in self.bounds])
        hi = np.array([float(b[1]) for b in self.bounds])
        inside = np.all((x >= lo - tol) & (x <= hi + tol), axis=-1)
        near = np.any((np.abs(x - lo) <= tol) | (np.abs(x - hi) <= tol), axis=-1)
        return np.where(inside, np.where(near, BOUNDARY, IN), OUT)

    def bbox(self) -> list[tuple[Fraction, Fraction]]:
        return [b for b in self.bounds]

    def volume(self) -> float:
        return float(self.volume_exact())

    def volume_exact(self) -> Fraction:
        v = Fraction(1)
        for lo, hi in self.bounds:
            v *= hi - lo
        return v

    def scaled(self, t) -> "Box":
        t = Fraction(t)
        return Box(tuple((lo * t, hi * t) for lo, hi in self.bounds),
                   self.lo_open, self.hi_open)

    def is_centrally_symmetric(self) -> bool:
        return all(lo == -hi for lo, hi in self.bounds)

    def diameter(self) -> float:
        return math.sqrt(sum(float(hi - lo) ** 2 for lo, hi in self.bounds))


@dataclass(frozen=True)
class Ball:
    """Ball with rational center and rational squared radius."""

    center: tuple
    r2: Fraction

    @staticmethod
    def make(center, r2) -> "Ball":
        return Ball(tuple(Fraction(c) for c in center), Fraction(r2))

    @property
    def dim(self) -> int:
        return len(self.center)

    def contains_exact(self, point, d: int, mult: Scalar = ONE) -> bool:
        acc: Scalar = (Fraction(0), Fraction(0))
        for i, w in enumerate(point):
            w = s_mul(w, mult, d)
            dw = (w[0] - self.center[i], w[1])
            sq = s_mul(dw, dw, d)
            acc = (acc[0] + sq[0], acc[1] + sq[1])
        return quad_sign(self.r2 - acc[0], -acc[1], d) >= 0

    def contains_float(self, x: np.ndarray, tol: float) -> np.ndarray:
        c = np.array([float(v) for v in self.center])
        r = math.sqrt(float(self.r2))
        dist = np.linalg.norm(x - c, axis=-1)
        inside = dist <= r + tol
        near = np.abs(dist - r) <= tol
        return np.where(inside, np.where(near, BOUNDARY, IN), OUT)

    def bbox(self):
        r = _frac_sqrt_upper(self.r2)
        return [(c - r, c + r) for c in self.center]

    def volume(self) -> float:
        k = self.dim
        r = math.sqrt(float(self.r2))
        return math.pi ** (k / 2) / math.gamma(k / 2 + 1) * r ** k

    def scaled(self, t) -> "Ball":
        t = Fraction(t)
        return Ball(tuple(c * t for c in self.center), self.r2 * t * t)

    def is_centrally_symmetric(self) -> bool:
        return all(c == 0 for c in self.center)

    def diameter(self) -> float:
        return 2 * math.sqrt(float(self.r2))


def _frac_sqrt_upper(x: Fraction) -> Fraction:
    """Rational upper bound for sqrt(x)."""
    n, dden = x.numerator, x.denominator
    s = math.isqrt(n * dden) + 1
    return Fraction(s, dden)


@dataclass(frozen=True)
class Polygon:
    """Convex polygon in R^2 with rational vertices in ccw order."""

    vertices: tuple

    @staticmethod
    def make(vertices) -> "Polygon":
        vs = tuple((Fraction(x), Fraction(y)) for x, y in vertices)
        return Polygon(vs)

    @property
    def dim(self) -> int:
        return 2

    def _edges(self):
        vs = self.vertices
        k = len(vs)
        for i in range(k):
            yield vs[i], vs[(i + 1) % k]

    def contains_exact(self, point, d: int, mult: Scalar = ONE) -> bool:
        wx = s_mul(point[0], mult, d)
        wy = s_mul(point[1], mult, d)
        for (x1, y1), (x2, y2) in self._edges():
            # ccw: inside iff cross((v2-v1), (w-v1)) >= 0
            ax, ay = x2 - x1, y2 - y1
            cA = ax * (wy[0] - y1) - ay * (wx[0] - x1)
            cB = ax * wy[1] - ay * wx[1]
            if quad_sign(cA, cB, d) < 0:
                return False
        return True

    def contains_float(self, x: np.ndarray, tol: float) -> np.ndarray:
        x = np.atleast_2d(x)
        inside = np.ones(len(x), dtype=bool)
        near = np.zeros(len(x), dtype=bool)
        for (x1, y1), (x2, y2) in self._edges():
            ax, ay = float(x2 - x1), float(y2 - y1)
            ln = math.hypot(ax, ay)
            c = (ax * (x[:, 1] - float(y1)) - ay * (x[:, 0] - float(x1))) / ln
            inside &= c >= -tol
            near |= np.abs(c) <= tol
        return np.where(inside, np.where(near, BOUNDARY, IN), OUT)

    def bbox(self):
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return [(min(xs), max(xs)), (min(ys), max(ys))]

    def volume(self) -> float:
        return float(self.volume_exact())

    def volume_exact(self) -> Fraction:
        area = Fraction(0)
        for (x1, y1), (x2, y2) in self._edges():
            area += x1 * y2 - x2 * y1
        return area / 2

    def scaled(self, t) -> "Polygon":
        t = Fraction(t)
        return Polygon(tuple((x * t, y * t) for x, y in self.vertices))

    def is_centrally_symmetric(self) -> bool:
        vs = set(self.vertices)
        return all((-x, -y) in vs for x, y in self.vertices)

    def diameter(self) -> float:
        vs = [(float(x), float(y)) for x, y in self.vertices]
        return max(math.hypot(a[0] - b[0], a[1] - b[1])
                   for a in vs for b in vs)


@dataclass(frozen=True)
class Product:
    """Cartesian product of two regions; coordinates are concatenated."""

    left: object
    right: object

    @property
    def dim(self) -> int:
        return self.left.dim + self.right.dim

    def contains_exact(self, point, d: int, mult: Scalar = ONE) -> bool:
        k = self.left.dim
        return (self.left.contains_exact(point[:k], d, mult)
                and self.right.contains_exact(point[k:], d, mult))

    def contains_float(self, x: np.ndarray, tol: float) -> np.ndarray:
        k = self.left.dim
        a = self.left.contains_float(x[..., :k], tol)
        b = self.right.contains_float(x[..., k:], tol)
        out = np.minimum(a, 1) * np.minimum(b, 1)
        boundary = (out == 1) & ((a == BOUNDARY) | (b == BOUNDARY))
        return np.where(boundary, BOUNDARY, out)

    def bbox(self):
        return self.left.bbox() + self.right.bbox()

    def volume(self) -> float:
        return self.left.volume() * self.right.volume()

    def diameter(self) -> float:
        return math.hypot(self.left.diameter(), self.right.diameter())


@dataclass(frozen=True)
class UnitScaled:
    """Region (1/mult) * base for a positive quadratic-irrational factor
    mult = A + B*sqrt(d): membership of w is tested as mult*w in base."""

    base: object
    mult: Scalar
    inv_mult: Scalar  # exact value of 1/mult
    d_field: int

    @property
    def dim(self) -> int:
        return self.base.dim

    def contains_exact(self, point, d: int, mult: Scalar = ONE) -> bool:
        return self.base.contains_exact(point, d, s_mul(mult, self.mult, d))

    def contains_float(self, x: np.ndarray, tol: float) -> np.ndarray:
        return self.base.contains_float(
            np.asarray(x) * s_float(self.mult, self.d_field), tol)

    def bbox(self):
        out = []
        for lo, hi in self.base.bbox():
            lo_s = s_mul(scalar(lo), self.inv_mult, self.d_field)
            hi_s = s_mul(scalar(hi), self.inv_mult, self.d_field)
            out.append((lo_s, hi_s))
        return out

    def volume(self) -> float:
        return self.base.volume() * s_float(self.inv_mult, self.d_field) ** self.dim

    def scaled(self, t) -> "UnitScaled":
        return UnitScaled(self.base.scaled(t), self.mult, self.inv_mult,
                          self.d_field)

    def is_centrally_symmetric(self) -> bool:
        return self.base.is_centrally_symmetric()

    def diameter(self) -> float:
        return self.base.diameter() * s_float(self.inv_mult, self.d_field)


def square_window(half_width=1) -> Box:
    return Box.cube(half_width, 2)


def octagon_window(half_width=1) -> Polygon:
    """Centrally symmetric rational-vertex approximation of a regular octagon.

    29/70 approximates sqrt(2) - 1; vertices are (+-h, +-h*t) and
    (+-h*t, +-h) in ccw order.
    """
    h = Fraction(half_width)
    t = Fraction(29, 70) * h
    return Polygon.make([
        (h, t), (t, h), (-t, h), (-h, t),
        (-h, -t), (-t, -h), (t, -h), (h, -t),
    ])


def disc_window(r2=1) -> Ball:
    return Ball.make((0, 0), r2)


def region_from_spec(spec: dict):
    """Build a region from a JSON-style spec dict."""
    kind = spec["kind"]
    if kind == "box":
        return Box.make(spec["bounds"],
                        spec.get("lo_open"), spec.get("hi_open"))
    if kind == "cube":
        return Box.cube(Fraction(str(spec["half_width"])), spec["dim"])
    if kind == "square":
        return square_window(Fraction(str(spec.get("half_width", 1))))
    if kind == "octagon":
        return octagon_window(Fraction(str(spec.get("half_width", 1))))
    if kind == "disc":
        return disc_window(Fraction(str(spec.get("r2", 1))))
    if kind == "ball":
        return Ball.make(spec["center"], Fraction(str(spec["r2"])))
    if kind == "polygon":
        return Polygon.make(spec["vertices"])
    if kind == "product":
        return Product(region_from_spec(spec["left"]),
                       region_from_spec(spec["right"]))
    raise ValueError(f"unknown region kind {kind!r}")
