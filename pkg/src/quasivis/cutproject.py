"""Cut-and-project sets over Minkowski-embedded field lattices: generation,
exact visibility classification (fast gcd/window characterization and a
brute-force oracle), primitive points, sublattices and strict-inclusion
witnesses."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lattice import FieldLatticeDesc, enumerate_field_points_exact
from .quadfield import (
    FieldDesc,
    QuadInt,
    check_hammarhjelm,
    fundamental_unit,
    pair_ideal_norm,
)
from .regions import Scalar, UnitScaled


class NotHammarhjelm(ValueError):
    pass


class InsufficientCover(ValueError):
    pass


class ZeroElement(ValueError):
    pass


@dataclass(frozen=True)
class CPSetDesc:
    """Description of a cut-and-project set Lambda(beta*W, L) with
    L the d-fold Minkowski lattice of the field and beta = lambda^beta_exp."""

    field: FieldDesc
    d: int
    window: object
    beta_exp: int = 0
    star_shaped: bool = True
    centrally_symmetric: bool = True

    @property
    def lattice(self) -> FieldLatticeDesc:
        return FieldLatticeDesc(field=self.field, d=self.d)

    def unit_power_scalar(self, k: int) -> Scalar:
        """lambda^k as an exact (A, B) pair, any integer k."""
        lam = fundamental_unit(self.field).value
        if k >= 0:
            return (lam ** k).as_pair()
        inv = lam.conj() if lam.norm() == 1 else -lam.conj()
        return (inv ** (-k)).as_pair()

    def scaled_window(self, extra_exp: int = 0):
        """Region lambda^(beta_exp + extra_exp) * W with exact membership."""
        e = self.beta_exp + extra_exp
        if e == 0:
            return self.window
        return UnitScaled(base=self.window,
                          mult=self.unit_power_scalar(-e),
                          inv_mult=self.unit_power_scalar(e),
                          d_field=self.field.d)

    def is_hammarhjelm(self) -> bool:
        return (self.field.is_pid
                and self.centrally_symmetric
                and self.window.is_centrally_symmetric()
                and check_hammarhjelm(self.field))

    def require_hammarhjelm(self):
        if not self.is_hammarhjelm():
            raise NotHammarhjelm(
                f"d={self.field.d} with this window is not a Hammarhjelm example")


@dataclass(frozen=True)
class CPPoint:
    quad_coords: tuple
    coords_phys: tuple
    coords_int: tuple

    @property
    def is_origin(self) -> bool:
        return all(not x for x in self.quad_coords)

    def norm_phys(self) -> float:
        return math.hypot(*self.coords_phys)

    def to_json(self) -> dict:
        return {
            "coords": [x.to_json() for x in self.quad_coords],
            "phys": list(self.coords_phys),
            "internal": list(self.coords_int),
        }


def _make_point(xs: tuple[QuadInt, ...]) -> CPPoint:
    return CPPoint(
        quad_coords=xs,
        coords_phys=tuple(float(x) for x in xs),
        coords_int=tuple(x.conj_float() for x in xs),
    )


def iter_raw(desc: CPSetDesc, D, T):
    """Yield quad-coordinate tuples of Lambda(beta*W, L) inside T*D."""
    TD = D.scaled(Fraction(T))
    return enumerate_field_points_exact(desc.lattice, TD, desc.scaled_window())


def generate(desc: CPSetDesc, D, T) -> list[CPPoint]:
    """All points of the cut-and-project set inside T*D (exact path)."""
    return [_make_point(xs) for xs in iter_raw(desc, D, T)]


def gcd_one(desc: CPSetDesc, xs: tuple[QuadInt, ...]) -> bool:
    if desc.d == 2:
        return pair_ideal_norm(desc.field, xs[0].a, xs[0].b,
                               xs[1].a, xs[1].b) == 1
    from .quadfield import gcd_is_one
    return gcd_is_one(list(xs))


def visible_fast(desc: CPSetDesc, x: CPPoint) -> bool:
    """Visibility via the Hammarhjelm characterization: coordinate gcd is a
    unit and the conjugate vector avoids the closed window (1/lambda)*beta*W."""
    desc.require_hammarhjelm()
    if x.is_origin:
        return False
    if not gcd_one(desc, x.quad_coords):
        return False
    inner = desc.scaled_window(extra_exp=-1)
    sigma = tuple(q.conj().as_pair() for q in x.quad_coords)
    return not inner.contains_exact(sigma, desc.field.d)


def _blocks(x: tuple[QuadInt, ...], z: tuple[QuadInt, ...]) -> bool:
    """True iff z = t*x for a real t in (0,1): exact collinearity via cross
    products, then a sign/magnitude comparison in the real embedding."""
    if all(not zi for zi in z):
        return False
    d = len(x)
    for i in range(d):
        for j in range(i + 1, d):
            if z[i] * x[j] != z[j] * x[i]:
                return False
    for i in range(d):
        if x[i]:
            zi, xi = z[i], x[i]
            if not zi:
                return False
            if zi.sign() != xi.sign():
                return False
            return abs(zi) < abs(xi)
    return False


def visible_oracle(desc: CPSetDesc, x: CPPoint, points: list[CPPoint],
                   cover=None) -> bool:
    """Definitional visibility: x is visible iff no supplied point lies on the
    open segment from the origin to x.  The caller must supply a point list
    covering Lambda on that segment (e.g. a generate() result for a
    star-shaped averaging set containing x)."""
    if x.is_origin:
        return False
    if cover is not None:
        D, T = cover
        TD = D.scaled(Fraction(T))
        phys = tuple(q.as_pair() for q in x.quad_coords)
        if not TD.contains_exact(phys, desc.field.d):
            raise InsufficientCover("x outside the covered region")
    xv = np.array(x.coords_phys)
    nx = np.linalg.norm(xv)
    pv = np.array([p.coords_phys for p in points])
    # Cheap float prefilter: exact collinear points have tiny float cross
    # residue; the margin is far above accumulated rounding at desk scale.
    dots = pv @ xv
    cross2 = np.einsum("ij,ij->i", pv, pv) * nx * nx - dots ** 2
    cand = np.nonzero(cross2 <= 1e-6 * max(nx, 1.0) ** 4)[0]
    for idx in cand:
        z = points[int(idx)]
        if _blocks(x.quad_coords, z.quad_coords):
            return False
    return True


def primitive_points(desc: CPSetDesc, D, T) -> list[CPPoint]:
    """Points whose quadratic-integer coordinates generate the unit ideal."""
    out = []
    for p in generate(desc, D, T):
        if not p.is_origin and gcd_one(desc, p.quad_coords):
            out.append(p)
    return out


@dataclass(frozen=True)
class SublatticeLg:
    """The lattice a_g L of coordinate-wise multiples of g."""

    base: FieldLatticeDesc
    g: QuadInt

    def covolume(self) -> float:
        return abs(self.g.norm()) ** self.base.d * self.base.covolume()

    def contains(self, xs: tuple[QuadInt, ...]) -> bool:
        return all(self.g.divides(x) for x in xs)

    def basis_float(self) -> np.ndarray:
        from .lattice import rescaler_matrix
        return rescaler_matrix(self.base, self.g) @ self.base.basis_float()


def sublattice_Lg(desc: CPSetDesc, g: QuadInt) -> SublatticeLg:
    if not g:
        raise ZeroElement("g must be nonzero")
    return SublatticeLg(base=desc.lattice, g=g)


def integer_coords(xs: tuple[QuadInt, ...]) -> tuple[int, ...]:
    out = []
    for x in xs:
        out.append(x.a)
        out.append(x.b)
    return tuple(out)


def strict_inclusion_witness(desc: CPSetDesc, D, T) -> list[CPPoint]:
    """Points of Lambda(W, L_vis) inside T*D that are invisible in Lambda.

    A lattice point y is visible in L iff its integer coordinate vector is
    primitive over Z; the projected point is then checked against Lambda
    visibility (fast characterization on Hammarhjelm examples, else the
    definitional oracle)."""
    pts = generate(desc, D, T)
    hamm = desc.is_hammarhjelm()
    out = []
    for p in pts:
        if p.is_origin:
            continue
        u = integer_coords(p.quad_coords)
        if math.gcd(*u) != 1:
            continue  # y not visible in L
        if hamm:
            vis = visible_fast(desc, p)
        else:
            vis = visible_oracle(desc, p, pts)
        if not vis:
            out.append(p)
    return out


def strict_inclusion_witness_random(basis: np.ndarray, window, D, T: float,
                                    tol: float = 1e-9):
    """Float-path witness search for a lattice basis in R^n: returns the
    points of Lambda(W, L_vis) \\ Lambda(W, L)_vis found in T*D, along with
    the total number of points examined."""
    from . import kernels

    n = basis.shape[0]
    dphys = D.dim
    bbox = [(float(lo) * T, float(hi) * T) for lo, hi in D.bbox()] + \
        [(float(lo), float(hi)) for lo, hi in window.bbox()]
    lo_x = np.array([b[0] for b in bbox])
    hi_x = np.array([b[1] for b in bbox])
    from .lattice import box_reduced_basis
    basis = box_reduced_basis(basis, hi_x - lo_x)
    lo_u, hi_u = kernels.integer_preimage_box(np.linalg.inv(basis), bbox)
    U, X, _ = kernels.collect_lattice_points_in_box(
        basis, lo_u, hi_u, lo_x, hi_x, tol=tol)
    phys = X[:, :dphys]
    keep = np.linalg.norm(phys, axis=1) > tol
    U, phys = U[keep], phys[keep]
    norms = np.linalg.norm(phys, axis=1)
    dirs = phys / norms[:, None]
    # Group by direction; on a Haar-random lattice every group is a.s. a
    # full ray of multiples or a singleton.
    buckets: dict[tuple, list[int]] = {}
    for i, v in enumerate(dirs):
        key = tuple(np.round(v / 1e-7).astype(np.int64))
        buckets.setdefault(key, []).append(i)
    witnesses = []
    for key, idxs in buckets.items():
        if len(idxs) < 2:
            continue
        idxs.sort(key=lambda i: norms[i])
        shortest = idxs[0]
        a = phys[shortest].astype(np.longdouble)
        for i in idxs[1:]:
            # genuine ray multiples have a cross product at rounding-error
            # scale; accidental near-parallels sit orders of magnitude above
            b = phys[i].astype(np.longdouble)
            resid = b - (a @ b / (a @ a)) * a
            cross_ok = float(np.sqrt(resid @ resid)) <= 1e-12 * norms[i]
            if cross_ok and math.gcd(*[int(v) for v in U[i]]) == 1:
                witnesses.append((U[i], phys[i]))
    return witnesses, len(U)


def points_to_csv(points: list[CPPoint], visible: list[bool] | None = None) -> str:
    d = len(points[0].quad_coords) if points else 0
    cols = [f"a{i+1},b{i+1}" for i in range(d)]
    cols += [f"phys{i+1}" for i in range(d)]
    cols += [f"int{i+1}" for i in range(d)]
    header = ",".join(cols) + ",visible\n"
    lines = [header]
    for k, p in enumerate(points):
        row = []
        for x in p.quad_coords:
            row += [str(x.a), str(x.b)]
        row += [f"{v:.12g}" for v in p.coords_phys]
        row += [f"{v:.12g}" for v in p.coords_int]
        row.append("" if visible is None else str(int(visible[k])))
        lines.append(",".join(row) + "\n")
    return "".join(lines)


def points_to_json(points: list[CPPoint], visible: list[bool] | None = None) -> str:
    docs = []
    for k, p in enumerate(points):
        doc = p.to_json()
        if visible is not None:
            doc["visible"] = bool(visible[k])
        docs.append(doc)
    return json.dumps(docs, indent=1)
