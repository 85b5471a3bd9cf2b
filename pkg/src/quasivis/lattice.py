"""Lattices and grids in R^n: Minkowski-embedded field lattices, point
enumeration in convex regions (exact and float paths), covolume, the
unit-rescaling subgroup and Schmidt-style counting checks."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from . import kernels
from .quadfield import FieldDesc, QuadInt, fundamental_unit, iter_ring_box
from .regions import BOUNDARY, IN, Box, Product


class HypothesisFailed(ValueError):
    def __init__(self, which: str):
        super().__init__(f"Schmidt hypothesis failed: {which}")
        self.which = which


@dataclass(frozen=True)
class GridDesc:
    """Grid y + basis * Z^n with an R^d x R^m splitting."""

    basis: np.ndarray
    d: int
    m: int
    translation: np.ndarray | None = None

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.float64)
        object.__setattr__(self, "basis", b)
        if self.translation is not None:
            object.__setattr__(
                self, "translation",
                np.asarray(self.translation, dtype=np.float64))
        if abs(np.linalg.det(b)) < 1e-14:
            raise ValueError("basis is singular")

    @property
    def n(self) -> int:
        return self.d + self.m

    def covolume(self) -> float:
        return abs(np.linalg.det(self.basis))

    def trans(self) -> np.ndarray:
        if self.translation is None:
            return np.zeros(self.n)
        return self.translation


@dataclass(frozen=True)
class FieldLatticeDesc:
    """The lattice of (x_1..x_d, sigma(x_1)..sigma(x_d)), x_i in O_K."""

    field: FieldDesc
    d: int

    @property
    def m(self) -> int:
        return self.d

    @property
    def n(self) -> int:
        return 2 * self.d

    def covolume(self) -> float:
        # each Minkowski block (1, omega; 1, sigma(omega)) has |det| = sqrt(disc)
        return math.sqrt(self.covolume_sq())

    def covolume_sq(self) -> int:
        """Exact square of the covolume: disc^d."""
        return self.field.disc ** self.d

    def basis_float(self) -> np.ndarray:
        """Columns ordered (a_1, b_1, ..., a_d, b_d); rows phys then int."""
        om = self.field.omega
        B = np.zeros((self.n, self.n))
        for i in range(self.d):
            B[i, 2 * i] = 1.0
            B[i, 2 * i + 1] = float(om)
            B[self.d + i, 2 * i] = 1.0
            B[self.d + i, 2 * i + 1] = om.conj_float()
        return B

    def as_grid(self) -> GridDesc:
        return GridDesc(basis=self.basis_float(), d=self.d, m=self.d)

    def embed(self, xs: tuple[QuadInt, ...]) -> np.ndarray:
        return np.array([float(x) for x in xs]
                        + [x.conj_float() for x in xs])


def covolume(grid) -> float:
    return grid.covolume()


def enumerate_points(grid: GridDesc, region, tol: float = 1e-9):
    """All grid points in the region (float path).

    Returns (preimages int array, points float array, boundary flags),
    sorted lexicographically by preimage.  Points within tol of the
    region boundary are included and flagged.
    """
    bbox = [(float(lo), float(hi)) for lo, hi in region.bbox()]
    inv = np.linalg.inv(grid.basis)
    lo_u, hi_u = kernels.integer_preimage_box(inv, bbox, grid.translation)
    lo_x = np.array([b[0] for b in bbox])
    hi_x = np.array([b[1] for b in bbox])
    U, X, _ = kernels.collect_lattice_points_in_box(
        grid.basis, lo_u, hi_u, lo_x, hi_x, tol=tol,
        translation=grid.translation)
    status = region.contains_float(X, tol)
    keep = status != 0
    return U[keep], X[keep], status[keep] == BOUNDARY


def enumerate_field_points_exact(lat: FieldLatticeDesc, phys_region,
                                 int_region):
    """Exact enumeration of lattice points with physical part in phys_region
    and internal part in int_region (regions with rational data).

    Yields tuples of QuadInt of length d.  Per-axis candidates come from
    Minkowski boxes; the joint membership filter is exact.
    """
    fld = lat.field
    pb = phys_region.bbox()
    ib = int_region.bbox()
    axes = []
    for i in range(lat.d):
        xlo, xhi = pb[i]
        ylo, yhi = ib[i]
        axes.append(list(iter_ring_box(fld, xlo, xhi, ylo, yhi)))
    d = fld.d
    # Closed axis-aligned boxes factor over axes: the per-axis candidates
    # are already exact, so the joint filter is redundant.
    def _closed_box(r):
        return isinstance(r, Box) and not any(r.lo_open) and not any(r.hi_open)

    if _closed_box(phys_region) and _closed_box(int_region):
        yield from itertools.product(*axes)
        return
    for combo in itertools.product(*axes):
        phys = tuple(x.as_pair() for x in combo)
        if not phys_region.contains_exact(phys, d):
            continue
        internal = tuple(x.conj().as_pair() for x in combo)
        if not int_region.contains_exact(internal, d):
            continue
        yield combo


def box_reduced_basis(basis: np.ndarray, widths: np.ndarray,
                      max_rounds: int = 100) -> np.ndarray:
    """Unimodular column reduction of the basis in box-scaled coordinates.

    Greedy pairwise size reduction of diag(1/widths) @ basis keeps the
    integer bounding box of a [widths]-proportioned region close to the
    count itself; the returned basis spans the same lattice, and coordinate
    gcds of preimages are preserved under the unimodular change."""
    n = basis.shape[1]
    scaled = basis / widths[:, None]
    U = np.eye(n, dtype=np.int64)
    for _ in range(max_rounds):
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                denom = scaled[:, j] @ scaled[:, j]
                mu = round(float(scaled[:, i] @ scaled[:, j] / denom))
                if mu:
                    scaled[:, i] -= mu * scaled[:, j]
                    U[:, i] -= mu * U[:, j]
                    changed = True
        if not changed:
            break
    return basis @ U


def unit_rescalers(lat: FieldLatticeDesc) -> QuadInt:
    """Generator g_0 of the totally-positive unit group: lambda if
    N(lambda) = 1, else lambda^2.  a_{g_0} = diag(g_0,..,sigma(g_0),..)
    fixes the lattice setwise."""
    u = fundamental_unit(lat.field)
    return u.value if u.norm == 1 else u.value * u.value


def rescaler_matrix(lat: FieldLatticeDesc, g0: QuadInt, k: int = 1) -> np.ndarray:
    gk = float(g0) ** k
    sk = g0.conj_float() ** k
    return np.diag([gk] * lat.d + [sk] * lat.d)


@dataclass(frozen=True)
class BalancedRescale:
    k: int
    g0: QuadInt
    diam_phys: float
    diam_int: float

    @property
    def matrix_scale(self) -> tuple[float, float]:
        g = float(self.g0)
        return g ** self.k, g ** (-self.k)


def balanced_rescale(lat: FieldLatticeDesc, region: Product) -> BalancedRescale:
    """Pick a_0 = a_{g_0}^k making the two factor diameters comparable
    (ratio at most g_0)."""
    g0 = unit_rescalers(lat)
    d1 = region.left.diameter()
    d2 = region.right.diameter()
    g = float(g0)
    # a_{g0}^k scales d1 by g^k and d2 by g^-k; balance log ratio.
    k = round(math.log(d2 / d1) / (2 * math.log(g)))
    return BalancedRescale(k=k, g0=g0,
                           diam_phys=d1 * g ** k, diam_int=d2 * g ** (-k))


def shortest_independent_bound(grid: GridDesc, count: int,
                               search: int = 3) -> float:
    """Max length among `count` linearly independent short lattice vectors,
    found by scanning small integer combinations."""
    n = grid.n
    best: list[tuple[float, np.ndarray]] = []
    vecs = []
    for u in itertools.product(range(-search, search + 1), repeat=n):
        if all(c == 0 for c in u):
            continue
        v = grid.basis @ np.array(u, dtype=float)
        vecs.append((np.linalg.norm(v), v))
    vecs.sort(key=lambda t: t[0])
    chosen = []
    for ln, v in vecs:
        cand = chosen + [v]
        if np.linalg.matrix_rank(np.array(cand), tol=1e-9) == len(cand):
            chosen.append(v)
            best.append((ln, v))
            if len(chosen) == count:
                return ln
    return math.inf


@dataclass
class SchmidtReport:
    count: int
    expected: float
    discrepancy: float
    bound: float
    ratio: float
    c: float
    T0: float


def schmidt_count_check(grid: GridDesc, region, c: float, T0: float,
                        tol: float = 1e-9) -> SchmidtReport:
    """Check |#(S cap L) - vol(S)/covol(L)| against the bound shape
    c * T0^(n-1); hypotheses are verified, not assumed."""
    if region.diameter() > T0 + 1e-9:
        raise HypothesisFailed("diameter exceeds T0")
    if shortest_independent_bound(grid, grid.n) > T0 + 1e-9:
        raise HypothesisFailed(f"no {grid.n} independent vectors of length <= T0")
    if shortest_independent_bound(grid, grid.n - 1) > c + 1e-9:
        raise HypothesisFailed(f"no {grid.n - 1} independent vectors of length <= c")
    U, X, _ = enumerate_points(grid, region, tol=tol)
    count = len(U)
    expected = region.volume() / grid.covolume()
    disc = abs(count - expected)
    bound = c * T0 ** (grid.n - 1)
    return SchmidtReport(count=count, expected=expected, discrepancy=disc,
                         bound=bound, ratio=disc / bound if bound else math.inf,
                         c=c, T0=T0)
