"""Certified holes in the visible points: CRT construction of gcd-holes in
Z^n, budgeted search for hole translates near a subspace, and empirical
empty-ball scanning in generated point sets."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from sympy import nextprime


class NotInResidueClass(ValueError):
    pass


class _NotFoundType:
    """Sentinel value: search budget exhausted without a hit."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self):
        return False

    def __repr__(self):
        return "NotFound"


NotFound = _NotFoundType()


@dataclass(frozen=True)
class CRTHole:
    """A residue class x0 + N*Z^n every translate of which carries a
    (2A+1)^n box of integer vectors with coordinate gcd > 1."""

    n: int
    A: int
    prime_table: dict  # tuple in [-A, A]^n -> distinct rational prime
    x0: tuple
    N: int

    def box_tuples(self):
        return itertools.product(range(-self.A, self.A + 1), repeat=self.n)

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n, "A": self.A,
            "primes": {",".join(map(str, k)): str(p)
                       for k, p in sorted(self.prime_table.items())},
            "x0": [str(v) for v in self.x0],
            "N": str(self.N),
        }, indent=1)

    @classmethod
    def from_json(cls, doc: str) -> "CRTHole":
        data = json.loads(doc)
        table = {tuple(int(v) for v in k.split(",")): int(p)
                 for k, p in data["primes"].items()}
        return cls(n=data["n"], A=data["A"], prime_table=table,
                   x0=tuple(int(v) for v in data["x0"]), N=int(data["N"]))


def build_crt_hole(n: int, A: int) -> CRTHole:
    """Assign the smallest (2A+1)^n primes to box tuples in lexicographic
    order and solve x0_j = -i_j mod P_i for all tuples simultaneously;
    x0 is the canonical solution in [0, N)^n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if A < 0:
        raise ValueError("A must be >= 0")
    table = {}
    p = 1
    for tup in itertools.product(range(-A, A + 1), repeat=n):
        p = nextprime(p)
        table[tup] = int(p)
    N = math.prod(table.values())
    x0 = []
    for j in range(n):
        # CRT accumulate over the congruences x = -i_j (mod P_i)
        x, mod = 0, 1
        for tup, pr in table.items():
            r = (-tup[j]) % pr
            t = ((r - x) * pow(mod, -1, pr)) % pr
            x += mod * t
            mod *= pr
        x0.append(x % N)
    return CRTHole(n=n, A=A, prime_table=dict(table), x0=tuple(x0), N=N)


def verify_hole(hole: CRTHole, x) -> bool:
    """Exhaustively check that every point of x + [-A, A]^n has coordinate
    gcd > 1, with the assigned prime as an explicit divisor witness."""
    x = tuple(int(v) for v in x)
    if len(x) != hole.n:
        raise NotInResidueClass("dimension mismatch")
    if any((xi - x0i) % hole.N for xi, x0i in zip(x, hole.x0)):
        raise NotInResidueClass("x is not congruent to x0 mod N")
    for tup, pr in hole.prime_table.items():
        point = [xi + ti for xi, ti in zip(x, tup)]
        if any(v % pr for v in point):
            return False
        if math.gcd(*point) == 1:  # gcd 0 means the zero vector: invisible
            return False
    return True


def hole_near_subspace(hole: CRTHole, V, R: float, search_budget: int,
                       chunk: int = 1 << 16):
    """Search translates x0 + N*k for one whose hole box approaches the
    subspace V = span(rows of V) within distance R.

    Candidates are a budgeted grid along V with step N, each mapped to its
    nearest translate by componentwise rounding; returns the integer vector
    on success, the NotFound sentinel when the budget is exhausted."""
    if search_budget <= 0:
        return NotFound
    Vb = np.atleast_2d(np.asarray(V, dtype=np.float64))
    if Vb.shape[1] != hole.n:
        raise ValueError("subspace basis must live in R^n")
    Q64, _ = np.linalg.qr(Vb.T)
    Q = Q64.astype(np.longdouble)
    r = Q.shape[1]
    x0 = np.array(hole.x0, dtype=np.longdouble)
    N = np.longdouble(hole.N)
    side = max(1, int(round(search_budget ** (1.0 / r))))
    grids = [np.arange(-(side // 2), side - side // 2, dtype=np.longdouble)
             for _ in range(r)]
    best = (math.inf, None)
    tried = 0
    mesh = itertools.product(*[g.tolist() for g in grids])
    while tried < search_budget:
        block = list(itertools.islice(mesh, chunk))
        if not block:
            break
        tried += len(block)
        J = np.array(block, dtype=np.longdouble) * N
        t = J @ Q.T
        k = np.rint((t - x0) / N)
        c = x0 + N * k
        resid = c - (c @ Q) @ Q.T
        dist = np.sqrt((resid * resid).sum(axis=1))
        i = int(np.argmin(dist))
        if float(dist[i]) < best[0]:
            best = (float(dist[i]), tuple(int(v) for v in k[i]))
    if best[1] is None or best[0] > R:
        return NotFound
    k = best[1]
    return tuple(int(hole.x0[j]) + hole.N * k[j] for j in range(hole.n))


@dataclass(frozen=True)
class EmptyBallScan:
    radius: float
    center: tuple
    grid_step: float
    label: str = "empirical"

    def csv_row(self) -> str:
        return ",".join([f"{c:.12g}" for c in self.center]
                        + [f"{self.radius:.12g}"])


def scan_empty_ball(points, region, r_grid, grid_step: float = 0.5
                    ) -> EmptyBallScan:
    """Grid-search the largest radius in r_grid such that some ball of that
    radius inside the region misses every supplied point.  Empirical
    evidence only; not a certification of a hole of the full point set."""
    r_grid = sorted(float(r) for r in r_grid)
    bbox = [(float(lo), float(hi)) for lo, hi in region.bbox()]
    inradius = min((hi - lo) / 2 for lo, hi in bbox)
    coords = np.array([getattr(p, "coords_phys", p) for p in points],
                      dtype=np.float64)
    center0 = tuple((lo + hi) / 2 for lo, hi in bbox)
    if len(coords) == 0:
        return EmptyBallScan(radius=inradius, center=center0,
                             grid_step=grid_step)
    axes = [np.arange(lo, hi + grid_step / 2, grid_step) for lo, hi in bbox]
    centers = np.stack(np.meshgrid(*axes, indexing="ij"),
                       axis=-1).reshape(-1, len(bbox))
    margin = np.min(np.stack(
        [np.minimum(centers[:, i] - lo, hi - centers[:, i])
         for i, (lo, hi) in enumerate(bbox)], axis=1), axis=1)
    dists, _ = cKDTree(coords).query(centers)
    best_r, best_c = 0.0, center0
    for r in r_grid:
        ok = (margin >= r) & (dists > r)
        if ok.any():
            i = int(np.argmax(dists * ok))
            best_r, best_c = r, tuple(centers[i])
    return EmptyBallScan(radius=best_r, center=best_c, grid_step=grid_step)
