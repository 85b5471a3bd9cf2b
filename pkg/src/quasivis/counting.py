"""Density estimation for visible points of cut-and-project sets: direct and
Moebius inclusion-exclusion primitive counts, predicted-density formulas,
convergence-rate fitting and the random-lattice 1/zeta(n) experiment."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction

import numpy as np

from . import kernels
from .cutproject import CPSetDesc, gcd_one, iter_raw
from .lattice import box_reduced_basis
from .quadfield import (
    dedekind_zeta,
    dedekind_zeta_highprec,
    enumerate_ring_box,
    exact_compare,
    fundamental_unit,
    ideal_from_generators,
    moebius,
    principal_ideal,
)
from .regions import Box, s_float


class DegenerateFit(ValueError):
    pass


def riemann_zeta(s: int, tol: float = 1e-9) -> float:
    """zeta(s) for integer s >= 2 by partial sums; the tail is replaced by
    the midpoint of its integral-test bracket, leaving error below tol."""
    if s < 2:
        raise ValueError("s must be >= 2")
    N = 16
    while s / 2 * N ** (-s) > tol:
        N *= 2
    n = np.arange(1, N + 1, dtype=np.float64)
    partial = float(np.sum(n ** (-float(s))))
    lo = (N + 1) ** (1 - s) / (s - 1)
    hi = N ** (1 - s) / (s - 1)
    return partial + (lo + hi) / 2


@dataclass
class CountReport:
    """One (T, counts, prediction) record of a density experiment."""

    T: float
    count_vis: int
    count_pr: int
    count_all: int
    vol_TD: float
    M_T: float
    predicted: float
    rel_error: float
    boundary_ambiguous: int = 0
    count_pr_inner: int = 0
    identity_ok: bool = True

    CSV_HEADER = ("T,count_vis,count_pr,count_all,vol_TD,M_T,predicted,"
                  "rel_error,boundary_ambiguous,count_pr_inner,identity_ok")

    def csv_row(self) -> str:
        return (f"{self.T:g},{self.count_vis},{self.count_pr},"
                f"{self.count_all},{self.vol_TD:.12g},{self.M_T:.12g},"
                f"{self.predicted:.12g},{self.rel_error:.12g},"
                f"{self.boundary_ambiguous},{self.count_pr_inner},"
                f"{int(self.identity_ok)}")

    def to_json(self) -> dict:
        return {
            "T": self.T, "count_vis": self.count_vis,
            "count_pr": self.count_pr, "count_all": self.count_all,
            "vol_TD": self.vol_TD, "M_T": self.M_T,
            "predicted": self.predicted, "rel_error": self.rel_error,
            "boundary_ambiguous": self.boundary_ambiguous,
            "count_pr_inner": self.count_pr_inner,
            "identity_ok": self.identity_ok,
        }


def predicted_density_hammarhjelm(desc: CPSetDesc, tol: float = 1e-9,
                                  zeta_method: str = "highprec") -> float:
    """Density of the visible points of Lambda(beta*W, L) per unit volume of
    physical space: (1 - lambda^(-d)) * (vol(beta*W)/covol(L)) / zeta_K(d)."""
    desc.require_hammarhjelm()
    fld = desc.field
    lam_inv_d = s_float(desc.unit_power_scalar(-desc.d), fld.d)
    vol_w = desc.scaled_window().volume()
    covol = desc.lattice.covolume()
    if zeta_method == "highprec":
        z = dedekind_zeta_highprec(fld, desc.d, tol)
    else:
        z, _ = dedekind_zeta(fld, desc.d, tol)
    return (1.0 - lam_inv_d) * (vol_w / covol) / z


def _nonzero_master(desc: CPSetDesc, D, T):
    return [xs for xs in iter_raw(desc, D, T) if any(xs)]


def _norm_cutoff(desc: CPSetDesc, D, T) -> int:
    """Any g whose sublattice term is nonempty divides a nonzero coordinate
    x_i with |x_i| <= R_T and |sigma(x_i)| <= R_W, so |N(g)| <= R_T*R_W."""
    r_t = float(T) * max(max(abs(float(lo)), abs(float(hi)))
                         for lo, hi in D.bbox())
    r_w = max(max(abs(s_float(scalarize(lo), desc.field.d)),
                  abs(s_float(scalarize(hi), desc.field.d)))
              for lo, hi in desc.scaled_window().bbox())
    return int(r_t * r_w) + 1


def scalarize(x):
    if isinstance(x, tuple):
        return x
    return (Fraction(x), Fraction(0))


def moebius_count_primitive(desc: CPSetDesc, D, T,
                            beta_exp: int | None = None) -> int:
    """Primitive-point count by inclusion-exclusion over unit-class
    representatives g in [1, lambda) with mu(g) != 0:
    sum_g mu(g) * #(nonzero points of Lambda(beta*W, L_g) in T*D).

    Terms beyond the certified norm cutoff are provably empty."""
    if beta_exp is not None:
        desc = replace(desc, beta_exp=beta_exp)
    desc.require_hammarhjelm()
    fld = desc.field
    lam = fundamental_unit(fld).value
    master = _nonzero_master(desc, D, T)
    ideal_mult = Counter(ideal_from_generators(list(xs)) for xs in master)
    cutoff = _norm_cutoff(desc, D, T)
    total = 0
    for g in enumerate_ring_box(fld, 1, lam, -cutoff, cutoff,
                                x_hi_open=True):
        if abs(g.norm()) > cutoff:
            continue
        pg = principal_ideal(g)
        mu = moebius(pg)
        if mu == 0:
            continue
        cnt = sum(m for ix, m in ideal_mult.items()
                  if pg.contains_ideal(ix))
        total += mu * cnt
    return total


def _inner_mult(desc: CPSetDesc):
    """lambda^(1 - beta_exp) as a QuadInt (beta_exp <= 1), so that
    sigma(x) in lambda^(beta_exp-1)*W  iff  mult*sigma(x) in W."""
    k = 1 - desc.beta_exp
    if k < 0:
        raise ValueError("beta_exp > 1 not supported on the integer fast path")
    return fundamental_unit(desc.field).value ** k


def _in_box_exact(u_coords, box: Box) -> bool:
    lo_open, hi_open = box._flags()
    for i, u in enumerate(u_coords):
        lo, hi = box.bounds[i]
        s = exact_compare(u, lo)
        if s < 0 or (s == 0 and lo_open[i]):
            return False
        s = exact_compare(u, hi)
        if s > 0 or (s == 0 and hi_open[i]):
            return False
    return True


def visible_count(desc: CPSetDesc, D, T, method: str = "direct",
                  predicted: float | None = None) -> CountReport:
    """Classify one window of the cut-and-project set and assemble a report.

    count_vis comes from the integer fast path (gcd one and conjugate
    outside the closed inner window); count_pr_inner from the generic exact
    region code; the identity vis = pr - pr_inner is cross-checked between
    the two and recorded in identity_ok.  method='moebius' additionally
    replaces both primitive counts by inclusion-exclusion sums."""
    desc.require_hammarhjelm()
    master = list(iter_raw(desc, D, T))
    inner_region = desc.scaled_window(extra_exp=-1)
    fast_box = desc.window if isinstance(desc.window, Box) else None
    mult = _inner_mult(desc) if fast_box is not None else None
    dd = desc.field.d
    count_all = len(master)
    count_pr = 0
    count_vis = 0
    count_pr_inner = 0
    for xs in master:
        if not any(xs):
            continue
        if not gcd_one(desc, xs):
            continue
        count_pr += 1
        if fast_box is not None:
            in_inner = _in_box_exact([x.conj() * mult for x in xs], fast_box)
        else:
            sigma = tuple(x.conj().as_pair() for x in xs)
            in_inner = inner_region.contains_exact(sigma, dd)
        if in_inner:
            count_pr_inner += 1
        else:
            count_vis += 1
    identity_ok = count_vis == count_pr - count_pr_inner
    if fast_box is not None:
        # independent route for the inner count: generic exact region code
        check = 0
        for xs in master:
            if not any(xs) or not gcd_one(desc, xs):
                continue
            sigma = tuple(x.conj().as_pair() for x in xs)
            if inner_region.contains_exact(sigma, dd):
                check += 1
        identity_ok = identity_ok and check == count_pr_inner
    if method == "moebius":
        m_outer = moebius_count_primitive(desc, D, T)
        m_inner = moebius_count_primitive(desc, D, T,
                                          beta_exp=desc.beta_exp - 1)
        identity_ok = identity_ok and m_outer == count_pr \
            and m_inner == count_pr_inner
    if predicted is None:
        predicted = predicted_density_hammarhjelm(desc)
    vol_td = D.scaled(Fraction(T)).volume()
    m_t = desc.scaled_window().volume() * vol_td / desc.lattice.covolume()
    rel = abs(count_vis / vol_td - predicted) / predicted
    return CountReport(T=float(T), count_vis=count_vis, count_pr=count_pr,
                       count_all=count_all, vol_TD=vol_td, M_T=m_t,
                       predicted=predicted, rel_error=rel,
                       count_pr_inner=count_pr_inner,
                       identity_ok=identity_ok)


@dataclass
class RateFit:
    pairs: list
    slope: float
    intercept: float
    residual: float

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "slope": self.slope,
                "intercept": self.intercept, "residual": self.residual}


def rate_fit(reports: list[CountReport]) -> RateFit:
    """Least-squares slope of log|relative error| against log vol(TD)."""
    if len(reports) < 6:
        raise DegenerateFit("need at least 6 reports")
    if any(r.rel_error <= 0 for r in reports):
        raise DegenerateFit("zero error hit; jitter the T grid")
    xs = np.log([r.vol_TD for r in reports])
    ys = np.log([r.rel_error for r in reports])
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = float(np.sqrt(np.mean((ys - (slope * xs + intercept)) ** 2)))
    return RateFit(pairs=list(zip(xs.tolist(), ys.tolist())),
                   slope=float(slope), intercept=float(intercept),
                   residual=resid)


def random_lattice_experiment(n: int, d: int, window: Box, omega: Box,
                              T_list, samples: int, seed: int,
                              tol: float = 1e-9,
                              force_numpy: bool = False,
                              threads: int = 1) -> dict:
    """Counts of primitive integer vectors u (gcd over Z equal 1) with
    g*u in (T*Omega) x W for iid Gaussian g normalized to |det| = 1.

    The mean of count/(vol(W)*vol(T*Omega)) over samples estimates
    1/zeta(n).  Deterministic for a fixed seed."""
    m = n - d
    if window.dim != m or omega.dim != d:
        raise ValueError("window/omega dimensions must split n")
    rng = np.random.default_rng(seed)
    bases = []
    for _ in range(samples):
        g = rng.standard_normal((n, n))
        g /= abs(np.linalg.det(g)) ** (1.0 / n)
        bases.append(g)
    zn = riemann_zeta(n)
    per_T = []
    total_count = 0
    total_boundary = 0
    for T in T_list:
        bbox = [(float(lo) * T, float(hi) * T) for lo, hi in omega.bbox()]
        bbox += [(float(lo), float(hi)) for lo, hi in window.bbox()]
        lo_x = np.array([b[0] for b in bbox])
        hi_x = np.array([b[1] for b in bbox])
        vol = float(np.prod(hi_x - lo_x))
        widths = hi_x - lo_x

        def _one(g0):
            g = box_reduced_basis(g0, widths)
            lo_u, hi_u = kernels.integer_preimage_box(np.linalg.inv(g), bbox)
            return kernels.count_lattice_points_in_box(
                g, lo_u, hi_u, lo_x, hi_x, tol=tol, primitive=True,
                force_numpy=force_numpy)

        if threads > 1:
            from concurrent.futures import ThreadPoolExecutor
            with ThreadPoolExecutor(max_workers=threads) as ex:
                results = list(ex.map(_one, bases))
        else:
            results = [_one(g0) for g0 in bases]
        densities = [cnt / vol for cnt, _ in results]
        boundary = sum(bnd for _, bnd in results)
        total_count += sum(cnt for cnt, _ in results)
        total_boundary += boundary
        dens = np.array(densities)
        per_T.append({
            "T": float(T), "volume": vol,
            "mean_density": float(dens.mean()),
            "std_density": float(dens.std()),
            "rel_error_vs_zeta": float(abs(dens.mean() - 1 / zn) * zn),
            "boundary_ambiguous": int(boundary),
        })
    return {
        "n": n, "d": d, "m": m, "samples": samples, "seed": seed,
        "zeta_n": zn, "predicted_density": 1 / zn,
        "backend": "numpy" if force_numpy else kernels.backend_name(),
        "per_T": per_T,
        "total_count": int(total_count),
        "total_boundary_ambiguous": int(total_boundary),
        "boundary_fraction": (total_boundary / total_count
                              if total_count else 0.0),
    }
