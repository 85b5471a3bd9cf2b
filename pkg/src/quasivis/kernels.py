"""Float-path counting kernels: numba-jitted inner loops with a pure-numpy
fallback, selected by the environment flag QUASIVIS_NO_NUMBA=1.

All kernels are deterministic and order-independent (integer accumulators).
"""

from __future__ import annotations

import math
import os

import numpy as np

USE_NUMBA = os.environ.get("QUASIVIS_NO_NUMBA", "0") not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

_CHUNK = 1 << 18


def _np_int_grid(lo: np.ndarray, hi: np.ndarray):
    """Iterate the integer box [lo, hi] in lexicographic chunks (N x n)."""
    sizes = (hi - lo + 1).astype(np.int64)
    total = int(np.prod(sizes))
    n = len(lo)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        U = np.empty((len(idx), n), dtype=np.int64)
        rem = idx
        for j in range(n - 1, -1, -1):
            U[:, j] = lo[j] + rem % sizes[j]
            rem = rem // sizes[j]
        yield U


def _np_count_box(basis, trans, lo_u, hi_u, lo_x, hi_x, tol,
                  primitive=False):
    count = 0
    boundary = 0
    for U in _np_int_grid(lo_u, hi_u):
        X = U @ basis.T + trans
        inside = np.all((X >= lo_x - tol) & (X <= hi_x + tol), axis=1)
        if primitive:
            g = np.gcd.reduce(np.abs(U), axis=1)
            inside &= g == 1
        near = np.any((np.abs(X - lo_x) <= tol) | (np.abs(X - hi_x) <= tol),
                      axis=1)
        count += int(np.count_nonzero(inside))
        boundary += int(np.count_nonzero(inside & near))
    return count, boundary


def _np_collect_box(basis, trans, lo_u, hi_u, lo_x, hi_x, tol):
    us, xs, bnd = [], [], []
    for U in _np_int_grid(lo_u, hi_u):
        X = U @ basis.T + trans
        inside = np.all((X >= lo_x - tol) & (X <= hi_x + tol), axis=1)
        near = np.any((np.abs(X - lo_x) <= tol) | (np.abs(X - hi_x) <= tol),
                      axis=1)
        us.append(U[inside])
        xs.append(X[inside])
        bnd.append(near[inside])
    return (np.concatenate(us), np.concatenate(xs), np.concatenate(bnd))


if USE_NUMBA:

    @njit(cache=True)
    def _nb_count_box(basis, trans, lo_u, hi_u, lo_x, hi_x, tol, primitive):
        n = lo_u.shape[0]
        m = lo_x.shape[0]
        sizes = np.empty(n, dtype=np.int64)
        total = 1
        for j in range(n):
            sizes[j] = hi_u[j] - lo_u[j] + 1
            total *= sizes[j]
        count = 0
        boundary = 0
        u = np.empty(n, dtype=np.int64)
        x = np.empty(m, dtype=np.float64)
        for flat in range(total):
            rem = flat
            for j in range(n - 1, -1, -1):
                u[j] = lo_u[j] + rem % sizes[j]
                rem //= sizes[j]
            if primitive:
                g = 0
                for j in range(n):
                    a = u[j] if u[j] >= 0 else -u[j]
                    while a:
                        g, a = a, g % a
                if g != 1:
                    continue
            for i in range(m):
                s = trans[i]
                for j in range(n):
                    s += basis[i, j] * u[j]
                x[i] = s
            ok = True
            near = False
            for i in range(m):
                if x[i] < lo_x[i] - tol or x[i] > hi_x[i] + tol:
                    ok = False
                    break
                if abs(x[i] - lo_x[i]) <= tol or abs(x[i] - hi_x[i]) <= tol:
                    near = True
            if ok:
                count += 1
                if near:
                    boundary += 1
        return count, boundary


def count_lattice_points_in_box(basis, lo_u, hi_u, lo_x, hi_x,
                                tol: float = 1e-9, translation=None,
                                primitive: bool = False,
                                force_numpy: bool = False):
    """Count integer vectors u in [lo_u, hi_u] with basis @ u + t inside the
    box [lo_x, hi_x]; returns (count, boundary_ambiguous_count).

    With primitive=True only gcd-1 integer vectors are counted (and the
    all-zero vector is excluded).
    """
    basis = np.ascontiguousarray(basis, dtype=np.float64)
    lo_u = np.asarray(lo_u, dtype=np.int64)
    hi_u = np.asarray(hi_u, dtype=np.int64)
    lo_x = np.asarray(lo_x, dtype=np.float64)
    hi_x = np.asarray(hi_x, dtype=np.float64)
    trans = np.zeros(basis.shape[0]) if translation is None \
        else np.asarray(translation, dtype=np.float64)
    if np.any(hi_u < lo_u):
        return 0, 0
    if USE_NUMBA and not force_numpy:
        return _nb_count_box(basis, trans, lo_u, hi_u, lo_x, hi_x,
                             float(tol), primitive)
    return _np_count_box(basis, trans, lo_u, hi_u, lo_x, hi_x,
                         float(tol), primitive)


def collect_lattice_points_in_box(basis, lo_u, hi_u, lo_x, hi_x,
                                  tol: float = 1e-9, translation=None):
    """As count_lattice_points_in_box but materializes (preimages, points,
    boundary flags) in canonical lexicographic preimage order."""
    basis = np.ascontiguousarray(basis, dtype=np.float64)
    lo_u = np.asarray(lo_u, dtype=np.int64)
    hi_u = np.asarray(hi_u, dtype=np.int64)
    lo_x = np.asarray(lo_x, dtype=np.float64)
    hi_x = np.asarray(hi_x, dtype=np.float64)
    trans = np.zeros(basis.shape[0]) if translation is None \
        else np.asarray(translation, dtype=np.float64)
    if np.any(hi_u < lo_u):
        n = basis.shape[1]
        return (np.empty((0, n), dtype=np.int64),
                np.empty((0, basis.shape[0])), np.empty(0, dtype=bool))
    return _np_collect_box(basis, trans, lo_u, hi_u, lo_x, hi_x, float(tol))


def integer_preimage_box(basis_inv: np.ndarray,
                         bbox: list[tuple[float, float]],
                         translation=None, pad: int = 1):
    """Integer bounds covering the preimage of a bounding box: map all box
    corners through the inverse basis and pad against float rounding."""
    n = basis_inv.shape[0]
    corners = []
    for mask in range(1 << n):
        c = [bbox[j][1] if mask >> j & 1 else bbox[j][0] for j in range(n)]
        corners.append(c)
    corners = np.array(corners, dtype=np.float64)
    if translation is not None:
        corners = corners - np.asarray(translation, dtype=np.float64)
    pre = corners @ basis_inv.T
    lo = np.floor(pre.min(axis=0)).astype(np.int64) - pad
    hi = np.ceil(pre.max(axis=0)).astype(np.int64) + pad
    return lo, hi


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
