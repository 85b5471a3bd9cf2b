"""Certified gcd-holes via CRT, translate search near a subspace, and the
empirical empty-ball scan."""

import math

import numpy as np
import pytest

from quasivis.holes import (
    CRTHole,
    NotFound,
    NotInResidueClass,
    build_crt_hole,
    hole_near_subspace,
    scan_empty_ball,
    verify_hole,
)
from quasivis.regions import Box


@pytest.mark.parametrize("n,A", [(2, 0), (2, 1), (3, 1)])
def test_build_and_verify(n, A):
    hole = build_crt_hole(n, A)
    assert len(hole.prime_table) == (2 * A + 1) ** n
    assert len(set(hole.prime_table.values())) == len(hole.prime_table)
    assert hole.N == math.prod(hole.prime_table.values())
    assert all(0 <= v < hole.N for v in hole.x0)
    assert verify_hole(hole, hole.x0)
    # every point in the box has the assigned prime as a divisor witness
    for tup, pr in hole.prime_table.items():
        point = [x + t for x, t in zip(hole.x0, tup)]
        assert all(v % pr == 0 for v in point)
        assert math.gcd(*point) != 1


def test_prime_table_lex_order_smallest_primes():
    hole = build_crt_hole(2, 1)
    tuples = list(hole.prime_table)
    assert tuples == sorted(tuples)
    assert sorted(hole.prime_table.values()) == \
        [2, 3, 5, 7, 11, 13, 17, 19, 23]
    assert hole.prime_table[(-1, -1)] == 2


@pytest.mark.parametrize("n,A", [(2, 1), (3, 1)])
def test_verify_random_translates(n, A):
    hole = build_crt_hole(n, A)
    rng = np.random.default_rng(17)
    for _ in range(5):
        k = rng.integers(-10 ** 6, 10 ** 6, size=n)
        x = tuple(int(x0) + hole.N * int(kj) for x0, kj in zip(hole.x0, k))
        assert verify_hole(hole, x)


def test_verify_rejects_wrong_residue():
    hole = build_crt_hole(2, 1)
    off = (hole.x0[0] + 1, hole.x0[1])
    with pytest.raises(NotInResidueClass):
        verify_hole(hole, off)
    with pytest.raises(NotInResidueClass):
        verify_hole(hole, (1, 2, 3))


def test_verify_detects_corrupt_certificate():
    hole = build_crt_hole(2, 1)
    bad = CRTHole(n=2, A=1, prime_table=hole.prime_table,
                  x0=(hole.x0[0], (hole.x0[1] + hole.N // 7) % hole.N),
                  N=hole.N)
    # same residue class as itself, so no exception, but the divisor
    # witnesses fail
    assert not verify_hole(bad, bad.x0)


def test_json_roundtrip():
    hole = build_crt_hole(3, 1)
    again = CRTHole.from_json(hole.to_json())
    assert again == hole


def test_build_rejects_bad_parameters():
    with pytest.raises(ValueError):
        build_crt_hole(1, 1)
    with pytest.raises(ValueError):
        build_crt_hole(2, -1)


def test_hole_near_subspace_finds_translate():
    hole = build_crt_hole(2, 0)
    V = [[1.0, math.sqrt(2)]]
    x = hole_near_subspace(hole, V, R=float(hole.N), search_budget=20000)
    assert x is not NotFound
    assert verify_hole(hole, x)
    q = np.array(V[0]) / np.linalg.norm(V[0])
    v = np.array(x, dtype=float)
    dist = np.linalg.norm(v - (v @ q) * q)
    assert dist <= hole.N


def test_hole_near_subspace_budget_exhausted():
    hole = build_crt_hole(2, 0)
    V = [[1.0, math.sqrt(2)]]
    assert hole_near_subspace(hole, V, R=1.0, search_budget=0) is NotFound
    # x0 of the A=1 hole is off the irrational line, so a vanishing radius
    # cannot be met within a tiny budget
    hole1 = build_crt_hole(2, 1)
    assert hole_near_subspace(hole1, V, R=1e-12,
                              search_budget=50) is NotFound


def test_not_found_is_falsy_singleton():
    assert not NotFound
    from quasivis.holes import _NotFoundType
    assert _NotFoundType() is NotFound


def test_scan_empty_ball_z2():
    pts = [(float(a), float(b)) for a in range(0, 101) for b in range(0, 101)
           if math.gcd(a, b) == 1]
    scan = scan_empty_ball(pts, Box.make([(0, 100), (0, 100)]),
                           r_grid=[0.5, 1.0, 1.5, 2.0, 3.0], grid_step=0.5)
    # a hole box of invisible points yields an empty ball of radius > 1
    assert scan.radius >= 1.0
    cx, cy = scan.center
    assert 0 <= cx <= 100 and 0 <= cy <= 100
    for a in range(0, 101):
        for b in range(0, 101):
            if math.gcd(a, b) == 1:
                assert (a - cx) ** 2 + (b - cy) ** 2 > scan.radius ** 2


def test_scan_empty_ball_no_points_gives_inradius():
    scan = scan_empty_ball([], Box.make([(0, 10), (0, 4)]), r_grid=[1, 2, 5])
    assert scan.radius == 2.0


def test_scan_empty_ball_monotone_in_region_size():
    def visible(a, b):
        return math.gcd(a, b) == 1

    small = [(float(a), float(b)) for a in range(51) for b in range(51)
             if visible(a, b)]
    large = [(float(a), float(b)) for a in range(201) for b in range(201)
             if visible(a, b)]
    grid = [0.5 * k for k in range(1, 12)]
    r_small = scan_empty_ball(small, Box.make([(0, 50), (0, 50)]),
                              grid).radius
    r_large = scan_empty_ball(large, Box.make([(0, 200), (0, 200)]),
                              grid).radius
    assert r_large >= r_small > 0
