import math
import random
from fractions import Fraction

import pytest

from latheights.errors import ValidationError
from latheights.lattice import (
    RealLattice,
    bound_lower,
    bound_upper,
    enumerate_cube,
    lower_bound_threshold,
    max_grassmann_sublattice,
    supnorm_min,
)
from latheights.reals import QuadReal, cmp_real, sqrt_real


def test_enumerate_z2():
    lat = RealLattice([[1, 0], [0, 1]])
    assert len(enumerate_cube(lat, 1)) == 9
    assert len(enumerate_cube(lat, 2)) == 25


def test_enumerate_2z():
    lat = RealLattice([[2]])
    pts = enumerate_cube(lat, 3)
    assert sorted(m[0] for m in pts) == [-1, 0, 1]


def test_enumerate_skew():
    lat = RealLattice([[1, 1], [1, -1]])
    assert len(enumerate_cube(lat, 1)) == 5


def test_enumerate_boundary_exact():
    # point exactly on the boundary must be included (closed cube)
    lat = RealLattice([[Fraction(1, 2)]])
    pts = enumerate_cube(lat, Fraction(3, 2))
    assert sorted(m[0] for m in pts) == [-3, -2, -1, 0, 1, 2, 3]


def test_enumerate_quadratic_entries():
    r2 = QuadReal(0, 1, 2)
    lat = RealLattice([[1, 1], [r2, -r2]])  # sigma-embedding of Z[sqrt2]
    # |a + b sqrt2| <= R and |a - b sqrt2| <= R
    pts = enumerate_cube(lat, 2)
    coeffs = set(pts)
    assert (0, 0) in coeffs and (1, 0) in coeffs and (0, 1) in coeffs
    assert (2, 1) not in coeffs  # 2 + sqrt2 > 2
    for a, b in coeffs:
        v = abs(a + b * math.sqrt(2))
        w = abs(a - b * math.sqrt(2))
        assert max(v, w) <= 2 + 1e-9


def test_supnorm_min():
    assert cmp_real(supnorm_min(RealLattice([[1, 0], [0, 1]]))[0], 1) == 0
    assert cmp_real(supnorm_min(RealLattice([[2, 0], [0, 3]]))[0], 2) == 0
    assert cmp_real(supnorm_min(RealLattice([[1, 1], [1, -1]]))[0], 1) == 0


def test_det_value():
    lat = RealLattice([[1, 1], [1, -1]])
    assert cmp_real(lat.det_value(), 2) == 0
    lat2 = RealLattice([[1, 1]])  # single vector (1,1): det = sqrt(2)
    assert cmp_real(lat2.det_value() ** 2, 2) == 0


def test_bound_upper_cases():
    # Z^2, R=1, full rank
    b = bound_upper(2, 2, 1, 1, 1)
    assert cmp_real(b, 9) == 0
    # L < N branch
    b2 = bound_upper(3, 2, 1, 1, 1)
    assert cmp_real(b2, 9) == 0  # (2R/c+1)^{N-1} = 3^2
    # integral branch for 2Z^2 in Z^2: min(full-rank branch, integral branch)
    lat = RealLattice([[2, 0], [0, 2]])
    exact = len(enumerate_cube(lat, 2))
    b3 = bound_upper(2, 2, 4, 2, 2, integral=True)
    assert exact == 9
    assert cmp_real(b3, exact) >= 0
    # the integral branch alone gives (2*sqrt2*2/4+1)(2*2+1)
    root = sqrt_real(2)
    val = (2 * root * 2 / 4 + 1) * 5
    assert cmp_real(b3, val) <= 0


def test_bound_lower_cases():
    v = bound_lower(2, 1, 1, 2)  # Z^2 at R=2
    assert cmp_real(v, 1) == 0
    assert len(enumerate_cube(RealLattice([[1, 0], [0, 1]]), 2)) >= 1
    v2 = bound_lower(1, 1, 1, 1)
    assert cmp_real(v2, 1) == 0
    v3 = bound_lower(2, 4, 2, 4)
    assert cmp_real(v3, 1) == 0
    with pytest.raises(ValidationError):
        bound_lower(2, 4, 2, Fraction(1, 10))


def test_max_grassmann():
    lat = RealLattice.from_rows([[1, 0], [0, 1], [0, 0]])
    omega, d = max_grassmann_sublattice(lat)
    assert cmp_real(d, 1) == 0
    assert omega.ambient_dim == 2 and omega.rank == 2

    lat2 = RealLattice.from_rows([[1, 0], [0, 1], [1, 1]])
    _, d2 = max_grassmann_sublattice(lat2)
    assert cmp_real(d2, 1) == 0

    lat3 = RealLattice.from_rows([[2, 0], [0, 1], [0, 0]])
    _, d3 = max_grassmann_sublattice(lat3)
    assert cmp_real(d3, 2) == 0


def _random_integral_lattice(rng):
    n = rng.randint(1, 4)
    big_l = rng.randint(1, n)
    while True:
        rows = [[rng.randint(-9, 9) for _ in range(big_l)] for _ in range(n)]
        lat = RealLattice.from_rows(rows)
        g = lat.gram()
        from latheights import linalg

        if linalg.det([[e.as_fraction() for e in row] for row in g]) != 0:
            return lat


def test_sandwich_property():
    rng = random.Random(2024)
    accepted = 0
    while accepted < 40:
        lat = _random_integral_lattice(rng)
        n, big_l = lat.ambient_dim, lat.rank
        det_val = lat.det_value()
        c, _ = supnorm_min(lat)
        thresh = lower_bound_threshold(big_l, det_val, c)
        from latheights.lattice import _coefficient_box, _rat_upper

        radius = Fraction(math.ceil(_rat_upper(thresh)))
        caps = _coefficient_box(lat, radius)
        total = 1
        for cc in caps:
            total *= 2 * cc + 1
        if total > 200_000:
            continue
        exact = len(enumerate_cube(lat, radius))
        up = bound_upper(n, big_l, det_val, c, radius, integral=True)
        low = bound_lower(big_l, det_val, c, radius)
        assert cmp_real(low, exact) <= 0, (lat.columns, radius)
        assert cmp_real(up, exact) >= 0, (lat.columns, radius)
        accepted += 1


def test_det_sandwich_and_projection():
    rng = random.Random(77)
    checked = 0
    while checked < 25:
        lat = _random_integral_lattice(rng)
        n, big_l = lat.ambient_dim, lat.rank
        omega, det_omega = max_grassmann_sublattice(lat)
        det_lambda = lat.det_value()
        binom_root = sqrt_real(math.comb(n, big_l))
        assert cmp_real(det_omega, det_lambda) <= 0
        assert cmp_real(det_lambda, binom_root * det_omega) <= 0
        # projection inequality: |Lambda cap C_N(R)| >= |Omega cap C_L(R/L)|
        radius = Fraction(rng.randint(1, 6))
        from latheights.lattice import _coefficient_box

        caps = _coefficient_box(lat, radius)
        total = 1
        for cc in caps:
            total *= 2 * cc + 1
        if total > 200_000:
            continue
        big = len(enumerate_cube(lat, radius))
        small = len(enumerate_cube(omega, Fraction(radius, big_l)))
        assert small <= big
        checked += 1


def test_count_monotone_in_radius():
    lat = RealLattice([[1, 1], [1, -1]])
    prev = -1
    for r in range(5):
        cur = len(enumerate_cube(lat, r))
        assert cur >= prev
        prev = cur
