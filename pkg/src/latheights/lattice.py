"""Lattices in R^n: exact cube enumeration and sup-norm counting bounds.

A lattice is held by a basis matrix with exact (rational or quadratic
irrational) or certified-interval entries.  Membership of a point in a
closed cube is decided exactly; undecidable boundary ties raise rather than
mis-count.  The enumeration is the ground-truth oracle that every counting
bound in this library is checked against.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from mpmath import mpf

from . import linalg
from .errors import BudgetExceeded, PrecisionExhausted, ValidationError
from .reals import (
    PRECISION,
    QuadReal,
    Real,
    abs_real,
    cmp_real,
    min_real,
    max_real,
    sqrt_real,
    to_real,
)

ENUM_BUDGET = 30_000_000  # max candidate coefficient vectors per enumeration


def _frac_from_mpf(x) -> Fraction:
    """Exact rational value of a finite mpmath float or interval endpoint."""
    if hasattr(x, "_mpi_"):
        # interval endpoint: take the exact upper bound, not a rounded midpoint
        data = x._mpi_[1]
    else:
        data = mpf(x)._mpf_
    sign, man, exp, _ = data
    if not isinstance(exp, int):
        raise ValidationError("non-finite value in rational conversion")
    val = Fraction(int(man)) * Fraction(2) ** exp
    return -val if sign else val


def _rat_upper(x: Real) -> Fraction:
    """An exact rational upper bound for a Real."""
    x = to_real(x)
    if isinstance(x, QuadReal) and x.is_rational:
        return x.as_fraction()
    return _frac_from_mpf(x.interval(PRECISION.start).b)


class RealLattice:
    """Rank-L lattice in R^N given by basis columns."""

    def __init__(self, columns: Sequence[Sequence]):
        cols = [[to_real(e) for e in col] for col in columns]
        if not cols:
            raise ValidationError("lattice needs at least one basis vector")
        n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise ValidationError("ragged basis columns")
        self.ambient_dim = n
        self.rank = len(cols)
        self.columns = cols
        self._gram = None
        self._supnorm_min = None

    @classmethod
    def from_rows(cls, rows) -> "RealLattice":
        return cls(list(map(list, zip(*rows))))

    def gram(self):
        if self._gram is None:
            big_l = self.rank
            self._gram = [
                [
                    sum(
                        (self.columns[i][t] * self.columns[j][t] for t in range(1, self.ambient_dim)),
                        self.columns[i][0] * self.columns[j][0],
                    )
                    for j in range(big_l)
                ]
                for i in range(big_l)
            ]
        return self._gram

    def det_value(self) -> Real:
        """det(Lambda) = sqrt(det(B^T B)), exact when the Gram det is rational."""
        g = linalg.det(self.gram())
        return sqrt_real(g)

    def point(self, coeffs: Sequence[int]) -> List[Real]:
        return [
            sum(
                (self.columns[j][i] * coeffs[j] for j in range(1, self.rank)),
                self.columns[0][i] * coeffs[0],
            )
            for i in range(self.ambient_dim)
        ]

    def is_rational(self) -> bool:
        return all(
            isinstance(e, QuadReal) and e.is_rational for col in self.columns for e in col
        )

    def __repr__(self):
        return "RealLattice(N=%d, L=%d)" % (self.ambient_dim, self.rank)


def _coefficient_box(lat: RealLattice, radius: Fraction) -> List[int]:
    """Per-coordinate caps M_i with |m_i| <= M_i for all points in the cube."""
    g = lat.gram()
    ginv = linalg.inverse(g)
    if ginv is None:
        raise ValidationError("basis columns are linearly dependent")
    # pseudo-inverse rows: (G^{-1} B^T)_i., coefficient m = pinv @ x
    bt = [[lat.columns[j][i] for i in range(lat.ambient_dim)] for j in range(lat.rank)]
    pinv = linalg.mat_mul(ginv, bt)
    caps = []
    for row in pinv:
        s = abs_real(row[0])
        for e in row[1:]:
            s = s + abs_real(e)
        cap = _rat_upper(s * radius)
        caps.append(max(0, math.floor(cap)))
    return caps


def enumerate_cube(lat: RealLattice, radius) -> List[Tuple[int, ...]]:
    """All integer coefficient vectors m with |B m|_inf <= radius (closed).

    Exact boundary decisions; raises BudgetExceeded when the candidate box
    is larger than ENUM_BUDGET.
    """
    radius = Fraction(radius)
    if radius < 0:
        return []
    caps = _coefficient_box(lat, radius)
    total = 1
    for c in caps:
        total *= 2 * c + 1
    if total > ENUM_BUDGET:
        raise BudgetExceeded(
            "enumeration box has %d candidates (budget %d)" % (total, ENUM_BUDGET)
        )
    if lat.is_rational():
        return _enumerate_rational(lat, radius, caps)
    return _enumerate_generic(lat, radius, caps)


def _enumerate_rational(lat, radius, caps):
    den = 1
    for col in lat.columns:
        for e in col:
            den = math.lcm(den, e.as_fraction().denominator)
    cols = [[int(e.as_fraction() * den) for e in col] for col in lat.columns]
    bound = radius * den  # |sum m_j c_j| <= bound, integer lhs vs rational rhs
    bn, bd = bound.numerator, bound.denominator
    out = []
    n, big_l = lat.ambient_dim, lat.rank

    try:
        import numpy as np

        maxentry = max(abs(x) for col in cols for x in col) or 1
        maxcap = max(caps) if caps else 0
        # int64 overflow guard for the matrix product and boundary test
        if maxentry * (maxcap + 1) * big_l * bd < 2**62 and bn < 2**62:
            b = np.array(cols, dtype=np.int64).T  # n x L
            # chunk along the axis with the largest cap to bound memory
            axis = max(range(big_l), key=lambda j: caps[j])
            rest_axes = [j for j in range(big_l) if j != axis]
            ranges = [
                np.arange(-caps[j], caps[j] + 1, dtype=np.int64) for j in rest_axes
            ]
            if ranges:
                grids = np.meshgrid(*ranges, indexing="ij")
                rest = np.stack([g.ravel() for g in grids], axis=1)
            else:
                rest = np.zeros((1, 0), dtype=np.int64)
            rest_vals = rest @ b[:, rest_axes].T  # (#rest, n)
            col_axis = b[:, axis]
            for m0 in range(-caps[axis], caps[axis] + 1):
                vals = rest_vals + m0 * col_axis
                keep = (np.abs(vals) * bd <= bn).all(axis=1)
                for row in rest[keep]:
                    m = [0] * big_l
                    m[axis] = m0
                    for t, j in enumerate(rest_axes):
                        m[j] = int(row[t])
                    out.append(tuple(m))
            return out
    except ImportError:
        pass

    for m in itertools.product(*[range(-c, c + 1) for c in caps]):
        ok = True
        for i in range(n):
            v = sum(m[j] * cols[j][i] for j in range(big_l))
            if abs(v) * bd > bn:
                ok = False
                break
        if ok:
            out.append(tuple(m))
    return out


def _certified_in_cube(lat, m, radius) -> bool:
    for v in lat.point(m):
        if cmp_real(abs_real(v), radius, context="cube boundary") > 0:
            return False
    return True


def _enumerate_generic(lat, radius, caps):
    n, big_l = lat.ambient_dim, lat.rank
    try:
        import numpy as np
    except ImportError:
        np = None
    if np is not None and big_l:
        from .reals import real_to_float

        colsf = np.array(
            [[real_to_float(e) for e in col] for col in lat.columns],
            dtype=np.float64,
        ).T  # n x L
        # float screen: certified re-check only inside a safety band around
        # the boundary, wide enough to absorb all rounding error
        mags = np.abs(colsf) @ np.array([c + 1 for c in caps], dtype=np.float64)
        tol = max(1.0, float(mags.max())) * 1e-9
        rad = float(radius)
        lo, hi = rad - tol, rad + tol
        out = []
        axis = max(range(big_l), key=lambda j: caps[j])
        rest_axes = [j for j in range(big_l) if j != axis]
        ranges = [np.arange(-caps[j], caps[j] + 1) for j in rest_axes]
        if ranges:
            grids = np.meshgrid(*ranges, indexing="ij")
            rest = np.stack([g.ravel() for g in grids], axis=1)
        else:
            rest = np.zeros((1, 0))
        rest_vals = rest @ colsf[:, rest_axes].T  # (#rest, n)
        col_axis = colsf[:, axis]
        for m0 in range(-caps[axis], caps[axis] + 1):
            mx = np.abs(rest_vals + m0 * col_axis).max(axis=1)
            for idx in np.nonzero(mx <= hi)[0]:
                m = [0] * big_l
                m[axis] = m0
                for t, j in enumerate(rest_axes):
                    m[j] = int(rest[idx, t])
                if mx[idx] <= lo or _certified_in_cube(lat, m, radius):
                    out.append(tuple(m))
        return out
    out = []
    for m in itertools.product(*[range(-c, c + 1) for c in caps]):
        if _certified_in_cube(lat, m, radius):
            out.append(tuple(m))
    return out


def supnorm_min(lat: RealLattice):
    """(c, witness coefficients): minimal sup-norm over nonzero vectors.

    Certified: every nonzero lattice vector outside the searched cube has
    sup-norm exceeding the returned minimum.
    """
    if lat._supnorm_min is not None:
        return lat._supnorm_min
    # initial radius: the smallest basis-vector sup-norm (a valid upper bound)
    r0 = None
    for j in range(lat.rank):
        s = max_real(*[abs_real(lat.columns[j][i]) for i in range(lat.ambient_dim)])
        r0 = s if r0 is None else min_real(r0, s)
    radius = _rat_upper(r0)
    pts = enumerate_cube(lat, radius)
    best = None
    best_m = None
    for m in pts:
        if all(x == 0 for x in m):
            continue
        s = max_real(*[abs_real(v) for v in lat.point(m)])
        if best is None:
            best, best_m = s, m
            continue
        try:
            smaller = cmp_real(s, best, context="supnorm min") < 0
        except PrecisionExhausted:
            # undecidable means equal to within the cap: keep the incumbent
            smaller = False
        if smaller:
            best, best_m = s, m
    if best is None:
        raise ValidationError("no nonzero vector in the initial search cube")
    lat._supnorm_min = (best, best_m)
    return best, best_m


# ---------------------------------------------------------------------------
# counting bounds


def bound_upper(n: int, big_l: int, det_val, c, radius, integral: bool = False) -> Real:
    """Upper bound for |Lambda cap C_n(R)|; min over applicable branches."""
    det_val, c, radius = to_real(det_val), to_real(c), to_real(Fraction(radius))
    branches = []
    if big_l == n:
        branches.append(
            (2 * radius * c ** (n - 1) / det_val + 1) * (2 * radius / c + 1) ** (n - 1)
        )
    else:
        branches.append((2 * radius / c + 1) ** (n - 1))
    if integral:
        root = sqrt_real(math.comb(n, big_l))
        branches.append(
            (2 * root * radius / det_val + 1) * (2 * radius + 1) ** (big_l - 1)
        )
    return min_real(*branches)


def lower_bound_threshold(big_l: int, det_val, c) -> Real:
    """Smallest R for which the lower bound applies: (L/2) max{det/c^{L-1}, c}."""
    det_val, c = to_real(det_val), to_real(c)
    return Fraction(big_l, 2) * max_real(det_val / c ** (big_l - 1), c)


def bound_lower(big_l: int, det_val, c, radius) -> Real:
    """Lower bound for |Lambda cap C_N(R)|; errors if R misses the threshold."""
    det_val, c = to_real(det_val), to_real(c)
    radius = to_real(Fraction(radius))
    thresh = lower_bound_threshold(big_l, det_val, c)
    if cmp_real(radius, thresh, context="lower bound threshold") < 0:
        raise ValidationError("lower bound not applicable: R below threshold")
    return (2 * radius * c ** (big_l - 1) / (big_l * det_val) - 1) * (
        2 * radius / (big_l * c) - 1
    ) ** (big_l - 1)


def max_grassmann_sublattice(lat: RealLattice):
    """(Omega, det Omega): full-rank projection onto the maximizing L rows."""
    big_l = lat.rank
    best = None
    best_rows = None
    for rows in itertools.combinations(range(lat.ambient_dim), big_l):
        sub = [[lat.columns[j][i] for j in range(big_l)] for i in rows]
        d = abs_real(linalg.det(sub))
        if best is None or cmp_real(d, best, context="grassmann max") > 0:
            best, best_rows = d, rows
    if best is None or cmp_real(best, 0) == 0:
        raise ValidationError("lattice basis is rank deficient")
    omega = RealLattice(
        [[lat.columns[j][i] for i in best_rows] for j in range(big_l)]
    )
    return omega, best
