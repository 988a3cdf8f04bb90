"""Evaluators for the explicit counting constants and bounds, exact
enumeration oracles for the counted sets, and verification drivers.

Every bound is compared against an independently enumerated exact count;
verdicts are only VIOLATED when exact arithmetic strictly separates the
two sides, and INCONCLUSIVE when the precision cap is hit first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .errors import BudgetExceeded, PrecisionExhausted, ValidationError
from .heights import height_h as height_h_nf
from .lattice import RealLattice, _rat_upper, enumerate_cube
from .modules import OkModule, minima_ck_zk, sigma_embed
from .nf import NfElement, NumberField
from .quat import (
    DSubspace,
    QuatAlgebra,
    QuatElement,
    QuatOrder,
    bracket,
    bracket_inv,
    eval_hermitian,
    height_Hinf,
    height_h,
    height_h_order,
    intersection_module,
    minima_cz_order,
    s_t_constants,
    split_rho_matrix,
    subspace_height_HO,
)
from .reals import (
    Real,
    Rooted,
    abs_real,
    cmp_real,
    log_real,
    pi_real,
    pow_real,
    to_real,
)

HOLDS = "HOLDS"
VIOLATED = "VIOLATED"
INCONCLUSIVE = "INCONCLUSIVE"
LOWER = "LOWER"
UPPER = "UPPER"


@dataclass
class BoundReport:
    instance: str
    radius: object
    exact_count: Optional[int]
    bound_value: object
    kind: str
    applicable: bool
    verdict: str
    note: str = ""

    def as_dict(self) -> Dict[str, object]:
        from .reals import real_to_float

        bv = self.bound_value
        if bv is not None:
            bv = real_to_float(bv.as_real() if isinstance(bv, Rooted) else bv)
        r = self.radius
        if isinstance(r, Rooted):
            r = real_to_float(r.as_real())
        elif isinstance(r, Fraction):
            r = float(r)
        return {
            "instance": self.instance,
            "kind": self.kind,
            "R": r,
            "exact": self.exact_count,
            "bound": bv,
            "applicable": self.applicable,
            "verdict": self.verdict,
            "note": self.note,
        }


def as_rooted(x) -> Rooted:
    if isinstance(x, Rooted):
        return x
    return Rooted(to_real(x), 1)


def _pow2_half(n: int) -> Rooted:
    """2^{n/2} exactly, n any integer."""
    base = Fraction(2) ** n
    return Rooted(base, 2)


def _verdict(kind: str, exact: int, bound_real, context: str) -> str:
    """HOLDS/VIOLATED/INCONCLUSIVE for a bound against an exact count."""
    try:
        c = cmp_real(bound_real, exact, context=context)
    except PrecisionExhausted:
        return INCONCLUSIVE
    if kind == LOWER:
        return HOLDS if c <= 0 else VIOLATED
    return HOLDS if c >= 0 else VIOLATED


# ---------------------------------------------------------------------------
# module counting: constants, oracle, lower bound


def const_E1_E2(module: OkModule, minima=None) -> Tuple[Rooted, Rooted]:
    """Threshold and growth constants for the module point-count lower bound."""
    field = module.field
    d = field.degree
    r1 = field.signature[0]
    big_l = module.rank
    if minima is None:
        minima = minima_ck_zk(module)
    c, _, z, _ = minima
    ld = big_l * d
    e1 = _pow2_half(big_l * r1 - 3) * ld * z * c ** (ld - 1)
    e2 = _pow2_half(3) * c * (z * ld).inverse()
    return e1, e2


def _fast_count_totally_real(module: OkModule, rd_frac: Fraction) -> Optional[int]:
    """Vectorized count of {x in M : h(x)^d <= rd} for integral modules over
    totally real fields of degree <= 2.

    Float arithmetic screens candidates with a rigorous error band; the few
    band points are re-decided exactly, so the result is certified.
    """
    try:
        import numpy as np
    except ImportError:
        return None
    from .reals import QuadReal
    from .lattice import ENUM_BUDGET, _coefficient_box

    field = module.field
    d = field.degree
    if d > 2 or field.signature[0] != d:
        return None
    if any(xi.denominator() != 1 for v in module.z_basis for xi in v):
        return None
    lat = module.module_lattice()
    cols = lat.columns
    m_val = 0
    for col in cols:
        for e in col:
            if not isinstance(e, QuadReal):
                return None
            if e.m:
                if m_val and e.m != m_val:
                    return None
                m_val = e.m
    den = rd_frac.denominator
    for col in cols:
        for e in col:
            den = math.lcm(den, e.a.denominator, e.b.denominator)
    n, big_l = lat.ambient_dim, lat.rank
    a_int = [[int(cols[j][i].a * den) for j in range(big_l)] for i in range(n)]
    b_int = [[int(cols[j][i].b * den) for j in range(big_l)] for i in range(n)]
    caps = _coefficient_box(lat, _rat_upper(to_real(rd_frac)))
    total = 1
    for c in caps:
        total *= 2 * c + 1
    if total > ENUM_BUDGET:
        raise BudgetExceeded(
            "enumeration box has %d candidates (budget %d)" % (total, ENUM_BUDGET)
        )
    maxentry = max(max(map(abs, row), default=0) for row in a_int + b_int) or 1
    maxcap = max(caps) if caps else 0
    if maxentry * (maxcap + 1) * big_l >= 2 ** 52:
        return None
    big_n = n // d  # module coordinates per channel block
    amat = np.array(a_int, dtype=np.int64)  # n x L
    bmat = np.array(b_int, dtype=np.int64)
    sq = math.sqrt(m_val) if m_val else 0.0
    target = float(Fraction(rd_frac) * den ** d)
    lo_gate = target * (1 - 1e-10)
    hi_gate = target * (1 + 1e-10)
    rd_rooted = as_rooted(rd_frac) if rd_frac >= 0 else None
    count = 0
    # chunk along the largest axis to bound memory
    axis = max(range(big_l), key=lambda j: caps[j]) if big_l else 0
    rest_axes = [j for j in range(big_l) if j != axis]
    ranges = [np.arange(-caps[j], caps[j] + 1, dtype=np.int64) for j in rest_axes]
    if ranges:
        grids = np.meshgrid(*ranges, indexing="ij")
        rest = np.stack([g.ravel() for g in grids], axis=1)
    else:
        rest = np.zeros((1, 0), dtype=np.int64)
    rest_a = rest @ amat[:, rest_axes].T  # (#rest, n)
    rest_b = rest @ bmat[:, rest_axes].T
    for m0 in range(-caps[axis], caps[axis] + 1):
        va = rest_a + m0 * amat[:, axis]
        vb = rest_b + m0 * bmat[:, axis]
        vals = np.abs(va.astype(np.float64) + vb.astype(np.float64) * sq)
        per_ch = vals.reshape(-1, d, big_n).max(axis=2)
        np.maximum(per_ch, float(den), out=per_ch)
        hsq = per_ch.prod(axis=1)
        count += int((hsq <= lo_gate).sum())
        band = np.nonzero((hsq > lo_gate) & (hsq < hi_gate))[0]
        for idx in band:
            coeffs = [0] * big_l
            coeffs[axis] = m0
            for t, j in enumerate(rest_axes):
                coeffs[j] = int(rest[idx, t])
            if all(c == 0 for c in coeffs):
                count += 1  # h(0) = 1 <= R
                continue
            x = _module_point(module, coeffs)
            h_pow = height_h_nf(field, x).as_rooted()
            if (h_pow ** d).cmp(rd_rooted, context="module height band") <= 0:
                count += 1
    return count


def exact_count_module(module: OkModule, radius) -> int:
    """|{x in M : h(x) <= R}| by exhaustive certified enumeration.

    Every embedded coordinate of x is bounded by h(x)^d, so a cube of
    radius R^d contains all candidates; membership is decided exactly.
    """
    r = as_rooted(radius)
    if r.cmp(1, context="count radius") < 0:
        raise ValidationError("count radius must be at least 1")
    field = module.field
    d = field.degree
    rd = r ** d
    if rd.k == 1:
        from .reals import QuadReal

        base = rd.base
        if isinstance(base, QuadReal) and base.is_rational:
            fast = _fast_count_totally_real(module, base.as_fraction())
            if fast is not None:
                return fast
    cube = _rat_upper((r ** d).as_real())
    count = 1  # the zero vector has height 1
    for m in enumerate_cube(module.module_lattice(), cube):
        if all(c == 0 for c in m):
            continue
        x = _module_point(module, m)
        h_pow = height_h_nf(field, x).as_rooted()  # value h(x)
        if (h_pow ** d).cmp(rd, context="module height filter") <= 0:
            count += 1
    return count


def _module_point(module: OkModule, coeffs: Sequence[int]) -> List[NfElement]:
    acc = None
    for c, v in zip(coeffs, module.z_basis):
        if c:
            term = [vi * c for vi in v]
            acc = term if acc is None else [a + b for a, b in zip(acc, term)]
    return acc


def thm1_lower(module: OkModule, radius, instance: str = "module", minima=None) -> BoundReport:
    """Lower bound on |{x in M : h(x) <= R}| versus the enumeration oracle."""
    r = as_rooted(radius)
    field = module.field
    d = field.degree
    big_l = module.rank
    e1, e2 = const_E1_E2(module, minima=minima)
    disc = abs(module.module_discriminant())
    thresh = e1 * Rooted(disc ** big_l, 2)  # E1 |D|^{L/2}
    applicable = r.cmp(thresh, context="thm1 threshold") >= 0
    try:
        exact = exact_count_module(module, r)
    except BudgetExceeded:
        return BoundReport(instance, r, None, None, LOWER, applicable, INCONCLUSIVE,
                           note="enumeration budget exceeded")
    if not applicable:
        return BoundReport(instance, r, exact, None, LOWER, False, INCONCLUSIVE,
                           note="below threshold")
    main = (r * thresh.inverse()).as_real() - to_real(1)
    factor = (e2 * r).as_real() - to_real(1)
    bound = main * _ipow_real(factor, big_l * d - 1)
    verdict = _verdict(LOWER, exact, bound, "thm1 verdict")
    return BoundReport(instance, r, exact, bound, LOWER, True, verdict)


def _ipow_real(x, n: int):
    acc = to_real(1)
    for _ in range(n):
        acc = acc * x
    return acc


# ---------------------------------------------------------------------------
# quaternion counting: constants, oracles, bounds


def const_E3_E4(order: QuatOrder, z: DSubspace, minima=None):
    """(E3, E4, E3') for the subspace point-count lower bound."""
    alg = order.algebra
    d = alg.field.degree
    big_l = z.dim
    if minima is None:
        minima = minima_cz_order(z, order)
    c_o, _, z_o, _ = minima
    s, _, _, _ = s_t_constants(alg)
    nd = Fraction(order.discriminant_norm())
    ld = big_l * d
    e3 = (
        _pow2_half(4 * big_l * (d - 2) + 3)
        * ld
        * s
        * z_o
        * c_o ** (4 * ld - 1)
        * Rooted(nd ** big_l, 2)
    )
    e4 = c_o * (_pow2_half(3) * ld * s * z_o).inverse()
    e3p = (
        Rooted(Fraction(2) ** (4 * big_l * (2 * d - 1)))
        * (s * z_o * ld) ** (4 * ld)
        * Rooted(nd ** big_l, 2)
    ).inverse()
    return e3, e4, e3p


def exact_count_zo(z: DSubspace, order: QuatOrder, radius) -> int:
    """|{x in Z cap O^N : h(x) <= R}| by enumeration of the bracket module."""
    r = as_rooted(radius)
    alg = z.algebra
    field = alg.field
    d = field.degree
    _, t, _, _ = s_t_constants(alg)
    module = intersection_module(z, order)
    cube = _rat_upper(((r * t.inverse()) ** d).as_real())
    count = 0
    if r.cmp(1, context="zo zero") >= 0:
        count += 1  # zero vector
    for m in enumerate_cube(module.module_lattice(), cube):
        if all(c == 0 for c in m):
            continue
        xs = bracket_inv(alg, _module_point(module, m))
        if height_h(xs).cmp(r, context="zo height filter") <= 0:
            count += 1
    return count


def thm_main1_lower(z: DSubspace, order: QuatOrder, radius,
                    instance: str = "subspace", minima=None) -> BoundReport:
    """Lower bound on |{x in Z cap O^N : h(x) <= R}| versus enumeration."""
    r = as_rooted(radius)
    alg = order.algebra
    d = alg.field.degree
    big_l = z.dim
    e3, e4, _ = const_E3_E4(order, z, minima=minima)
    ho = subspace_height_HO(z, order)
    thresh = e3 * ho ** (4 * d)
    applicable = r.cmp(thresh, context="main1 threshold") >= 0
    try:
        exact = exact_count_zo(z, order, r)
    except BudgetExceeded:
        return BoundReport(instance, r, None, None, LOWER, applicable, INCONCLUSIVE,
                           note="enumeration budget exceeded")
    if not applicable:
        return BoundReport(instance, r, exact, None, LOWER, False, INCONCLUSIVE,
                           note="below threshold")
    main = (r * thresh.inverse()).as_real() - to_real(1)
    factor = (e4 * r).as_real() - to_real(1)
    bound = main * _ipow_real(factor, 4 * big_l * d - 1)
    verdict = _verdict(LOWER, exact, bound, "main1 verdict")
    return BoundReport(instance, r, exact, bound, LOWER, True, verdict)


def weighted_module_det_sq(alg: QuatAlgebra, module: OkModule):
    """Squared covolume of a bracket module under the norm-weighted embedding.

    Channel weights (1, |alpha|^{1/2}, |beta|^{1/2}, |alpha beta|^{1/2}) per
    quaternionic coordinate make the quaternion norm the Euclidean norm.
    """
    field = alg.field
    d = field.degree
    basis_q = [bracket_inv(alg, v) for v in module.z_basis]
    a_ch = [abs_real(c) for c in field.channel_values(alg.alpha)]
    b_ch = [abs_real(c) for c in field.channel_values(alg.beta)]

    def pairing(x, y):
        acc = None
        for ch in range(d):
            for xl, yl in zip(x, y):
                xs = [field.channel_values(c)[ch] for c in xl.c]
                ys = [field.channel_values(c)[ch] for c in yl.c]
                t = (
                    xs[0] * ys[0]
                    + a_ch[ch] * (xs[1] * ys[1])
                    + b_ch[ch] * (xs[2] * ys[2])
                    + a_ch[ch] * b_ch[ch] * (xs[3] * ys[3])
                )
                acc = t if acc is None else acc + t
        return acc

    n = len(basis_q)
    gram = [[pairing(basis_q[i], basis_q[j]) for j in range(n)] for i in range(n)]
    return linalg.det(gram)


def det_mz_check(z: DSubspace, order: QuatOrder) -> bool:
    """Certify det_w(M_Z) = (sqrt(N(Delta_O)) |D_K|^2 / 4^d)^L H^O(Z)^{4d}.

    det_w is the covolume under the norm-weighted embedding; the identity
    ties the bracket-module lattice to the subspace height and the order
    discriminant.
    """
    alg = z.algebra
    field = alg.field
    d = field.degree
    big_l = z.dim
    module = intersection_module(z, order)
    det_sq = weighted_module_det_sq(alg, module)
    ho = subspace_height_HO(z, order)
    nd = Fraction(order.discriminant_norm())
    dk = Fraction(abs(field.discriminant))
    coef_sq = (nd * dk ** 4 / Fraction(4) ** (2 * d)) ** big_l
    rhs = Rooted(coef_sq, 2) * ho ** (4 * d)
    return Rooted(det_sq, 2).cmp(rhs, context="det consistency") == 0


def loher_masser_upper(d: int, n: int, radius):
    """(1088 d log d)^n R^{(n+1)d} as a refinable enclosure."""
    if d < 2:
        raise ValidationError("the counting upper bound requires degree >= 2")
    r = as_rooted(radius)
    head = _ipow_real(to_real(1088 * d) * log_real(d), n)
    return head * (r ** ((n + 1) * d)).as_real()


def exact_count_d(algebra: QuatAlgebra, order: QuatOrder, n: int, radius) -> int:
    """|{x in D^N : h(x) <= R}| with the order-finite-part height.

    Candidates are generated as w/m with w an integral bracket vector and
    m a positive integer denominator; m is bounded by the finite part of
    the height and coordinates by the archimedean part.
    """
    r = as_rooted(radius)
    alg = algebra
    field = alg.field
    d = field.degree
    _, t, _, _ = s_t_constants(alg)
    b = r * t.inverse()  # h_K([x]) <= R/t
    bd = (b ** d).as_real()
    m_max = math.floor(_rat_upper(bd))
    free = OkModule.free_module(field, 4 * n)
    lat = free.module_lattice()
    # fail fast: the whole denominator sweep must fit the budget
    from .lattice import ENUM_BUDGET, _coefficient_box

    grand_total = 0
    for m in range(1, m_max + 1):
        total = 1
        for c in _coefficient_box(lat, _rat_upper(bd) * m):
            total *= 2 * c + 1
        grand_total += total
    if grand_total > ENUM_BUDGET:
        raise BudgetExceeded(
            "enumeration sweep has %d candidates (budget %d)"
            % (grand_total, ENUM_BUDGET)
        )
    seen = set()
    count = 0
    for m in range(1, m_max + 1):
        cube = _rat_upper(bd) * m
        for coeffs in enumerate_cube(lat, cube):
            if all(c == 0 for c in coeffs):
                if m == 1 and r.cmp(1, context="zero height") >= 0:
                    count += 1
                continue
            vec = _module_point(free, coeffs)
            key = tuple(
                tuple(ci / m for ci in e.coeffs) for e in vec
            )
            if key in seen:
                continue
            seen.add(key)
            xs = [q * Fraction(1, m) for q in bracket_inv(alg, vec)]
            if height_h_order(order, xs).cmp(r, context="d height filter") <= 0:
                count += 1
    return count


def thm_main2_upper(algebra: QuatAlgebra, order: QuatOrder, n: int, radius,
                    instance: str = "quaternion") -> BoundReport:
    """Upper bound on |{x in D^N : h(x) <= R}| versus enumeration."""
    d = algebra.field.degree
    if d < 2:
        raise ValidationError("the counting upper bound requires degree >= 2")
    r = as_rooted(radius)
    _, t, _, _ = s_t_constants(algebra)
    bound = loher_masser_upper(d, 4 * n, r * t.inverse())
    try:
        exact = exact_count_d(algebra, order, n, r)
    except BudgetExceeded:
        return BoundReport(instance, r, None, bound, UPPER, True, INCONCLUSIVE,
                           note="enumeration budget exceeded")
    verdict = _verdict(UPPER, exact, bound, "main2 verdict")
    return BoundReport(instance, r, exact, bound, UPPER, True, verdict)


# ---------------------------------------------------------------------------
# field constants for the search bounds


def _gamma_half(num2: int):
    """Gamma(num2/2) exactly: rational for even num2, rational * sqrt(pi) else.

    Returns (rational, pi_half_power) with value = rational * pi^{pi_half/2}.
    """
    if num2 <= 0:
        raise ValidationError("gamma argument must be positive")
    if num2 % 2 == 0:
        return Fraction(math.factorial(num2 // 2 - 1)), 0
    # Gamma(k + 1/2) = (2k)! / (4^k k!) sqrt(pi)
    k = (num2 - 1) // 2
    return Fraction(math.factorial(2 * k), 4 ** k * math.factorial(k)), 1


def const_rv(is_real: bool, j: int):
    """Per-place ellipsoid constant as a refinable enclosure."""
    if j == 0:
        # boundary convention: empty product value 1
        return to_real(1)
    if j < 0:
        raise ValidationError("rv argument must be nonnegative")
    pi = pi_real()
    if is_real:
        rat, pih = _gamma_half(j + 2)  # Gamma(j/2 + 1)
        # (rat * pi^{pih/2})^{1/j} * pi^{-1/2}
        val = pow_real(rat, Fraction(1, j)) * pow_real(pi, Fraction(pih, 2 * j))
        return val * pow_real(pi, Fraction(-1, 2))
    rat = Fraction(math.factorial(j))  # Gamma(j + 1)
    val = pow_real(rat, Fraction(1, 2 * j))
    return val * pow_real(2 * pi, Fraction(-1, 2))


def const_TK(field: NumberField, ell: int, j: int):
    """Dimensional field constant used in the small-zero search bounds."""
    if ell < 1 or j < 1:
        raise ValidationError("T_K arguments must be positive")
    d = field.degree
    r1, r2 = field.signature
    mx = max(ell, 9)
    dk = Fraction(abs(field.discriminant))
    val = to_real(27)
    val = val * pow_real(pi_real(), Fraction(-(r2 * ell * (9 * ell + 14)), 2 * d))
    exp2 = Fraction(r2 * ell * (9 * ell + 14) + (21 * ell - 21) * d + 5 * r1 + 4, 2 * d)
    val = val * pow_real(2, exp2 + mx)
    val = val * pow_real(ell, Fraction(27 * ell + 51, 2))
    val = val * pow_real(j, Fraction(2, d)) * pow_real(j + 2, Fraction(3, d))
    val = val * pow_real(dk, Fraction(ell * (9 * ell + 14) + 14, 2 * d) + mx)
    rv_prod = to_real(1)
    for _ in range(r1):
        rv_prod = rv_prod * pow_real(const_rv(True, ell - 1), Fraction(1, d))
    for _ in range(r2):
        rv_prod = rv_prod * pow_real(const_rv(False, ell - 1), Fraction(2, d))
    return val * _ipow_real(rv_prod, mx)


def const_A(order: QuatOrder, n: int, big_l: int, big_m: int, big_j: int):
    """Search-bound constant combining s, t, the order defect, and T_K."""
    alg = order.algebra
    field = alg.field
    s, t, _, _ = s_t_constants(alg)
    from .quat import order_constants

    _, defect = order_constants(order)
    val = _pow2_half(9 * big_l + 13).as_real()
    val = val * (s ** (9 * big_l + 12)).as_real()
    t_pow = t.inverse() ** (9 * big_l + 11)
    val = val * Rooted(t_pow.base, t_pow.k * 2).as_real()  # t^{-(9L+11)/2}
    val = val * (defect ** (4 * (n - big_l) * (9 * big_l + 12))).as_real()
    val = val * const_TK(field, big_l, big_m + 2 * big_j + 1)
    return val


# ---------------------------------------------------------------------------
# constructive searches


def _in_subspace(u: DSubspace, xs: Sequence[QuatElement]) -> bool:
    for row in u.constraint_rows():
        acc = None
        for ri, xi in zip(row, xs):
            term = ri * xi
            acc = term if acc is None else acc + term
        if not acc.is_zero():
            return False
    return True


def _d_rank(rows: Sequence[Sequence[QuatElement]]) -> int:
    return linalg.rank(split_rho_matrix(rows)) // 2


def _module_points_by_height(z: DSubspace, order: QuatOrder,
                             start_radius: Fraction, max_radius: Fraction):
    """Yield (height, point) lists shell by shell, radius doubling."""
    alg = z.algebra
    module = intersection_module(z, order)
    lat = module.module_lattice()
    radius = start_radius
    emitted = set()
    while radius <= max_radius:
        batch = []
        for m in enumerate_cube(lat, radius):
            if all(c == 0 for c in m):
                continue
            if m in emitted:
                continue
            emitted.add(m)
            xs = bracket_inv(alg, _module_point(module, m))
            batch.append((height_h(xs), xs))
        batch.sort(key=lambda p: _height_key(p[0]))
        yield batch
        radius *= 2


def _height_key(h: Rooted) -> float:
    from .reals import real_to_float

    return real_to_float(h.as_real())


def search_basis(z: DSubspace, order: QuatOrder,
                 avoid_subspaces: Sequence[DSubspace] = (),
                 avoid_forms: Sequence[Sequence[Sequence[QuatElement]]] = (),
                 max_radius: Fraction = Fraction(64)) -> Dict[str, object]:
    """Find a small basis of Z over D avoiding subspaces and form zero sets.

    Returns the basis in nondecreasing height order, the height of its
    largest vector, the search bound, and a PASS/EXHAUSTED status.
    """
    alg = z.algebra
    field = alg.field
    d = field.degree
    big_l = z.dim
    big_m = len(avoid_subspaces)
    big_j = len(avoid_forms)
    basis: List[List[QuatElement]] = []
    heights: List[Rooted] = []
    for batch in _module_points_by_height(z, order, Fraction(1), max_radius):
        for h, xs in batch:
            if len(basis) == big_l:
                break
            if any(_in_subspace(u, xs) for u in avoid_subspaces):
                continue
            if any(eval_hermitian(f, xs).is_zero() for f in avoid_forms):
                continue
            if basis and _d_rank(
                [[v[i] for i in range(z.ambient)] for v in basis + [xs]]
            ) != len(basis) + 1:
                continue
            basis.append(list(xs))
            heights.append(h)
        if len(basis) == big_l:
            break
    if len(basis) < big_l:
        raise BudgetExceeded(
            "basis search exhausted its radius budget (%d of %d found)"
            % (len(basis), big_l)
        )
    ho = subspace_height_HO(z, order)
    s, _, _, _ = s_t_constants(alg)
    from .quat import order_constants

    _, defect = order_constants(order)
    dk = Fraction(abs(field.discriminant))
    bound = to_real(4 * big_l)
    bound = bound * pow_real(big_m + 2 * big_j + 1, Fraction(1, d))
    bound = bound * pow_real(dk, Fraction(big_l + 1, 2 * d))
    bound = bound * s.as_real()
    bound = bound * (defect ** (4 * (z.ambient - big_l))).as_real()
    bound = bound * (ho ** 4).as_real()
    top = heights[-1]
    try:
        ok = cmp_real(top.as_real(), bound, context="basis bound") <= 0
        status = "PASS" if ok else "FAIL"
    except PrecisionExhausted:
        status = INCONCLUSIVE
    return {
        "basis": basis,
        "heights": heights,
        "bound": bound,
        "status": status,
    }


def search_isotropic(form, z: DSubspace, order: QuatOrder,
                     avoid_subspaces: Sequence[DSubspace] = (),
                     avoid_forms: Sequence[Sequence[Sequence[QuatElement]]] = (),
                     max_radius: Fraction = Fraction(64),
                     check_bound: bool = True) -> Dict[str, object]:
    """Find a small zero of a hermitian form in Z avoiding the given sets.

    With check_bound the found height is compared against the explicit
    search bound; without it only the point is reported.
    """
    alg = z.algebra
    d = alg.field.degree
    big_l = z.dim
    big_m = len(avoid_subspaces)
    big_j = len(avoid_forms)
    found = None
    for batch in _module_points_by_height(z, order, Fraction(1), max_radius):
        for h, xs in batch:
            if not eval_hermitian(form, xs).is_zero():
                continue
            if any(_in_subspace(u, xs) for u in avoid_subspaces):
                continue
            if any(eval_hermitian(f, xs).is_zero() for f in avoid_forms):
                continue
            found = (h, xs)
            break
        if found:
            break
    if found is None:
        raise BudgetExceeded("isotropic search exhausted its radius budget")
    h, xs = found
    result: Dict[str, object] = {"point": xs, "height": h}
    if check_bound:
        a_const = const_A(order, z.ambient, big_l, big_m, big_j)
        hinf_f = height_Hinf([e for row in form for e in row])
        w = hinf_f ** (9 * big_l + 11)
        hf_pow = Rooted(w.base, w.k * 2)  # H_inf(F)^{(9L+11)/2}
        ho = subspace_height_HO(z, order)
        bound = a_const * hf_pow.as_real() * (ho ** (4 * (9 * big_l + 12))).as_real()
        result["bound"] = bound
        try:
            ok = cmp_real(h.as_real(), bound, context="isotropic bound") <= 0
            result["status"] = "PASS" if ok else "FAIL"
        except PrecisionExhausted:
            result["status"] = INCONCLUSIVE
    else:
        result["status"] = "FOUND"
    return result
