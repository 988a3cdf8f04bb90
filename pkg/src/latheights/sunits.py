"""S-unit groups over number fields: the logarithmic lattice, the S-height,
its minimal value, the S-regulator with classical bounds, and counting of
S-units of bounded height verified by two independent pipelines.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .bounds import HOLDS, INCONCLUSIVE, LOWER, UPPER, BoundReport, _verdict
from .errors import PrecisionExhausted, UnresolvedTie, ValidationError
from .lattice import RealLattice, _rat_upper, enumerate_cube, supnorm_min
from .nf import FracIdeal, NfElement, NumberField
from .reals import (
    PRECISION,
    Real,
    abs_real,
    cmp_real,
    log_real,
    max_real,
    sqrt_real,
    to_real,
)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _is_prime_power(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, n + 1):
        if _is_prime(p) and n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
    return False


def fundamental_unit_real_quadratic(field: NumberField) -> NfElement:
    """The fundamental unit epsilon > 1 of Q(sqrt m), m squarefree > 1.

    Searches b = 1, 2, ... for the minimal solution of a^2 - m b^2 = +-4;
    epsilon = (a + b sqrt m)/2 then generates the units modulo +-1.
    """
    mp = field.minpoly
    if len(mp) != 3 or mp[2] != 1 or mp[1] != 0 or mp[0] >= 0:
        raise ValidationError("field is not Q(sqrt m) in the form x^2 - m")
    m = -mp[0]
    if m <= 1:
        raise ValidationError("m must exceed 1")
    b = 1
    while True:
        for target in (m * b * b - 4, m * b * b + 4):
            if target <= 0:
                continue
            a = math.isqrt(target)
            if a * a == target:
                eps = field.element([Fraction(a, 2), Fraction(b, 2)])
                if not eps.is_integral():
                    continue
                assert abs(eps.norm()) == 1
                return eps
        b += 1
        if b > 10 ** 6:
            raise ValidationError("fundamental unit search exceeded its budget")


class SUnitContext:
    """A number field with a finite place set S = S_inf + S_1 and generators
    of the S-unit group modulo roots of unity.

    Finite places are given by a principal prime generator and its residue
    norm; unit generators default to the fundamental unit for real quadratic
    fields and to the empty list for Q and imaginary quadratic fields.
    """

    def __init__(self, field: NumberField,
                 s1: Sequence[Tuple[NfElement, int]] = (),
                 unit_gens: Optional[Sequence[NfElement]] = None,
                 omega: int = 2,
                 weighted: bool = False):
        self.field = field
        self.ring = FracIdeal.unit(field)
        self.s1 = list(s1)
        for gen, np in self.s1:
            if not gen.is_integral():
                raise ValidationError("finite place generator must be integral")
            if abs(gen.norm()) != np or not _is_prime_power(np):
                raise ValidationError(
                    "finite place norm must be the prime-power norm of its generator"
                )
        if unit_gens is None:
            r1, r2 = field.signature
            if field.degree == 1 or (field.degree == 2 and r2 == 1):
                unit_gens = []
            elif field.degree == 2 and r1 == 2:
                unit_gens = [fundamental_unit_real_quadratic(field)]
            else:
                raise ValidationError(
                    "unit generators must be supplied for this field"
                )
        self.unit_gens = list(unit_gens)
        if omega < 2 or omega % 2:
            raise ValidationError("the root-of-unity count is even and >= 2")
        self.omega = omega
        self.weighted = weighted
        r1, r2 = field.signature
        self.n_places = r1 + r2 + len(self.s1)
        self.all_gens = self.unit_gens + [g for g, _ in self.s1]
        if len(self.all_gens) != self.n_places - 1:
            raise ValidationError(
                "need exactly |S| - 1 multiplicative generators, got %d for |S| = %d"
                % (len(self.all_gens), self.n_places)
            )
        self._lattice = None

    # -- valuations ---------------------------------------------------------

    def _ord_integral(self, gen: NfElement, y: NfElement) -> int:
        k = 0
        while True:
            y = y / gen
            if not self.ring.contains(y):
                return k
            k += 1

    def ord_at(self, gen: NfElement, x: NfElement) -> int:
        if x.is_zero():
            raise ValidationError("valuation of zero")
        den = x.denominator()
        k = self._ord_integral(gen, x * den)
        if den != 1:
            k -= self._ord_integral(gen, self.field.rational(den))
        return k

    def is_s_unit(self, x: NfElement) -> bool:
        if x.is_zero():
            return False
        u = x
        for gen, _ in self.s1:
            k = self.ord_at(gen, x)
            if k > 0:
                u = u / gen ** k
            elif k < 0:
                u = u * gen ** (-k)
        return self.ring.contains(u) and self.ring.contains(u.inv())

    # -- the logarithmic embedding ------------------------------------------

    def log_embed(self, a: NfElement) -> List[Real]:
        """phi_S(a) = (log|a|_v)_{v in S}; finite coordinates -ord_p(a) log N(p)."""
        if not self.is_s_unit(a):
            raise ValidationError("element is not an S-unit")
        out: List[Real] = []
        for av, dv in self.field.arch_places(a):
            coord = log_real(av)
            if self.weighted:
                coord = coord * dv
            out.append(coord)
        for gen, np in self.s1:
            out.append(log_real(Fraction(np)) * (-self.ord_at(gen, a)))
        return out

    def s_height(self, a: NfElement) -> Real:
        """H_S(a) = max_{v in S} |log|a|_v| (the sup-norm of phi_S(a))."""
        return max_real(*[abs_real(c) for c in self.log_embed(a)])

    # -- the logarithmic lattice --------------------------------------------

    def log_lattice(self) -> "LogLattice":
        if self._lattice is None:
            self._lattice = LogLattice(self)
        return self._lattice


class LogLattice:
    """L_S = phi_S(O_S^*): rank |S| - 1 in the sum-zero hyperplane of R^|S|."""

    def __init__(self, ctx: SUnitContext):
        self.ctx = ctx
        self.rank = len(ctx.all_gens)
        self.basis = [ctx.log_embed(g) for g in ctx.all_gens]
        if self.rank == 0:
            self.lattice = None
            self.regulator = to_real(1)
            self.classical_regulator = to_real(1)
            self.hsk = None
            return
        self.lattice = RealLattice(self.basis)
        try:
            if cmp_real(self.lattice.det_value(), 0, context="log rank") <= 0:
                raise ValidationError("dependent S-unit generators")
        except PrecisionExhausted:
            raise ValidationError("dependent S-unit generators")
        # covolume of L_S; the classical regulator deletes one coordinate,
        # which divides out sqrt(|S|) on the sum-zero hyperplane
        self.regulator = self.lattice.det_value()
        self.classical_regulator = self.regulator / sqrt_real(ctx.n_places)
        self.hsk, _ = supnorm_min(self.lattice)

    def row_sums_contain_zero(self, prec: Optional[int] = None) -> bool:
        """Product formula over S: each basis vector's coordinates sum to 0."""
        prec = prec or PRECISION.start
        for vec in self.basis:
            s = vec[0]
            for c in vec[1:]:
                s = s + c
            iv = to_real(s).interval(prec)
            if not (iv.a <= 0 <= iv.b):
                return False
        return True


def count_sunits(ctx: SUnitContext, b: Fraction) -> int:
    """|{a in O_S^* : H_S(a) <= B}| by two independent pipelines.

    Pipeline 1 counts lattice points of L_S in the closed sup-norm cube of
    radius B; pipeline 2 enumerates exponent vectors directly and filters by
    the S-height.  Both include the omega_K roots of unity per point and
    must agree.
    """
    b = Fraction(b)
    if b <= 0:
        raise ValidationError("the height bound must be positive")
    ll = ctx.log_lattice()
    if ll.rank == 0:
        return ctx.omega
    try:
        in_cube = len(enumerate_cube(ll.lattice, b))
    except PrecisionExhausted as e:
        raise UnresolvedTie("boundary tie while counting S-units: %s" % e)
    count1 = ctx.omega * in_cube
    emax = math.floor(_rat_upper(to_real(b) / ll.hsk))
    count2 = 0
    for es in itertools.product(range(-emax, emax + 1), repeat=ll.rank):
        a = ctx.field.one()
        for e, g in zip(es, ctx.all_gens):
            if e > 0:
                a = a * g ** e
            elif e < 0:
                a = a * g.inv() ** (-e)
        try:
            if cmp_real(ctx.s_height(a), b, context="s-height filter") <= 0:
                count2 += ctx.omega
        except PrecisionExhausted as e:
            raise UnresolvedTie("boundary tie on an S-height: %s" % e)
    if count1 != count2:
        raise ValidationError(
            "S-unit counting pipelines disagree: %d vs %d" % (count1, count2)
        )
    return count1


def lemma_sunit_bounds(ctx: SUnitContext, b: Fraction,
                       instance: str = "sunits") -> Tuple[BoundReport, BoundReport]:
    """Sandwich |O_S^*(B)| between the explicit lower and upper bounds."""
    b = Fraction(b)
    ll = ctx.log_lattice()
    exact = count_sunits(ctx, b)
    n = ctx.n_places
    if ll.rank == 0:
        # finite unit group: the count is exactly omega_K for every B > 0
        lower = BoundReport(instance, b, exact, to_real(ctx.omega), LOWER, True,
                            HOLDS, note="rank zero: exact count")
        upper = BoundReport(instance, b, exact, to_real(ctx.omega), UPPER, True,
                            HOLDS, note="rank zero: exact count")
        return lower, upper
    h = ll.hsk
    reg = ll.regulator
    w = ctx.omega
    bb = to_real(b)
    upper_val = w * (2 * bb / h + 1) ** (n - 1)
    upper = BoundReport(instance, b, exact, upper_val, UPPER, True,
                        _verdict(UPPER, exact, upper_val, "sunit upper"))
    thresh = Fraction(n - 1, 2) * max_real(reg / h ** (n - 2), h)
    try:
        applicable = cmp_real(bb, thresh, context="sunit threshold") >= 0
    except PrecisionExhausted:
        applicable = False
    if not applicable:
        lower = BoundReport(instance, b, exact, None, LOWER, False, INCONCLUSIVE,
                            note="below threshold")
        return lower, upper
    lower_val = (
        w
        * (2 * bb * h ** (n - 2) / ((n - 1) * reg) - 1)
        * (2 * bb / ((n - 1) * h) - 1) ** (n - 2)
    )
    lower = BoundReport(instance, b, exact, lower_val, LOWER, True,
                        _verdict(LOWER, exact, lower_val, "sunit lower"))
    return lower, upper


def _ball_le(x, y, prec: Optional[int] = None) -> bool:
    """x <= y up to the interval widths at the working precision."""
    prec = prec or PRECISION.start
    ix = to_real(x).interval(prec)
    iy = to_real(y).interval(prec)
    return float(ix.a) <= float(iy.b)


def regulator_bound_checks(ctx: SUnitContext, h_k: int,
                           r_k=None) -> dict:
    """Classical sandwich for the S-regulator and its absolute lower bound.

    R_K prod log N(p) <= R_{S,K} <= R_K h_K prod log N(p), and
    R_{S,K} >= 0.2052 (log 2)^d log* P; all compared as Ball inequalities
    on the classical (coordinate-deleted) regulator.
    """
    ll = ctx.log_lattice()
    reg = ll.classical_regulator
    if r_k is None:
        if ctx.unit_gens:
            arch = ctx.field.signature[0] + ctx.field.signature[1]
            cols = [ctx.log_embed(g)[:arch] for g in ctx.unit_gens]
            sub = RealLattice(cols)
            r_k = sub.det_value() / sqrt_real(arch)
        else:
            r_k = to_real(1)
    prod = to_real(1)
    pmax = 0
    for _, np in ctx.s1:
        prod = prod * log_real(Fraction(np))
        pmax = max(pmax, np)
    lowside = r_k * prod
    highside = r_k * h_k * prod
    d = ctx.field.degree
    logstar = max_real(to_real(1), log_real(Fraction(pmax))) if pmax else to_real(1)
    absolute = Fraction(2052, 10000) * log_real(Fraction(2)) ** d * logstar
    return {
        "rs_low": _ball_le(lowside, reg),
        "rs_up": _ball_le(reg, highside),
        "rs_abs": _ball_le(absolute, reg),
    }
