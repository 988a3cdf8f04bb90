"""Certified real numbers: exact quadratic irrationals and interval balls.

Two carriers cover every real quantity in the library:

* ``QuadReal`` -- numbers of the form a + b*sqrt(m) with rational a, b and a
  squarefree integer m >= 0.  All sign decisions are exact, which is what
  makes closed-cube boundary membership decidable at desk scale.
* ``BallReal`` -- a value known only through an interval enclosure, backed by
  a recompute callback so the enclosure can be refined on demand.  Refinement
  always intersects with the previous enclosure, so intervals shrink
  monotonically.

Comparisons between balls refine from ``PRECISION.start`` bits, doubling up
to ``PRECISION.cap``; an undecided comparison at the cap raises
``PrecisionExhausted`` instead of guessing.
"""

from __future__ import annotations

import math
from fractions import Fraction

from mpmath import iv

from .errors import PrecisionExhausted


class _Precision:
    """Global working-precision policy (bits of interval evaluation)."""

    def __init__(self, start=64, cap=8192):
        self.start = start
        self.cap = cap


PRECISION = _Precision()


def _squarefree_split(m):
    """m = s**2 * m0 with m0 squarefree; returns (s, m0).  m >= 0."""
    if m == 0:
        return 1, 0
    s, m0, k = 1, m, 2
    while k * k <= m0:
        k2 = k * k
        while m0 % k2 == 0:
            m0 //= k2
            s *= k
        k += 1
    return s, m0


def _iv_from_fraction(q, ):
    return iv.mpf(q.numerator) / q.denominator


class Real:
    """Abstract exact-or-certified real."""

    __slots__ = ()

    def interval(self, prec):
        raise NotImplementedError

    # arithmetic dispatch -------------------------------------------------
    def __add__(self, other):
        return _add(self, to_real(other))

    def __radd__(self, other):
        return _add(to_real(other), self)

    def __sub__(self, other):
        return _add(self, _neg(to_real(other)))

    def __rsub__(self, other):
        return _add(to_real(other), _neg(self))

    def __mul__(self, other):
        return _mul(self, to_real(other))

    def __rmul__(self, other):
        return _mul(to_real(other), self)

    def __truediv__(self, other):
        return _div(self, to_real(other))

    def __rtruediv__(self, other):
        return _div(to_real(other), self)

    def __neg__(self):
        return _neg(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("integer exponent expected; use pow_real for roots")
        return _ipow(self, n)


class QuadReal(Real):
    """a + b*sqrt(m), exact.  m squarefree and >= 0; m == 0 iff rational."""

    __slots__ = ("a", "b", "m")

    def __new__(cls, a, b=0, m=0):
        a = Fraction(a)
        b = Fraction(b)
        if m < 0:
            raise ValueError("QuadReal radicand must be nonnegative")
        s, m0 = _squarefree_split(m)
        if m0 <= 1:
            a = a + b * s * m0  # sqrt(0) = 0, sqrt(1) = 1
            b, m0 = Fraction(0), 0
        else:
            b = b * s
        if b == 0:
            m0 = 0
        self = object.__new__(cls)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", m0)
        return self

    def __setattr__(self, *args):
        raise AttributeError("QuadReal is immutable")

    @property
    def is_rational(self):
        return self.b == 0

    def as_fraction(self):
        if not self.is_rational:
            raise ValueError("not rational: %s" % (self,))
        return self.a

    def conj(self):
        return QuadReal(self.a, -self.b, self.m)

    def sign(self):
        """Exact sign in {-1, 0, 1}."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return 1 if b > 0 else -1
        # sign of a + b*sqrt(m): compare a^2 with b^2 m when signs differ
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        lhs, rhs = a * a, b * b * self.m
        if a > 0:  # b < 0
            return 1 if lhs > rhs else (-1 if lhs < rhs else 0)
        return -1 if lhs > rhs else (1 if lhs < rhs else 0)

    def interval(self, prec):
        old = iv.prec
        try:
            iv.prec = prec
            x = _iv_from_fraction(self.a)
            if self.b:
                x += _iv_from_fraction(self.b) * iv.sqrt(iv.mpf(self.m))
            return x
        finally:
            iv.prec = old

    def __hash__(self):
        return hash((self.a, self.b, self.m))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QuadReal(other)
        if isinstance(other, QuadReal):
            return (self.a, self.b, self.m) == (other.a, other.b, other.m)
        return NotImplemented

    def __repr__(self):
        if self.b == 0:
            return "QuadReal(%s)" % (self.a,)
        return "QuadReal(%s + %s*sqrt(%d))" % (self.a, self.b, self.m)


class BallReal(Real):
    """A real known through a refinable interval enclosure."""

    __slots__ = ("_fn", "_prec", "_ival")

    def __init__(self, fn):
        self._fn = fn
        self._prec = 0
        self._ival = None

    def interval(self, prec):
        if self._ival is not None and self._prec >= prec:
            return self._ival
        old = iv.prec
        try:
            iv.prec = prec
            val = self._fn(prec)
        finally:
            iv.prec = old
        if self._ival is not None:
            val = _intersect(val, self._ival, prec)
        self._prec, self._ival = prec, val
        return val

    def refine(self):
        """Return self after doubling the cached working precision."""
        prec = max(self._prec, PRECISION.start)
        self.interval(min(2 * prec, PRECISION.cap))
        return self

    def __repr__(self):
        ival = self.interval(max(self._prec, PRECISION.start))
        return "BallReal(%s)" % (ival,)


def _intersect(x, y, prec):
    old = iv.prec
    try:
        iv.prec = prec
        lo = max(x.a, y.a)
        hi = min(x.b, y.b)
        if lo > hi:
            raise PrecisionExhausted("interval refinement produced empty set")
        return iv.mpf([lo, hi])
    finally:
        iv.prec = old


def to_real(x):
    if isinstance(x, Real):
        return x
    if isinstance(x, (int, Fraction)):
        return QuadReal(x)
    raise TypeError("cannot interpret %r as a Real" % (x,))


ZERO = QuadReal(0)
ONE = QuadReal(1)


# ---------------------------------------------------------------------------
# arithmetic


def _compatible(x, y):
    return x.m == 0 or y.m == 0 or x.m == y.m


def _ball_of(x):
    if isinstance(x, BallReal):
        return x
    return BallReal(lambda p, q=x: q.interval(p))


def _binop_ball(x, y, op):
    bx, by = _ball_of(x), _ball_of(y)
    return BallReal(lambda p: op(bx.interval(p), by.interval(p)))


def _add(x, y):
    if isinstance(x, QuadReal) and isinstance(y, QuadReal) and _compatible(x, y):
        m = x.m or y.m
        return QuadReal(x.a + y.a, x.b + y.b, m)
    return _binop_ball(x, y, lambda a, b: a + b)


def _neg(x):
    if isinstance(x, QuadReal):
        return QuadReal(-x.a, -x.b, x.m)
    return BallReal(lambda p: -x.interval(p))


def _mul(x, y):
    if isinstance(x, QuadReal) and isinstance(y, QuadReal) and _compatible(x, y):
        m = x.m or y.m
        return QuadReal(x.a * y.a + x.b * y.b * m, x.a * y.b + x.b * y.a, m)
    return _binop_ball(x, y, lambda a, b: a * b)


def _div(x, y):
    if isinstance(y, QuadReal):
        den = y.a * y.a - y.b * y.b * y.m
        if den == 0:
            if y.a == 0 and y.b == 0:
                raise ZeroDivisionError("division by zero Real")
            den = y.a * y.a - y.b * y.b * y.m  # unreachable for m squarefree > 1
        inv = QuadReal(y.a / den, -y.b / den, y.m)
        return _mul(x, inv)
    return _binop_ball(x, y, lambda a, b: a / b)


def _ipow(x, n):
    if n == 0:
        return ONE
    if n < 0:
        return _div(ONE, _ipow(x, -n))
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else _mul(result, base)
        n >>= 1
        if n:
            base = _mul(base, base)
    return result


# ---------------------------------------------------------------------------
# comparisons


def cmp_real(x, y, context=""):
    """Three-way comparison; raises PrecisionExhausted if undecidable."""
    x, y = to_real(x), to_real(y)
    if isinstance(x, QuadReal) and isinstance(y, QuadReal) and _compatible(x, y):
        return _add(x, _neg(y)).sign()
    prec = PRECISION.start
    while True:
        ix, iy = x.interval(prec), y.interval(prec)
        if ix.b < iy.a:
            return -1
        if ix.a > iy.b:
            return 1
        if prec >= PRECISION.cap:
            raise PrecisionExhausted(
                "comparison undecided at %d bits%s: %s vs %s"
                % (prec, (" (%s)" % context) if context else "", ix, iy)
            )
        prec = min(2 * prec, PRECISION.cap)


def sign_real(x):
    return cmp_real(x, ZERO)


def le_real(x, y, context=""):
    return cmp_real(x, y, context) <= 0


def lt_real(x, y, context=""):
    return cmp_real(x, y, context) < 0


def abs_real(x):
    x = to_real(x)
    if isinstance(x, QuadReal):
        return x if x.sign() >= 0 else _neg(x)
    return BallReal(lambda p: abs(x.interval(p)))


def max_real(*xs):
    xs = [to_real(x) for x in xs]
    best = xs[0]
    for x in xs[1:]:
        if all(isinstance(v, QuadReal) for v in (best, x)) and _compatible(best, x):
            if cmp_real(x, best) > 0:
                best = x
        else:
            bb, bx = _ball_of(best), _ball_of(x)
            best = BallReal(
                lambda p, u=bb, v=bx: _iv_max(u.interval(p), v.interval(p), p)
            )
    return best


def min_real(*xs):
    return _neg(max_real(*[_neg(to_real(x)) for x in xs]))


def _iv_max(a, b, prec):
    old = iv.prec
    try:
        iv.prec = prec
        return iv.mpf([max(a.a, b.a), max(a.b, b.b)])
    finally:
        iv.prec = old


# ---------------------------------------------------------------------------
# elementary functions


def sqrt_real(x):
    x = to_real(x)
    if isinstance(x, QuadReal) and x.is_rational:
        q = x.as_fraction()
        if q < 0:
            raise ValueError("sqrt of negative value")
        if q == 0:
            return ZERO
        # sqrt(p/q) = sqrt(p*q)/q, exact as a QuadReal
        return QuadReal(0, Fraction(1, q.denominator), q.numerator * q.denominator)
    return BallReal(lambda p: _iv_sqrt_clamped(x.interval(p), p))


def _iv_sqrt_clamped(a, prec):
    old = iv.prec
    try:
        iv.prec = prec
        lo = a.a
        if lo < 0:
            a = iv.mpf([0, a.b])
        return iv.sqrt(a)
    finally:
        iv.prec = old


def nthroot_real(x, n):
    """x**(1/n) for x >= 0 and integer n >= 1."""
    if n == 1:
        return to_real(x)
    if n == 2:
        return sqrt_real(x)
    x = to_real(x)
    if isinstance(x, QuadReal) and x.is_rational:
        q = x.as_fraction()
        if q < 0:
            raise ValueError("nth root of negative value")
        rn = _exact_iroot(q.numerator, n)
        rd = _exact_iroot(q.denominator, n)
        if rn is not None and rd is not None:
            return QuadReal(Fraction(rn, rd))
    return BallReal(lambda p: _iv_root(x.interval(p), n, p))


def _exact_iroot(k, n):
    if k == 0:
        return 0
    r = round(k ** (1.0 / n))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**n == k:
            return cand
    return None


def _iv_root(a, n, prec):
    old = iv.prec
    try:
        iv.prec = prec
        if a.a < 0:
            a = iv.mpf([0, a.b])
        if a.a == 0 and a.b == 0:
            return iv.mpf(0)
        if a.a <= 0:
            # interval touches zero; bracket by endpoint roots
            hi = iv.exp(iv.log(iv.mpf([a.b, a.b])) / n)
            return iv.mpf([0, hi.b])
        return iv.exp(iv.log(a) / n)
    finally:
        iv.prec = old


def pow_real(x, e):
    """x**e for Fraction exponent e (x > 0 unless e is a nonneg integer)."""
    e = Fraction(e)
    if e.denominator == 1:
        return _ipow(to_real(x), e.numerator)
    return nthroot_real(_ipow(to_real(x), e.numerator), e.denominator)


def log_real(x):
    x = to_real(x)
    return BallReal(lambda p: _iv_log(x.interval(p), p))


def _iv_log(a, prec):
    old = iv.prec
    try:
        iv.prec = prec
        return iv.log(a)
    finally:
        iv.prec = old


def exp_real(x):
    x = to_real(x)
    return BallReal(lambda p: _iv_exp(x.interval(p), p))


def _iv_exp(a, prec):
    old = iv.prec
    try:
        iv.prec = prec
        return iv.exp(a)
    finally:
        iv.prec = old


def pi_real():
    return BallReal(lambda p: iv.pi)


def real_to_float(x):
    """Midpoint as a float, for display and rough sorting only."""
    from mpmath import mp

    a = to_real(x).interval(PRECISION.start)
    return float(mp.mpf(a.mid))


def ball_decimals(x, digits=20):
    """(midpoint, radius, prec) decimal strings for serialization."""
    x = to_real(x)
    prec = PRECISION.start
    a = x.interval(prec)
    old = iv.prec
    try:
        iv.prec = prec
        mid = (a.a + a.b) / 2
        rad = (a.b - a.a) / 2
        from mpmath import mp, mpf

        mp.prec = prec
        return (mp.nstr(mpf(mid), digits), mp.nstr(mpf(rad), 5), prec)
    finally:
        iv.prec = old


# ---------------------------------------------------------------------------
# rooted values


class Rooted:
    """value = base**(1/k) with base >= 0 carried exactly when possible.

    Heights live here: an inhomogeneous height over a degree-d field is
    carried as (h**d, d) with h**d exact, so threshold comparisons against
    rationals never leave the exact regime.
    """

    __slots__ = ("base", "k")

    def __init__(self, base, k=1):
        base = to_real(base)
        if isinstance(base, QuadReal) and base.is_rational and k > 1:
            q = base.as_fraction()
            # reduce perfect powers to keep cross-power comparisons small
            for divisor in range(k, 1, -1):
                if k % divisor == 0:
                    rn = _exact_iroot(q.numerator, divisor)
                    rd = _exact_iroot(q.denominator, divisor)
                    if rn is not None and rd is not None:
                        base = QuadReal(Fraction(rn, rd))
                        k //= divisor
                        break
        self.base = base
        self.k = k

    def as_real(self):
        return nthroot_real(self.base, self.k)

    def cmp(self, other, context=""):
        if not isinstance(other, Rooted):
            other = Rooted(to_real(other), 1)
        if self.k == other.k:
            return cmp_real(self.base, other.base, context)
        g = math.gcd(self.k, other.k)
        return cmp_real(
            _ipow(self.base, other.k // g), _ipow(other.base, self.k // g), context
        )

    def __mul__(self, other):
        if not isinstance(other, Rooted):
            other = Rooted(to_real(other), 1)
        lcm = self.k * other.k // math.gcd(self.k, other.k)
        return Rooted(
            _mul(_ipow(self.base, lcm // self.k), _ipow(other.base, lcm // other.k)),
            lcm,
        )

    def __pow__(self, n):
        if n < 0:
            return Rooted(_ipow(self.base, -n), self.k).inverse()
        g = math.gcd(n, self.k) if n else 1
        return Rooted(_ipow(self.base, n // g), self.k // g) if n else Rooted(ONE, 1)

    def inverse(self):
        return Rooted(_div(ONE, self.base), self.k)

    def __repr__(self):
        return "Rooted(%r, 1/%d)" % (self.base, self.k)

    def __float__(self):
        return real_to_float(self.as_real())
