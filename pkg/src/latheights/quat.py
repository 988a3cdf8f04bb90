"""Positive-definite quaternion algebras over totally real number fields.

D = (alpha, beta / K) with alpha, beta integral and totally negative.
Provides exact element arithmetic, the splitting representation over
E = K(sqrt(alpha)) (implemented as twisted pairs over K), orders with
Z-bases, the archimedean and finite heights, right D-subspaces with both
basis and constraint matrices, and the hermitian-to-quadratic trace form.

Heights are carried in 2d-th or 4d-th power form so that threshold
comparisons stay exact for quadratic base fields.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .errors import ValidationError
from .intmat import lattice_contains, lattice_index
from .modules import OkModule, minima_ck_zk
from .nf import FracIdeal, NfElement, NumberField
from .reals import Real, Rooted, abs_real, cmp_real, max_real, min_real, sqrt_real


class QuatAlgebra:
    """D = (alpha, beta / K), positive definite."""

    def __init__(self, field: NumberField, alpha: NfElement, beta: NfElement):
        if field.signature[1] != 0:
            raise ValidationError("base field must be totally real")
        for name, val in (("alpha", alpha), ("beta", beta)):
            if not val.is_integral():
                raise ValidationError("%s must be integral" % name)
            for ch in field.channel_values(val):
                if cmp_real(ch, 0, context="total negativity") >= 0:
                    raise ValidationError("%s must be totally negative" % name)
        self.field = field
        self.alpha = alpha
        self.beta = beta

    def element(self, c0, c1=None, c2=None, c3=None) -> "QuatElement":
        zero = self.field.zero()
        comps = [c0, c1 or zero, c2 or zero, c3 or zero]
        comps = [
            self.field.rational(c) if isinstance(c, (int, Fraction)) else c
            for c in comps
        ]
        return QuatElement(self, comps)

    def zero(self) -> "QuatElement":
        return self.element(0)

    def one(self) -> "QuatElement":
        return self.element(1)

    def i(self) -> "QuatElement":
        return self.element(0, self.field.one())

    def j(self) -> "QuatElement":
        return self.element(0, None, self.field.one())

    def k(self) -> "QuatElement":
        return self.element(0, None, None, self.field.one())

    def from_bracket(self, coords: Sequence[NfElement]) -> "QuatElement":
        return QuatElement(self, list(coords))

    def __repr__(self):
        return "QuatAlgebra(alpha=%r, beta=%r)" % (
            list(self.alpha.coeffs),
            list(self.beta.coeffs),
        )


class QuatElement:
    """x = x(0) + x(1) i + x(2) j + x(3) k with components in K."""

    __slots__ = ("algebra", "c")

    def __init__(self, algebra: QuatAlgebra, comps: Sequence[NfElement]):
        if len(comps) != 4:
            raise ValidationError("quaternion needs 4 components")
        self.algebra = algebra
        self.c = tuple(comps)

    def _coerce(self, other) -> "QuatElement":
        if isinstance(other, QuatElement):
            return other
        if isinstance(other, NfElement):
            return self.algebra.element(other)
        if isinstance(other, (int, Fraction)):
            return self.algebra.element(other)
        raise TypeError("cannot coerce %r" % (other,))

    def __add__(self, other):
        o = self._coerce(other)
        return QuatElement(self.algebra, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return QuatElement(self.algebra, [a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return QuatElement(self.algebra, [-a for a in self.c])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, NfElement)):
            return QuatElement(self.algebra, [a * other for a in self.c])
        o = self._coerce(other)
        al, be = self.algebra.alpha, self.algebra.beta
        x0, x1, x2, x3 = self.c
        y0, y1, y2, y3 = o.c
        return QuatElement(
            self.algebra,
            [
                x0 * y0 + al * (x1 * y1) + be * (x2 * y2) - al * be * (x3 * y3),
                x0 * y1 + x1 * y0 - be * (x2 * y3) + be * (x3 * y2),
                x0 * y2 + x2 * y0 + al * (x1 * y3) - al * (x3 * y1),
                x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
            ],
        )

    def __rmul__(self, other):
        # scalars are central; quaternion-quaternion handled by __mul__
        if isinstance(other, (int, Fraction, NfElement)):
            return self * other
        return self._coerce(other) * self

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, NfElement)):
            return QuatElement(self.algebra, [a / other for a in self.c])
        return self * self._coerce(other).inv()

    def conj(self) -> "QuatElement":
        return QuatElement(self.algebra, [self.c[0], -self.c[1], -self.c[2], -self.c[3]])

    def trace(self) -> NfElement:
        return self.c[0] * 2

    def nrm(self) -> NfElement:
        al, be = self.algebra.alpha, self.algebra.beta
        x0, x1, x2, x3 = self.c
        return x0 * x0 - al * (x1 * x1) - be * (x2 * x2) + al * be * (x3 * x3)

    def inv(self) -> "QuatElement":
        n = self.nrm()
        if n.is_zero():
            raise ZeroDivisionError("inverse of zero quaternion")
        return QuatElement(self.algebra, [x / n for x in self.conj().c])

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, NfElement)):
            other = self._coerce(other)
        if isinstance(other, QuatElement):
            return all((a - b).is_zero() for a, b in zip(self.c, other.c))
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.c))

    def __repr__(self):
        return "QuatElement(%r)" % (list(self.c),)


# ---------------------------------------------------------------------------
# archimedean absolute values and the s/t constants


def arch_abs_sq(x: QuatElement, channel: int) -> Real:
    """|x|_{v_n}^2 = N^{(n)}(x), exact channel value."""
    return x.algebra.field.channel_values(x.nrm())[channel]


def arch_abs(x: QuatElement, channel: int) -> Real:
    return sqrt_real(arch_abs_sq(x, channel))


def s_t_constants(algebra: QuatAlgebra):
    """(s, t, per-channel s_v^2 list, per-channel t_v^2 list).

    s and t are Rooted square roots of exact channel products.
    """
    field = algebra.field
    a_ch = field.channel_values(algebra.alpha)
    b_ch = field.channel_values(algebra.beta)
    s_sq_list, t_sq_list = [], []
    for av, bv in zip(a_ch, b_ch):
        aa, bb = abs_real(av), abs_real(bv)
        ab = abs_real(av * bv)
        s_sq_list.append(max_real(1, aa, bb, ab))
        t_sq_list.append(min_real(1, aa, bb, ab))
    s_sq = s_sq_list[0]
    t_sq = t_sq_list[0]
    for v in s_sq_list[1:]:
        s_sq = s_sq * v
    for v in t_sq_list[1:]:
        t_sq = t_sq * v
    return Rooted(s_sq, 2), Rooted(t_sq, 2), s_sq_list, t_sq_list


# ---------------------------------------------------------------------------
# split representation over E = K(sqrt(alpha))


class EElem:
    """u + v*sqrt(alpha) with u, v in K; multiplication twisted by alpha."""

    __slots__ = ("algebra", "u", "v")

    def __init__(self, algebra: QuatAlgebra, u: NfElement, v: NfElement):
        self.algebra = algebra
        self.u = u
        self.v = v

    def _coerce(self, other) -> "EElem":
        if isinstance(other, EElem):
            return other
        if isinstance(other, NfElement):
            return EElem(self.algebra, other, self.algebra.field.zero())
        if isinstance(other, (int, Fraction)):
            return EElem(
                self.algebra,
                self.algebra.field.rational(other),
                self.algebra.field.zero(),
            )
        raise TypeError("cannot coerce %r" % (other,))

    def __add__(self, other):
        o = self._coerce(other)
        return EElem(self.algebra, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return EElem(self.algebra, self.u - o.u, self.v - o.v)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return EElem(self.algebra, -self.u, -self.v)

    def __mul__(self, other):
        o = self._coerce(other)
        al = self.algebra.alpha
        return EElem(
            self.algebra,
            self.u * o.u + al * (self.v * o.v),
            self.u * o.v + self.v * o.u,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        den = o.u * o.u - self.algebra.alpha * (o.v * o.v)
        if den.is_zero():
            raise ZeroDivisionError("division by zero in E")
        inv = EElem(self.algebra, o.u / den, -o.v / den)
        return self * inv

    def conj(self) -> "EElem":
        return EElem(self.algebra, self.u, -self.v)

    def is_zero(self) -> bool:
        return self.u.is_zero() and self.v.is_zero()

    def abs_sq_channel(self, channel: int) -> Real:
        """|u + v sqrt(alpha)|^2 at channel n: u^2 - alpha v^2 (alpha < 0)."""
        field = self.algebra.field
        val = self.u * self.u - self.algebra.alpha * (self.v * self.v)
        return field.channel_values(val)[channel]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, NfElement, EElem)):
            o = self._coerce(other)
            return (self.u - o.u).is_zero() and (self.v - o.v).is_zero()
        return NotImplemented

    def __repr__(self):
        return "EElem(%r + %r*sqrt(a))" % (list(self.u.coeffs), list(self.v.coeffs))


def split_rho(x: QuatElement) -> List[List[EElem]]:
    """2x2 matrix over E = K(sqrt(alpha)) representing x."""
    alg = x.algebra
    zero = alg.field.zero()
    x0, x1, x2, x3 = x.c
    be = alg.beta
    return [
        [EElem(alg, x0, x1), EElem(alg, x2, x3)],
        [EElem(alg, be * x2, -(be * x3)), EElem(alg, x0, -x1)],
    ]


def split_rho_matrix(rows: Sequence[Sequence[QuatElement]]) -> List[List[EElem]]:
    """Blockwise extension of the splitting map to matrices over D."""
    out: List[List[EElem]] = []
    for row in rows:
        blocks = [split_rho(x) for x in row]
        out.append([b[0][t] for b in blocks for t in range(2)])
        out.append([b[1][t] for b in blocks for t in range(2)])
    return out


# ---------------------------------------------------------------------------
# bracket coordinates


def bracket(xs: Sequence[QuatElement]) -> List[NfElement]:
    out: List[NfElement] = []
    for x in xs:
        out.extend(x.c)
    return out


def bracket_inv(algebra: QuatAlgebra, coords: Sequence[NfElement]) -> List[QuatElement]:
    if len(coords) % 4 != 0:
        raise ValidationError("coordinate vector length must be a multiple of 4")
    return [
        algebra.from_bracket(coords[4 * i : 4 * i + 4]) for i in range(len(coords) // 4)
    ]


# ---------------------------------------------------------------------------
# orders


class QuatOrder:
    """Order in D given by a Z-basis of 4d elements."""

    def __init__(
        self,
        algebra: QuatAlgebra,
        z_basis: Sequence[QuatElement],
        ok_basis: Optional[Sequence[QuatElement]] = None,
        is_special: bool = False,
    ):
        self.algebra = algebra
        field = algebra.field
        d = field.degree
        basis = list(z_basis)
        if len(basis) != 4 * d:
            raise ValidationError("order Z-basis must have 4d elements")
        self.z_basis = basis
        self.ok_basis = list(ok_basis) if ok_basis is not None else None
        self.is_special = is_special
        self._coords = [self._flatten(x) for x in basis]
        if linalg.det(self._coords) == 0:
            raise ValidationError("order Z-basis is rank deficient")
        self._coords_inv = linalg.inverse(self._coords)
        if not self.contains(algebra.one()):
            raise ValidationError("order does not contain 1")
        for a in basis:
            for b in basis:
                if not self.contains(a * b):
                    raise ValidationError("order Z-basis is not closed under products")

    def _flatten(self, x: QuatElement) -> List[Fraction]:
        flat: List[Fraction] = []
        for comp in x.c:
            flat.extend(comp.coeffs)
        return flat

    def contains(self, x: QuatElement) -> bool:
        return lattice_contains(self._coords, self._flatten(x))

    def coords_of(self, x: QuatElement) -> List[Fraction]:
        """Coordinates of x in the order's Z-basis (rational in general)."""
        return linalg.mat_vec(linalg.transpose(self._coords_inv), self._flatten(x))

    def denominator(self, x: QuatElement) -> int:
        return math.lcm(*[c.denominator for c in self.coords_of(x)])

    @classmethod
    def special(cls, algebra: QuatAlgebra) -> "QuatOrder":
        """O_K + O_K i + O_K j + O_K k."""
        field = algebra.field
        units = [algebra.one(), algebra.i(), algebra.j(), algebra.k()]
        z_basis = [q * w for q in units for w in field.basis_elements()]
        return cls(algebra, z_basis, ok_basis=units, is_special=True)

    def discriminant_norm(self) -> Fraction:
        """N(Delta_O): norm of the discriminant ideal of the order."""
        field = self.algebra.field
        if self.ok_basis is not None:
            gram = [
                [(a * b).trace() for b in self.ok_basis] for a in self.ok_basis
            ]
            det = linalg.det(gram)
            return abs(det.norm())
        if field.degree == 1:
            gram = [
                [(a * b).trace().as_fraction() for b in self.z_basis]
                for a in self.z_basis
            ]
            return abs(linalg.det(gram))
        raise ValidationError(
            "discriminant requires a free O_K-basis for degree > 1 fields"
        )

    def __repr__(self):
        return "QuatOrder(4d=%d, special=%r)" % (len(self.z_basis), self.is_special)


def order_constants(order: QuatOrder):
    """(N(Delta_O), M(O)) with M(O) = max{N(Delta)^{1/2}/N(4ab), N(4ab)/N(Delta)^{1/2}}."""
    alg = order.algebra
    nd = order.discriminant_norm()
    n4ab = abs((alg.alpha * alg.beta * 4).norm())
    m_sq = max(nd / n4ab**2, Fraction(n4ab**2) / nd)
    return nd, Rooted(m_sq, 2)


# ---------------------------------------------------------------------------
# heights on D^N


def height_Hinf(xs: Sequence[QuatElement]) -> Rooted:
    """Homogeneous archimedean height, exact in 2d-th power form."""
    alg = xs[0].algebra
    field = alg.field
    d = field.degree
    acc = None
    for n in range(d):
        ch = max_real(*[arch_abs_sq(x, n) for x in xs])
        acc = ch if acc is None else acc * ch
    return Rooted(acc, 2 * d)


def height_hinf(xs: Sequence[QuatElement]) -> Rooted:
    alg = xs[0].algebra
    return height_Hinf([alg.one()] + list(xs))


def height_HfinO(order: QuatOrder, xs: Sequence[QuatElement]) -> Fraction:
    """Exact 4d-th power of the finite height: 1 / [O : O x_1 + ... + O x_N]."""
    for x in xs:
        if not order.contains(x):
            raise ValidationError("coordinate outside the order")
    if all(x.is_zero() for x in xs):
        raise ValidationError("finite height of the zero vector")
    gens = []
    for x in xs:
        for w in order.z_basis:
            gens.append([int(c) for c in order.coords_of(w * x)])
    idx = lattice_index(gens, len(order.z_basis))
    if idx is None:
        raise ValidationError("left module has infinite index in the order")
    return Fraction(1, idx)


def clear_order_denominators(order: QuatOrder, xs: Sequence[QuatElement]) -> Tuple[int, List[QuatElement]]:
    m = math.lcm(*[order.denominator(x) for x in xs])
    return m, [x * m for x in xs]


def height_HO(order: QuatOrder, xs: Sequence[QuatElement]) -> Rooted:
    """Global homogeneous height H^O in 4d-th power form."""
    if all(x.is_zero() for x in xs):
        raise ValidationError("height of the zero vector")
    _, ys = clear_order_denominators(order, xs)
    d = order.algebra.field.degree
    fin = height_HfinO(order, ys)
    arch = None  # prod over channels of max_l N^{(n)}(y_l), the 2d-th power
    for n in range(d):
        ch = max_real(*[arch_abs_sq(y, n) for y in ys])
        arch = ch if arch is None else arch * ch
    return Rooted(arch * arch * fin, 4 * d)


def height_h(xs: Sequence[QuatElement]) -> Rooted:
    """Inhomogeneous height on D^N: h = h_inf (finite factor 1)."""
    return height_hinf(xs)


def height_h_order(order: QuatOrder, xs: Sequence[QuatElement]) -> Rooted:
    """Inhomogeneous height on all of D^N, finite part included.

    In 4d-th power form: h^{4d} = h_inf^{4d} * N(m)^4 / [O : Om + sum O(m x_l)]
    for any integer m clearing the denominators; the value is independent of
    the choice of m.  For x with coordinates in the order this reduces to
    h_inf(x).
    """
    alg = xs[0].algebra
    d = alg.field.degree
    m, ys = clear_order_denominators(order, xs)
    fin = height_HfinO(order, [alg.element(m)] + ys) * Fraction(m) ** (4 * d)
    inf = height_hinf(xs)  # value h_inf
    return inf * Rooted(fin, 4 * d)


# ---------------------------------------------------------------------------
# right D-subspaces


def _e_det(rows: List[List[EElem]]) -> EElem:
    return linalg.det(rows)


def d_right_kernel(rows: Sequence[Sequence[QuatElement]]) -> List[List[QuatElement]]:
    """Basis of {y : A y = 0} with unknowns multiplied from the right.

    Row operations multiply from the left, which is compatible with
    right-sided unknowns over the division ring.
    """
    a = [list(r) for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    alg = a[0][0].algebra
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if not a[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][c].inv()
        a[r] = [inv * x for x in a[r]]
        for i in range(nrows):
            if i != r and not a[i][c].is_zero():
                q = a[i][c]
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        v = [alg.zero() for _ in range(ncols)]
        v[fc] = alg.one()
        for rr, pc in enumerate(pivots):
            v[pc] = -a[rr][fc]
        out.append(v)
    return out


class DSubspace:
    """Right D-subspace of D^N with a basis matrix and/or constraint matrix."""

    def __init__(
        self,
        algebra: QuatAlgebra,
        ambient: int,
        basis_cols: Optional[Sequence[Sequence[QuatElement]]] = None,
        constraint_rows: Optional[Sequence[Sequence[QuatElement]]] = None,
    ):
        if basis_cols is None and constraint_rows is None:
            raise ValidationError("subspace needs a basis or a constraint matrix")
        self.algebra = algebra
        self.ambient = ambient
        self._basis = [list(c) for c in basis_cols] if basis_cols else None
        self._constraint = (
            [list(r) for r in constraint_rows] if constraint_rows else None
        )
        if self._basis is not None:
            self.dim = len(self._basis)
        else:
            self.dim = ambient - len(self._constraint)
        if self._basis is not None and self._constraint is not None:
            for row in self._constraint:
                for col in self._basis:
                    acc = None
                    for ri, ci in zip(row, col):
                        term = ri * ci
                        acc = term if acc is None else acc + term
                    if not acc.is_zero():
                        raise ValidationError("constraint does not annihilate basis")

    def basis_cols(self) -> List[List[QuatElement]]:
        if self._basis is None:
            # solve C x = 0
            self._basis = d_right_kernel(self._constraint)
            if len(self._basis) != self.dim:
                raise ValidationError("constraint matrix rank is inconsistent")
        return self._basis

    def constraint_rows(self) -> List[List[QuatElement]]:
        if self._constraint is None:
            # rows are conjugates of a basis of the orthogonal complement
            perp = self.perp_basis()
            self._constraint = [[y.conj() for y in col] for col in perp]
            if len(self._constraint) != self.ambient - self.dim:
                raise ValidationError("basis matrix rank is inconsistent")
        return self._constraint

    def perp_basis(self) -> List[List[QuatElement]]:
        """Basis of Z-perp = {y : x* y = 0 for all x in Z}."""
        cols = self.basis_cols()
        star_rows = [[x.conj() for x in col] for col in cols]  # X*, L x N
        return d_right_kernel(star_rows)

    def perp(self) -> "DSubspace":
        return DSubspace(self.algebra, self.ambient, basis_cols=self.perp_basis())


def _matrix_scaled_integral(order: QuatOrder, rows):
    m = 1
    for row in rows:
        for x in row:
            m = math.lcm(m, order.denominator(x))
    return [[x * m for x in row] for row in rows]


def _image_index(order: QuatOrder, rows: Sequence[Sequence[QuatElement]]) -> int:
    """[O^M : A(O^N)] for an integral M x N matrix A over the order."""
    big_m = len(rows)
    n = len(rows[0])
    dim = len(order.z_basis)
    gens = []
    for jcol in range(n):
        for w in order.z_basis:
            flat: List[int] = []
            for i in range(big_m):
                flat.extend(int(c) for c in order.coords_of(rows[i][jcol] * w))
            gens.append(flat)
    idx = lattice_index(gens, big_m * dim)
    if idx is None:
        raise ValidationError("matrix map is rank deficient")
    return idx


def _hermitian_square_det_channels(rows: Sequence[Sequence[QuatElement]]):
    """Channel values of det rho(A A*) for an M x N matrix A over D.

    The determinant lies in K; returns the list of exact channel values.
    """
    alg = rows[0][0].algebra
    field = alg.field
    big_m = len(rows)
    n = len(rows[0])
    prod = [
        [
            _sum_quat([rows[i][t] * rows[j][t].conj() for t in range(n)], alg)
            for j in range(big_m)
        ]
        for i in range(big_m)
    ]
    e_mat = split_rho_matrix(prod)
    det = _e_det(e_mat)
    if not det.v.is_zero():
        raise ValidationError("hermitian square determinant escaped K")
    return field.channel_values(det.u)


def _sum_quat(xs, alg):
    acc = None
    for x in xs:
        acc = x if acc is None else acc + x
    return acc if acc is not None else alg.zero()


def subspace_height_HO(z: DSubspace, order: QuatOrder) -> Rooted:
    """H^O(Z) in 4d-th power form, via the constraint matrix when proper.

    For L = N the basis form is used (the constraint matrix is empty).
    """
    d = order.algebra.field.degree
    if z.dim < z.ambient:
        rows = _matrix_scaled_integral(order, z.constraint_rows())
        fin = Fraction(1, _image_index(order, rows))
        channels = _hermitian_square_det_channels(rows)
    else:
        return subspace_height_HO_basis(z, order)
    arch = None
    for ch in channels:
        a = abs_real(ch)
        arch = a if arch is None else arch * a
    return Rooted(arch * fin, 4 * d)


def subspace_height_HO_basis(z: DSubspace, order: QuatOrder) -> Rooted:
    """H^O(X) from a basis matrix X: ([O^L : X^t(O^N)]^{-1} prod |det rho(X*X)|)^{1/4d}."""
    d = order.algebra.field.degree
    cols = z.basis_cols()
    xt_rows = [list(col) for col in cols]  # X^t is L x N
    xt_rows = _matrix_scaled_integral(order, xt_rows)
    fin = Fraction(1, _image_index(order, xt_rows))
    # X*X = (X^t conj) (X^t)^t: rows of X^t are the basis vectors
    star_rows = [[x.conj() for x in col] for col in xt_rows]
    channels = _hermitian_square_det_channels(star_rows)
    arch = None
    for ch in channels:
        a = abs_real(ch)
        arch = a if arch is None else arch * a
    return Rooted(arch * fin, 4 * d)


def hinf_constraint_minors(z: DSubspace) -> Rooted:
    """H_inf(C) by the Cauchy-Binet style minor sum, in 2d-th power form."""
    rows = z.constraint_rows()
    alg = z.algebra
    field = alg.field
    d = field.degree
    big_m = len(rows)
    n = len(rows[0])
    channel_sums = [None] * d
    for cols in itertools.combinations(range(n), big_m):
        sub = [[rows[i][c] for c in cols] for i in range(big_m)]
        det = _e_det(split_rho_matrix(sub))
        # the split determinant of a square quaternionic matrix lies in K
        # and is nonnegative at every channel
        if not det.v.is_zero():
            raise ValidationError("split minor determinant escaped K")
        vals = field.channel_values(det.u)
        for t in range(d):
            channel_sums[t] = (
                vals[t] if channel_sums[t] is None else channel_sums[t] + vals[t]
            )
    acc = None
    for v in channel_sums:
        acc = v if acc is None else acc * v
    return Rooted(acc, 2 * d)


def hinf_constraint_gram(z: DSubspace) -> Rooted:
    """H_inf(C) via det rho(CC*), in 4d-th power form."""
    rows = z.constraint_rows()
    channels = _hermitian_square_det_channels(rows)
    arch = None
    for ch in channels:
        a = abs_real(ch)
        arch = a if arch is None else arch * a
    return Rooted(arch, 4 * z.algebra.field.degree)


# ---------------------------------------------------------------------------
# hermitian forms and the trace form


def validate_hermitian(f: Sequence[Sequence[QuatElement]]):
    n = len(f)
    for row in f:
        if len(row) != n:
            raise ValidationError("form matrix must be square")
    for m in range(n):
        for l in range(n):
            if not (f[m][l] - f[l][m].conj()).is_zero():
                raise ValidationError("form matrix is not hermitian")


def trace_form_block(f: QuatElement) -> List[List[NfElement]]:
    alg = f.algebra
    al, be = alg.alpha, alg.beta
    ab = al * be
    f0, f1, f2, f3 = f.c
    two = 2
    return [
        [f0 * two, al * f1 * two, be * f2 * two, -(ab * f3) * two],
        [-(al * f1) * two, -(al * f0) * two, -(ab * f3) * two, ab * f2 * two],
        [-(be * f2) * two, ab * f3 * two, -(be * f0) * two, -(ab * f1) * two],
        [ab * f3 * two, -(ab * f2) * two, ab * f1 * two, ab * f0 * two],
    ]


def trace_form(f: Sequence[Sequence[QuatElement]]) -> List[List[NfElement]]:
    """4N x 4N symmetric matrix B over K with Q([x]) = 2 F(x)."""
    validate_hermitian(f)
    n = len(f)
    blocks = [[trace_form_block(f[m][l]) for l in range(n)] for m in range(n)]
    out = []
    for m in range(n):
        for r in range(4):
            row: List[NfElement] = []
            for l in range(n):
                row.extend(blocks[m][l][r])
            out.append(row)
    return out


def eval_hermitian(f: Sequence[Sequence[QuatElement]], xs: Sequence[QuatElement]) -> NfElement:
    """F(x) = x^t F x with the hermitian convention; lands in K."""
    alg = xs[0].algebra
    n = len(f)
    acc = None
    for m in range(n):
        for l in range(n):
            term = xs[m].conj() * f[m][l] * xs[l]
            acc = term if acc is None else acc + term
    if not (acc.c[1].is_zero() and acc.c[2].is_zero() and acc.c[3].is_zero()):
        raise ValidationError("hermitian evaluation escaped K")
    return acc.c[0]


def eval_quadratic(b: Sequence[Sequence[NfElement]], z: Sequence[NfElement]) -> NfElement:
    acc = None
    for i, row in enumerate(b):
        for j, e in enumerate(row):
            term = z[i] * e * z[j]
            acc = term if acc is None else acc + term
    return acc


# ---------------------------------------------------------------------------
# Z cap O^N as an O_K-module; c_O and z_O


def intersection_module(z: DSubspace, order: QuatOrder) -> OkModule:
    """[Z cap O^N] as an O_K-module in K^{4N}."""
    alg = z.algebra
    field = alg.field
    d = field.degree
    n = z.ambient
    # lattice generators: bracket coordinates of {w e_m} for w in the Z-basis
    lat_vecs = []
    for m in range(n):
        for w in order.z_basis:
            vec = [alg.zero()] * n
            vec[m] = w
            lat_vecs.append(bracket(vec))
    lat_coords = [_flatten_k_vec(v) for v in lat_vecs]
    # Q-basis of [Z]: x_col * theta^s * q for q in {1,i,j,k}
    span_vecs = []
    units = [alg.one(), alg.i(), alg.j(), alg.k()]
    theta_pows = [field.one()]
    for _ in range(d - 1):
        theta_pows.append(theta_pows[-1] * field.gen())
    for col in z.basis_cols():
        for t in theta_pows:
            for q in units:
                scaled = [(x * t) * q for x in col]
                span_vecs.append(bracket(scaled))
    span_coords = [_flatten_k_vec(v) for v in span_vecs]
    # linear forms vanishing on the span
    forms = linalg.kernel_basis(span_coords)
    if forms:
        # integer kernel of (forms . lat_coords^T) z = 0
        cond = [
            [
                sum(
                    (f[t] * lat_coords[g][t] for t in range(1, len(f))),
                    f[0] * lat_coords[g][0],
                )
                for g in range(len(lat_coords))
            ]
            for f in forms
        ]
        from .intmat import IntMat, kernel, rational_to_scaled

        ints, _ = rational_to_scaled(cond)
        ker = kernel(IntMat.from_rows(ints))
    else:
        ker = [
            [1 if t == g else 0 for t in range(len(lat_coords))]
            for g in range(len(lat_coords))
        ]
    gens = []
    for m in ker:
        acc = None
        for c, v in zip(m, lat_vecs):
            if c:
                term = [vi * c for vi in v]
                acc = term if acc is None else [a + b for a, b in zip(acc, term)]
        if acc is not None:
            gens.append(acc)
    return OkModule.from_z_generators(field, 4 * n, gens)


def _flatten_k_vec(v: Sequence[NfElement]) -> List[Fraction]:
    flat: List[Fraction] = []
    for e in v:
        flat.extend(e.coeffs)
    return flat


def minima_cz_order(z: DSubspace, order: QuatOrder):
    """(c_O(Z), witness, z_O(Z), witness) via the intersection module."""
    module = intersection_module(z, order)
    return minima_ck_zk(module)
