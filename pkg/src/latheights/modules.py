"""Finitely generated O_K-modules in K^N and their Minkowski lattices.

A module can be given in pseudo-basis form (pairs of a K-vector and a
fractional ideal) or by a list of Z-generators already closed under
multiplication by the integral basis.  Everything downstream consumes the
Z-basis: the embedded lattice, the module discriminant, the scaling ideal
of admissible denominators, and the two height minima taken over it.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .errors import ValidationError
from .heights import height_h
from .intmat import _row_hnf, lattice_contains, rational_to_scaled
from .lattice import RealLattice, _rat_upper, enumerate_cube, supnorm_min
from .nf import FracIdeal, NfElement, NumberField
from .reals import Real, Rooted, cmp_real

from .reals import _exact_iroot


def sigma_embed(field: NumberField, x: Sequence[NfElement]) -> List[Real]:
    """Channel-major real embedding of a K-vector: d blocks of length N."""
    per_elem = [field.channel_values(xi) for xi in x]
    out: List[Real] = []
    for ch in range(field.degree):
        for vals in per_elem:
            out.append(vals[ch])
    return out


def _flatten_power_coords(field: NumberField, x: Sequence[NfElement]) -> List[Fraction]:
    flat: List[Fraction] = []
    for xi in x:
        flat.extend(xi.coeffs)
    return flat


class OkModule:
    """O_K-module in K^N held by a Z-basis of L*d vectors."""

    def __init__(
        self,
        field: NumberField,
        ambient: int,
        z_basis: Sequence[Sequence[NfElement]],
        pseudo_basis: Optional[Sequence[Tuple[Sequence[NfElement], FracIdeal]]] = None,
    ):
        self.field = field
        self.ambient = ambient
        d = field.degree
        if len(z_basis) % d != 0:
            raise ValidationError("Z-basis size must be a multiple of the degree")
        self.rank = len(z_basis) // d
        self.z_basis = [list(v) for v in z_basis]
        self.pseudo_basis = list(pseudo_basis) if pseudo_basis is not None else None
        self._coords = [_flatten_power_coords(field, v) for v in self.z_basis]
        if linalg.rank(self._coords) != len(self.z_basis):
            raise ValidationError("Z-basis vectors are dependent")
        self._lattice = None
        self._scaling = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_pseudo_basis(cls, field, ambient, pairs) -> "OkModule":
        z_basis = []
        for y, ideal in pairs:
            y = list(y)
            if len(y) != ambient:
                raise ValidationError("pseudo-basis vector has wrong length")
            for gamma in ideal.z_basis:
                z_basis.append([gamma * yi for yi in y])
        return cls(field, ambient, z_basis, pseudo_basis=list(pairs))

    @classmethod
    def from_z_generators(cls, field, ambient, gens) -> "OkModule":
        """Reduce a Z-generating set (closed under O_K) to a Z-basis."""
        gens = [list(g) for g in gens]
        coords = [_flatten_power_coords(field, g) for g in gens]
        ints, den = rational_to_scaled(coords)
        rows_h, _, pivots = _row_hnf(ints, ambient * field.degree)
        basis_coords = [
            [Fraction(x, den) for x in rows_h[i]] for i in range(len(pivots))
        ]
        z_basis = [
            [
                field.element(vc[i * field.degree : (i + 1) * field.degree])
                for i in range(ambient)
            ]
            for vc in basis_coords
        ]
        mod = cls(field, ambient, z_basis)
        # closure under the integral basis must hold for a genuine module
        for w in field.basis_elements():
            for v in mod.z_basis:
                if not mod.contains([w * vi for vi in v]):
                    raise ValidationError(
                        "generators are not closed under O_K multiplication"
                    )
        return mod

    @classmethod
    def free_module(cls, field, ambient) -> "OkModule":
        """O_K^N."""
        pairs = []
        unit = FracIdeal.unit(field)
        for i in range(ambient):
            e = [field.zero()] * ambient
            e[i] = field.one()
            pairs.append((e, unit))
        return cls.from_pseudo_basis(field, ambient, pairs)

    # -- membership -------------------------------------------------------

    def contains(self, x: Sequence[NfElement]) -> bool:
        return lattice_contains(self._coords, _flatten_power_coords(self.field, x))

    # -- embedded lattice and discriminant --------------------------------

    def module_lattice(self) -> RealLattice:
        if self._lattice is None:
            cols = [sigma_embed(self.field, v) for v in self.z_basis]
            self._lattice = RealLattice(cols)
        return self._lattice

    def module_discriminant(self) -> Fraction:
        """D_K^L times the squared ideal norms (exact rational)."""
        field = self.field
        big_l = self.rank
        if self.pseudo_basis is not None:
            disc = Fraction(field.discriminant) ** big_l
            for _, ideal in self.pseudo_basis:
                disc *= ideal.norm() ** 2
            return disc
        # derive |D_K(M)| from the embedded determinant:
        # det = 2^{-L r2} |D|^{L/2}  =>  |D| = (2^{L r2} det)^{2/L}
        r2 = field.signature[1]
        gram = self.module_lattice().gram()
        gdet = linalg.det(gram)  # = det^2, exact when channels are exact
        from .reals import QuadReal

        if not (isinstance(gdet, QuadReal) and gdet.is_rational):
            raise ValidationError(
                "module discriminant requires exact channels or a pseudo-basis"
            )
        val = Fraction(4) ** (big_l * r2) * gdet.as_fraction()  # |D|^L
        num = _exact_iroot(val.numerator, big_l)
        den = _exact_iroot(val.denominator, big_l)
        if num is None or den is None:
            raise ValidationError("embedded determinant is not an L-th power")
        mag = Fraction(num, den)
        sign = -1 if (field.discriminant < 0 and big_l % 2 == 1) else 1
        return sign * mag

    # -- scaling ideal and height minima ----------------------------------

    def scaling_ideal(self) -> FracIdeal:
        """All alpha in K with alpha * M inside O_K^N."""
        if self._scaling is None:
            field = self.field
            ideal = None
            for v in self.z_basis:
                for xi in v:
                    if xi.is_zero():
                        continue
                    factor = FracIdeal.principal(field, xi.inv())
                    ideal = factor if ideal is None else ideal.intersect(factor)
            if ideal is None:
                raise ValidationError("zero module has no scaling ideal")
            self._scaling = ideal
        return self._scaling


def _ideal_lattice(field: NumberField, ideal: FracIdeal) -> RealLattice:
    return RealLattice([sigma_embed(field, [g]) for g in ideal.z_basis])


def _elem_from_coeffs(ideal: FracIdeal, m: Sequence[int]) -> NfElement:
    acc = None
    for c, g in zip(m, ideal.z_basis):
        if c:
            term = g * c
            acc = term if acc is None else acc + term
    return acc


def minima_ck_zk(module: OkModule):
    """Certified minima over the scaling ideal.

    Returns (c, alpha_c, z, alpha_z) where c = min h(alpha) and
    z = min h(alpha) h(1/alpha), both as Rooted values with witnesses.
    Termination certificate: h(alpha)^d bounds the sup-norm of the embedded
    alpha, so a cube of radius (current best)^d contains every candidate
    that could still improve the minimum.
    """
    field = module.field
    d = field.degree
    ideal = module.scaling_ideal()
    lat = _ideal_lattice(field, ideal)
    _, m0 = supnorm_min(lat)
    alpha0 = _elem_from_coeffs(ideal, m0)

    def h_pow(a: NfElement):
        return height_h(field, [a]).value_pow()

    def z_pow(a: NfElement):
        return h_pow(a) * h_pow(a.inv())

    best_c_pow, best_c = h_pow(alpha0), alpha0
    best_z_pow, best_z = z_pow(alpha0), alpha0

    radius = max(_rat_upper(best_c_pow), _rat_upper(best_z_pow))
    for m in enumerate_cube(lat, radius):
        if all(x == 0 for x in m):
            continue
        a = _elem_from_coeffs(ideal, m)
        hp = h_pow(a)
        if cmp_real(hp, best_c_pow, context="c_K search") < 0:
            best_c_pow, best_c = hp, a
        if cmp_real(hp, best_z_pow, context="z_K prefilter") <= 0:
            zp = z_pow(a)
            if cmp_real(zp, best_z_pow, context="z_K search") < 0:
                best_z_pow, best_z = zp, a
    return (
        Rooted(best_c_pow, d),
        best_c,
        Rooted(best_z_pow, d),
        best_z,
    )
