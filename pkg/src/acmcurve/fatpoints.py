"""Plane curves with assigned multiplicities at points of P^2 over F_p."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from .arith import FieldSampler, Matrix, PrimeField, kernel_array, rank_mod_p, row_space_basis
from .errors import CharacteristicError, EmptySystemError, GenericityError, NonIsolatedSingularityError
from .groebner import Ideal, buchberger
from .hilbert import hilbert_polynomial, hilbert_series_gb
from .poly import Exponents, Polynomial, Ring, graded_basis_tuples, poly_from_vector


@dataclass(frozen=True)
class PointP2:
    """Projective point; the first nonzero coordinate is 1."""

    coords: tuple[int, int, int]

    @classmethod
    def from_coords(cls, coords: Sequence[int], field: PrimeField) -> "PointP2":
        p = field.p
        c = [int(x) % p for x in coords]
        if len(c) != 3 or not any(c):
            raise ValueError("a point of P^2 needs three coordinates, not all zero")
        lead = next(x for x in c if x)
        inv = field.inv(lead)
        return cls(tuple(x * inv % p for x in c))

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.coords)


@dataclass(frozen=True)
class FatPoint:
    point: PointP2
    multiplicity: int

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be at least 1")

    @property
    def conditions(self) -> int:
        return comb(self.multiplicity + 1, 2)


@dataclass(frozen=True)
class LinearSystem:
    """Degree-n forms vanishing to the assigned orders at the points."""

    ring: Ring
    degree: int
    conditions: tuple[FatPoint, ...]
    basis: tuple[Polynomial, ...]
    expected_dimension: int

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def is_expected(self) -> bool:
        return self.dimension == self.expected_dimension


def plane_ring(field: PrimeField) -> Ring:
    return Ring(3, field)


def _derivative_orders(k: int) -> tuple[Exponents, ...]:
    return graded_basis_tuples(k, 3)


def _falling(a: int, b: int) -> int:
    out = 1
    for t in range(b):
        out *= a - t
    return out


def condition_matrix(n: int, conditions: Sequence[FatPoint], field: PrimeField) -> Matrix:
    """Rows: the order-(m-1) partials of the degree-n monomials at each fat
    point (C(m+1,2) rows for multiplicity m). By Euler's relation these
    imply the lower-order conditions when p > n."""
    p = field.p
    if p <= n:
        raise CharacteristicError(f"prime {p} must exceed the degree {n}")
    if any(fp.multiplicity - 1 > n for fp in conditions):
        raise ValueError("multiplicity exceeds degree + 1")
    monos = graded_basis_tuples(n, 3)
    rows = []
    for fp in conditions:
        pt = fp.point.coords
        for beta in _derivative_orders(fp.multiplicity - 1):
            row = []
            for a in monos:
                if any(x < b for x, b in zip(a, beta)):
                    row.append(0)
                    continue
                c = 1
                for x, b, coord in zip(a, beta, pt):
                    c = c * _falling(x, b) % p * pow(coord, x - b, p) % p
                row.append(c)
            rows.append(row)
    if not rows:
        return Matrix.zeros(0, len(monos), field)
    return Matrix(rows, field)


def linear_system(n: int, conditions: Sequence[FatPoint], ring: Ring) -> LinearSystem:
    """Canonical basis: the RREF of the kernel, one form per row, so
    leading monomials are distinct and the basis is deterministic."""
    m = condition_matrix(n, conditions, ring.field)
    monos = graded_basis_tuples(n, 3)
    cols = len(monos)
    expected = max(cols - m.rows, 0)
    if m.rows:
        ker = kernel_array(m.to_numpy(), ring.p)
    else:
        ker = np.eye(cols, dtype=np.int64)
    ker = row_space_basis(ker, ring.p) if len(ker) else ker
    basis = tuple(poly_from_vector(ring, monos, row) for row in ker)
    return LinearSystem(ring, n, tuple(conditions), basis, expected)


def system_is_general(n: int, conditions: Sequence[FatPoint], field: PrimeField) -> bool:
    """The conditions are independent (or fill the space)."""
    m = condition_matrix(n, conditions, field)
    return rank_mod_p(m.to_numpy(), field.p) == min(m.rows, m.cols)


def random_point(rng: FieldSampler, field: PrimeField) -> PointP2:
    while True:
        c = rng.elements(3)
        if any(c):
            return PointP2.from_coords(c, field)


COORDINATE_POINTS = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def random_general_points(
    count: int,
    rng: FieldSampler,
    field: PrimeField,
    *,
    normalize: bool = True,
    systems: Sequence[tuple[int, Sequence[int]]] = (),
    budget: int = 100,
) -> tuple[list[PointP2], int]:
    """Distinct random points; the first three are the coordinate points
    when ``normalize`` is set.

    ``systems`` lists (degree, multiplicities) requests; a sample is kept
    only if every requested condition matrix has maximal rank. Returns the
    points and the number of rejected samples.
    """
    if count < 1:
        raise ValueError("count must be positive")
    for attempt in range(budget):
        fixed = [PointP2(c) for c in COORDINATE_POINTS[: min(count, 3)]] if normalize else []
        pts = list(fixed)
        seen = set(pts)
        while len(pts) < count:
            q = random_point(rng, field)
            if q not in seen:
                seen.add(q)
                pts.append(q)
        ok = True
        for degree, mults in systems:
            conds = [FatPoint(pt, m) for pt, m in zip(pts, mults)]
            if not system_is_general(degree, conds, field):
                ok = False
                break
        if ok:
            return pts, attempt
    raise GenericityError(f"no general configuration of {count} points in {budget} attempts",
                          stage="points", attempts=budget)


def random_member(system: LinearSystem, rng: FieldSampler) -> Polynomial:
    if not system.basis:
        raise EmptySystemError("linear system has no members")
    ring = system.ring
    while True:
        coeffs = rng.elements(len(system.basis))
        f = ring.zero()
        for c, b in zip(coeffs, system.basis):
            if c:
                f = f + b.scale(c)
        if not f.is_zero():
            return f


def jacobian_ideal(f: Polynomial) -> Ideal:
    ring = f.ring
    return Ideal(ring, [f] + [f.partial(i) for i in range(ring.nvars)])


def singular_scheme_degree(f: Polynomial) -> int:
    """Degree of the scheme cut out by f and its partials (0 if empty)."""
    if f.ring.nvars != 3 or not f.is_homogeneous():
        raise ValueError("expected a homogeneous form in three variables")
    gb = buchberger(jacobian_ideal(f))
    info = hilbert_polynomial(hilbert_series_gb(gb))
    if info.dimension >= 1:
        raise NonIsolatedSingularityError(f"singular locus has dimension {info.dimension}")
    return info.degree


def intersection_degree(n_image: int, n_curve: int, conditions_image: Sequence[int],
                        conditions_curve: Sequence[int]) -> int:
    """Degree of the image of a plane curve under a linear system, by
    intersection numbers on the blow-up: n*n' - sum m_i*m'_i."""
    return n_image * n_curve - sum(a * b for a, b in zip(conditions_image, conditions_curve))
