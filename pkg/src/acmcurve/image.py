"""Ideals of images of rational maps, generator degrees and the quadric
subscheme."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .arith import _matmul_mod, kernel_array, rank_mod_p, row_space_basis
from .errors import DimensionError, FeasibilityError
from .groebner import GroebnerBasis, Ideal, buchberger, eliminate, normal_form
from .hilbert import (
    HilbertPolynomialInfo,
    HilbertSeries,
    degree_slice_matrix,
    hilbert_polynomial,
    hilbert_series_gb,
    series_to_function,
)
from .poly import Exponents, Polynomial, Ring, graded_basis_tuples, poly_from_vector

# Largest substitution matrix (source x target entries) built densely.
MAX_SUBSTITUTION_ENTRIES = 5_000_000


@dataclass(frozen=True)
class ProjectiveMap:
    """Map given by forms of one degree on the source, modulo optional
    homogeneous relations (e.g. a plane curve's equation)."""

    forms: tuple[Polynomial, ...]
    relations: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        if not self.forms:
            raise ValueError("a map needs at least one form")
        ring = self.forms[0].ring
        degs = {f.degree() for f in self.forms}
        if len(degs) != 1 or not all(f.is_homogeneous() for f in self.forms):
            raise ValueError("forms must be homogeneous of a common degree")
        if any(f.ring != ring for f in self.forms + self.relations):
            raise DimensionError("forms and relations must share a ring")
        if not all(r.is_homogeneous() for r in self.relations):
            raise ValueError("relations must be homogeneous")

    @property
    def source(self) -> Ring:
        return self.forms[0].ring

    @property
    def degree(self) -> int:
        return self.forms[0].degree()

    @property
    def target(self) -> Ring:
        n = len(self.forms)
        return Ring(n, self.source.field, tuple(f"y{i}" for i in range(n)))

    def rank(self) -> int:
        """Dimension of the span of the forms."""
        arr, _ = degree_slice_matrix(list(self.forms), self.degree)
        return rank_mod_p(arr, self.source.p)


@dataclass
class GeneratorProfile:
    counts: dict[int, int]
    generators: dict[int, list[Polynomial]] = field(default_factory=dict)
    certified: bool | None = None

    def as_dict(self) -> dict:
        return {str(k): v for k, v in sorted(self.counts.items())}


@dataclass(frozen=True)
class SchemeInvariants:
    dimension: int
    degree: int
    genus: int | None

    def as_tuple(self) -> tuple:
        return (self.dimension, self.degree, self.genus)


# ---------------------------------------------------------------------------
# truncated kernels


def _relations_slice(relations: Sequence[Polynomial], n: int, p: int) -> np.ndarray | None:
    rel = [r for r in relations if r.degree() <= n]
    if not rel:
        return None
    arr, _ = degree_slice_matrix(rel, n)
    return row_space_basis(arr, p)


def substitution_matrix(phi: ProjectiveMap, k: int) -> tuple[np.ndarray, tuple[Exponents, ...]]:
    """Rows: y^a(f) for each degree-k target monomial, reduced modulo the
    relations' degree-(e*k) slice; columns: source monomials of degree e*k."""
    src, tgt = phi.source, phi.target
    p = src.p
    ymonos = graded_basis_tuples(k, tgt.nvars)
    xmonos = graded_basis_tuples(phi.degree * k, src.nvars)
    if len(ymonos) * len(xmonos) > MAX_SUBSTITUTION_ENTRIES:
        raise FeasibilityError(f"substitution matrix {len(ymonos)}x{len(xmonos)} over budget")
    index = {m: j for j, m in enumerate(xmonos)}
    cache: dict[Exponents, Polynomial] = {(0,) * tgt.nvars: src.one()}

    def product(a: Exponents) -> Polynomial:
        if a not in cache:
            i = next(i for i, e in enumerate(a) if e)
            prev = list(a)
            prev[i] -= 1
            cache[a] = product(tuple(prev)) * phi.forms[i]
        return cache[a]

    rows = np.zeros((len(ymonos), len(xmonos)), dtype=np.int64)
    for r, a in enumerate(ymonos):
        for e, c in product(a).items():
            rows[r, index[e]] = c
    rel = _relations_slice(phi.relations, phi.degree * k, p)
    if rel is not None and len(rel):
        pivots = [int(np.flatnonzero(row)[0]) for row in rel]
        rows = (rows - _matmul_mod(rows[:, pivots], rel, p)) % p
    return rows, ymonos


def image_ideal_truncated(phi: ProjectiveMap, k: int) -> list[Polynomial]:
    """Basis (RREF-canonical) of the degree-k forms vanishing on the image."""
    if k < 1:
        raise ValueError("k must be positive")
    rows, ymonos = substitution_matrix(phi, k)
    ker = kernel_array(np.ascontiguousarray(rows.T), phi.source.p)
    if not len(ker):
        return []
    ker = row_space_basis(ker, phi.source.p)
    return [poly_from_vector(phi.target, ymonos, v) for v in ker]


def elimination_ideal(phi: ProjectiveMap) -> Ideal:
    """Relations plus the graph equations y_i - f_i in the joint ring."""
    src, tgt = phi.source, phi.target
    m, n = src.nvars, tgt.nvars
    joint = Ring(m + n, src.field, tuple(src.names) + tuple(tgt.names))
    pad = (0,) * n

    def lift(f: Polynomial) -> Polynomial:
        return Polynomial(joint, {e + pad: c for e, c in f.items()}, _clean=True)

    gens = [lift(r) for r in phi.relations]
    gens += [joint.var(m + i) - lift(f) for i, f in enumerate(phi.forms)]
    return Ideal(joint, gens)


def image_ideal_full(phi: ProjectiveMap) -> Ideal:
    """Kernel of y_i -> f_i (modulo the relations) by elimination under the
    block order. The ideal is homogeneous when y_i carries weight deg f_i,
    which lets the graded engine run it degree by degree."""
    src = phi.source
    weights = (1,) * src.nvars + (phi.degree,) * len(phi.forms)
    out = eliminate(elimination_ideal(phi), src.nvars, weights=weights)
    if not out.is_homogeneous():
        raise AssertionError("elimination produced an inhomogeneous generator")
    return Ideal(phi.target, [g.change_ring(phi.target) for g in out.generators])


def vanishes_on_image(g: Polynomial, phi: ProjectiveMap, relations_gb: GroebnerBasis | None = None) -> bool:
    """Exact check that g(f_0, ..., f_n) is zero modulo the relations."""
    image = g.change_ring(phi.target).substitute(list(phi.forms))
    if image.is_zero():
        return True
    if not phi.relations:
        return False
    gb = relations_gb or buchberger(Ideal(phi.source, phi.relations))
    return normal_form(image, gb.elements, gb.order).is_zero()


def substitution_check(ideal: Ideal, phi: ProjectiveMap, threads: int = 1) -> bool:
    gb = buchberger(Ideal(phi.source, phi.relations)) if phi.relations else None
    gens = list(ideal.generators)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda g: vanishes_on_image(g, phi, gb), gens))
    else:
        results = [vanishes_on_image(g, phi, gb) for g in gens]
    return all(results)


# ---------------------------------------------------------------------------
# degree pieces and generators


def degree_part(ideal: Ideal, k: int) -> np.ndarray:
    """RREF basis (rows) of the degree-k piece of a homogeneous ideal."""
    gens = [g for g in ideal.generators if g.degree() <= k]
    if not gens:
        return np.zeros((0, comb(k + ideal.nvars - 1, ideal.nvars - 1)), dtype=np.int64)
    arr, _ = degree_slice_matrix(gens, k)
    return row_space_basis(arr, ideal.ring.p)


def degree_part_polys(ideal: Ideal, k: int) -> list[Polynomial]:
    basis = graded_basis_tuples(k, ideal.nvars, ideal.ring.order)
    return [poly_from_vector(ideal.ring, basis, row) for row in degree_part(ideal, k)]


def same_degree_part(polys_a: Sequence[Polynomial], polys_b: Sequence[Polynomial], ring: Ring, k: int) -> bool:
    a = degree_part(Ideal(ring, polys_a), k)
    b = degree_part(Ideal(ring, polys_b), k)
    return a.shape == b.shape and np.array_equal(a, b)


def minimal_generators_by_degree(ideal: Ideal, *, certify: bool = False, window: int = 14) -> GeneratorProfile:
    """Number of minimal generators in each degree.

    In degree k the count is dim I_k minus the dimension of the span of
    the lower-degree generators' multiples. The selected generators are
    the RREF of the new directions, so they are canonical. With
    ``certify``, the ideal they generate must have the same Hilbert
    function as ``ideal`` for every n <= ``window``.
    """
    ring = ideal.ring
    p = ring.p
    if not ideal.is_homogeneous():
        raise ValueError("generator degrees need a homogeneous ideal")
    counts: dict[int, int] = {}
    chosen: dict[int, list[Polynomial]] = {}
    for k in sorted({g.degree() for g in ideal.generators}):
        lower = [g for g in ideal.generators if g.degree() < k]
        here = [g for g in ideal.generators if g.degree() == k]
        basis = graded_basis_tuples(k, ring.nvars, ring.order)
        here_arr, _ = degree_slice_matrix(here, k)
        if lower:
            low_arr, _ = degree_slice_matrix(lower, k)
            low = row_space_basis(low_arr, p)
        else:
            low = np.zeros((0, len(basis)), dtype=np.int64)
        if len(low):
            pivots = [int(np.flatnonzero(r)[0]) for r in low]
            here_arr = (here_arr - _matmul_mod(here_arr[:, pivots], low, p)) % p
        new = row_space_basis(here_arr, p)
        if len(new):
            counts[k] = len(new)
            chosen[k] = [poly_from_vector(ring, basis, row) for row in new]
    profile = GeneratorProfile(counts, chosen)
    if certify:
        mins = Ideal(ring, [g for k in sorted(chosen) for g in chosen[k]])
        hs_a = hilbert_series_gb(buchberger(mins))
        hs_b = hilbert_series_gb(buchberger(ideal))
        profile.certified = all(series_to_function(hs_a, n) == series_to_function(hs_b, n) for n in range(window + 1))
    return profile


def degree3_defect(ideal: Ideal) -> int:
    """dim I_3 minus dim (I_{<=2} * S): the number of missing cubics."""
    total = len(degree_part(ideal, 3))
    low = len(degree_part(Ideal(ideal.ring, [g for g in ideal.generators if g.degree() <= 2]), 3))
    return total - low


def quadric_ideal(ideal: Ideal) -> Ideal:
    return Ideal(ideal.ring, degree_part_polys(ideal, 2))


@dataclass
class QuadricSubscheme:
    invariants: SchemeInvariants
    series: HilbertSeries
    basis_size: int
    seconds: float
    stats: dict


def quadric_subscheme(ideal: Ideal) -> QuadricSubscheme:
    t0 = time.perf_counter()
    gb = buchberger(quadric_ideal(ideal))
    hs = hilbert_series_gb(gb)
    info = hilbert_polynomial(hs)
    return QuadricSubscheme(
        SchemeInvariants(info.dimension, info.degree, info.genus), hs, len(gb),
        time.perf_counter() - t0, gb.stats.as_dict(),
    )


def quadric_subscheme_invariants(ideal: Ideal) -> tuple[int, int, int | None]:
    return quadric_subscheme(ideal).invariants.as_tuple()


def curve_invariants(ideal: Ideal) -> tuple[HilbertSeries, HilbertPolynomialInfo]:
    hs = hilbert_series_gb(buchberger(ideal))
    return hs, hilbert_polynomial(hs)


def scheme_cut_out_check(ideal: Ideal, quadrics: SchemeInvariants | None = None) -> bool:
    """The quadrics in the ideal cut out a scheme with the same dimension,
    degree and genus as the ideal itself. Since the scheme of the ideal
    lies inside the quadric scheme, equal Hilbert polynomials make them equal."""
    _, info = curve_invariants(ideal)
    q = quadrics or quadric_subscheme(ideal).invariants
    return (q.dimension, q.degree, q.genus) == (info.dimension, info.degree, info.genus)
