"""Hilbert series, functions and polynomials of graded quotients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from .arith import rank_mod_p
from .errors import FeasibilityError
from .groebner import GroebnerBasis, Ideal, buchberger, leading_term_ideal, minimalize_monomials
from .poly import Exponents, Polynomial, count_monomials, graded_basis_tuples

# Column budget for the rank back-end.
MAX_RANK_COLUMNS = 200_000


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _trim(a: list[int]) -> list[int]:
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a or [0]


def _one_minus_t_power(d: int) -> list[int]:
    out = [0] * (d + 1)
    out[0] = 1
    out[d] -= 1
    return out


@lru_cache(maxsize=100_000)
def _numerator(gens: tuple[Exponents, ...]) -> tuple[int, ...]:
    """K-polynomial N with HS(S/I) = N(t)/(1-t)^nvars, gens minimal."""
    if not gens:
        return (1,)
    if any(sum(g) == 0 for g in gens):
        return (0,)
    n = len(gens[0])
    counts = [0] * n
    for g in gens:
        for i, e in enumerate(g):
            if e:
                counts[i] += 1
    if max(counts) <= 1:
        # pairwise coprime generators
        out = [1]
        for g in gens:
            out = _poly_mul(out, _one_minus_t_power(sum(g)))
        return tuple(_trim(out))
    pivot = max(range(n), key=lambda i: (counts[i], -i))
    x = tuple(1 if i == pivot else 0 for i in range(n))
    # N(I) = N(I + (x)) + t * N(I : x)
    plus = tuple(minimalize_monomials([g for g in gens if g[pivot] == 0] + [x]))
    colon = tuple(
        minimalize_monomials([tuple(e - 1 if i == pivot and e else e for i, e in enumerate(g)) for g in gens])
    )
    a = list(_numerator(plus))
    b = [0] + list(_numerator(colon))
    return tuple(_trim(_poly_add(a, b)))


@dataclass(frozen=True)
class HilbertSeries:
    """Q(t) / (1-t)^s for the quotient of a polynomial ring in ``nvars``
    variables, with Q(1) != 0 unless the quotient is zero."""

    numerator: tuple[int, ...]
    s: int
    nvars: int

    def __str__(self) -> str:
        return render_series(self)

    def as_dict(self) -> dict:
        return {"numerator": list(self.numerator), "denominator_exponent": self.s, "nvars": self.nvars}


def render_series(hs: HilbertSeries) -> str:
    parts = []
    for i, c in enumerate(hs.numerator):
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            coeff = "" if mag == 1 else str(mag)
            body = f"{coeff}t" if i == 1 else f"{coeff}t^{i}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    num = " ".join(parts) if parts else "0"
    return f"({num})/(1-t)^{hs.s}"


def simplify(numerator: Sequence[int], nvars: int) -> HilbertSeries:
    q = _trim(list(numerator))
    s = nvars
    while s > 0 and sum(q) == 0 and any(q):
        # synthetic division by (1 - t)
        out = []
        acc = 0
        for c in q[:-1]:
            acc += c
            out.append(acc)
        q = _trim(out)
        s -= 1
    if not any(q):
        return HilbertSeries((0,), 0, nvars)
    return HilbertSeries(tuple(q), s, nvars)


def hilbert_series_monomial(generators: Sequence[Sequence[int]], nvars: int) -> HilbertSeries:
    gens = tuple(minimalize_monomials(generators))
    if gens and any(len(g) != nvars for g in gens):
        raise ValueError("monomial length does not match nvars")
    return simplify(_numerator(gens), nvars)


def hilbert_series_gb(G: GroebnerBasis) -> HilbertSeries:
    if not G.complete:
        raise ValueError("Hilbert series needs a complete Groebner basis")
    if G.weights is not None and any(w != 1 for w in G.weights):
        raise ValueError("Hilbert series is computed for the standard grading only")
    return hilbert_series_monomial(leading_term_ideal(G), G.ring.nvars)


def hilbert_series(ideal: Ideal) -> HilbertSeries:
    if not ideal.is_homogeneous():
        raise ValueError("Hilbert series needs homogeneous generators")
    return hilbert_series_gb(buchberger(ideal))


def series_to_function(hs: HilbertSeries, n: int) -> int:
    """Coefficient of t^n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if hs.s == 0:
        return hs.numerator[n] if n < len(hs.numerator) else 0
    return sum(c * comb(n - i + hs.s - 1, hs.s - 1) for i, c in enumerate(hs.numerator) if i <= n)


def series_to_polynomial(hs: HilbertSeries) -> list[Fraction]:
    """Coefficients (constant term first) of the Hilbert polynomial in n."""
    s = hs.s
    if s == 0:
        return [Fraction(0)]
    total = [Fraction(0)] * s
    for i, c in enumerate(hs.numerator):
        # binom(n - i + s - 1, s - 1) as a polynomial in n
        poly = [Fraction(1)]
        for j in range(1, s):
            # multiply by (n - i + j) / j
            a = Fraction(j - i, j)
            b = Fraction(1, j)
            nxt = [Fraction(0)] * (len(poly) + 1)
            for k, v in enumerate(poly):
                nxt[k] += v * a
                nxt[k + 1] += v * b
            poly = nxt
        for k, v in enumerate(poly):
            total[k] += c * v
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    return total


@dataclass(frozen=True)
class HilbertPolynomialInfo:
    dimension: int
    degree: int
    genus: int | None
    coefficients: tuple[Fraction, ...]
    supported: bool = True

    def __call__(self, n: int) -> Fraction:
        return sum(c * n**k for k, c in enumerate(self.coefficients))

    def as_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "degree": self.degree,
            "genus": self.genus,
            "polynomial": [str(c) for c in self.coefficients],
            "supported": self.supported,
        }


def hilbert_polynomial(hs: HilbertSeries) -> HilbertPolynomialInfo:
    q = hs.numerator
    dim = hs.s - 1
    degree = sum(q)
    coeffs = tuple(series_to_polynomial(hs))
    if dim == 1:
        dq = sum(i * c for i, c in enumerate(q))
        return HilbertPolynomialInfo(1, degree, 1 - degree + dq, coeffs)
    if dim in (0, -1):
        return HilbertPolynomialInfo(dim, degree if dim == 0 else 0, None, coeffs)
    return HilbertPolynomialInfo(dim, degree, None, coeffs, supported=False)


def degree_slice_matrix(polys: Sequence[Polynomial], n: int, order=None) -> tuple[np.ndarray, tuple[Exponents, ...]]:
    """Rows: all degree-n monomial multiples of the given homogeneous forms;
    columns: the degree-n monomials, largest first."""
    if not polys:
        raise ValueError("need at least one form to fix the ring")
    ring = polys[0].ring
    order = order or ring.order
    basis = graded_basis_tuples(n, ring.nvars, order)
    if len(basis) > MAX_RANK_COLUMNS:
        raise FeasibilityError(f"degree-{n} slice has {len(basis)} monomials (budget {MAX_RANK_COLUMNS})")
    index = {m: k for k, m in enumerate(basis)}
    rows = []
    for g in polys:
        if not g.is_homogeneous():
            raise ValueError("slice matrices need homogeneous forms")
        dg = g.degree()
        if dg > n or g.is_zero():
            continue
        terms = list(g.items())
        exps = np.array([e for e, _ in terms], dtype=np.int64)
        coefs = np.array([c for _, c in terms], dtype=np.int64)
        for m in graded_basis_tuples(n - dg, ring.nvars, order):
            row = np.zeros(len(basis), dtype=np.int64)
            shifted = (exps + np.array(m, dtype=np.int64)).tolist()
            row[[index[tuple(r)] for r in shifted]] = coefs
            rows.append(row)
    arr = np.array(rows, dtype=np.int64).reshape(len(rows), len(basis))
    return arr, basis


def hilbert_function_rank(ideal: Ideal, n: int) -> int:
    """dim (S/I)_n by linear algebra: monomial count minus the rank of all
    degree-n multiples m*g of the generators."""
    total = count_monomials(n, ideal.nvars)
    if total > MAX_RANK_COLUMNS:
        raise FeasibilityError(f"degree-{n} slice has {total} monomials (budget {MAX_RANK_COLUMNS})")
    if not ideal.generators:
        return total
    arr, _ = degree_slice_matrix(list(ideal.generators), n)
    return total - rank_mod_p(arr, ideal.ring.p)
