"""Multivariate polynomials over F_p with grevlex, lex and block orders."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from .arith import PrimeField, default_field
from .errors import DimensionError, ParseError

Exponents = tuple[int, ...]


class Monomial(tuple):
    """Exponent vector; hashes and compares like the underlying tuple."""

    __slots__ = ()

    def __new__(cls, exponents: Iterable[int]):
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError("negative exponent")
        return super().__new__(cls, exps)

    @property
    def exponents(self) -> Exponents:
        return tuple(self)

    @property
    def degree(self) -> int:
        return sum(self)

    @property
    def nvars(self) -> int:
        return len(self)

    def __mul__(self, other):
        return Monomial(a + b for a, b in zip(self, other))

    def divides(self, other: Sequence[int]) -> bool:
        return all(a <= b for a, b in zip(self, other))


def mono_mul(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Exponents, b: Exponents) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Exponents, b: Exponents) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _grevlex_key(e: Exponents):
    return (sum(e), tuple(-x for x in reversed(e)))


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order. ``block`` eliminates the first ``split`` variables,
    with grevlex inside each block."""

    kind: str = "grevlex"
    split: int | None = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if (self.kind == "block") != (self.split is not None):
            raise ValueError("block orders need a split index (and only they do)")

    def key(self, e: Exponents):
        """Sort key: larger key means larger monomial."""
        if self.kind == "grevlex":
            return _grevlex_key(e)
        if self.kind == "lex":
            return tuple(e)
        k = self.split
        return (_grevlex_key(e[:k]), _grevlex_key(e[k:]))

    def heap_key(self, e: Exponents) -> tuple:
        """Flat key whose ascending order is descending monomial order."""
        if self.kind == "grevlex":
            return (-sum(e), *reversed(e))
        if self.kind == "lex":
            return tuple(-x for x in e)
        k = self.split
        return (-sum(e[:k]), *reversed(e[:k]), -sum(e[k:]), *reversed(e[k:]))

    def compare(self, a: Exponents, b: Exponents) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def is_graded(self) -> bool:
        return self.kind == "grevlex"

    def __str__(self) -> str:
        return f"block({self.split})" if self.kind == "block" else self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(split: int) -> MonomialOrder:
    return MonomialOrder("block", split)


def mono_cmp(a: Sequence[int], b: Sequence[int], order: MonomialOrder = GREVLEX) -> int:
    """-1, 0 or 1 as a <, =, > b."""
    if len(a) != len(b):
        raise DimensionError(f"monomials in {len(a)} and {len(b)} variables")
    return order.compare(tuple(a), tuple(b))


def _compositions(n: int, v: int):
    if v == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, v - 1):
            yield (first,) + rest


@lru_cache(maxsize=256)
def _graded_basis(n: int, v: int, order: MonomialOrder) -> tuple[Exponents, ...]:
    return tuple(sorted(_compositions(n, v), key=order.key, reverse=True))


def graded_basis(n: int, v: int, order: MonomialOrder = GREVLEX) -> list[Monomial]:
    """All degree-n monomials in v variables, largest first."""
    if n < 0 or v < 1:
        raise ValueError("need n >= 0 and v >= 1")
    return [Monomial(e) for e in _graded_basis(n, v, order)]


def graded_basis_tuples(n: int, v: int, order: MonomialOrder = GREVLEX) -> tuple[Exponents, ...]:
    return _graded_basis(n, v, order)


def count_monomials(n: int, v: int) -> int:
    return comb(n + v - 1, v - 1) if n >= 0 else 0


def default_names(nvars: int) -> tuple[str, ...]:
    if nvars == 8:
        return tuple(f"y{i}" for i in range(8))
    if nvars == 11:
        return tuple(f"x{i}" for i in range(3)) + tuple(f"y{i}" for i in range(8))
    return tuple(f"x{i}" for i in range(nvars))


@dataclass(frozen=True)
class Ring:
    """Polynomial ring F_p[vars] with a default monomial order."""

    nvars: int
    field: PrimeField = field(default_factory=default_field)
    names: tuple[str, ...] | None = None
    order: MonomialOrder = GREVLEX

    def __post_init__(self):
        if self.names is None:
            object.__setattr__(self, "names", default_names(self.nvars))
        if len(self.names) != self.nvars:
            raise DimensionError("one name per variable required")

    @property
    def p(self) -> int:
        return self.field.p

    def with_order(self, order: MonomialOrder) -> "Ring":
        return Ring(self.nvars, self.field, self.names, order)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, i: int) -> "Polynomial":
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> "Polynomial":
        if len(exps) != self.nvars:
            raise DimensionError("exponent vector length does not match the ring")
        return Polynomial(self, {tuple(exps): coeff})

    def graded_basis(self, n: int) -> list[Monomial]:
        return graded_basis(n, self.nvars, self.order)

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def __str__(self) -> str:
        return f"F_{self.p}[{','.join(self.names)}]"


class Polynomial:
    """Sparse polynomial: a map from exponent tuples to nonzero residues."""

    __slots__ = ("ring", "_terms", "_sorted")

    def __init__(self, ring: Ring, terms: Mapping[Exponents, int] | None = None, *, _clean: bool = False):
        self.ring = ring
        if _clean:
            self._terms = dict(terms)
        else:
            p = ring.p
            clean: dict[Exponents, int] = {}
            for e, c in (terms or {}).items():
                e = tuple(e)
                if len(e) != ring.nvars:
                    raise DimensionError("exponent vector length does not match the ring")
                c = int(c) % p
                if c:
                    clean[e] = c
            self._terms = clean
        self._sorted: dict[MonomialOrder, list[tuple[Exponents, int]]] = {}

    # -- access ---------------------------------------------------------
    @property
    def terms(self) -> dict[Exponents, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, exps: Sequence[int]) -> int:
        return self._terms.get(tuple(exps), 0)

    def sorted_terms(self, order: MonomialOrder | None = None) -> list[tuple[Exponents, int]]:
        order = order or self.ring.order
        cached = self._sorted.get(order)
        if cached is None:
            cached = sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)
            self._sorted[order] = cached
        return cached

    def leading_term(self, order: MonomialOrder | None = None) -> tuple[Monomial, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e, c = self.sorted_terms(order)[0]
        return Monomial(e), c

    def leading_monomial(self, order: MonomialOrder | None = None) -> Monomial:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: MonomialOrder | None = None) -> int:
        return self.leading_term(order)[1]

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def weighted_degrees(self, weights: Sequence[int]) -> set[int]:
        return {sum(w * x for w, x in zip(weights, e)) for e in self._terms}

    def is_homogeneous(self, weights: Sequence[int] | None = None) -> bool:
        if weights is None:
            return len({sum(e) for e in self._terms}) <= 1
        return len(self.weighted_degrees(weights)) <= 1

    def variables_used(self) -> set[int]:
        return {i for e in self._terms for i, x in enumerate(e) if x}

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise DimensionError(f"polynomials in {self.ring} and {other.ring}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = (out.get(e, 0) + c) % p
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, {e: p - c for e, c in self._terms.items()}, _clean=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {e: v * c % p for e, v in self._terms.items()}, _clean=True)

    def mul_monomial(self, m: Exponents, c: int = 1) -> "Polynomial":
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(
            self.ring, {mono_mul(e, m): v * c % p for e, v in self._terms.items()}, _clean=True
        )

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out: dict[Exponents, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return Polynomial(self.ring, {e: c for e, c in out.items() if c}, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result, base = self.ring.one(), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def monic(self, order: MonomialOrder | None = None) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient(order)))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.ring.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        return hash((self.ring, frozenset(self._terms.items())))

    # -- calculus and evaluation ---------------------------------------
    def partial(self, i: int) -> "Polynomial":
        p = self.ring.p
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                v = c * e[i] % p
                if v:
                    out[tuple(d)] = v
        return Polynomial(self.ring, out, _clean=True)

    def evaluate(self, point: Sequence[int]) -> int:
        if len(point) != self.ring.nvars:
            raise DimensionError("point length does not match the ring")
        p = self.ring.p
        pt = [int(x) % p for x in point]
        total = 0
        for e, c in self._terms.items():
            t = c
            for x, k in zip(pt, e):
                if k:
                    t = t * pow(x, k, p) % p
            total += t
        return total % p

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Ring map sending variable i to images[i]."""
        if len(images) != self.ring.nvars:
            raise DimensionError("one image per variable required")
        target = images[0].ring
        powers: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, k: int) -> Polynomial:
            key = (i, k)
            if key not in powers:
                powers[key] = images[i] ** k
            return powers[key]

        result = target.zero()
        for e, c in self._terms.items():
            term = target.constant(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def homogeneous_components(self) -> dict[int, "Polynomial"]:
        parts: dict[int, dict] = {}
        for e, c in self._terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: Polynomial(self.ring, t, _clean=True) for d, t in sorted(parts.items())}

    def change_ring(self, ring: Ring) -> "Polynomial":
        if ring.nvars != self.ring.nvars or ring.p != self.ring.p:
            raise DimensionError("rings differ in size or characteristic")
        return Polynomial(ring, self._terms, _clean=True)

    # -- text -----------------------------------------------------------
    def to_text(self, order: MonomialOrder | None = None) -> str:
        if not self._terms:
            return "0"
        names = self.ring.names
        parts = []
        for e, c in self.sorted_terms(order):
            factors = [str(c)]
            for name, k in zip(names, e):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r} in {self.ring})"


_TERM_SPLIT = re.compile(r"([+-])")
_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$")


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    """Parse ``c*x0^a*x1^b + ...`` (signs and bare variables accepted)."""
    index = {name: i for i, name in enumerate(ring.names)}
    src = text.replace(" ", "").replace("**", "^")
    if not src:
        raise ParseError("empty polynomial")
    tokens = _TERM_SPLIT.split(src)
    terms: dict[Exponents, int] = {}
    sign = 1
    expect_term = True
    for tok in tokens:
        if tok in ("+", "-"):
            sign = -sign if tok == "-" else sign
            expect_term = True
            continue
        if tok == "":
            continue
        if not expect_term:
            raise ParseError(f"missing operator before {tok!r}")
        coeff = sign
        exps = [0] * ring.nvars
        for factor in tok.split("*"):
            if not factor:
                raise ParseError(f"empty factor in {tok!r}")
            if factor.isdigit():
                coeff *= int(factor)
                continue
            m = _FACTOR.match(factor)
            if not m or m.group(1) not in index:
                raise ParseError(f"unknown factor {factor!r}")
            exps[index[m.group(1)]] += int(m.group(2) or 1)
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
        sign = 1
        expect_term = False
    if expect_term:
        raise ParseError("dangling operator")
    return Polynomial(ring, terms)


def partial_derivative(f: Polynomial, i: int) -> Polynomial:
    return f.partial(i)


def evaluate(f: Polynomial, point: Sequence[int]) -> int:
    return f.evaluate(point)


def poly_from_vector(ring: Ring, basis: Sequence[Exponents], vec: Sequence[int]) -> Polynomial:
    """Polynomial with coefficient vec[j] on basis[j]."""
    return Polynomial(ring, {tuple(m): int(c) for m, c in zip(basis, vec) if int(c)})


def poly_to_vector(f: Polynomial, index: Mapping[Exponents, int], length: int) -> list[int]:
    v = [0] * length
    for e, c in f.items():
        try:
            v[index[e]] = c
        except KeyError:
            raise DimensionError(f"monomial {e} not in the given basis") from None
    return v
