"""Buchberger's algorithm, normal forms, elimination and ideal files.

Two engines share one contract (the reduced Groebner basis):

* ``_graded_buchberger`` handles ideals homogeneous for some positive
  grading. It runs degree by degree; each degree slice is a dense vector
  space indexed by the monomials of that degree, and reductions run in a
  compiled loop. Within a slice only same-degree monomials are compared,
  so any monomial order (grevlex, lex, block) is honoured exactly.
* ``_sparse_buchberger`` is the general fallback, using the sugar
  strategy on dict-backed polynomials.

Both select pairs by the normal strategy (smallest lcm first within the
current degree or sugar) and prune with the Gebauer-Moller criteria.
"""

from __future__ import annotations

import heapq
import logging
import time
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .arith import PrimeField
from .errors import DimensionError, FeasibilityError, ParseError
from .poly import (
    GREVLEX,
    Exponents,
    Monomial,
    MonomialOrder,
    Polynomial,
    Ring,
    block_order,
    default_names,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
)

log = logging.getLogger(__name__)


class Ideal:
    """Homogeneous-or-not ideal given by generators.

    Generators are made monic for the ring order, zeros dropped and
    duplicates removed (first occurrence kept).
    """

    __slots__ = ("ring", "generators")

    def __init__(self, ring: Ring, generators: Iterable[Polynomial]):
        seen = set()
        gens = []
        for g in generators:
            if g.ring != ring:
                raise DimensionError(f"generator in {g.ring}, ideal in {ring}")
            if g.is_zero():
                continue
            g = g.monic(ring.order)
            if g not in seen:
                seen.add(g)
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def is_homogeneous(self, weights: Sequence[int] | None = None) -> bool:
        return all(g.is_homogeneous(weights) for g in self.generators)

    def degrees(self) -> list[int]:
        return [g.degree() for g in self.generators]

    def by_degree(self, d: int) -> list[Polynomial]:
        return [g for g in self.generators if g.degree() == d]

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __repr__(self) -> str:
        return f"Ideal({len(self.generators)} generators in {self.ring})"


@dataclass
class GroebnerStats:
    strategy: str = ""
    pairs_created: int = 0
    pairs_reduced: int = 0
    zero_reductions: int = 0
    pruned_product: int = 0
    pruned_chain: int = 0
    max_degree_reached: int = 0
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "pairs_created": self.pairs_created,
            "pairs_reduced": self.pairs_reduced,
            "zero_reductions": self.zero_reductions,
            "pruned_product": self.pruned_product,
            "pruned_chain": self.pruned_chain,
            "max_degree_reached": self.max_degree_reached,
        }


@dataclass
class GroebnerBasis:
    """Reduced Groebner basis (or its truncation below ``degree_bound``).

    Elements are monic and sorted by increasing leading monomial.
    """

    ring: Ring
    elements: list[Polynomial]
    order: MonomialOrder
    reduced: bool = True
    complete: bool = True
    degree_bound: int | None = None
    weights: tuple[int, ...] | None = None
    stats: GroebnerStats = field(default_factory=GroebnerStats)

    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial(self.order) for g in self.elements]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


# ---------------------------------------------------------------------------
# Sparse normal forms


_FIELD = 32  # bits per packed exponent; exponents must stay below 2**31
_WIDE = 1 << 40  # base for the linear order key


class _Reducer:
    """Full reduction by a fixed list of monic (lead, terms) pairs.

    Monomials are packed into Python ints (32 bits per variable) so that
    multiplication is integer addition and divisibility is a guard-bit test.
    The order key is linear in the exponents, so it is carried along by
    addition as well; smaller key means larger monomial."""

    def __init__(self, basis: list[tuple[Exponents, dict]], order: MonomialOrder, nvars: int, p: int):
        self.n, self.p = nvars, p
        self.mask = (1 << _FIELD) - 1
        self.guard = sum(1 << (_FIELD * i + _FIELD - 1) for i in range(nvars))
        units = [tuple(int(i == j) for j in range(nvars)) for i in range(nvars)]
        self.coef = [self._flat(order.heap_key(u)) for u in units]
        self.leads, self.lead_keys, self.tails = [], [], []
        for lt, g in basis:
            self.leads.append(self.pack(lt))
            self.lead_keys.append(self.key(lt))
            self.tails.append([(self.pack(e), self.key(e), v) for e, v in g.items() if e != lt])
        self.divisor: dict[int, int] = {}

    @staticmethod
    def _flat(comps) -> int:
        h = 0
        for c in comps:
            h = h * _WIDE + c
        return h

    def pack(self, e: Exponents) -> int:
        return sum(x << (_FIELD * i) for i, x in enumerate(e))

    def key(self, e: Exponents) -> int:
        return sum(c * x for c, x in zip(self.coef, e))

    def unpack(self, m: int) -> Exponents:
        return tuple((m >> (_FIELD * i)) & self.mask for i in range(self.n))

    def find_divisor(self, m: int) -> int:
        j = self.divisor.get(m)
        if j is None:
            g = self.guard
            j = next((i for i, lt in enumerate(self.leads) if (m + g - lt) & g == g), -1)
            self.divisor[m] = j
        return j

    def reduce(self, terms: dict) -> dict:
        p = self.p
        work = {}
        heap = []
        for e, c in terms.items():
            m = self.pack(e)
            work[m] = c
            heap.append((self.key(e), m))
        heapq.heapify(heap)
        pop, push, get = heapq.heappop, heapq.heappush, work.get
        rem = {}
        while heap:
            h, lead = pop(heap)
            c = work.pop(lead, 0)
            if not c:
                continue
            j = self.find_divisor(lead)
            if j < 0:
                rem[self.unpack(lead)] = c
                continue
            q = lead - self.leads[j]
            hq = h - self.lead_keys[j]
            for pe, he, v in self.tails[j]:
                m = pe + q
                old = get(m)
                if old is None:
                    work[m] = -c * v % p
                    push(heap, (he + hq, m))
                else:
                    s = (old - c * v) % p
                    if s:
                        work[m] = s
                    else:
                        del work[m]
        return rem


def _dict_normal_form(terms: dict, basis: list[tuple[Exponents, dict]], order: MonomialOrder, p: int) -> dict:
    """Full reduction of ``terms`` by monic (lead, terms) pairs."""
    if not basis or not terms:
        return dict(terms)
    return _Reducer(basis, order, len(basis[0][0]), p).reduce(terms)


def _monic_basis(G: Sequence[Polynomial], order: MonomialOrder) -> list[tuple[Exponents, dict]]:
    basis = []
    for g in G:
        if g.is_zero():
            continue
        gm = g.monic(order)
        basis.append((tuple(gm.leading_monomial(order)), gm._terms))
    return basis


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: MonomialOrder | None = None) -> Polynomial:
    """Remainder of f under multivariate division by G (fully reduced)."""
    order = order or f.ring.order
    for g in G:
        if g.ring != f.ring:
            raise DimensionError("divisor in a different ring")
    rem = _dict_normal_form(f._terms, _monic_basis(G, order), order, f.ring.p)
    return Polynomial(f.ring, rem, _clean=True)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
    order = order or f.ring.order
    lf, cf = f.leading_term(order)
    lg, cg = g.leading_term(order)
    L = mono_lcm(lf, lg)
    inv = f.ring.field.inv
    return f.mul_monomial(mono_div(L, lf), inv(cf)) - g.mul_monomial(mono_div(L, lg), inv(cg))


def ideal_membership(f: Polynomial, G: GroebnerBasis) -> bool:
    if not G.complete and not f.is_zero():
        # a basis truncated at degree D decides homogeneous f of degree <= D
        w = G.weights or (1,) * G.ring.nvars
        if G.degree_bound is None or not f.is_homogeneous(w) or max(f.weighted_degrees(w)) > G.degree_bound:
            raise ValueError("truncated basis cannot decide membership at this degree")
    return normal_form(f, G.elements, G.order).is_zero()


def is_groebner_basis(G: Sequence[Polynomial], order: MonomialOrder, pairs: Iterable[tuple[int, int]] | None = None) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    G = list(G)
    if not G:
        return True
    if pairs is None:
        pairs = combinations(range(len(G)), 2)
    reducer = _Reducer(_monic_basis(G, order), order, G[0].ring.nvars, G[0].ring.p)
    for i, j in pairs:
        if reducer.reduce(s_polynomial(G[i], G[j], order)._terms):
            return False
    return True


# ---------------------------------------------------------------------------
# Gebauer-Moller pair bookkeeping (shared by both engines)


class _PairSet:
    """Pending critical pairs with vectorised Gebauer-Moller updates."""

    def __init__(self, nvars: int, weights: np.ndarray | None, stats: GroebnerStats):
        self.n = nvars
        self.weights = weights
        self.stats = stats
        self.lts = np.zeros((0, nvars), dtype=np.int64)
        self.active = np.zeros(0, dtype=bool)
        self.pi = np.zeros(0, dtype=np.int64)
        self.pj = np.zeros(0, dtype=np.int64)
        self.plcm = np.zeros((0, nvars), dtype=np.int64)
        self.alive = np.zeros(0, dtype=bool)

    def add(self, lt: Sequence[int]) -> int:
        """Register a new basis element; return its index."""
        h = len(self.lts)
        lt_h = np.asarray(lt, dtype=np.int64).reshape(1, self.n)
        old = np.flatnonzero(self.active)
        if len(old):
            L = np.maximum(self.lts[old], lt_h)
            coprime = ~np.any((self.lts[old] > 0) & (lt_h > 0), axis=1)
            keep = self._new_pairs(L, coprime)
            # B-criterion on the old pairs.
            if self.alive.any():
                idx = np.flatnonzero(self.alive)
                pl = self.plcm[idx]
                divisible = np.all(pl >= lt_h, axis=1)
                li = np.maximum(self.lts[self.pi[idx]], lt_h)
                lj = np.maximum(self.lts[self.pj[idx]], lt_h)
                differ_i = np.any(li != pl, axis=1)
                differ_j = np.any(lj != pl, axis=1)
                kill = divisible & differ_i & differ_j
                self.stats.pruned_chain += int(kill.sum())
                self.alive[idx[kill]] = False
            sel = old[keep]
            self.pi = np.concatenate([self.pi, sel])
            self.pj = np.concatenate([self.pj, np.full(len(sel), h, dtype=np.int64)])
            self.plcm = np.concatenate([self.plcm, L[keep]])
            self.alive = np.concatenate([self.alive, np.ones(len(sel), dtype=bool)])
            self.stats.pairs_created += len(sel)
        # Elements whose leading monomial is a multiple of the new one leave the active set.
        if len(old):
            dominated = np.all(self.lts[old] >= lt_h, axis=1)
            self.active[old[dominated]] = False
        self.lts = np.concatenate([self.lts, lt_h])
        self.active = np.concatenate([self.active, [True]])
        return h

    def _new_pairs(self, L: np.ndarray, coprime: np.ndarray) -> np.ndarray:
        m = len(L)
        # M-criterion: drop pairs whose lcm is a proper multiple of another new lcm.
        div = np.all(L[None, :, :] <= L[:, None, :], axis=2)  # div[a, b]: L[b] | L[a]
        equal = np.all(L[None, :, :] == L[:, None, :], axis=2)
        proper = div & ~equal
        keep = ~proper.any(axis=1)
        self.stats.pruned_chain += int((~keep).sum())
        # F-criterion: one pair per lcm; product criterion kills the whole class.
        result = np.zeros(m, dtype=bool)
        seen: set[bytes] = set()
        for a in np.flatnonzero(keep):
            key = L[a].tobytes()
            if key in seen:
                self.stats.pruned_chain += 1
                continue
            seen.add(key)
            cls = np.flatnonzero(equal[a] & keep)
            if coprime[cls].any():
                self.stats.pruned_product += len(cls)
                continue
            result[a] = True
        return result

    def degree(self, lcm: np.ndarray) -> np.ndarray:
        if self.weights is None:
            return lcm.sum(axis=-1)
        return lcm @ self.weights

    def pending(self) -> np.ndarray:
        return np.flatnonzero(self.alive)


# ---------------------------------------------------------------------------
# Graded engine


def _choose_cap(weights: np.ndarray) -> int:
    lo, hi = 1, 1 << 22
    limit = 1 << 62
    while lo < hi:
        mid = (lo + hi + 1) // 2
        prod = 1
        for w in weights:
            prod *= mid // int(w) + 1
        if prod < limit:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _weighted_monomials(d: int, weights: Sequence[int]) -> list[Exponents]:
    n = len(weights)
    out: list[Exponents] = []
    suffix_min = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_min[i] = min(weights[i:])

    def rec(i: int, rem: int, acc: list[int]):
        if i == n - 1:
            if rem % weights[i] == 0:
                out.append(tuple(acc + [rem // weights[i]]))
            return
        for e in range(rem // weights[i], -1, -1):
            rec(i + 1, rem - e * weights[i], acc + [e])

    if n:
        rec(0, d, [])
    return out


class _Slice:
    def __init__(self, d: int, weights: Sequence[int], order: MonomialOrder, place: np.ndarray):
        monos = _weighted_monomials(d, weights)
        monos.sort(key=order.key, reverse=True)
        self.degree = d
        self.monos = monos
        self.exps = np.array(monos, dtype=np.int64).reshape(len(monos), len(weights))
        self.codes = self.exps @ place
        perm = np.argsort(self.codes, kind="stable")
        self.perm = perm.astype(np.int64)
        self.sorted_codes = self.codes[perm]
        self.red_g = np.full(len(monos), -1, dtype=np.int64)
        self.red_cof = np.zeros(len(monos), dtype=np.int64)

    def __len__(self) -> int:
        return len(self.monos)

    def positions(self, codes: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.sorted_codes, codes)
        if np.any(idx >= len(self.sorted_codes)) or np.any(self.sorted_codes[np.minimum(idx, len(self.sorted_codes) - 1)] != codes):
            raise AssertionError("monomial outside the degree slice")
        return self.perm[idx]


class _GradedBuchberger:
    def __init__(self, ring: Ring, order: MonomialOrder, weights: Sequence[int], max_degree: int | None):
        self.ring = ring
        self.p = ring.p
        self.n = ring.nvars
        self.order = order
        self.weights = np.array(weights, dtype=np.int64)
        self.cap = _choose_cap(self.weights)
        radix = self.cap // self.weights + 1
        self.radix = radix
        self.place = np.cumprod(np.concatenate([[1], radix[:-1]])).astype(np.int64)
        self.max_degree = max_degree
        if max_degree is not None and max_degree > self.cap:
            raise FeasibilityError(f"degree bound {max_degree} exceeds monomial encoding cap {self.cap}")
        self.stats = GroebnerStats(strategy="graded-normal")
        self.pairs = _PairSet(self.n, self.weights, self.stats)
        # basis storage
        self.lt_list: list[Exponents] = []
        self.gdeg: list[int] = []
        self.gstart = np.zeros(16, dtype=np.int64)
        self.glen = np.zeros(16, dtype=np.int64)
        self.buf_codes = np.zeros(1024, dtype=np.int64)
        self.buf_coefs = np.zeros(1024, dtype=np.int64)
        self.used = 0

    def wdeg(self, e: Sequence[int]) -> int:
        return int(np.dot(self.weights, e))

    def encode(self, exps: np.ndarray) -> np.ndarray:
        return exps @ self.place

    def decode(self, codes: np.ndarray) -> np.ndarray:
        return (codes[:, None] // self.place[None, :]) % self.radix[None, :]

    def _store(self, gid: int, codes: np.ndarray, coefs: np.ndarray):
        need = self.used + len(codes)
        if need > len(self.buf_codes):
            size = max(need, 2 * len(self.buf_codes))
            self.buf_codes = np.resize(self.buf_codes, size)
            self.buf_coefs = np.resize(self.buf_coefs, size)
        self.buf_codes[self.used:need] = codes
        self.buf_coefs[self.used:need] = coefs
        if gid >= len(self.gstart):
            self.gstart = np.resize(self.gstart, 2 * gid + 2)
            self.glen = np.resize(self.glen, 2 * gid + 2)
        self.gstart[gid] = self.used
        self.glen[gid] = len(codes)
        self.used = need

    def terms(self, gid: int) -> tuple[np.ndarray, np.ndarray]:
        s = self.gstart[gid]
        return self.buf_codes[s:s + self.glen[gid]], self.buf_coefs[s:s + self.glen[gid]]

    def _reduce(self, sl: _Slice, v: np.ndarray, start: int = 0):
        _kernels.reduce_slice(
            v, start, sl.red_g, sl.red_cof, self.gstart, self.glen,
            self.buf_codes, self.buf_coefs, sl.sorted_codes, sl.perm, self.p,
        )

    def _add(self, sl: _Slice, v: np.ndarray) -> int:
        nz = np.flatnonzero(v)
        lead = int(nz[0])
        inv = pow(int(v[lead]), -1, self.p)
        coefs = v[nz] * inv % self.p
        gid = len(self.lt_list)
        lt = sl.monos[lead]
        self.lt_list.append(lt)
        self.gdeg.append(sl.degree)
        self._store(gid, sl.codes[nz], coefs)
        sl.red_g[lead] = gid
        sl.red_cof[lead] = 0
        self.pairs.add(lt)
        return gid

    def run(self, gens: list[Polynomial]) -> GroebnerBasis:
        t0 = time.perf_counter()
        by_deg: dict[int, list[Polynomial]] = {}
        for g in gens:
            by_deg.setdefault(self.wdeg(next(iter(g._terms))), []).append(g)
        if 0 in by_deg:
            return self._finish_unit(t0)
        while True:
            pend = self.pairs.pending()
            pair_degs = self.pairs.degree(self.pairs.plcm[pend]) if len(pend) else np.zeros(0, dtype=np.int64)
            cands = [int(pair_degs.min())] if len(pend) else []
            cands += [d for d in by_deg]
            if not cands:
                complete = True
                break
            d = min(cands)
            if self.max_degree is not None and d > self.max_degree:
                complete = False
                break
            if d > self.cap:
                raise FeasibilityError(f"degree {d} exceeds the monomial encoding cap {self.cap}")
            self._process_degree(d, by_deg.pop(d, []), pend[pair_degs == d] if len(pend) else pend)
            self.stats.max_degree_reached = d
        self.stats.seconds = time.perf_counter() - t0
        return self._output(complete)

    def _process_degree(self, d: int, gens: list[Polynomial], pair_idx: np.ndarray):
        sl = _Slice(d, self.weights, self.order, self.place)
        if self.lt_list:
            lt_arr = np.array(self.lt_list, dtype=np.int64).reshape(len(self.lt_list), self.n)
            _kernels.assign_reducers(
                sl.exps, sl.codes, lt_arr, self.encode(lt_arr),
                np.array(self.gdeg, dtype=np.int64), d - 1, sl.red_g, sl.red_cof,
            )
        new_ids: list[int] = []
        p = self.p
        for g in gens:
            exps = np.array(list(g._terms), dtype=np.int64).reshape(len(g), self.n)
            v = np.zeros(len(sl), dtype=np.int64)
            v[sl.positions(self.encode(exps))] = np.fromiter(g._terms.values(), dtype=np.int64)
            self._reduce(sl, v)
            if v.any():
                new_ids.append(self._add(sl, v))
        # normal strategy: smallest lcm first
        if len(pair_idx):
            lcms = self.pairs.plcm[pair_idx]
            keys = [self.order.key(tuple(int(x) for x in row)) for row in lcms]
            ordering = sorted(range(len(pair_idx)), key=lambda k: (keys[k], int(self.pairs.pi[pair_idx[k]]), int(self.pairs.pj[pair_idx[k]])))
            for k in ordering:
                idx = pair_idx[k]
                if not self.pairs.alive[idx]:
                    continue
                self.pairs.alive[idx] = False
                i, j = int(self.pairs.pi[idx]), int(self.pairs.pj[idx])
                lcm_code = int(self.encode(lcms[k]))
                v = np.zeros(len(sl), dtype=np.int64)
                for gid, sign in ((i, 1), (j, p - 1)):
                    codes, coefs = self.terms(gid)
                    lt_code = int(self.encode(np.array(self.lt_list[gid], dtype=np.int64)))
                    pos = sl.positions(codes + (lcm_code - lt_code))
                    v[pos] = (v[pos] + sign * coefs) % p
                self._reduce(sl, v)
                self.stats.pairs_reduced += 1
                if v.any():
                    new_ids.append(self._add(sl, v))
                else:
                    self.stats.zero_reductions += 1
        # interreduce this degree: smallest leading monomial first
        lead_pos = {gid: int(np.flatnonzero(sl.red_g == gid)[0]) for gid in new_ids}
        for gid in sorted(new_ids, key=lambda g: -lead_pos[g]):
            codes, coefs = self.terms(gid)
            v = np.zeros(len(sl), dtype=np.int64)
            v[sl.positions(codes)] = coefs
            self._reduce(sl, v, lead_pos[gid] + 1)
            nz = np.flatnonzero(v)
            self._store(gid, sl.codes[nz], v[nz])

    def _finish_unit(self, t0: float) -> GroebnerBasis:
        self.stats.seconds = time.perf_counter() - t0
        return GroebnerBasis(self.ring, [self.ring.one()], self.order, True, True, None,
                             tuple(int(w) for w in self.weights), self.stats)

    def _output(self, complete: bool) -> GroebnerBasis:
        active = np.flatnonzero(self.pairs.active)
        elements = []
        for gid in active:
            codes, coefs = self.terms(int(gid))
            exps = self.decode(codes)
            terms = {tuple(int(x) for x in row): int(c) for row, c in zip(exps, coefs)}
            elements.append(Polynomial(self.ring, terms, _clean=True))
        elements.sort(key=lambda f: self.order.key(f.leading_monomial(self.order)))
        bound = None if complete else self.max_degree
        return GroebnerBasis(self.ring, elements, self.order, True, complete, bound,
                             tuple(int(w) for w in self.weights), self.stats)


# ---------------------------------------------------------------------------
# Sparse engine


def _sparse_buchberger(ideal: Ideal, order: MonomialOrder) -> GroebnerBasis:
    t0 = time.perf_counter()
    ring = ideal.ring
    p = ring.p
    stats = GroebnerStats(strategy="sparse-sugar")
    key = order.key
    polys: list[dict] = []
    leads: list[Exponents] = []
    sugar: list[int] = []
    pairs = _PairSet(ring.nvars, None, stats)

    def add(terms: dict, s: int):
        lead = max(terms, key=key)
        inv = pow(terms[lead], -1, p)
        polys.append({e: c * inv % p for e, c in terms.items()})
        leads.append(lead)
        sugar.append(s)
        pairs.add(lead)

    def current_basis():
        return [(leads[i], polys[i]) for i in np.flatnonzero(pairs.active)]

    for g in sorted(ideal.generators, key=lambda f: (f.degree(), key(f.leading_monomial(order)))):
        rem = _dict_normal_form(g._terms, current_basis(), order, p)
        if rem:
            add(rem, g.degree())
    while True:
        idx = pairs.pending()
        if not len(idx):
            break

        def pair_key(k):
            i, j = int(pairs.pi[k]), int(pairs.pj[k])
            L = tuple(int(x) for x in pairs.plcm[k])
            s = max(sugar[i] + sum(L) - sum(leads[i]), sugar[j] + sum(L) - sum(leads[j]))
            return (s, key(L), i, j)

        k = min(idx, key=pair_key)
        s = pair_key(k)[0]
        pairs.alive[k] = False
        i, j = int(pairs.pi[k]), int(pairs.pj[k])
        L = tuple(int(x) for x in pairs.plcm[k])
        spoly: dict = {}
        for gid, sign in ((i, 1), (j, -1)):
            q = mono_div(L, leads[gid])
            for e, c in polys[gid].items():
                m = tuple(a + b for a, b in zip(e, q))
                val = (spoly.get(m, 0) + sign * c) % p
                if val:
                    spoly[m] = val
                else:
                    spoly.pop(m, None)
        stats.pairs_reduced += 1
        rem = _dict_normal_form(spoly, current_basis(), order, p)
        if rem:
            add(rem, s)
            stats.max_degree_reached = max(stats.max_degree_reached, s)
        else:
            stats.zero_reductions += 1
    # minimal and reduced
    act = [int(i) for i in np.flatnonzero(pairs.active)]
    minimal = [i for i in act if not any(j != i and mono_divides(leads[j], leads[i]) for j in act)]
    final = []
    for i in minimal:
        others = [(leads[j], polys[j]) for j in minimal if j != i]
        tail = {e: c for e, c in polys[i].items() if e != leads[i]}
        rem = _dict_normal_form(tail, others, order, p)
        rem[leads[i]] = 1
        final.append(Polynomial(ring, rem, _clean=True))
    final.sort(key=lambda f: key(f.leading_monomial(order)))
    stats.seconds = time.perf_counter() - t0
    return GroebnerBasis(ring, final, order, True, True, None, None, stats)


# ---------------------------------------------------------------------------
# Public entry points


def _detect_weights(ideal: Ideal) -> tuple[int, ...] | None:
    ones = (1,) * ideal.nvars
    return ones if ideal.is_homogeneous() else None


def buchberger(
    ideal: Ideal,
    order: MonomialOrder | None = None,
    *,
    weights: Sequence[int] | None = None,
    max_degree: int | None = None,
    engine: str = "auto",
) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal``.

    ``weights`` names a positive grading for which every generator is
    homogeneous (standard grading is detected automatically); such ideals
    go to the graded engine, which also supports ``max_degree`` truncation.
    """
    order = order or ideal.ring.order
    if not ideal.generators:
        return GroebnerBasis(ideal.ring, [], order, True, True, None, None, GroebnerStats(strategy="trivial"))
    if weights is not None:
        if len(weights) != ideal.nvars or any(w <= 0 for w in weights):
            raise ValueError("weights must be positive, one per variable")
        if not ideal.is_homogeneous(weights):
            raise ValueError("ideal is not homogeneous for the given weights")
        weights = tuple(int(w) for w in weights)
    elif engine != "sparse":
        weights = _detect_weights(ideal)
    if engine == "sparse" or weights is None:
        if max_degree is not None:
            raise ValueError("degree truncation needs a homogeneous ideal")
        if engine == "graded":
            raise ValueError("graded engine needs a homogeneous ideal")
        gb = _sparse_buchberger(ideal, order)
    else:
        gb = _GradedBuchberger(ideal.ring, order, weights, max_degree).run(list(ideal.generators))
    log.debug("groebner basis: %d elements, %s, %.2fs", len(gb.elements), gb.stats.strategy, gb.stats.seconds)
    return gb


def eliminate(ideal: Ideal, k: int, *, weights: Sequence[int] | None = None,
              max_degree: int | None = None) -> Ideal:
    """Generators of the ideal intersected with the subring of the last
    nvars - k variables: the reduced grevlex basis of that intersection."""
    ring = ideal.ring
    if not 0 <= k <= ring.nvars:
        raise ValueError("invalid number of variables to eliminate")
    target = Ring(ring.nvars - k, ring.field, ring.names[k:], GREVLEX)
    if not ideal.generators:
        return Ideal(target, [])
    gb = buchberger(ideal, block_order(k), weights=weights, max_degree=max_degree)
    out = []
    for g in gb.elements:
        if all(not any(e[:k]) for e in g._terms):
            out.append(Polynomial(target, {e[k:]: c for e, c in g._terms.items()}, _clean=True))
    out.sort(key=lambda f: GREVLEX.key(f.leading_monomial(GREVLEX)))
    return Ideal(target, out)


def minimalize_monomials(monos: Iterable[Sequence[int]]) -> list[Exponents]:
    """Divisibility-minimal subset, sorted by degree then exponents."""
    uniq = sorted({tuple(m) for m in monos}, key=lambda e: (sum(e), e))
    out: list[Exponents] = []
    for m in uniq:
        if not any(mono_divides(q, m) for q in out):
            out.append(m)
    return out


def leading_term_ideal(G: GroebnerBasis) -> list[Monomial]:
    return [Monomial(m) for m in minimalize_monomials(G.leading_monomials())]


# ---------------------------------------------------------------------------
# Ideal files


def format_ideal(ideal: Ideal | GroebnerBasis) -> str:
    ring = ideal.ring
    gens = ideal.generators if isinstance(ideal, Ideal) else ideal.elements
    header = f"ring {ring.nvars} {ring.p}"
    if tuple(ring.names) != default_names(ring.nvars):
        header += " " + " ".join(ring.names)
    return "\n".join([header] + [g.to_text(ring.order) for g in gens]) + "\n"


def parse_ideal(text: str) -> Ideal:
    ring = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ring is None:
            parts = line.split()
            if len(parts) < 3 or parts[0] != "ring":
                raise ParseError("expected header 'ring <nvars> <p>'", lineno)
            try:
                nvars, p = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("ring size and prime must be integers", lineno) from None
            names = tuple(parts[3:]) or None
            if nvars < 1:
                raise ParseError("ring needs at least one variable", lineno)
            if names is not None and len(names) != nvars:
                raise ParseError("wrong number of variable names", lineno)
            try:
                ring = Ring(nvars, PrimeField(p), names)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            continue
        try:
            gens.append(ring.parse(line))
        except ParseError as exc:
            raise ParseError(str(exc), lineno) from None
    if ring is None:
        raise ParseError("missing ring header", 1)
    return Ideal(ring, gens)


def read_ideal(path: str | Path) -> Ideal:
    return parse_ideal(Path(path).read_text())


def write_ideal(ideal: Ideal | GroebnerBasis, path: str | Path) -> None:
    Path(path).write_text(format_ideal(ideal))
