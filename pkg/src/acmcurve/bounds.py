"""Exact integer calculators for the numerical constraints on nonspecial ACM
curves whose ideals are not generated by quadrics, and the scanner that
locates the admissible (r, g, d).

Everything here is integer or rational arithmetic; no floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt


@dataclass(frozen=True)
class CurveClass:
    r: int
    g: int
    d: int | None = None
    nonspecial: bool = True

    def __post_init__(self):
        if self.r < 1 or self.g < 0:
            raise ValueError("need r >= 1 and g >= 0")
        if self.d is None:
            object.__setattr__(self, "d", self.g + self.r)
        if self.nonspecial and self.d != self.g + self.r:
            raise ValueError("a nonspecial embedding has d = g + r")


def h0_ideal_signed(c: CurveClass, k: int) -> int:
    """C(r+k, k) - (k d + 1 - g), without clamping."""
    if k < 1:
        raise ValueError("k must be positive")
    if not c.nonspecial:
        raise ValueError("only nonspecial curves are supported")
    return comb(c.r + k, k) - (k * c.d + 1 - c.g)


def h0_ideal(c: CurveClass, k: int) -> int:
    """Forms of degree k vanishing on an ACM nonspecial curve."""
    return max(h0_ideal_signed(c, k), 0)


def inequality_one(c: CurveClass) -> bool:
    """(r+1) h0(I(2)) < h0(I(3)): the quadric multiples cannot fill I(3).
    Uses the unclamped counts, which is where the Riemann-Roch reduction
    to a bound on g lives."""
    return (c.r + 1) * h0_ideal_signed(c, 2) < h0_ideal_signed(c, 3)


def quadric_count(r: int, g: int) -> int:
    return comb(r, 2) - g


def g_lower(r: int) -> int:
    """Least g with 3g > r(r-2)."""
    if r < 3:
        raise ValueError("r must be at least 3")
    return r * (r - 2) // 3 + 1


def g_upper(r: int) -> int:
    if r < 3:
        raise ValueError("r must be at least 3")
    return (r * r - 3 * r - 2) // 2


def r_quadrics_value(r: int, d: int) -> Fraction:
    return Fraction((r - 1) * d, 2) + 1 - 2 ** (r - 1)


def r_quadrics_genus(r: int, d: int) -> int | None:
    """Genus forced when the curve is cut out by exactly r quadrics, or
    None when that value is not a nonnegative integer."""
    if r < 2 or d < 1:
        raise ValueError("need r >= 2 and d >= 1")
    v = r_quadrics_value(r, d)
    if v.denominator != 1 or v < 0:
        return None
    return int(v)


@dataclass(frozen=True)
class EscapeCheck:
    """The single case the upper bound does not cover: exactly r quadrics."""

    g: int
    d: int
    value: Fraction
    applicable: bool
    holds: bool

    def as_dict(self) -> dict:
        return {
            "g": self.g,
            "d": self.d,
            "value": str(self.value),
            "integral": self.value.denominator == 1,
            "applicable": self.applicable,
            "holds": self.holds,
        }


@dataclass
class CandidateWindow:
    r: int
    g_min: int
    g_max: int
    escape: EscapeCheck
    candidates: list[tuple[int, int]] = field(default_factory=list)
    note: str = ""

    @property
    def empty(self) -> bool:
        return not self.candidates

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "g_min": self.g_min,
            "g_max": self.g_max,
            "escape": self.escape.as_dict(),
            "candidates": [list(c) for c in self.candidates],
            "note": self.note,
        }


def _escape(r: int, gmin: int) -> EscapeCheck:
    g = quadric_count(r, 0) - r
    d = g + r
    value = r_quadrics_value(r, d)
    applicable = g >= gmin
    return EscapeCheck(g, d, value, applicable, applicable and value == g)


def scan_one(r: int) -> CandidateWindow:
    lo, hi = g_lower(r), g_upper(r)
    cands = [(g, g + r) for g in range(lo, hi + 1)]
    esc = _escape(r, lo)
    if esc.holds and (esc.g, esc.d) not in cands:
        cands.append((esc.g, esc.d))
        cands.sort()
    if cands:
        note = f"window g in [{lo}, {hi}]"
    elif esc.applicable:
        note = f"range empty; exactly-{r}-quadrics case fails at d={esc.d} (value {esc.value})"
    else:
        note = "range empty"
    if r <= 5:
        note += "; the full r <= 5 exclusion relies on a separate classification, not only these bounds"
    return CandidateWindow(r, lo, hi, esc, cands, note)


def candidate_scan(r_min: int, r_max: int) -> list[CandidateWindow]:
    if not 3 <= r_min <= r_max:
        raise ValueError("need 3 <= r_min <= r_max")
    return [scan_one(r) for r in range(r_min, r_max + 1)]


def acm_degree_bound(g: int) -> int:
    """Least integer d with 2d >= 2g + 1 + sqrt(8g + 1)."""
    if g < 0:
        raise ValueError("g must be nonnegative")
    disc = 8 * g + 1
    root = isqrt(disc)
    exact = root * root == disc
    # ceil(sqrt(disc)) when inexact
    s = root if exact else root + 1
    return -(-(2 * g + 1 + s) // 2)


def classical_bounds(g: int) -> tuple[int, int]:
    if g < 0:
        raise ValueError("g must be nonnegative")
    return ((3 * g + 4) // 2, (3 * g + 6) // 2)


def closing_bounds_report(g: int, d: int) -> dict:
    """Compare an observed (g, d) with the classical degree thresholds."""
    a, b = classical_bounds(g)
    acm = acm_degree_bound(g)
    return {
        "g": g,
        "d": d,
        "classical_bounds": [a, b],
        "acm_degree_bound": acm,
        "below_quadric_bound": d < b,
        "note": f"d={d} < {b}: bound not sharp" if d < b else f"d={d} >= {b}",
    }


def format_scan(rows: list[CandidateWindow]) -> str:
    lines = [f"{'r':>3} {'g_min':>6} {'g_max':>6}  {'escape (g,d): value':<24} candidates"]
    for w in rows:
        e = w.escape
        esc = f"({e.g},{e.d}): {e.value}" + ("" if e.applicable else " n/a")
        cands = ", ".join(f"({g},{d})" for g, d in w.candidates) or "empty"
        lines.append(f"{w.r:>3} {w.g_min:>6} {w.g_max:>6}  {esc:<24} {cands}")
    for w in rows:
        lines.append(f"r={w.r}: {w.note}")
    return "\n".join(lines) + "\n"
