from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest

from acmcurve.bounds import (
    CurveClass,
    acm_degree_bound,
    candidate_scan,
    classical_bounds,
    closing_bounds_report,
    format_scan,
    g_lower,
    g_upper,
    h0_ideal,
    h0_ideal_signed,
    inequality_one,
    quadric_count,
    r_quadrics_genus,
    r_quadrics_value,
)


def test_curve_class():
    assert CurveClass(7, 12).d == 19
    with pytest.raises(ValueError):
        CurveClass(7, 12, 20)
    assert CurveClass(7, 12, 25, nonspecial=False).d == 25


def test_h0_examples():
    c = CurveClass(7, 12)
    assert [h0_ideal(c, k) for k in (1, 2, 3)] == [0, 9, 74]


def test_h0_is_clamped():
    c = CurveClass(3, 5)
    assert h0_ideal_signed(c, 2) == -2 and h0_ideal(c, 2) == 0


def test_quadric_count_examples():
    assert quadric_count(7, 12) == 9
    assert quadric_count(5, 6) == 4 == 5 - 1
    assert quadric_count(3, 0) == 3


def test_g_bounds_examples():
    assert [g_lower(r) for r in (7, 6, 3)] == [12, 9, 2]
    assert [g_upper(r) for r in (7, 6, 5)] == [13, 8, 4]
    with pytest.raises(ValueError):
        g_lower(2)


def test_r_quadrics_examples():
    assert r_quadrics_genus(6, 15) is None and r_quadrics_value(6, 15) == Fraction(13, 2)
    assert r_quadrics_genus(7, 19) is None and r_quadrics_value(7, 19) == -6
    assert r_quadrics_genus(5, 8) == 1


def test_equivalence_of_inequalities():
    # (r+1) h0(I(2)) < h0(I(3)) exactly when 3g > r(r-2), on unclamped counts
    for r in range(3, 61):
        for g in range(0, 501):
            c = CurveClass(r, g)
            assert inequality_one(c) == (3 * g > r * (r - 2)), (r, g)
            if g <= comb(r, 2):
                # clamping only matters once the quadric count goes negative
                clamped = (r + 1) * h0_ideal(c, 2) < h0_ideal(c, 3)
                assert clamped == inequality_one(c), (r, g)


def test_two_routes_to_quadric_count():
    for r in range(3, 61):
        for g in range(0, comb(r, 2) + 1):
            assert quadric_count(r, g) == h0_ideal(CurveClass(r, g), 2)


def test_scan():
    rows = {w.r: w for w in candidate_scan(3, 7)}
    for r in (3, 4, 5, 6):
        assert rows[r].empty
    assert rows[6].escape.applicable and rows[6].escape.d == 15 and not rows[6].escape.holds
    assert rows[7].candidates == [(12, 19), (13, 20)]
    assert candidate_scan(7, 7)[0].candidates == [(12, 19), (13, 20)]
    assert all(w.empty for w in candidate_scan(3, 5))
    assert "separate classification" in rows[5].note
    with pytest.raises(ValueError):
        candidate_scan(2, 4)


def test_scan_window_invariant():
    for w in candidate_scan(3, 40):
        if w.candidates:
            assert w.g_min <= w.g_max or w.escape.holds
        for g, d in w.candidates:
            assert d == g + w.r


def test_scan_text():
    text = format_scan(candidate_scan(3, 7))
    assert "(12,19), (13,20)" in text and "13/2" in text


def test_acm_degree_bound():
    assert acm_degree_bound(0) == 1
    assert acm_degree_bound(3) == 6
    assert acm_degree_bound(12) == 18
    for g in range(0, 2000):
        d = acm_degree_bound(g)

        # exact: d is the least integer with 2d - 2g - 1 >= sqrt(8g + 1)
        def ok(x):
            return 2 * x - 2 * g - 1 >= 0 and (2 * x - 2 * g - 1) ** 2 >= 8 * g + 1

        assert ok(d) and not ok(d - 1)


def test_classical_bounds():
    assert classical_bounds(12) == (20, 21)
    assert classical_bounds(0) == (2, 3)
    assert classical_bounds(1) == (3, 4)
    rep = closing_bounds_report(12, 19)
    assert rep["below_quadric_bound"] and "not sharp" in rep["note"]
    assert rep["acm_degree_bound"] == 18
