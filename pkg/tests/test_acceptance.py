"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

The lines are printed as they are produced and collected again in the
"acceptance criteria" section of the pytest terminal summary."""

from __future__ import annotations

import contextlib
import io
import json
import os
import random
import time

import pytest
import test_arith
import test_groebner
from _util import certify_basis
from conftest import ACCEPTANCE_LINES, ACCEPTANCE_SEEDS, rational_normal_map
from hypothesis import given, settings
from hypothesis import strategies as st

from acmcurve.bounds import acm_degree_bound, classical_bounds, closing_bounds_report
from acmcurve.cli import main
from acmcurve.groebner import Ideal, buchberger
from acmcurve.hilbert import hilbert_function_rank, hilbert_series, series_to_function
from acmcurve.image import (
    ProjectiveMap,
    curve_invariants,
    degree3_defect,
    elimination_ideal,
    image_ideal_full,
    image_ideal_truncated,
    minimal_generators_by_degree,
    quadric_ideal,
    same_degree_part,
)
from acmcurve.pipeline import EXPECTED, PipelineConfig, run_verification
from acmcurve.poly import block_order

P = 31991


@contextlib.contextmanager
def criterion(n: int, title: str):
    """Record one PASS/FAIL line for criterion n; details are appended via
    the yielded list."""
    details: list[str] = []
    try:
        yield details
    except BaseException as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        _emit(n, f"ACCEPTANCE {n} FAIL: {title}: {msg}")
        raise
    _emit(n, f"ACCEPTANCE {n} PASS: {title}" + (f" ({'; '.join(details)})" if details else ""))


def _emit(n: int, line: str) -> None:
    ACCEPTANCE_LINES[n] = line
    print(line)


def _reparametrised(n: int, a: int, b: int, c: int, d: int) -> ProjectiveMap:
    """Rational normal curve of degree n composed with (s,t) -> (as+bt, cs+dt)."""
    base = rational_normal_map(n)
    s, t = base.source.gens()
    u, v = a * s + b * t, c * s + d * t
    return ProjectiveMap(tuple(u ** (n - i) * v**i for i in range(n + 1)))


RATIONAL_ORACLES = {3: ({2: 3}, (3, 0)), 4: ({2: 6}, (4, 0))}


def _oracle_check(phi: ProjectiveMap, n: int) -> None:
    profile, invariants = RATIONAL_ORACLES[n]
    full = image_ideal_full(phi)
    for k in (2, 3):
        assert same_degree_part(image_ideal_truncated(phi, k), full.generators, full.ring, k), (n, k)
    assert minimal_generators_by_degree(full).counts == profile
    _, info = curve_invariants(full)
    assert (info.degree, info.genus) == invariants
    assert degree3_defect(full) == 0


def test_criterion_1_five_seeds(seed_reports):
    with criterion(1, "five seeds at p=31991 reproduce every recorded value") as out:
        assert tuple(seed_reports) == ACCEPTANCE_SEEDS
        for seed, rep in seed_reports.items():
            assert rep.config["prime"] == P
            assert rep.passed, f"seed {seed}: {rep.failure}"
            for name, value in EXPECTED.items():
                assert rep.values[name] == value, f"seed {seed}: {name}"
            assert rep.timings["total"] <= 600, f"seed {seed} took {rep.timings['total']}s"
            assert "groebner_quadrics" in rep.timings
            out.append(f"seed {seed}: {rep.timings['total']:.1f}s total, "
                       f"elimination {rep.timings['elimination']:.1f}s, "
                       f"groebner {rep.timings['groebner_quadrics']:.2f}s")


def test_criterion_2_scan_bounds():
    with criterion(2, "scan-bounds 3 7") as out:
        buf = io.StringIO()
        t0 = time.perf_counter()
        with contextlib.redirect_stdout(buf):
            assert main(["scan-bounds", "3", "7", "--format", "json"]) == 0
        elapsed = time.perf_counter() - t0
        rows = {r["r"]: r for r in json.loads(buf.getvalue())}
        assert rows[5]["candidates"] == []
        assert rows[6]["candidates"] == []
        esc = rows[6]["escape"]
        assert esc["applicable"] and esc["d"] == 15 and not esc["holds"]
        assert rows[7]["candidates"] == [[12, 19], [13, 20]]
        assert elapsed < 1.0, f"{elapsed:.3f}s"
        out.append(f"{elapsed * 1000:.1f} ms")


def test_criterion_3_closing_bounds():
    with criterion(3, "closing bounds") as out:
        t0 = time.perf_counter()
        assert classical_bounds(12) == (20, 21)
        rep = closing_bounds_report(12, 19)
        assert rep["classical_bounds"] == [20, 21] and rep["acm_degree_bound"] == 18
        assert "19 < 21" in rep["note"] and "not sharp" in rep["note"]
        assert acm_degree_bound(3) == 6
        assert acm_degree_bound(12) == 18
        elapsed = time.perf_counter() - t0
        assert elapsed < 1.0, f"{elapsed:.3f}s"
        out.append(f"{elapsed * 1000:.2f} ms")


def test_criterion_4_rational_oracles():
    with criterion(4, "oracle checks against the truncated-kernel back-end") as out:
        units = st.integers(1, P - 1)

        @settings(max_examples=6, deadline=None, database=None)
        @given(st.sampled_from([3, 4]), units, st.integers(0, P - 1), st.integers(0, P - 1), units)
        def run(n, a, b, c, d):
            if (a * d - b * c) % P == 0:
                d = (d + 1) % P or 1
            _oracle_check(_reparametrised(n, a, b, c, d), n)

        for n in (3, 4):
            _oracle_check(rational_normal_map(n), n)
        run()
        out.append("twisted cubic {2:3} (3,0) defect 0; quartic {2:6} (4,0) defect 0")


def test_criterion_5_hilbert_functions_agree(seed_runs):
    with criterion(5, "series and rank Hilbert functions agree for n <= 6") as out:
        ideals = {f"seed {s}": run.ideal for s, run in seed_runs.items()}
        for n in (3, 4):
            ideals[f"rational normal curve of degree {n}"] = image_ideal_full(rational_normal_map(n))
        for name, ideal in ideals.items():
            hs = hilbert_series(ideal)
            for k in range(7):
                assert series_to_function(hs, k) == hilbert_function_rank(ideal, k), (name, k)
        out.append(f"{len(ideals)} ideals")


def test_criterion_6_property_suites(seed1_run):
    with criterion(6, "property suites under one minute") as out:
        t0 = time.perf_counter()
        timings = {}

        def timed(name, fn):
            t = time.perf_counter()
            fn()
            timings[name] = time.perf_counter() - t

        timed("field axioms", test_arith.test_field_axioms_10k_triples)
        timed("rref", test_arith.test_rref_idempotent_and_canonical)
        timed("confluence", test_groebner.test_normal_form_confluence_1000_samples)
        timed("elimination", test_groebner.test_elimination_presentation_independence)

        def certificates():
            bases = [buchberger(ideal) for ideal in (_random_ideal(s) for s in range(20))]
            for n in (3, 4):
                phi = rational_normal_map(n)
                bases.append(buchberger(image_ideal_full(phi)))
                bases.append(_elimination_basis(phi))
            phi, ideal = seed1_run.phi, seed1_run.ideal
            bases += [buchberger(quadric_ideal(ideal)), buchberger(ideal), _elimination_basis(phi)]
            for gb in bases:
                assert certify_basis(gb), f"basis of size {len(gb.elements)}"

        timed("certificates", certificates)
        total = time.perf_counter() - t0
        assert total < 60, f"{total:.1f}s"
        out.append(", ".join(f"{k} {v:.1f}s" for k, v in timings.items()) + f"; total {total:.1f}s")


def _elimination_basis(phi: ProjectiveMap):
    src = phi.source
    weights = (1,) * src.nvars + (phi.degree,) * len(phi.forms)
    return buchberger(elimination_ideal(phi), block_order(src.nvars), weights=weights)


def _random_ideal(seed: int) -> Ideal:
    rng = random.Random(seed)
    ring = test_groebner.R4
    gens = [test_groebner.random_form(rng, ring, rng.choice([2, 3]), rng.randint(2, 5)) for _ in range(3)]
    return Ideal(ring, gens)


def test_criterion_7_hash_thread_independent(seed_reports):
    with criterion(7, "report hash identical across thread counts") as out:
        n = max(2, os.cpu_count() or 1)
        base = seed_reports[1]
        assert base.threads == 1
        rep = run_verification(PipelineConfig(seed=1, threads=n))
        assert rep.threads == n
        assert rep.hash == base.hash
        out.append(f"threads 1 and {n}: {rep.hash[:16]}")


@pytest.fixture(scope="module", autouse=True)
def _summary_banner():
    yield
    missing = [n for n in range(1, 8) if n not in ACCEPTANCE_LINES]
    for n in missing:
        _emit(n, f"ACCEPTANCE {n} NOT RUN")
