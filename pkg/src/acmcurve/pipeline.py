"""End-to-end construction of the degree-19 genus-12 curve in P^7 and the
verification report.

Stages run cheapest first; the first failing check stops the run and every
later check is reported as skipped.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from . import __version__
from .arith import DEFAULT_PRIME, FieldSampler, PrimeField, is_prime
from .bounds import CurveClass, closing_bounds_report, h0_ideal
from .errors import AcmCurveError, NonIsolatedSingularityError
from .fatpoints import (
    FatPoint,
    intersection_degree,
    linear_system,
    plane_ring,
    random_general_points,
    random_member,
    singular_scheme_degree,
)
from .hilbert import hilbert_function_rank, series_to_function
from .image import (
    ProjectiveMap,
    curve_invariants,
    degree3_defect,
    image_ideal_full,
    image_ideal_truncated,
    minimal_generators_by_degree,
    quadric_subscheme,
    same_degree_part,
    substitution_check,
)

log = logging.getLogger(__name__)

SCHEMA = "acmcurve.report/1"
RNG_NAME = "PCG64/SeedSequence, raw 64-bit words with rejection"
MAX_DEGREE_IN_PLAY = 21

# (multiplicity, count) for the three groups of base points
NONIC_MULTS = [3] * 3 + [2] * 7 + [1] * 12
SEPTIC_MULTS = [2] * 3 + [1] * 19

EXPECTED = {
    "fat_point_system_dimension": 4,
    "linear_system_dimension": 8,
    "singular_scheme_degree": 19,
    "intersection_degree": 19,
    "map_rank": 8,
    "backend_agreement": True,
    "substitution_check": True,
    "generator_profile": {"2": 9, "3": 2},
    "profile_certified": True,
    "hilbert_series": "(1 + 6t + 12t^2)/(1-t)^2",
    "curve_invariants": [19, 12],
    "hilbert_function_rank_agreement": True,
    "quadric_subscheme_invariants": [1, 19, 12],
    "scheme_cut_out": True,
    "degree3_defect": 2,
    "linear_normality": 8,
    "quadratic_normality": 9,
}

# stage owning each check, in report order
CHECK_STAGES = [
    ("fat_point_system_dimension", "points"),
    ("singular_scheme_degree", "plane_curve"),
    ("linear_system_dimension", "linear_system"),
    ("intersection_degree", "linear_system"),
    ("map_rank", "linear_system"),
    ("backend_agreement", "image"),
    ("substitution_check", "image"),
    ("generator_profile", "generators"),
    ("profile_certified", "generators"),
    ("hilbert_series", "hilbert"),
    ("curve_invariants", "hilbert"),
    ("hilbert_function_rank_agreement", "hilbert"),
    ("quadric_subscheme_invariants", "quadrics"),
    ("scheme_cut_out", "quadrics"),
    ("degree3_defect", "defect"),
    ("linear_normality", "normality"),
    ("quadratic_normality", "normality"),
]

SMOOTHNESS_NOTE = (
    "certified by construction: singular scheme of the plane model has degree exactly 19, "
    "and the curve is the image of its normalization under a base-point-free system on the blow-up"
)


@dataclass
class PipelineConfig:
    seed: int = 1
    p: int | None = None
    normalize: bool = True
    budget: int = 20
    format: str = "text"
    out: str | None = None
    threads: int = 1
    prime_source: str = field(default="", repr=False)

    def __post_init__(self):
        if self.p is None:
            env = os.environ.get("ACMCURVE_PRIME")
            self.p = int(env) if env else DEFAULT_PRIME
            self.prime_source = "env" if env else "default"
        elif not self.prime_source:
            self.prime_source = "explicit"
        self.validate()

    def validate(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p <= MAX_DEGREE_IN_PLAY:
            raise ValueError(f"prime must exceed {MAX_DEGREE_IN_PLAY} (largest degree in play)")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.format not in ("text", "json"):
            raise ValueError("format must be text or json")

    def echo(self) -> dict:
        return {
            "seed": self.seed,
            "prime": self.p,
            "prime_source": self.prime_source,
            "normalize": self.normalize,
            "budget": self.budget,
        }


@dataclass
class Check:
    name: str
    stage: str
    expected: Any
    observed: Any = None
    status: str = "skipped"

    def as_dict(self) -> dict:
        return {"name": self.name, "stage": self.stage, "expected": self.expected,
                "observed": self.observed, "status": self.status}


@dataclass
class VerificationReport:
    config: dict
    points: list[str] = field(default_factory=list)
    retries: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    annotations: dict = field(default_factory=dict)
    failure: dict | None = None
    timings: dict = field(default_factory=dict)
    threads: int = 1

    @property
    def verdict(self) -> str:
        return "pass" if self.checks and all(c.status == "pass" for c in self.checks) else "fail"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def content(self) -> dict:
        """Everything the hash covers: no timings, no thread count."""
        return {
            "schema": SCHEMA,
            "version": __version__,
            "config": self.config,
            "rng": RNG_NAME,
            "points": self.points,
            "retries": self.retries,
            "values": self.values,
            "checks": [c.as_dict() for c in self.checks],
            "annotations": self.annotations,
            "failure": self.failure,
            "verdict": self.verdict,
        }

    @property
    def hash(self) -> str:
        blob = json.dumps(self.content(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def as_dict(self) -> dict:
        out = self.content()
        out["hash"] = self.hash
        out["timings"] = self.timings
        out["threads"] = self.threads
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        rep = cls(
            config=data["config"],
            points=list(data["points"]),
            retries=dict(data["retries"]),
            values=dict(data["values"]),
            checks=[Check(**c) for c in data["checks"]],
            annotations=dict(data["annotations"]),
            failure=data["failure"],
            timings=dict(data.get("timings", {})),
            threads=data.get("threads", 1),
        )
        if "hash" in data and data["hash"] != rep.hash:
            raise ValueError("report hash does not match its content")
        return rep


def report_serialize(rep: VerificationReport, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(rep.as_dict(), indent=2) + "\n").encode()
    if fmt == "text":
        return render_text(rep).encode()
    raise ValueError(f"unknown format {fmt!r}")


def report_parse(data: bytes | str) -> VerificationReport:
    return VerificationReport.from_dict(json.loads(data))


def _fmt(v: Any) -> str:
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {x}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "(" + ", ".join(str(x) for x in v) + ")"
    return str(v)


def render_text(rep: VerificationReport) -> str:
    c = rep.config
    v = rep.values
    lines = [
        f"acmcurve {__version__} verification report",
        f"seed {c['seed']}  prime {c['prime']} ({c['prime_source']})  normalize {c['normalize']}  budget {c['budget']}",
        f"rng: {RNG_NAME}",
        f"retries: points {rep.retries.get('points', 0)}, plane curve {rep.retries.get('plane_curve', 0)}",
        "",
    ]
    if "hilbert_series" in v:
        lines.append(f"Hilbert series: {v['hilbert_series']}")
    if "curve_invariants" in v:
        d, g = v["curve_invariants"]
        lines.append(f"degree {d}, genus {g}")
    lines.append("")
    width = max(len(ch.name) for ch in rep.checks) if rep.checks else 10
    lines.append(f"{'check':<{width}}  {'status':<7}  {'expected':<26}  observed")
    for ch in rep.checks:
        obs = "-" if ch.status == "skipped" else _fmt(ch.observed)
        lines.append(f"{ch.name:<{width}}  {ch.status:<7}  {_fmt(ch.expected):<26}  {obs}")
    lines.append("")
    if rep.failure:
        lines.append(f"failed at stage {rep.failure['stage']}: {rep.failure['message']}")
    for k, note in rep.annotations.items():
        lines.append(f"{k}: {_fmt(note)}")
    if rep.timings:
        lines.append("timings: " + ", ".join(f"{k} {t:.2f}s" for k, t in rep.timings.items()))
    lines.append(f"report hash: {rep.hash}")
    lines.append(f"verdict: {rep.verdict.upper()}")
    return "\n".join(lines) + "\n"


class _StageFailure(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage


class _Run:
    def __init__(self, cfg: PipelineConfig):
        self.cfg = cfg
        self.field = PrimeField(cfg.p)
        self.rep = VerificationReport(
            config=cfg.echo(),
            checks=[Check(n, s, EXPECTED[n]) for n, s in CHECK_STAGES],
            threads=cfg.threads,
        )
        self.rep.retries = {"points": 0, "plane_curve": 0}
        self.rng = FieldSampler(cfg.seed, cfg.p)

    def record(self, name: str, observed: Any) -> None:
        ch = self.rep.check(name)
        ch.observed = observed
        ch.status = "pass" if observed == ch.expected else "fail"
        self.rep.values[name] = observed
        if ch.status == "fail":
            raise _StageFailure(ch.stage, f"{name}: expected {_fmt(ch.expected)}, observed {_fmt(observed)}")

    def timed(self, stage: str, fn: Callable[[], Any]) -> Any:
        t0 = time.perf_counter()
        try:
            return fn()
        except _StageFailure:
            raise
        except AcmCurveError as exc:
            raise _StageFailure(getattr(exc, "stage", None) or stage, str(exc)) from exc
        finally:
            self.rep.timings[stage] = round(time.perf_counter() - t0, 4)
            log.info("stage %s: %.2fs", stage, self.rep.timings[stage])

    # stages

    def points(self):
        pts, rejected = random_general_points(
            22, self.rng.child(0), self.field, normalize=self.cfg.normalize,
            systems=[(9, NONIC_MULTS), (7, SEPTIC_MULTS)], budget=self.cfg.budget,
        )
        self.rep.retries["points"] = rejected
        self.rep.points = [str(p) for p in pts]
        self.pts = pts
        self.ring = plane_ring(self.field)
        self.nonics = linear_system(9, [FatPoint(p, m) for p, m in zip(pts, NONIC_MULTS)], self.ring)
        self.record("fat_point_system_dimension", self.nonics.dimension)

    def plane_curve(self):
        rng = self.rng.child(1)
        observed = None
        for attempt in range(self.cfg.budget):
            f = random_member(self.nonics, rng)
            try:
                observed = singular_scheme_degree(f)
            except NonIsolatedSingularityError:
                observed = None
            if observed == EXPECTED["singular_scheme_degree"]:
                self.rep.retries["plane_curve"] = attempt
                self.curve = f
                self.record("singular_scheme_degree", observed)
                return
        # budget exhausted: the last observation is the recorded failure
        self.rep.retries["plane_curve"] = self.cfg.budget
        self.record("singular_scheme_degree", observed)

    def linear_system(self):
        self.septics = linear_system(7, [FatPoint(p, m) for p, m in zip(self.pts, SEPTIC_MULTS)], self.ring)
        self.record("linear_system_dimension", self.septics.dimension)
        self.record("intersection_degree", intersection_degree(7, 9, SEPTIC_MULTS, NONIC_MULTS))
        self.phi = ProjectiveMap(self.septics.basis, (self.curve,))
        self.record("map_rank", self.phi.rank())

    def image(self):
        t0 = time.perf_counter()
        self.ideal = image_ideal_full(self.phi)
        self.rep.timings["elimination"] = round(time.perf_counter() - t0, 4)
        self.trunc = {k: image_ideal_truncated(self.phi, k) for k in (1, 2, 3)}
        agree = not self.trunc[1] and all(
            same_degree_part(self.trunc[k], self.ideal.generators, self.ideal.ring, k) for k in (2, 3)
        )
        self.record("backend_agreement", agree)
        self.record("substitution_check", substitution_check(self.ideal, self.phi, self.cfg.threads))
        self.rep.values["truncated_kernel_dimensions"] = {str(k): len(v) for k, v in self.trunc.items()}

    def generators(self):
        prof = minimal_generators_by_degree(self.ideal, certify=True)
        self.profile = prof
        self.record("generator_profile", prof.as_dict())
        self.record("profile_certified", prof.certified)

    def hilbert(self):
        hs, info = curve_invariants(self.ideal)
        self.rep.values["hilbert_numerator"] = list(hs.numerator)
        self.record("hilbert_series", str(hs))
        self.record("curve_invariants", [info.degree, info.genus])
        self.rep.values["hilbert_function"] = [series_to_function(hs, n) for n in range(7)]
        rank_side = [hilbert_function_rank(self.ideal, n) for n in range(7)]
        self.record("hilbert_function_rank_agreement", rank_side == self.rep.values["hilbert_function"])

    def quadrics(self):
        q = quadric_subscheme(self.ideal)
        self.rep.timings["groebner_quadrics"] = round(q.seconds, 4)
        self.rep.values["quadric_gb_size"] = q.basis_size
        self.rep.values["groebner_strategy"] = q.stats["strategy"]
        self.rep.values["quadric_series"] = str(q.series)
        self.record("quadric_subscheme_invariants", list(q.invariants.as_tuple()))
        curve = self.rep.values["curve_invariants"]
        self.record("scheme_cut_out", [q.invariants.dimension, q.invariants.degree, q.invariants.genus] == [1] + curve)

    def defect(self):
        self.record("degree3_defect", degree3_defect(self.ideal))

    def normality(self):
        cls = CurveClass(7, 12)
        self.rep.values["h0_ideal_riemann_roch"] = {str(k): h0_ideal(cls, k) for k in (1, 2, 3)}
        self.record("linear_normality", 8 - len(self.trunc[1]))
        q2 = len(self.trunc[2])
        if q2 != h0_ideal(cls, 2):
            raise _StageFailure("normality", "quadric count disagrees with Riemann-Roch")
        self.record("quadratic_normality", q2)

    def run(self) -> VerificationReport:
        stages = ["points", "plane_curve", "linear_system", "image", "generators",
                  "hilbert", "quadrics", "defect", "normality"]
        t0 = time.perf_counter()
        try:
            for stage in stages:
                self.timed(stage, getattr(self, stage))
        except _StageFailure as exc:
            self.rep.failure = {"stage": exc.stage, "message": str(exc)}
            log.warning("verification failed at %s: %s", exc.stage, exc)
        self.rep.timings["total"] = round(time.perf_counter() - t0, 4)
        d, g = self.rep.values.get("curve_invariants", [19, 12])
        self.rep.annotations = {
            "smoothness": SMOOTHNESS_NOTE,
            "closing_bounds": closing_bounds_report(g, d),
            "characteristic": f"outcomes recorded for p={self.cfg.p} only",
        }
        return self.rep


def run_verification(cfg: PipelineConfig) -> VerificationReport:
    return _Run(cfg).run()


def write_report(rep: VerificationReport, fmt: str, out: str | None) -> bytes:
    data = report_serialize(rep, fmt)
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    return data
