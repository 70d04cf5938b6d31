"""Randomized verification campaigns over Haar-random unitary pairs.

Each instance samples a pair, builds a protocol, simulates it, measures
the final states, and records how much slack the query-count bound and
the per-step distance audit have left. A correct toolkit never produces
a negative slack beyond numerical tolerance; any violation is reported
with the (seed, index) pair that reconstructs it exactly.

Per-instance randomness is drawn from ``numpy.random.default_rng([seed,
index])``, so records are independent of execution order.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .bounds import t_min_bounded
from .builder import SearchConfig, build_parallel, optimize_protocol, simulate_parallel
from .errors import UsageError, ValidationError
from .linalg import (
    DIM_CAP,
    haar_unitary_from_rng,
    random_state_from_rng,
    relative_spectrum,
)
from .geometry import smallest_arc
from .measurement import evaluate_povm, helstrom_povm, unambiguous_povm
from .protocol import Protocol, run_protocol, audit_step_slacks

PROTOCOL_SOURCES = ("random", "parallel", "optimized")

# A record violates the query-count bound when its slack drops below this.
THEOREM_SLACK_TOL = -1e-6
# A trace violates the step audit when any per-step slack drops below this.
LEMMA_SLACK_TOL = -1e-9
# The zero-query distance must vanish to this accuracy.
D0_TOL = 1e-12

# Column order of the CSV emitted by render_report/emit_report.
CSV_COLUMNS = (
    "index",
    "theta",
    "T",
    "overlap",
    "helstrom_error",
    "inconclusive",
    "bound_raw",
    "bound_t",
    "lemma2_min_slack",
    "theorem1_slack",
    "theorem1_slack_onesided",
)


@dataclass(frozen=True)
class CampaignConfig:
    instances: int
    dim: int
    t_range: tuple[int, int]
    seed: int
    protocol_source: str = "random"
    output_path: str | None = None

    def validate(self) -> None:
        if self.instances < 1:
            raise ValidationError("instances must be >= 1")
        if self.dim < 1:
            raise ValidationError("dim must be >= 1")
        lo, hi = self.t_range
        if lo > hi or lo < 0:
            raise ValidationError(f"t_range must be a nonempty interval of nonnegative"
                                  f" integers, got {self.t_range}")
        if self.protocol_source not in PROTOCOL_SOURCES:
            raise ValidationError(
                f"protocol_source must be one of {PROTOCOL_SOURCES}, got {self.protocol_source!r}"
            )
        if self.protocol_source == "parallel":
            if lo < 1:
                raise ValidationError("parallel protocols need at least one query")
            if self.dim**hi > DIM_CAP:
                raise ValidationError(
                    f"parallel source needs dim**t <= {DIM_CAP}, got {self.dim}**{hi}"
                )
        elif self.dim * self.dim > DIM_CAP:
            raise ValidationError(f"dim**2 must stay within the cap {DIM_CAP}")


@dataclass(frozen=True)
class InstanceRecord:
    """One verified instance; floats carry full double precision.

    ``lemma2_min_slack`` is None for zero-query protocols (no steps to
    audit). ``inconclusive`` is 1.0 when the final states coincide and the
    only compliant one-sided budget is the trivial one.
    """

    index: int
    theta: float
    queries: int
    overlap: float
    helstrom_error: float
    inconclusive: float
    bound_raw: float
    bound_t: int
    lemma2_min_slack: float | None
    theorem1_slack: float
    theorem1_slack_onesided: float


@dataclass(frozen=True)
class CampaignSummary:
    instances: int
    violations_bounded: int
    violations_onesided: int
    violations_lemma2: int
    violations_d0: int
    violation_count: int
    min_theorem1_slack: float | None
    min_theorem1_slack_onesided: float | None
    min_lemma2_slack: float | None
    max_d0: float | None
    runtime_seconds: float


@dataclass(frozen=True)
class CampaignReport:
    config: CampaignConfig
    records: list[InstanceRecord] = field(default_factory=list)
    summary: CampaignSummary | None = None


def _instance_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def _build_trace(u1, u2, queries: int, cfg: CampaignConfig, rng: np.random.Generator):
    if cfg.protocol_source == "parallel":
        plan = build_parallel(u1, u2, queries)
        return simulate_parallel(u1, u2, plan)
    if cfg.protocol_source == "optimized":
        search = SearchConfig(
            queries=queries,
            restarts=2,
            max_iterations=30,
            step_tolerance=1e-3,
            seed=int(rng.integers(0, 2**63 - 1)),
        )
        result = optimize_protocol(u1, u2, search)
        return run_protocol(u1, u2, result.protocol)
    total = cfg.dim * cfg.dim  # ancilla matches the system dimension
    protocol = Protocol(
        system_dim=cfg.dim,
        ancilla_dim=cfg.dim,
        queries=queries,
        interleavers=[haar_unitary_from_rng(total, rng) for _ in range(queries + 1)],
        probe=random_state_from_rng(total, rng),
    )
    return run_protocol(u1, u2, protocol)


def run_instance(cfg: CampaignConfig, index: int, pair_factory=None) -> tuple[InstanceRecord, float]:
    """Run one campaign instance; returns (record, observed D_0)."""
    rng = _instance_rng(cfg.seed, index)
    if pair_factory is None:
        u1 = haar_unitary_from_rng(cfg.dim, rng)
        u2 = haar_unitary_from_rng(cfg.dim, rng)
    else:
        u1, u2 = pair_factory(rng, cfg.dim)
    lo, hi = cfg.t_range
    queries = int(rng.integers(lo, hi + 1))

    theta = smallest_arc(relative_spectrum(u1, u2)).theta
    trace = _build_trace(u1, u2, queries, cfg, rng)
    slacks = audit_step_slacks(trace, theta)
    lemma2_min = min(slacks) if slacks else None

    phi1, phi2 = trace.states_1[-1], trace.states_2[-1]
    c = trace.final_overlap
    outcome = evaluate_povm(helstrom_povm(phi1, phi2), phi1, phi2)
    eps = min(1.0, max(0.0, 1.0 - min(outcome.p_correct_1, outcome.p_correct_2)))
    half_span = queries * theta / 2.0
    slack_bounded = half_span - np.sqrt(max(0.0, 1.0 - 4.0 * eps * (1.0 - eps)))

    if c < 1.0 - 1e-10:
        three = evaluate_povm(unambiguous_povm(phi1, phi2), phi1, phi2)
        eps0 = min(1.0, max(three.p_inconclusive_1, three.p_inconclusive_2))
    else:
        eps0 = 1.0  # only the always-inconclusive budget is available
    slack_onesided = half_span - np.sqrt(max(0.0, 1.0 - eps0 * eps0))

    bound = t_min_bounded(theta, min(0.5, eps))
    record = InstanceRecord(
        index=index,
        theta=theta,
        queries=queries,
        overlap=c,
        helstrom_error=eps,
        inconclusive=eps0,
        bound_raw=bound.raw_value,
        bound_t=bound.t_lower,
        lemma2_min_slack=lemma2_min,
        theorem1_slack=float(slack_bounded),
        theorem1_slack_onesided=float(slack_onesided),
    )
    return record, trace.distances[0]


def summarize(records: list[InstanceRecord], max_d0: float | None, runtime: float) -> CampaignSummary:
    v_bounded = sum(1 for r in records if r.theorem1_slack < THEOREM_SLACK_TOL)
    v_onesided = sum(1 for r in records if r.theorem1_slack_onesided < THEOREM_SLACK_TOL)
    lemma = [r.lemma2_min_slack for r in records if r.lemma2_min_slack is not None]
    v_lemma = sum(1 for s in lemma if s < LEMMA_SLACK_TOL)
    v_d0 = 1 if (max_d0 is not None and max_d0 > D0_TOL) else 0
    return CampaignSummary(
        instances=len(records),
        violations_bounded=v_bounded,
        violations_onesided=v_onesided,
        violations_lemma2=v_lemma,
        violations_d0=v_d0,
        violation_count=v_bounded + v_onesided + v_lemma + v_d0,
        min_theorem1_slack=min((r.theorem1_slack for r in records), default=None),
        min_theorem1_slack_onesided=min(
            (r.theorem1_slack_onesided for r in records), default=None
        ),
        min_lemma2_slack=min(lemma, default=None),
        max_d0=max_d0,
        runtime_seconds=runtime,
    )


def violating_indices(report: CampaignReport) -> list[int]:
    """Indices of records that break any bound; (config.seed, index) replays them."""
    out = []
    for r in report.records:
        if (
            r.theorem1_slack < THEOREM_SLACK_TOL
            or r.theorem1_slack_onesided < THEOREM_SLACK_TOL
            or (r.lemma2_min_slack is not None and r.lemma2_min_slack < LEMMA_SLACK_TOL)
        ):
            out.append(r.index)
    return out


def run_campaign(cfg: CampaignConfig, pair_factory=None) -> CampaignReport:
    """Run every instance of a campaign and aggregate the slack statistics.

    ``pair_factory(rng, dim)`` overrides Haar pair sampling; it exists for
    tests that need structured pairs (for example commuting diagonal ones)
    and is not part of the config file format.
    """
    cfg.validate()
    start = time.perf_counter()
    records: list[InstanceRecord] = []
    max_d0: float | None = None
    for index in range(cfg.instances):
        record, d0 = run_instance(cfg, index, pair_factory=pair_factory)
        records.append(record)
        max_d0 = d0 if max_d0 is None else max(max_d0, d0)
    runtime = time.perf_counter() - start
    return CampaignReport(
        config=cfg,
        records=records,
        summary=summarize(records, max_d0, runtime),
    )


# --- wire formats ---------------------------------------------------------


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return format(value, ".17g")


def render_csv(report: CampaignReport) -> str:
    """Deterministic CSV: header plus one row per instance record."""
    lines = [",".join(CSV_COLUMNS)]
    for r in report.records:
        row = (
            r.index,
            r.theta,
            r.queries,
            r.overlap,
            r.helstrom_error,
            r.inconclusive,
            r.bound_raw,
            r.bound_t,
            r.lemma2_min_slack,
            r.theorem1_slack,
            r.theorem1_slack_onesided,
        )
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def config_to_obj(cfg: CampaignConfig) -> dict:
    obj = {
        "instances": cfg.instances,
        "dim": cfg.dim,
        "t_range": [cfg.t_range[0], cfg.t_range[1]],
        "seed": cfg.seed,
        "protocol_source": cfg.protocol_source,
    }
    if cfg.output_path is not None:
        obj["output_path"] = cfg.output_path
    return obj


def config_from_obj(obj) -> CampaignConfig:
    if not isinstance(obj, dict):
        raise ValidationError("campaign config must be a JSON object")
    try:
        t_range = obj["t_range"]
        cfg = CampaignConfig(
            instances=int(obj["instances"]),
            dim=int(obj["dim"]),
            t_range=(int(t_range[0]), int(t_range[1])),
            seed=int(obj["seed"]),
            protocol_source=str(obj.get("protocol_source", "random")),
            output_path=obj.get("output_path"),
        )
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed campaign config: {exc}") from exc
    cfg.validate()
    return cfg


def report_to_obj(report: CampaignReport) -> dict:
    return {
        "config": config_to_obj(report.config),
        "records": [asdict(r) for r in report.records],
        "summary": None if report.summary is None else asdict(report.summary),
    }


def report_from_obj(obj) -> CampaignReport:
    try:
        records = [InstanceRecord(**r) for r in obj["records"]]
        summary = None if obj.get("summary") is None else CampaignSummary(**obj["summary"])
        cfg_obj = dict(obj["config"])
        cfg = CampaignConfig(
            instances=int(cfg_obj["instances"]),
            dim=int(cfg_obj["dim"]),
            t_range=(int(cfg_obj["t_range"][0]), int(cfg_obj["t_range"][1])),
            seed=int(cfg_obj["seed"]),
            protocol_source=str(cfg_obj.get("protocol_source", "random")),
            output_path=cfg_obj.get("output_path"),
        )
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed campaign report: {exc}") from exc
    return CampaignReport(config=cfg, records=records, summary=summary)


def render_report(report: CampaignReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report_to_obj(report), indent=2) + "\n"
    if fmt == "csv":
        return render_csv(report)
    raise UsageError(f"unknown report format {fmt!r}")


def emit_report(report: CampaignReport, fmt: str, path: str) -> None:
    """Write the rendered report to a file; I/O failures propagate as OSError."""
    text = render_report(report, fmt)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
