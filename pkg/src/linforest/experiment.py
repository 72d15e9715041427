"""Run decompositions over generated instances and aggregate the results.

Records are JSON lines: one header line, then one line per instance in
input order. Per-instance failures are written in-band, never dropped.
"""

from __future__ import annotations

import csv
import io
import json
import time
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .decompose import PipelineParams, decompose
from .decompose.oracle import OracleBudgetExceeded, la_exact
from .expansion import ExpanderParams, is_robust_expander_exact, is_robust_expander_sampled
from .generators import GeneratorSpec, generate
from .graph import conjecture_bound

RECORD_VERSION = 1
EXACT_EXPANSION_CAP = 14


class RecordError(ValueError):
    """A records file line that cannot be read back."""


@dataclass
class ExperimentRecord:
    spec: dict
    n: int = 0
    m: int = 0
    max_degree: int = 0
    min_degree: int = 0
    gap: int = 0
    expansion: dict | None = None
    route: str = ""
    status: str = ""
    count: int | None = None
    lower: int | None = None
    bound: int | None = None
    oracle: int | None = None
    fallbacks: list = field(default_factory=list)
    error: str | None = None
    wall_ms: float = 0.0

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentRecord":
        return cls(**data)


@dataclass(frozen=True)
class RunConfig:
    params: PipelineParams = PipelineParams()
    budget_ms: float | None = None
    oracle_cap: int = 10
    expansion_trials: int | None = None

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "budget_ms": self.budget_ms,
            "oracle_cap": self.oracle_cap,
            "expansion_trials": self.expansion_trials,
        }


def run_one(spec: GeneratorSpec, config: RunConfig = RunConfig()) -> ExperimentRecord:
    rec = ExperimentRecord(spec=spec.to_json())
    start = time.perf_counter()
    try:
        g = generate(spec)
        rec.n, rec.m = g.n, g.m
        if g.n:
            rec.max_degree, rec.min_degree = g.max_degree, g.min_degree
            rec.gap = g.max_degree - g.min_degree
        ep = ExpanderParams(config.params.nu, config.params.tau)
        if g.n <= EXACT_EXPANSION_CAP:
            rec.expansion = is_robust_expander_exact(g, ep).to_json()
        else:
            rec.expansion = is_robust_expander_sampled(g, ep, config.expansion_trials, spec.seed).to_json()
        dec, trace = decompose(g, config.params, "auto", config.budget_ms)
        rec.route, rec.status, rec.count = trace.route, trace.status, dec.count
        rec.fallbacks = list(trace.fallbacks)
        rec.bound = conjecture_bound(g)
        rec.lower = (g.max_degree + 1) // 2 if g.n else 0
        if g.n <= config.oracle_cap:
            try:
                rec.oracle = la_exact(g, config.budget_ms, cap=config.oracle_cap)[0]
            except OracleBudgetExceeded:
                rec.oracle = None
    except Exception as exc:  # recorded in-band so one bad instance never sinks a run
        rec.error = f"{type(exc).__name__}: {exc}"
        rec.status = rec.status or "error"
    rec.wall_ms = round((time.perf_counter() - start) * 1000, 3)
    return rec


def _run_indexed(args):
    spec, config = args
    return run_one(spec, config)


def run_experiment(
    specs: Sequence[GeneratorSpec],
    out_path: str | Path,
    config: RunConfig = RunConfig(),
    workers: int = 1,
) -> list[ExperimentRecord]:
    """Run every spec and write header plus records to ``out_path``.

    With ``workers > 1`` instances run in a process pool; results are still
    written in input order, so the file depends only on the specs.
    """
    out_path = Path(out_path)
    records: list[ExperimentRecord] = []
    with out_path.open("w") as fh:
        header = {"kind": "header", "version": RECORD_VERSION, "config": config.to_json(), "instances": len(specs)}
        fh.write(json.dumps(header) + "\n")
        if workers > 1 and len(specs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = pool.map(_run_indexed, [(s, config) for s in specs], chunksize=4)
                for rec in results:
                    fh.write(json.dumps(rec.to_json()) + "\n")
                    records.append(rec)
        else:
            for s in specs:
                rec = run_one(s, config)
                fh.write(json.dumps(rec.to_json()) + "\n")
                fh.flush()
                records.append(rec)
    return records


def read_records(path: str | Path) -> tuple[dict | None, list[ExperimentRecord]]:
    header = None
    records = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise RecordError(f"line {lineno}: not JSON ({exc.msg})") from None
        if not isinstance(data, dict):
            raise RecordError(f"line {lineno}: expected a JSON object")
        if data.get("kind") == "header":
            header = data
            continue
        try:
            records.append(ExperimentRecord.from_json(data))
        except TypeError as exc:
            raise RecordError(f"line {lineno}: malformed record ({exc})") from None
        if not isinstance(records[-1].spec, dict) or "family" not in records[-1].spec:
            raise RecordError(f"line {lineno}: record has no generator spec")
    return header, records


SUMMARY_FIELDS = [
    "family",
    "n",
    "instances",
    "success",
    "other_status",
    "errors",
    "routes",
    "at_lower",
    "at_bound",
    "above_bound",
    "oracle_min",
    "oracle_max",
    "oracle_at_lower",
]


def summarize(records: Iterable[ExperimentRecord] | str | Path) -> list[dict]:
    """One row per (family, n): status counts, routes and bound tightness.

    ``at_lower`` counts results equal to ceil(Delta/2); ``at_bound`` those
    equal to ceil((Delta+1)/2) but above ceil(Delta/2) (so odd Delta is
    counted as lower); ``above_bound`` anything larger.
    """
    if isinstance(records, (str, Path)):
        records = read_records(records)[1]
    groups: dict[tuple, list[ExperimentRecord]] = defaultdict(list)
    for r in records:
        groups[(r.spec.get("family", "?"), r.n)].append(r)
    rows = []
    for (family, n), rs in sorted(groups.items()):
        routes = Counter(r.route for r in rs if r.status == "success")
        done = [r for r in rs if r.count is not None and r.lower is not None]
        oracles = [r.oracle for r in rs if r.oracle is not None]
        rows.append(
            {
                "family": family,
                "n": n,
                "instances": len(rs),
                "success": sum(r.status == "success" for r in rs),
                "other_status": sum(r.status not in ("success", "error") for r in rs),
                "errors": sum(r.error is not None for r in rs),
                "routes": ";".join(f"{k}:{v}" for k, v in sorted(routes.items())),
                "at_lower": sum(r.count <= r.lower for r in done),
                "at_bound": sum(r.lower < r.count <= r.bound for r in done),
                "above_bound": sum(r.count > r.bound for r in done),
                "oracle_min": min(oracles) if oracles else "",
                "oracle_max": max(oracles) if oracles else "",
                "oracle_at_lower": sum(r.oracle is not None and r.oracle <= r.lower for r in rs),
            }
        )
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def rows_to_table(rows: list[dict]) -> str:
    if not rows:
        return "(no records)"
    widths = {k: max(len(k), *(len(str(r[k])) for r in rows)) for k in SUMMARY_FIELDS}
    lines = ["  ".join(k.ljust(widths[k]) for k in SUMMARY_FIELDS)]
    for r in rows:
        lines.append("  ".join(str(r[k]).ljust(widths[k]) for k in SUMMARY_FIELDS))
    return "\n".join(lines)


__all__ = [
    "ExperimentRecord",
    "RecordError",
    "RunConfig",
    "read_records",
    "rows_to_csv",
    "rows_to_table",
    "run_experiment",
    "run_one",
    "summarize",
]
