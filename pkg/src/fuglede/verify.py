"""Run spectral-vs-tile checks over an enumeration case, shard by shard.

A run is split into shards keyed by the first free points; each shard is
checked independently (optionally in worker processes), persisted to the
checkpoint database as it completes, and written to a newline-delimited
JSON report together with a final summary record.
"""

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from .database import Database
from .enumeration import (
    CaseSpec,
    FreeTuple,
    enumerate_tuples,
    sample_tuples,
    shard_id,
    shard_keys,
    subset_for,
)
from .errors import CheckpointError, InvalidCaseError
from .spectile import check_equivalence

logger = logging.getLogger(__name__)


@dataclass
class ShardRecord:
    """Outcome of one shard.

    Every field but latency_hist is a report field; latency_hist counts the
    checked sets per whole microsecond of latency.
    """

    case: str
    shard: str
    examined: int = 0
    spectral: int = 0
    tile: int = 0
    agree: int = 0
    failures: List[Dict[str, Any]] = field(default_factory=list)
    elapsed_ms: float = 0.0
    median_us: float = 0.0
    latency_hist: Dict[int, int] = field(default_factory=dict)

    def report_record(self) -> Dict[str, Any]:
        """The shard's report line."""
        record = asdict(self)
        del record["latency_hist"]
        return record


@dataclass
class VerifyReport:
    """Aggregated outcome of a verification run."""

    case: Dict[str, Any]
    tuples_examined: int
    spectral_count: int
    tile_count: int
    agree_count: int
    failures: List[Dict[str, Any]]
    elapsed_ms: float
    median_us: float
    checkpoint: Optional[str]
    shards: List[ShardRecord] = field(default_factory=list)
    complete: bool = True

    @property
    def ok(self) -> bool:
        """True when every examined set was spectral iff it tiles."""
        return not self.failures

    def summary_record(self) -> Dict[str, Any]:
        """Summary line of the report."""
        return {
            "case": self.case["label"],
            "shard": "summary",
            "examined": self.tuples_examined,
            "spectral": self.spectral_count,
            "tile": self.tile_count,
            "agree": self.agree_count,
            "failures": self.failures,
            "elapsed_ms": self.elapsed_ms,
            "median_us": self.median_us,
        }


def check_tuples(spec: CaseSpec, shard: str, tuples: Iterable[FreeTuple]) -> ShardRecord:
    """Check spectral iff tile for prefix plus each tuple."""
    record = ShardRecord(case=spec.label, shard=shard)
    latencies = []
    started = time.perf_counter()
    for t in tuples:
        t0 = time.perf_counter_ns()
        result = check_equivalence(subset_for(spec, t))
        latencies.append((time.perf_counter_ns() - t0) / 1000.0)
        record.examined += 1
        record.spectral += result.spectral
        record.tile += result.tile
        if result.agree:
            record.agree += 1
        else:
            record.failures.append({
                "tuple": list(t.points),
                "spectral": result.spectral,
                "tile": result.tile,
            })
    record.elapsed_ms = round((time.perf_counter() - started) * 1000.0, 3)
    record.median_us = round(float(np.median(latencies)), 3) if latencies else 0.0
    buckets, counts = np.unique(np.rint(latencies).astype(np.int64), return_counts=True)
    record.latency_hist = dict(zip(buckets.tolist(), counts.tolist()))
    return record


def latency_median(hist: Dict[int, int]) -> float:
    """Median latency of the sets counted by a histogram, to one microsecond."""
    if not hist:
        return 0.0
    values = np.array(sorted(hist), dtype=np.float64)
    cumulative = np.cumsum([hist[v] for v in sorted(hist)])
    n = int(cumulative[-1])
    low = values[np.searchsorted(cumulative, (n - 1) // 2 + 1)]
    high = values[np.searchsorted(cumulative, n // 2 + 1)]
    return round(float(low + high) / 2.0, 3)


def merge_histograms(hists: Iterable[Dict[int, int]]) -> Dict[int, int]:
    """Sum latency histograms bucket by bucket."""
    merged: Dict[int, int] = {}
    for hist in hists:
        for bucket, count in hist.items():
            merged[bucket] = merged.get(bucket, 0) + count
    return merged


def _check_shard_job(job: Tuple[int, int, Optional[bool], Tuple[int, ...], Optional[List[Tuple[int, ...]]]]) -> Dict[str, Any]:
    """Worker entry point; arguments are plain tuples so they pickle cheaply."""
    dimension, set_size, heuristics, key, sampled = job
    spec = CaseSpec(dimension, set_size, heuristics)
    if sampled is None:
        tuples: Iterable[FreeTuple] = enumerate_tuples(spec, key)
    else:
        tuples = (FreeTuple(dimension, pts) for pts in sampled)
    return asdict(check_tuples(spec, shard_id(key), tuples))


class VerificationRunner:
    """Shard, check, checkpoint and report one verification case."""

    def __init__(
        self,
        spec: CaseSpec,
        sample: Optional[int] = None,
        seed: int = 0,
        jobs: int = 1,
        checkpoint_path: Optional[Path] = None,
        full: bool = False,
    ):
        if sample is not None and sample < 1:
            raise InvalidCaseError("sample count must be positive")
        if sample is None and spec.free_count > 2 and not full:
            raise InvalidCaseError(
                f"{spec.label} is an hours-long run; pass a sample count or request the full run"
            )
        if sample is not None and spec.heuristics:
            # sampling covers the raw space; pruning does not apply
            spec = CaseSpec(spec.dimension, spec.set_size, heuristics=False)
        self.spec = spec
        self.sample = sample
        self.seed = seed
        self.jobs = max(1, jobs)
        self.db = Database(checkpoint_path) if checkpoint_path else None

    @property
    def run_key(self) -> str:
        """Identifies compatible checkpoints: same case, mode and seed."""
        mode = f"sample{self.sample}-seed{self.seed}" if self.sample else "full"
        return f"{self.spec.label}-{mode}"

    def case_summary(self) -> Dict[str, Any]:
        """Case fields for the report."""
        return {
            "label": self.spec.label,
            "dimension": self.spec.dimension,
            "set_size": self.spec.set_size,
            "heuristics": bool(self.spec.heuristics),
            "sample": self.sample,
            "seed": self.seed if self.sample else None,
        }

    def plan(self) -> List[Tuple[Tuple[int, ...], Optional[List[Tuple[int, ...]]]]]:
        """Shard keys in stream order, with the drawn tuples in sample mode."""
        if self.sample is None:
            return [(key, None) for key in shard_keys(self.spec)]
        drawn = sample_tuples(self.spec, self.sample, self.seed)
        length = min(2, self.spec.free_count)
        groups: Dict[Tuple[int, ...], List[Tuple[int, ...]]] = {}
        for t in drawn:
            groups.setdefault(t.points[:length], []).append(t.points)
        return [(key, groups[key]) for key in sorted(groups)]

    def run(
        self,
        stop_after: Optional[int] = None,
        on_shard: Optional[Callable[[ShardRecord], None]] = None,
    ) -> VerifyReport:
        """Check every shard not already in the checkpoint.

        Args:
            stop_after: stop once this many new shards have completed,
                leaving the rest for a resumed run.
            on_shard: called with each newly completed shard record.
        """
        plan = self.plan()
        positions = {shard_id(key): i for i, (key, _) in enumerate(plan)}
        done: Dict[str, ShardRecord] = {}
        if self.db is not None:
            for sid, row in self.db.get_completed_shards(self.run_key).items():
                if sid not in positions:
                    raise CheckpointError(f"checkpoint shard {sid} is not part of run {self.run_key}")
                done[sid] = self._restore(row)
            if done:
                logger.info("resuming %s: %d of %d shards already complete", self.run_key, len(done), len(plan))

        pending = [
            (self.spec.dimension, self.spec.set_size, self.spec.heuristics, key, sampled)
            for key, sampled in plan
            if shard_id(key) not in done
        ]
        if stop_after is not None:
            pending = pending[:stop_after]

        def finish(result: Dict[str, Any]):
            record = ShardRecord(**result)
            done[record.shard] = record
            if self.db is not None:
                self.db.save_shard(self.run_key, positions[record.shard], asdict(record))
            logger.debug("shard %s: %d examined, %d failures", record.shard, record.examined, len(record.failures))
            if on_shard is not None:
                on_shard(record)

        if self.jobs == 1 or len(pending) <= 1:
            for job in pending:
                finish(_check_shard_job(job))
        else:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                futures = [pool.submit(_check_shard_job, job) for job in pending]
                for future in as_completed(futures):
                    finish(future.result())

        return self._aggregate(plan, done)

    def _restore(self, row: Dict[str, Any]) -> ShardRecord:
        fields = {k: row[k] for k in ShardRecord.__dataclass_fields__ if k != "case"}
        return ShardRecord(case=self.spec.label, **fields)

    def _aggregate(self, plan: Sequence[Tuple[Tuple[int, ...], Any]], done: Dict[str, ShardRecord]) -> VerifyReport:
        ordered = [done[shard_id(key)] for key, _ in plan if shard_id(key) in done]
        failures = [f for record in ordered for f in record.failures]
        return VerifyReport(
            case=self.case_summary(),
            tuples_examined=sum(r.examined for r in ordered),
            spectral_count=sum(r.spectral for r in ordered),
            tile_count=sum(r.tile for r in ordered),
            agree_count=sum(r.agree for r in ordered),
            failures=failures,
            elapsed_ms=round(sum(r.elapsed_ms for r in ordered), 3),
            median_us=latency_median(merge_histograms(r.latency_hist for r in ordered)),
            checkpoint=ordered[-1].shard if ordered else None,
            shards=ordered,
            complete=len(ordered) == len(plan),
        )


def write_report(report: VerifyReport, out: TextIO):
    """Write one JSON line per shard, then the summary line."""
    for record in report.shards:
        out.write(json.dumps(record.report_record()) + "\n")
    out.write(json.dumps(report.summary_record()) + "\n")
