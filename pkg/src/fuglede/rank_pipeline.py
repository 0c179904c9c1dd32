"""LangGraph pipeline computing dephased GF(2) ranks of catalog matrices."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from langgraph.graph import StateGraph

from .config import Config
from .errors import InvalidHadamardError
from .gf2 import RankRecord, SignMatrix, dephased_rank, distinct_ranks, is_hadamard

logger = logging.getLogger(__name__)


@dataclass
class RankState:
    """State for the rank pipeline."""

    matrices: List[Tuple[str, SignMatrix]] = field(default_factory=list)
    validate: bool = True
    min_rank: int = Config.MIN_DEPHASED_RANK
    records: List[RankRecord] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class RankReport:
    """Records plus the per-order summary."""

    records: List[RankRecord]
    distinct_ranks: Dict[int, List[int]]
    min_rank: int
    all_above_min: bool
    non_uniform_orders: List[int]

    @property
    def violations(self) -> List[RankRecord]:
        """Records whose rank does not exceed the gate."""
        return [r for r in self.records if r.dephased_rank <= self.min_rank]


def _natural_key(source_id: str):
    parts: List[Any] = []
    digits = ""
    for ch in source_id:
        if ch.isdigit():
            digits += ch
            continue
        if digits:
            parts.append((1, int(digits)))
            digits = ""
        parts.append((0, ch))
    if digits:
        parts.append((1, int(digits)))
    return parts


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


class RankPipeline:
    """Validate, convert, dephase and rank a batch of sign matrices."""

    # Node 1: Validate
    def validate_matrices(self, state: RankState) -> Dict[str, Any]:
        """Reject any input that is not a Hadamard matrix."""
        if state.validate:
            for source_id, matrix in state.matrices:
                if not is_hadamard(matrix):
                    raise InvalidHadamardError(source_id)
        logger.debug("validated %d matrices", len(state.matrices))
        return {}

    # Node 2: Dephased rank
    def compute_ranks(self, state: RankState) -> Dict[str, Any]:
        """Log-Hadamard conversion, dephasing and rank for every matrix."""
        records = [
            RankRecord(source_id, matrix.order, dephased_rank(matrix))
            for source_id, matrix in state.matrices
        ]
        records.sort(key=lambda r: _natural_key(r.source_id))
        return {"records": records}

    # Node 3: Summary
    def summarize(self, state: RankState) -> Dict[str, Any]:
        """Check the rank gate and probe whether ranks agree within each order."""
        ranks = distinct_ranks(state.records)
        non_uniform = [order for order, values in ranks.items() if len(values) > 1]
        for order in non_uniform:
            if _is_power_of_two(order):
                logger.info("order %d is a power of two; differing ranks %s are expected", order, ranks[order])
            else:
                logger.warning("dephased ranks differ within order %d: %s", order, ranks[order])
        summary = {
            "distinct_ranks": ranks,
            "all_above_min": all(r.dephased_rank > state.min_rank for r in state.records),
            "non_uniform_orders": non_uniform,
        }
        return {"summary": summary}


def build_rank_graph():
    """Build and compile the rank graph."""
    pipeline = RankPipeline()

    graph = (
        StateGraph(RankState)
        .add_node("validate_matrices", pipeline.validate_matrices)
        .add_node("compute_ranks", pipeline.compute_ranks)
        .add_node("summarize", pipeline.summarize)
        .add_edge("__start__", "validate_matrices")
        .add_edge("validate_matrices", "compute_ranks")
        .add_edge("compute_ranks", "summarize")
        .compile(name="Dephased Rank Pipeline")
    )

    return graph


# Export the compiled graph
graph = build_rank_graph()


def rank_report(
    matrices: Sequence[Tuple[str, SignMatrix]],
    validate: Optional[bool] = None,
    min_rank: Optional[int] = None,
) -> RankReport:
    """Compute one RankRecord per input plus the per-order summary.

    Raises:
        InvalidHadamardError: naming the first input that fails validation.
    """
    result = graph.invoke({
        "matrices": list(matrices),
        "validate": Config.VALIDATE_HADAMARD if validate is None else validate,
        "min_rank": Config.MIN_DEPHASED_RANK if min_rank is None else min_rank,
    })
    summary = result["summary"]
    return RankReport(
        records=list(result["records"]),
        distinct_ranks=summary["distinct_ranks"],
        min_rank=result["min_rank"],
        all_above_min=summary["all_above_min"],
        non_uniform_orders=summary["non_uniform_orders"],
    )
