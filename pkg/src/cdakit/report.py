"""Generation reports and model statistics."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .constraints import get_oracle
from .interactions import DEFAULT_PAIR_CAP, compute_universe, enumerate_valid, interaction_count
from .model import SutModel, TestArray


def analyze(model: SutModel, d: int, t: int, cap: int = DEFAULT_PAIR_CAP) -> dict:
    """Counts shown by ``cdakit analyze`` and embedded in every report."""
    valid = len(enumerate_valid(model, t))
    universe = compute_universe(model, d, t, cap)
    stats = {
        "k": model.k,
        "constraints": len(model.constraints),
        "valid_interactions": valid,
        "invalid_interactions": interaction_count(model, t) - valid,
        "masked_pairs": universe.masked_count,
        "universe_pairs": len(universe),
    }
    oracle = get_oracle(model)
    if oracle.enumerable:
        stats["valid_rows"] = len(oracle.rows)
    return stats


@dataclass
class GenerationReport:
    model_name: str
    algorithm: str
    d: int
    t: int
    array: TestArray
    seed: int
    wall_time_ms: float
    optimal: bool = False
    variant: str = "exact/exact"
    trace: list = field(default_factory=list)
    size_log: list = field(default_factory=list)
    stats: Optional[dict] = None
    emitted: list = field(default_factory=list, repr=False)  # every verified array, seed first

    @property
    def size(self) -> int:
        return len(self.array)

    def to_json(self) -> dict:
        out = {
            "model": self.model_name,
            "algorithm": self.algorithm,
            "d": self.d,
            "t": self.t,
            "variant": self.variant,
            "size": self.size,
            "wall_time_ms": round(self.wall_time_ms, 3),
            "seed": self.seed,
            "optimal": self.optimal,
        }
        if self.algorithm == "heuristic":
            out["trace"] = [[int(r), bool(rm)] for r, rm in self.trace]
        if self.algorithm == "sat":
            out["size_log"] = self.size_log
        if self.stats is not None:
            out["stats"] = self.stats
        return out
