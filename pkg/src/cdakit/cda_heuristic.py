"""Two-step heuristic: seed with a ``(d+t)``-CCA, then drop rows one at a time
while every non-masking pair still has a distinguishing row.

For each pair ``(S, T)`` of the universe the *DiffRows* entry holds the rows
that cover ``T`` but no member of ``S``. A row can go iff it is not the last
member of any entry.
"""

from __future__ import annotations

import time

import numpy as np

from .cca import cca_upper_bound
from .interactions import DEFAULT_PAIR_CAP, MaskingUniverse, compute_universe, mask_to_rows
from .model import SutModel, TestArray
from .report import GenerationReport


class InvalidSeedError(ValueError):
    """The seed array leaves some non-masking pair undistinguished."""


class DiffRows:
    """DiffRows entries as row bitmasks plus a row -> entries reverse index.

    Row indices always refer to the seed array; removed rows are cleared
    from every entry.
    """

    def __init__(self, array: TestArray, universe: MaskingUniverse):
        self.array = array
        self.universe = universe
        self.entries = compute_entries(array, universe)
        for e, m in enumerate(self.entries):
            if not m:
                s, x = universe.pairs[e]
                raise InvalidSeedError(
                    f"seed array has no row covering {x} but avoiding {universe.sets[s]}"
                )
        self.by_row = [[] for _ in range(len(array))]
        for e, m in enumerate(self.entries):
            for r in mask_to_rows(m):
                self.by_row[r].append(e)
        self.present = array.all_mask

    def try_remove(self, row: int) -> bool:
        """Remove ``row`` unless it is the only distinguishing row of some entry."""
        bit = 1 << row
        if not self.present & bit:
            raise ValueError(f"row {row} was already removed")
        entries = self.entries
        ids = self.by_row[row]
        for e in ids:
            if entries[e] == bit:
                return False
        for e in ids:
            entries[e] &= ~bit
        self.present &= ~bit
        return True

    def as_dict(self) -> dict:
        """``{(S, T): frozenset(rows)}`` view of the current entries."""
        u = self.universe
        return {
            (u.sets[s], u.interactions[x]): frozenset(mask_to_rows(m))
            for (s, x), m in zip(u.pairs, self.entries)
        }

    def current_rows(self) -> list:
        return [i for i in range(len(self.array)) if self.present >> i & 1]


def compute_entries(array: TestArray, universe: MaskingUniverse) -> list:
    """Entry masks ``rho(T) - rho(S)`` for every pair, in universe order."""
    tmask = [array.mask(x) for x in universe.interactions]
    smask = []
    for s in universe.sets:
        m = 0
        for x in s:
            m |= array.mask(x)
        smask.append(m)
    return [tmask[x] & ~smask[s] for s, x in universe.pairs]


def build_diffrows(array: TestArray, universe: MaskingUniverse) -> DiffRows:
    return DiffRows(array, universe)


def removal_order(n: int, seed: int) -> list:
    return [int(i) for i in np.random.default_rng(seed).permutation(n)]


def generate_heuristic_cda(model: SutModel, d: int, t: int, seed: int = 0,
                           seed_array: TestArray | None = None,
                           universe: MaskingUniverse | None = None,
                           cap: int = DEFAULT_PAIR_CAP) -> GenerationReport:
    """Shrink a ``(d+t)``-CCA (or ``seed_array``) to a 1-minimal ``(d, t)``-CDA.

    Every row is visited once in a seeded uniform random order; a row whose
    removal would empty a DiffRows entry is kept.
    """
    start = time.perf_counter()
    if d + t > model.k:
        raise ValueError(f"d + t = {d + t} exceeds the number of parameters ({model.k})")
    if seed_array is None:
        seed_array = cca_upper_bound(model, d, t, seed)
    if universe is None:
        universe = compute_universe(model, d, t, cap)
    state = DiffRows(seed_array, universe)
    trace = []
    for row in removal_order(len(seed_array), seed):
        trace.append((row, state.try_remove(row)))
    rows = [seed_array[i] for i in state.current_rows()]
    array = TestArray(model, rows, check=False)
    return GenerationReport(
        model_name=model.name,
        algorithm="heuristic",
        d=d,
        t=t,
        array=array,
        seed=seed,
        wall_time_ms=(time.perf_counter() - start) * 1000,
        optimal=False,
        trace=trace,
    )
