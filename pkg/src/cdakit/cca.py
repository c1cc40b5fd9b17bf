"""Constrained covering arrays by in-parameter-order growth.

Rows are grown one parameter at a time. Partial rows keep ``None`` in
unassigned slots and every partial row is kept completable to a valid test
case, so the final don't-care fill always succeeds.
"""

from __future__ import annotations

from itertools import combinations, product

from .constraints import get_oracle
from .model import SutModel, TestArray


def _fixed(row):
    return tuple((p, v) for p, v in enumerate(row) if v is not None)


def generate_cca(model: SutModel, strength: int, seed: int = 0) -> TestArray:
    """Strength-``strength`` CCA over ``model``.

    The construction is deterministic; ``seed`` is accepted for interface
    symmetry with the other generators and does not change the result.
    """
    k = model.k
    if not 1 <= strength <= k:
        raise ValueError(f"strength must be in 1..{k}, got {strength}")
    oracle = get_oracle(model)
    sizes = model.sizes

    def completable(row):
        return oracle.complete(_fixed(row)) is not None

    rows = []
    for values in product(*(range(sizes[p]) for p in range(strength))):
        if oracle.is_valid(tuple(enumerate(values))):
            rows.append(list(values) + [None] * (k - strength))

    for i in range(strength, k):
        uncovered = set()
        for others in combinations(range(i), strength - 1):
            for values in product(*(range(sizes[p]) for p in others + (i,))):
                x = tuple(zip(others + (i,), values))
                if oracle.is_valid(x):
                    uncovered.add(x)

        # horizontal growth
        for row in rows:
            assigned = [p for p in range(i) if row[p] is not None]
            best_v, best_gain = None, -1
            for v in range(sizes[i]):
                row[i] = v
                if not completable(row):
                    continue
                gain = 0
                for others in combinations(assigned, strength - 1):
                    if tuple((p, row[p]) for p in others) + ((i, v),) in uncovered:
                        gain += 1
                if gain > best_gain:
                    best_v, best_gain = v, gain
            row[i] = best_v
            if best_v is None:
                continue  # vertical rows may leave the new slot open
            for others in combinations(assigned, strength - 1):
                uncovered.discard(tuple((p, row[p]) for p in others) + ((i, best_v),))

        # vertical growth
        for x in sorted(uncovered):
            placed = False
            for row in rows:
                if any(row[p] is not None and row[p] != v for p, v in x):
                    continue
                saved = [row[p] for p, _ in x]
                for p, v in x:
                    row[p] = v
                if completable(row):
                    placed = True
                    break
                for (p, _), old in zip(x, saved):
                    row[p] = old
            if not placed:
                row = [None] * k
                for p, v in x:
                    row[p] = v
                rows.append(row)

    for row in rows:
        for p in range(k):
            if row[p] is None:
                for v in range(sizes[p]):
                    row[p] = v
                    if completable(row):
                        break
    return TestArray(model, rows)


def cca_upper_bound(model: SutModel, d: int, t: int, seed: int = 0) -> TestArray:
    """A ``(d+t)``-CCA, which is already a ``(d, t)``-CDA in every variant."""
    if d < 0 or t < 0 or d + t < 1:
        raise ValueError("need d >= 0, t >= 0 and d + t >= 1")
    if d + t > model.k:
        raise ValueError(f"d + t = {d + t} exceeds the number of parameters ({model.k})")
    return generate_cca(model, d + t, seed)
