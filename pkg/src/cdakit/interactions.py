"""Interactions, coverage, masking and the non-masking universe.

An interaction is a tuple of ``(parameter, value)`` index pairs sorted by
parameter; the empty tuple is the strength-0 interaction that every row
covers. Interaction sets are tuples of interactions in canonical (sorted)
order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Iterable, Sequence

from .constraints import get_oracle
from .model import ModelError, SutModel, TestArray

EMPTY = ()
DEFAULT_PAIR_CAP = 10**8


class BudgetExceeded(RuntimeError):
    """A combinatorial enumeration would exceed its configured cap."""


def interaction(pairs: Iterable, model: SutModel | None = None) -> tuple:
    """Canonical interaction from ``(param, value)`` pairs, checked for distinct
    parameters (and in-domain values when ``model`` is given)."""
    t = tuple(sorted((int(p), int(v)) for p, v in pairs))
    params = [p for p, _ in t]
    if len(set(params)) != len(params):
        raise ModelError(f"interaction {t} repeats a parameter")
    if model is not None:
        for p, v in t:
            if not 0 <= p < model.k or not 0 <= v < model.sizes[p]:
                raise ModelError(f"pair {(p, v)} is outside the model's domains")
    return t


def interaction_set(members: Iterable) -> tuple:
    return tuple(sorted(set(tuple(m) for m in members)))


def covers(row: Sequence[int], t) -> bool:
    return all(row[p] == v for p, v in t)


def rho(array: TestArray, interactions) -> frozenset:
    """Indices of the rows covering at least one member of ``interactions``."""
    m = rho_mask(array, interactions)
    return frozenset(i for i in range(len(array)) if m >> i & 1)


def rho_mask(array: TestArray, interactions) -> int:
    m = 0
    for t in interactions:
        m |= array.mask(t)
    return m


def mask_to_rows(mask: int) -> list:
    rows = []
    i = 0
    while mask:
        if mask & 1:
            rows.append(i)
        mask >>= 1
        i += 1
    return rows


def all_interactions(model: SutModel, t: int) -> list:
    """Every ``t``-way interaction of the model in canonical order."""
    out = []
    for params in combinations(range(model.k), t):
        for values in product(*(range(model.sizes[p]) for p in params)):
            out.append(tuple(zip(params, values)))
    return out


def interaction_count(model: SutModel, t: int) -> int:
    total = 0
    for params in combinations(range(model.k), t):
        n = 1
        for p in params:
            n *= model.sizes[p]
        total += n
    return total


def enumerate_valid(model: SutModel, t: int, at_most: bool = False) -> list:
    """The valid ``t``-way interactions (strength ``<= t`` when ``at_most``)."""
    if not 0 <= t <= model.k:
        raise ValueError(f"strength {t} outside 0..{model.k}")
    oracle = get_oracle(model)
    strengths = range(t + 1) if at_most else (t,)
    return [x for s in strengths for x in all_interactions(model, s) if oracle.is_valid(x)]


def is_independent(interactions) -> bool:
    """No member is a subset of another distinct member."""
    sets = [frozenset(t) for t in set(map(tuple, interactions))]
    for a in sets:
        for b in sets:
            if a != b and a <= b:
                return False
    return True


def is_masking(model: SutModel, interactions, t) -> bool:
    """``interactions`` masks ``t``: every valid row covering ``t`` covers a member."""
    t = tuple(t)
    interactions = tuple(map(tuple, interactions))
    if t in interactions:
        return False
    return not get_oracle(model).unmasked(interactions, t)


@dataclass
class MaskingUniverse:
    """All non-masking ``(set, interaction)`` pairs for ``(d, t)``.

    ``pairs`` holds ``(set_index, interaction_index)`` references into
    ``sets`` and ``interactions`` so shared sets are stored once.
    """

    d: int
    t: int
    interactions: list
    sets: list
    pairs: list
    masked_count: int
    masked: list = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        for si, ti in self.pairs:
            yield self.sets[si], self.interactions[ti]


def candidate_count(n: int, d: int) -> int:
    return comb(n, d) * n


def compute_universe(model: SutModel, d: int, t: int, cap: int = DEFAULT_PAIR_CAP,
                     keep_masked: bool = False) -> MaskingUniverse:
    """Enumerate every ``(T_set, T)`` with ``|T_set| = d`` over the valid
    ``t``-way interactions, keeping the pairs where ``T`` is outside the set
    and not masked by it; the masked ones are counted."""
    if d < 0 or not 1 <= t <= model.k:
        raise ValueError(f"need d >= 0 and 1 <= t <= {model.k}")
    vi = enumerate_valid(model, t)
    n = len(vi)
    if candidate_count(n, d) > cap:
        raise BudgetExceeded(
            f"{candidate_count(n, d)} candidate pairs for d={d}, t={t} exceed the cap of {cap}; "
            "lower d or t, or raise the cap"
        )
    oracle = get_oracle(model)
    sets, pairs, masked = [], [], []
    masked_count = 0
    if oracle.enumerable:
        masks = [oracle.mask(x) for x in vi]
    for combo in combinations(range(n), d):
        members = tuple(vi[i] for i in combo)
        si = len(sets)
        used = False
        if oracle.enumerable:
            cover = 0
            for i in combo:
                cover |= masks[i]
        inside = set(combo)
        for ti in range(n):
            if ti in inside:
                continue
            if oracle.enumerable:
                ok = masks[ti] & ~cover != 0
            else:
                ok = oracle.unmasked(members, vi[ti])
            if ok:
                pairs.append((si, ti))
                used = True
            else:
                masked_count += 1
                if keep_masked:
                    masked.append((members, vi[ti]))
        if used:
            sets.append(members)
    return MaskingUniverse(d, t, vi, sets, pairs, masked_count, masked)


def tau(model: SutModel, t: int, cap: int = 3, subset_cap: int = 10**7) -> int:
    """Largest ``tau <= cap`` such that no ``tau`` valid ``t``-way interactions
    together cover every valid test case. Brute force; desk scale only."""
    if t == 0:
        return 0
    oracle = get_oracle(model)
    if not oracle.enumerable:
        raise BudgetExceeded("tau needs an enumerable model")
    masks = sorted({oracle.mask(x) for x in enumerate_valid(model, t)})
    full = oracle.full
    for s in range(1, cap + 1):
        if s > len(masks):
            break
        if comb(len(masks), s) > subset_cap:
            raise BudgetExceeded(f"C({len(masks)}, {s}) subsets exceed {subset_cap}")
        for combo in combinations(masks, s):
            m = 0
            for x in combo:
                m |= x
            if m == full:
                return s - 1
    return cap


def format_interaction(model: SutModel, t) -> str:
    if not t:
        return "{}"
    parts = (f"({model.parameters[p].name},{model.parameters[p].values[v]})" for p, v in t)
    return "{" + ",".join(parts) + "}"


def interaction_to_json(model: SutModel, t) -> dict:
    return {model.parameters[p].name: model.parameters[p].values[v] for p, v in t}


def parse_interaction(model: SutModel, text: str) -> tuple:
    """Parse ``"F1=0,F2=Domestic"`` (also ``&`` separated); ``"{}"`` is empty."""
    text = text.strip().strip("{}").strip()
    if not text:
        return EMPTY
    pairs = []
    for item in text.replace("&", ",").split(","):
        item = item.strip().strip("()")
        if not item:
            continue
        if "=" not in item:
            raise ModelError(f"expected param=value, got {item!r}")
        name, value = (s.strip() for s in item.split("=", 1))
        p = model.param_index(name)
        pairs.append((p, model.value_index(p, value)))
    return interaction(pairs, model)


def parse_interaction_set(model: SutModel, text: str) -> tuple:
    """Parse ``;``-separated interactions."""
    return interaction_set(parse_interaction(model, part) for part in text.split(";") if part.strip())
