"""Definition-level verifiers for constrained covering, locating and
detecting arrays.

The ``check_*`` functions return ``None`` on success or a :class:`Violation`
witness (a list of them with ``all_witnesses=True``); ``is_*`` wrap them as
booleans. Candidate pairs are visited in canonical order: interaction sets
by size, then lexicographically, then the single interaction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional

from .constraints import get_oracle
from .interactions import (
    DEFAULT_PAIR_CAP,
    BudgetExceeded,
    enumerate_valid,
    format_interaction,
    interaction_to_json,
    is_independent,
    mask_to_rows,
    rho_mask,
    tau,
)
from .model import SutModel, TestArray


@dataclass(frozen=True)
class Variant:
    """Which of the four CDA/CLA flavours: "at most d" and/or "strength at most t"."""

    d_at_most: bool = False
    t_at_most: bool = False

    @classmethod
    def parse(cls, text: str) -> "Variant":
        """``"exact/exact"``, ``"at-most/exact"``, ... (d mode first)."""
        try:
            dm, tm = (s.strip() for s in text.split("/"))
            modes = {"exact": False, "at-most": True}
            return cls(modes[dm], modes[tm])
        except (ValueError, KeyError):
            raise ValueError(f"bad variant {text!r}; use e.g. 'exact/exact' or 'at-most/exact'") from None

    def __str__(self):
        return f"{'at-most' if self.d_at_most else 'exact'}/{'at-most' if self.t_at_most else 'exact'}"

    def label(self, d: int, t: int) -> str:
        dd = f"{d}̅" if self.d_at_most else str(d)
        tt = f"{t}̅" if self.t_at_most else str(t)
        return f"({dd},{tt})"


EXACT = Variant(False, False)
AT_MOST_D = Variant(True, False)
AT_MOST_T = Variant(False, True)
AT_MOST_BOTH = Variant(True, True)
ALL_VARIANTS = (EXACT, AT_MOST_D, AT_MOST_T, AT_MOST_BOTH)


@dataclass
class Violation:
    """Witness of a failed verification.

    ``kind`` is ``coverage-miss`` (``interaction`` uncovered), ``cda-pair``
    (``interaction`` is neither in nor masked by ``sets[0]`` yet every row
    covering it also covers the set), ``cla-pair`` (``sets[0]`` and
    ``sets[1]`` are distinguishable but fail the same rows) or
    ``invalid-row``.
    """

    kind: str
    interaction: Optional[tuple] = None
    sets: tuple = ()
    rows: dict = field(default_factory=dict)

    def to_json(self, model: SutModel) -> dict:
        out = {"kind": self.kind}
        if self.interaction is not None:
            out["interaction"] = interaction_to_json(model, self.interaction)
        if self.sets:
            out["sets"] = [[interaction_to_json(model, t) for t in s] for s in self.sets]
        if self.rows:
            out["rows"] = {k: [i + 1 for i in v] for k, v in self.rows.items()}
        return out

    def describe(self, model: SutModel) -> str:
        sets = " vs ".join("{" + ", ".join(format_interaction(model, t) for t in s) + "}" for s in self.sets)
        parts = [self.kind]
        if self.interaction is not None:
            parts.append(format_interaction(model, self.interaction))
        if sets:
            parts.append(sets)
        return " ".join(parts)


def _invalid_row(array: TestArray, model: SutModel) -> Optional[Violation]:
    for i, r in enumerate(array.rows):
        if not model.is_valid(r):
            return Violation("invalid-row", rows={"row": [i]})
    return None


def check_cca(array: TestArray, model: SutModel | None, t: int) -> Optional[Violation]:
    """First valid ``t``-way interaction not covered by ``array``, if any."""
    model = model or array.model
    bad = _invalid_row(array, model)
    if bad:
        return bad
    for x in enumerate_valid(model, t):
        if array.mask(x) == 0:
            return Violation("coverage-miss", interaction=x)
    return None


def is_cca(array: TestArray, model: SutModel | None, t: int) -> bool:
    return check_cca(array, model, t) is None


def _pool(model, t, variant):
    return enumerate_valid(model, t, at_most=variant.t_at_most)


def _sizes(d, variant):
    return range(d + 1) if variant.d_at_most else (d,)


def _budget(n, d, variant, cap, per_set):
    total = sum(comb(n, s) for s in _sizes(d, variant)) * per_set
    if total > cap:
        raise BudgetExceeded(f"{total} candidate pairs exceed the cap of {cap}")


def check_cda(array: TestArray, model: SutModel | None, d: int, t: int,
              variant: Variant = EXACT, cap: int = DEFAULT_PAIR_CAP,
              all_witnesses: bool = False):
    """Check the constrained detecting array condition.

    For every interaction set ``S`` of the variant's size and strength and
    every interaction ``T`` (with ``S + {T}`` independent in the
    strength-at-most variants): if ``S`` does not mask ``T`` then ``T`` is in
    ``S`` exactly when every row covering ``T`` covers a member of ``S``.
    """
    model = model or array.model
    bad = _invalid_row(array, model)
    if bad:
        return [bad] if all_witnesses else bad
    oracle = get_oracle(model)
    pool = _pool(model, t, variant)
    n = len(pool)
    _budget(n, d, variant, cap, n)
    amask = [array.mask(x) for x in pool]
    rmask = [oracle.mask(x) for x in pool] if oracle.enumerable else None
    fsets = [frozenset(x) for x in pool]
    found = []
    for s in _sizes(d, variant):
        for combo in combinations(range(n), s):
            cover_a = 0
            for i in combo:
                cover_a |= amask[i]
            if rmask is not None:
                cover_r = 0
                for i in combo:
                    cover_r |= rmask[i]
            members = None
            for ti in range(n):
                if amask[ti] & ~cover_a:
                    continue  # rows covering T escape the set: condition holds
                if ti in combo:
                    continue
                if rmask is not None:
                    if not rmask[ti] & ~cover_r:
                        continue  # masked
                if variant.t_at_most and not _independent_with(fsets, combo, ti):
                    continue
                if members is None:
                    members = tuple(pool[i] for i in combo)
                if rmask is None and not oracle.unmasked(members, pool[ti]):
                    continue
                v = Violation(
                    "cda-pair",
                    interaction=pool[ti],
                    sets=(members,),
                    rows={"interaction": mask_to_rows(amask[ti]), "set": mask_to_rows(cover_a)},
                )
                if not all_witnesses:
                    return v
                found.append(v)
    return found if all_witnesses else None


def _independent_with(fsets, combo, ti):
    group = [fsets[i] for i in combo]
    if fsets[ti] not in group:
        group.append(fsets[ti])
    for a in group:
        for b in group:
            if a is not b and a != b and a <= b:
                return False
    return True


def is_cda(array: TestArray, model: SutModel | None, d: int, t: int,
           variant: Variant = EXACT, cap: int = DEFAULT_PAIR_CAP) -> bool:
    return check_cda(array, model, d, t, variant, cap) is None


def check_cla(array: TestArray, model: SutModel | None, d: int, t: int,
              variant: Variant = EXACT, cap: int = DEFAULT_PAIR_CAP,
              all_witnesses: bool = False):
    """Check that distinguishable interaction sets fail distinct rows.

    Sets are bucketed by the rows they cover in ``array``; a violation is a
    bucket holding two sets that some valid test case tells apart.
    """
    model = model or array.model
    bad = _invalid_row(array, model)
    if bad:
        return [bad] if all_witnesses else bad
    oracle = get_oracle(model)
    pool = _pool(model, t, variant)
    n = len(pool)
    _budget(n, d, variant, cap, 1)
    amask = [array.mask(x) for x in pool]
    rmask = [oracle.mask(x) for x in pool] if oracle.enumerable else None
    buckets = {}
    order = []
    for s in _sizes(d, variant):
        for combo in combinations(range(n), s):
            members = tuple(pool[i] for i in combo)
            if variant.t_at_most and not is_independent(members):
                continue
            key = 0
            for i in combo:
                key |= amask[i]
            order.append((combo, members))
            buckets.setdefault(key, []).append(len(order) - 1)
    found = []
    for key, idxs in buckets.items():
        if len(idxs) < 2:
            continue
        if rmask is not None:
            sig = []
            for j in idxs:
                m = 0
                for i in order[j][0]:
                    m |= rmask[i]
                sig.append(m)
            pairs = ((idxs[0], j) for j, sg in zip(idxs, sig) if sg != sig[0])
            if all_witnesses:
                pairs = ((a, b) for x, a in enumerate(idxs) for y, b in enumerate(idxs)
                         if x < y and sig[x] != sig[y])
        else:
            pairs = ((a, b) for x, a in enumerate(idxs) for b in idxs[x + 1:]
                     if oracle.distinguishable(order[a][1], order[b][1]))
        for a, b in pairs:
            found.append((a, b, key))
            if not all_witnesses:
                break
    if not found:
        return [] if all_witnesses else None
    found.sort()
    witnesses = [
        Violation("cla-pair", sets=(order[a][1], order[b][1]), rows={"set": mask_to_rows(key)})
        for a, b, key in found
    ]
    return witnesses if all_witnesses else witnesses[0]


def is_cla(array: TestArray, model: SutModel | None, d: int, t: int,
           variant: Variant = EXACT, cap: int = DEFAULT_PAIR_CAP) -> bool:
    return check_cla(array, model, d, t, variant, cap) is None


def distinguishable(model: SutModel, first, second) -> bool:
    """Some valid test case covers a member of exactly one of the two sets."""
    return get_oracle(model).distinguishable(tuple(map(tuple, first)), tuple(map(tuple, second)))


# -- theorem oracles -----------------------------------------------------


@dataclass
class TheoremReport:
    """Counterexamples found per theorem; empty lists mean the implication held."""

    checked: dict = field(default_factory=dict)
    counterexamples: dict = field(default_factory=dict)

    def record(self, name, ok, detail=None):
        self.checked[name] = self.checked.get(name, 0) + 1
        if not ok:
            self.counterexamples.setdefault(name, []).append(detail)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def theorem_oracles(model: SutModel, d: int, t: int, arrays=(), seed: int = 0,
                    cap: int = DEFAULT_PAIR_CAP, report: TheoremReport | None = None) -> TheoremReport:
    """Evaluate the structural theorems relating CCAs, CLAs and CDA variants
    on ``model`` for the supplied arrays plus a generated ``(d+t)``-CCA and
    the exhaustive suite."""
    from .cca import generate_cca

    report = report or TheoremReport()
    oracle = get_oracle(model)
    exhaustive = TestArray(model, oracle.rows, check=False)

    for v in ALL_VARIANTS:
        report.record("exhaustive-suite-is-cda", is_cda(exhaustive, model, d, t, v, cap), (d, t, str(v)))

    if d + t <= model.k:
        seed_cca = generate_cca(model, d + t, seed)
        report.record("cca-is-cda", is_cda(seed_cca, model, d, t, AT_MOST_BOTH, cap), (d, t))
        arrays = list(arrays) + [seed_cca]

    tau_t = tau(model, t) if t > 0 else 0
    tau_1 = tau(model, 1)
    for a in arrays:
        verdict = {v: is_cda(a, model, d, t, v, cap) for v in ALL_VARIANTS}
        for v, ok in verdict.items():
            if ok:
                report.record("cda-is-cla", is_cla(a, model, d, t, v, cap), (d, t, str(v), a.rows))
        if verdict[AT_MOST_D] or verdict[AT_MOST_BOTH]:
            report.record("at-most-d-cda-is-cca", is_cca(a, model, t), (d, t, a.rows))
        if d <= tau_t:
            report.record("exact-d-equals-at-most-d", verdict[EXACT] == verdict[AT_MOST_D], (d, t, a.rows))
        if (d == 0 and t == 0) or (t > 0 and d <= tau_1):
            report.record("exact-d-equals-at-most-d-tbar",
                          verdict[AT_MOST_T] == verdict[AT_MOST_BOTH], (d, t, a.rows))
        if verdict[AT_MOST_BOTH]:
            report.record("observation-chain", verdict[AT_MOST_D] and verdict[AT_MOST_T], (d, t, a.rows))
        if verdict[AT_MOST_D] or verdict[AT_MOST_T]:
            report.record("observation-chain", verdict[EXACT], (d, t, a.rows))
    return report
