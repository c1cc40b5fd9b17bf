"""Fault identification from test outcomes.

An interaction of the target strength is flagged when some row covers it
and every row covering it failed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

from .interactions import format_interaction, interaction_to_json, is_masking, rho_mask
from .model import SutModel, TestArray


class Verdict(Enum):
    PASS = "PASS"
    FAIL = "FAIL"


@dataclass(frozen=True)
class Outcome:
    verdicts: tuple

    def __len__(self):
        return len(self.verdicts)

    @property
    def failed_mask(self) -> int:
        m = 0
        for i, v in enumerate(self.verdicts):
            if v is Verdict.FAIL:
                m |= 1 << i
        return m

    @property
    def failed_rows(self) -> list:
        return [i for i, v in enumerate(self.verdicts) if v is Verdict.FAIL]

    @classmethod
    def from_failed(cls, n_rows: int, failed) -> "Outcome":
        failed = set(failed)
        return cls(tuple(Verdict.FAIL if i in failed else Verdict.PASS for i in range(n_rows)))


CONFIRMED = "confirmed"
MASKED_SUSPECT = "masked-suspect"
ASSUMPTION_VIOLATION = "assumption-violation"


@dataclass
class Diagnosis:
    flagged: tuple
    labels: dict = field(default_factory=dict)

    def to_json(self, model: SutModel) -> dict:
        items = []
        for x in self.flagged:
            item = {"interaction": interaction_to_json(model, x), "text": format_interaction(model, x)}
            if x in self.labels:
                item["label"] = self.labels[x]
            items.append(item)
        return {"flagged": items}


def run_tests(array: TestArray, faulty) -> Outcome:
    """A row fails iff it covers at least one faulty interaction."""
    return Outcome.from_failed(len(array), _rows(rho_mask(array, [tuple(x) for x in faulty])))


def _rows(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def identify(array: TestArray, outcome: Outcome, t: int, at_most: bool = False,
             minimal: bool = False) -> Diagnosis:
    """Flag every interaction of strength ``t`` (``<= t`` with ``at_most``)
    that appears in the array only in failed rows.

    With ``minimal``, flagged interactions strictly containing another
    flagged interaction are dropped.
    """
    if len(outcome) != len(array):
        raise ValueError(f"outcome has {len(outcome)} verdicts for {len(array)} rows")
    failed = outcome.failed_mask
    strengths = range(t + 1) if at_most else (t,)
    flagged = set()
    for i in _rows(failed):
        pairs = tuple(enumerate(array[i]))
        for s in strengths:
            for x in combinations(pairs, s):
                if x in flagged:
                    continue
                if not array.mask(x) & ~failed:
                    flagged.add(x)
    if minimal:
        sets = [frozenset(x) for x in flagged]
        flagged = {x for x in flagged if not any(o < frozenset(x) for o in sets)}
    return Diagnosis(tuple(sorted(flagged, key=lambda x: (len(x), x))))


def annotate(model: SutModel, diagnosis: Diagnosis, assumed_faulty) -> Diagnosis:
    """Label flagged interactions against a known injected fault set."""
    faulty = tuple(sorted(tuple(x) for x in assumed_faulty))
    labels = {}
    for x in diagnosis.flagged:
        if x in faulty:
            labels[x] = CONFIRMED
        elif faulty and is_masking(model, faulty, x):
            labels[x] = MASKED_SUSPECT
        else:
            labels[x] = ASSUMPTION_VIOLATION
    return Diagnosis(diagnosis.flagged, labels)
