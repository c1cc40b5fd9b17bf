"""Constraint evaluation, propositional encoding and satisfiability queries.

Every question about valid test cases ("is this interaction coverable?",
"does this set mask that interaction?") goes through a
:class:`ConstraintOracle`. Small models (at most ``ENUM_LIMIT`` full
assignments) are answered by exhaustive enumeration with row bitmasks;
larger ones by encoding a single symbolic row and calling the CDCL solver.
Both backends are available for every model so they can be cross-checked.
"""

from __future__ import annotations

import functools
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .model import And, Atom, Const, Implies, Not, Or, SutModel, evaluate
from .sat import Solver, Status

ENUM_LIMIT = 4096

__all__ = [
    "CNF",
    "ConstraintOracle",
    "SatOutcome",
    "Status",
    "check_unmasking",
    "complete",
    "encode_row",
    "evaluate",
    "get_oracle",
    "solve",
]


class CNF:
    """Clause set under construction, DIMACS-style signed integer literals."""

    def __init__(self):
        self.num_vars = 0
        self.clauses = []

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, clause) -> None:
        self.clauses.append(list(clause))

    def copy(self) -> "CNF":
        c = CNF()
        c.num_vars = self.num_vars
        c.clauses = [list(cl) for cl in self.clauses]
        return c

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        lines.extend(" ".join(map(str, cl)) + " 0" for cl in self.clauses)
        return "\n".join(lines) + "\n"


@dataclass
class SatOutcome:
    status: Status
    assignment: Optional[list] = None  # index 0 unused
    elapsed: float = 0.0

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT

    def value(self, lit: int) -> bool:
        v = self.assignment[abs(lit)]
        return v if lit > 0 else not v


def solve(cnf: CNF, budget: Optional[float] = None, seed: int = 0, positive=()) -> SatOutcome:
    """Decide ``cnf``; ``budget`` is wall-clock seconds (``None`` = unbounded).

    A budget of zero or less never starts the search. ``positive`` lists
    variables the solver should first try as true.
    """
    start = time.monotonic()
    deadline = None if budget is None else start + budget
    if deadline is not None and budget <= 0:
        return SatOutcome(Status.BUDGET)
    solver = Solver(cnf.num_vars, cnf.clauses, seed=seed, positive=positive)
    status = solver.solve(deadline=deadline)
    return SatOutcome(status, solver.model if status is Status.SAT else None,
                      time.monotonic() - start)


# -- encoding ------------------------------------------------------------


def encode_row(cnf: CNF, model: SutModel, assert_phi: bool = True) -> list:
    """Allocate one variable per (parameter, value) for a fresh row.

    Adds exactly-one clauses per parameter and, with ``assert_phi``, the
    structural encoding of the model's constraints. Returns ``x`` with
    ``x[p][v]`` the variable for "parameter p takes value v".
    """
    x = []
    for size in model.sizes:
        vs = [cnf.new_var() for _ in range(size)]
        cnf.add(vs)
        for i in range(size):
            for j in range(i + 1, size):
                cnf.add([-vs[i], -vs[j]])
        x.append(vs)
    if assert_phi:
        assert_expr(cnf, model.phi, x)
    return x


def assert_expr(cnf: CNF, expr, x) -> None:
    lit = tseitin(cnf, expr, x)
    if lit is False:
        cnf.add([])
    elif lit is not True:
        cnf.add([lit])


def tseitin(cnf: CNF, expr, x):
    """Literal equivalent to ``expr`` over row variables ``x``.

    Constants come back as Python ``True``/``False``; each surviving
    conjunction or disjunction gets one auxiliary variable defined by full
    equivalence clauses.
    """
    if isinstance(expr, Atom):
        v = x[expr.param][expr.value]
        return -v if expr.negated else v
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Not):
        a = tseitin(cnf, expr.arg, x)
        return (not a) if isinstance(a, bool) else -a
    if isinstance(expr, Implies):
        return tseitin(cnf, Or((Not(expr.lhs), expr.rhs)), x)
    if isinstance(expr, (And, Or)):
        is_and = isinstance(expr, And)
        lits = []
        for arg in expr.args:
            a = tseitin(cnf, arg, x)
            if isinstance(a, bool):
                if a != is_and:
                    return a  # absorbing constant
                continue
            lits.append(a)
        if not lits:
            return is_and
        if len(lits) == 1:
            return lits[0]
        g = cnf.new_var()
        if is_and:
            for a in lits:
                cnf.add([-g, a])
            cnf.add([g] + [-a for a in lits])
        else:
            for a in lits:
                cnf.add([g, -a])
            cnf.add([-g] + lits)
        return g
    raise TypeError(f"not a constraint expression: {expr!r}")


def decode_row(outcome: SatOutcome, x) -> tuple:
    row = []
    for vs in x:
        hits = [v for v, var in enumerate(vs) if outcome.value(var)]
        assert len(hits) == 1, "exactly-one violated in a SAT model"
        row.append(hits[0])
    return tuple(row)


# -- oracle --------------------------------------------------------------


class ConstraintOracle:
    """Answers validity questions about one model.

    ``method`` is ``"enumerate"``, ``"sat"`` or ``"auto"`` (enumerate when the
    model has at most ``enum_limit`` full assignments).
    """

    def __init__(self, model: SutModel, method: str = "auto", enum_limit: int = ENUM_LIMIT):
        if method not in ("auto", "enumerate", "sat"):
            raise ValueError(f"unknown oracle method {method!r}")
        if method == "auto":
            method = "enumerate" if model.space_size <= enum_limit else "sat"
        self.model = model
        self.method = method
        self._cache = {}
        if method == "enumerate":
            self.rows = model.valid_rows()
            self.full = (1 << len(self.rows)) - 1
            cols = [[0] * s for s in model.sizes]
            for i, r in enumerate(self.rows):
                for p, v in enumerate(r):
                    cols[p][v] |= 1 << i
            self._cols = cols
        else:
            self.rows = None
            self._base = CNF()
            self._x = encode_row(self._base, model)

    @property
    def enumerable(self) -> bool:
        return self.method == "enumerate"

    def mask(self, interaction) -> int:
        """Bitmask over the enumerated valid rows covering ``interaction``."""
        m = self.full
        for p, v in interaction:
            m &= self._cols[p][v]
        return m

    def set_mask(self, interactions) -> int:
        m = 0
        for t in interactions:
            m |= self.mask(t)
        return m

    def exists_row(self, cover_any=None, avoid=()) -> Optional[tuple]:
        """A valid row covering some member of ``cover_any`` (no requirement if
        ``None``) and no member of ``avoid``; ``None`` if there is none."""
        key = (None if cover_any is None else frozenset(cover_any), frozenset(avoid))
        if key in self._cache:
            return self._cache[key]
        if self.enumerable:
            m = self.full if cover_any is None else self.set_mask(cover_any)
            m &= ~self.set_mask(avoid)
            row = self.rows[(m & -m).bit_length() - 1] if m else None
        else:
            row = self._sat_exists(cover_any, avoid)
        self._cache[key] = row
        return row

    def _sat_exists(self, cover_any, avoid):
        cnf = self._base.copy()
        x = self._x
        if cover_any is not None:
            cover_any = list(cover_any)
            if not cover_any:
                return None
            if not any(len(t) == 0 for t in cover_any):
                if len(cover_any) == 1:
                    for p, v in cover_any[0]:
                        cnf.add([x[p][v]])
                else:
                    sel = []
                    for t in cover_any:
                        a = cnf.new_var()
                        sel.append(a)
                        for p, v in t:
                            cnf.add([-a, x[p][v]])
                    cnf.add(sel)
        for t in avoid:
            cnf.add([-x[p][v] for p, v in t])
        out = solve(cnf)
        return decode_row(out, x) if out.sat else None

    def complete(self, interaction) -> Optional[tuple]:
        return self.exists_row([tuple(interaction)])

    def is_valid(self, interaction) -> bool:
        if self.enumerable:
            return self.mask(interaction) != 0
        return self.complete(interaction) is not None

    def unmasked(self, interactions, interaction) -> bool:
        """Some valid row covers ``interaction`` and no member of ``interactions``."""
        if self.enumerable:
            return (self.mask(interaction) & ~self.set_mask(interactions)) != 0
        return self.exists_row([tuple(interaction)], interactions) is not None

    def distinguishable(self, first, second) -> bool:
        if self.enumerable:
            return self.set_mask(first) != self.set_mask(second)
        return (self.exists_row(first, second) is not None
                or self.exists_row(second, first) is not None)


@functools.lru_cache(maxsize=64)
def get_oracle(model: SutModel, method: str = "auto") -> ConstraintOracle:
    return ConstraintOracle(model, method)


def complete(model: SutModel, interaction, method: str = "auto") -> Optional[tuple]:
    """Some valid test case covering ``interaction``, or ``None`` if it is invalid."""
    return get_oracle(model, method).complete(tuple(interaction))


def check_unmasking(model: SutModel, interactions: Sequence, interaction, method: str = "auto") -> bool:
    """True iff some valid test case covers ``interaction`` but no member of
    ``interactions`` (the set does not mask the interaction)."""
    return get_oracle(model, method).unmasked(tuple(interactions), tuple(interaction))


def row_formula(model: SutModel) -> tuple:
    """One-row encoding of the model: ``(cnf, x)``."""
    cnf = CNF()
    x = encode_row(cnf, model)
    return cnf, x
