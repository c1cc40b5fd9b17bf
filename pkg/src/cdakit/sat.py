"""A conflict-driven clause-learning SAT solver.

Two watched literals, first-UIP learning with local minimization, VSIDS
branching, phase saving, Luby restarts and LBD-based deletion of learnt
clauses. Literals are DIMACS style signed ints on the public surface and
``2*var + sign`` codes internally.
"""

from __future__ import annotations

import heapq
import random
import time
from enum import Enum


class Status(Enum):
    SAT = "sat"
    UNSAT = "unsat"
    BUDGET = "budget-exceeded"


def luby(i: int) -> int:
    """The ``i``-th element (1-based) of the Luby sequence 1,1,2,1,1,2,4,..."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


def _code(lit: int) -> int:
    return (lit << 1) if lit > 0 else ((-lit) << 1) | 1


class Solver:
    """Single-use CDCL solver over ``num_vars`` variables numbered from 1."""

    restart_unit = 64
    reduce_interval = 2000

    def __init__(self, num_vars: int, clauses=(), seed: int = 0, positive=()):
        self.n = num_vars
        size = 2 * num_vars + 2
        self.lval = [0] * size  # per literal code: 1 true, -1 false, 0 unassigned
        self.level = [0] * (num_vars + 1)
        self.reason = [-1] * (num_vars + 1)
        self.watches = [[] for _ in range(size)]
        self.clauses = []
        self.learnt_ids = []
        self.lbd = {}
        self.trail = []
        self.trail_lim = []
        self.qhead = 0
        self.ok = True
        self.seen = [0] * (num_vars + 1)
        self.phase = [1] * (num_vars + 1)  # 1 means try the negative literal first
        for v in positive:
            self.phase[v] = 0
        rng = random.Random(seed)
        self.activity = [0.0] + [rng.random() * 1e-5 for _ in range(num_vars)]
        self.var_inc = 1.0
        self.heap = [(-self.activity[v], v) for v in range(1, num_vars + 1)]
        heapq.heapify(self.heap)
        # activity of the newest heap entry per variable, None once popped
        self.in_heap = list(self.activity)
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.model = None
        for c in clauses:
            if not self.add_clause(c):
                break

    # -- clause database ----------------------------------------------

    def add_clause(self, lits) -> bool:
        """Add an input clause at decision level 0; returns False once UNSAT."""
        if not self.ok:
            return False
        seen = set()
        codes = []
        for lit in lits:
            if lit == 0 or abs(lit) > self.n:
                raise ValueError(f"literal {lit} out of range 1..{self.n}")
            c = _code(lit)
            if c ^ 1 in seen:
                return True  # tautology
            if c in seen:
                continue
            v = self.lval[c]
            if v == 1 and self.level[c >> 1] == 0:
                return True
            if v == -1 and self.level[c >> 1] == 0:
                continue
            seen.add(c)
            codes.append(c)
        if not codes:
            self.ok = False
            return False
        if len(codes) == 1:
            self._enqueue(codes[0], -1)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        ci = len(self.clauses)
        self.clauses.append(codes)
        self.watches[codes[0]].append(ci)
        self.watches[codes[1]].append(ci)
        return True

    def _enqueue(self, code, reason):
        self.lval[code] = 1
        self.lval[code ^ 1] = -1
        v = code >> 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(code)

    def _propagate(self):
        lval = self.lval
        watches = self.watches
        clauses = self.clauses
        trail = self.trail
        level = self.level
        reason = self.reason
        lvl = len(self.trail_lim)
        while self.qhead < len(trail):
            false_lit = trail[self.qhead] ^ 1
            self.qhead += 1
            self.propagations += 1
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c is None:
                    continue  # deleted clause; drop the watch
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if lval[first] == 1:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if lval[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if lval[first] == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        return ci
                    lval[first] = 1
                    lval[first ^ 1] = -1
                    v = first >> 1
                    level[v] = lvl
                    reason[v] = ci
                    trail.append(first)
            del ws[j:]
        return None

    # -- conflict analysis --------------------------------------------

    def _bump(self, v):
        a = self.activity[v] + self.var_inc
        self.activity[v] = a
        if a > 1e100:
            self.activity = [x * 1e-100 for x in self.activity]
            self.var_inc *= 1e-100
            self._rebuild_heap()
        elif self.lval[2 * v] == 0:
            heapq.heappush(self.heap, (-a, v))
            self.in_heap[v] = a

    def _rebuild_heap(self):
        act = self.activity
        lval = self.lval
        self.in_heap = [None] * (self.n + 1)
        self.heap = []
        for u in range(1, self.n + 1):
            if lval[2 * u] == 0:
                self.heap.append((-act[u], u))
                self.in_heap[u] = act[u]
        heapq.heapify(self.heap)

    def _analyze(self, confl):
        seen = self.seen
        level = self.level
        reason = self.reason
        trail = self.trail
        clauses = self.clauses
        cur = len(self.trail_lim)
        learnt = [0]
        pathc = 0
        p = -1
        idx = len(trail) - 1
        while True:
            c = clauses[confl]
            for q in (c if p < 0 else c[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if level[v] >= cur:
                        pathc += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = p >> 1
            confl = reason[v]
            seen[v] = 0
            pathc -= 1
            if pathc == 0:
                break
        learnt[0] = p ^ 1
        # local minimization: drop literals implied by others in the clause
        kept = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r < 0:
                kept.append(q)
                continue
            for x in clauses[r][1:]:
                u = x >> 1
                if not seen[u] and level[u] > 0:
                    kept.append(q)
                    break
        for q in learnt[1:]:
            seen[q >> 1] = 0
        learnt = kept
        if len(learnt) == 1:
            back = 0
        else:
            best = 1
            for i in range(2, len(learnt)):
                if level[learnt[i] >> 1] > level[learnt[best] >> 1]:
                    best = i
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = level[learnt[1] >> 1]
        self.var_inc /= 0.95
        return learnt, back

    def _backtrack(self, lvl):
        if len(self.trail_lim) <= lvl:
            return
        lim = self.trail_lim[lvl]
        lval = self.lval
        heap = self.heap
        act = self.activity
        phase = self.phase
        reason = self.reason
        in_heap = self.in_heap
        for code in self.trail[lim:]:
            v = code >> 1
            lval[code] = 0
            lval[code ^ 1] = 0
            phase[v] = code & 1
            reason[v] = -1
            a = act[v]
            if in_heap[v] != a:
                heapq.heappush(heap, (-a, v))
                in_heap[v] = a
        del self.trail[lim:]
        del self.trail_lim[lvl:]
        self.qhead = lim
        if len(heap) > 8 * self.n + 64:
            self._rebuild_heap()

    def _reduce(self):
        locked = {self.reason[c >> 1] for c in self.trail}
        cand = [ci for ci in self.learnt_ids if self.clauses[ci] is not None]
        cand.sort(key=lambda ci: (-self.lbd[ci], -len(self.clauses[ci])))
        keep = []
        drop = len(cand) // 2
        for ci in cand:
            if drop > 0 and self.lbd[ci] > 2 and ci not in locked:
                self.clauses[ci] = None
                del self.lbd[ci]
                drop -= 1
            else:
                keep.append(ci)
        self.learnt_ids = keep

    def _pick(self):
        heap = self.heap
        lval = self.lval
        act = self.activity
        in_heap = self.in_heap
        while heap:
            a, v = heapq.heappop(heap)
            if -a == act[v]:
                in_heap[v] = None
                if lval[2 * v] == 0:
                    return v
        for v in range(1, self.n + 1):
            if lval[2 * v] == 0:
                return v
        return 0

    # -- main loop ----------------------------------------------------

    def solve(self, deadline: float | None = None, max_conflicts: int | None = None) -> Status:
        """Run the search; ``deadline`` is a ``time.monotonic()`` instant."""
        if not self.ok:
            return Status.UNSAT
        if deadline is not None and time.monotonic() >= deadline:
            return Status.BUDGET
        if self._propagate() is not None:
            self.ok = False
            return Status.UNSAT
        restarts = 0
        next_restart = luby(1) * self.restart_unit
        next_reduce = self.reduce_interval
        since_restart = 0
        tick = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    self.ok = False
                    return Status.UNSAT
                learnt, back = self._analyze(confl)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    ci = len(self.clauses)
                    self.clauses.append(learnt)
                    self.watches[learnt[0]].append(ci)
                    self.watches[learnt[1]].append(ci)
                    self.learnt_ids.append(ci)
                    self.lbd[ci] = len({self.level[q >> 1] for q in learnt})
                    self._enqueue(learnt[0], ci)
                if max_conflicts is not None and self.conflicts >= max_conflicts:
                    self._backtrack(0)
                    return Status.BUDGET
                if deadline is not None and (self.conflicts & 63) == 0 and time.monotonic() >= deadline:
                    self._backtrack(0)
                    return Status.BUDGET
                continue
            tick += 1
            if deadline is not None and (tick & 255) == 0 and time.monotonic() >= deadline:
                self._backtrack(0)
                return Status.BUDGET
            if since_restart >= next_restart:
                restarts += 1
                since_restart = 0
                next_restart = luby(restarts + 1) * self.restart_unit
                self._backtrack(0)
            if self.conflicts >= next_reduce:
                next_reduce = self.conflicts + self.reduce_interval + 300 * len(self.learnt_ids) // 1000
                self._reduce()
            v = self._pick()
            if v == 0:
                self.model = [False] + [self.lval[2 * u] == 1 for u in range(1, self.n + 1)]
                return Status.SAT
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(2 * v + self.phase[v], -1)

    def value(self, lit: int) -> bool:
        """Truth value of ``lit`` in the model found by the last SAT answer."""
        if self.model is None:
            raise RuntimeError("no model available")
        v = self.model[abs(lit)]
        return v if lit > 0 else not v


def solve_clauses(num_vars: int, clauses, deadline=None, seed: int = 0):
    """Convenience wrapper returning ``(status, model)``; model is a list of
    booleans indexed by variable (index 0 unused) or ``None``."""
    s = Solver(num_vars, clauses, seed=seed)
    status = s.solve(deadline=deadline)
    return status, (s.model if status is Status.SAT else None)
