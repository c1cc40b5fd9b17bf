"""Brute-force reference implementations used by the tests.

Nothing here imports cdakit internals: models are plain ``(sizes, forbidden)``
pairs where ``forbidden`` lists partial assignments no valid row may contain,
and every notion is computed straight from its definition with Python sets.
"""

from __future__ import annotations

import random
from itertools import combinations, product


class RefModel:
    """Domains plus constraints given as predicates over full rows."""

    def __init__(self, sizes, predicates=(), names=None):
        self.sizes = tuple(sizes)
        self.k = len(sizes)
        self.predicates = list(predicates)
        self.names = names

    def valid(self, row):
        return all(p(row) for p in self.predicates)

    def rows(self):
        return [r for r in product(*(range(s) for s in self.sizes)) if self.valid(r)]


def running_example_ref():
    """The four-parameter shopping model, constraints written as predicates."""
    return RefModel(
        (3, 2, 3, 4),
        [
            lambda r: not (r[1] == 1) or r[2] != 0,
            lambda r: not (r[3] == 3) or (r[1] == 0 and r[2] == 0),
        ],
    )


def covers(row, t):
    return all(row[p] == v for p, v in t)


def interactions(model, t):
    out = []
    for params in combinations(range(model.k), t):
        for values in product(*(range(model.sizes[p]) for p in params)):
            out.append(tuple(zip(params, values)))
    return out


def valid_interactions(model, t, at_most=False):
    rows = model.rows()
    strengths = range(t + 1) if at_most else [t]
    return [x for s in strengths for x in interactions(model, s) if any(covers(r, x) for r in rows)]


def rho(rows, xs):
    return {i for i, r in enumerate(rows) if any(covers(r, x) for x in xs)}


def masks(model, S, T):
    """``S`` masks ``T``: ``T`` not in ``S`` and every valid row covering ``T`` covers ``S``."""
    if T in S:
        return False
    return all(any(covers(r, x) for x in S) for r in model.rows() if covers(r, T))


def masked_pair_count(model, d, t):
    vi = valid_interactions(model, t)
    n = 0
    for S in combinations(vi, d):
        for T in vi:
            if T not in S and masks(model, S, T):
                n += 1
    return n


def independent(xs):
    sets = [frozenset(x) for x in set(xs)]
    return not any(a != b and a <= b for a in sets for b in sets)


def is_cda(model, rows, d, t, d_at_most=False, t_at_most=False):
    """Definition check with Python sets: for every S and T (independence
    side condition in the strength-at-most modes), if S does not mask T then
    T in S iff rho(T) is a subset of rho(S)."""
    pool = valid_interactions(model, t, at_most=t_at_most)
    valid_rows = model.rows()
    for r in rows:
        if not model.valid(r):
            return False
    sizes = range(d + 1) if d_at_most else [d]
    for s in sizes:
        for S in combinations(pool, s):
            rs = rho(rows, S)
            for T in pool:
                if t_at_most and not independent(list(S) + [T]):
                    continue
                masked = T not in S and all(any(covers(r, x) for x in S) for r in valid_rows if covers(r, T))
                if masked:
                    continue
                if (T in S) != (rho(rows, [T]) <= rs):
                    return False
    return True


def is_cca(model, rows, t):
    return all(any(covers(r, x) for r in rows) for x in valid_interactions(model, t))


def min_cda_size(model, d, t, limit):
    """Smallest N <= ``limit`` such that some N distinct valid rows form a
    ``(d, t)``-CDA, by depth-first set cover over the non-masking pairs.

    Each pair (S, T) needs a row covering T and no member of S; the search
    branches on the rows that satisfy the first unsatisfied pair. Returns
    ``None`` if no array of size at most ``limit`` exists.
    """
    rows = model.rows()
    vi = valid_interactions(model, t)
    need = []
    for S in combinations(vi, d):
        for T in vi:
            if T in S or masks(model, S, T):
                continue
            need.append(frozenset(i for i, r in enumerate(rows)
                                  if covers(r, T) and not any(covers(r, x) for x in S)))
    need = sorted(set(need), key=len)

    def feasible(chosen, n_left):
        open_ = [e for e in need if not (e & chosen)]
        if not open_:
            return True
        if n_left == 0:
            return False
        first = min(open_, key=len)
        for i in sorted(first):
            if feasible(chosen | {i}, n_left - 1):
                return True
        return False

    for n in range(0, limit + 1):
        if feasible(frozenset(), n):
            return n
    return None


def exists_cda_of_size(model, d, t, n):
    """True iff some ``n`` distinct valid rows form a ``(d, t)``-CDA."""
    return min_cda_size(model, d, t, n) is not None


# -- random models ---------------------------------------------------------


def random_model_spec(rng: random.Random, max_k=5, max_size=3, max_constraints=3):
    """Random sizes and constraints admitting at least one valid row.

    Constraints are either ``Fi = a -> Fj != b`` or ``!(Fi = a && Fj = b)``
    style forbidden pairs, returned both as DSL text and as a RefModel.
    """
    while True:
        k = rng.randint(2, max_k)
        sizes = [rng.randint(2, max_size) for _ in range(k)]
        cons = []
        for _ in range(rng.randint(0, max_constraints)):
            i, j = rng.sample(range(k), 2)
            a, b = rng.randrange(sizes[i]), rng.randrange(sizes[j])
            kind = rng.choice(["implies-neq", "forbid", "implies-eq"])
            cons.append((kind, i, a, j, b))
        ref = RefModel(sizes, [_predicate(c) for c in cons])
        if ref.rows():
            return ref, _dsl(sizes, cons)


def _predicate(c):
    kind, i, a, j, b = c
    if kind == "implies-neq":
        return lambda r: r[i] != a or r[j] != b
    if kind == "forbid":
        return lambda r: not (r[i] == a and r[j] == b)
    return lambda r: r[i] != a or r[j] == b


def _dsl(sizes, cons):
    lines = ['model "random";']
    for p, s in enumerate(sizes):
        lines.append(f"param P{p} : " + " | ".join(f"v{v}" for v in range(s)) + " ;")
    for kind, i, a, j, b in cons:
        if kind == "implies-neq":
            lines.append(f"constraint P{i} = v{a} -> P{j} != v{b} ;")
        elif kind == "forbid":
            lines.append(f"constraint !(P{i} = v{a} && P{j} = v{b}) ;")
        else:
            lines.append(f"constraint P{i} = v{a} -> P{j} = v{b} ;")
    return "\n".join(lines) + "\n"
