"""Minimum-size ``(d, t)``-CDAs by satisfiability.

``build_exist_cda`` encodes "an N-row array of valid test cases in which
every non-masking pair ``(S, T)`` has a row covering ``T`` and no member of
``S``". ``generate_min_cda`` starts one below the size of a ``(d+t)``-CCA
and walks down one size at a time until the formula turns unsatisfiable or
the budget runs out.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

from .cca import cca_upper_bound
from .constraints import CNF, Status, decode_row, encode_row, solve
from .interactions import DEFAULT_PAIR_CAP, MaskingUniverse, compute_universe
from .model import SutModel, TestArray
from .report import GenerationReport
from .verify import check_cda

DEFAULT_CLAUSE_CAP = 20_000_000


class FormulaTooLarge(RuntimeError):
    """The encoding would exceed the clause budget."""


@dataclass
class ExistCDA:
    cnf: CNF
    rows: list  # rows[n][p][v] -> variable
    selectors: range = range(0)  # pair selector variables, tried true first

    def decode(self, outcome, model: SutModel) -> TestArray:
        return TestArray(model, [decode_row(outcome, x) for x in self.rows])


def build_exist_cda(model: SutModel, d: int, t: int, n_rows: int, universe: MaskingUniverse,
                    clause_cap: int = DEFAULT_CLAUSE_CAP) -> ExistCDA:
    """CNF satisfiable iff a ``(d, t)``-CDA with ``n_rows`` rows exists.

    Per row, ``c[T]`` implies the row covers ``T`` and ``u[S]`` implies it
    covers no member of ``S``; both are shared across all pairs mentioning
    them. A pair's selector ``z`` implies ``c[T]`` and ``u[S]``, and each pair
    needs some row's selector. Only these directions are needed for
    equisatisfiability.
    """
    if n_rows < 0:
        raise ValueError("n_rows must be non-negative")
    estimate = n_rows * len(universe) * 3
    if estimate > clause_cap:
        raise FormulaTooLarge(f"about {estimate} clauses exceed the cap of {clause_cap}")
    cnf = CNF()
    rows = [encode_row(cnf, model) for _ in range(n_rows)]
    if not universe.pairs:
        return ExistCDA(cnf, rows)
    if n_rows == 0:
        cnf.add([])
        return ExistCDA(cnf, rows)

    used_t = sorted({x for _, x in universe.pairs})
    used_s = sorted({s for s, _ in universe.pairs})
    cover = []  # cover[n][ti] literal
    avoid = []  # avoid[n][si] literal, None for the empty set
    for x in rows:
        c = {}
        for ti in used_t:
            inter = universe.interactions[ti]
            if len(inter) == 1:
                (p, v), = inter
                c[ti] = x[p][v]
            else:
                g = cnf.new_var()
                for p, v in inter:
                    cnf.add([-g, x[p][v]])
                c[ti] = g
        cover.append(c)
        u = {}
        for si in used_s:
            members = universe.sets[si]
            if not members:
                u[si] = None
                continue
            g = cnf.new_var()
            for inter in members:
                cnf.add([-g] + [-x[p][v] for p, v in inter])
            u[si] = g
        avoid.append(u)

    first_selector = cnf.num_vars + 1
    for si, ti in universe.pairs:
        if not universe.sets[si]:
            cnf.add([cover[n][ti] for n in range(n_rows)])
            continue
        sel = []
        for n in range(n_rows):
            z = cnf.new_var()
            cnf.add([-z, cover[n][ti]])
            cnf.add([-z, avoid[n][si]])
            sel.append(z)
        cnf.add(sel)
    return ExistCDA(cnf, rows, range(first_selector, cnf.num_vars + 1))


def default_budget_ms():
    """Budget from ``CDAKIT_BUDGET_MS`` (unset or empty means unbounded)."""
    raw = os.environ.get("CDAKIT_BUDGET_MS", "").strip()
    return int(raw) if raw else None


def generate_min_cda(model: SutModel, d: int, t: int, seed: int = 0,
                     budget_ms: float | None = None, universe: MaskingUniverse | None = None,
                     cap: int = DEFAULT_PAIR_CAP, dimacs_dir: str | None = None) -> GenerationReport:
    """Descending linear search for a minimum ``(d, t)``-CDA.

    ``budget_ms`` is one wall-clock budget across all sizes (``None`` means
    unbounded). The report is ``optimal`` only when the size just below the
    returned array was refuted.
    """
    start = time.perf_counter()
    deadline = None if budget_ms is None else start + budget_ms / 1000.0
    best = cca_upper_bound(model, d, t, seed)
    emitted = [best]
    log = []
    optimal = False

    def remaining():
        return None if deadline is None else deadline - time.perf_counter()

    if budget_ms is None or budget_ms > 0:
        if universe is None:
            universe = compute_universe(model, d, t, cap)
        n = len(best) - 1
        while n >= 0:
            left = remaining()
            if left is not None and left <= 0:
                break
            t0 = time.perf_counter()
            enc = build_exist_cda(model, d, t, n, universe)
            if dimacs_dir:
                os.makedirs(dimacs_dir, exist_ok=True)
                with open(os.path.join(dimacs_dir, f"exist_cda_N{n}.cnf"), "w") as fh:
                    fh.write(enc.cnf.to_dimacs())
            out = solve(enc.cnf, remaining(), seed, positive=enc.selectors)
            log.append({
                "size": n,
                "status": out.status.value,
                "vars": enc.cnf.num_vars,
                "clauses": len(enc.cnf.clauses),
                "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3),
            })
            if out.status is Status.SAT:
                array = enc.decode(out, model)
                bad = check_cda(array, model, d, t, cap=cap)
                if bad is not None:
                    raise AssertionError(f"decoded array fails verification: {bad}")
                best = array
                emitted.append(array)
                n -= 1
            elif out.status is Status.UNSAT:
                optimal = True
                break
            else:
                break

    return GenerationReport(
        model_name=model.name,
        algorithm="sat",
        d=d,
        t=t,
        array=best,
        seed=seed,
        wall_time_ms=(time.perf_counter() - start) * 1000,
        optimal=optimal,
        size_log=log,
        emitted=emitted,
    )
