import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdakit.constraints import (
    CNF,
    ConstraintOracle,
    Status,
    check_unmasking,
    complete,
    decode_row,
    encode_row,
    solve,
)
from cdakit.interactions import all_interactions
from cdakit.model import evaluate, parse_model
from oracles import random_model_spec


def test_eval_examples(shop):
    assert evaluate(shop.phi, (0, 0, 0, 0))
    assert not evaluate(shop.phi, (0, 1, 0, 0))
    free = parse_model('model "f"; param A : a | b ;')
    assert all(evaluate(free.phi, (v,)) for v in range(2))


def test_complete_examples(shop):
    assert complete(shop, ((1, 1), (2, 0))) is None
    row = complete(shop, ())
    assert row is not None and shop.is_valid(row)
    row = complete(shop, ((3, 3),))
    assert row[1] == 0 and row[2] == 0 and row[3] == 3


def test_check_unmasking_examples(shop):
    T_a = ((0, 0), (1, 0))
    assert not check_unmasking(shop, [T_a], ((0, 0), (2, 0)))
    assert not check_unmasking(shop, [((2, 0), (3, 3))], ((1, 0), (3, 3)))
    assert check_unmasking(shop, [], ((0, 1), (2, 2)))


def test_solve_contradiction_under_exactly_one(shop):
    cnf = CNF()
    x = encode_row(cnf, shop, assert_phi=False)
    cnf.add([x[0][0]])
    cnf.add([x[0][1]])
    assert solve(cnf).status is Status.UNSAT


def test_solve_empty_and_budget():
    assert solve(CNF()).sat
    cnf = CNF()
    cnf.new_var()
    assert solve(cnf, budget=0).status is Status.BUDGET


def all_models(model):
    """Every row decoded from the one-row encoding, enumerated by blocking."""
    cnf = CNF()
    x = encode_row(cnf, model)
    found = set()
    while True:
        out = solve(cnf)
        if not out.sat:
            return found
        row = decode_row(out, x)
        assert row not in found
        found.add(row)
        cnf.add([-x[p][v] for p, v in enumerate(row)])


def test_encoding_sound_on_running_example(shop):
    assert all_models(shop) == set(shop.valid_rows())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_encoding_sound_random(seed):
    ref, text = random_model_spec(random.Random(seed), max_k=4, max_constraints=4)
    model = parse_model(text)
    assert all_models(model) == set(ref.rows())


def test_dimacs_layout():
    cnf = CNF()
    a, b = cnf.new_var(), cnf.new_var()
    cnf.add([a, -b])
    cnf.add([b])
    assert cnf.to_dimacs() == "p cnf 2 2\n1 -2 0\n2 0\n"


def test_rejects_unknown_method(shop):
    with pytest.raises(ValueError):
        ConstraintOracle(shop, method="magic")


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_backends_agree(seed):
    rng = random.Random(seed)
    ref, text = random_model_spec(rng, max_k=4)
    model = parse_model(text)
    enum = ConstraintOracle(model, "enumerate")
    sat = ConstraintOracle(model, "sat")
    xs = [x for t in (1, 2) for x in all_interactions(model, t)]
    rows = ref.rows()
    for x in xs:
        brute = any(all(r[p] == v for p, v in x) for r in rows)
        assert enum.is_valid(x) == sat.is_valid(x) == brute
        got = sat.complete(x)
        assert (got is None) == (not brute)
        if got is not None:
            assert got in rows and all(got[p] == v for p, v in x)
    valid = [x for x in xs if enum.is_valid(x)]
    for S in rng.sample(list(combinations(valid, 2)), min(15, len(valid) * (len(valid) - 1) // 2)):
        for T in rng.sample(valid, min(6, len(valid))):
            brute = any(all(r[p] == v for p, v in T) and not any(all(r[p] == v for p, v in s) for s in S)
                        for r in rows)
            assert enum.unmasked(S, T) == sat.unmasked(S, T) == brute
        assert enum.distinguishable(S[:1], S[1:]) == sat.distinguishable(S[:1], S[1:])
