import random
import time

import pytest

from cdakit.cca import cca_upper_bound, generate_cca
from cdakit.cda_heuristic import (
    DiffRows,
    InvalidSeedError,
    build_diffrows,
    compute_entries,
    generate_heuristic_cda,
    removal_order,
)
from cdakit.interactions import compute_universe, rho
from cdakit.model import SutModel, TestArray
from cdakit.verify import is_cda


@pytest.fixture(scope="module")
def universe12(shop):
    return compute_universe(shop, 1, 2)


def test_entries_match_rho(shop, fig, universe12):
    a = fig("fig4c_cda_1_2")
    state = build_diffrows(a, universe12)
    entries = state.as_dict()
    rng = random.Random(3)
    for S, T in rng.sample(list(universe12), 100):
        assert entries[(S, T)] == rho(a, [T]) - rho(a, S)
    S, T = (((0, 0), (1, 0)),), ((0, 1), (1, 1))
    assert entries[(S, T)]


def test_non_cda_seed_rejected(shop, fig, universe12):
    with pytest.raises(InvalidSeedError):
        DiffRows(fig("fig3a_cca"), universe12)


def test_sole_member_kept(shop, fig, universe12):
    a = fig("fig4c_cda_1_2")
    state = DiffRows(a, universe12)
    e = next(i for i, m in enumerate(state.entries) if bin(m).count("1") == 1)
    row = state.entries[e].bit_length() - 1
    before = list(state.entries)
    assert state.try_remove(row) is False
    assert state.entries == before


def test_duplicate_row_removed(shop, fig, universe12):
    a = fig("fig4c_cda_1_2")
    twin = TestArray(shop, a.rows + (a.rows[0],))
    state = DiffRows(twin, universe12)
    assert state.try_remove(24)
    assert is_cda(TestArray(shop, [twin[i] for i in state.current_rows()]), shop, 1, 2)


def test_row_irrelevant_to_all_entries_keeps_map(shop, universe12):
    a = cca_upper_bound(shop, 1, 2)
    state = DiffRows(a, universe12)
    for r in range(len(a)):
        if not state.by_row[r]:
            before = list(state.entries)
            assert state.try_remove(r)
            assert state.entries == before
            break


def test_incremental_matches_rebuild(shop):
    u = compute_universe(shop, 1, 2)
    seed = TestArray(shop, shop.valid_rows())
    state = DiffRows(seed, u)
    for row in removal_order(len(seed), 5):
        if state.try_remove(row):
            current = state.current_rows()
            sub = TestArray(shop, [seed[i] for i in current])
            rebuilt = compute_entries(sub, u)
            remap = [sum(1 << current.index(i) for i in range(len(seed)) if m >> i & 1) for m in state.entries]
            assert remap == rebuilt
    assert is_cda(TestArray(shop, [seed[i] for i in state.current_rows()]), shop, 1, 2)


def test_generates_cda(shop):
    rep = generate_heuristic_cda(shop, 1, 2, seed=0)
    assert is_cda(rep.array, shop, 1, 2)
    assert rep.size <= len(cca_upper_bound(shop, 1, 2))
    assert sorted(r for r, _ in rep.trace) == list(range(len(cca_upper_bound(shop, 1, 2))))
    assert rep.size == sum(1 for _, removed in rep.trace if not removed)


def test_one_minimal(shop):
    rep = generate_heuristic_cda(shop, 1, 2, seed=4)
    for i in range(rep.size):
        assert not is_cda(rep.array.without(i), shop, 1, 2)


def test_d0_gives_minimal_cca(shop):
    rep = generate_heuristic_cda(shop, 0, 2, seed=1)
    from cdakit.verify import is_cca

    assert is_cca(rep.array, shop, 2)
    for i in range(rep.size):
        assert not is_cca(rep.array.without(i), shop, 2)


def test_deterministic(shop):
    a = generate_heuristic_cda(shop, 1, 2, seed=11)
    b = generate_heuristic_cda(shop, 1, 2, seed=11)
    assert a.array == b.array and a.trace == b.trace


def test_exhaustive_seed(shop):
    rep = generate_heuristic_cda(shop, 1, 2, seed=2, seed_array=TestArray(shop, shop.valid_rows()))
    assert is_cda(rep.array, shop, 1, 2)


def test_range(shop):
    with pytest.raises(ValueError):
        generate_heuristic_cda(shop, 2, 3)


def test_runtime_trend():
    # seed size grows with the strength-(d+t) CCA; time should stay far from cubic blow-up
    times = []
    sizes = []
    for k in (4, 5, 6):
        m = SutModel.from_domains([3] * k)
        seed = generate_cca(m, 2)
        u = compute_universe(m, 1, 1)
        t0 = time.perf_counter()
        generate_heuristic_cda(m, 1, 1, seed_array=seed, universe=u)
        times.append(time.perf_counter() - t0)
        sizes.append(len(seed))
    assert times[-1] < 1.0
