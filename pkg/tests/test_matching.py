import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crnmatch.fuzz import random_game
from crnmatch.matching import (
    InconsistentMatchingError,
    Matching,
    brute_force_stable_matchings,
    enumerate_matchings,
    is_stable,
    run_algorithm1,
    run_deferred_acceptance,
    run_random_allocation,
    su_optimal,
)
from crnmatch.preferences import EXP_UTILITY, IDENTITY_UTILITY, ProposalTable
from crnmatch.scenario import ScenarioConfig, sample_instance

U = EXP_UTILITY
INACTIVE2 = np.zeros(2, dtype=bool)


def table(values, lists, delta=None, filtered=True):
    values = np.asarray(values, dtype=float)
    delta = np.zeros_like(values) if delta is None else np.asarray(delta, dtype=float)
    return ProposalTable(values, delta, tuple(tuple(r) for r in lists), filtered)


def conflict_table():
    # both SUs rank band 0 first; band 0 values SU 0 more
    return table([[3.0, 1.0], [2.0, 1.0]], [[0, 1], [0, 1]])


def oracle_stable_sets(tab, active):
    """Independent enumeration: all injective maps, stability by definition."""
    M = tab.num_sus
    found = set()
    options = [[None] + [n for n in tab.pref_lists[m] if not active[n]] for m in range(M)]
    for combo in itertools.product(*options):
        used = [n for n in combo if n is not None]
        if len(used) != len(set(used)):
            continue
        holder = {n: m for m, n in enumerate(combo) if n is not None}
        blocked = False
        for m in range(M):
            lst = tab.pref_lists[m]
            for n in lst:
                if active[n] or combo[m] == n:
                    continue
                su_wants = combo[m] is None or lst.index(n) < lst.index(combo[m])
                pu_wants = n not in holder or tab.values[m, n] > tab.values[holder[n], n]
                if su_wants and pu_wants:
                    blocked = True
        if not blocked:
            found.add(frozenset((m, n) for m, n in enumerate(combo) if n is not None))
    return found


def test_no_conflict_example():
    t = table([[1.0, 1.0], [1.0, 1.0]], [[0, 1], [1, 0]])
    mt = run_algorithm1(t, U, INACTIVE2)
    assert mt.pairs == {(0, 0), (1, 1)}
    assert mt.proposal_count == 2 and mt.rounds == 1


def test_conflict_example_hand_trace():
    trace = []
    mt = run_algorithm1(conflict_table(), U, INACTIVE2, trace=trace)
    assert mt.pairs == {(0, 0), (1, 1)}
    assert mt.proposal_count == 3 and mt.rounds == 2
    assert [(e.su, e.band, e.outcome) for e in trace] == [(0, 0, "accepted"), (1, 0, "rejected"), (1, 1, "accepted")]
    assert is_stable(mt, conflict_table(), U, INACTIVE2).stable


def test_displacement_trace():
    # SU 1 arrives second with the better offer and displaces SU 0
    t = table([[2.0, 1.0], [3.0, 1.0]], [[0, 1], [0, 1]])
    trace = []
    mt = run_algorithm1(t, U, INACTIVE2, trace=trace)
    assert mt.pairs == {(1, 0), (0, 1)}
    assert trace[1].outcome == "displaced" and trace[1].displaced == 0


def test_all_active_rejects_everything():
    mt = run_algorithm1(conflict_table(), U, np.array([True, True]))
    assert mt.pairs == frozenset()
    assert mt.proposal_count == 4


def test_da_matches_filtered_when_all_positive():
    t = conflict_table()
    assert run_deferred_acceptance(t, U, INACTIVE2).pairs == run_algorithm1(t, U, INACTIVE2).pairs


def test_da_keeps_negative_offers():
    t = table([[-1.0, -2.0]], [[0, 1]], filtered=False)
    assert run_algorithm1(t, U, INACTIVE2).pairs == frozenset()
    assert run_deferred_acceptance(t, U, INACTIVE2).pairs == {(0, 0)}


def test_swapped_conflict_is_blocked():
    swapped = Matching.from_pairs([(0, 1), (1, 0)], 2, 2)
    report = is_stable(swapped, conflict_table(), U, INACTIVE2)
    assert not report.stable
    assert report.blocking_pairs == [(0, 0)]


def test_empty_matching_empty_lists_is_stable():
    t = table([[-1.0, -1.0]], [[]])
    assert is_stable(Matching.empty(1, 2), t, U, INACTIVE2).stable


def test_inconsistent_matching_flagged():
    bad = Matching([0, None], [1, None])
    with pytest.raises(InconsistentMatchingError):
        is_stable(bad, conflict_table(), U, INACTIVE2)
    active_matched = Matching.from_pairs([(0, 0)], 2, 2)
    with pytest.raises(InconsistentMatchingError):
        is_stable(active_matched, conflict_table(), U, np.array([True, False]))
    with pytest.raises(InconsistentMatchingError):
        Matching.from_pairs([(0, 0), (1, 0)], 2, 2)


def test_brute_force_small_cases():
    t = conflict_table()
    assert [m.pairs for m in brute_force_stable_matchings(t, U, np.array([True, True]))] == [frozenset()]
    one = table([[1.0]], [[0]])
    assert [m.pairs for m in brute_force_stable_matchings(one, U, np.zeros(1, bool))] == [frozenset({(0, 0)})]
    with pytest.raises(ValueError):
        enumerate_matchings(table(np.ones((7, 1)), [[0]] * 7), np.zeros(1, bool))


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), M=st.integers(1, 4), N=st.integers(1, 4))
def test_brute_force_matches_independent_oracle(seed, M, N):
    game = random_game(np.random.default_rng(seed), M, N)
    for tab in (game.table, game.full_table):
        ours = {m.pairs for m in brute_force_stable_matchings(tab, U, game.pu_active)}
        assert ours == oracle_stable_sets(tab, game.pu_active)
        mt = run_algorithm1(tab, U, game.pu_active) if tab.filtered else run_deferred_acceptance(tab, U, game.pu_active)
        assert mt.pairs in ours


@settings(max_examples=300, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), M=st.integers(1, 10), N=st.integers(1, 6))
def test_algorithm1_properties(seed, M, N):
    rng = np.random.default_rng(seed)
    game = random_game(rng, M, N)
    mt = run_algorithm1(game.table, U, game.pu_active)
    mt.check_consistent(game.pu_active)
    assert is_stable(mt, game.table, U, game.pu_active).stable
    assert mt.proposal_count <= sum(map(len, game.table.pref_lists))
    assert mt.rounds <= mt.proposal_count
    assert all(game.table.values[m, n] > 0 for m, n in mt.pairs)
    # engine sharing: DA on pre-filtered lists is the same run
    da = run_deferred_acceptance(game.table, U, game.pu_active)
    assert (da.pairs, da.proposal_count, da.rounds) == (mt.pairs, mt.proposal_count, mt.rounds)
    # processing order does not change the outcome without ties
    order = rng.permutation(M)
    assert run_algorithm1(game.table, U, game.pu_active, order=order).pairs == mt.pairs
    assert run_algorithm1(game.table, IDENTITY_UTILITY, game.pu_active).pairs == mt.pairs


def test_filtered_lists_applied_even_if_table_unfiltered():
    game = random_game(np.random.default_rng(5), 6, 4)
    assert run_algorithm1(game.full_table, U, game.pu_active).pairs == run_algorithm1(game.table, U, game.pu_active).pairs


@pytest.mark.parametrize("M", [3, 4, 6])
def test_full_association_counts(M):
    N = 4
    v = np.random.default_rng(M).uniform(0.1, 5, size=(M, N))
    lists = [tuple(np.argsort(-v[m])) for m in range(M)]
    mt = run_algorithm1(table(v, lists), U, np.zeros(N, bool))
    assert mt.num_matched == min(M, N)


def test_da_is_su_optimal_small():
    rng = np.random.default_rng(21)
    for _ in range(100):
        game = random_game(rng, int(rng.integers(1, 5)), int(rng.integers(1, 5)))
        stable = brute_force_stable_matchings(game.full_table, U, game.pu_active)
        best = su_optimal(stable, game.full_table)
        assert best is not None
        assert run_deferred_acceptance(game.full_table, U, game.pu_active).pairs == best.pairs


def test_random_allocation():
    cfg1 = ScenarioConfig(num_sus=7, num_pus=1)
    assert np.all(run_random_allocation(cfg1, sample_instance(cfg1, 0), 3) == 0)
    cfg = ScenarioConfig(num_sus=10, num_pus=4)
    inst = sample_instance(cfg, 0)
    assert np.array_equal(run_random_allocation(cfg, inst, 99), run_random_allocation(cfg, inst, 99))

    rng = np.random.default_rng(2)
    choices = np.concatenate([run_random_allocation(cfg, inst, rng) for _ in range(10_000)])
    assert choices.size == 100_000
    freq = np.bincount(choices, minlength=4) / choices.size
    assert np.all(np.abs(freq - 0.25) <= 0.01)
