"""SU-proposing deferred acceptance, the random baseline and stability checks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .preferences import ProposalTable, pu_prefers
from .scenario import NetworkInstance, ScenarioConfig, SeedLike, as_generator

Pair = Tuple[int, int]


class InconsistentMatchingError(ValueError):
    """The matching violates its own structural invariants."""


@dataclass
class Matching:
    su_of_pu: List[Optional[int]]
    pu_of_su: List[Optional[int]]
    proposal_count: int = 0
    rounds: int = 0

    @classmethod
    def empty(cls, num_sus: int, num_pus: int) -> "Matching":
        return cls([None] * num_pus, [None] * num_sus)

    @classmethod
    def from_pairs(cls, pairs, num_sus: int, num_pus: int) -> "Matching":
        out = cls.empty(num_sus, num_pus)
        for m, n in pairs:
            if out.pu_of_su[m] is not None or out.su_of_pu[n] is not None:
                raise InconsistentMatchingError(f"pair ({m}, {n}) reuses a matched player")
            out.pu_of_su[m] = n
            out.su_of_pu[n] = m
        return out

    @property
    def pairs(self) -> FrozenSet[Pair]:
        return frozenset((m, n) for m, n in enumerate(self.pu_of_su) if n is not None)

    @property
    def num_matched(self) -> int:
        return sum(n is not None for n in self.pu_of_su)

    def check_consistent(self, pu_active: Optional[Sequence[bool]] = None) -> None:
        for m, n in enumerate(self.pu_of_su):
            if n is not None and self.su_of_pu[n] != m:
                raise InconsistentMatchingError(f"SU {m} -> band {n} but band {n} -> {self.su_of_pu[n]}")
        for n, m in enumerate(self.su_of_pu):
            if m is not None and self.pu_of_su[m] != n:
                raise InconsistentMatchingError(f"band {n} -> SU {m} but SU {m} -> {self.pu_of_su[m]}")
            if m is not None and pu_active is not None and pu_active[n]:
                raise InconsistentMatchingError(f"active PU {n} is matched")


class TraceEvent(NamedTuple):
    round: int
    su: int
    band: int
    outcome: str  # accepted | rejected | rejected-active | displaced
    displaced: Optional[int] = None


def _deferred_acceptance(
    table: ProposalTable,
    u_fn: Callable[[float], float],
    pu_active: Sequence[bool],
    lists: Sequence[Sequence[int]],
    order: Optional[Sequence[int]] = None,
    trace: Optional[list] = None,
) -> Matching:
    M, N = table.num_sus, table.num_pus
    v = table.values
    order = range(M) if order is None else order
    match = Matching.empty(M, N)
    next_idx = [0] * M

    while True:
        proposers = [m for m in order if match.pu_of_su[m] is None and next_idx[m] < len(lists[m])]
        if not proposers:
            break
        match.rounds += 1
        for m in proposers:
            n = lists[m][next_idx[m]]
            next_idx[m] += 1
            match.proposal_count += 1
            holder = match.su_of_pu[n]
            if pu_active[n]:
                outcome, loser = "rejected-active", None
            elif holder is None:
                match.su_of_pu[n], match.pu_of_su[m] = m, n
                outcome, loser = "accepted", None
            elif pu_prefers(u_fn, v[m, n], v[holder, n]):
                match.pu_of_su[holder] = None
                match.su_of_pu[n], match.pu_of_su[m] = m, n
                outcome, loser = "displaced", holder
            else:
                outcome, loser = "rejected", None
            if trace is not None:
                trace.append(TraceEvent(match.rounds, m, n, outcome, loser))
    return match


def run_algorithm1(table, u_fn, pu_active, *, order=None, trace=None) -> Matching:
    """Deferred acceptance where SUs only propose where their offer is positive.

    Each round, every unmatched SU with bands left proposes to its next
    band; proposals are resolved one at a time in SU order. Active PUs reject
    everything. Inactive PUs keep the strictly better offer.
    """
    lists = table.pref_lists if table.filtered else table.filter_positive().pref_lists
    return _deferred_acceptance(table, u_fn, pu_active, lists, order, trace)


def run_deferred_acceptance(table, u_fn, pu_active, *, order=None, trace=None) -> Matching:
    """Plain deferred acceptance on whatever lists the table carries."""
    return _deferred_acceptance(table, u_fn, pu_active, table.pref_lists, order, trace)


def run_random_allocation(cfg: ScenarioConfig, inst: NetworkInstance, seed: SeedLike) -> np.ndarray:
    """Independent uniform band choice (0-based) per SU; collisions allowed."""
    rng = as_generator(seed)
    return rng.integers(0, inst.num_pus, size=inst.num_sus)


class StabilityReport(NamedTuple):
    stable: bool
    blocking_pairs: List[Pair]


def is_stable(matching: Matching, table: ProposalTable, u_fn, pu_active) -> StabilityReport:
    """Scan every acceptable (SU, inactive band) pair for a blocking pair.

    An SU only considers bands on its own list. It blocks with band n if it
    is unmatched or ranks n above its partner, and n is free or values the
    SU's offer strictly more than its holder's.
    """
    matching.check_consistent(pu_active)
    v = table.values
    blocking = []
    for m, row in enumerate(table.pref_lists):
        cur = matching.pu_of_su[m]
        if cur is None:
            cutoff = len(row)
        else:
            cutoff = table.rank(m, cur)
            if cutoff < 0:
                raise InconsistentMatchingError(f"SU {m} is matched to band {cur} outside its list")
        for n in row[:cutoff]:
            if pu_active[n]:
                continue
            holder = matching.su_of_pu[n]
            if holder is None or pu_prefers(u_fn, v[m, n], v[holder, n]):
                blocking.append((m, n))
    return StabilityReport(not blocking, blocking)


MAX_BRUTE_FORCE = 6


def enumerate_matchings(table: ProposalTable, pu_active) -> List[Matching]:
    """Every partial one-to-one matching using listed bands of inactive PUs."""
    M, N = table.num_sus, table.num_pus
    if M > MAX_BRUTE_FORCE or N > MAX_BRUTE_FORCE:
        raise ValueError(f"brute force limited to M, N <= {MAX_BRUTE_FORCE}")
    out = []
    current: List[Pair] = []
    used = [False] * N

    def rec(m):
        if m == M:
            out.append(Matching.from_pairs(current, M, N))
            return
        rec(m + 1)
        for n in table.pref_lists[m]:
            if not used[n] and not pu_active[n]:
                used[n] = True
                current.append((m, n))
                rec(m + 1)
                current.pop()
                used[n] = False

    rec(0)
    return out


def brute_force_stable_matchings(table: ProposalTable, u_fn, pu_active) -> List[Matching]:
    return [mt for mt in enumerate_matchings(table, pu_active) if is_stable(mt, table, u_fn, pu_active).stable]


def su_optimal(stable: Sequence[Matching], table: ProposalTable) -> Optional[Matching]:
    """The stable matching every SU weakly prefers to all others, if one exists."""

    def score(mt, m):
        n = mt.pu_of_su[m]
        return len(table.pref_lists[m]) if n is None else table.rank(m, n)

    for cand in stable:
        if all(score(cand, m) <= score(other, m) for other in stable for m in range(table.num_sus)):
            return cand
    return None
