"""Random matching games for stability fuzzing.

The physical model rarely produces offers near zero, so these synthetic
games draw ranking metrics and rates directly to exercise filtering, ties
in list order and active PUs.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .preferences import ProposalTable, build_preferences


class RandomGame(NamedTuple):
    table: ProposalTable
    full_table: ProposalTable
    pu_active: np.ndarray


def random_game(rng: np.random.Generator, num_sus: int, num_pus: int, p_active: float = 0.25) -> RandomGame:
    delta = rng.normal(0.0, 3.0, size=(num_sus, num_pus))
    eta = rng.uniform(0.0, 4.0, size=(num_sus, num_pus))
    alpha = rng.uniform(0.0, 1.0, size=num_sus)
    active = rng.uniform(size=num_pus) < p_active
    return RandomGame(
        build_preferences(delta, eta, alpha),
        build_preferences(delta, eta, alpha, filter_nonpositive=False),
        active,
    )
