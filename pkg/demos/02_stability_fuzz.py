"""
Fuzzing stability against brute force
======================================

Random matching games with mixed-sign offers and active PUs. Every
outcome of the filtered algorithm should be stable, and for small games it
should be one of the stable matchings found by exhaustive search.
"""

# %%
import numpy as np

from crnmatch.fuzz import random_game
from crnmatch.matching import brute_force_stable_matchings, is_stable, run_algorithm1, run_deferred_acceptance, su_optimal
from crnmatch.preferences import EXP_UTILITY

rng = np.random.default_rng(0)

# %%
unstable = 0
for _ in range(2000):
    game = random_game(rng, int(rng.integers(1, 11)), int(rng.integers(1, 7)))
    mt = run_algorithm1(game.table, EXP_UTILITY, game.pu_active)
    unstable += not is_stable(mt, game.table, EXP_UTILITY, game.pu_active).stable
print("unstable outcomes:", unstable)

# %%
# Small games: how many stable matchings exist, and does DA pick the SU-optimal one?
sizes, optimal = [], 0
for _ in range(300):
    game = random_game(rng, 4, 3)
    stable = brute_force_stable_matchings(game.full_table, EXP_UTILITY, game.pu_active)
    sizes.append(len(stable))
    da = run_deferred_acceptance(game.full_table, EXP_UTILITY, game.pu_active)
    optimal += su_optimal(stable, game.full_table).pairs == da.pairs
print("stable matchings per game: mean %.2f, max %d" % (np.mean(sizes), max(sizes)))
print("DA returned the SU-optimal one in %d / 300 games" % optimal)
