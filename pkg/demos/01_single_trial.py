"""
One trial, step by step
=======================

Sample a network, sense every band, build the SUs' proposals and run the
filtered deferred acceptance next to the two baselines.
"""

# %%
import numpy as np

from crnmatch import ScenarioConfig, sample_instance, rate_matrix
from crnmatch.detection import detection_matrix, sample_observations
from crnmatch.preferences import EXP_UTILITY, build_preferences
from crnmatch.matching import is_stable, run_algorithm1, run_deferred_acceptance, run_random_allocation
from crnmatch.metrics import matched_sum_and_min, random_allocation_rates

np.set_printoptions(precision=3, linewidth=110)

# %%
# Six SUs, three PU bands; PU 1 happens to be transmitting.
cfg = ScenarioConfig(num_sus=6, num_pus=3, priors=[0.2, 0.5, 0.3], truth_activity=[False, True, False])
rng = np.random.default_rng(7)
inst = sample_instance(cfg, rng)
print("SU-to-PU distances [m]:\n", inst.d_su_pu)

# %%
# Log a-posteriori ratios: large negative = confidently vacant.
delta = detection_matrix(cfg, inst, sample_observations(cfg, inst, rng))
eta = rate_matrix(cfg, inst)
print("delta:\n", delta)
print("eta [bit/s/Hz]:\n", eta)

# %%
# Offers mix both terms; the occupied band gets a negative offer and is dropped.
table = build_preferences(delta, eta, cfg.alpha_vector())
full = build_preferences(delta, eta, cfg.alpha_vector(), filter_nonpositive=False)
for m, lst in enumerate(table.pref_lists):
    print(f"SU {m}: proposes to {list(lst)}  (unfiltered {list(full.pref_lists[m])})")

# %%
trace = []
proposed = run_algorithm1(table, EXP_UTILITY, inst.pu_active, trace=trace)
for ev in trace:
    print(ev)
da = run_deferred_acceptance(full, EXP_UTILITY, inst.pu_active)
print("proposed:", sorted(proposed.pairs), "proposals:", proposed.proposal_count)
print("DA:      ", sorted(da.pairs), "proposals:", da.proposal_count)
print("stable:", is_stable(proposed, table, EXP_UTILITY, inst.pu_active))

# %%
choices = run_random_allocation(cfg, inst, rng)
print("proposed (sum, min, matched):", matched_sum_and_min(proposed, eta))
print("random   (sum, min):", random_allocation_rates(cfg, inst, choices), "choices", choices)
