"""Per-trial figures of merit: sum rate, worst rate, interference-aware random baseline."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .matching import Matching
from .scenario import NetworkInstance, ScenarioConfig, channel_gain, link_gains

RANDOM_POWER_FACTOR = 2.0


@dataclass(frozen=True)
class TrialMetrics:
    algorithm: str
    sum_rate: float
    min_rate: float
    num_matched: int
    proposal_count: Optional[int] = None
    rounds: Optional[int] = None

    def as_dict(self):
        out = {"sum_rate": self.sum_rate, "min_rate": self.min_rate, "num_matched": self.num_matched}
        if self.proposal_count is not None:
            out["proposal_count"] = self.proposal_count
            out["rounds"] = self.rounds
        return out


def matched_sum_and_min(matching: Matching, eta: np.ndarray) -> Tuple[float, float, int]:
    """Sum and minimum of the matched SUs' interference-free rates.

    Unmatched SUs do not transmit and are left out of the minimum. An empty
    matching gives (0, 0, 0).
    """
    rates = [float(eta[m, n]) for m, n in enumerate(matching.pu_of_su) if n is not None]
    if not rates:
        return 0.0, 0.0, 0
    return float(np.sum(rates)), float(min(rates)), len(rates)


def random_allocation_sinr(cfg: ScenarioConfig, inst: NetworkInstance, choices, power_factor=RANDOM_POWER_FACTOR):
    """SINR of every SU when all SUs transmit on their chosen bands.

    Interference from SU m' to SU m on band n uses the band's link
    coefficient and the distance from m' transmitter to m receiver.
    """
    choices = np.asarray(choices)
    M = inst.num_sus
    p = power_factor * cfg.su_power_mw
    rows = np.arange(M)
    signal = p * np.square(link_gains(cfg, inst)[rows, choices])
    # cross[i, j]: power from SU i's transmitter at SU j's receiver on SU j's band
    g_cross = channel_gain(inst.beta_prime[choices][None, :], cfg.path_loss_constant, inst.d_su_su, cfg.path_loss_exponent)
    cross = p * np.square(g_cross)
    same = choices[:, None] == choices[None, :]
    np.fill_diagonal(same, False)
    interference = np.sum(np.where(same, cross, 0.0), axis=0)
    return signal / (cfg.noise_mw + interference)


def random_allocation_rates(cfg: ScenarioConfig, inst: NetworkInstance, choices, power_factor=RANDOM_POWER_FACTOR):
    """(sum, min) of per-SU rates over all SUs under the random baseline."""
    rates = np.log2(1.0 + random_allocation_sinr(cfg, inst, choices, power_factor))
    return float(np.sum(rates)), float(np.min(rates))


def improvement_pct(a: float, b: float) -> float:
    if b <= 0:
        raise ValueError("reference value must be positive")
    return 100.0 * (a - b) / b
