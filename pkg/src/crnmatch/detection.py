"""Bayesian soft-decision sensing: observations and log a-posteriori ratios."""
from __future__ import annotations

import enum

import numpy as np

from .scenario import NetworkInstance, ScenarioConfig, SeedLike, as_generator, sensing_gains


class Hypothesis(enum.IntEnum):
    H0 = 0  # band vacant
    H1 = 1  # PU transmitting


def sample_observations(cfg: ScenarioConfig, inst: NetworkInstance, seed: SeedLike) -> np.ndarray:
    """One received sample per (SU, band): noise, plus ``h s`` where the PU is on."""
    rng = as_generator(seed)
    M, N = inst.num_sus, inst.num_pus
    w = np.sqrt(cfg.noise_mw) * rng.standard_normal((M, N))
    signal = sensing_gains(cfg, inst) * cfg.signal_amplitude
    return np.where(inst.pu_active[None, :], signal + w, w)


def log_posterior_ratio(x, h, s, noise_var, prior):
    """log P(H1|x)/P(H0|x) for a known amplitude ``h*s`` in Gaussian noise.

    Uses the closed form with the Gaussian normalisers cancelled, which stays
    finite at any SNR.
    """
    prior = np.asarray(prior, dtype=float)
    if np.any((prior <= 0) | (prior >= 1)):
        raise ValueError("prior must lie strictly inside (0, 1)")
    if np.any(np.asarray(noise_var) <= 0):
        raise ValueError("noise variance must be positive")
    a = np.multiply(h, s)
    out = np.log(prior / (1.0 - prior)) + (2.0 * np.multiply(x, a) - a * a) / (2.0 * noise_var)
    return out if np.ndim(out) else float(out)


def detection_matrix(cfg: ScenarioConfig, inst: NetworkInstance, x: np.ndarray) -> np.ndarray:
    """M x N log a-posteriori ratios for the observations ``x``."""
    h = sensing_gains(cfg, inst)
    return log_posterior_ratio(x, h, cfg.signal_amplitude, cfg.noise_mw, cfg.prior_matrix())


def detect(delta):
    """Sign decision; exactly zero counts as H0."""
    if np.ndim(delta):
        return np.where(np.asarray(delta) > 0, Hypothesis.H1, Hypothesis.H0)
    return Hypothesis.H1 if delta > 0 else Hypothesis.H0
