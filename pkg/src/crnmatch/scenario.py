"""Network geometry sampling and physical-layer quantities.

Powers are handled in linear milliwatts everywhere; dBm only appears in
:class:`ScenarioConfig`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]

DEFAULT_PRIOR_ROW = (0.1, 0.2, 0.3, 0.4)


def default_prior_row(num_pus: int) -> np.ndarray:
    """Prior row [.1, .2, .3, .4] for N=4, cycled through .1 ... .9 for other N."""
    return np.array([0.1 * (1 + n % 9) for n in range(num_pus)])


@dataclass(frozen=True)
class ScenarioConfig:
    num_sus: int = 10
    num_pus: int = 4
    area_side: float = 100.0
    su_tx_power_dbm: float = 13.0
    pu_tx_power_dbm: float = 17.0
    noise_dbm: float = -90.0
    path_loss_exponent: float = 3.0
    path_loss_constant: float = 1.0
    link_radius: float = 10.0
    beta_range: Tuple[float, float] = (0.5, 1.5)
    # None -> default_prior_row; 1-D -> shared by every SU; 2-D -> per SU.
    priors: Optional[Sequence] = None
    alpha: Union[float, Sequence[float]] = 0.5
    # None -> every PU inactive.
    truth_activity: Optional[Sequence[bool]] = None
    # None -> sqrt of the linear PU transmit power.
    pu_signal_amplitude: Optional[float] = None
    rng_seed: int = 0

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if int(self.num_sus) < 1 or int(self.num_pus) < 1:
            raise ValueError("num_sus and num_pus must be >= 1")
        if self.area_side < 0 or self.link_radius < 0:
            raise ValueError("area_side and link_radius must be non-negative")
        if self.path_loss_constant < 0:
            raise ValueError("path_loss_constant must be non-negative")
        lo, hi = self.beta_range
        if not 0 < lo <= hi:
            raise ValueError(f"beta_range must satisfy 0 < lo <= hi, got {self.beta_range}")
        pri = self.prior_matrix()
        if not np.all((pri > 0) & (pri < 1)):
            raise ValueError("priors must lie strictly inside (0, 1)")
        a = self.alpha_vector()
        if not np.all((a >= 0) & (a <= 1)):
            raise ValueError("alpha must lie in [0, 1]")
        self.activity()

    def prior_matrix(self) -> np.ndarray:
        M, N = self.num_sus, self.num_pus
        if self.priors is None:
            row = default_prior_row(N)
            return np.tile(row, (M, 1))
        p = np.asarray(self.priors, dtype=float)
        if p.ndim == 1:
            if p.shape != (N,):
                raise ValueError(f"prior row must have {N} entries, got {p.shape}")
            return np.tile(p, (M, 1))
        if p.shape != (M, N):
            raise ValueError(f"prior matrix must be {M}x{N}, got {p.shape}")
        return p.copy()

    def alpha_vector(self) -> np.ndarray:
        a = np.asarray(self.alpha, dtype=float)
        if a.ndim == 0:
            return np.full(self.num_sus, float(a))
        if a.shape != (self.num_sus,):
            raise ValueError(f"alpha must be scalar or have {self.num_sus} entries")
        return a.copy()

    def activity(self) -> np.ndarray:
        if self.truth_activity is None:
            return np.zeros(self.num_pus, dtype=bool)
        act = np.asarray(self.truth_activity, dtype=bool)
        if act.shape != (self.num_pus,):
            raise ValueError(f"truth_activity must have {self.num_pus} entries")
        return act

    @property
    def su_power_mw(self) -> float:
        return dbm_to_linear(self.su_tx_power_dbm)

    @property
    def noise_mw(self) -> float:
        return dbm_to_linear(self.noise_dbm)

    @property
    def signal_amplitude(self) -> float:
        if self.pu_signal_amplitude is not None:
            return float(self.pu_signal_amplitude)
        return float(np.sqrt(dbm_to_linear(self.pu_tx_power_dbm)))


@dataclass
class NetworkInstance:
    su_tx_pos: np.ndarray  # (M, 2)
    su_rx_pos: np.ndarray  # (M, 2)
    pu_tx_pos: np.ndarray  # (N, 2)
    beta: np.ndarray  # (N,) sensing-channel coefficients
    beta_prime: np.ndarray  # (N,) SU-link coefficients
    pu_active: np.ndarray  # (N,) bool
    d_su_pu: np.ndarray = field(init=False)
    d_su_su: np.ndarray = field(init=False)

    def __post_init__(self):
        self.d_su_pu = _pairwise(self.su_tx_pos, self.pu_tx_pos)
        # row = interfering SU transmitter, column = victim SU receiver
        self.d_su_su = _pairwise(self.su_tx_pos, self.su_rx_pos)

    @property
    def d_su_link(self) -> np.ndarray:
        return np.diagonal(self.d_su_su).copy()

    @property
    def num_sus(self) -> int:
        return self.su_tx_pos.shape[0]

    @property
    def num_pus(self) -> int:
        return self.pu_tx_pos.shape[0]


def _pairwise(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    diff = a[:, None, :] - b[None, :, :]
    return np.sqrt(np.sum(diff * diff, axis=-1))


def as_generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_instance(cfg: ScenarioConfig, seed: SeedLike) -> NetworkInstance:
    """Draw one network realisation.

    SU and PU transmitters are uniform in the square. Each SU receiver is
    uniform in the disk of radius ``cfg.link_radius`` around its transmitter,
    redrawn until it falls inside the square.
    """
    rng = as_generator(seed)
    M, N, L = cfg.num_sus, cfg.num_pus, float(cfg.area_side)
    su_tx = rng.uniform(0.0, L, size=(M, 2))
    pu_tx = rng.uniform(0.0, L, size=(N, 2))
    lo, hi = cfg.beta_range
    beta = rng.uniform(lo, hi, size=N)
    beta_prime = rng.uniform(lo, hi, size=N)

    su_rx = su_tx.copy()
    if L > 0 and cfg.link_radius > 0:
        todo = np.arange(M)
        while todo.size:
            r = cfg.link_radius * np.sqrt(rng.uniform(size=todo.size))
            theta = rng.uniform(0.0, 2 * np.pi, size=todo.size)
            cand = su_tx[todo] + np.column_stack((r * np.cos(theta), r * np.sin(theta)))
            ok = np.all((cand >= 0.0) & (cand <= L), axis=1)
            su_rx[todo[ok]] = cand[ok]
            todo = todo[~ok]

    return NetworkInstance(
        su_tx_pos=su_tx,
        su_rx_pos=su_rx,
        pu_tx_pos=pu_tx,
        beta=beta,
        beta_prime=beta_prime,
        pu_active=cfg.activity().copy(),
    )


def dbm_to_linear(p_dbm):
    """Convert dBm to milliwatts."""
    if np.ndim(p_dbm):
        return 10.0 ** (np.asarray(p_dbm, dtype=float) / 10.0)
    return 10.0 ** (float(p_dbm) / 10.0)


def channel_gain(beta, k, d, gamma):
    """Amplitude gain ``sqrt(beta / (1 + k d^gamma))``; finite at d = 0."""
    return np.sqrt(beta / (1.0 + k * np.power(d, gamma)))


def achievable_rate(p_tx_mw, g, noise_mw):
    """Shannon rate in bits/s/Hz for transmit power, amplitude gain and noise power."""
    return np.log2(1.0 + p_tx_mw * np.square(g) / noise_mw)


def link_gains(cfg: ScenarioConfig, inst: NetworkInstance) -> np.ndarray:
    """M x N gains of each SU's own link on every band."""
    d = inst.d_su_link[:, None]
    return channel_gain(inst.beta_prime[None, :], cfg.path_loss_constant, d, cfg.path_loss_exponent)


def sensing_gains(cfg: ScenarioConfig, inst: NetworkInstance) -> np.ndarray:
    """M x N gains from PU transmitter n to SU transmitter m."""
    return channel_gain(inst.beta[None, :], cfg.path_loss_constant, inst.d_su_pu, cfg.path_loss_exponent)


def rate_matrix(cfg: ScenarioConfig, inst: NetworkInstance) -> np.ndarray:
    """Interference-free rates of every SU on every band at nominal SU power."""
    return achievable_rate(cfg.su_power_mw, link_gains(cfg, inst), cfg.noise_mw)
