"""SU proposal values, SU preference lists, and PU-side utilities."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np


class PuUtility:
    """A strictly increasing map from an SU's offered value to a PU's utility.

    Monotonicity is spot-checked on a grid when the object is built; the
    comparison in :func:`pu_prefers` relies on it holding everywhere.
    """

    def __init__(self, fn: Callable[[float], float], name: str = "custom"):
        self.fn = fn
        self.name = name
        grid = np.linspace(-20.0, 20.0, 401)
        vals = np.array([fn(v) for v in grid], dtype=float)
        if not np.all(np.diff(vals) > 0):
            raise ValueError(f"PU utility {name!r} is not strictly increasing")

    def __call__(self, v: float) -> float:
        return self.fn(v)

    def __repr__(self):
        return f"PuUtility({self.name})"


EXP_UTILITY = PuUtility(lambda v: -np.expm1(-v), "exp")  # 1 - e^{-v}
IDENTITY_UTILITY = PuUtility(lambda v: v, "identity")

UTILITIES = {"exp": EXP_UTILITY, "identity": IDENTITY_UTILITY}


def su_utility(delta, eta, alpha):
    """Weighted sum ``-alpha*delta + (1-alpha)*eta``."""
    return -np.multiply(alpha, delta) + (1.0 - np.asarray(alpha)) * np.asarray(eta)


@dataclass(frozen=True)
class ProposalTable:
    """Per-SU proposal values and the ordered bands each SU will propose to.

    ``pref_lists[m]`` holds band indices, best first. ``filtered`` records
    whether non-positive offers were dropped.
    """

    values: np.ndarray  # (M, N) v
    delta: np.ndarray  # (M, N)
    pref_lists: Tuple[Tuple[int, ...], ...]
    filtered: bool = True

    @property
    def num_sus(self) -> int:
        return self.values.shape[0]

    @property
    def num_pus(self) -> int:
        return self.values.shape[1]

    def rank(self, m: int, n: int) -> int:
        """Position of band n in SU m's list (-1 if absent)."""
        try:
            return self.pref_lists[m].index(n)
        except ValueError:
            return -1

    def filter_positive(self) -> "ProposalTable":
        lists = tuple(tuple(n for n in row if self.values[m, n] > 0) for m, row in enumerate(self.pref_lists))
        return ProposalTable(self.values, self.delta, lists, filtered=True)


def build_preferences(delta, eta, alpha, *, filter_nonpositive: bool = True, order_by: str = "delta") -> ProposalTable:
    """Rank bands per SU and compute the values they offer.

    ``order_by="delta"`` sorts by ascending log a-posteriori ratio (lower
    means more confidently vacant); ``"utility"`` sorts by descending offer
    value instead. Ties go to the lower band index. Filtering keeps only
    strictly positive offers and never reorders survivors.
    """
    delta = np.asarray(delta, dtype=float)
    eta = np.asarray(eta, dtype=float)
    M, N = delta.shape
    if eta.shape != (M, N):
        raise ValueError("delta and eta must have the same shape")
    alpha = np.broadcast_to(np.asarray(alpha, dtype=float), (M,))
    values = su_utility(delta, eta, alpha[:, None])

    if order_by == "delta":
        keys = delta
    elif order_by == "utility":
        keys = -values
    else:
        raise ValueError(f"unknown order_by {order_by!r}")

    lists = []
    for m in range(M):
        # stable sort -> ascending index among equal keys
        ordered = np.argsort(keys[m], kind="stable")
        if filter_nonpositive:
            ordered = [n for n in ordered if values[m, n] > 0]
        lists.append(tuple(int(n) for n in ordered))
    return ProposalTable(values, delta, tuple(lists), filtered=filter_nonpositive)


def pu_prefers(u_fn: Callable[[float], float], v_new: float, v_incumbent: float) -> bool:
    """True when the newcomer strictly beats the incumbent; ties keep the incumbent.

    For a validated :class:`PuUtility` the offers are compared directly,
    which is equivalent for a strictly increasing map and avoids float
    saturation (``1 - exp(-v)`` is exactly 1.0 for v above ~37).
    """
    if isinstance(u_fn, PuUtility):
        return bool(v_new > v_incumbent)
    return bool(u_fn(v_new) > u_fn(v_incumbent))


def pu_utility(u_fn: Callable[[float], float], v: float, active: bool) -> float:
    if active:
        return 0.0
    return float(u_fn(v))
