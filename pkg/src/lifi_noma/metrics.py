"""Energy efficiency and user outage probability metrics.

Energy efficiency is the target sum rate divided by the total electrical
transmit power (bits/J/Hz in relative units). Outage is counted per link:
downlink users go out when the access point cannot carry everyone below its
total-power cap (highest-power users are shed first), uplink users go out
individually when their own required power exceeds the per-device cap.
Powers of ``inf`` mark users whose allocation was infeasible; they always
count as outages.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .allocation import QosRates

__all__ = [
    "EnergyEfficiencyResult",
    "LinkOutage",
    "OutageResult",
    "energy_efficiency",
    "downlink_uop",
    "uplink_uop",
    "downlink_outage_mask",
    "uplink_outage_mask",
]


@dataclass(frozen=True)
class EnergyEfficiencyResult:
    sum_rate: float
    total_power: float
    eta: float


@dataclass(frozen=True)
class LinkOutage:
    """Outage count and probability for one link."""

    k_out: int
    uop: float


@dataclass(frozen=True)
class OutageResult:
    """Both links' outage statistics, mirroring the per-link parts."""

    k_out_dl: int
    k_out_ul: int
    uop_dl: float
    uop_ul: float

    @classmethod
    def from_links(cls, downlink: LinkOutage, uplink: LinkOutage) -> "OutageResult":
        return cls(downlink.k_out, uplink.k_out, downlink.uop, uplink.uop)


def energy_efficiency(rates: Iterable[QosRates], total_power: float) -> EnergyEfficiencyResult:
    """Target sum rate over total transmit power.

    ``rates`` is the served users' per-link requirements; an infinite power
    (infeasible system) yields eta = 0.

    Raises:
        ValueError: for zero or negative power.
    """
    if total_power <= 0.0:
        raise ValueError(f"total power must be positive, got {total_power}")
    sum_rate = float(sum(q.combined for q in rates))
    return EnergyEfficiencyResult(sum_rate, float(total_power), sum_rate / total_power)


def downlink_uop(powers: Sequence[float], max_total_power: float) -> LinkOutage:
    """Downlink outage from the access point's total-power cap.

    Sort the per-user powers in descending order and walk the tail sums:
    position k is in outage when its power plus all smaller ones still
    exceeds the cap. Equivalently, the highest-power users are shed one by
    one until the remainder fits.
    """
    if not len(powers):
        return LinkOutage(0, 0.0)
    ordered = sorted((float(p) for p in powers), reverse=True)
    k_out = 0
    tail = 0.0
    for p in reversed(ordered):  # accumulate the tail from the smallest power up
        tail += p
        # infeasible (infinite) demands are outages even under an infinite cap
        if tail > max_total_power or math.isinf(tail):
            k_out += 1
    return LinkOutage(k_out, k_out / len(ordered))


def uplink_uop(powers: Sequence[float], max_user_power: float) -> LinkOutage:
    """Uplink outage: users whose own power demand strictly exceeds the cap."""
    if not len(powers):
        return LinkOutage(0, 0.0)
    k_out = sum(1 for p in powers if float(p) > max_user_power or math.isinf(float(p)))
    return LinkOutage(k_out, k_out / len(powers))


def downlink_outage_mask(powers: Sequence[float], max_total_power: float) -> np.ndarray:
    """Boolean mask of the downlink users shed by the cap.

    The shed set is the ``k_out`` highest-power users (ties resolved toward
    the lower index), matching the tail-sum count of :func:`downlink_uop`.
    """
    k_out = downlink_uop(powers, max_total_power).k_out
    order = sorted(range(len(powers)), key=lambda i: (-float(powers[i]), i))
    mask = np.zeros(len(powers), dtype=bool)
    mask[order[:k_out]] = True
    return mask


def uplink_outage_mask(powers: Sequence[float], max_user_power: float) -> np.ndarray:
    return np.asarray(
        [float(p) > max_user_power or math.isinf(float(p)) for p in powers], dtype=bool
    )
