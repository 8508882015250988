"""Seeded Monte Carlo engine: populations, trials, campaigns and sweeps.

A trial draws a random user population, pairs it with each configured
pairing method, allocates powers with each configured strategy and records
energy efficiency plus both links' outage probabilities. Campaigns average
many trials. Per-trial RNG streams are derived from ``(seed, trial_index)``
so results are bit-identical regardless of worker count or execution order;
the per-cell averages are reduced in trial order.

Energy efficiency is computed from the full (pre-cap) minimum powers by
default; the power caps only enter the outage statistics. Setting
``ee_served_only`` restricts the EE accounting to users that survive the
caps on each link.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import repeat
from typing import Sequence

import numpy as np

from .allocation import (
    InfeasibleAllocationError,
    PowerLimits,
    QosRates,
    Strategy,
    allocate,
    single_user_allocation,
)
from .channel import NoiseModel, OpticalFrontEnd, UserPosition, channel_gain
from .metrics import (
    OutageResult,
    downlink_outage_mask,
    downlink_uop,
    uplink_outage_mask,
    uplink_uop,
)
from .pairing import (
    QOS_SORT_KEYS,
    PairingOutcome,
    adaptive_pairing,
    make_pair,
    pair_by_channel,
    pair_by_qos,
)

__all__ = [
    "PAIRING_METHODS",
    "ScenarioValidationError",
    "UserNode",
    "ScenarioConfig",
    "CellResult",
    "TrialResult",
    "CellSummary",
    "CampaignSummary",
    "sample_users",
    "population_gains",
    "evaluate_population",
    "run_trial",
    "run_campaign",
    "run_uop_sweep",
    "two_user_sweep",
]

PAIRING_METHODS = ("channel", "qos", "adaptive")


class ScenarioValidationError(ValueError):
    """One or more scenario invariants are violated; lists every problem."""

    def __init__(self, problems: Sequence[str]):
        super().__init__("; ".join(problems))
        self.problems = tuple(problems)


@dataclass(frozen=True)
class UserNode:
    """One IoT device: its location and per-link rate requirements."""

    position: UserPosition
    qos: QosRates


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything a campaign needs; defaults follow the reference desk setup.

    ``num_users`` and ``trials`` have no defaults. The remaining physical
    parameters default to the reference values (70-degree optics, 20 MHz
    band at 1e-22 A^2/Hz noise, users uniform over l in [1.5, 2.5] m and
    r in [0, 3] m). Power caps default to infinity, i.e. no outage.
    """

    num_users: int
    trials: int
    seed: int = 0
    scenario_id: str = "scenario"
    qos_set: tuple[float, ...] = (1.0,)
    l_min: float = 1.5
    l_max: float = 2.5
    r_max: float = 3.0
    front_end: OpticalFrontEnd = field(default_factory=OpticalFrontEnd)
    uplink_front_end: OpticalFrontEnd | None = None
    noise: NoiseModel = field(default_factory=NoiseModel)
    limits: PowerLimits = field(default_factory=PowerLimits)
    strategies: tuple[Strategy, ...] = (
        Strategy.OPA,
        Strategy.NGDPA,
        Strategy.GRPA,
        Strategy.OMA,
    )
    pairings: tuple[str, ...] = ("adaptive",)
    qos_pairing_key: str = "sum"
    qos_coupled_links: bool = False
    ee_served_only: bool = False
    sweep_mode: str = "horizontal"
    sweep_values: tuple[float, ...] | None = None
    sweep_rate: float = 1.0
    uop_sweep_link: str = "dl"
    uop_sweep_grid: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        problems = []
        if self.num_users < 2:
            problems.append(f"num_users must be >= 2, got {self.num_users}")
        if self.trials < 1:
            problems.append(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            problems.append(f"seed must be >= 0, got {self.seed}")
        if not self.qos_set:
            problems.append("qos_set must not be empty")
        elif min(self.qos_set) < 0.0:
            problems.append(f"qos_set rates must be >= 0, got {self.qos_set}")
        if not 0.0 < self.l_min <= self.l_max:
            problems.append(f"need 0 < l_min <= l_max, got ({self.l_min}, {self.l_max})")
        if self.r_max <= 0.0:
            problems.append(f"r_max must be positive, got {self.r_max}")
        if not self.strategies:
            problems.append("strategies must not be empty")
        if not self.pairings:
            problems.append("pairing methods must not be empty")
        for name in self.pairings:
            if name not in PAIRING_METHODS:
                problems.append(f"unknown pairing method {name!r}, expected one of {PAIRING_METHODS}")
        if self.qos_pairing_key not in QOS_SORT_KEYS:
            problems.append(
                f"unknown qos_pairing_key {self.qos_pairing_key!r}, expected one of {QOS_SORT_KEYS}"
            )
        if self.sweep_mode not in ("horizontal", "vertical"):
            problems.append(f"sweep_mode must be 'horizontal' or 'vertical', got {self.sweep_mode!r}")
        if self.sweep_rate < 0.0:
            problems.append(f"sweep_rate must be >= 0, got {self.sweep_rate}")
        if self.sweep_values is not None and not self.sweep_values:
            problems.append("sweep_values must not be empty when given")
        if self.uop_sweep_link not in ("dl", "ul"):
            problems.append(f"uop_sweep_link must be 'dl' or 'ul', got {self.uop_sweep_link!r}")
        if any(v <= 0.0 for v in self.uop_sweep_grid):
            problems.append(f"uop_sweep_grid values must be positive, got {self.uop_sweep_grid}")
        if problems:
            raise ScenarioValidationError(problems)

    @property
    def noise_power(self) -> float:
        return self.noise.noise_power


@dataclass(frozen=True)
class CellResult:
    """One trial's outcome for one (strategy, pairing) combination."""

    strategy: str
    pairing: str
    method_used: str
    sum_rate: float
    total_power: float
    ee: float
    outage: OutageResult
    dl_powers: tuple[float, ...] | None = None
    ul_powers: tuple[float, ...] | None = None


@dataclass(frozen=True)
class TrialResult:
    trial_index: int
    cells: dict[tuple[str, str], CellResult]


@dataclass(frozen=True)
class CellSummary:
    """Per-cell campaign averages (plain arithmetic means over trials)."""

    mean_ee: float
    mean_total_power: float
    mean_uop_dl: float | None
    mean_uop_ul: float | None


@dataclass(frozen=True)
class CampaignSummary:
    scenario_id: str
    num_users: int
    trials: int
    seed: int
    cells: dict[tuple[str, str], CellSummary]
    sweep_parameter: str | None = None
    sweep_value: float | None = None


def sample_users(config: ScenarioConfig, trial_index: int) -> list[UserNode]:
    """Draw one trial's population, deterministically from (seed, trial_index).

    Vertical and horizontal distances are uniform over the configured
    bounds, polar angles uniform over [0, 2 pi), and the two per-user rates
    are drawn independently and uniformly from the QoS set (with
    ``qos_coupled_links`` the uplink draw is skipped and reuses the
    downlink rates). The draw order (l, r, angle, downlink rates, uplink
    rates) is part of the contract.
    """
    if trial_index < 0:
        raise ValueError(f"trial_index must be >= 0, got {trial_index}")
    rng = np.random.default_rng([config.seed, trial_index])
    n = config.num_users
    vertical = rng.uniform(config.l_min, config.l_max, n)
    horizontal = rng.uniform(0.0, config.r_max, n)
    polar = rng.uniform(0.0, 2.0 * math.pi, n)
    choices = np.asarray(config.qos_set, dtype=float)
    rates_dl = rng.choice(choices, size=n)
    rates_ul = rates_dl if config.qos_coupled_links else rng.choice(choices, size=n)
    return [
        UserNode(
            UserPosition(float(vertical[i]), float(horizontal[i]), float(polar[i])),
            QosRates(float(rates_dl[i]), float(rates_ul[i])),
        )
        for i in range(n)
    ]


def population_gains(
    users: Sequence[UserNode],
    front_end: OpticalFrontEnd,
    uplink_front_end: OpticalFrontEnd | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-user LOS gains for both links (identical under one front end)."""
    gains_dl = np.array([channel_gain(u.position, front_end) for u in users])
    if uplink_front_end is None or uplink_front_end == front_end:
        return gains_dl, gains_dl
    gains_ul = np.array([channel_gain(u.position, uplink_front_end) for u in users])
    return gains_dl, gains_ul


def _make_pairing(
    method: str,
    rates_dl: np.ndarray,
    rates_ul: np.ndarray,
    gains_dl: np.ndarray,
    gains_ul: np.ndarray,
    noise_power: float,
    qos_key: str,
) -> PairingOutcome:
    if method == "channel":
        return pair_by_channel(gains_dl, gains_ul)
    if method == "qos":
        return pair_by_qos(rates_dl, rates_ul, gains_dl, gains_ul, key=qos_key)
    if method == "adaptive":
        return adaptive_pairing(
            rates_dl, rates_ul, gains_dl, gains_ul, noise_power=noise_power, key=qos_key
        )
    raise ValueError(f"unknown pairing method {method!r}")


def _evaluate_cell(
    config: ScenarioConfig,
    strategy: Strategy,
    pairing_name: str,
    outcome: PairingOutcome,
    rates_dl: np.ndarray,
    rates_ul: np.ndarray,
    gains_dl: np.ndarray,
    gains_ul: np.ndarray,
    keep_user_powers: bool,
) -> CellResult:
    noise_power = config.noise_power
    user_order: list[int] = []
    dl_powers: list[float] = []
    ul_powers: list[float] = []
    total = 0.0
    for pair in outcome.pairs:
        qos_far = QosRates(float(rates_dl[pair.far]), float(rates_ul[pair.far]))
        qos_near = QosRates(float(rates_dl[pair.near]), float(rates_ul[pair.near]))
        user_order += [pair.far, pair.near]
        try:
            alloc = allocate(strategy, pair, qos_far, qos_near, noise_power)
        except InfeasibleAllocationError:
            # the whole pair goes out; its users carry unbounded demands
            dl_powers += [math.inf, math.inf]
            ul_powers += [math.inf, math.inf]
            total += math.inf
            continue
        dl_powers += [alloc.far_dl, alloc.near_dl]
        ul_powers += [alloc.far_ul, alloc.near_ul]
        total += alloc.total
    if outcome.unpaired is not None:
        u = outcome.unpaired
        user_order.append(u)
        qos = QosRates(float(rates_dl[u]), float(rates_ul[u]))
        try:
            p_dl, p_ul = single_user_allocation(
                float(gains_dl[u]), float(gains_ul[u]), qos, noise_power
            )
        except InfeasibleAllocationError:
            p_dl = p_ul = math.inf
        dl_powers += [p_dl]
        ul_powers += [p_ul]
        total += p_dl + p_ul

    dl_outage = downlink_uop(dl_powers, config.limits.max_total_dl)
    ul_outage = uplink_uop(ul_powers, config.limits.max_per_user_ul)

    if config.ee_served_only:
        # count each link's rate and power only for users the caps can carry
        dl_served = ~downlink_outage_mask(dl_powers, config.limits.max_total_dl)
        ul_served = ~uplink_outage_mask(ul_powers, config.limits.max_per_user_ul)
        sum_rate = 0.0
        served_power = 0.0
        for slot, user in enumerate(user_order):
            if dl_served[slot]:
                sum_rate += float(rates_dl[user])
                served_power += dl_powers[slot]
            if ul_served[slot]:
                sum_rate += float(rates_ul[user])
                served_power += ul_powers[slot]
        ee = sum_rate / served_power if served_power > 0.0 else 0.0
    else:
        sum_rate = float(np.sum(rates_dl) + np.sum(rates_ul))
        ee = sum_rate / total if total > 0.0 else 0.0

    return CellResult(
        strategy=strategy.value,
        pairing=pairing_name,
        method_used=outcome.method,
        sum_rate=sum_rate,
        total_power=total,
        ee=ee,
        outage=OutageResult.from_links(dl_outage, ul_outage),
        dl_powers=tuple(dl_powers) if keep_user_powers else None,
        ul_powers=tuple(ul_powers) if keep_user_powers else None,
    )


def evaluate_population(
    config: ScenarioConfig,
    users: Sequence[UserNode],
    keep_user_powers: bool = False,
) -> dict[tuple[str, str], CellResult]:
    """Run every configured (pairing, strategy) combination on one population."""
    gains_dl, gains_ul = population_gains(users, config.front_end, config.uplink_front_end)
    rates_dl = np.array([u.qos.downlink for u in users])
    rates_ul = np.array([u.qos.uplink for u in users])
    cells: dict[tuple[str, str], CellResult] = {}
    for pairing_name in config.pairings:
        outcome = _make_pairing(
            pairing_name,
            rates_dl,
            rates_ul,
            gains_dl,
            gains_ul,
            config.noise_power,
            config.qos_pairing_key,
        )
        for strategy in config.strategies:
            cell = _evaluate_cell(
                config, strategy, pairing_name, outcome, rates_dl, rates_ul,
                gains_dl, gains_ul, keep_user_powers,
            )
            cells[(strategy.value, pairing_name)] = cell
    return cells


def run_trial(
    config: ScenarioConfig, trial_index: int, keep_user_powers: bool = False
) -> TrialResult:
    """Sample one population and evaluate the full strategy/pairing grid."""
    users = sample_users(config, trial_index)
    return TrialResult(trial_index, evaluate_population(config, users, keep_user_powers))


def _trial_task(config: ScenarioConfig, trial_index: int, keep: bool) -> TrialResult:
    return run_trial(config, trial_index, keep)


def _map_trials(
    config: ScenarioConfig, *, keep_user_powers: bool, workers: int
) -> list[TrialResult]:
    indices = range(config.trials)
    if workers <= 1:
        return [run_trial(config, i, keep_user_powers) for i in indices]
    chunksize = max(1, config.trials // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(
            pool.map(
                _trial_task,
                repeat(config),
                indices,
                repeat(keep_user_powers),
                chunksize=chunksize,
            )
        )


def _cell_keys(config: ScenarioConfig) -> list[tuple[str, str]]:
    return [(s.value, p) for p in config.pairings for s in config.strategies]


def run_campaign(config: ScenarioConfig, workers: int = 1) -> CampaignSummary:
    """Average EE, power and outage over ``config.trials`` trials.

    Workers only split the trial loop; per-trial RNG streams and the
    trial-ordered reduction keep the summary bit-identical for any count.
    """
    results = _map_trials(config, keep_user_powers=False, workers=workers)
    cells: dict[tuple[str, str], CellSummary] = {}
    for key in _cell_keys(config):
        ee = power = uop_dl = uop_ul = 0.0
        for res in results:  # trial order: fixed-order float reduction
            cell = res.cells[key]
            ee += cell.ee
            power += cell.total_power
            uop_dl += cell.outage.uop_dl
            uop_ul += cell.outage.uop_ul
        n = config.trials
        cells[key] = CellSummary(ee / n, power / n, uop_dl / n, uop_ul / n)
    return CampaignSummary(
        scenario_id=config.scenario_id,
        num_users=config.num_users,
        trials=config.trials,
        seed=config.seed,
        cells=cells,
    )


def run_uop_sweep(config: ScenarioConfig, workers: int = 1) -> list[CampaignSummary]:
    """Re-evaluate outage over a grid of power caps on one set of trials.

    The trials (and therefore the per-user minimum powers and the EE values)
    are computed once; each grid value replaces the swept link's cap and the
    outage means are recomputed from the stored powers. With
    ``ee_served_only`` the reported EE still reflects the scenario's base
    caps, not the grid.
    """
    grid = config.uop_sweep_grid
    if not grid:
        raise ScenarioValidationError(["uop_sweep_grid must be non-empty for a UOP sweep"])
    results = _map_trials(config, keep_user_powers=True, workers=workers)
    keys = _cell_keys(config)
    parameter = "p_max_dl" if config.uop_sweep_link == "dl" else "p_max_ul"
    summaries = []
    for value in grid:
        cap_dl = value if config.uop_sweep_link == "dl" else config.limits.max_total_dl
        cap_ul = value if config.uop_sweep_link == "ul" else config.limits.max_per_user_ul
        cells: dict[tuple[str, str], CellSummary] = {}
        for key in keys:
            ee = power = uop_dl = uop_ul = 0.0
            for res in results:
                cell = res.cells[key]
                ee += cell.ee
                power += cell.total_power
                uop_dl += downlink_uop(cell.dl_powers, cap_dl).uop
                uop_ul += uplink_uop(cell.ul_powers, cap_ul).uop
            n = config.trials
            cells[key] = CellSummary(ee / n, power / n, uop_dl / n, uop_ul / n)
        summaries.append(
            CampaignSummary(
                scenario_id=config.scenario_id,
                num_users=config.num_users,
                trials=config.trials,
                seed=config.seed,
                cells=cells,
                sweep_parameter=parameter,
                sweep_value=float(value),
            )
        )
    return summaries


def _default_sweep_values(config: ScenarioConfig, mode: str) -> tuple[float, ...]:
    if mode == "horizontal":
        count = int(round(config.r_max / 0.5))
        return tuple(np.linspace(0.5, 0.5 * count, count))
    count = int(round((config.l_max - config.l_min) / 0.2)) + 1
    return tuple(np.linspace(config.l_min, config.l_max, count))


def two_user_sweep(
    config: ScenarioConfig,
    mode: str | None = None,
    values: Sequence[float] | None = None,
    rate: float | None = None,
) -> list[CampaignSummary]:
    """Deterministic two-user geometry sweep (no sampling).

    Horizontal mode fixes both users at ``l_max`` height with the near user
    on the axis and sweeps the far user's horizontal distance. Vertical mode
    fixes the near user at ``(l_min, 0)`` and sweeps the far user's height,
    keeping its incidence angle constant via ``r = r_max * l / l_max``. All
    four per-link rates equal ``rate``.
    """
    mode = config.sweep_mode if mode is None else mode
    if mode not in ("horizontal", "vertical"):
        raise ValueError(f"sweep mode must be 'horizontal' or 'vertical', got {mode!r}")
    if values is None:
        values = config.sweep_values or _default_sweep_values(config, mode)
    rate = config.sweep_rate if rate is None else rate
    qos = QosRates(rate, rate)
    noise_power = config.noise_power
    summaries = []
    for value in values:
        if mode == "horizontal":
            near = UserPosition(config.l_max, 0.0)
            far = UserPosition(config.l_max, float(value))
            parameter = "r_far"
        else:
            near = UserPosition(config.l_min, 0.0)
            far = UserPosition(float(value), config.r_max * float(value) / config.l_max)
            parameter = "l_far"
        gains_dl, gains_ul = population_gains(
            [UserNode(near, qos), UserNode(far, qos)],
            config.front_end,
            config.uplink_front_end,
        )
        pair = make_pair(0, 1, gains_dl, gains_ul)
        cells: dict[tuple[str, str], CellSummary] = {}
        for strategy in config.strategies:
            try:
                total = allocate(strategy, pair, qos, qos, noise_power).total
                ee = 4.0 * rate / total if total > 0.0 else 0.0
            except InfeasibleAllocationError:
                total, ee = math.inf, 0.0
            cells[(strategy.value, "none")] = CellSummary(ee, total, None, None)
        summaries.append(
            CampaignSummary(
                scenario_id=config.scenario_id,
                num_users=2,
                trials=1,
                seed=config.seed,
                cells=cells,
                sweep_parameter=parameter,
                sweep_value=float(value),
            )
        )
    return summaries
