"""NOMA pairing, channel partitioning and assignment, power split, SIC
checks and total spectral efficiency."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from . import radio
from .assignment import hungarian
from .clustering import MBS_ID
from .scenario import ScenarioConfig, ScenarioState


class InsufficientChannelsError(ValueError):
    def __init__(self, demanded: int, available: int):
        self.demanded = demanded
        self.available = available
        super().__init__(f"insufficient channels: {demanded} groups demanded, {available} available")


@dataclass(frozen=True)
class NomaGroup:
    """A (near, far) pair sharing one channel, or a lone OMA user when ``far_user`` is None."""

    station_id: int
    near_user: int
    far_user: Optional[int] = None
    channel: Optional[int] = None

    def __post_init__(self):
        if self.far_user is not None and self.far_user == self.near_user:
            raise ValueError(f"near and far user are both {self.near_user}")

    @property
    def is_pair(self) -> bool:
        return self.far_user is not None

    @property
    def users(self) -> tuple[int, ...]:
        return (self.near_user,) if self.far_user is None else (self.near_user, self.far_user)


@dataclass(frozen=True)
class AllocationPlan:
    groups: tuple[NomaGroup, ...]
    powers: Mapping[tuple[int, int, int], float]
    per_user_se: Mapping[int, float]
    total_se: float
    channels: Mapping[int, tuple[int, ...]] = field(default_factory=dict)
    budgets: Mapping[int, float] = field(default_factory=dict)
    unserved: frozenset = frozenset()


def station_gains(state: ScenarioState, config: ScenarioConfig) -> dict[tuple[int, int], float]:
    """Path gain from each vehicle to the station serving it."""
    by_id = {v.id: v for v in state.vehicles}
    gains = {}
    for u in state.unclustered:
        pos = (*by_id[u].position, 0.0)
        gains[(MBS_ID, u)] = radio.path_gain(radio.distance_m(state.mbs_position, pos), config.fc_ghz)
    for dbs, cluster in zip(state.dbs_list, state.clusters):
        for u in cluster.members:
            pos = (*by_id[u].position, 0.0)
            gains[(dbs.id, u)] = radio.path_gain(radio.distance_m(dbs.position, pos), config.fc_ghz)
    return gains


def pair_users(user_ids: Sequence[int], gains: Mapping[int, float], station_id: int) -> list[NomaGroup]:
    """Strongest-with-middle pairing.

    Users are ranked by descending gain (ties by id). With ``half =
    ceil(n/2)`` rank ``r`` is paired with rank ``r + half``; for odd ``n``
    the user at rank ``half`` is left alone.
    """
    ranked = sorted(user_ids, key=lambda u: (-gains[u], u))
    n = len(ranked)
    half = (n + 1) // 2
    groups = [NomaGroup(station_id, ranked[r], ranked[r + half]) for r in range(n // 2)]
    if n % 2:
        groups.append(NomaGroup(station_id, ranked[half - 1]))
    return groups


def partition_channels(
    num_channels: int, cluster_group_counts: Sequence[int], mbs_group_count: int
) -> dict[int, list[int]]:
    """Hand out consecutive channel indices, MBS first, then clusters in order.

    Station ids: 0 for the MBS, ``k + 1`` for cluster ``k``.
    """
    demand = mbs_group_count + sum(cluster_group_counts)
    if demand > num_channels:
        raise InsufficientChannelsError(demand, num_channels)
    out = {MBS_ID: list(range(mbs_group_count))}
    start = mbs_group_count
    for k, count in enumerate(cluster_group_counts):
        out[k + 1] = list(range(start, start + count))
        start += count
    return out


def _group_gain(group: NomaGroup, gains) -> float:
    return math.fsum(gains[(group.station_id, u)] for u in group.users)


def build_cost_matrix(groups: Sequence[NomaGroup], channel_set: Sequence[int], gains) -> np.ndarray:
    """Rows are groups, columns channels; cost is minus the group's summed gain."""
    if len(groups) > len(channel_set):
        raise ValueError(f"{len(groups)} groups but only {len(channel_set)} channels")
    cost = np.empty((len(groups), len(channel_set)))
    for r, g in enumerate(groups):
        cost[r, :] = -_group_gain(g, gains)
    return cost


def assign_channels(groups: Sequence[NomaGroup], channel_set: Sequence[int], gains) -> list[NomaGroup]:
    channel_set = sorted(channel_set)
    if not groups:
        return []
    assignment, _ = hungarian(build_cost_matrix(groups, channel_set, gains))
    return [replace(g, channel=channel_set[assignment[r]]) for r, g in enumerate(groups)]


def allocate_power(groups: Sequence[NomaGroup], station_budget_w: float, alpha_f: float, alpha_n: float) -> dict[int, float]:
    """Equal share per group; within a pair the far user gets ``alpha_f`` of it."""
    nc = len(groups)
    if nc < 1:
        raise ValueError("allocate_power needs at least one group")
    share = station_budget_w / nc
    powers = {}
    for g in groups:
        if g.is_pair:
            powers[g.far_user] = alpha_f * share
            powers[g.near_user] = alpha_n * share
        else:
            powers[g.near_user] = share
    return powers


def check_sic(group: NomaGroup, powers, gains, sigma2: float, p_tol: float) -> bool:
    if not group.is_pair:
        raise ValueError("SIC check needs a pair")
    s = group.station_id
    margin = radio.sic_margin(
        powers[group.near_user], gains[(s, group.near_user)],
        powers[group.far_user], gains[(s, group.far_user)],
        sigma2,
    )
    return margin >= p_tol


def group_se(group: NomaGroup, powers, gains, sigma2: float) -> dict[int, float]:
    s = group.station_id
    if not group.is_pair:
        u = group.near_user
        return {u: radio.se_oma(powers[u], gains[(s, u)], sigma2)}
    n, f = group.near_user, group.far_user
    return {
        n: radio.se_near(powers[n], gains[(s, n)], sigma2),
        f: radio.se_far(powers[f], gains[(s, f)], powers[n], sigma2),
    }


def total_spectral_efficiency(plan: AllocationPlan, gains, sigma2: float) -> float:
    """Sum of every served user's efficiency, recomputed from the plan's groups and powers."""
    terms = []
    for g in plan.groups:
        flat = {u: plan.powers[(g.station_id, u, g.channel)] for u in g.users}
        terms.extend(group_se(g, flat, gains, sigma2).values())
    return math.fsum(terms)


def _settle_station(groups, budget, gains, config, sigma2, idle):
    """Split SIC-infeasible pairs until every surviving pair passes.

    A split pair becomes two lone users if an idle channel is left,
    otherwise only its near (stronger) user keeps service.
    """
    groups = list(groups)
    dropped = []
    while groups:
        powers = allocate_power(groups, budget, config.alpha_f, config.alpha_n)
        bad = [k for k, g in enumerate(groups)
               if g.is_pair and not check_sic(g, powers, gains, sigma2, config.p_tol)]
        if not bad:
            return groups, powers, dropped
        for k in bad:
            g = groups[k]
            groups[k] = NomaGroup(g.station_id, g.near_user, None, g.channel)
            if idle:
                groups.append(NomaGroup(g.station_id, g.far_user, None, idle.pop(0)))
            else:
                dropped.append(g.far_user)
    return groups, {}, dropped


def build_plan(state: ScenarioState, gains, config: ScenarioConfig) -> AllocationPlan:
    """Pair, partition channels, assign them, split power and enforce SIC for every station."""
    sigma2 = config.sigma2_w
    stations = [(MBS_ID, sorted(state.unclustered), config.p_b_max)]
    for dbs, cluster in zip(state.dbs_list, state.clusters):
        stations.append((dbs.id, sorted(cluster.members), dbs.power_budget_w))

    paired = {}
    for sid, users, _ in stations:
        paired[sid] = pair_users(users, {u: gains[(sid, u)] for u in users}, sid)
    partition = partition_channels(
        config.num_channels, [len(paired[sid]) for sid, _, _ in stations[1:]], len(paired[MBS_ID])
    )
    used = {c for chans in partition.values() for c in chans}
    idle = [c for c in range(config.num_channels) if c not in used]

    all_groups, powers, per_user, channels, budgets, dropped = [], {}, {}, {}, {}, set()
    for sid, users, budget in stations:
        groups = assign_channels(paired[sid], partition[sid], gains)
        budgets[sid] = budget
        if not groups:
            channels[sid] = ()
            continue
        groups, station_powers, lost = _settle_station(groups, budget, gains, config, sigma2, idle)
        # Channel set may have grown; re-run the assignment over it.
        chans = sorted(g.channel for g in groups)
        groups = assign_channels(groups, chans, gains)
        channels[sid] = tuple(chans)
        dropped.update(lost)
        for g in groups:
            for u in g.users:
                powers[(sid, u, g.channel)] = station_powers[u]
            per_user.update(group_se(g, station_powers, gains, sigma2))
        all_groups.extend(groups)

    for u in dropped:
        per_user[u] = 0.0
    plan = AllocationPlan(
        groups=tuple(all_groups),
        powers=powers,
        per_user_se=dict(sorted(per_user.items())),
        total_se=0.0,
        channels=channels,
        budgets=budgets,
        unserved=frozenset(dropped),
    )
    return replace(plan, total_se=total_spectral_efficiency(plan, gains, sigma2))


def plan_violations(plan: AllocationPlan, gains, config: ScenarioConfig) -> list[str]:
    """Every broken power, channel, ordering or SIC constraint, as readable strings."""
    problems = []
    sigma2 = config.sigma2_w
    owner = {}
    for g in plan.groups:
        if g.channel is None:
            problems.append(f"group {g} has no channel")
            continue
        key = g.channel
        if key in owner:
            problems.append(f"channel {key} used by {owner[key]} and {g}")
        owner[key] = g
        if len(g.users) > 2:
            problems.append(f"channel {key} carries {len(g.users)} users")
        if g.is_pair:
            s = g.station_id
            if gains[(s, g.near_user)] < gains[(s, g.far_user)]:
                problems.append(f"pair {g}: near gain below far gain")
            flat = {u: plan.powers[(s, u, g.channel)] for u in g.users}
            margin = radio.sic_margin(flat[g.near_user], gains[(s, g.near_user)],
                                      flat[g.far_user], gains[(s, g.far_user)], sigma2)
            if margin < config.p_tol:
                problems.append(f"pair {g}: SIC margin {margin:.3g} below {config.p_tol}")
    for p in plan.powers.values():
        if p < 0:
            problems.append(f"negative power {p}")
    for sid, budget in plan.budgets.items():
        spent = math.fsum(p for (s, _, _), p in plan.powers.items() if s == sid)
        has_groups = any(g.station_id == sid for g in plan.groups)
        if has_groups and abs(spent - budget) > 1e-9 * budget:
            problems.append(f"station {sid} spends {spent} of budget {budget}")
        if spent > budget * (1 + 1e-9):
            problems.append(f"station {sid} exceeds budget: {spent} > {budget}")
    return problems
