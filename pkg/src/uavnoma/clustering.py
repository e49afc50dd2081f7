"""Mobility-aware DBSCAN clustering and drone base-station placement.

A cluster is grown from a seed vehicle. Its ε-neighbours are kept only if
they sit within the drone coverage radius of the candidate centroid, drive
at a speed within θ of the seed, and are predicted to land in the seed's
grid cell. Expansion then walks the members' neighbourhoods; a newcomer is
refused if admitting it would push two or more existing members out of
coverage.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .mobility import Vehicle, same_predicted_region, speed_similar
from .scenario import ScenarioConfig

MBS_ID = 0


@dataclass(frozen=True)
class Cluster:
    members: frozenset
    centroid: tuple[float, float]
    seed: int


@dataclass(frozen=True)
class DbsStation:
    id: int
    position: tuple[float, float, float]
    power_budget_w: float


def _index(vehicles) -> Mapping[int, Vehicle]:
    if isinstance(vehicles, Mapping):
        return vehicles
    return {v.id: v for v in vehicles}


def _planar(a: Vehicle, b: Vehicle) -> float:
    return math.dist(a.position, b.position)


def neighbors(i: int, vehicles, epsilon_m: float) -> set[int]:
    """Ids of every vehicle other than ``i`` within ``epsilon_m`` (planar)."""
    by_id = _index(vehicles)
    if i not in by_id:
        raise KeyError(f"unknown vehicle id {i}")
    vi = by_id[i]
    return {j for j, vj in by_id.items() if j != i and _planar(vi, vj) <= epsilon_m}


def centroid(members: Iterable[int], vehicles) -> tuple[float, float]:
    by_id = _index(vehicles)
    ids = sorted(members)
    if not ids:
        raise ValueError("centroid of an empty member set")
    # Summation in id order keeps the result independent of set iteration order.
    x = math.fsum(by_id[j].position[0] for j in ids) / len(ids)
    y = math.fsum(by_id[j].position[1] for j in ids) / len(ids)
    return (x, y)


def filter_neighbors(i: int, candidate_set, vehicles, config: ScenarioConfig) -> set[int]:
    """Drop candidates outside drone coverage, outside the seed's speed window,
    or predicted to leave the seed's grid cell.

    The coverage centre is computed once, from the seed plus every candidate.
    """
    by_id = _index(vehicles)
    seed = by_id[i]
    center = centroid(set(candidate_set) | {i}, by_id)
    kept = set()
    for j in candidate_set:
        vj = by_id[j]
        if math.dist(vj.position, center) > config.r_k:
            continue
        if not speed_similar(seed, vj, config.theta_kmh):
            continue
        if not same_predicted_region(seed, vj, config):
            continue
        kept.add(j)
    return kept


def _settled_neighbors(i, candidates, by_id, config):
    """Repeat the filter pass, re-centred on the survivors, until nothing drops out.

    A single pass centres on the unfiltered set, so a survivor may still be
    out of coverage of the final centroid. Returns None if the seed itself
    ends up outside coverage.
    """
    kept = set(candidates)
    while True:
        tighter = filter_neighbors(i, kept, by_id, config)
        if tighter == kept:
            break
        kept = tighter
    center = centroid(kept | {i}, by_id)
    if math.dist(by_id[i].position, center) > config.r_k:
        return None
    return kept


def _try_admit(candidate, members, seed, by_id, r_k):
    """Members after admitting ``candidate``, or None if the guard refuses it.

    Returns ``(new_members, evicted)``.
    """
    trial = set(members) | {candidate}
    center = centroid(trial, by_id)
    out = {m for m in trial if math.dist(by_id[m].position, center) > r_k}
    if not out:
        return trial, set()
    if len(out) >= 2 or candidate in out or seed in out:
        return None
    trial -= out
    center = centroid(trial, by_id)
    if any(math.dist(by_id[m].position, center) > r_k for m in trial):
        return None
    return trial, out


def form_clusters(
    vehicles: Sequence[Vehicle],
    config: ScenarioConfig,
    *,
    mobility_aware: bool = True,
) -> tuple[list[Cluster], set[int]]:
    """Cluster ``vehicles``; return the clusters and the ids left for the MBS.

    With ``mobility_aware=False`` this is textbook DBSCAN on (ε, MinPoints):
    no coverage, speed or prediction filtering and no expansion guard.
    """
    by_id = _index(vehicles)
    ids = sorted(by_id)
    eps = config.epsilon_m
    owner: dict[int, int] = {}
    groups: list[tuple[set[int], int]] = []

    def free_neighbors(v, extra=()):
        return {
            j for j in ids
            if j != v and (j not in owner or j in extra) and _planar(by_id[v], by_id[j]) <= eps
        }

    for i in ids:
        if i in owner:
            continue
        ngb = free_neighbors(i)
        if mobility_aware:
            ngb = _settled_neighbors(i, ngb, by_id, config)
        if ngb is None or len(ngb) < config.min_points:
            continue

        cid = len(groups)
        members = {i} | ngb
        for m in members:
            owner[m] = cid
        tried = set(members)
        queue = deque(sorted(ngb))
        seed = by_id[i]
        while queue:
            m = queue.popleft()
            if m not in members:
                continue
            reach = free_neighbors(m, extra=members)
            if len(reach) < config.min_points:
                continue
            for c in sorted(reach - members):
                if c in tried or c in owner:
                    continue
                tried.add(c)
                if not mobility_aware:
                    members.add(c)
                    owner[c] = cid
                    queue.append(c)
                    continue
                if not (speed_similar(seed, by_id[c], config.theta_kmh)
                        and same_predicted_region(seed, by_id[c], config)):
                    continue
                admitted = _try_admit(c, members, i, by_id, config.r_k)
                if admitted is None:
                    continue
                members, evicted = admitted
                owner[c] = cid
                for e in evicted:
                    del owner[e]
                queue.append(c)
        groups.append((members, i))

    clusters = [Cluster(frozenset(m), centroid(m, by_id), seed) for m, seed in groups]
    unclustered = {j for j in ids if j not in owner}
    return clusters, unclustered


def restrict_to_coverage(clusters: Sequence[Cluster], vehicles, r_k: float) -> tuple[list[Cluster], set[int]]:
    """Keep only members within ``r_k`` (planar) of their cluster's centroid.

    The centroid, where the drone hovers, is left unchanged. Dropped members
    and the members of clusters left empty are returned for the MBS.
    """
    by_id = _index(vehicles)
    kept, dropped = [], set()
    for c in clusters:
        covered = {m for m in c.members if math.dist(by_id[m].position, c.centroid) <= r_k}
        dropped |= set(c.members) - covered
        if covered:
            kept.append(Cluster(frozenset(covered), c.centroid, c.seed))
    return kept, dropped


def place_dbs(clusters: Sequence[Cluster], config: ScenarioConfig) -> list[DbsStation]:
    """One drone per cluster, hovering over its centroid. Ids start at 1 (0 is the MBS)."""
    return [
        DbsStation(k + 1, (c.centroid[0], c.centroid[1], config.dbs_altitude_m), config.p_k_max)
        for k, c in enumerate(clusters)
    ]
