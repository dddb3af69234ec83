"""Nash checks, the exact potential, best response dynamics, enumeration.

Unilateral deviations move an agent to the complementary arc, which is
disjoint from its current one, so the deviating agent sees each target
link at its current load plus one. The game admits an exact potential
(the per-link sum of marginal latencies up to the current load), hence
best response dynamics terminate and the equilibrium set is nonempty.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    CW,
    CCW,
    DEFAULT_ENUM_LIMIT,
    InstanceTooLarge,
    RingInstance,
    Routing,
    agent_paths,
    ensure_valid,
    iter_routings,
    loads,
    max_latency,
)


@dataclass(frozen=True)
class DeviationWitness:
    """A strictly improving unilateral move: the deviation is cheaper."""

    agent: int
    current: int
    deviation: int


@dataclass(frozen=True)
class NashCheck:
    ok: bool
    witness: DeviationWitness | None

    def __bool__(self) -> bool:
        return self.ok


def _path_cost(links, counts, degree, path):
    total = 0
    for e in path:
        a, b = links[e]
        total += a * counts[e] ** degree + b
    return total


def _deviation_cost(links, counts, degree, path):
    # The mover joins each target link on top of its current load.
    total = 0
    for e in path:
        a, b = links[e]
        total += a * (counts[e] + 1) ** degree + b
    return total


def is_nash(instance: RingInstance, routing: Routing) -> NashCheck:
    """Check every unilateral deviation; report the first improving one."""
    counts = list(loads(instance, routing))
    paths = agent_paths(instance)
    links, d = instance.links, instance.degree
    for i, orientation in enumerate(routing):
        current = _path_cost(links, counts, d, paths[i][orientation])
        deviation = _deviation_cost(links, counts, d, paths[i][1 - orientation])
        if deviation < current:
            return NashCheck(False, DeviationWitness(i, current, deviation))
    return NashCheck(True, None)


def potential(instance: RingInstance, routing: Routing) -> int:
    """Exact potential: sum over links of the marginal latencies of the
    first load, second load, and so on.

    Any unilateral move changes the potential by exactly the mover's
    latency change, for every degree.
    """
    counts = loads(instance, routing)
    d = instance.degree
    total = 0
    for e, (a, b) in enumerate(instance.links):
        x = counts[e]
        total += a * sum(j**d for j in range(1, x + 1)) + b * x
    return total


def best_response_trajectory(instance: RingInstance, start: Routing) -> list[Routing]:
    """Routings visited by best response dynamics, start and equilibrium
    inclusive.

    Agents are scanned in index order and the first strictly improving
    switch is applied; the potential drops by at least 1 per move, so the
    trajectory has at most potential(start) moves.
    """
    ensure_valid(instance)
    paths = agent_paths(instance)
    links, d = instance.links, instance.degree
    routing = list(start)
    counts = list(loads(instance, start))
    trajectory = [tuple(routing)]
    improved = True
    while improved:
        improved = False
        for i in range(len(routing)):
            chosen = paths[i][routing[i]]
            other = paths[i][1 - routing[i]]
            current = _path_cost(links, counts, d, chosen)
            deviation = _deviation_cost(links, counts, d, other)
            if deviation < current:
                for e in chosen:
                    counts[e] -= 1
                for e in other:
                    counts[e] += 1
                routing[i] = 1 - routing[i]
                trajectory.append(tuple(routing))
                improved = True
                break
    return trajectory


def best_response(instance: RingInstance, start: Routing) -> Routing:
    """Equilibrium reached by best response dynamics from a start routing."""
    return best_response_trajectory(instance, start)[-1]


def enumerate_nash(instance: RingInstance, limit: int = DEFAULT_ENUM_LIMIT) -> list[Routing]:
    """All equilibria in lexicographic order (CW sorts before CCW)."""
    ensure_valid(instance)
    k = len(instance.agents)
    if k > limit:
        raise InstanceTooLarge(k, limit)
    return [r for r in iter_routings(k) if is_nash(instance, r)]


def worst_nash(instance: RingInstance, limit: int = DEFAULT_ENUM_LIMIT) -> Routing:
    """Equilibrium with the largest social cost, lexicographic first on ties."""
    ensure_valid(instance)
    k = len(instance.agents)
    if k > limit:
        raise InstanceTooLarge(k, limit)
    best = None
    best_value = -1
    for r in iter_routings(k):
        if is_nash(instance, r):
            value = max_latency(instance, r)
            if value > best_value:
                best, best_value = r, value
    assert best is not None  # potential games always have an equilibrium
    return best
