"""Exact optimal routings and the equilibrium-to-optimum ratio.

The optimum minimizes the maximum agent latency. The solver walks the
orientation tree in lexicographic order with two admissible pruning
bounds (loads only ever grow down the tree): the max latency of agents
already committed, and for each uncommitted agent the cheaper of its two
arcs at the current loads. Pruning never changes the result; a plain
enumeration oracle is kept alongside for verification.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

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
    max_latency,
)
from .equilibria import worst_nash


def _cost(links, counts, degree, path):
    total = 0
    for e in path:
        a, b = links[e]
        total += a * counts[e] ** degree + b
    return total


def brute_force_optimum(instance: RingInstance, limit: int = DEFAULT_ENUM_LIMIT) -> tuple[int, Routing]:
    """Plain enumeration oracle: optimal value and its first routing."""
    ensure_valid(instance)
    k = len(instance.agents)
    if k > limit:
        raise InstanceTooLarge(k, limit)
    best_value = None
    best = None
    for r in iter_routings(k):
        value = max_latency(instance, r)
        if best_value is None or value < best_value:
            best_value, best = value, r
    return best_value, best


def _search_optimal(instance: RingInstance, cap: int | None, collect) -> None:
    """DFS over orientations in lexicographic order.

    cap is an exclusive bound when hunting the optimum (prune >= cap) or
    the known optimal value when enumerating all optima (prune > cap).
    collect(routing, value) is called at surviving leaves and returns the
    new cap.
    """
    paths = agent_paths(instance)
    links, d = instance.links, instance.degree
    k = len(instance.agents)
    counts = [0] * instance.n
    chosen: list[int] = [CW] * k

    def bound(depth: int) -> int:
        worst = 0
        for j in range(depth):
            worst = max(worst, _cost(links, counts, d, paths[j][chosen[j]]))
        for j in range(depth, k):
            floor = min(
                _cost(links, counts, d, paths[j][CW]),
                _cost(links, counts, d, paths[j][CCW]),
            )
            worst = max(worst, floor)
        return worst

    def visit(depth: int) -> None:
        nonlocal cap
        lower = bound(depth)
        if cap is not None and (lower > cap if exact else lower >= cap):
            return
        if depth == k:
            cap = collect(tuple(chosen), lower)
            return
        for orientation in (CW, CCW):
            path = paths[depth][orientation]
            for e in path:
                counts[e] += 1
            chosen[depth] = orientation
            visit(depth + 1)
            for e in path:
                counts[e] -= 1

    exact = cap is not None
    visit(0)


@dataclass
class OptimumResult:
    """Optimal value plus a selected optimal routing.

    selected is the lexicographically first optimum, or the optimum with
    the fewest orientation differences from `reference` when one was
    given (ties broken lexicographically). routings() re-enumerates the
    full optimal set lazily in lexicographic order.
    """

    value: int
    selected: Routing
    reference: Routing | None
    instance: RingInstance = field(repr=False)

    def routings(self) -> Iterator[Routing]:
        return iter_optimal(self.instance, self.value)

    def count(self) -> int:
        return sum(1 for _ in self.routings())


def iter_optimal(instance: RingInstance, value: int | None = None) -> Iterator[Routing]:
    """All optimal routings in lexicographic order.

    Implemented as a pruned DFS against the (given or computed) optimal
    value, so the full 2**k tree is only expanded where it can still
    reach an optimum.
    """
    if value is None:
        value = exact_optimum(instance).value
    found: list[Routing] = []

    # Materialize level by level instead of a generator to keep the DFS
    # callback shape; optimal sets are small at desk scale.
    def keep(routing, leaf_value):
        if leaf_value == value:
            found.append(routing)
        return value

    _search_optimal(instance, value, keep)
    return iter(found)


def exact_optimum(
    instance: RingInstance,
    limit: int = DEFAULT_ENUM_LIMIT,
    nash: Routing | None = None,
) -> OptimumResult:
    """Exact optimum via pruned search, equal to plain enumeration.

    With `nash` given, the selected routing minimizes the number of
    agents routed differently from it over the whole optimal set.
    """
    ensure_valid(instance)
    k = len(instance.agents)
    if k > limit:
        raise InstanceTooLarge(k, limit)
    state = {"value": None, "routing": None}

    def keep(routing, value):
        if state["value"] is None or value < state["value"]:
            state["value"], state["routing"] = value, routing
        return state["value"]

    _search_optimal(instance, None, keep)
    value, selected = state["value"], state["routing"]

    if nash is not None:
        if len(nash) != k:
            raise ValueError("reference routing length must match agent count")
        best_h = k + 1
        for candidate in iter_optimal(instance, value):
            h = sum(1 for a, b in zip(candidate, nash) if a != b)
            if h < best_h:
                best_h, selected = h, candidate
                if h == 0:
                    break
    return OptimumResult(value=value, selected=selected, reference=nash, instance=instance)


def min_h_optimum(instance: RingInstance, nash: Routing, limit: int = DEFAULT_ENUM_LIMIT) -> Routing:
    """Optimal routing closest to a given equilibrium in switch count."""
    return exact_optimum(instance, limit=limit, nash=nash).selected


@dataclass(frozen=True)
class PoAResult:
    """Worst equilibrium cost over optimal cost, exact.

    ratio is None exactly when the instance is degenerate (optimum
    latency zero, which forces the worst equilibrium latency to zero as
    well).
    """

    ratio: Fraction | None
    degenerate: bool
    nash_value: int
    optimum_value: int
    worst: Routing
    optimal: Routing


def poa(instance: RingInstance, limit: int = DEFAULT_ENUM_LIMIT) -> PoAResult:
    worst = worst_nash(instance, limit)
    opt = exact_optimum(instance, limit=limit, nash=worst)
    nash_value = max_latency(instance, worst)
    if opt.value == 0:
        assert nash_value == 0  # a zero-cost routing forces zero-cost equilibria
        return PoAResult(None, True, nash_value, 0, worst, opt.selected)
    return PoAResult(
        Fraction(nash_value, opt.value), False, nash_value, opt.value, worst, opt.selected
    )
