"""Instance generation and exhaustive worst-ratio search.

The exhaustive search walks every ring of size 2..max_n, every tuple of
agent endpoint pairs, and every coefficient assignment whose total
weight stays within the budget, scoring all of them with one batched
matrix product per endpoint configuration. Latency is linear in the
coefficient vector once the routing is fixed, so a single integer
weight matrix per configuration turns a whole coefficient block into a
BLAS call; every quantity stays an exact small integer inside float64,
and ratios are compared by integer cross multiplication. Enumeration
order is deterministic and the reported instance is the first one (in
that order) attaining the maximum ratio, independent of the number of
worker threads. The winner is re-verified with the exact solver before
it is returned.

Intended for small spaces: the coefficient block for a ring of n links
has C(budget + 2n, 2n) rows, and the endpoint configurations multiply
as (n*(n-1))^agents.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import RingInstance, iter_routings, path_links
from .optimum import poa

_CHUNK = 4096


@dataclass(frozen=True)
class RandomSpec:
    """Bounds for random instance sampling."""

    max_n: int = 8
    max_k: int = 6
    max_coeff: int = 3
    degree: int = 1


def random_instance(spec: RandomSpec, seed: int) -> RingInstance:
    """Deterministic sample: ring size, agent count, per-link slope and
    intercept, then per-agent endpoints with t resampled until distinct."""
    rng = random.Random(seed)
    n = rng.randint(2, spec.max_n)
    k = rng.randint(1, spec.max_k)
    links = tuple(
        (rng.randint(0, spec.max_coeff), rng.randint(0, spec.max_coeff))
        for _ in range(n)
    )
    agents = []
    for _ in range(k):
        s = rng.randrange(n)
        t = rng.randrange(n)
        while t == s:
            t = rng.randrange(n)
        agents.append((s, t))
    return RingInstance(n, links, tuple(agents), spec.degree)


@dataclass(frozen=True)
class SearchSpace:
    """Exhaustive search bounds: rings of 2..max_n links, a fixed agent
    count, and total coefficient weight at most budget."""

    max_n: int
    agents: int
    budget: int
    degree: int = 1

    def __post_init__(self):
        if self.max_n < 2:
            raise ValueError("max_n must be at least 2")
        if self.agents < 1:
            raise ValueError("at least one agent is required")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        if self.degree < 1:
            raise ValueError("degree must be a positive integer")


@dataclass(frozen=True)
class SearchResult:
    instance: RingInstance | None
    ratio: Fraction | None
    nash_value: int | None
    optimum_value: int | None
    space: SearchSpace
    examined: int
    degenerate: int


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of a higher-degree ratio probe."""

    degree: int
    target: Fraction
    base: SearchResult
    reused_ratio: Fraction | None
    search: SearchResult | None
    achieved: bool

    @property
    def ratio(self) -> Fraction | None:
        if self.reused_ratio is not None and self.reused_ratio >= self.target:
            return self.reused_ratio
        return self.search.ratio if self.search is not None else None


def _coefficient_block(slots: int, budget: int) -> np.ndarray:
    """All nonnegative integer rows of the given length with sum at most
    budget, in lexicographic order."""

    def rows(slots, budget):
        if slots == 1:
            for v in range(budget + 1):
                yield (v,)
            return
        for v in range(budget + 1):
            for rest in rows(slots - 1, budget - v):
                yield (v,) + rest

    return np.array(list(rows(slots, budget)), dtype=np.float64)


def _endpoint_pairs(n: int) -> list[tuple[int, int]]:
    return [(s, t) for s in range(n) for t in range(n) if t != s]


def _weight_matrix(n, endpoints, degree):
    """Per-routing, per-agent weights against the coefficient layout
    (a_0..a_{n-1}, b_0..b_{n-1}): slope entries carry load^degree on the
    agent's links, intercept entries carry the link indicator."""
    k = len(endpoints)
    probe = RingInstance(n, ((0, 0),) * n, tuple(endpoints), degree)
    paths = [(path_links(probe, i, 0), path_links(probe, i, 1)) for i in range(k)]
    T = np.zeros((2**k * k, 2 * n), dtype=np.int64)
    for r, routing in enumerate(iter_routings(k)):
        loads = [0] * n
        chosen = [paths[i][routing[i]] for i in range(k)]
        for links in chosen:
            for e in links:
                loads[e] += 1
        for i in range(k):
            row = T[r * k + i]
            for e in chosen[i]:
                row[e] = loads[e] ** degree
                row[n + e] = 1
    return T


def _score_block(L, k):
    """Worst equilibrium cost and optimum cost per row of a latency
    block shaped (rows, 2**k, k).

    A routing is an equilibrium when no single flipped orientation
    improves that agent; with disjoint alternatives the deviation cost
    is exactly the agent's latency in the flipped routing. Rows without
    an equilibrium cannot occur (an exact potential exists), but would
    surface as worst = -1 and never win a comparison.
    """
    M = L.max(axis=2)
    mask = np.ones(M.shape, dtype=bool)
    indices = np.arange(2**k)
    for i in range(k):
        flips = indices ^ (1 << (k - 1 - i))
        mask &= L[:, indices, i] <= L[:, flips, i]
    worst = np.where(mask, M, -1).max(axis=1).astype(np.int64)
    best = M.min(axis=1).astype(np.int64)
    return worst, best


def _evaluate_config(n, endpoints, coeffs, degree):
    """First local maximizer over one endpoint configuration.

    Returns (num, den, winner_row, degenerate). The ratio num/den starts
    at 0/1, so any nondegenerate row beats it; winner_row is the first
    coefficient row attaining the block maximum, or None when the whole
    block is degenerate.
    """
    k = len(endpoints)
    T = _weight_matrix(n, endpoints, degree).astype(np.float64)
    num, den, winner = 0, 1, None
    degenerate = 0
    for lo in range(0, coeffs.shape[0], _CHUNK):
        block = coeffs[lo : lo + _CHUNK]
        L = (block @ T.T).reshape(block.shape[0], 2**k, k)
        worst, best = _score_block(L, k)
        degenerate += int((best == 0).sum())
        cut = 0
        while True:
            cand = (best > 0) & (worst * den > num * best)
            cand[:cut] = False
            if not cand.any():
                break
            idx = int(cand.argmax())
            num, den = int(worst[idx]), int(best[idx])
            winner = lo + idx
            cut = idx + 1
    return num, den, winner, degenerate


def _instance_from_row(n, endpoints, row, degree) -> RingInstance:
    coeffs = [int(v) for v in row]
    links = tuple((coeffs[e], coeffs[n + e]) for e in range(n))
    return RingInstance(n, links, tuple(endpoints), degree)


def exhaustive_poa_search(space: SearchSpace, jobs: int = 1) -> SearchResult:
    """Scan the whole space and return its first worst-ratio instance.

    jobs parallelizes across endpoint configurations; results are merged
    in enumeration order, so the outcome is identical for every jobs
    value. The winning instance is rescored exactly before returning.
    """
    blocks = {
        n: _coefficient_block(2 * n, space.budget)
        for n in range(2, space.max_n + 1)
    }
    tasks = [
        (n, endpoints)
        for n in range(2, space.max_n + 1)
        for endpoints in itertools.product(_endpoint_pairs(n), repeat=space.agents)
    ]

    def run(task):
        n, endpoints = task
        return _evaluate_config(n, endpoints, blocks[n], space.degree)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run, tasks))
    else:
        outcomes = [run(task) for task in tasks]

    num, den, best_task, best_row = 0, 1, None, None
    examined = degenerate = 0
    for task, (t_num, t_den, t_row, t_degen) in zip(tasks, outcomes):
        examined += blocks[task[0]].shape[0]
        degenerate += t_degen
        if t_row is not None and t_num * den > num * t_den:
            num, den, best_task, best_row = t_num, t_den, task, t_row

    if best_task is None:
        return SearchResult(None, None, None, None, space, examined, degenerate)

    n, endpoints = best_task
    instance = _instance_from_row(n, endpoints, blocks[n][best_row], space.degree)
    check = poa(instance)
    if check.degenerate or check.ratio != Fraction(num, den):
        raise RuntimeError("batched scorer disagrees with the exact solver")
    return SearchResult(
        instance,
        check.ratio,
        check.nash_value,
        check.optimum_value,
        space,
        examined,
        degenerate,
    )


def degree_probe(space: SearchSpace, degree: int, jobs: int = 1) -> ProbeResult:
    """Probe whether the worst ratio of the space scales like 2**degree.

    First the linear-latency search runs; its winning instance is then
    rescored with the probe degree. If that already reaches the target
    the probe stops, otherwise a full search at the probe degree runs.
    achieved reports whether either route reached the target; a False
    with both ratios populated is an explicit non-finding for the space.
    """
    if degree < 1:
        raise ValueError("degree must be a positive integer")
    target = Fraction(2) ** degree
    base = exhaustive_poa_search(space, jobs=jobs)
    reused = None
    if base.instance is not None:
        rescored = poa(
            RingInstance(
                base.instance.n, base.instance.links, base.instance.agents, degree
            )
        )
        reused = rescored.ratio if not rescored.degenerate else None
        if reused is not None and reused >= target:
            return ProbeResult(degree, target, base, reused, None, True)
    deep = exhaustive_poa_search(
        SearchSpace(space.max_n, space.agents, space.budget, degree), jobs=jobs
    )
    achieved = deep.ratio is not None and deep.ratio >= target
    return ProbeResult(degree, target, base, reused, deep, achieved)
