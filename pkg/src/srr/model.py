"""Ring instances, arc paths, and exact latency arithmetic.

A ring on n nodes has n links; link j joins nodes j and (j+1) mod n,
so for n=2 the two links are parallel. Every agent ships one
unsplittable unit from its source s to its sink t and must pick one of
the two arcs: clockwise over links {s, s+1, ..., t-1 (mod n)} or
counterclockwise over the complementary link set. A link with
coefficients (a, b) at load x costs a * x**degree + b. Coefficients
are nonnegative integers, so every latency computed here is an exact
integer; ratios of latencies are carried as exact fractions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

CW = 0
CCW = 1

ORIENTATION_NAMES = {CW: "cw", CCW: "ccw"}
ORIENTATION_VALUES = {"cw": CW, "ccw": CCW}

# A routing is a tuple with one orientation (CW or CCW) per agent.
Routing = tuple

DEFAULT_ENUM_LIMIT = 20


class InstanceTooLarge(ValueError):
    """Raised when an enumeration would exceed the agent limit."""

    def __init__(self, k: int, limit: int):
        super().__init__(f"instance too large: {k} agents exceeds limit {limit}")


class DegenerateOptimum(ValueError):
    """Raised when a ratio is requested but the optimum latency is zero."""

    def __init__(self):
        super().__init__("degenerate: optimum latency zero")


@dataclass(frozen=True)
class RingInstance:
    """Immutable ring routing instance.

    n: node count (and link count), at least 2.
    links: (slope, intercept) per link, nonnegative integers.
    agents: (source, sink) node pair per agent, source != sink.
    degree: exponent applied to the load in every latency term.
    """

    n: int
    links: tuple[tuple[int, int], ...]
    agents: tuple[tuple[int, int], ...]
    degree: int = 1

    def __post_init__(self):
        object.__setattr__(
            self, "links", tuple((int(a), int(b)) for a, b in self.links)
        )
        object.__setattr__(
            self, "agents", tuple((int(s), int(t)) for s, t in self.agents)
        )

    @property
    def k(self) -> int:
        return len(self.agents)


def validate(instance: RingInstance) -> list[str]:
    """Return every violated instance invariant, empty when valid."""
    errors = []
    if instance.n < 2:
        errors.append("n must be at least 2")
    if len(instance.links) != instance.n:
        errors.append(f"link count {len(instance.links)} must equal n={instance.n}")
    if instance.degree < 1:
        errors.append("degree must be a positive integer")
    if not instance.agents:
        errors.append("at least one agent is required")
    for j, (a, b) in enumerate(instance.links):
        if a < 0 or b < 0:
            errors.append(f"link {j}: negative coefficient")
    for i, (s, t) in enumerate(instance.agents):
        if not (0 <= s < instance.n and 0 <= t < instance.n):
            errors.append(f"agent {i}: endpoint out of range")
        elif s == t:
            errors.append(f"agent {i}: s=t")
    return errors


def ensure_valid(instance: RingInstance) -> None:
    errors = validate(instance)
    if errors:
        raise ValueError("invalid instance: " + "; ".join(errors))


def path_links(instance: RingInstance, agent: int, orientation: int) -> frozenset[int]:
    """Link set of one arc of an agent.

    The clockwise arc from s to t is {s, s+1, ..., t-1 (mod n)}; the
    counterclockwise arc is its complement. The two arcs of an agent
    always partition the full link set.
    """
    if not 0 <= agent < len(instance.agents):
        raise IndexError(f"agent index {agent} out of range")
    s, t = instance.agents[agent]
    cw = []
    j = s
    while j != t:
        cw.append(j)
        j = (j + 1) % instance.n
    if orientation == CW:
        return frozenset(cw)
    if orientation == CCW:
        return frozenset(range(instance.n)) - frozenset(cw)
    raise ValueError("orientation must be CW (0) or CCW (1)")


def agent_paths(instance: RingInstance) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """Both arcs of every agent as sorted link-index tuples, CW first."""
    out = []
    for i in range(len(instance.agents)):
        cw = path_links(instance, i, CW)
        ccw = tuple(j for j in range(instance.n) if j not in cw)
        out.append((tuple(sorted(cw)), ccw))
    return tuple(out)


def loads(instance: RingInstance, routing: Routing) -> tuple[int, ...]:
    """Per-link agent counts induced by a routing."""
    counts = [0] * instance.n
    for i, orientation in enumerate(routing):
        for e in path_links(instance, i, orientation):
            counts[e] += 1
    return tuple(counts)


def latency(instance: RingInstance, routing: Routing, link_set: Iterable[int]) -> int:
    """Total latency of a link set under the loads of a routing."""
    counts = loads(instance, routing)
    d = instance.degree
    total = 0
    for e in link_set:
        a, b = instance.links[e]
        total += a * counts[e] ** d + b
    return total


def norm_a(instance: RingInstance, link_set: Iterable[int]) -> int:
    """Sum of slope coefficients over a link set (marginal cost of one
    extra agent at degree 1)."""
    return sum(instance.links[e][0] for e in link_set)


def norm_b(instance: RingInstance, link_set: Iterable[int]) -> int:
    """Sum of intercept coefficients over a link set."""
    return sum(instance.links[e][1] for e in link_set)


def agent_latency(instance: RingInstance, routing: Routing, agent: int) -> int:
    return latency(instance, routing, path_links(instance, agent, routing[agent]))


def max_latency(instance: RingInstance, routing: Routing) -> int:
    """Largest path latency over all agents, the social cost."""
    counts = loads(instance, routing)
    d = instance.degree
    worst = 0
    for i, orientation in enumerate(routing):
        total = 0
        for e in path_links(instance, i, orientation):
            a, b = instance.links[e]
            total += a * counts[e] ** d + b
        worst = max(worst, total)
    return worst


def ring_latency(instance: RingInstance, routing: Routing) -> int:
    """Latency of the whole ring under a routing's loads."""
    return latency(instance, routing, range(instance.n))


def format_ratio(value: Fraction) -> str:
    """Exact rational string with an explicit denominator, e.g. 2/1."""
    fr = Fraction(value)
    return f"{fr.numerator}/{fr.denominator}"


# ---------------------------------------------------------------------------
# File formats


def instance_to_dict(instance: RingInstance) -> dict:
    doc = {
        "n": instance.n,
        "links": [{"a": a, "b": b} for a, b in instance.links],
        "agents": [{"s": s, "t": t} for s, t in instance.agents],
    }
    if instance.degree != 1:
        doc["degree"] = instance.degree
    return doc


def instance_from_dict(doc: dict) -> RingInstance:
    try:
        n = int(doc["n"])
        links = tuple((int(rec["a"]), int(rec["b"])) for rec in doc["links"])
        agents = tuple((int(rec["s"]), int(rec["t"])) for rec in doc["agents"])
        degree = int(doc.get("degree", 1))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed instance document: {exc}") from exc
    return RingInstance(n=n, links=links, agents=agents, degree=degree)


def load_instance(path: str) -> RingInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_dict(json.load(fh))


def dump_instance(instance: RingInstance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(instance), fh, indent=2)
        fh.write("\n")


def routing_to_strings(routing: Routing) -> list[str]:
    return [ORIENTATION_NAMES[o] for o in routing]


def routing_from_strings(items: Sequence[str]) -> Routing:
    try:
        return tuple(ORIENTATION_VALUES[s.strip().lower()] for s in items)
    except KeyError as exc:
        raise ValueError(f"orientation must be 'cw' or 'ccw', got {exc}") from exc


def iter_routings(k: int) -> Iterator[Routing]:
    """All 2**k routings in lexicographic order (CW before CCW)."""
    for r in range(1 << k):
        yield tuple((r >> (k - 1 - i)) & 1 for i in range(k))
