import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import instances_with_routing
from srr import (
    CCW,
    CW,
    InstanceTooLarge,
    RingInstance,
    agent_latency,
    best_response,
    best_response_trajectory,
    enumerate_nash,
    is_nash,
    max_latency,
    potential,
    worst_nash,
)


def test_potential_fixa(fixa):
    assert potential(fixa, (CW, CW)) == 3
    assert potential(fixa, (CW, CCW)) == 2


def test_potential_counts_square_sums_for_higher_degree():
    inst = RingInstance(2, ((1, 0), (0, 0)), ((0, 1), (0, 1)), degree=2)
    # both agents on link 0: 1**2 + 2**2
    assert potential(inst, (CW, CW)) == 5


def test_is_nash_fixb(fixb):
    check = is_nash(fixb, (CW, CW))
    assert check
    assert check.ok
    assert check.witness is None

    check = is_nash(fixb, (CW, CCW))
    assert not check
    witness = check.witness
    assert witness is not None
    # the witness carries both costs, deviation strictly cheaper
    assert witness.deviation < witness.current
    assert witness.current == agent_latency(fixb, (CW, CCW), witness.agent)
    flipped = list((CW, CCW))
    flipped[witness.agent] ^= 1
    assert witness.deviation == agent_latency(fixb, tuple(flipped), witness.agent)


def test_deviation_cost_counts_joined_load(fixb):
    # from the all-clockwise equilibrium each agent faces a switch cost
    # of 3 against a current latency of 2, so the routing is stable
    assert max_latency(fixb, (CW, CW)) == 2
    assert is_nash(fixb, (CW, CW)).ok


def test_enumerate_nash_fixa_lex_order(fixa):
    assert enumerate_nash(fixa) == [(CW, CCW), (CCW, CW)]


def test_enumerate_nash_fixb(fixb):
    assert enumerate_nash(fixb) == [(CW, CW), (CCW, CCW)]


def test_worst_nash_prefers_first_maximum(fixa, fixb):
    assert worst_nash(fixa) == (CW, CCW)
    assert max_latency(fixa, worst_nash(fixa)) == 1
    assert worst_nash(fixb) == (CW, CW)
    assert max_latency(fixb, worst_nash(fixb)) == 2


def test_worst_nash_tight(tight):
    nash = worst_nash(tight)
    assert nash == (CCW, CCW)
    assert max_latency(tight, nash) == 2


def test_best_response_fixa(fixa):
    trajectory = best_response_trajectory(fixa, (CW, CW))
    assert trajectory[0] == (CW, CW)
    assert trajectory[-1] == (CCW, CW)
    assert len(trajectory) - 1 <= potential(fixa, (CW, CW))
    assert best_response(fixa, (CW, CW)) == (CCW, CW)
    assert is_nash(fixa, trajectory[-1]).ok


def test_best_response_fixed_point(fixb):
    # starting at an equilibrium, no moves happen
    assert best_response_trajectory(fixb, (CW, CW)) == [(CW, CW)]


def test_enumeration_limit():
    inst = RingInstance(2, ((1, 0), (1, 0)), tuple((0, 1) for _ in range(21)))
    with pytest.raises(InstanceTooLarge, match="instance too large: 21 agents exceeds limit 20"):
        enumerate_nash(inst)
    small = RingInstance(2, ((1, 0), (1, 0)), ((0, 1), (0, 1), (0, 1)))
    with pytest.raises(InstanceTooLarge, match="exceeds limit 2"):
        enumerate_nash(small, limit=2)
    assert len(enumerate_nash(small, limit=3)) >= 1


@given(instances_with_routing(max_k=4))
@settings(max_examples=200, deadline=None)
def test_potential_difference_tracks_mover(pair):
    instance, routing = pair
    for agent in range(instance.k):
        flipped = list(routing)
        flipped[agent] ^= 1
        flipped = tuple(flipped)
        delta_phi = potential(instance, flipped) - potential(instance, routing)
        delta_agent = agent_latency(instance, flipped, agent) - agent_latency(
            instance, routing, agent
        )
        assert delta_phi == delta_agent


@given(instances_with_routing(max_k=4))
@settings(max_examples=100, deadline=None)
def test_best_response_reaches_nash_within_potential(pair):
    instance, start = pair
    trajectory = best_response_trajectory(instance, start)
    assert trajectory[0] == start
    assert len(trajectory) - 1 <= potential(instance, start)
    assert is_nash(instance, trajectory[-1]).ok
    # the potential strictly decreases along the walk
    values = [potential(instance, r) for r in trajectory]
    assert all(a > b for a, b in zip(values, values[1:]))


@given(instances_with_routing(max_k=4))
@settings(max_examples=100, deadline=None)
def test_nash_check_agrees_with_enumeration(pair):
    instance, routing = pair
    nash_set = set(enumerate_nash(instance))
    assert (routing in nash_set) == bool(is_nash(instance, routing))


@given(instances_with_routing(max_k=4))
@settings(max_examples=100, deadline=None)
def test_worst_nash_is_the_lex_first_maximum(pair):
    instance, _ = pair
    equilibria = enumerate_nash(instance)
    worst = worst_nash(instance)
    value = max_latency(instance, worst)
    assert value == max(max_latency(instance, r) for r in equilibria)
    assert worst == next(
        r for r in equilibria if max_latency(instance, r) == value
    )
