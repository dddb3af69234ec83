import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from helpers import all_routings, instances_with_routing, ring_instances
from srr import (
    CCW,
    CW,
    RingInstance,
    agent_latency,
    agent_paths,
    dump_instance,
    ensure_valid,
    format_ratio,
    instance_from_dict,
    instance_to_dict,
    iter_routings,
    latency,
    load_instance,
    loads,
    max_latency,
    norm_a,
    norm_b,
    path_links,
    ring_latency,
    routing_from_strings,
    routing_to_strings,
    validate,
)


def test_validate_accepts_fixtures(fixa, fixb, tight):
    assert validate(fixa) == []
    assert validate(fixb) == []
    assert validate(tight) == []


def test_validate_reports_each_defect():
    bad = RingInstance(1, ((1, 0),), ((0, 0),))
    problems = validate(bad)
    assert "n must be at least 2" in problems
    assert "agent 0: s=t" in problems

    assert "link count 1 must equal n=2" in validate(
        RingInstance(2, ((1, 0),), ((0, 1),))
    )
    assert "link 1: negative coefficient" in validate(
        RingInstance(2, ((1, 0), (-1, 0)), ((0, 1),))
    )
    assert "degree must be a positive integer" in validate(
        RingInstance(2, ((1, 0), (1, 0)), ((0, 1),), degree=0)
    )
    assert "at least one agent is required" in validate(
        RingInstance(2, ((1, 0), (1, 0)), ())
    )
    assert "agent 0: endpoint out of range" in validate(
        RingInstance(2, ((1, 0), (1, 0)), ((0, 5),))
    )


def test_ensure_valid_raises_with_joined_message():
    bad = RingInstance(2, ((1, 0), (-1, 0)), ((0, 0),))
    with pytest.raises(ValueError, match="invalid instance: "):
        ensure_valid(bad)


def test_parallel_link_ring_is_legal():
    inst = RingInstance(2, ((1, 0), (1, 0)), ((0, 1),))
    assert validate(inst) == []
    assert path_links(inst, 0, CW) == frozenset({0})
    assert path_links(inst, 0, CCW) == frozenset({1})


def test_path_links_fixb(fixb):
    assert path_links(fixb, 0, CW) == frozenset({0, 1})
    assert path_links(fixb, 0, CCW) == frozenset({2, 3})
    assert path_links(fixb, 1, CW) == frozenset({2, 3})
    assert path_links(fixb, 1, CCW) == frozenset({0, 1})


def test_path_links_wraparound():
    inst = RingInstance(4, ((1, 0),) * 4, ((3, 1),))
    assert path_links(inst, 0, CW) == frozenset({3, 0})
    assert path_links(inst, 0, CCW) == frozenset({1, 2})


def test_path_links_errors(tight):
    with pytest.raises(IndexError):
        path_links(tight, 9, CW)
    with pytest.raises(ValueError, match="orientation must be CW"):
        path_links(tight, 0, 2)


def test_agent_paths_matches_path_links(tight):
    paths = agent_paths(tight)
    assert len(paths) == tight.k
    for i, (cw, ccw) in enumerate(paths):
        assert frozenset(cw) == path_links(tight, i, CW)
        assert frozenset(ccw) == path_links(tight, i, CCW)
        assert list(cw) == sorted(cw)


def test_loads_and_latencies_fixb(fixb):
    nash = (CW, CW)
    assert loads(fixb, nash) == (1, 1, 1, 1)
    assert agent_latency(fixb, nash, 0) == 2
    assert max_latency(fixb, nash) == 2
    assert ring_latency(fixb, nash) == 4
    assert max_latency(fixb, (CW, CCW)) == 3


def test_norms_fixb(fixb):
    subset = frozenset({0, 1})
    assert norm_a(fixb, subset) == 1
    assert norm_b(fixb, subset) == 1


def test_latency_higher_degree():
    inst = RingInstance(2, ((2, 1), (0, 0)), ((0, 1), (0, 1)), degree=3)
    # load 2 on link 0: 2 * 2**3 + 1
    assert latency(inst, (CW, CW), frozenset({0})) == 17


def test_format_ratio_keeps_denominator():
    assert format_ratio(Fraction(2, 1)) == "2/1"
    assert format_ratio(Fraction(4, 6)) == "2/3"


def test_instance_dict_round_trip(tight):
    doc = instance_to_dict(tight)
    assert "degree" not in doc
    assert instance_from_dict(doc) == tight

    deg2 = RingInstance(tight.n, tight.links, tight.agents, degree=2)
    doc2 = instance_to_dict(deg2)
    assert doc2["degree"] == 2
    assert instance_from_dict(doc2) == deg2


def test_instance_from_dict_rejects_malformed():
    with pytest.raises(ValueError, match="malformed instance document"):
        instance_from_dict({"n": 2, "links": "oops"})
    with pytest.raises(ValueError, match="malformed instance document"):
        instance_from_dict({"links": [], "agents": []})


def test_file_round_trip(tmp_path, tight):
    path = tmp_path / "inst.json"
    dump_instance(tight, path)
    assert load_instance(path) == tight
    # the file is plain JSON
    with open(path, "r", encoding="utf-8") as fh:
        json.load(fh)


def test_routing_strings_round_trip():
    assert routing_to_strings((CW, CCW)) == ["cw", "ccw"]
    assert routing_from_strings(["cw", "ccw"]) == (CW, CCW)
    with pytest.raises(ValueError, match="orientation must be 'cw' or 'ccw'"):
        routing_from_strings(["cw", "sideways"])


def test_iter_routings_lexicographic():
    assert list(iter_routings(2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(list(iter_routings(4))) == 16


@given(instances_with_routing())
@settings(max_examples=150, deadline=None)
def test_paths_partition_ring(pair):
    instance, routing = pair
    everything = frozenset(range(instance.n))
    for i in range(instance.k):
        cw = path_links(instance, i, CW)
        ccw = path_links(instance, i, CCW)
        assert cw | ccw == everything
        assert not (cw & ccw)
        assert cw and ccw


@given(instances_with_routing())
@settings(max_examples=150, deadline=None)
def test_social_cost_is_max_agent_latency(pair):
    instance, routing = pair
    per_agent = [agent_latency(instance, routing, i) for i in range(instance.k)]
    assert max_latency(instance, routing) == max(per_agent)
    assert ring_latency(instance, routing) == latency(
        instance, routing, frozenset(range(instance.n))
    )


@given(ring_instances())
@settings(max_examples=100, deadline=None)
def test_loads_count_every_agent(instance):
    for routing in all_routings(instance)[:8]:
        counts = loads(instance, routing)
        assert sum(counts) == sum(
            len(path_links(instance, i, routing[i])) for i in range(instance.k)
        )
