from fractions import Fraction
from math import comb

import pytest

from srr import (
    RandomSpec,
    RingInstance,
    SearchSpace,
    degree_probe,
    exhaustive_poa_search,
    poa,
    random_instance,
)
from srr.search import _coefficient_block


def test_random_instance_deterministic():
    spec = RandomSpec()
    assert random_instance(spec, 42) == random_instance(spec, 42)
    drawn = {random_instance(spec, seed) for seed in range(20)}
    assert len(drawn) > 1


def test_random_instance_respects_bounds():
    spec = RandomSpec(max_n=5, max_k=3, max_coeff=2, degree=2)
    for seed in range(200):
        inst = random_instance(spec, seed)
        assert 2 <= inst.n <= 5
        assert 1 <= inst.k <= 3
        assert inst.degree == 2
        assert all(0 <= a <= 2 and 0 <= b <= 2 for a, b in inst.links)
        assert all(s != t for s, t in inst.agents)


def test_search_space_validation():
    with pytest.raises(ValueError, match="max_n must be at least 2"):
        SearchSpace(1, 2, 4)
    with pytest.raises(ValueError, match="at least one agent"):
        SearchSpace(3, 0, 4)
    with pytest.raises(ValueError, match="budget must be nonnegative"):
        SearchSpace(3, 2, -1)
    with pytest.raises(ValueError, match="degree must be a positive integer"):
        SearchSpace(3, 2, 4, 0)


@pytest.mark.parametrize("slots,budget", [(2, 3), (4, 4), (6, 2)])
def test_coefficient_block_shape_and_order(slots, budget):
    block = _coefficient_block(slots, budget)
    assert block.shape == (comb(budget + slots, slots), slots)
    rows = [tuple(int(v) for v in row) for row in block]
    assert rows == sorted(rows)
    assert all(min(r) >= 0 and sum(r) <= budget for r in rows)


def test_exhaustive_search_small_space():
    result = exhaustive_poa_search(SearchSpace(3, 2, 4))
    # 4 endpoint configurations on 2 links, 36 on 3
    assert result.examined == 4 * comb(8, 4) + 36 * comb(10, 6) == 7840
    assert result.ratio == Fraction(2)
    assert result.nash_value == 2 * result.optimum_value
    assert result.instance.degree == 1
    recheck = poa(result.instance)
    assert recheck.ratio == result.ratio
    assert recheck.nash_value == result.nash_value
    assert result.degenerate > 0


def test_exhaustive_search_jobs_deterministic():
    space = SearchSpace(3, 2, 4)
    seq = exhaustive_poa_search(space, jobs=1)
    par = exhaustive_poa_search(space, jobs=3)
    assert seq == par


def test_exhaustive_search_dominates_member_instances():
    space = SearchSpace(3, 2, 3)
    result = exhaustive_poa_search(space)
    members = [
        RingInstance(3, ((1, 0), (0, 1), (1, 0)), ((0, 1), (0, 2))),
        RingInstance(2, ((1, 0), (1, 0)), ((0, 1), (0, 1))),
        RingInstance(3, ((1, 0), (1, 0), (0, 1)), ((0, 1), (1, 2))),
    ]
    for inst in members:
        assert sum(a + b for a, b in inst.links) <= space.budget
        check = poa(inst)
        assert not check.degenerate
        assert result.ratio >= check.ratio


def test_exhaustive_search_all_degenerate():
    result = exhaustive_poa_search(SearchSpace(2, 1, 0))
    assert result.instance is None
    assert result.ratio is None
    assert result.nash_value is None
    assert result.examined == 2
    assert result.degenerate == 2


def test_degree_probe_validation():
    with pytest.raises(ValueError, match="degree must be a positive integer"):
        degree_probe(SearchSpace(3, 2, 4), 0)


def test_degree_probe_reuses_base_winner():
    probe = degree_probe(SearchSpace(3, 2, 4), 1)
    assert probe.target == Fraction(2)
    assert probe.reused_ratio == Fraction(2)
    assert probe.search is None
    assert probe.achieved
    assert probe.ratio == Fraction(2)


def test_degree_probe_quadratic():
    probe = degree_probe(SearchSpace(3, 2, 6), 2)
    assert probe.target == Fraction(4)
    assert probe.base.ratio == Fraction(2)
    # the linear winner does not already reach 4, so the probe re-searches
    assert probe.reused_ratio is not None
    assert probe.reused_ratio < probe.target
    assert probe.search is not None
    assert probe.achieved
    assert probe.ratio == Fraction(4)
    winner = probe.search.instance
    assert winner == RingInstance(3, ((1, 0), (0, 3), (1, 0)), ((0, 1), (0, 2)), degree=2)
    assert poa(winner).ratio == Fraction(4)
