"""Shared strategies and small fixtures for the test suite."""

from hypothesis import strategies as st

from srr import RingInstance, iter_routings


@st.composite
def ring_instances(draw, max_n=6, max_k=4, max_coeff=3, degree=1):
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(1, max_k))
    links = tuple(
        (draw(st.integers(0, max_coeff)), draw(st.integers(0, max_coeff)))
        for _ in range(n)
    )
    agents = []
    for _ in range(k):
        s = draw(st.integers(0, n - 1))
        t = draw(st.integers(0, n - 2))
        agents.append((s, t + (t >= s)))
    return RingInstance(n, links, tuple(agents), degree)


@st.composite
def instances_with_routing(draw, **kwargs):
    instance = draw(ring_instances(**kwargs))
    routing = tuple(draw(st.integers(0, 1)) for _ in range(instance.k))
    return instance, routing


def all_routings(instance):
    return list(iter_routings(instance.k))
