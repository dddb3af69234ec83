"""Fixtures shared across the suite, including the random corpus and the
acceptance summary printed at the end of a run."""

import time
from dataclasses import dataclass

import pytest

from srr import (
    DegenerateOptimum,
    RandomSpec,
    RingInstance,
    analyze_instance,
    max_latency,
    random_instance,
)

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def record():
    """Collect one pass/fail line per acceptance criterion."""

    def _record(number: int, passed: bool, detail: str) -> None:
        _ACCEPTANCE[number] = (bool(passed), detail)

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {detail}")


@pytest.fixture()
def fixa():
    return RingInstance(2, ((1, 0), (1, 0)), ((0, 1), (0, 1)))


@pytest.fixture()
def fixb():
    return RingInstance(4, ((1, 0), (0, 1), (1, 0), (0, 1)), ((0, 2), (2, 0)))


@pytest.fixture()
def tight():
    return RingInstance(3, ((1, 0), (1, 0), (0, 1)), ((0, 1), (1, 2)))


# Frozen regression instances found by randomized search: one whose
# worst equilibrium is singular, one whose fully reduced core has four
# switching agents without covering the ring.
SINGULAR_INSTANCE = RingInstance(
    8,
    ((2, 3), (3, 0), (1, 2), (0, 1), (3, 0), (0, 0), (3, 1), (1, 1)),
    ((0, 2), (7, 2), (1, 5), (3, 0)),
)
NONCOVERING_INSTANCE = RingInstance(
    6,
    ((0, 2), (3, 0), (0, 4), (0, 3), (0, 5), (0, 1)),
    ((3, 4), (2, 5), (2, 5), (1, 3), (1, 3)),
)


@dataclass(frozen=True)
class CorpusEntry:
    seed: int
    instance: RingInstance
    nash_value: int
    optimum_value: int
    checks: tuple  # (name, applicable, passed) triples
    singular: bool
    core_h: int
    core_covering: bool
    reductions: int


@dataclass(frozen=True)
class Corpus:
    entries: tuple
    skipped_degenerate: int
    elapsed: float


@pytest.fixture(scope="session")
def corpus():
    """10_000 nondegenerate random instances, fully analyzed.

    Seeds run sequentially from 0; instances whose optimum latency is
    zero are skipped and counted. Shared by the ratio, bound-check, and
    reduction criteria.
    """
    spec = RandomSpec(max_n=8, max_k=6, max_coeff=3, degree=1)
    entries = []
    skipped = 0
    seed = 0
    start = time.monotonic()
    while len(entries) < 10_000:
        instance = random_instance(spec, seed)
        seed += 1
        try:
            report = analyze_instance(instance)
        except DegenerateOptimum:
            skipped += 1
            continue
        entries.append(
            CorpusEntry(
                seed=seed - 1,
                instance=instance,
                nash_value=max_latency(instance, report.worst),
                optimum_value=report.optimum.value,
                checks=tuple(
                    (c.name, c.applicable, c.passed) for c in report.checks
                ),
                singular=report.classification.singular,
                core_h=report.core_classification.h,
                core_covering=report.core_classification.covering,
                reductions=report.reductions,
            )
        )
    return Corpus(tuple(entries), skipped, time.monotonic() - start)
