"""Structural classification of equilibria and the certified latency bounds.

Fix a worst equilibrium and an optimal routing that differs from it on
as few agents as possible. The agents that differ are the switching
agents; h counts them. The equilibrium is covering when the switching
agents' equilibrium arcs jointly cover the ring, and singular when the
social cost is attained only by non-switching agents.

Singular (and more generally oversized) cases reduce: removing a
non-switching agent while folding its unit of load into the intercepts
of its arc preserves every remaining latency at degree 1. Iterating
until every agent switches yields the core on which the covering load
profile is defined; the profile feeds the numeric certification in
`srr.npverify`.

check_all_bounds evaluates every certified inequality on an instance as
a uniform list of lhs <= rhs records with exact rational sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (
    DEFAULT_ENUM_LIMIT,
    DegenerateOptimum,
    RingInstance,
    Routing,
    ensure_valid,
    format_ratio,
    latency,
    loads,
    max_latency,
    path_links,
    ring_latency,
)
from .equilibria import is_nash, worst_nash
from .optimum import OptimumResult, exact_optimum, min_h_optimum


@dataclass(frozen=True)
class Classification:
    h: int
    switching: tuple[int, ...]
    covering: bool
    singular: bool


def _classification(instance: RingInstance, nash: Routing, opt: Routing) -> Classification:
    switching = tuple(i for i in range(len(nash)) if nash[i] != opt[i])
    h = len(switching)
    if h == 0:
        return Classification(0, (), False, False)
    covered = set()
    for i in switching:
        covered |= path_links(instance, i, nash[i])
    covering = len(covered) == instance.n
    social = max_latency(instance, nash)
    switching_max = max(latency(instance, nash, path_links(instance, i, nash[i])) for i in switching)
    return Classification(h, switching, covering, social > switching_max)


def classify(
    instance: RingInstance,
    nash: Routing,
    opt: Routing,
    limit: int = DEFAULT_ENUM_LIMIT,
) -> Classification:
    """Classify an equilibrium against an optimal routing.

    Both routings are verified: nash must admit no improving deviation
    and opt must attain the exact optimal value.
    """
    ensure_valid(instance)
    if not is_nash(instance, nash):
        raise ValueError("not a Nash routing")
    if max_latency(instance, opt) != exact_optimum(instance, limit=limit).value:
        raise ValueError("not optimal")
    return _classification(instance, nash, opt)


@dataclass(frozen=True)
class BoundCheck:
    """One certified inequality, evaluated as lhs <= rhs.

    Inapplicable checks keep passed=None: skipped is never reported as
    passed. The witness carries context (offending pair, subcase, the
    quantities entering the ratio).
    """

    name: str
    applicable: bool
    lhs: Fraction | None
    rhs: Fraction | None
    passed: bool | None
    witness: object | None = None

    def to_dict(self) -> dict:
        return {
            "check": self.name,
            "applicable": self.applicable,
            "lhs": None if self.lhs is None else format_ratio(self.lhs),
            "rhs": None if self.rhs is None else format_ratio(self.rhs),
            "pass": self.passed,
            "witness": self.witness,
        }


def _ratio_check(name: str, lhs: Fraction, rhs: Fraction, witness=None) -> BoundCheck:
    return BoundCheck(name, True, lhs, rhs, lhs <= rhs, witness)


def _skipped(name: str, witness=None) -> BoundCheck:
    return BoundCheck(name, False, None, None, None, witness)


def pairwise_intersection_check(
    instance: RingInstance, nash: Routing, opt: Routing
) -> BoundCheck:
    """Equilibrium arcs of switching agents meet pairwise.

    Counted as lhs = number of disjoint switching pairs against rhs = 0;
    vacuously true below two switching agents.
    """
    cls = _classification(instance, nash, opt)
    arcs = {i: path_links(instance, i, nash[i]) for i in cls.switching}
    disjoint = []
    for pos, i in enumerate(cls.switching):
        for j in cls.switching[pos + 1 :]:
            if not (arcs[i] & arcs[j]):
                disjoint.append((i, j))
    witness = {"disjoint_pairs": disjoint} if disjoint else None
    return _ratio_check(
        "switching-nash-paths-pairwise-intersect",
        Fraction(len(disjoint)),
        Fraction(0),
        witness,
    )


def singular_reduction(
    instance: RingInstance,
    nash: Routing,
    opt: Routing,
    q: int,
    verify: bool = True,
) -> tuple[RingInstance, Routing, Routing]:
    """Remove non-switching agent q, folding its load into intercepts.

    q rides the same arc in nash and opt; each link of that arc gets its
    slope added to its intercept, which at degree 1 substitutes exactly
    for q's unit of load as seen by everyone else. With verify=True the
    guarantees are recomputed per call: the reduced nash stays an
    equilibrium, the ring latency is unchanged, and the reduced optimum
    never exceeds the original optimal cost.
    """
    ensure_valid(instance)
    if instance.degree != 1:
        raise ValueError("degree must be 1")
    if not 0 <= q < len(instance.agents):
        raise IndexError(f"agent index {q} out of range")
    if nash[q] != opt[q]:
        raise ValueError("agent is switching")
    folded = path_links(instance, q, opt[q])
    links = tuple(
        (a, b + a) if e in folded else (a, b) for e, (a, b) in enumerate(instance.links)
    )
    agents = tuple(pair for i, pair in enumerate(instance.agents) if i != q)
    reduced = RingInstance(n=instance.n, links=links, agents=agents, degree=1)
    reduced_nash = tuple(o for i, o in enumerate(nash) if i != q)
    reduced_opt = tuple(o for i, o in enumerate(opt) if i != q)
    if verify:
        if not is_nash(reduced, reduced_nash):
            raise RuntimeError("reduction broke the equilibrium")
        if ring_latency(reduced, reduced_nash) != ring_latency(instance, nash):
            raise RuntimeError("reduction changed the ring latency")
        if exact_optimum(reduced).value > max_latency(instance, opt):
            raise RuntimeError("reduction increased the optimum")
    return reduced, reduced_nash, reduced_opt


def split_links(instance: RingInstance) -> RingInstance:
    """Expand every link into unit pieces: (a, b) becomes a links of
    slope one plus b links of intercept one; (0, 0) stays as a single
    placeholder. Agent endpoints are remapped so each agent's two arcs
    traverse exactly the images of the original links, preserving every
    path latency at degree 1.
    """
    split, _ = _split_with_offsets(instance)
    return split


def _split_with_offsets(instance: RingInstance) -> tuple[RingInstance, tuple[int, ...]]:
    ensure_valid(instance)
    if instance.degree != 1:
        raise ValueError("degree must be 1")
    pieces: list[tuple[int, int]] = []
    offsets = [0]
    for a, b in instance.links:
        if a == 0 and b == 0:
            pieces.append((0, 0))
        else:
            pieces.extend([(1, 0)] * a)
            pieces.extend([(0, 1)] * b)
        offsets.append(len(pieces))
    agents = tuple((offsets[s], offsets[t]) for s, t in instance.agents)
    split = RingInstance(n=len(pieces), links=tuple(pieces), agents=agents, degree=1)
    return split, tuple(offsets)


@dataclass(frozen=True)
class SplitProfile:
    """Load histogram of a covering equilibrium on the split core.

    Index i-1 holds the number of unit-slope (resp. unit-intercept)
    links carrying exactly i agents, for i = 1..h. The normalized
    weights divide the slope mass by load; beta is intercept mass over
    slope mass and z its load-weighted first moment, both exact. When
    the core has no slope links at all (zero_slope), the normalized
    quantities are undefined and kept as None.
    """

    h: int
    slope_count: tuple[int, ...]
    intercept_count: tuple[int, ...]
    zero_slope: bool
    weights: tuple[Fraction, ...] | None
    beta: Fraction | None
    z: Fraction | None
    constraint_lhs: int
    constraint_rhs: int

    def normalized_constraint(self) -> tuple[Fraction, Fraction] | None:
        """Exact sides of the normalized load constraint, or None when
        the slope mass vanishes."""
        if self.zero_slope:
            return None
        h = self.h
        lhs = sum(
            (Fraction(2 * i, h) - Fraction(1, i)) * w
            for i, w in enumerate(self.weights, start=1)
        ) + 2 * self.z
        rhs = Fraction(h - 1, h) + self.beta
        return lhs, rhs

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "slope_count": list(self.slope_count),
            "intercept_count": list(self.intercept_count),
            "zero_slope": self.zero_slope,
            "weights": None if self.weights is None else [format_ratio(w) for w in self.weights],
            "beta": None if self.beta is None else format_ratio(self.beta),
            "z": None if self.z is None else format_ratio(self.z),
            "constraint_lhs": self.constraint_lhs,
            "constraint_rhs": self.constraint_rhs,
        }


def profile(instance: RingInstance, nash: Routing, opt: Routing) -> SplitProfile:
    """Covering load profile of a core instance (every agent switching).

    Requires degree 1, a verified equilibrium, a verified optimal
    routing, covering switching arcs, and no non-switching agents left;
    reduce first otherwise.
    """
    ensure_valid(instance)
    if instance.degree != 1:
        raise ValueError("degree must be 1")
    if not is_nash(instance, nash):
        raise ValueError("not a Nash routing")
    if max_latency(instance, opt) != exact_optimum(instance).value:
        raise ValueError("not optimal")
    cls = _classification(instance, nash, opt)
    if not cls.covering:
        raise ValueError("not covering")
    if len(instance.agents) > cls.h:
        raise ValueError("singular instance -- reduce first")
    return _profile_of_core(instance, nash, cls.h)


def _profile_of_core(instance: RingInstance, nash: Routing, h: int) -> SplitProfile:
    split, _ = _split_with_offsets(instance)
    counts = loads(split, nash)
    slope = [0] * h
    intercept = [0] * h
    for e, (a, b) in enumerate(split.links):
        if (a, b) == (0, 0):
            continue
        x = counts[e]
        assert 1 <= x <= h  # covering keeps every real link loaded
        if a == 1:
            slope[x - 1] += 1
        else:
            intercept[x - 1] += 1
    constraint_lhs = sum(
        (2 * i * i - h) * slope[i - 1] + 2 * i * intercept[i - 1] for i in range(1, h + 1)
    )
    constraint_rhs = sum(
        (h - 1) * i * slope[i - 1] + h * intercept[i - 1] for i in range(1, h + 1)
    )
    slope_mass = sum(i * slope[i - 1] for i in range(1, h + 1))
    if slope_mass == 0:
        return SplitProfile(
            h, tuple(slope), tuple(intercept), True, None, None, None,
            constraint_lhs, constraint_rhs,
        )
    weights = tuple(Fraction(i * slope[i - 1], slope_mass) for i in range(1, h + 1))
    beta = Fraction(sum(intercept), slope_mass)
    z = Fraction(sum(i * intercept[i - 1] for i in range(1, h + 1)), h * slope_mass)
    return SplitProfile(
        h, tuple(slope), tuple(intercept), False, weights, beta, z,
        constraint_lhs, constraint_rhs,
    )


@dataclass
class InstanceAnalysis:
    """Everything check_all_bounds derives from one instance."""

    instance: RingInstance
    worst: Routing
    optimum: OptimumResult
    classification: Classification
    checks: list[BoundCheck]
    core_instance: RingInstance
    core_nash: Routing
    core_opt: Routing
    core_classification: Classification
    core_optimum_value: int
    profile: SplitProfile | None
    reductions: int


def analyze_instance(instance: RingInstance, limit: int = DEFAULT_ENUM_LIMIT) -> InstanceAnalysis:
    """Worst equilibrium, closest optimum, classification, reduction to
    the core, and the full list of bound checks.

    Raises DegenerateOptimum when the optimal cost is zero; every ratio
    below would be undefined.
    """
    ensure_valid(instance)
    if instance.degree != 1:
        raise ValueError("bound checks require degree 1")
    worst = worst_nash(instance, limit)
    optres = exact_optimum(instance, limit=limit, nash=worst)
    if optres.value == 0:
        raise DegenerateOptimum()
    opt = optres.selected
    cls = _classification(instance, worst, opt)

    nash_value = max_latency(instance, worst)
    ring_value = ring_latency(instance, worst)
    opt_value = optres.value
    h = cls.h

    checks: list[BoundCheck] = []
    checks.append(
        _ratio_check(
            "worst-nash-vs-optimum",
            Fraction(nash_value, opt_value),
            Fraction(2),
            {"nash": nash_value, "optimum": opt_value},
        )
    )
    checks.append(pairwise_intersection_check(instance, worst, opt))

    if cls.covering:
        checks.append(
            _ratio_check(
                "covering-max-vs-ring",
                Fraction(nash_value, ring_value),
                Fraction(2, 3),
            )
        )
        if h <= 2:
            subcase = "h<=2"
        elif h == 5:
            subcase = "h=5"
        elif h in (3, 4, 6):
            subcase = "case-table"
        else:
            subcase = "stationary-candidates"
        checks.append(
            _ratio_check(
                "covering-ring-vs-optimum",
                Fraction(ring_value, opt_value),
                Fraction(3),
                {"subcase": subcase, "h": h},
            )
        )
    else:
        checks.append(_skipped("covering-max-vs-ring"))
        checks.append(_skipped("covering-ring-vs-optimum"))

    # Reduce to the core: drop non-switching agents one at a time,
    # recomputing the closest optimum (and hence the switching set)
    # after every step. Terminates because the agent count drops; an
    # equilibrium that became optimal (h=0) has no core to analyze.
    core, core_nash, core_opt, core_cls = instance, worst, opt, cls
    core_value = opt_value
    reductions = 0
    while core_cls.h > 0 and len(core.agents) > core_cls.h:
        q = next(i for i in range(len(core.agents)) if i not in core_cls.switching)
        core, core_nash, _ = singular_reduction(core, core_nash, core_opt, q, verify=True)
        core_res = exact_optimum(core, limit=limit, nash=core_nash)
        core_opt = core_res.selected
        core_value = core_res.value
        core_cls = _classification(core, core_nash, core_opt)
        reductions += 1

    core_nash_value = max_latency(core, core_nash)
    core_ring_value = ring_latency(core, core_nash)
    ch = core_cls.h

    # The refined bounds live on the core, where no non-switching agents
    # remain; the reduction preserved the ring latency and never raised
    # the optimum, so the core ratios dominate the originals.
    if not core_cls.covering and ch >= 3:
        alpha = Fraction(2) + Fraction(2, ch)
        checks.append(
            _ratio_check(
                "noncovering-ring-vs-optimum",
                Fraction(core_ring_value, core_value),
                alpha,
                {"h": ch},
            )
        )
        checks.append(
            _ratio_check(
                "noncovering-max-vs-optimum-refined",
                Fraction(core_nash_value, core_value),
                (2 * alpha + Fraction(1, ch)) / 3,
                {"h": ch},
            )
        )
        checks.append(
            _ratio_check(
                "noncovering-max-vs-optimum",
                Fraction(core_nash_value, core_value),
                Fraction(4, 3) + Fraction(5, 3 * ch),
                {"h": ch},
            )
        )
    else:
        checks.append(_skipped("noncovering-ring-vs-optimum"))
        checks.append(_skipped("noncovering-max-vs-optimum-refined"))
        checks.append(_skipped("noncovering-max-vs-optimum"))

    if ch == 1:
        checks.append(
            _ratio_check(
                "single-switch-max-vs-optimum",
                Fraction(core_nash_value, core_value),
                Fraction(2),
            )
        )
    else:
        checks.append(_skipped("single-switch-max-vs-optimum"))
    if ch == 2 and not core_cls.covering:
        checks.append(
            _ratio_check(
                "double-switch-noncovering-max-vs-optimum",
                Fraction(core_nash_value, core_value),
                Fraction(2),
            )
        )
    else:
        checks.append(_skipped("double-switch-noncovering-max-vs-optimum"))

    prof: SplitProfile | None = None
    if core_cls.covering and ch >= 1:
        prof = _profile_of_core(core, core_nash, ch)
        checks.append(
            _ratio_check(
                "covering-profile-constraint",
                Fraction(prof.constraint_lhs),
                Fraction(prof.constraint_rhs),
            )
        )
        if prof.zero_slope:
            checks.append(_skipped("covering-profile-normalized-constraint"))
            checks.append(
                _ratio_check(
                    "zero-slope-ring-vs-optimum",
                    Fraction(core_ring_value, core_value),
                    Fraction(2),
                )
            )
        else:
            lhs, rhs = prof.normalized_constraint()
            checks.append(
                _ratio_check("covering-profile-normalized-constraint", lhs, rhs)
            )
            checks.append(_skipped("zero-slope-ring-vs-optimum"))
    else:
        checks.append(_skipped("covering-profile-constraint"))
        checks.append(_skipped("covering-profile-normalized-constraint"))
        checks.append(_skipped("zero-slope-ring-vs-optimum"))

    return InstanceAnalysis(
        instance=instance,
        worst=worst,
        optimum=optres,
        classification=cls,
        checks=checks,
        core_instance=core,
        core_nash=core_nash,
        core_opt=core_opt,
        core_classification=core_cls,
        core_optimum_value=core_value,
        profile=prof,
        reductions=reductions,
    )


def check_all_bounds(instance: RingInstance, limit: int = DEFAULT_ENUM_LIMIT) -> list[BoundCheck]:
    """Evaluate every certified bound on one instance."""
    return analyze_instance(instance, limit=limit).checks
