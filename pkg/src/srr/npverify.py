"""Numeric certification of the covering-profile minimization.

The covering analysis compresses an equilibrium core into three
numbers: h, the count of switching agents; beta, intercept mass over
slope mass on the split ring; and a normalized load profile. Bounding
the ring-latency ratio then reduces to showing that

    f(x, y, z) = h/x + x/h - (h/(x*(x+1)) - 1/h)*y - z - 2 + beta

is at least (1 + beta)/3 over the region

    g(x, y, z) = 2x/h - 1/x + (2/h + 1/(x*(x+1)))*y + 2z
                 - (h-1)/h - beta <= 0,
    x >= 1,  0 <= y <= 1,  z >= beta/h,

where x is the dominant switching load (an integer for h <= 6, relaxed
to a real for larger h), y interpolates between loads x and x+1, and z
is the load-weighted first moment of the intercept mass. f falls and g
grows as z grows, so minima sit on the g = 0 surface.

This module evaluates f and g with their closed-form gradients,
reproduces the finite case tables for h in {3, 4, 6}, enumerates the
stationary candidates of the relaxed problem for h >= 7 together with
their multipliers, and certifies the bound on a dense grid. The case
h = 5 genuinely violates the integer relaxation: the margin dips to
-1/120 near (x, y, beta) = (3, 0, 0.15), so grid certification reports
that gap instead of a bound there.

The support-shift move of consecutive_support_check shows the profile
weights may be assumed nonzero only on two consecutive loads: any
farther-apart pair of support points can be pushed one step toward each
other without losing feasibility while strictly shrinking the
objective.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

FEAS_TOL = 1e-12


def eval_fg(h: int, beta: float, x: float, y: float, z: float) -> tuple[float, float]:
    """Objective and constraint values at one point; x below 1 is outside
    the modeled domain."""
    if x < 1.0 - FEAS_TOL:
        raise ValueError("x must be at least 1")
    q = 1.0 / (x * (x + 1.0))
    f = h / x + x / h - (h * q - 1.0 / h) * y - z - 2.0 + beta
    g = 2.0 * x / h - 1.0 / x + (2.0 / h + q) * y + 2.0 * z - (h - 1.0) / h - beta
    return f, g


def f_partials(h: int, beta: float, x: float, y: float, z: float) -> tuple[float, float, float]:
    fx = 1.0 / h - h * (1.0 - y) / x**2 - h * y / (x + 1.0) ** 2
    fy = 1.0 / h - h / (x * (x + 1.0))
    return fx, fy, -1.0


def g_partials(h: int, beta: float, x: float, y: float, z: float) -> tuple[float, float, float]:
    gx = 2.0 / h + (1.0 - y) / x**2 + y / (x + 1.0) ** 2
    gy = 2.0 / h + 1.0 / (x * (x + 1.0))
    return gx, gy, 2.0


def solve_y_on_constraint(h: int, beta: float, x: float, z: float) -> float:
    """y putting (x, y, z) on the g = 0 surface."""
    return ((h - 1.0) / h + beta - 2.0 * x / h + 1.0 / x - 2.0 * z) / (
        2.0 / h + 1.0 / (x * (x + 1.0))
    )


def solve_z_on_constraint(h: int, beta: float, x: float, y: float) -> float:
    """z putting (x, y, z) on the g = 0 surface."""
    return (
        (h - 1.0) / h
        + beta
        - 2.0 * x / h
        + 1.0 / x
        - (2.0 / h + 1.0 / (x * (x + 1.0))) * y
    ) / 2.0


# Stationary geometry of the relaxed problem. On the edges y = 0 and
# y = 1 the shifted coordinate x + y is stationary at the same value,
# and the y-interior ridge y = (x+1)/(2x+1) pins x at the point where
# the gradient ratios of f and g match in every coordinate.


def edge_stationary_x(h: int) -> float:
    """Stationary x + y on the y edges of the g = 0 surface."""
    return math.sqrt(2.0 * h * h - h) / 2.0


def interior_stationary_x(h: int) -> float:
    """x at which the y-interior ridge of the g = 0 surface is stationary."""
    return (math.sqrt(2.0 * h * h - h + 1.0) - 1.0) / 2.0


def edge_stationary_z(h: int, beta: float) -> float:
    nu = edge_stationary_x(h)
    return ((h - 1.0 - 2.0 * nu) / h + 1.0 / nu + beta) / 2.0


def interior_stationary_z(h: int, beta: float) -> float:
    chi = interior_stationary_x(h)
    return 0.5 * (
        1.0
        + beta
        - (1.0 + 2.0 * chi) / h
        + 1.0 / chi
        - (2.0 / h + 1.0 / (chi * (chi + 1.0))) * (chi + 1.0) / (2.0 * chi + 1.0)
    )


def edge_candidate_value(h: int, beta: float) -> float:
    """Closed form of f at the y = 0 edge stationary point."""
    return (4.0 * math.sqrt(2.0 * h * h - h) + 1.0) / (2.0 * h) + (beta - 5.0) / 2.0


def interior_candidate_value(h: int, beta: float) -> float:
    """Closed form of f at the ridge stationary point."""
    return (4.0 * math.sqrt(2.0 * h * h - h + 1.0) + 1.0) / (2.0 * h) + (beta - 5.0) / 2.0


def x_floor_value(h: int, beta: float) -> float:
    """Closed form of f on the face x = 1 at its in-face minimum y = 1."""
    return h / 2.0 + 9.0 / (2.0 * h) - 11.0 / 4.0 + beta / 2.0


def target(beta: float) -> float:
    """The bound every feasible point must clear."""
    return (1.0 + beta) / 3.0


@dataclass(frozen=True)
class NPCandidate:
    """One evaluated candidate point with its provenance.

    multipliers, when present, solve the first-order system of the
    branch that produced the point; a negative entry marks a face whose
    candidate is dominated elsewhere rather than a true stationary
    point.
    """

    h: int
    beta: float
    x: float
    y: float
    z: float
    f: float
    g: float
    provenance: str
    feasible: bool
    multipliers: dict[str, float] | None = None

    @property
    def margin(self) -> float:
        return self.f - target(self.beta)


def _feasible(h: int, beta: float, x: float, y: float, z: float, g: float) -> bool:
    return (
        x >= 1.0 - FEAS_TOL
        and -FEAS_TOL <= y <= 1.0 + FEAS_TOL
        and z >= beta / h - FEAS_TOL
        and g <= FEAS_TOL
    )


def _candidate(h, beta, x, y, z, provenance, multipliers=None) -> NPCandidate:
    f, g = eval_fg(h, beta, x, y, z)
    return NPCandidate(
        h, beta, x, y, z, f, g, provenance,
        _feasible(h, beta, x, y, z, g), multipliers,
    )


def table_cases(h: int, beta: float) -> list[NPCandidate]:
    """Finite case table over integer loads x for h in {3, 4, 6}.

    Two branches per x: pin z at its floor beta/h and solve y from
    g = 0 (feasible when y lands in [0, 1]), or pin y at the edge the
    stationary geometry selects (1 left of the ridge crossing, 0 right
    of it) and solve z from g = 0 (feasible when z clears the floor).
    """
    if h not in (3, 4, 6):
        raise ValueError("h must be one of 3, 4, 6")
    chi = interior_stationary_x(h)
    out = []
    for x in range(1, h):
        if x < chi:
            y = solve_y_on_constraint(h, beta, float(x), beta / h)
            out.append(_candidate(h, beta, float(x), y, beta / h, f"z-floor x={x}"))
        y_edge = 1.0 if x < chi else 0.0
        z = solve_z_on_constraint(h, beta, float(x), y_edge)
        out.append(
            _candidate(h, beta, float(x), y_edge, z, f"y-edge x={x} y={int(y_edge)}")
        )
    return out


def kkt_candidates(h: int, beta: float) -> list[NPCandidate]:
    """Stationary candidates of the relaxed (continuous x) problem.

    Valid for h >= 7, where the relaxation is tight. Each candidate
    carries the multipliers of its first-order system: lam for g = 0,
    mu1..mu4 for x >= 1, y <= 1, y >= 0, z >= beta/h.
    """
    if h < 7:
        raise ValueError("stationary candidate enumeration requires h >= 7")
    out = []

    def mults(x, y, z, lam, active):
        fx, fy, _ = f_partials(h, beta, x, y, z)
        gx, gy, _ = g_partials(h, beta, x, y, z)
        m = {"lambda": lam, "mu1": 0.0, "mu2": 0.0, "mu3": 0.0, "mu4": 0.0}
        if "x" in active:
            m["mu1"] = fx + lam * gx
        if "y1" in active:
            m["mu2"] = -(fy + lam * gy)
        if "y0" in active:
            m["mu3"] = fy + lam * gy
        if "z" in active:
            m["mu4"] = 2.0 * lam - 1.0
        return m

    # Face x = 1, z interior: within the face f restricted to g = 0
    # decreases toward y = 1; both endpoints are kept for coverage.
    for y_edge, tag in ((0.0, "y0"), (1.0, "y1")):
        z = solve_z_on_constraint(h, beta, 1.0, y_edge)
        out.append(
            _candidate(
                h, beta, 1.0, y_edge, z, f"x-floor y={int(y_edge)}",
                mults(1.0, y_edge, z, 0.5, ("x", tag)),
            )
        )

    # Edge y = 0, everything interior: x + y stationary.
    nu = edge_stationary_x(h)
    z2 = edge_stationary_z(h, beta)
    out.append(
        _candidate(h, beta, nu, 0.0, z2, "edge", mults(nu, 0.0, z2, 0.5, ("y0",)))
    )

    # Fully interior ridge point.
    chi = interior_stationary_x(h)
    y_chi = (chi + 1.0) / (2.0 * chi + 1.0)
    z3 = interior_stationary_z(h, beta)
    out.append(
        _candidate(h, beta, chi, y_chi, z3, "interior", mults(chi, y_chi, z3, 0.5, ()))
    )

    # z pinned at its floor, y = 0: the largest x still on g = 0.
    half = (beta + 1.0) * h - (2.0 * beta + 1.0)
    x4 = (half + math.sqrt(half * half + 8.0 * h)) / 4.0
    fx, _, _ = f_partials(h, beta, x4, 0.0, beta / h)
    gx, _, _ = g_partials(h, beta, x4, 0.0, beta / h)
    lam4 = -fx / gx
    out.append(
        _candidate(
            h, beta, x4, 0.0, beta / h, "edge-z-floor",
            mults(x4, 0.0, beta / h, lam4, ("y0", "z")),
        )
    )

    # z pinned at its floor on the y-interior ridge.
    u = (half + math.sqrt(half * half + 8.0 * h - 4.0)) / 2.0
    x5 = (u - 1.0) / 2.0
    y5 = (x5 + 1.0) / (2.0 * x5 + 1.0)
    _, fy, _ = f_partials(h, beta, x5, y5, beta / h)
    _, gy, _ = g_partials(h, beta, x5, y5, beta / h)
    lam5 = -fy / gy
    out.append(
        _candidate(
            h, beta, x5, y5, beta / h, "interior-z-floor",
            mults(x5, y5, beta / h, lam5, ("z",)),
        )
    )
    return out


# ---------------------------------------------------------------------------
# Grid certification


@dataclass(frozen=True)
class GridCell:
    beta: float
    branch: str
    x: float
    y: float
    z: float
    f: float
    g: float
    margin: float


@dataclass(frozen=True)
class GridReport:
    """Per-beta minima of the margin f - (1 + beta)/3 over the feasible
    grid. integral_x records whether x ranged over integers (h <= 6,
    where fractional loads are not realizable) or over a dense real grid
    (h >= 7, where the relaxation is certified)."""

    h: int
    resolution: float
    beta_cap: float
    integral_x: bool
    rows: tuple[GridCell, ...]
    min_margin: float

    @property
    def worst(self) -> GridCell:
        return min(self.rows, key=lambda c: c.margin)


def _grid_min(h, beta, xs, ys):
    """Best feasible cell over the g = 0 surface (z eliminated) and the
    z-floor slice, exploiting that f and z are affine in y per x."""
    best = None  # (f, x, y, z, branch)
    floor = beta / h
    q = 1.0 / (xs * (xs + 1.0))
    coef = 2.0 / h + q
    p_z = ((h - 1.0) / h + beta - 2.0 * xs / h + 1.0 / xs) / 2.0
    q_z = coef / 2.0
    base_f = h / xs + xs / h - 2.0 + beta
    slope_fy = h * q - 1.0 / h

    for lo in range(0, xs.size, 4096):
        sl = slice(lo, min(lo + 4096, xs.size))
        # g = 0 sheet: z = p_z - q_z * y, feasible while z >= floor.
        z_sheet = p_z[sl, None] - q_z[sl, None] * ys[None, :]
        f_sheet = (
            base_f[sl, None] - slope_fy[sl, None] * ys[None, :] - z_sheet
        )
        mask = z_sheet >= floor - FEAS_TOL
        # z floor slice: g <= 0 caps y from above.
        g_floor = (
            2.0 * xs[sl, None] / h
            - 1.0 / xs[sl, None]
            + coef[sl, None] * ys[None, :]
            + 2.0 * floor
            - (h - 1.0) / h
            - beta
        )
        f_floor = base_f[sl, None] - slope_fy[sl, None] * ys[None, :] - floor
        mask_floor = g_floor <= FEAS_TOL

        for branch, fv, mk in (("surface", f_sheet, mask), ("z-floor", f_floor, mask_floor)):
            if not mk.any():
                continue
            masked = np.where(mk, fv, np.inf)
            flat = int(np.argmin(masked))
            value = float(masked.flat[flat])
            if not math.isfinite(value):
                continue
            i, j = divmod(flat, ys.size)
            x = float(xs[sl][i])
            y = float(ys[j])
            z = float(z_sheet[i, j]) if branch == "surface" else floor
            if best is None or value < best[0]:
                best = (value, x, y, z, branch)
    return best


def _refine(h, beta, cell, span_x, span_y, step, integral_x):
    """Zoom around a cell twice, shrinking the step tenfold each round."""
    value, x, y, z, branch = cell
    for _ in range(2):
        step /= 10.0
        if integral_x:
            xs = np.array([x])
        else:
            xs = np.clip(np.arange(x - span_x, x + span_x + step / 2, step), 1.0, float(h))
        ys = np.clip(np.arange(y - span_y, y + span_y + step / 2, step), 0.0, 1.0)
        found = _grid_min(h, beta, np.unique(xs), np.unique(ys))
        if found is not None and found[0] < value:
            value, x, y, z, branch = found
        span_x = step * 2
        span_y = step * 2
    return value, x, y, z, branch


def grid_certify(
    h: int,
    betas: Iterable[float],
    resolution: float = 1e-3,
    refine: bool = True,
    jobs: int = 1,
) -> GridReport:
    """Scan the feasible region on a dense grid for every beta.

    x ranges over the integers 1..h when h <= 6 (loads are integral
    there, and the continuous relaxation is genuinely violated at small
    h) and over [1, h] at the given resolution when h >= 7. y ranges
    over [0, 1] at the given resolution. z is eliminated against g = 0,
    and the z = beta/h boundary is scanned separately under g <= 0.
    With refine=True the best cell per beta is locally refined two
    rounds, a hundredfold finer. jobs spreads the betas over worker
    threads; the report is identical for every jobs value.
    """
    if h < 3:
        raise ValueError("grid certification needs h >= 3")
    integral_x = h <= 6
    if integral_x:
        xs = np.arange(1.0, float(h) + 0.5, 1.0)
    else:
        xs = np.arange(1.0, float(h) + resolution / 2, resolution)
    ys = np.arange(0.0, 1.0 + resolution / 2, resolution)
    betas = [float(b) for b in betas]

    def scan(beta: float) -> GridCell:
        best = _grid_min(h, beta, xs, ys)
        assert best is not None  # x = 1, y = 0 is feasible for every beta >= 0
        if refine:
            best = _refine(
                h, beta, best, 2 * resolution, 2 * resolution, resolution, integral_x
            )
        value, x, y, z, branch = best
        f, g = eval_fg(h, beta, x, y, z)
        return GridCell(beta, branch, x, y, z, f, g, f - target(beta))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(scan, betas))
    else:
        rows = [scan(beta) for beta in betas]
    margin = min(c.margin for c in rows)
    return GridReport(
        h=h,
        resolution=resolution,
        beta_cap=max(betas) if betas else 0.0,
        integral_x=integral_x,
        rows=tuple(rows),
        min_margin=margin,
    )


def default_betas(cap: float = 2.0, step: float = 0.01) -> list[float]:
    """Beta grid [0, cap]. Above the cap the bound is slack: f grows at
    least half a unit per unit of beta while the target grows a third."""
    count = int(round(cap / step))
    return [round(i * step, 10) for i in range(count + 1)]


# ---------------------------------------------------------------------------
# Support-shift move for the profile weights


def support_objective(h: int, weights: Sequence, z) -> Fraction:
    """Objective of the weight minimization: sum (h/i + i/h) w_i - z."""
    return (
        sum(
            (Fraction(h, i) + Fraction(i, h)) * Fraction(w)
            for i, w in enumerate(weights, start=1)
        )
        - Fraction(z)
    )


def support_constraint(h: int, beta, weights: Sequence, z) -> tuple[Fraction, Fraction]:
    """Sides of the normalized constraint sum (2i/h - 1/i) w_i + 2z
    <= (h-1)/h + beta."""
    lhs = sum(
        (Fraction(2 * i, h) - Fraction(1, i)) * Fraction(w)
        for i, w in enumerate(weights, start=1)
    ) + 2 * Fraction(z)
    return lhs, Fraction(h - 1, h) + Fraction(beta)


def consecutive_support_check(
    h: int, beta, weights: Sequence, z
) -> tuple[Fraction, ...] | None:
    """One support-consolidation move on the profile weights.

    The input must be a feasible weight vector: nonnegative entries for
    loads 1..h summing to one, satisfying the normalized constraint.
    If the outermost support points sit two or more loads apart, mass
    m1 moves up from the lower point and mass m2 moves down from the
    upper point, with m1 = r*m2 at the exact ratio r that keeps the
    constraint from tightening; the objective strictly drops and one of
    the two points empties. Returns the improved vector, or None when
    the support is already consecutive (locally optimal).
    """
    weights = [Fraction(w) for w in weights]
    beta = Fraction(beta)
    z = Fraction(z)
    if len(weights) != h:
        raise ValueError("infeasible input: need one weight per load 1..h")
    if any(w < 0 for w in weights):
        raise ValueError("infeasible input: negative weight")
    if sum(weights) != 1:
        raise ValueError("infeasible input: weights must sum to one")
    lhs, rhs = support_constraint(h, beta, weights, z)
    if lhs > rhs:
        raise ValueError("infeasible input: normalized constraint violated")

    support = [i for i, w in enumerate(weights, start=1) if w > 0]
    i1, i2 = support[0], support[-1]
    if i2 - i1 < 2:
        return None
    # Constraint slack per unit of shifted mass, upward at i1 and
    # downward at i2; moving at ratio r = loss/gain keeps g unchanged
    # while the objective coefficients strictly favor the move.
    gain = Fraction(2, h) + Fraction(1, i1 * (i1 + 1))
    loss = Fraction(2, h) + Fraction(1, (i2 - 1) * i2)
    r = loss / gain
    m2 = min(weights[i2 - 1], weights[i1 - 1] / r)
    m1 = r * m2
    out = list(weights)
    out[i1 - 1] -= m1
    out[i1] += m1
    out[i2 - 1] -= m2
    out[i2 - 2] += m2
    return tuple(out)
