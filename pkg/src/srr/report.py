"""Figure rendering for certification reports.

matplotlib is imported lazily and driven through the Agg backend, so
rendering works headless and the rest of the package never pays the
import cost.
"""

from __future__ import annotations

from .npverify import GridReport, table_cases, target


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_grid_figure(report: GridReport, path: str) -> None:
    """Margin of the grid minimum per beta, with the worst cell marked."""
    plt = _pyplot()
    betas = [cell.beta for cell in report.rows]
    margins = [cell.margin for cell in report.rows]
    worst = report.worst
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(betas, margins, lw=1.2, color="tab:blue")
    ax.axhline(0.0, color="black", lw=0.8)
    ax.plot([worst.beta], [worst.margin], "o", color="tab:red", ms=5)
    ax.annotate(
        f"min {worst.margin:.6f}\nbeta={worst.beta:.2f}, x={worst.x:.3f}, y={worst.y:.3f}",
        xy=(worst.beta, worst.margin),
        xytext=(8, 10),
        textcoords="offset points",
        fontsize=8,
    )
    x_kind = "integer x" if report.integral_x else f"x step {report.resolution:g}"
    ax.set_title(f"grid margin, h={report.h} ({x_kind})")
    ax.set_xlabel("beta")
    ax.set_ylabel("min f - (1 + beta)/3")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_table_figure(h: int, betas, path: str) -> None:
    """Candidate values of the finite case table across beta.

    Feasible stretches of each branch are drawn solid against the
    dashed target curve (1 + beta)/3; a branch that is infeasible for
    every sampled beta does not appear.
    """
    plt = _pyplot()
    betas = [float(b) for b in betas]
    series: dict[str, list[tuple[float, float]]] = {}
    for beta in betas:
        for cand in table_cases(h, beta):
            if cand.feasible:
                series.setdefault(cand.provenance, []).append((beta, cand.f))
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name in sorted(series):
        points = series[name]
        ax.plot([p[0] for p in points], [p[1] for p in points], lw=1.2, label=name)
    ax.plot(betas, [target(b) for b in betas], "--", color="black", lw=1.0,
            label="(1 + beta)/3")
    ax.set_title(f"case table candidates, h={h}")
    ax.set_xlabel("beta")
    ax.set_ylabel("f at candidate")
    ax.legend(fontsize=7, ncol=2)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
