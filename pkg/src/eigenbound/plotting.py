"""Figure rendering for campaign and example-family reports.

matplotlib is imported lazily and forced onto the Agg backend, so the CLI
stays fast and headless-safe when no figure was requested.
"""

from __future__ import annotations

FIGURE_STYLE = {
    "figure.figsize": (6.4, 3.8),
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams.update(FIGURE_STYLE)
    return plt


def render_slack_histogram(report, path: str) -> str:
    """Bar chart of the campaign's slack distribution (improved - actual)."""
    plt = _pyplot()
    slacks = sorted(report.slack_histogram)
    counts = [report.slack_histogram[s] for s in slacks]
    fig, ax = plt.subplots()
    ax.bar(slacks, counts, width=0.85, color="#3a6ea5")
    ax.set_xlabel("slack = improved bound - |distinct eigenvalues of C|")
    ax.set_ylabel("trials")
    ax.set_title(
        f"{report.trials_run} trials, {report.tight_count} tight, "
        f"{report.violations} violations"
    )
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_bound_family(result, path: str) -> str:
    """Bound curves for the Jordan-block family: baseline n+r vs improved 2r+1."""
    plt = _pyplot()
    rs = [row.r for row in result.family_rows]
    fig, ax = plt.subplots()
    ax.plot(rs, [row.farrell_bound for row in result.family_rows],
            "o-", label="baseline bound n+r", color="#b04a4a")
    ax.plot(rs, [row.improved_bound for row in result.family_rows],
            "s-", label="improved bound 2r+1", color="#3a6ea5")
    ax.plot(rs, [row.actual_distinct for row in result.family_rows],
            "d-", label="distinct eigenvalues of C", color="#4a8a57")
    ax.axhline(result.n, color="gray", lw=1, ls="--", label=f"n = {result.n}")
    ax.set_xlabel("perturbation rank r")
    ax.set_ylabel("count")
    ax.set_title(f"Jordan-block family, n = {result.n}")
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
