"""Figure rendering for the CLI report path.

Curves written as CSV can also be rendered to a PNG next to the data
file. Matplotlib is imported lazily so that headless data-only runs do
not pay for it.
"""
from __future__ import annotations


def render_curves(path: str, curves: dict[str, list], xlabel: str, ylabel: str,
                  title: str = "", logx: bool = False, logy: bool = False,
                  reference: dict[str, list] | None = None) -> str:
    """Plot named point lists (CurvePoint-like) to ``path``; returns it."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, points in curves.items():
        xs = [p.x for p in points]
        ys = [p.mean for p in points]
        errs = [p.stderr for p in points]
        if any(e > 0 for e in errs):
            ax.errorbar(xs, ys, yerr=errs, fmt="o-", markersize=3,
                        capsize=2, label=label)
        else:
            ax.plot(xs, ys, "o-", markersize=3, label=label)
    for label, points in (reference or {}).items():
        ax.plot([p.x for p in points], [p.mean for p in points],
                "--", linewidth=1, label=label)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
