"""Figure rendering for the report paths.

Every figure lands next to the delimited output it illustrates; the
data always remains available in the CSV/JSON/text files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .learners.evaluate import EvalReport  # noqa: E402
from .reports import MODEL_DISPLAY, TABLE_NAMES  # noqa: E402
from .themes import ThemeReport  # noqa: E402

plt.rcParams.update(
    {
        "figure.autolayout": True,
        "axes.grid": True,
        "grid.alpha": 0.3,
    }
)


def save_eval_figure(report: EvalReport, path) -> None:
    """Accuracy distribution over tables with summary markers."""
    accuracies = sorted(report.per_table.values())
    model = MODEL_DISPLAY.get(report.model_kind, report.model_kind)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    if not accuracies:
        ax.text(0.5, 0.5, "no tables evaluated", ha="center", va="center", transform=ax.transAxes)
    elif len(accuracies) > 1:
        bins = min(24, max(6, len(accuracies) // 4))
        ax.hist(accuracies, bins=bins, range=(0.0, 1.0), color="#4878a8", edgecolor="white")
        ax.set_ylabel("tables")
    else:
        ax.bar([0], accuracies, color="#4878a8")
        ax.set_xticks([])
        ax.set_ylabel("accuracy")
    styles = (("mean", "#c44e52", "-"), ("median", "#55a868", "--"), ("max", "#8172b2", ":"))
    for name, color, style in styles:
        value = report.summary[name]
        if value == value:  # skip NaN
            ax.axvline(value, color=color, linestyle=style, label=f"{name} {value:.3f}")
    ax.set_xlabel("cross-validation accuracy")
    ax.set_title(f"{model}: accuracy over {len(accuracies)} table(s)")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(loc="upper left")
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_theme_figure(report: ThemeReport, path) -> None:
    """Horizontal bars of start positions per development pair."""
    frequencies = report.frequencies()
    labels = [
        f"{TABLE_NAMES[white]} / {TABLE_NAMES[black]}" for white, black in frequencies
    ]
    counts = list(frequencies.values())
    height = max(3.0, 0.45 * len(labels) + 1.2)
    fig, ax = plt.subplots(figsize=(9, height))
    positions = range(len(labels))
    ax.barh(positions, counts, color="#4878a8")
    ax.set_yticks(positions, labels=labels)
    ax.invert_yaxis()
    for pos, count in zip(positions, counts):
        ax.annotate(str(count), (count, pos), xytext=(4, 0), textcoords="offset points", va="center")
    ax.set_xlabel("start positions")
    ax.set_title("Development pairs, final phase (White / Black)")
    fig.savefig(path, dpi=150)
    plt.close(fig)
