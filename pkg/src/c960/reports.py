"""Text and JSON renderings of evaluation and theme results."""

from __future__ import annotations

import json

from .board import sp_backrank
from .learners.evaluate import POOLED, EvalReport
from .regions import REGION_ORDER, Region
from .themes import ThemeReport

DATASET_DISPLAY = {"ds1": "Data Set 1", "ds2": "Data Set 2", "ds3": "Data Set 3"}
MODEL_DISPLAY = {"knn": "KNN", "rf": "Random Forest", "gbt": "Gradient Trees"}

# Full region wording for the frequency table columns.
TABLE_NAMES = {
    Region.CENTRE: "Centre",
    Region.WHITE_KINGSIDE: "White Kingside",
    Region.WHITE_QUEENSIDE: "White Queenside",
    Region.BLACK_KINGSIDE: "Black Kingside",
    Region.BLACK_QUEENSIDE: "Black Queenside",
}


def positions_text() -> str:
    """All 960 start positions, one 'index backrank' line each."""
    return "\n".join(f"{i:3d} {sp_backrank(i).backrank}" for i in range(960)) + "\n"


def category_name(category: tuple) -> str:
    white, black = category
    return f"{white.display}_{black.display}"


def render_eval_text(report: EvalReport, dataset_kind: str) -> str:
    """Accuracy summary shaped as dataset rows x model column."""
    dataset = DATASET_DISPLAY.get(dataset_kind, dataset_kind)
    model = MODEL_DISPLAY.get(report.model_kind, report.model_kind)
    rows = [
        ("Median", report.summary["median"]),
        ("Mean", report.summary["mean"]),
        ("Maximum", report.summary["max"]),
    ]
    width = max(len(dataset), len("Data Set")) + 2
    lines = ["Accuracy", "", f"{'Data Set':<{width}}{'Parameter':<11}{model}"]
    label = dataset
    for name, value in rows:
        lines.append(f"{label:<{width}}{name:<11}{value:.3f}")
        label = ""
    lines.append("")
    lines.append(
        f"Tables: {len(report.per_table)} evaluated, {len(report.skipped)} skipped; "
        f"folds: {report.folds}; seed: {report.seed}"
    )
    return "\n".join(lines) + "\n"


def eval_report_dict(report: EvalReport, dataset_kind: str) -> dict:
    out = report.as_dict()
    out["dataset"] = dataset_kind
    for entry in out["per_table"]:
        if entry["table"] == POOLED:
            entry["table"] = "pooled"
    return out


def render_theme_frequencies_text(report: ThemeReport) -> str:
    """Category frequency table, final-phase pair per start position."""
    header = ("Development of White", "Development of Black", "No. of Starting Positions")
    rows = [
        (TABLE_NAMES[white], TABLE_NAMES[black], str(count))
        for (white, black), count in report.frequencies().items()
    ]
    total = sum(int(r[2]) for r in rows)
    widths = [
        max(len(header[col]), *(len(row[col]) for row in rows)) + 4 if rows else len(header[col]) + 4
        for col in range(3)
    ]
    lines = ["".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip()]
    for row in rows:
        lines.append("".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    lines.append(f"{'Total'.ljust(widths[0])}{''.ljust(widths[1])}{total}")
    return "\n".join(lines) + "\n"


def render_theme_appendix_text(report: ThemeReport) -> str:
    """Backranks grouped under White-development_Black-development headings."""
    blocks = []
    for category, backranks in report.appendix().items():
        lines = [category_name(category)]
        lines.extend(backranks)
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def theme_report_dict(report: ThemeReport, moves) -> dict:
    return {
        "snapshot_moves": list(moves),
        "assignments": [
            {
                "sp": a.sp_index,
                "backrank": a.backrank,
                "white": [r.value for r in a.white],
                "black": [r.value for r in a.black],
                "white_degenerate": list(a.white_degenerate),
                "black_degenerate": list(a.black_degenerate),
                "category": category_name(a.category),
                "games_used": a.games_used,
                "games_skipped": a.games_skipped,
            }
            for a in report.assignments
        ],
        "frequencies": [
            {"white": white.value, "black": black.value, "count": count}
            for (white, black), count in report.frequencies().items()
        ],
        "skipped": [{"sp": sp, "reason": reason} for sp, reason in report.skipped],
    }


def dump_json(payload: dict, path) -> None:
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
