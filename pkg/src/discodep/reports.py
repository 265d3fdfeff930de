"""Text tables, TSV serializations, and matplotlib figures for reports.

Figures are rendered with the Agg backend straight to files so report
commands work headless; pyplot is imported lazily to keep library use
free of matplotlib state.
"""

from __future__ import annotations

from pathlib import Path

from discodep.evaluate import EvalReport
from discodep.trees import ComplexityReport


def _use_agg():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def format_table(rows: list[tuple], headers: tuple[str, ...]) -> str:
    """Plain monospace table with left-aligned text, right-aligned numbers."""
    cells = [[str(c) for c in row] for row in rows]
    widths = [
        max(len(headers[i]), *(len(r[i]) for r in cells)) if cells else len(headers[i])
        for i in range(len(headers))
    ]
    numeric = [
        all(isinstance(row[i], (int, float)) for row in rows) if rows else False
        for i in range(len(headers))
    ]

    def fmt(parts: list[str], is_data: bool) -> str:
        out = []
        for i, part in enumerate(parts):
            if is_data and numeric[i]:
                out.append(part.rjust(widths[i]))
            else:
                out.append(part.ljust(widths[i]))
        return "  ".join(out).rstrip()

    lines = [fmt(list(headers), False), fmt(["-" * w for w in widths], False)]
    lines.extend(fmt(row, True) for row in cells)
    return "\n".join(lines)


def tsv(rows: list[tuple], headers: tuple[str, ...]) -> str:
    lines = ["\t".join(headers)]
    lines.extend("\t".join(str(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


CENSUS_HEADERS = ("section", "key", "count")


def census_rows(report: ComplexityReport) -> list[tuple]:
    rows: list[tuple] = []
    for degree in sorted(report.counts_by_gap_degree):
        rows.append(("gap_degree", degree, report.counts_by_gap_degree[degree]))
    for degree in sorted(report.counts_by_edge_degree):
        rows.append(("edge_degree", degree, report.counts_by_edge_degree[degree]))
    rows.append(("projectivity", "projective", report.projective_count))
    rows.append(("projectivity", "non_projective", report.nonprojective_count))
    return rows


def render_census_figure(report: ComplexityReport, path: Path | str) -> None:
    plt = _use_agg()
    fig, axes = plt.subplots(1, 3, figsize=(10, 3.2))
    panels = (
        ("Gap degree", report.counts_by_gap_degree),
        ("Edge degree", report.counts_by_edge_degree),
        ("Projectivity", {"proj": report.projective_count, "non-proj": report.nonprojective_count}),
    )
    for ax, (title, counts) in zip(axes, panels):
        keys = sorted(counts, key=str)
        values = [counts[k] for k in keys]
        bars = ax.bar([str(k) for k in keys], values, color="#4878a8")
        ax.bar_label(bars, fontsize=8)
        ax.set_title(title, fontsize=10)
        ax.set_ylim(0, max(values) * 1.15 if values else 1)
        ax.tick_params(labelsize=8)
    fig.suptitle(f"Tree complexity over {report.total} documents", fontsize=11)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


STATS_HEADERS = ("collection", "documents", "avg_max_path_length", "avg_leaf_proportion")


def stats_rows(summaries: dict[str, dict]) -> list[tuple]:
    return [
        (
            name,
            summary["documents"],
            round(summary["avg_max_path_length"], 6),
            round(summary["avg_leaf_proportion"], 6),
        )
        for name, summary in summaries.items()
    ]


def render_stats_figure(summaries: dict[str, dict], path: Path | str) -> None:
    plt = _use_agg()
    names = list(summaries)
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.2))
    for ax, key, title in (
        (axes[0], "avg_max_path_length", "Longest ROOT path (avg)"),
        (axes[1], "avg_leaf_proportion", "Leaf proportion (avg)"),
    ):
        values = [summaries[name][key] for name in names]
        bars = ax.bar(names, values, color="#6a9a58")
        ax.bar_label(bars, fmt="%.3f", fontsize=8)
        ax.set_title(title, fontsize=10)
        ax.set_ylim(0, max(values) * 1.2 if values else 1)
        ax.tick_params(labelsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


EVAL_HEADERS = ("metric", "value")


def eval_rows(report: EvalReport) -> list[tuple]:
    rows: list[tuple] = [
        ("total_edus", report.total_edus),
        ("correct_heads", report.correct_heads),
        ("uas", round(report.uas, 6)),
    ]
    if report.las is not None:
        rows.append(("correct_labeled", report.correct_labeled))
        rows.append(("las", round(report.las, 6)))
        rows.append(("label_accuracy_given_head", round(report.label_accuracy_given_head, 6)))
    return rows


def render_eval_figure(report: EvalReport, path: Path | str) -> None:
    plt = _use_agg()
    metrics = {"UAS": report.uas}
    if report.las is not None:
        metrics["LAS"] = report.las
        metrics["Label|head"] = report.label_accuracy_given_head
    fig, ax = plt.subplots(figsize=(4.2, 3.2))
    bars = ax.bar(list(metrics), list(metrics.values()), color="#a06848")
    ax.bar_label(bars, fmt="%.3f", fontsize=8)
    ax.set_ylim(0, 1.0)
    ax.set_title(f"Attachment over {report.total_edus} EDUs", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
