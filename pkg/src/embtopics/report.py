"""Render result tables from stored evaluation reports.

Per-dataset tables carry four score columns (cluster F1/accuracy, logistic
regression F1/accuracy, three decimals); the cross-dataset table averages
F1 over datasets (two decimals). Display rounding is decimal half-up so
printed averages are stable against binary float representation.
"""

from __future__ import annotations

import json
import warnings
from decimal import ROUND_HALF_UP, Decimal

from .errors import DataError

_COLUMNS = [
    ("cluster", "f1_macro", "Clusters F1"),
    ("cluster", "accuracy", "Clusters Acc"),
    ("logreg", "f1_macro", "LogReg F1"),
    ("logreg", "accuracy", "LogReg Acc"),
]
_AVG_COLUMNS = [("cluster", "Cluster F1"), ("logreg", "LogReg F1")]
MISSING = "—"


def format_score(x: float, places: int) -> str:
    """Decimal half-up rounding, e.g. format_score(0.2185, 2) == '0.22'."""
    quantum = Decimal(1).scaleb(-places)
    return str(Decimal(f"{x:.9f}").quantize(quantum, rounding=ROUND_HALF_UP))


def load_report(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read report {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"report {path} is not valid JSON: {exc}") from exc
    for key in ("f1_macro", "accuracy", "meta"):
        if key not in obj:
            raise DataError(f"report {path} missing field {key!r}")
    meta = obj["meta"]
    for key in ("dataset", "model", "method"):
        if key not in meta:
            raise DataError(f"report {path} meta missing field {key!r}")
    if meta["method"] not in ("cluster", "logreg"):
        raise DataError(f"report {path}: unknown method {meta['method']!r}")
    return obj


def _dedupe(reports):
    """Latest created_at wins per (model, method, dataset)."""
    chosen: dict[tuple, dict] = {}
    for rep in reports:
        meta = rep["meta"]
        key = (meta["model"], meta["method"], meta["dataset"])
        if key in chosen:
            old = chosen[key]["meta"].get("created_at", "")
            new = meta.get("created_at", "")
            warnings.warn(
                f"duplicate report for model={key[0]} method={key[1]} dataset={key[2]}; "
                "keeping the latest timestamp",
                RuntimeWarning,
            )
            if new < old:
                continue
        chosen[key] = rep
    return chosen


def build_tables(reports: list[dict]):
    """Group reports into per-dataset and cross-dataset-average score grids.

    Returns (per_dataset, averages): per_dataset maps dataset ->
    {model -> {(method, metric) -> value}}, averages maps model ->
    {method -> mean F1 over datasets}.
    """
    if not reports:
        raise DataError("no reports to render")
    chosen = _dedupe(reports)
    per_dataset: dict[str, dict] = {}
    for (model, method, dataset), rep in chosen.items():
        cell = per_dataset.setdefault(dataset, {}).setdefault(model, {})
        cell[(method, "f1_macro")] = rep["f1_macro"]
        cell[(method, "accuracy")] = rep["accuracy"]
    averages: dict[str, dict] = {}
    models = sorted({m for rows in per_dataset.values() for m in rows})
    for model in models:
        for method in ("cluster", "logreg"):
            values = [
                per_dataset[ds][model][(method, "f1_macro")]
                for ds in per_dataset
                if model in per_dataset[ds] and (method, "f1_macro") in per_dataset[ds][model]
            ]
            if values:
                averages.setdefault(model, {})[method] = sum(values) / len(values)
    return per_dataset, averages


def _markdown_table(header, rows, bold_best=True):
    cols = len(header)
    best = [None] * cols
    if bold_best:
        for c in range(1, cols):
            numeric = [r[c] for r in rows if isinstance(r[c], tuple)]
            if numeric:
                best[c] = max(v for v, _ in numeric)
    out = ["| " + " | ".join(header) + " |", "|" + "---|" * cols]
    for row in rows:
        cells = [str(row[0])]
        for c in range(1, cols):
            cell = row[c]
            if isinstance(cell, tuple):
                value, text = cell
                cells.append(f"**{text}**" if bold_best and value == best[c] else text)
            else:
                cells.append(cell)
        out.append("| " + " | ".join(cells) + " |")
    return "\n".join(out)


def _csv_table(header, rows):
    out = [",".join(header)]
    for row in rows:
        cells = [str(row[0])] + [c[1] if isinstance(c, tuple) else c for c in row[1:]]
        out.append(",".join(cells))
    return "\n".join(out)


def render_tables(reports: list[dict], fmt: str = "markdown") -> str:
    """Render per-dataset tables plus the cross-dataset F1 average table."""
    if fmt not in ("markdown", "csv"):
        raise DataError(f"unknown table format {fmt!r}")
    per_dataset, averages = build_tables(reports)
    sections = []
    for dataset in sorted(per_dataset):
        rows = []
        for model in sorted(per_dataset[dataset]):
            cells = per_dataset[dataset][model]
            row = [model]
            for method, metric, _ in _COLUMNS:
                if (method, metric) in cells:
                    value = cells[(method, metric)]
                    row.append((value, format_score(value, 3)))
                else:
                    row.append(MISSING)
            rows.append(row)
        header = ["Model"] + [title for _, _, title in _COLUMNS]
        if fmt == "markdown":
            sections.append(f"### {dataset}\n\n" + _markdown_table(header, rows))
        else:
            sections.append(f"# {dataset}\n" + _csv_table(header, rows))
    rows = []
    for model in sorted(averages):
        row = [model]
        for method, _ in _AVG_COLUMNS:
            if method in averages[model]:
                value = averages[model][method]
                row.append((value, format_score(value, 2)))
            else:
                row.append(MISSING)
        rows.append(row)
    header = ["Model"] + [title for _, title in _AVG_COLUMNS]
    title = "Average F1 over datasets"
    if fmt == "markdown":
        sections.append(f"### {title}\n\n" + _markdown_table(header, rows))
    else:
        sections.append(f"# {title}\n" + _csv_table(header, rows))
    return "\n\n".join(sections) + "\n"
