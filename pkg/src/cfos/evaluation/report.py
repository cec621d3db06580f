# src/cfos/evaluation/report.py

"""Merge CLI JSON reports into one comparison table"""

# ==================== Imports ====================
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence, Union

import pandas as pd

from ..core.reports import read_json
from .metrics import EvaluationError

TABLE_FORMATS = ("markdown", "csv")

# ==================== Row builders ====================
def _census_rows(report: Dict[str, Any]) -> List[Dict[str, Any]]:
    body = report["report"]
    counts = body["counts"]
    return [{
        "method": body["method"],
        "tau": body["tau"],
        "generated": body["generated"],
        "majority": counts["majority"],
        "boundary_minority": counts["boundary_minority"],
        "interior_minority": counts["interior_minority"],
    }]

def _evaluate_rows(report: Dict[str, Any]) -> List[Dict[str, Any]]:
    body = report["report"]
    keys = (
        "method", "classifier", "folds", "runs",
        "f_measure", "f_measure_std_folds", "f_measure_std_runs",
        "g_mean", "g_mean_std_folds", "g_mean_std_runs",
    )
    return [{key: body[key] for key in keys}]

def _generation_rows(report: Dict[str, Any]) -> List[Dict[str, Any]]:
    return [
        {
            "method": pair["method"],
            "pair": f"{pair['pair_labels'][0]} < {pair['pair_labels'][1]}",
            "needed": pair["needed"],
            "generated": pair.get("succeeded", pair.get("generated")),
        }
        for pair in report["pairs"]
    ]

ROW_BUILDERS: Dict[str, Callable[[Dict[str, Any]], List[Dict[str, Any]]]] = {
    "census": _census_rows,
    "evaluate": _evaluate_rows,
    "oversample": _generation_rows,
    "baseline": _generation_rows,
}

# ==================== Tables ====================
def merge_reports(paths: Sequence[Union[str, Path]]) -> pd.DataFrame:
    """One or more rows per report, in the order the reports are given"""
    rows: List[Dict[str, Any]] = []
    for path in paths:
        report = read_json(path)
        kind = report.get("kind")
        if kind not in ROW_BUILDERS:
            raise EvaluationError(f"{path}: unsupported report kind {kind!r}")
        try:
            rows.extend(ROW_BUILDERS[kind](report))
        except KeyError as e:
            raise EvaluationError(f"{path}: malformed {kind} report, missing {e}")
    if not rows:
        raise EvaluationError("no reports to merge")
    return pd.DataFrame(rows)

def render_table(table: pd.DataFrame, fmt: str = "markdown") -> str:
    """Render as a markdown table or as CSV text"""
    if fmt == "markdown":
        return table.to_markdown(index=False, floatfmt=".4f", missingval="") + "\n"
    if fmt == "csv":
        return table.to_csv(index=False, lineterminator="\n")
    raise EvaluationError(f"unknown table format {fmt!r}, expected one of {TABLE_FORMATS}")
