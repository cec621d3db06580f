# src/cfos/core/reports.py

"""JSON report helpers"""

import json
from pathlib import Path
from typing import Any, Dict, Union

from pydantic import BaseModel

TOOL_VERSION = "cfos 0.1.0"

def to_jsonable(report: Union[BaseModel, Dict[str, Any]]) -> Dict[str, Any]:
    """Dump a report model (or plain dict) to JSON-compatible data"""
    if isinstance(report, BaseModel):
        return report.model_dump(mode="json", by_alias=True)
    return report

def dumps(report: Union[BaseModel, Dict[str, Any]]) -> str:
    """Serialize with stable key order and a trailing newline"""
    return json.dumps(to_jsonable(report), indent=2, ensure_ascii=False, allow_nan=False) + "\n"

def write_json(report: Union[BaseModel, Dict[str, Any]], path: Union[str, Path]) -> Path:
    """Write a report as UTF-8 JSON"""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(report), encoding="utf-8")
    return path

def read_json(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a JSON report"""
    return json.loads(Path(path).read_text(encoding="utf-8"))
