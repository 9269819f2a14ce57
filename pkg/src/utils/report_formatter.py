"""
Report Formatter - Convert result rows to CSV / JSON tables
"""

import dataclasses
import json
import sys
from fractions import Fraction
from typing import Any, Dict, List, Sequence

import pandas as pd

from utils.config import CSV_LINE_TERMINATOR, SUPPORTED_FORMATS


class ReportFormatter:
    """Tabulates dataclass rows or dicts; rationals stay exact as "num/den" strings"""

    def __init__(self, fmt: str = "csv"):
        if fmt not in SUPPORTED_FORMATS:
            raise ValueError(f"unsupported format {fmt!r}, expected one of {SUPPORTED_FORMATS}")
        self.fmt = fmt

    @staticmethod
    def to_cell(value: Any) -> Any:
        """Exact, JSON-safe cell value"""
        if isinstance(value, Fraction):
            if value.denominator == 1:
                return str(value.numerator)
            return f"{value.numerator}/{value.denominator}"
        if isinstance(value, (list, tuple)):
            return " ".join(str(ReportFormatter.to_cell(v)) for v in value)
        if hasattr(value, "item") and not isinstance(value, (str, bytes)):
            return value.item()  # numpy scalar
        return value

    def to_records(self, rows: Sequence[Any]) -> List[Dict]:
        records = []
        for row in rows:
            if dataclasses.is_dataclass(row):
                data = dataclasses.asdict(row)
                if hasattr(row, "ok") and "ok" not in data:
                    data["ok"] = row.ok
            else:
                data = dict(row)
            records.append({k: self.to_cell(v) for k, v in data.items()})
        return records

    def format(self, rows: Sequence[Any]) -> str:
        """Main formatting method"""
        records = self.to_records(rows)
        if self.fmt == "json":
            return json.dumps(records, indent=2, ensure_ascii=False) + "\n"
        if not records:
            return ""
        frame = pd.DataFrame.from_records(records)
        return frame.to_csv(index=False, lineterminator=CSV_LINE_TERMINATOR)

    def write(self, rows: Sequence[Any], out: str = None):
        text = self.format(rows)
        if out is None or out == "-":
            sys.stdout.write(text)
            return
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
