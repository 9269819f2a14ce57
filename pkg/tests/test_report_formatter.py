import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import pytest

from utils.report_formatter import ReportFormatter


@dataclass
class _Row:
    D: int
    value: Fraction

    @property
    def ok(self) -> bool:
        return self.value > 0


def test_cells():
    assert ReportFormatter.to_cell(Fraction(5, 12)) == "5/12"
    assert ReportFormatter.to_cell(Fraction(3)) == "3"
    assert ReportFormatter.to_cell([1, Fraction(1, 2)]) == "1 1/2"
    assert ReportFormatter.to_cell(np.int64(7)) == 7
    assert ReportFormatter.to_cell("text") == "text"


def test_json_includes_ok_property():
    text = ReportFormatter("json").format([_Row(3, Fraction(1, 3)), _Row(4, Fraction(0))])
    assert json.loads(text) == [
        {"D": 3, "value": "1/3", "ok": True},
        {"D": 4, "value": "0", "ok": False},
    ]


def test_csv():
    text = ReportFormatter("csv").format([{"D": 3, "H": Fraction(1, 3)}])
    assert text == "D,H\n3,1/3\n"
    assert ReportFormatter("csv").format([]) == ""


def test_write_file(tmp_path):
    out = tmp_path / "rows.csv"
    ReportFormatter().write([{"a": 1}], str(out))
    assert out.read_text() == "a\n1\n"


def test_unknown_format():
    with pytest.raises(ValueError):
        ReportFormatter("xml")
