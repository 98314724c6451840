import math

import pytest

from henon_toolkit import files


@pytest.mark.parametrize("value, digits, expected", [
    (0.0, 17, "0"),
    (0.1, 17, "0.10000000000000001"),
    (1 / 3, 6, "0.333333"),
    (-2.5e-12, 6, "-2.5e-12"),
    (math.nan, 17, "nan"),
    (-math.inf, 17, "-inf"),
])
def test_format_float(value, digits, expected):
    assert files.format_float(value, digits) == expected


def test_to_csv():
    rows = [
        {"k": 2, "alpha": 2.0, "labels": [1.0, 2.5], "passed": True},
        {"k": 3, "alpha": None, "passed": False},
    ]
    text = files.to_csv(["k", "alpha", "labels", "passed"], rows)
    assert text == "k,alpha,labels,passed\n2,2,1;2.5,true\n3,,,false\n"


def test_write_output_creates_directories(tmp_path):
    out = tmp_path / "a" / "b" / "result.csv"
    files.write_output("k\n2\n", out)
    assert out.read_text(encoding="utf-8") == "k\n2\n"


def test_logs_dir_override(tmp_path, monkeypatch):
    monkeypatch.setenv(files.LOG_DIR_VARIABLE, str(tmp_path))
    assert files.get_logs_dir() == tmp_path
    monkeypatch.delenv(files.LOG_DIR_VARIABLE)
    assert files.get_logs_dir() == files.VARIABLE_DATA_DIR / "logs"
