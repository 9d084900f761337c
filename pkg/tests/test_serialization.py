import math

import mpmath
import numpy as np
import orjson
import pytest

from photocount.serialization import SCHEMA, document, dumps_csv, dumps_json, emit, format_float


def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert float(format_float(1 / 3)) == 1 / 3
    assert format_float(math.nan) is None
    assert format_float(-math.inf) is None


def test_document_layout():
    doc = document("dist", {"nu": 1.0}, [{"n": 0}], order=3)
    assert list(doc) == ["schema", "command", "params", "order", "rows"]
    assert doc["schema"] == SCHEMA
    assert "params" not in document("sweep", None, [])


def test_json_numbers():
    doc = document("x", None, [{"a": 0.1, "b": np.float64(2.5), "c": np.int64(3), "d": mpmath.mpf("0.25"),
                                "e": None, "f": True, "g": math.inf}])
    payload = dumps_json(doc)
    assert b"0.10000000000000001" in payload
    assert payload.endswith(b"\n")
    row = orjson.loads(payload)["rows"][0]
    assert row == {"a": 0.1, "b": 2.5, "c": 3, "d": 0.25, "e": None, "f": True, "g": None}


def test_csv_layout():
    doc = document("dist", {"nu": 1.0, "tau": 0.5}, [{"n": 0, "p": 0.95}, {"n": 1, "p": 0.05}],
                   zeta=0.2, bound=None, negative_mass=False, tags=["ignored"])
    text = dumps_csv(doc).decode("utf-8")
    lines = text.split("\n")
    assert lines[0] == "nu,tau,zeta,bound,negative_mass,n,p"
    assert lines[1] == "1,0.5,0.20000000000000001,,false,0,0.94999999999999996"
    assert lines[-1] == ""
    assert len(lines) == 4


def test_csv_and_json_share_digits():
    value = 0.123456789012345678
    doc = document("x", None, [{"v": value}])
    assert format_float(value).encode() in dumps_json(doc)
    assert format_float(value).encode() in dumps_csv(doc)


def test_emit_to_file(tmp_path):
    out = tmp_path / "doc.csv"
    emit(document("x", None, [{"n": 1}]), "csv", out)
    assert out.read_bytes() == b"n\n1\n"


def test_emit_to_stdout(capsysbinary):
    emit(document("x", None, []), "json")
    assert orjson.loads(capsysbinary.readouterr().out) == {"schema": SCHEMA, "command": "x", "rows": []}


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_empty_rows(fmt):
    emitted = dumps_csv(document("x", None, [])) if fmt == "csv" else dumps_json(document("x", None, []))
    assert isinstance(emitted, bytes)
