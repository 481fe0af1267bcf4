import json
import math

import numpy as np
from hypothesis import given, strategies as st

from janossy import _io


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_round_trip(x):
    assert float(_io.fmt(x)) == x
    assert json.loads(_io._json_value(x)) == x


def test_formatting():
    assert _io.fmt(3) == "3" and _io.fmt(np.int64(3)) == "3"
    assert _io.fmt(0.1) == "0.10000000000000001"
    assert _io.fmt(None) == "" and _io.fmt(True) == "true" and _io.fmt("tw") == "tw"
    assert _io._json_value(math.nan) == "null"


def test_render_csv_and_json_same_fields():
    cfg = {"command": "x", "tol": 1e-13}
    rows = [(1, 0.5, "a"), (2, 1 / 3, "b")]
    csv = _io.render(("k", "v", "s"), rows, cfg, 7, {"note": 1.5})
    lines = csv.splitlines()
    assert lines[0] == '# janossy 0.1.0 config={"command":"x","tol":1e-13} seed=7'
    assert lines[1] == "# note=1.5"
    assert lines[2] == "k,v,s"
    doc = json.loads(_io.render(("k", "v", "s"), rows, cfg, 7, {"note": 1.5}, "json"))
    assert doc["rows"] == [[1, 0.5, "a"], [2, 1 / 3, "b"]]
    assert doc["seed"] == 7 and doc["meta"] == {"note": 1.5}
    assert _io.render(("k",), [(1,)], cfg) == _io.render(("k",), [(1,)], dict(reversed(list(cfg.items()))))
