import json
import math

import numpy as np

from mixbound.report import ExperimentReport, dumps_canonical


def test_canonical_floats_trimmed_and_stable():
    payload = {"a": 0.1 + 0.2, "b": np.float64(2) ** 0.5, "c": [1e-300, 3]}
    s1, s2 = dumps_canonical(payload), dumps_canonical(payload)
    assert s1 == s2
    decoded = json.loads(s1)
    assert math.isclose(decoded["a"], 0.3, rel_tol=1e-11)
    assert isinstance(decoded["c"][1], int)


def test_canonical_handles_non_finite_and_arrays():
    s = dumps_canonical({"x": float("nan"), "y": float("inf"),
                         "z": np.arange(3), "f": True})
    decoded = json.loads(s)
    assert decoded["x"] == "nan" and decoded["y"] == "inf"
    assert decoded["z"] == [0, 1, 2]
    assert decoded["f"] is True


def test_report_passed_and_timing_exclusion():
    rep = ExperimentReport(command="demo", inputs={"n": 12},
                           results={"v": 1.0},
                           checks=[{"id": "c1", "passed": True}],
                           wall_clock_s=1.23)
    assert rep.all_passed()
    assert "wall_clock" not in rep.to_json()
    assert "wall_clock_s" in rep.to_json(include_timing=True)
    rep.checks.append({"id": "c2", "passed": False})
    assert not rep.all_passed()
