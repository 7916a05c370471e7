import json
import math
from pathlib import Path

import pytest

from rd_exponent._cli import EXIT_OK, main

GOLDEN = Path(__file__).parent / "golden"
REPOSITORY = Path(__file__).parents[2]
VOLATILE = ("timestamp", "version")
# Search counters depend on the bracket and golden-section path, only their
# type is pinned.
MARKERS = {"<int>": int, "<float>": float}
ABS_TOL = 5e-4

UNIFORM = "examples_data/binary_hamming.json"
SKEWED = "examples_data/binary_hamming_skewed.json"

COMMANDS = {
    "exponent": ["exponent", UNIFORM, "--rate", "0.2", "--delta", "0.1"],
    "cutoff": ["cutoff", UNIFORM, "--delta", "0.1", "--lam", "1.0,0.5"],
    "rd": ["rd", UNIFORM, "--deltas", "0.1,0.2", "--lam", "0.01"],
    "trace": ["trace", UNIFORM, "--mu", "2", "--lam", "1"],
    "oracle": ["oracle", "analytic", SKEWED, "--delta", "0.1"],
}


def assert_matches(actual, expected, path="record"):
    if isinstance(expected, str) and expected in MARKERS:
        assert isinstance(actual, MARKERS[expected]), path
        assert not isinstance(actual, bool), path
    elif isinstance(expected, dict):
        assert isinstance(actual, dict), path
        assert sorted(actual) == sorted(expected), path
        for key, value in expected.items():
            assert_matches(actual[key], value, f"{path}.{key}")
    elif isinstance(expected, list):
        assert isinstance(actual, list), path
        assert len(actual) == len(expected), path
        for index, (left, right) in enumerate(zip(actual, expected)):
            assert_matches(left, right, f"{path}[{index}]")
    elif isinstance(expected, float):
        assert isinstance(actual, (int, float)), path
        assert not isinstance(actual, bool), path
        assert math.isfinite(actual), path
        assert actual == pytest.approx(expected, abs=ABS_TOL), path
    else:
        assert actual == expected, path
        assert type(actual) is type(expected), path


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_run_record_matches_golden(name, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(REPOSITORY)
    record_path = tmp_path / f"{name}.json"

    code = main([*COMMANDS[name], "--record", str(record_path)])

    assert code == EXIT_OK
    capsys.readouterr()
    record = json.loads(record_path.read_text())
    for key in VOLATILE:
        assert key in record
        del record[key]
    expected = json.loads((GOLDEN / f"{name}.json").read_text())

    assert record["parameters"] == expected["parameters"]
    assert_matches(record, expected)


def test_golden_records_cover_every_command():
    assert sorted(path.stem for path in GOLDEN.glob("*.json")) == sorted(COMMANDS)
