"""Instance files and the command line."""

import json
from importlib import resources

import pytest
from hypothesis import given, settings, strategies as st

from conftest import fixture_instance
from dqg import io
from dqg.base import InvalidInstance
from dqg.builders import example_pair
from dqg.cli import main
from mutations import antipode_identity

SHIPPED = {"T": "instance_T.json", "C": "instance_C.json", "G2": "instance_G_z2.json",
           "S3": "instance_G_s3.json", "Sw": "instance_sweedler.json"}


def shipped(name):
    return resources.files("dqg") / "data" / SHIPPED[name]


@pytest.mark.parametrize("name", list(SHIPPED))
def test_shipped_files_equal_builders(name):
    loaded = io.load_instance(shipped(name))
    assert loaded.same_tables(fixture_instance(name))


def test_shipped_pair_has_dimension_four():
    assert io.load_instance(shipped("T")).dim == 4


@pytest.mark.parametrize("name", list(SHIPPED))
def test_emit_load_round_trip(name, tmp_path):
    inst = fixture_instance(name)
    path = tmp_path / "x.json"
    io.emit_instance(inst, path)
    assert io.load_instance(path).same_tables(inst)
    assert io.dumps(io.load_instance(path)) == io.dumps(inst)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=1, max_size=3), st.integers(1, 4))
def test_pair_round_trip_for_any_weights(nums, den):
    w = [f"{k}/{den}" for k in nums]
    inst = example_pair(points=tuple(str(i) for i in range(len(w))), weight=w)
    assert io.loads(io.dumps(inst)).same_tables(inst)


def test_scalars_are_rational_strings():
    data = io.instance_to_dict(fixture_instance("C"))
    assert data["base"]["weight"] == {"1": "1/1", "2": "4/1", "3": "1/1"}
    assert all(isinstance(e[3], str) for e in data["algebra"]["mult"])


def test_negative_weight_rejected():
    data = io.instance_to_dict(fixture_instance("T"))
    data["base"]["weight"]["1"] = "-1"
    with pytest.raises(InvalidInstance, match="strictly positive"):
        io.instance_from_dict(data)


def test_truncated_file_reports_line():
    text = io.dumps(fixture_instance("T"))
    cut = text[: len(text) // 2]
    with pytest.raises(io.InstanceParseError) as err:
        io.loads(cut)
    assert 1 <= err.value.line <= cut.count("\n") + 1
    assert "line" in str(err.value)


def test_missing_section_and_bad_index():
    data = io.instance_to_dict(fixture_instance("T"))
    del data["hopf"]
    with pytest.raises(InvalidInstance, match="hopf"):
        io.instance_from_dict(data)
    data = io.instance_to_dict(fixture_instance("T"))
    data["algebra"]["mult"][0][2] = 99
    with pytest.raises(InvalidInstance, match="out of range"):
        io.instance_from_dict(data)


# command line -------------------------------------------------------------------

def test_cli_check_all_passes_on_pair(capsys):
    assert main(["check", str(shipped("T"))]) == 0
    out = capsys.readouterr().out
    assert "0 fail" in out and "quotient dimensions" in out


def test_cli_json_report_fields(capsys):
    assert main(["check", str(shipped("T")), "--suite", "modular", "--json", "--tol", "1e-9"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] is True
    for r in report["results"]:
        assert set(r) >= {"check_id", "anchor", "status", "witness", "mode", "seconds"}
        assert r["mode"] in ("exact", "numeric")


def test_cli_mutated_antipode_exits_one(tmp_path, capsys):
    path = tmp_path / "bad.json"
    io.emit_instance(antipode_identity(), path)
    assert main(["check", str(path), "--suite", "axioms", "--json"]) == 1
    report = json.loads(capsys.readouterr().out)
    failing = {r["check_id"]: r["witness"] for r in report["results"] if r["status"] == "fail"}
    assert "antipode-diagram-1" in failing and failing["antipode-diagram-1"]


def test_cli_unknown_suite_exits_two(capsys):
    assert main(["check", str(shipped("T")), "--suite", "nope"]) == 2


def test_cli_invalid_file_exits_two(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text(io.dumps(fixture_instance("T"))[:200])
    assert main(["check", str(path)]) == 2
    assert "line" in capsys.readouterr().err


def test_cli_example_emit(tmp_path):
    path = tmp_path / "c.json"
    assert main(["example", "crossed", "--points", "1", "2", "3", "--weight", "1", "4", "1",
                 "--group", "z2", "--generator", "2", "1", "3", "--emit", str(path)]) == 0
    assert io.load_instance(path).same_tables(fixture_instance("C"))
    assert main(["example", "group", "--group", "s3", "--emit", str(tmp_path / "s.json")]) == 0
    assert io.load_instance(tmp_path / "s.json").dim == 6


def test_cli_example_rejects_non_square_ratio(tmp_path, capsys):
    assert main(["example", "crossed", "--weight", "1", "2", "1", "--emit", str(tmp_path / "x.json")]) == 2


def test_cli_figures(tmp_path, capsys):
    assert main(["check", str(shipped("G2")), "--suite", "fundamental", "--figures", str(tmp_path)]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["group_gram.png", "group_status.png"]
    assert all((tmp_path / n).stat().st_size > 1000 for n in names)
