"""Command-line interface: commands, formats, exit codes."""

import io
import json

import pytest

from resolvedk import fixtures
from resolvedk.action import ResolvedAction
from resolvedk.cli import main
from resolvedk.descriptor import parse_descriptor, serialize_descriptor


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture()
def sphere_file(tmp_path):
    path = tmp_path / "sphere.json"
    path.write_text(serialize_descriptor(fixtures.sphere_rotation()))
    return str(path)


def test_example_lists_fixtures():
    code, out, _ = run_cli("example")
    assert code == 0
    for name in ("sphere_rotation", "projective_plane"):
        assert name in out


def test_example_emits_parseable_descriptor():
    code, out, _ = run_cli("example", "sphere_rotation")
    assert code == 0
    desc = parse_descriptor(out)
    assert set(desc.action.tree.nodes) == {"0", "N", "S"}

    code, out, _ = run_cli("example", "product_trivial:torsion=2+4")
    assert code == 0
    assert parse_descriptor(out).action.group.torsion == (2, 4)

    assert run_cli("example", "no_such_fixture")[0] == 2
    assert run_cli("example", "sphere_rotation_speed:n=x")[0] == 2


def test_validate_passes_on_fixture_file(sphere_file):
    code, out, _ = run_cli("validate", "--input", sphere_file, "--window", "1")
    assert code == 0
    assert "validation passed" in out
    assert "FAIL" not in out

    code, out, _ = run_cli(
        "validate", "--input", sphere_file, "--window", "1", "--format", "json"
    )
    payload = json.loads(out)
    assert code == 0 and payload["ok"] is True


def test_deloc_reports_dimensions(sphere_file):
    code, out, _ = run_cli("deloc", "--input", sphere_file, "--window", "2")
    assert code == 0
    assert "total: even 9, odd 0" in out
    assert "declared: [9, 0]" in out

    code, out, _ = run_cli(
        "deloc", "--input", sphere_file, "--window", "1", "--format", "json"
    )
    payload = json.loads(out)
    assert payload["even"] == 5 and payload["odd"] == 0
    assert payload["sectors"] == {"()": [5, 0]}


def test_deloc_relative_nodes(sphere_file):
    code, out, _ = run_cli(
        "deloc", "--input", sphere_file, "--window", "1",
        "--relative", "N", "--relative", "S",
    )
    assert code == 0
    assert "total: even 0, odd 1" in out


def test_deloc_surfaces_the_odd_k_note(sphere_file):
    code, out, _ = run_cli("deloc", "--input", sphere_file, "--window", "1")
    assert code == 0
    assert "deliberately not reproduced" in out
    payload = json.loads(
        run_cli("deloc", "--input", sphere_file, "--window", "1", "--format", "json")[1]
    )
    assert any("odd" in note.lower() for note in payload["notes"])


def test_kred_reports_node_and_global_ranks(sphere_file):
    code, out, _ = run_cli("kred", "--input", sphere_file, "--window", "1")
    assert code == 0
    assert "node N: window 3, K ranks even 3, odd 0" in out
    assert "global rational K: even 5, odd 0" in out


def test_compare_agrees_on_sphere(sphere_file):
    code, out, _ = run_cli("compare", "--input", sphere_file, "--window", "2")
    assert code == 0
    assert "even 9 = 9" in out
    assert "ranks agree" in out


def test_compare_fails_on_wrong_declared_values(tmp_path):
    sphere = fixtures.sphere_rotation()
    doctored = ResolvedAction(
        sphere.tree, sphere.spaces, sphere.faces, sphere.window_rules,
        bundles=sphere.bundles, chern=sphere.chern,
        expected={"deloc_dims_by_radius": {"1": [4, 0]}},
    )
    path = tmp_path / "doctored.json"
    path.write_text(serialize_descriptor(doctored))
    code, out, _ = run_cli("compare", "--input", str(path), "--window", "1")
    assert code == 1
    assert "FAIL" in out


def test_ch_prints_chern_values(sphere_file):
    code, out, _ = run_cli("ch", "--input", sphere_file, "--window", "3")
    assert code == 0
    assert "poles @ 0 (): (3, 3, 0)" in out
    assert "poles @ N (3): (1)" in out
    assert "closed and compatible" in out


def test_ch_requires_a_wide_enough_window(sphere_file):
    code, _, err = run_cli("ch", "--input", sphere_file, "--window", "1")
    assert code == 2
    assert "enlarge the radius" in err


def test_les_reports_exact_steps(sphere_file):
    code, out, _ = run_cli("les", "--input", sphere_file, "--window", "1", "--prune", "N")
    assert code == 0
    assert "exact six-term sequence" in out
    assert "even total 5" in out

    payload = json.loads(
        run_cli(
            "les", "--input", sphere_file, "--window", "1", "--prune", "N",
            "--format", "json",
        )[1]
    )
    (step,) = payload["steps"]
    assert step["added"] == "N" and step["exact"] is True
    assert step["dims"] == [2, 5, 3, 0, 0, 0]


def test_les_multi_step_on_the_plane(tmp_path):
    path = tmp_path / "plane.json"
    path.write_text(serialize_descriptor(fixtures.projective_plane()))
    code, out, _ = run_cli(
        "les", "--input", str(path), "--window", "1",
        "--prune", "p1", "--prune", "p3", "--prune", "s",
    )
    assert code == 0
    assert out.count("exact six-term sequence") == 3


def test_les_input_errors(sphere_file, tmp_path):
    assert run_cli("les", "--input", sphere_file)[0] == 2
    assert run_cli("les", "--input", sphere_file, "--prune", "Q")[0] == 2
    path = tmp_path / "plane.json"
    path.write_text(serialize_descriptor(fixtures.projective_plane()))
    code, _, err = run_cli("les", "--input", str(path), "--prune", "s")
    assert code == 2
    assert "downward" in err


def test_stabilize_scans_windows(sphere_file):
    code, out, _ = run_cli("stabilize", "--input", sphere_file, "--window", "2")
    assert code == 0
    assert "stabilized: False" in out
    payload = json.loads(
        run_cli(
            "stabilize", "--input", sphere_file, "--window", "2", "--format", "json"
        )[1]
    )
    assert payload["rows"] == [[0, 1, 0], [1, 5, 0], [2, 9, 0]]


def test_fixture_inputs_with_parameters():
    code, out, _ = run_cli(
        "deloc", "--input", "fixture:sphere_rotation_speed:n=2", "--window", "1"
    )
    assert code == 0
    assert "total: even 10, odd 0" in out

    code, out, _ = run_cli(
        "deloc", "--input", "fixture:product_trivial:torsion=2", "--window", "1"
    )
    assert code == 0
    assert "total: even 10, odd 0" in out


def test_input_error_exit_codes(tmp_path):
    assert run_cli("deloc")[0] == 2
    assert run_cli("deloc", "--input", str(tmp_path / "missing.json"))[0] == 2
    assert run_cli("deloc", "--input", "fixture:klein")[0] == 2

    bad = tmp_path / "bad.json"
    bad.write_text("{\"format\": \"wrong\"}")
    code, _, err = run_cli("deloc", "--input", str(bad))
    assert code == 2 and "resolvedk:" in err

    assert run_cli("deloc", "stray-name", "--input", "fixture:sphere_rotation")[0] == 2
