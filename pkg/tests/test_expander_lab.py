"""
End-to-end tests of the expander_lab command line: artifacts, exit codes and reproducibility.
"""

import json
import logging
import math

import pytest

from construction import FamilyLabel, GeneratingFamily
from expander_lab import BracketFormatter, build_parser, run
from experiment_config import SCHEMA_VERSION, ExitCode, FamilyKind
from perm_core import Permutation


def write_config(tmp_path, **keys):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(keys))
    return path


def read_result(path):
    doc = json.loads(path.read_text())
    assert doc["schema_version"] == SCHEMA_VERSION
    assert "tool_version" in doc and "config" in doc
    return doc["result"]


def test_bracket_formatter():
    record = logging.LogRecord("expander_lab", logging.WARNING, __file__, 1, "gap %s", ("small",), None)
    assert BracketFormatter().format(record) == "[WARNING] gap small"


def test_parser_rejects_unknown_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["fly"])


def test_construct_and_certify_desk(tmp_path):
    """The desk family certifies as Alt(49)."""
    out = tmp_path / "out"
    assert run(["construct", "--preset", "desk", "--out", str(out)]) == ExitCode.OK
    family = json.loads((out / "family.json").read_text())
    assert family["degree"] == 49 and len(family["elements"]) == 12
    assert (out / "family.json.timing.json").exists()

    assert run(["certify", "--preset", "desk", "--out", str(out)]) == ExitCode.OK
    result = read_result(out / "certificate.json")
    assert result["valid"]
    assert result["order_formula"] == "49!/2"
    assert result["order"] == str(math.factorial(49) // 2)


def test_certify_from_family_file(tmp_path):
    out = tmp_path / "out"
    run(["construct", "--out", str(out)])
    code = run(["certify", "--family", str(out / "family.json"), "--out", str(tmp_path / "again")])
    assert code == ExitCode.OK


def test_dropping_an_axis_fails_certification(tmp_path):
    """Without the axis-1 elements the family has 7 orbits: exit code 4."""
    out = tmp_path / "out"
    run(["construct", "--out", str(out)])
    labels = json.loads((out / "family.json").read_text())["labels"]
    drops = [str(k) for k, label in enumerate(labels) if label.get("axis") == 1]
    assert drops
    argv = ["certify", "--out", str(out)]
    for index in drops:
        argv += ["--drop", index]
    assert run(argv) == ExitCode.CERTIFICATION_FAILED
    result = read_result(out / "certificate.json")
    assert not result["valid"]
    assert "intransitive (7 orbits)" in result["message"]


def test_unknown_config_key_exits_2(tmp_path):
    path = write_config(tmp_path, warp_factor=9)
    assert run(["construct", "--config", str(path), "--out", str(tmp_path)]) == ExitCode.CONFIG_ERROR


def test_unknown_preset_exits_2(tmp_path):
    assert run(["construct", "--preset", "nope", "--out", str(tmp_path)]) == ExitCode.CONFIG_ERROR


def test_drop_out_of_range_exits_2(tmp_path):
    assert run(["construct", "--drop", "99", "--out", str(tmp_path)]) == ExitCode.CONFIG_ERROR


def test_budget_exit_code(tmp_path):
    path = write_config(tmp_path, d=3, cube_point_budget=100)
    assert run(["construct", "--config", str(path), "--out", str(tmp_path)]) == ExitCode.BUDGET_EXCEEDED


def test_certificate_degree_limit_exits_3(tmp_path):
    """Families above the certificate degree limit are a budget failure, not a failed certificate."""
    degree = 401
    family = GeneratingFamily(FamilyKind.F_N, degree,
                              [Permutation.from_cycles([tuple(range(degree))], degree),
                               Permutation.from_cycles([(0, 1, 2)], degree)],
                              [FamilyLabel("long-cycle"), FamilyLabel("three-cycle")])
    path = tmp_path / "family.json"
    path.write_text(family.to_json())
    code = run(["certify", "--family", str(path), "--out", str(tmp_path / "out")])
    assert code == ExitCode.BUDGET_EXCEEDED


def test_unconverged_expansion_exits_5(tmp_path):
    """One power-deflation sweep cannot meet the tolerance; the artifact records it and the run fails."""
    path = write_config(tmp_path, solver_method="power-deflation", max_iterations=1)
    out = tmp_path / "out"
    assert run(["expansion", "--config", str(path), "--out", str(out)]) == ExitCode.SOLVER_FAILED
    assert read_result(out / "expansion.json")["converged"] is False


def test_spectrum_artifact(tmp_path):
    out = tmp_path / "out"
    assert run(["spectrum", "--out", str(out)]) == ExitCode.OK
    result = read_result(out / "spectrum.json")
    spectrum = result["spectrum"]
    assert spectrum["n_vertices"] == 49
    assert spectrum["lambda_2"] < 1.0
    assert result["delta_power"]["telescoping_holds"]


def test_expansion_artifact(tmp_path):
    out = tmp_path / "out"
    assert run(["expansion", "--out", str(out)]) == ExitCode.OK
    result = read_result(out / "expansion.json")
    assert 0 < result["cheeger"]["lower"] <= result["cheeger"]["upper"]
    assert "exact" not in result


def test_kazhdan_graph_export(tmp_path):
    """Cayley graph of Alt(4) from configured generators: 12 vertices in DOT."""
    path = write_config(tmp_path, kazhdan_degree=4, kazhdan_gens=["(0 1 2)", "(1 2 3)"])
    out = tmp_path / "out"
    code = run(["export", "--config", str(path), "--what", "kazhdan-graph", "--format", "dot", "--out", str(out)])
    assert code == ExitCode.OK
    dot = (out / "kazhdan_graph.dot").read_text()
    vertex_lines = [line for line in dot.splitlines() if line.strip().rstrip(";").isdigit()]
    assert len(vertex_lines) == 12


def test_kazhdan_artifact(tmp_path):
    out = tmp_path / "out"
    assert run(["kazhdan", "--out", str(out)]) == ExitCode.OK
    result = read_result(out / "kazhdan.json")
    assert result["group_order"] == 6
    assert result["kazhdan"] == pytest.approx(math.sqrt(12 / 7), abs=1e-3)
    assert result["expansion_lower_bound"] == pytest.approx(3 / 7, abs=1e-3)


def test_table_export_csv(tmp_path):
    path = write_config(tmp_path, chars_n=5)
    out = tmp_path / "out"
    assert run(["export", "--config", str(path), "--what", "table", "--format", "csv", "--out", str(out)]) == 0
    lines = (out / "character_table.csv").read_text().splitlines()
    assert len(lines) == 8


def test_unsupported_export_pair(tmp_path):
    code = run(["export", "--what", "family", "--format", "dot", "--out", str(tmp_path)])
    assert code == ExitCode.CONFIG_ERROR


def test_chars_artifacts(tmp_path):
    out = tmp_path / "out"
    path = write_config(tmp_path, chars_n=6)
    assert run(["chars", "--config", str(path), "--out", str(out)]) == ExitCode.OK
    scan = read_result(out / "bound_scan.json")
    assert scan["n"] == 6
    assert scan["fitted_label"] == "artifact-fitted"
    assert (out / "character_table.csv").exists()


def test_baseline_artifact(tmp_path):
    path = write_config(tmp_path, baseline_n=7, baseline_set_size=6, baseline_trials=2)
    out = tmp_path / "out"
    assert run(["baseline", "--config", str(path), "--out", str(out)]) == ExitCode.OK
    result = read_result(out / "baseline.json")
    assert result["median_gap"] == pytest.approx(7 / 6, abs=1e-8)


def test_reruns_are_byte_identical(tmp_path):
    """Same config and seed: same family and certificate bytes."""
    out = tmp_path / "out"
    run(["certify", "--seed", "3", "--out", str(out)])
    first = (out / "certificate.json").read_bytes()
    run(["certify", "--seed", "3", "--out", str(out)])
    assert (out / "certificate.json").read_bytes() == first
