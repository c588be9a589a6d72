import dataclasses
import json
from fractions import Fraction

import pytest

import cayleygap.cli
import cayleygap.verify
from cayleygap import from_cyclic, CayleyGraph, GeneratingSet, full_report
from cayleygap.cli import main
from cayleygap.verify import CSV_HEADER


def _disconnected_report():
    g = from_cyclic(6)
    neighbors = tuple((g.mult[3][x],) for x in range(6))
    graph = CayleyGraph(
        group=g,
        gens=GeneratingSet((3,)),
        neighbors=neighbors,
        nbr_masks=tuple(1 << row[0] for row in neighbors),
    )
    return full_report(graph)


def test_verify_all_pass(capsys):
    code = main(["verify", "--group", "cyclic:5", "--gens", "±1"])
    out = capsys.readouterr()
    assert code == 0
    assert "main_bound" in out.out
    assert "pass" in out.out
    assert out.err == ""


def test_verify_json(capsys):
    code = main(["verify", "--group", "cyclic:5", "--gens", "±1",
                 "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["schema_version"] == 1
    assert payload["group"] == "cyclic:5"
    assert len(payload["checks"]) == 15


def test_verify_csv(capsys):
    code = main(["verify", "--group", "cyclic:5", "--gens", "±1",
                 "--format", "csv"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines[0] == CSV_HEADER
    assert len(lines) == 2


def test_verify_exit_one_on_failure(capsys, monkeypatch):
    report = _disconnected_report()
    assert not report.all_pass
    monkeypatch.setattr(cayleygap.cli, "full_report",
                        lambda graph, **kwargs: report)
    code = main(["verify", "--group", "cyclic:6", "--gens", "±1"])
    assert code == 1


def test_proof_z6(capsys):
    code = main(["proof", "--group", "cyclic:6", "--gens", "±1"])
    out = capsys.readouterr()
    assert code == 0
    assert "H = {0, 2, 4}" in out.out
    assert "succeeded: True" in out.out
    assert out.err == ""


def test_proof_expander_exits_zero(capsys):
    code = main(["proof", "--group", "cyclic:5", "--gens", "±1"])
    out = capsys.readouterr().out
    assert code == 0
    assert "hypothesis met: False" in out


def test_proof_csv_stages(capsys):
    code = main(["proof", "--group", "cyclic:6", "--gens", "±1",
                 "--format", "csv"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines[0] == "stage,status"
    table = dict(line.split(",", 1) for line in lines[1:])
    assert table["hypothesis"] == "met"
    assert table["candidate"] == "ok"
    assert table["dichotomy"] == "ok"
    assert table["subgroup"] == "ok"
    assert table["disjointness"] == "ok"
    assert table["succeeded"] == "true"


def test_proof_json(capsys):
    code = main(["proof", "--group", "cyclic:6", "--gens", "±1",
                 "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    trace = payload["proof_trace"]
    assert trace["succeeded"] is True
    assert trace["subgroup"]["elements"] == [0, 2, 4]


def test_proof_forced_banner(capsys):
    code = main(["proof", "--group", "cyclic:6", "--gens", "±1",
                 "--zeta", "0.25"])
    out = capsys.readouterr()
    assert code == 0
    assert "forced mode" in out.err
    assert "succeeded: False" in out.out


def test_proof_zeta_fraction(capsys):
    code = main(["proof", "--group", "cyclic:6", "--gens", "±1",
                 "--zeta", "1/1492992"])
    out = capsys.readouterr()
    assert code == 0
    assert out.err == ""
    assert "succeeded: True" in out.out


def test_proof_zeta_garbage(capsys):
    code = main(["proof", "--group", "cyclic:6", "--gens", "±1",
                 "--zeta", "garbage"])
    out = capsys.readouterr()
    assert code == 2
    assert out.err.startswith("error: cannot parse zeta")


def test_proof_exit_one_on_in_regime_failure(capsys, monkeypatch):
    # a forced failing trace relabeled as in-regime is a counterexample shape
    from cayleygap import build_graph, run_pipeline

    graph = build_graph("cyclic:5", "±1")
    trace = run_pipeline(graph, zeta=Fraction(1, 4))
    params = dataclasses.replace(trace.params, subgroup_regime=True)
    fake = dataclasses.replace(trace, params=params)
    assert fake.hypothesis_met and not fake.succeeded and not fake.out_of_regime
    monkeypatch.setattr(cayleygap.cli, "run_pipeline",
                        lambda graph, zeta, **kwargs: fake)
    code = main(["proof", "--group", "cyclic:5", "--gens", "±1"])
    assert code == 1


def test_spectrum_text(capsys):
    code = main(["spectrum", "--group", "cyclic:4", "--gens", "±1"])
    out = capsys.readouterr().out
    assert code == 0
    assert "connected = True, bipartite (spectral) = True" in out


def test_spectrum_csv(capsys):
    code = main(["spectrum", "--group", "cyclic:4", "--gens", "±1",
                 "--format", "csv"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines[0] == "index,t,lambda"
    assert len(lines) == 5
    assert lines[1].startswith("0,-1.0")


def test_spectrum_json(capsys):
    code = main(["spectrum", "--group", "cyclic:4", "--gens", "±1",
                 "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["n"] == 4
    assert payload["bipartite_spectral"] is True
    assert len(payload["spectrum"]["t"]) == 4


def test_spectrum_non_generating(capsys):
    code = main(["spectrum", "--group", "cyclic:6", "--gens", "2,4"])
    out = capsys.readouterr()
    assert code == 2
    assert out.err.startswith("error: not generating")
    assert out.out == ""


def test_cheeger_text(capsys):
    code = main(["cheeger", "--group", "cyclic:6", "--gens", "±1"])
    out = capsys.readouterr().out
    assert code == 0
    assert "h = 2/3  witness = (0, 1, 2)" in out
    assert "edge_h = 1/3" in out
    assert "dual_h = 1" in out


def test_cheeger_dual_cap_skip(capsys):
    code = main(["cheeger", "--group", "symmetric:4"])
    out = capsys.readouterr().out
    assert code == 0
    assert "h = 5/6" in out
    assert "dual_h skipped (cap:max_dual=14,needed=24)" in out


def test_cheeger_csv(capsys):
    code = main(["cheeger", "--group", "cyclic:6", "--gens", "±1",
                 "--format", "csv"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines[0] == "quantity,value,witness"
    assert lines[1] == "h,2/3,0 1 2"
    assert lines[3].startswith("dual_h,1,")


def test_cheeger_json(capsys):
    code = main(["cheeger", "--group", "cyclic:6", "--gens", "±1",
                 "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["h"] == {"num": 2, "den": 3}
    assert payload["h_witness"] == [0, 1, 2]
    assert payload["dual_h_witness"] == [[0, 2, 4], [1, 3, 5]]


def test_subgroups_dihedral(capsys):
    code = main(["subgroups", "--group", "dihedral:4"])
    out = capsys.readouterr().out
    assert code == 0
    assert "index-2 subgroups: 3" in out
    assert "{0, 2, 5, 7}  disjoint from S: True" in out
    assert "bipartite (structural) = True" in out


def test_subgroups_json(capsys):
    code = main(["subgroups", "--group", "cyclic:5", "--gens", "±1",
                 "--format", "json"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["index2_subgroups"] == []
    assert payload["bipartite_structural"] is False


def test_sweep_text(capsys):
    code = main(["sweep", "cyclic:3..5 gens=±1"])
    out = capsys.readouterr()
    assert code == 0
    assert out.out.count("graph:") == 3
    assert out.err == ""


def test_sweep_csv(capsys):
    code = main(["sweep", "cyclic:3..5 gens=±1", "--format", "csv"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines[0] == CSV_HEADER
    assert len(lines) == 4


def test_sweep_error_item(capsys):
    code = main(["sweep", "cyclic:3 gens=±1", "florble:9", "--format", "csv"])
    out = capsys.readouterr()
    assert code == 2
    assert "error: florble:9:" in out.err
    assert len(out.out.splitlines()) == 2   # header + the one good row


def test_sweep_fail_dominates_error(capsys, monkeypatch):
    report = _disconnected_report()
    monkeypatch.setattr(cayleygap.verify, "full_report",
                        lambda graph, **kwargs: report)
    code = main(["sweep", "cyclic:3 gens=±1", "florble:9"])
    assert code == 1


def test_sweep_workers_match(capsys, tmp_path):
    out1 = tmp_path / "one.json"
    out2 = tmp_path / "two.json"
    assert main(["sweep", "cyclic:3..6 gens=±1", "--format", "json",
                 "--out", str(out1)]) == 0
    assert main(["sweep", "cyclic:3..6 gens=±1", "--format", "json",
                 "--workers", "3", "--out", str(out2)]) == 0
    assert capsys.readouterr().out == ""
    assert out1.read_bytes() == out2.read_bytes()


def test_out_writes_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code = main(["verify", "--group", "cyclic:5", "--gens", "±1",
                 "--format", "json", "--out", str(target)])
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["group"] == "cyclic:5"


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "spectrum" in capsys.readouterr().out


def test_missing_group_is_usage_error(capsys):
    assert main(["spectrum"]) == 2
    assert "--group" in capsys.readouterr().err


def test_unknown_command(capsys):
    assert main(["florble"]) == 2


def test_bad_group_spec(capsys):
    code = main(["verify", "--group", "florble:9"])
    out = capsys.readouterr()
    assert code == 2
    assert out.err.startswith("error:")
