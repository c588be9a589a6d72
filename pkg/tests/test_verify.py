import csv
import io
import json
from fractions import Fraction

import pytest

from cayleygap import (
    CayleyGraph,
    GeneratingSet,
    build_graph,
    eigenvalue_interval_check,
    from_cyclic,
    full_report,
    main_bound_check,
    main_bound_constant,
    report_to_csv,
    report_to_json,
    report_to_text,
    spectrum,
    sweep,
    sweep_to_csv,
    sweep_to_json,
    sweep_to_text,
    tightness_ratio,
)
from cayleygap.verify import (
    CHECK_NAMES,
    CSV_HEADER,
    parse_sweep_spec,
    report_csv_row,
    report_json_dict,
)

import families


def _disconnected_graph():
    g = from_cyclic(6)
    neighbors = tuple((g.mult[3][x],) for x in range(6))
    return CayleyGraph(
        group=g,
        gens=GeneratingSet((3,)),
        neighbors=neighbors,
        nbr_masks=tuple(1 << row[0] for row in neighbors),
    )


def _row(report, name):
    for row in report.checks:
        if row.name == name:
            return row
    raise KeyError(name)


def test_main_bound_constant():
    assert main_bound_constant(1) == 2048
    assert main_bound_constant(2) == 294912
    with pytest.raises(ValueError):
        main_bound_constant(0)


def test_main_bound_check_direct():
    graph = build_graph("cyclic:5", "±1")
    res = main_bound_check(graph)
    assert res.applicable and res.ok
    assert res.margin == pytest.approx(0.1909796147830387, rel=1e-12)
    bip = main_bound_check(build_graph("cyclic:6", "±1"))
    assert not bip.applicable
    assert bip.ok is None


def test_interval_check_direct():
    graph = build_graph("cyclic:5", "±1")
    res = eigenvalue_interval_check(graph)
    assert res.applicable and res.ok
    assert res.lower_margin == pytest.approx(0.1909796147830386, rel=1e-12)
    assert res.upper_margin == pytest.approx(0.5659830056250525, rel=1e-12)
    assert not eigenvalue_interval_check(build_graph("cyclic:6", "±1")).applicable
    # single vertex: no nontrivial eigenvalues
    assert not eigenvalue_interval_check(build_graph("cyclic:1", "0")).applicable


def test_tightness_ratio_values():
    assert tightness_ratio(build_graph("cyclic:3", "±1")) == 9216.0
    assert tightness_ratio(build_graph("cyclic:5", "±1")) == pytest.approx(
        56323.1801548955, rel=1e-12
    )
    with pytest.raises(ValueError, match="bipartite"):
        tightness_ratio(build_graph("cyclic:6", "±1"))


def test_full_report_z5_all_pass():
    report = families.report_of(families.MEMBERS[2])   # cyclic:5 gens=±1
    assert report.group_label == "cyclic:5"
    assert report.gens == (1, 4)
    assert report.all_pass
    assert report.failed == ()
    assert [row.name for row in report.checks] == list(CHECK_NAMES)
    assert _row(report, "main_bound").margin == pytest.approx(
        0.1909796147830387, rel=1e-12
    )
    assert _row(report, "proof_pipeline").reason == "hypothesis not met"
    assert _row(report, "tightness_ratio").margin == pytest.approx(
        report.tightness - 1.0, rel=1e-12
    )
    assert report.tightness == pytest.approx(56323.1801548955, rel=1e-12)
    assert not report.bipartite_spectral
    assert report.bipartite_structural is False


def test_full_report_z6_bipartite_rows():
    report = families.report_of(families.MEMBERS[3])   # cyclic:6 gens=±1
    assert report.all_pass
    for name in ("main_bound", "eigenvalue_interval_lower",
                 "eigenvalue_interval_upper", "tightness_ratio"):
        row = _row(report, name)
        assert row.status == "not_applicable"
        assert row.reason == "bipartite"
        assert row.margin is None
    assert _row(report, "cheeger_buser_lower").status == "pass"
    assert _row(report, "dual_cheeger_lower").margin == 0.0
    assert _row(report, "proof_pipeline").status == "pass"
    assert report.tightness is None
    assert report.trace is not None and report.trace.succeeded
    assert report.bipartite_spectral and report.bipartite_structural


@pytest.mark.parametrize("member", families.MEMBERS, ids=families.MEMBER_IDS)
def test_full_report_family_passes(member):
    report = families.report_of(member)
    assert report.all_pass, [r for r in report.failed]
    assert len(report.checks) == len(CHECK_NAMES)
    bip = report.bipartite_structural
    assert bip == member.bipartite
    if member.bipartite:
        assert _row(report, "main_bound").status == "not_applicable"
    else:
        assert _row(report, "main_bound").status == "pass"
        assert report.tightness is not None and report.tightness >= 1.0


def test_full_report_disconnected():
    report = full_report(_disconnected_graph())
    assert not report.all_pass
    assert [r.name for r in report.failed] == ["connectivity"]
    for name in ("main_bound", "eigenvalue_interval_lower",
                 "eigenvalue_interval_upper", "dual_cheeger_equivalence",
                 "large_set_expansion", "bipartite_equivalence",
                 "proof_pipeline", "tightness_ratio"):
        row = _row(report, name)
        assert row.status == "skipped"
        assert row.reason == "disconnected"
    # the purely isoperimetric rows still run; h = 0 pins every margin at 0
    assert report.h == 0
    assert report.dual_h == 1
    for name in ("cheeger_buser_lower", "cheeger_buser_upper",
                 "vertex_edge_lower", "vertex_edge_upper",
                 "dual_cheeger_lower", "dual_cheeger_upper"):
        assert _row(report, name).status == "pass"


def test_full_report_forced_zeta():
    report = full_report(build_graph("cyclic:6", "±1"), zeta=Fraction(1, 4))
    row = _row(report, "proof_pipeline")
    assert row.status == "not_applicable"
    assert row.reason == "out_of_regime"
    assert report.all_pass
    assert report.trace.out_of_regime


def test_full_report_dual_cap():
    report = full_report(build_graph("symmetric:4", "auto"))
    for name in ("dual_cheeger_lower", "dual_cheeger_upper",
                 "dual_cheeger_equivalence"):
        row = _row(report, name)
        assert row.status == "skipped"
        assert row.reason == "cap:max_dual=14,needed=24"
    assert report.dual_h is None
    # transposition generators are odd, so this graph is bipartite
    assert _row(report, "main_bound").status == "not_applicable"
    assert report.all_pass


def test_json_schema_shape():
    report = families.report_of(families.MEMBERS[2])
    payload = report_json_dict(report)
    assert list(payload) == [
        "schema_version", "group", "gens", "n", "d", "h", "edge_h", "dual_h",
        "spectrum", "bipartite", "checks", "proof_trace",
    ]
    assert payload["schema_version"] == 1
    assert payload["group"] == "cyclic:5"
    assert payload["gens"] == [1, 4]
    assert payload["h"] == {"num": 1, "den": 1}
    assert payload["edge_h"] == {"num": 1, "den": 2}
    assert payload["dual_h"] == {"num": 4, "den": 5}
    assert len(payload["spectrum"]["t"]) == 5
    assert payload["bipartite"] == {"spectral": False, "structural": False}
    assert len(payload["checks"]) == 15
    assert set(payload["checks"][0]) == {"name", "status", "margin", "reason"}
    trace = payload["proof_trace"]
    assert trace["hypothesis_met"] is False
    assert trace["succeeded"] is False
    assert trace["candidate"] is None
    # everything must survive a JSON round trip unchanged
    assert json.loads(report_to_json(report)) == payload


def test_json_trace_shape_bipartite():
    report = families.report_of(families.MEMBERS[3])
    trace = report_json_dict(report)["proof_trace"]
    assert trace["hypothesis_met"] is True
    assert trace["succeeded"] is True
    assert trace["candidate"]["a_set"] == [0, 2, 4]
    assert trace["subgroup"]["elements"] == [0, 2, 4]
    assert trace["subgroup"]["is_index_two"] is True
    assert trace["final"]["disjoint"] is True
    assert trace["final"]["structural_match"] is True
    assert trace["dichotomy"]["valid"] is True
    assert trace["agreement_bounds_ok"] is True
    assert trace["eps"] == {"num": 2, "den": 3}


def test_json_deterministic():
    graph1 = build_graph("cyclic:5", "±1")
    graph2 = build_graph("cyclic:5", "±1")
    assert report_to_json(full_report(graph1)) == report_to_json(full_report(graph2))


def test_csv_row_shape():
    report = families.report_of(families.MEMBERS[2])
    text = report_to_csv(report)
    lines = text.splitlines()
    assert lines[0] == CSV_HEADER
    parsed = next(csv.reader(io.StringIO(lines[1])))
    assert len(parsed) == 10
    assert parsed[0] == "cyclic:5 gens=1,4"
    assert parsed[1] == "5"
    assert parsed[2] == "2"
    assert parsed[3] == "1"
    assert parsed[4] == "1/2"
    assert parsed[7] == "false"
    assert float(parsed[8]) == pytest.approx(0.1909796147830387, rel=1e-12)
    # the graph label contains a comma, so the raw field must be quoted
    assert lines[1].startswith('"cyclic:5 gens=1,4",')


def test_csv_bipartite_empty_cells():
    report = families.report_of(families.MEMBERS[3])
    parsed = next(csv.reader(io.StringIO(report_csv_row(report))))
    assert parsed[7] == "true"
    assert parsed[8] == ""   # main bound margin
    assert parsed[9] == ""   # tightness


def test_text_report_mentions_every_check():
    report = families.report_of(families.MEMBERS[2])
    text = report_to_text(report)
    for name in CHECK_NAMES:
        assert name in text
    assert "tightness ratio" in text


def test_parse_sweep_spec():
    assert parse_sweep_spec("cyclic:5 gens=±1") == ("cyclic:5", "±1")
    assert parse_sweep_spec("cyclic:5") == ("cyclic:5", None)
    assert parse_sweep_spec("  dihedral:4 gens=auto ") == ("dihedral:4", "auto")


def test_build_graph_defaults():
    graph = build_graph("cyclic:5", None)
    assert graph.gens.elements == (1, 4)
    assert build_graph("cyclic:5", "auto").gens.elements == (1, 4)
    assert build_graph("symmetric:3", "auto").d == 3
    assert build_graph("cyclic:6", "±1").n == 6


def test_sweep_range_expansion():
    items = sweep(["cyclic:3..16 gens=±1"])
    assert len(items) == 14
    assert [item.spec for item in items] == [
        f"cyclic:{n} gens=±1" for n in range(3, 17)
    ]
    for item, n in zip(items, range(3, 17)):
        assert item.error is None
        assert item.report.n == n
        assert item.report.all_pass
        assert item.report.bipartite_spectral == (n % 2 == 0)


def test_sweep_workers_identical():
    specs = ["cyclic:3..8 gens=±1", "dihedral:3 gens=auto"]
    serial = sweep(specs, workers=1)
    parallel = sweep(specs, workers=3)
    assert sweep_to_json(serial) == sweep_to_json(parallel)
    assert sweep_to_csv(serial) == sweep_to_csv(parallel)


def test_sweep_records_errors():
    items = sweep(["florble:7", "cyclic:5 gens=7,8", "cyclic:4 gens=±1"])
    assert items[0].report is None and items[0].error is not None
    assert items[1].report is None and "outside" in items[1].error
    assert items[2].report is not None

    payload = json.loads(sweep_to_json(items))
    assert payload["schema_version"] == 1
    assert len(payload["reports"]) == 3
    assert payload["reports"][0]["error"] == items[0].error
    assert payload["reports"][2]["group"] == "cyclic:4"

    lines = sweep_to_csv(items).splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 2   # only the successful report

    text = sweep_to_text(items)
    assert "error:" in text


def test_sweep_empty():
    assert sweep([]) == []
    assert sweep_to_csv([]) == CSV_HEADER + "\n"
    assert json.loads(sweep_to_json([])) == {"schema_version": 1, "reports": []}
