"""Per-graph verification reports and family sweeps.

A report runs every applicable check on one Cayley graph: connectivity, the
main spectral-gap bound lambda_n <= 2 - h^4 / (2^9 d^6 (d+1)^2), the two-sided
interval for nontrivial eigenvalues, Cheeger-Buser, the vertex-edge relation,
the dual-Cheeger sandwich and its bipartiteness equivalence, large-set
expansion, the spectral-vs-structural bipartiteness equivalence, and the full
subgroup-extraction pipeline. Checks over a size cap are skipped with a
machine-readable reason; checks vacuous for bipartite graphs are reported as
not applicable rather than passing. Reports serialise to a versioned JSON
schema and a fixed-column CSV, byte-identical across runs.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .cayley import CayleyGraph, build, generating_set, parse_generators
from .cheeger import (
    MAX_DUAL_DEFAULT,
    MAX_EXACT_DEFAULT,
    bauer_jost_check,
    cheeger_buser_check,
    dual_cheeger,
    edge_cheeger,
    vertex_cheeger,
    vertex_edge_relation_check,
)
from .errors import CapExceededError, CayleyGapError
from .groups import default_generators, expand_group_specs, parse_group_spec
from .proof import ProofTrace, large_set_expansion_check, run_pipeline
from .spectral import (
    SpectralSummary,
    is_bipartite_spectral,
    is_connected,
    spectrum,
)
from .subgroups import is_bipartite_structural, proposition_equivalence_check

DEFAULT_TOL = 1e-9

CHECK_NAMES = (
    "connectivity",
    "main_bound",
    "eigenvalue_interval_lower",
    "eigenvalue_interval_upper",
    "cheeger_buser_lower",
    "cheeger_buser_upper",
    "vertex_edge_lower",
    "vertex_edge_upper",
    "dual_cheeger_lower",
    "dual_cheeger_upper",
    "dual_cheeger_equivalence",
    "large_set_expansion",
    "bipartite_equivalence",
    "proof_pipeline",
    "tightness_ratio",
)

CSV_HEADER = (
    "graph,n,d,h,edge_h,lambda2,lambda_n,bipartite,"
    "main_bound_margin,tightness_ratio"
)


def main_bound_constant(d: int) -> int:
    """Denominator constant 2^9 d^6 (d+1)^2 of the main bound."""
    if d < 1:
        raise ValueError("degree must be at least 1")
    return 2**9 * d**6 * (d + 1) ** 2


@dataclass(frozen=True)
class CheckRow:
    name: str
    status: str                      # pass | fail | skipped | not_applicable
    margin: float | None = None
    reason: str | None = None


@dataclass(frozen=True)
class BoundCheckResult:
    applicable: bool
    ok: bool | None = None
    margin: float | None = None


def main_bound_check(
    graph: CayleyGraph,
    tol: float = DEFAULT_TOL,
    *,
    h: Fraction | None = None,
    summary: SpectralSummary | None = None,
    bipartite: bool | None = None,
    max_exact: int = MAX_EXACT_DEFAULT,
) -> BoundCheckResult:
    """lambda_n <= 2 - h^4 / (2^9 d^6 (d+1)^2), vacuous for bipartite graphs."""
    if summary is None:
        summary = spectrum(graph)
    if bipartite is None:
        bipartite = is_bipartite_spectral(summary, tol)
    if bipartite:
        return BoundCheckResult(applicable=False)
    if h is None:
        h = vertex_cheeger(graph, max_exact=max_exact).value
    shift = Fraction(h) ** 4 / main_bound_constant(graph.d)
    margin = (2.0 - float(shift)) - summary.lambda_max
    return BoundCheckResult(applicable=True, ok=margin >= -tol, margin=margin)


@dataclass(frozen=True)
class IntervalCheckResult:
    applicable: bool
    ok: bool | None = None
    lower_margin: float | None = None
    upper_margin: float | None = None


def eigenvalue_interval_check(
    graph: CayleyGraph,
    tol: float = DEFAULT_TOL,
    *,
    h: Fraction | None = None,
    summary: SpectralSummary | None = None,
    bipartite: bool | None = None,
    max_exact: int = MAX_EXACT_DEFAULT,
) -> IntervalCheckResult:
    """Every nontrivial adjacency eigenvalue lies in
    [-1 + h^4/(2^9 d^6 (d+1)^2), 1 - h^2/(2 d^2)], vacuous for bipartite
    graphs. Nontrivial means all but the single top eigenvalue."""
    if summary is None:
        summary = spectrum(graph)
    if bipartite is None:
        bipartite = is_bipartite_spectral(summary, tol)
    if bipartite:
        return IntervalCheckResult(applicable=False)
    if summary.n < 2:
        return IntervalCheckResult(applicable=False)
    if h is None:
        h = vertex_cheeger(graph, max_exact=max_exact).value
    h = Fraction(h)
    d = graph.d
    lower_end = -1.0 + float(h**4 / main_bound_constant(d))
    upper_end = 1.0 - float(h**2 / (2 * d * d))
    lower_margin = summary.t[0] - lower_end
    upper_margin = upper_end - summary.t[-2]
    ok = lower_margin >= -tol and upper_margin >= -tol
    return IntervalCheckResult(
        applicable=True,
        ok=ok,
        lower_margin=lower_margin,
        upper_margin=upper_margin,
    )


def tightness_ratio(
    graph: CayleyGraph,
    *,
    h: Fraction | None = None,
    summary: SpectralSummary | None = None,
    max_exact: int = MAX_EXACT_DEFAULT,
) -> float:
    """Slack factor (2 - lambda_n) / (h^4 / (2^9 d^6 (d+1)^2)); at least 1
    whenever the main bound holds. Undefined for bipartite graphs."""
    if summary is None:
        summary = spectrum(graph)
    if is_bipartite_spectral(summary):
        raise ValueError("tightness ratio is undefined for bipartite graphs")
    if h is None:
        h = vertex_cheeger(graph, max_exact=max_exact).value
    h = Fraction(h)
    if h == 0:
        raise ValueError("tightness ratio needs a positive expansion constant")
    shift = float(h**4 / main_bound_constant(graph.d))
    return (2.0 - summary.lambda_max) / shift


@dataclass(frozen=True)
class VerificationReport:
    group_label: str
    gens: tuple[int, ...]
    n: int
    d: int
    h: Fraction | None
    edge_h: Fraction | None
    dual_h: Fraction | None
    summary: SpectralSummary
    bipartite_spectral: bool
    bipartite_structural: bool | None
    checks: tuple[CheckRow, ...]
    trace: ProofTrace | None
    tightness: float | None

    @property
    def failed(self) -> tuple[CheckRow, ...]:
        return tuple(row for row in self.checks if row.status == "fail")

    @property
    def all_pass(self) -> bool:
        return not self.failed


def _cap_reason(exc: CapExceededError) -> str:
    return exc.reason


def full_report(
    graph: CayleyGraph,
    *,
    tol: float = DEFAULT_TOL,
    max_exact: int = MAX_EXACT_DEFAULT,
    max_dual: int = MAX_DUAL_DEFAULT,
    zeta: Fraction | float | None = None,
    exhaustive_limit: int = 12,
) -> VerificationReport:
    """Run every applicable check; failures are recorded, never raised."""
    group = graph.group
    n = graph.n
    summary = spectrum(graph)
    connected = is_connected(summary, tol)

    h: Fraction | None = None
    h_reason: str | None = None
    edge_h: Fraction | None = None
    dual_h: Fraction | None = None
    dual_reason: str | None = None
    try:
        h = vertex_cheeger(graph, max_exact=max_exact).value
        edge_h = edge_cheeger(graph, max_exact=max_exact).value
    except CapExceededError as exc:
        h_reason = _cap_reason(exc)
    except ValueError as exc:
        h_reason = str(exc)
    try:
        dual_h = dual_cheeger(graph, max_dual=max_dual).value
    except CapExceededError as exc:
        dual_reason = _cap_reason(exc)
    except ValueError as exc:
        dual_reason = str(exc)

    bip_spectral = is_bipartite_spectral(summary, tol)
    structural_cert = None
    structural_reason: str | None = None
    bip_structural: bool | None = None
    try:
        structural_cert = is_bipartite_structural(graph)
        bip_structural = structural_cert is not None
    except CapExceededError as exc:
        structural_reason = _cap_reason(exc)

    bipartite = bip_structural if bip_structural is not None else bip_spectral

    rows: dict[str, CheckRow] = {}

    def put(name: str, status: str, margin: float | None = None,
            reason: str | None = None) -> None:
        rows[name] = CheckRow(name, status, margin, reason)

    def skip_if_blocked(name: str) -> bool:
        """Common skip/not-applicable gating for spectral bound rows."""
        if not connected:
            put(name, "skipped", reason="disconnected")
            return True
        if bipartite:
            put(name, "not_applicable", reason="bipartite")
            return True
        if h is None:
            put(name, "skipped", reason=h_reason)
            return True
        return False

    put("connectivity", "pass" if connected else "fail",
        margin=summary.lambda2 if n > 1 else None)

    if not skip_if_blocked("main_bound"):
        res = main_bound_check(
            graph, tol, h=h, summary=summary, bipartite=False,
            max_exact=max_exact,
        )
        put("main_bound", "pass" if res.ok else "fail", margin=res.margin)

    if not skip_if_blocked("eigenvalue_interval_lower"):
        ires = eigenvalue_interval_check(
            graph, tol, h=h, summary=summary, bipartite=False,
            max_exact=max_exact,
        )
        if not ires.applicable:
            put("eigenvalue_interval_lower", "not_applicable",
                reason="no nontrivial eigenvalues")
            put("eigenvalue_interval_upper", "not_applicable",
                reason="no nontrivial eigenvalues")
        else:
            put("eigenvalue_interval_lower",
                "pass" if ires.lower_margin >= -tol else "fail",
                margin=ires.lower_margin)
            put("eigenvalue_interval_upper",
                "pass" if ires.upper_margin >= -tol else "fail",
                margin=ires.upper_margin)
    else:
        rows["eigenvalue_interval_upper"] = CheckRow(
            "eigenvalue_interval_upper",
            rows["eigenvalue_interval_lower"].status,
            reason=rows["eigenvalue_interval_lower"].reason,
        )

    if h is None:
        put("cheeger_buser_lower", "skipped", reason=h_reason)
        put("cheeger_buser_upper", "skipped", reason=h_reason)
        put("vertex_edge_lower", "skipped", reason=h_reason)
        put("vertex_edge_upper", "skipped", reason=h_reason)
    else:
        cb = cheeger_buser_check(
            graph, tol, edge_h=edge_h, lambda2=summary.lambda2,
            max_exact=max_exact,
        )
        put("cheeger_buser_lower",
            "pass" if cb.lower_margin >= -tol else "fail",
            margin=cb.lower_margin)
        put("cheeger_buser_upper",
            "pass" if cb.upper_margin >= -tol else "fail",
            margin=cb.upper_margin)
        ve_lower = edge_h - Fraction(h, graph.d)
        ve_upper = h - edge_h
        assert vertex_edge_relation_check(
            graph, h=h, edge_h=edge_h, max_exact=max_exact,
        ) == (ve_lower >= 0 and ve_upper >= 0)
        put("vertex_edge_lower",
            "pass" if ve_lower >= 0 else "fail",
            margin=float(ve_lower))
        put("vertex_edge_upper",
            "pass" if ve_upper >= 0 else "fail",
            margin=float(ve_upper))

    if dual_h is None:
        put("dual_cheeger_lower", "skipped", reason=dual_reason)
        put("dual_cheeger_upper", "skipped", reason=dual_reason)
        put("dual_cheeger_equivalence", "skipped", reason=dual_reason)
    else:
        bj = bauer_jost_check(
            graph, tol, dual_h=dual_h, lambda_n=summary.lambda_max,
            max_dual=max_dual,
        )
        put("dual_cheeger_lower",
            "pass" if bj.lower_margin >= -tol else "fail",
            margin=bj.lower_margin)
        put("dual_cheeger_upper",
            "pass" if bj.upper_margin >= -tol else "fail",
            margin=bj.upper_margin)
        if not connected:
            put("dual_cheeger_equivalence", "skipped", reason="disconnected")
        else:
            put("dual_cheeger_equivalence",
                "pass" if bj.equivalence_ok else "fail")

    if h is None:
        put("large_set_expansion", "skipped", reason=h_reason)
    elif not connected:
        put("large_set_expansion", "skipped", reason="disconnected")
    else:
        exp = large_set_expansion_check(
            graph, h, exhaustive_limit=exhaustive_limit, max_exact=max_exact,
        )
        worst = min(exp.main_worst.slack, exp.internal_worst.slack)
        put("large_set_expansion",
            "pass" if exp.ok else "fail",
            margin=float(worst),
            reason=None if exp.exhaustive else f"sampled:{exp.tested}")

    if not connected:
        put("bipartite_equivalence", "skipped", reason="disconnected")
    elif structural_reason is not None:
        put("bipartite_equivalence", "skipped", reason=structural_reason)
    else:
        eq = proposition_equivalence_check(graph, tol, summary=summary)
        put("bipartite_equivalence", "pass" if eq.ok else "fail")

    trace: ProofTrace | None = None
    if not connected:
        put("proof_pipeline", "skipped", reason="disconnected")
    elif h is None:
        put("proof_pipeline", "skipped", reason=h_reason)
    else:
        try:
            trace = run_pipeline(graph, zeta, max_exact=max_exact)
        except CapExceededError as exc:
            put("proof_pipeline", "skipped", reason=_cap_reason(exc))
        else:
            if trace.hypothesis_met:
                ok = trace.succeeded
            else:
                ok = bip_structural is not True
            if ok:
                put("proof_pipeline", "pass",
                    reason=None if trace.hypothesis_met
                    else "hypothesis not met")
            elif trace.out_of_regime:
                # A forced zeta above the ceiling voids the guarantee, so a
                # failed run is neither a pass nor a counterexample.
                put("proof_pipeline", "not_applicable",
                    reason="out_of_regime")
            else:
                put("proof_pipeline", "fail")

    tightness: float | None = None
    if not skip_if_blocked("tightness_ratio"):
        tightness = tightness_ratio(
            graph, h=h, summary=summary, max_exact=max_exact,
        )
        main_status = rows["main_bound"].status
        put("tightness_ratio", main_status, margin=tightness - 1.0)

    checks = tuple(rows[name] for name in CHECK_NAMES)
    return VerificationReport(
        group_label=group.name,
        gens=graph.gens.elements,
        n=n,
        d=graph.d,
        h=h,
        edge_h=edge_h,
        dual_h=dual_h,
        summary=summary,
        bipartite_spectral=bip_spectral,
        bipartite_structural=bip_structural,
        checks=checks,
        trace=trace,
        tightness=tightness,
    )


# ---------------------------------------------------------------------------
# Serialisation


def _fraction_dict(value: Fraction | None) -> dict | None:
    if value is None:
        return None
    return {"num": value.numerator, "den": value.denominator}


def trace_json_dict(trace: ProofTrace | None) -> dict | None:
    if trace is None:
        return None
    p = trace.params
    c = trace.candidate
    out: dict = {
        "eps": _fraction_dict(p.eps),
        "zeta": p.zeta,
        "beta": p.beta,
        "z": p.z,
        "r": p.r,
        "candidate_regime": p.candidate_regime,
        "subgroup_regime": p.subgroup_regime,
        "threshold_regime": p.threshold_regime,
        "out_of_regime": trace.out_of_regime,
        "hypothesis_met": c.hypothesis_met,
        "t_min": c.t_min,
        "gap": c.gap,
        "candidate": None,
        "properties": None,
        "dichotomy": None,
        "agreement_bounds_ok": None,
        "subgroup": None,
        "final": None,
        "failure": trace.failure,
        "succeeded": trace.succeeded,
    }
    if c.hypothesis_met and c.a_mask is not None:
        out["candidate"] = {
            "a_set": list(c.a_set),
            "identified_excess": c.identified_excess,
            "weighted_excess": c.weighted_excess,
            "ratio_ok": c.ratio_ok,
        }
    if trace.properties is not None:
        pr = trace.properties
        out["properties"] = {
            "size_ok": pr.size_ok,
            "overlap_ok": pr.overlap_ok,
            "translate_ok": pr.translate_ok,
        }
    if trace.dichotomy is not None:
        di = trace.dichotomy
        out["dichotomy"] = {
            "valid": di.valid,
            "case_low_count": len(di.case_low),
            "case_high_count": len(di.case_high),
            "violations": list(di.violations),
        }
    if trace.agreement_bounds is not None:
        out["agreement_bounds_ok"] = all(
            rep.all_ok for rep in trace.agreement_bounds
        )
    if trace.subgroup is not None:
        sub = trace.subgroup
        out["subgroup"] = {
            "elements": list(sub.h_set),
            "index": sub.index,
            "is_index_two": sub.is_index_two,
            "triangle_ok": sub.triangle_ok,
        }
    if trace.final is not None:
        fin = trace.final
        out["final"] = {
            "s_cap_h": list(fin.s_cap_h),
            "disjoint": fin.disjoint,
            "structural_match": fin.structural_match,
            "conflicts": [
                {
                    "t": rec.t,
                    "count": rec.count,
                    "upper_ok": rec.upper_ok,
                    "lower_ok": rec.lower_ok,
                }
                for rec in fin.conflicts
            ],
            "r_exceeds_ratio": fin.r_exceeds_ratio,
        }
    return out


def report_json_dict(report: VerificationReport) -> dict:
    return {
        "schema_version": 1,
        "group": report.group_label,
        "gens": list(report.gens),
        "n": report.n,
        "d": report.d,
        "h": _fraction_dict(report.h),
        "edge_h": _fraction_dict(report.edge_h),
        "dual_h": _fraction_dict(report.dual_h),
        "spectrum": {
            "t": list(report.summary.t),
            "lambda": list(report.summary.lam),
        },
        "bipartite": {
            "spectral": report.bipartite_spectral,
            "structural": report.bipartite_structural,
        },
        "checks": [
            {
                "name": row.name,
                "status": row.status,
                "margin": row.margin,
                "reason": row.reason,
            }
            for row in report.checks
        ],
        "proof_trace": trace_json_dict(report.trace),
    }


def report_to_json(report: VerificationReport) -> str:
    return json.dumps(report_json_dict(report), indent=2)


def _format_fraction(value: Fraction | None) -> str:
    if value is None:
        return ""
    return str(value)


def report_csv_row(report: VerificationReport) -> str:
    bipartite = (
        report.bipartite_structural
        if report.bipartite_structural is not None
        else report.bipartite_spectral
    )
    main_margin = ""
    for row in report.checks:
        if row.name == "main_bound" and row.margin is not None:
            main_margin = repr(row.margin)
    tightness = "" if report.tightness is None else repr(report.tightness)
    graph_label = f"{report.group_label} gens={','.join(map(str, report.gens))}"
    fields = (
        graph_label,
        str(report.n),
        str(report.d),
        _format_fraction(report.h),
        _format_fraction(report.edge_h),
        repr(report.summary.lambda2) if report.n > 1 else "",
        repr(report.summary.lambda_max),
        "true" if bipartite else "false",
        main_margin,
        tightness,
    )
    buf = io.StringIO()
    csv.writer(buf, lineterminator="").writerow(fields)
    return buf.getvalue()


def report_to_csv(report: VerificationReport) -> str:
    return CSV_HEADER + "\n" + report_csv_row(report) + "\n"


def report_to_text(report: VerificationReport) -> str:
    lines = [
        f"graph: {report.group_label} gens={','.join(map(str, report.gens))}",
        f"n = {report.n}, d = {report.d}",
        f"h = {report.h}, edge_h = {report.edge_h}, dual_h = {report.dual_h}",
        f"lambda_2 = {report.summary.lambda2 if report.n > 1 else 'n/a'}, "
        f"lambda_n = {report.summary.lambda_max}",
        f"bipartite: spectral = {report.bipartite_spectral}, "
        f"structural = {report.bipartite_structural}",
    ]
    if report.tightness is not None:
        lines.append(f"tightness ratio = {report.tightness:.6g}")
    lines.append("checks:")
    for row in report.checks:
        margin = "" if row.margin is None else f"  margin = {row.margin:.6g}"
        reason = "" if row.reason is None else f"  ({row.reason})"
        lines.append(f"  {row.name:28s} {row.status}{margin}{reason}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Sweeps


@dataclass(frozen=True)
class SweepItem:
    spec: str
    report: VerificationReport | None = None
    error: str | None = None


def parse_sweep_spec(spec: str) -> tuple[str, str | None]:
    """Split one sweep item into group spec and generator spec. The generator
    part follows the first ' gens=' marker; absent means default generators."""
    spec = spec.strip()
    marker = " gens="
    pos = spec.find(marker)
    if pos < 0:
        return spec, None
    return spec[:pos].strip(), spec[pos + len(marker):].strip()


def build_graph(group_spec: str, gens_spec: str | None) -> CayleyGraph:
    spec = parse_group_spec(group_spec)
    group = spec.build()
    if gens_spec is None or gens_spec == "auto":
        gens = generating_set(group, default_generators(spec, group))
    else:
        gens = parse_generators(group, gens_spec)
    return build(group, gens)


def _sweep_worker(args: tuple[str, str | None, float, int, int]) -> SweepItem:
    item_spec, gens_spec, tol, max_exact, max_dual = args
    label = item_spec if gens_spec is None else f"{item_spec} gens={gens_spec}"
    try:
        graph = build_graph(item_spec, gens_spec)
        report = full_report(
            graph, tol=tol, max_exact=max_exact, max_dual=max_dual,
        )
        return SweepItem(spec=label, report=report)
    except (CayleyGapError, ValueError) as exc:
        return SweepItem(spec=label, error=str(exc))


def sweep(
    specs: list[str],
    *,
    tol: float = DEFAULT_TOL,
    max_exact: int = MAX_EXACT_DEFAULT,
    max_dual: int = MAX_DUAL_DEFAULT,
    workers: int = 1,
) -> list[SweepItem]:
    """One report per (group, generators) item, in input order. Items that
    fail to build are recorded as errors and the sweep continues."""
    tasks: list[tuple[str, str | None, float, int, int]] = []
    for spec in specs:
        group_part, gens_part = parse_sweep_spec(spec)
        try:
            expanded = expand_group_specs(group_part)
        except (CayleyGapError, ValueError):
            # Unparseable spec: hand it to the worker so the error is
            # recorded as a per-item result and the sweep continues.
            tasks.append((group_part, gens_part, tol, max_exact, max_dual))
            continue
        for single in expanded:
            tasks.append((single.label(), gens_part, tol, max_exact, max_dual))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_worker, tasks))
    return [_sweep_worker(task) for task in tasks]


def sweep_to_json(items: list[SweepItem]) -> str:
    payload = {
        "schema_version": 1,
        "reports": [
            report_json_dict(item.report)
            if item.report is not None
            else {"schema_version": 1, "group": item.spec, "error": item.error}
            for item in items
        ],
    }
    return json.dumps(payload, indent=2)


def sweep_to_csv(items: list[SweepItem]) -> str:
    lines = [CSV_HEADER]
    for item in items:
        if item.report is not None:
            lines.append(report_csv_row(item.report))
    return "\n".join(lines) + "\n"


def sweep_to_text(items: list[SweepItem]) -> str:
    blocks = []
    for item in items:
        if item.report is not None:
            blocks.append(report_to_text(item.report))
        else:
            blocks.append(f"graph: {item.spec}\n  error: {item.error}\n")
    return "\n".join(blocks)
