"""Constructive extraction of a bipartition from a near-bipartite spectrum.

When the bottom adjacency eigenvalue of a connected Cayley graph lies within
zeta of -1, the two-step product multiset S' = S.S concentrates on a half-set
A whose right-translate overlaps are sharply bimodal. Thresholding that
profile yields H = {g : |A cap Ag| >= r|A|}, which the pipeline certifies to
be an index-2 subgroup disjoint from S, i.e. an explicit bipartition. Every
stage re-verifies its counting bound with exact set arithmetic against the
derived constants; nothing is assumed from theory.

Constants, for expansion eps and degree d:

    beta = d^2 sqrt(2 zeta (2 - zeta))      boundary-ratio bound for A
    z    = (d beta / eps^2)(eps + d + 2)    overlap dichotomy width
    r    = 1 - z                            subgroup threshold

The admissible-zeta ceilings are eps^2/(4 d^4) for the half-set stage and
eps^4/(2^9 d^6 (d+1)^2) for the full subgroup extraction; a zeta above the
latter runs in exploratory "forced" mode and the trace says so.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .cayley import (
    CayleyGraph,
    MultisetGenerators,
    left_translate,
    mask_members,
    mask_of,
    multiset_image_excess,
    right_translate,
    set_image,
    square_multiset,
)
from .cheeger import MAX_EXACT_DEFAULT, connected_components, vertex_cheeger
from .errors import CapExceededError
from .spectral import SpectralSummary, spectrum
from .subgroups import index2_subgroups

_SAMPLE_SEED = 0x5E7C0DE


def zeta_max(eps: Fraction | int, d: int) -> Fraction:
    """Largest zeta for which the full subgroup extraction is guaranteed."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if d < 1:
        raise ValueError("degree must be at least 1")
    return eps**4 / (2**9 * d**6 * (d + 1) ** 2)


def zeta_max_candidate(eps: Fraction | int, d: int) -> Fraction:
    """Largest zeta for which the half-set stage bounds are guaranteed."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if d < 1:
        raise ValueError("degree must be at least 1")
    return eps**2 / (4 * d**4)


def beta_of_zeta(zeta: Fraction | float, d: int) -> float:
    """Boundary-ratio constant beta = d^2 sqrt(2 zeta (2 - zeta))."""
    z = float(zeta)
    if not 0.0 < z <= 2.0:
        raise ValueError(f"zeta must lie in (0, 2], got {zeta!r}")
    if d < 1:
        raise ValueError("degree must be at least 1")
    return d * d * math.sqrt(2.0 * z * (2.0 - z))


@dataclass(frozen=True)
class ProofParameters:
    eps: Fraction
    d: int
    zeta: float
    beta: float
    z: float
    r: float
    candidate_regime: bool   # zeta <= eps^2 / (4 d^4)
    subgroup_regime: bool    # zeta <= eps^4 / (2^9 d^6 (d+1)^2)
    threshold_regime: bool   # beta <= eps^2 / (8 sqrt2 d (d+1))

    @property
    def forced(self) -> bool:
        return not self.subgroup_regime


def make_parameters(eps: Fraction, d: int, zeta: Fraction | float) -> ProofParameters:
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    beta = beta_of_zeta(zeta, d)
    eps_f = float(eps)
    z = (d * beta / (eps_f * eps_f)) * (eps_f + d + 2)
    zeta_exact = Fraction(zeta)
    return ProofParameters(
        eps=eps,
        d=d,
        zeta=float(zeta),
        beta=beta,
        z=z,
        r=1.0 - z,
        candidate_regime=zeta_exact <= zeta_max_candidate(eps, d),
        subgroup_regime=zeta_exact <= zeta_max(eps, d),
        threshold_regime=beta <= eps_f * eps_f / (8 * math.sqrt(2) * d * (d + 1)),
    )


# ---------------------------------------------------------------------------
# Candidate half-set from the two-step multiset


def _support_adjacency(
    ms: MultisetGenerators, n: int
) -> tuple[list[int], list[tuple[tuple[int, int], ...]]]:
    """Neighbor masks and weighted (neighbor, multiplicity) lists of the
    support graph of S'. Loops (the identity, present with multiplicity >= d)
    are kept in the masks but carry no crossing weight."""
    mult = ms.group.mult
    masks = [0] * n
    pairs: list[tuple[tuple[int, int], ...]] = []
    support = sorted(ms.counts)
    for x in range(n):
        acc = 0
        lst = []
        for g in support:
            y = mult[g][x]
            acc |= 1 << y
            if y != x:
                lst.append((y, ms.counts[g]))
        masks[x] = acc
        pairs.append(tuple(lst))
    return masks, pairs


def _weighted_edge_search(
    pairs: list[tuple[tuple[int, int], ...]], n: int
) -> tuple[int, int, int]:
    """Minimise the weighted crossing sum over 1 <= |A| <= n//2.

    Same enumeration order, pruning logic, and (ratio, size, mask) tie-break
    as the unweighted engine, with popcounts replaced by weight sums.
    """
    kcap = n // 2
    total = sum(w for lst in pairs for _, w in lst)
    best_num, best_size, best_mask = total + 1, 1, 0

    def cross(u: int, mask: int) -> int:
        return sum(w for y, w in pairs[u] if (mask >> y) & 1)

    def extend(start: int, mask: int, size: int, eb: int, pe: int) -> None:
        nonlocal best_num, best_size, best_mask
        bn, bs = best_num, best_size
        pe_run = pe
        for u in range(start, n):
            kmax_loop = size + (n - u)
            if kmax_loop > kcap:
                kmax_loop = kcap
            if pe_run * bs > bn * kmax_loop:
                break
            mask2 = mask | (1 << u)
            inner = cross(u, mask)
            outer = sum(w for y, w in pairs[u] if not (mask2 >> y) & 1)
            eb2 = eb - inner + outer
            size2 = size + 1
            lhs = eb2 * bs
            rhs = bn * size2
            if lhs < rhs or (
                lhs == rhs
                and (size2 < bs or (size2 == bs and mask2 < best_mask))
            ):
                best_num, best_size, best_mask = eb2, size2, mask2
                bn, bs = eb2, size2
            if size2 < kcap and u + 1 < n:
                kmax = size2 + (n - u - 1)
                if kmax > kcap:
                    kmax = kcap
                below_u = (1 << u) - 1
                pe2 = pe_run + sum(
                    w
                    for y, w in pairs[u]
                    if (below_u >> y) & 1 and not (mask >> y) & 1
                )
                if pe2 * bs <= bn * kmax:
                    extend(u + 1, mask2, size2, eb2, pe2)
                    bn, bs = best_num, best_size
            pe_run += inner
        return

    extend(0, 0, 0, 0, 0)
    return best_num, best_size, best_mask


@dataclass(frozen=True)
class CandidateReport:
    hypothesis_met: bool
    t_min: float
    gap: float                        # 1 + t_min, distance of t_min above -1
    a_mask: int | None = None
    a_set: tuple[int, ...] = ()
    identified_excess: int | None = None
    weighted_excess: int | None = None
    ratio_ok: bool | None = None      # weighted excess < beta |A|, strict


def find_candidate_set(
    graph: CayleyGraph,
    params: ProofParameters,
    *,
    summary: SpectralSummary | None = None,
    max_exact: int = MAX_EXACT_DEFAULT,
) -> CandidateReport:
    """Half-set minimising the weighted crossing ratio of the S'-support graph.

    The weighted minimiser dominates the spectral existence argument for the
    boundary bound, so when the hypothesis holds in regime the strict ratio
    check is expected to pass; it is verified, never assumed.
    """
    n = graph.n
    if n > max_exact:
        raise CapExceededError("max_exact", max_exact, n)
    if summary is None:
        summary = spectrum(graph)
    t_min = summary.t_min
    gap = 1.0 + t_min
    if not t_min < -1.0 + params.zeta:
        return CandidateReport(False, t_min, gap)
    ms = square_multiset(graph.gens, graph.group)
    masks, pairs = _support_adjacency(ms, n)
    comps = connected_components(masks, n)
    if len(comps) > 1:
        # Components are cosets of the subgroup generated by the support, so
        # each single component is admissible and has crossing weight zero.
        a_mask = min(comps, key=lambda c: (c.bit_count(), c))
        size = a_mask.bit_count()
        if 2 * size > n:
            raise AssertionError("component larger than half the graph")
    else:
        _, size, a_mask = _weighted_edge_search(pairs, n)
    excess = multiset_image_excess(ms, a_mask)
    ratio_ok = excess.weighted < params.beta * size
    return CandidateReport(
        True,
        t_min,
        gap,
        a_mask=a_mask,
        a_set=mask_members(a_mask),
        identified_excess=excess.identified,
        weighted_excess=excess.weighted,
        ratio_ok=ratio_ok,
    )


# ---------------------------------------------------------------------------
# Half-set structure checks


@dataclass(frozen=True)
class SetPropertyReport:
    size_ok: bool
    size_lower: float                # n / (2 + beta + d beta / eps)
    size: int
    overlap_ok: bool                 # |SA cap A| <= (beta/eps)|A|
    overlap_count: int
    overlap_threshold: float
    translate_ok: bool               # all s,g: |sAg delta (Ag)^c| <= threshold
    translate_worst: int
    translate_worst_pair: tuple[int, int] | None
    translate_threshold: float       # beta (1 + d/eps + 2/eps) |A|

    @property
    def all_ok(self) -> bool:
        return self.size_ok and self.overlap_ok and self.translate_ok


def set_property_check(
    graph: CayleyGraph, a_mask: int, params: ProofParameters
) -> SetPropertyReport:
    """The three structural properties of the candidate half-set."""
    if a_mask == 0:
        raise ValueError("candidate set must be nonempty")
    group = graph.group
    n = graph.n
    d = graph.d
    full = graph.full_mask
    eps_f = float(params.eps)
    beta = params.beta
    size = a_mask.bit_count()

    size_lower = n / (2 + beta + d * beta / eps_f)
    size_ok = size >= size_lower and 2 * size <= n

    overlap = (set_image(graph, a_mask) & a_mask).bit_count()
    overlap_threshold = (beta / eps_f) * size
    overlap_ok = overlap <= overlap_threshold

    translate_threshold = beta * (1 + d / eps_f + 2 / eps_f) * size
    worst = -1
    worst_pair: tuple[int, int] | None = None
    for g in range(n):
        ag = right_translate(group, a_mask, g)
        target = ~ag & full
        for s in graph.gens.elements:
            sym = (left_translate(group, ag, s) ^ target).bit_count()
            if sym > worst:
                worst = sym
                worst_pair = (s, g)
    translate_ok = worst <= translate_threshold

    return SetPropertyReport(
        size_ok=size_ok,
        size_lower=size_lower,
        size=size,
        overlap_ok=overlap_ok,
        overlap_count=overlap,
        overlap_threshold=overlap_threshold,
        translate_ok=translate_ok,
        translate_worst=worst,
        translate_worst_pair=worst_pair,
        translate_threshold=translate_threshold,
    )


def translate_profile(graph: CayleyGraph, a_mask: int) -> tuple[int, ...]:
    """|A cap Ag| for every g, indexed by g; entry at the identity is |A|."""
    group = graph.group
    return tuple(
        (a_mask & right_translate(group, a_mask, g)).bit_count()
        for g in range(graph.n)
    )


@dataclass(frozen=True)
class DichotomyReport:
    valid: bool
    z: float
    low_threshold: float             # z |A|
    high_threshold: float            # (1 - z)|A|
    case_low: tuple[int, ...]        # g with overlap <= z|A|
    case_high: tuple[int, ...]       # g with overlap >= (1-z)|A|
    violations: tuple[int, ...]      # g strictly between the thresholds


def dichotomy_check(
    graph: CayleyGraph,
    a_mask: int,
    params: ProofParameters,
    *,
    profile: tuple[int, ...] | None = None,
) -> DichotomyReport:
    """Classify every g by its overlap |A cap Ag|: at most z|A| or at least
    (1-z)|A|. Meaningless when z >= 1/2, which is rejected."""
    if params.z >= 0.5:
        raise ValueError(
            f"overlap dichotomy needs z < 1/2, got z = {params.z:.6g}"
        )
    if profile is None:
        profile = translate_profile(graph, a_mask)
    size = a_mask.bit_count()
    low = params.z * size
    high = (1.0 - params.z) * size
    case_low, case_high, violations = [], [], []
    for g, count in enumerate(profile):
        if count <= low:
            case_low.append(g)
        elif count >= high:
            case_high.append(g)
        else:
            violations.append(g)
    return DichotomyReport(
        valid=not violations,
        z=params.z,
        low_threshold=low,
        high_threshold=high,
        case_low=tuple(case_low),
        case_high=tuple(case_high),
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class AgreementBoundsReport:
    """Bounds on B = (A cap Ag) | (A | Ag)^c, the set where membership in A
    and Ag agrees; its complement is the symmetric difference A delta Ag."""

    g: int
    b_mask: int
    complement_ok: bool              # B^c == A delta Ag (exact identity)
    sb_delta: int                    # |SB delta B|
    sbc_delta: int                   # |SB^c delta B^c|
    delta_threshold: float           # 2 d beta (1 + d/eps + 2/eps) |A|
    delta_ok: bool
    branch: str                      # "small" if |B| <= n/2 else "large"
    size_count: int                  # |B| or |G \ B| per branch
    size_threshold: float            # 2 z |A|
    size_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.complement_ok and self.delta_ok and self.size_ok


def agreement_set_bounds_check(
    graph: CayleyGraph, a_mask: int, g: int, params: ProofParameters
) -> AgreementBoundsReport:
    group = graph.group
    n = graph.n
    full = graph.full_mask
    eps_f = float(params.eps)
    beta = params.beta
    d = graph.d
    size = a_mask.bit_count()

    ag = right_translate(group, a_mask, g)
    b_mask = (a_mask & ag) | (~(a_mask | ag) & full)
    bc_mask = ~b_mask & full
    complement_ok = bc_mask == a_mask ^ ag

    def delta(mask: int) -> int:
        return (set_image(graph, mask) ^ mask).bit_count()

    sb_delta = delta(b_mask)
    sbc_delta = delta(bc_mask)
    delta_threshold = 2 * d * beta * (1 + d / eps_f + 2 / eps_f) * size
    delta_ok = sb_delta <= delta_threshold and sbc_delta <= delta_threshold

    b_size = b_mask.bit_count()
    size_threshold = 2 * params.z * size
    if 2 * b_size <= n:
        branch = "small"
        size_count = b_size
    else:
        branch = "large"
        size_count = n - b_size
    size_ok = size_count <= size_threshold

    return AgreementBoundsReport(
        g=g,
        b_mask=b_mask,
        complement_ok=complement_ok,
        sb_delta=sb_delta,
        sbc_delta=sbc_delta,
        delta_threshold=delta_threshold,
        delta_ok=delta_ok,
        branch=branch,
        size_count=size_count,
        size_threshold=size_threshold,
        size_ok=size_ok,
    )


# ---------------------------------------------------------------------------
# Subgroup extraction


@dataclass(frozen=True)
class SubgroupExtraction:
    h_mask: int
    h_set: tuple[int, ...]
    threshold: float                 # r |A|
    identity_ok: bool
    symmetric_ok: bool
    symmetric_witness: int | None
    closed: bool
    closure_witness: tuple[int, int] | None
    large_ok: bool                   # 3|H| > n
    proper_ok: bool                  # H != G
    index: int | None                # n / |H| when H is a genuine subgroup
    triangle_ok: bool                # g,h in H: |A cap A(gh)| >= (2r-1)|A|
    triangle_worst: tuple[int, int] | None

    @property
    def is_index_two(self) -> bool:
        return (
            self.identity_ok
            and self.symmetric_ok
            and self.closed
            and self.large_ok
            and self.proper_ok
            and self.index == 2
        )


def construct_subgroup(
    graph: CayleyGraph,
    a_mask: int,
    params: ProofParameters,
    *,
    profile: tuple[int, ...] | None = None,
) -> SubgroupExtraction:
    """Threshold the overlap profile at r|A| and verify the result is an
    index-2 subgroup: identity, inverses, closure, |H| > n/3, H != G."""
    group = graph.group
    n = graph.n
    if profile is None:
        profile = translate_profile(graph, a_mask)
    size = a_mask.bit_count()
    threshold = params.r * size
    members = [g for g in range(n) if profile[g] >= threshold]
    h_mask = mask_of(members)

    identity_ok = bool(h_mask & 1)
    symmetric_ok = True
    symmetric_witness = None
    for g in members:
        if not (h_mask >> group.inv[g]) & 1:
            symmetric_ok = False
            symmetric_witness = g
            break
    closed = True
    closure_witness = None
    for g in members:
        row = group.mult[g]
        for h in members:
            if not (h_mask >> row[h]) & 1:
                closed = False
                closure_witness = (g, h)
                break
        if not closed:
            break
    large_ok = 3 * len(members) > n
    proper_ok = h_mask != graph.full_mask
    index = None
    if identity_ok and symmetric_ok and closed and members and n % len(members) == 0:
        index = n // len(members)

    triangle_threshold = (2 * params.r - 1) * size
    triangle_ok = True
    triangle_worst = None
    worst_count = None
    for g in members:
        row = group.mult[g]
        for h in members:
            count = profile[row[h]]
            if count < triangle_threshold:
                triangle_ok = False
            if worst_count is None or count < worst_count:
                worst_count = count
                triangle_worst = (g, h)
    return SubgroupExtraction(
        h_mask=h_mask,
        h_set=tuple(members),
        threshold=threshold,
        identity_ok=identity_ok,
        symmetric_ok=symmetric_ok,
        symmetric_witness=symmetric_witness,
        closed=closed,
        closure_witness=closure_witness,
        large_ok=large_ok,
        proper_ok=proper_ok,
        index=index,
        triangle_ok=triangle_ok,
        triangle_worst=triangle_worst,
    )


@dataclass(frozen=True)
class ConflictRecord:
    """What both counting claims would say about a generator inside H."""

    t: int
    count: int                       # |tA cap A| (left translate)
    upper_ok: bool                   # count <= (beta/eps)|A|
    lower_ok: bool                   # count >= r|A|


@dataclass(frozen=True)
class FinalReport:
    s_cap_h: tuple[int, ...]
    disjoint: bool
    structural_match: bool | None    # H equals a structural index-2 certificate
    conflicts: tuple[ConflictRecord, ...]
    r_value: float
    beta_over_eps: float
    r_exceeds_ratio: bool            # r > beta/eps, the numeric impossibility


def disjointness_check(
    graph: CayleyGraph,
    h_mask: int,
    a_mask: int,
    params: ProofParameters,
) -> FinalReport:
    """S cap H decides the outcome: empty means the graph is bipartite with
    parts H and G \\ H (cross-checked against the structural enumeration);
    a generator t inside H would have to satisfy two incompatible counts on
    |tA cap A|, and the report records which one fails."""
    group = graph.group
    eps_f = float(params.eps)
    size = a_mask.bit_count()
    s_cap_h = tuple(s for s in graph.gens.elements if (h_mask >> s) & 1)
    disjoint = not s_cap_h
    structural_match: bool | None = None
    if disjoint:
        h_set = mask_members(h_mask)
        structural_match = any(
            cert.elements == h_set
            and not set(graph.gens.elements).intersection(cert.elements)
            for cert in index2_subgroups(group)
        )
    conflicts = []
    for t in s_cap_h:
        count = (left_translate(group, a_mask, t) & a_mask).bit_count()
        conflicts.append(
            ConflictRecord(
                t=t,
                count=count,
                upper_ok=count <= (params.beta / eps_f) * size,
                lower_ok=count >= params.r * size,
            )
        )
    beta_over_eps = params.beta / eps_f
    return FinalReport(
        s_cap_h=s_cap_h,
        disjoint=disjoint,
        structural_match=structural_match,
        conflicts=tuple(conflicts),
        r_value=params.r,
        beta_over_eps=beta_over_eps,
        r_exceeds_ratio=params.r > beta_over_eps,
    )


# ---------------------------------------------------------------------------
# Large-set expansion check


@dataclass(frozen=True)
class ExpansionWitness:
    a_set: tuple[int, ...]
    slack: int                       # left side minus right side, integers


@dataclass(frozen=True)
class LargeSetExpansionReport:
    ok: bool
    eps: Fraction
    exhaustive: bool
    tested: int
    main_ok: bool                    # d q |SA\A| >= p |G\A| for 2|A| >= n
    main_worst: ExpansionWitness | None
    internal_ok: bool                # d |SA\A| >= |SA^c \ A^c| for all A
    internal_worst: ExpansionWitness | None


def large_set_expansion_check(
    graph: CayleyGraph,
    eps: Fraction | None = None,
    *,
    exhaustive_limit: int = 12,
    samples: int = 10_000,
    max_exact: int = MAX_EXACT_DEFAULT,
) -> LargeSetExpansionReport:
    """Check |SA \\ A| >= (eps/d)|G \\ A| on every set of at least half the
    vertices, plus the sidedness step d|SA \\ A| >= |SA^c \\ A^c| on all sets.

    Exhaustive over all 2^n subsets for n <= exhaustive_limit, otherwise a
    seeded uniform sample of at least `samples` subsets. All comparisons are
    cross-multiplied integers.
    """
    n = graph.n
    full = graph.full_mask
    d = graph.d
    if eps is None:
        eps = vertex_cheeger(graph, max_exact=max_exact).value
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    h = vertex_cheeger(graph, max_exact=max_exact).value
    if eps > h:
        raise ValueError(
            f"eps = {eps} exceeds the exact expansion constant h = {h}"
        )
    p, q = eps.numerator, eps.denominator

    exhaustive = n <= exhaustive_limit
    if exhaustive:
        candidates = range(1 << n)
        tested = 1 << n
    else:
        rng = random.Random(_SAMPLE_SEED)
        tested = max(samples, 10_000)
        candidates = (rng.getrandbits(n) for _ in range(tested))

    main_ok = True
    internal_ok = True
    main_worst: tuple[int, int] | None = None      # (slack, mask)
    internal_worst: tuple[int, int] | None = None
    for mask in candidates:
        comp = ~mask & full
        exc = (set_image(graph, mask) & comp).bit_count() if mask else 0
        exc_c = (set_image(graph, comp) & mask).bit_count() if comp else 0
        islack = d * exc - exc_c
        if islack < 0:
            internal_ok = False
        if internal_worst is None or islack < internal_worst[0]:
            internal_worst = (islack, mask)
        size = mask.bit_count()
        if 2 * size >= n:
            mslack = d * q * exc - p * (n - size)
            if mslack < 0:
                main_ok = False
            if main_worst is None or mslack < main_worst[0]:
                main_worst = (mslack, mask)

    def witness(pair: tuple[int, int] | None) -> ExpansionWitness | None:
        if pair is None:
            return None
        return ExpansionWitness(mask_members(pair[1]), pair[0])

    return LargeSetExpansionReport(
        ok=main_ok and internal_ok,
        eps=eps,
        exhaustive=exhaustive,
        tested=tested,
        main_ok=main_ok,
        main_worst=witness(main_worst),
        internal_ok=internal_ok,
        internal_worst=witness(internal_worst),
    )


# ---------------------------------------------------------------------------
# Pipeline


@dataclass(frozen=True)
class ProofTrace:
    params: ProofParameters
    candidate: CandidateReport
    properties: SetPropertyReport | None = None
    profile: tuple[int, ...] | None = None
    dichotomy: DichotomyReport | None = None
    agreement_bounds: tuple[AgreementBoundsReport, ...] | None = None
    subgroup: SubgroupExtraction | None = None
    final: FinalReport | None = None
    failure: str | None = None

    @property
    def hypothesis_met(self) -> bool:
        return self.candidate.hypothesis_met

    @property
    def out_of_regime(self) -> bool:
        return self.params.forced

    @property
    def succeeded(self) -> bool:
        """Full run: subgroup extracted, disjoint from S, nothing failed."""
        return (
            self.failure is None
            and self.subgroup is not None
            and self.subgroup.is_index_two
            and self.final is not None
            and self.final.disjoint
            and bool(self.final.structural_match)
        )


def run_pipeline(
    graph: CayleyGraph,
    zeta: Fraction | float | None = None,
    *,
    eps: Fraction | None = None,
    max_exact: int = MAX_EXACT_DEFAULT,
) -> ProofTrace:
    """Run every stage in order, recording the first failed check.

    zeta defaults to the largest in-regime value for eps, and eps defaults to
    the graph's exact vertex expansion constant. When the spectrum is not
    within zeta of -1 the trace stops at the hypothesis stage, which is the
    expected outcome for non-bipartite graphs in regime.
    """
    if graph.n > max_exact:
        raise CapExceededError("max_exact", max_exact, graph.n)
    h = vertex_cheeger(graph, max_exact=max_exact).value
    if eps is None:
        eps = h
    else:
        eps = Fraction(eps)
        if eps > h:
            raise ValueError(
                f"eps = {eps} exceeds the exact expansion constant h = {h}"
            )
    if eps <= 0:
        raise ValueError("pipeline needs a positive expansion constant")
    if zeta is None:
        zeta = zeta_max(eps, graph.d)
    params = make_parameters(eps, graph.d, zeta)

    summary = spectrum(graph)
    candidate = find_candidate_set(
        graph, params, summary=summary, max_exact=max_exact
    )
    if not candidate.hypothesis_met:
        return ProofTrace(params=params, candidate=candidate)

    failure: str | None = None

    def note(msg: str) -> None:
        nonlocal failure
        if failure is None:
            failure = msg

    a_mask = candidate.a_mask
    assert a_mask is not None
    if not candidate.ratio_ok:
        note(
            f"candidate boundary ratio failed: weighted excess "
            f"{candidate.weighted_excess} >= beta |A| = "
            f"{params.beta * len(candidate.a_set):.6g}"
        )

    properties = set_property_check(graph, a_mask, params)
    if not properties.all_ok:
        note("half-set structure properties failed")

    profile = translate_profile(graph, a_mask)

    try:
        dichotomy = dichotomy_check(graph, a_mask, params, profile=profile)
    except ValueError as exc:
        note(str(exc))
        return ProofTrace(
            params=params,
            candidate=candidate,
            properties=properties,
            profile=profile,
            failure=failure,
        )
    if not dichotomy.valid:
        note(
            "overlap dichotomy violated at g = "
            + ", ".join(str(g) for g in dichotomy.violations[:4])
        )

    agreement = tuple(
        agreement_set_bounds_check(graph, a_mask, g, params)
        for g in range(graph.n)
    )
    bad = [rep.g for rep in agreement if not rep.all_ok]
    if bad:
        note(
            "agreement-set bounds failed at g = "
            + ", ".join(str(g) for g in bad[:4])
        )

    subgroup = construct_subgroup(graph, a_mask, params, profile=profile)
    if not subgroup.is_index_two:
        note("extracted set is not an index-2 subgroup")

    final = disjointness_check(graph, subgroup.h_mask, a_mask, params)
    if not final.disjoint:
        note(
            "generators intersect the extracted subgroup: "
            + ", ".join(str(t) for t in final.s_cap_h)
        )
    elif structural_mismatch := (final.structural_match is False):
        assert structural_mismatch
        note("extracted subgroup does not match any structural certificate")

    return ProofTrace(
        params=params,
        candidate=candidate,
        properties=properties,
        profile=profile,
        dichotomy=dichotomy,
        agreement_bounds=agreement,
        subgroup=subgroup,
        final=final,
        failure=failure,
    )
