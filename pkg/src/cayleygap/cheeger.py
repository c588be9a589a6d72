"""Exact Cheeger constants by pruned subset enumeration.

All three isoperimetric quantities are exact rationals:

  vertex  h       = min |delta(A)| / |A|          over 1 <= |A| <= floor(n/2),
  edge    h_edge  = min |E(A, A^c)| / (d |A|)     same range,
  dual    h_dual  = max 2|E(V1, V2)| / (d(|V1| + |V2|))  over partitions
                    V1, V2, V3 with V1 cup V2 nonempty.

Witnesses are deterministic: the minimum (resp. first maximum) under the
tie-break (ratio, |A|, bitmask value). The enumerators prune a subtree only
when even its best completion is strictly worse than the incumbent, so the
result equals the naive all-subsets scan, value and witness both.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cayley import CayleyGraph, mask_members
from .errors import CapExceededError

MAX_EXACT_DEFAULT = 24
MAX_DUAL_DEFAULT = 14


@dataclass(frozen=True)
class CheegerCertificate:
    kind: str                                   # "vertex" | "edge" | "dual"
    value: Fraction
    witness: tuple[int, ...]
    witness_pair: tuple[tuple[int, ...], tuple[int, ...]] | None = None


def connected_components(nbr_masks: Sequence[int], n: int) -> list[int]:
    """Masks of connected components, ordered by smallest member."""
    seen = 0
    out = []
    full = (1 << n) - 1
    for v in range(n):
        bit = 1 << v
        if seen & bit:
            continue
        comp = bit
        frontier = bit
        while frontier:
            grow = 0
            m = frontier
            while m:
                low = m & -m
                grow |= nbr_masks[low.bit_length() - 1]
                m ^= low
            frontier = grow & ~comp & full
            comp |= frontier
        out.append(comp)
        seen |= comp
    return out


def _zero_ratio_witness(nbr_masks: Sequence[int], n: int) -> int | None:
    """Smallest-(size, mask) component if the graph is disconnected, else None.

    A set has empty boundary iff it is a union of components, so the tie-break
    minimum among zero-ratio sets is a single smallest component.
    """
    comps = connected_components(nbr_masks, n)
    if len(comps) == 1:
        return None
    return min(comps, key=lambda c: (c.bit_count(), c))


def _vertex_search(nbr_masks: Sequence[int], n: int) -> tuple[int, int, int]:
    """Minimise |delta(A)|/|A|; returns (boundary, size, mask)."""
    full = (1 << n) - 1
    kcap = n // 2
    below = [(1 << u) - 1 for u in range(n + 1)]
    masks = list(nbr_masks)
    best_num, best_size, best_mask = n + 1, 1, 0   # worse than any candidate

    def extend(start: int, mask: int, size: int, nbr: int) -> None:
        nonlocal best_num, best_size, best_mask
        bn, bs = best_num, best_size
        for u in range(start, n):
            # Everything left in this loop extends `mask`; vertices below u
            # that are boundary now can never be absorbed.
            kmax_loop = size + (n - u)
            if kmax_loop > kcap:
                kmax_loop = kcap
            pb_loop = (nbr & below[u] & ~mask).bit_count()
            if pb_loop * bs > bn * kmax_loop:
                break
            mask2 = mask | (1 << u)
            size2 = size + 1
            nbr2 = nbr | masks[u]
            num2 = (nbr2 & ~mask2 & full).bit_count()
            lhs = num2 * bs
            rhs = bn * size2
            if lhs < rhs or (
                lhs == rhs
                and (size2 < bs or (size2 == bs and mask2 < best_mask))
            ):
                best_num, best_size, best_mask = num2, size2, mask2
                bn, bs = num2, size2
            if size2 < kcap and u + 1 < n:
                kmax = size2 + (n - u - 1)
                if kmax > kcap:
                    kmax = kcap
                pb = (nbr2 & below[u + 1] & ~mask2).bit_count()
                live = (nbr2 & ~below[u + 1]).bit_count()
                slack = kmax - size2
                lb = pb + (live - slack if live > slack else 0)
                if lb * bs <= bn * kmax:
                    extend(u + 1, mask2, size2, nbr2)
                    bn, bs = best_num, best_size
        return

    extend(0, 0, 0, 0)
    return best_num, best_size, best_mask


def _edge_search(nbr_masks: Sequence[int], n: int) -> tuple[int, int, int]:
    """Minimise |E(A, A^c)|/|A| (the d divisor is constant); returns
    (crossing, size, mask)."""
    full = (1 << n) - 1
    kcap = n // 2
    below = [(1 << u) - 1 for u in range(n + 1)]
    masks = list(nbr_masks)
    max_num = n * max(m.bit_count() for m in masks) + 1
    best_num, best_size, best_mask = max_num, 1, 0

    def extend(start: int, mask: int, size: int, eb: int, pe: int) -> None:
        # eb: crossing count of `mask`; pe: crossings between `mask` and
        # vertices already passed over (they can never join A).
        nonlocal best_num, best_size, best_mask
        bn, bs = best_num, best_size
        pe_run = pe
        for u in range(start, n):
            kmax_loop = size + (n - u)
            if kmax_loop > kcap:
                kmax_loop = kcap
            if pe_run * bs > bn * kmax_loop:
                break
            nm_u = masks[u]
            mask2 = mask | (1 << u)
            inner = (nm_u & mask).bit_count()
            outer = (nm_u & ~mask2 & full).bit_count()
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
                pe2 = pe_run + (nm_u & below[u] & ~mask).bit_count()
                if pe2 * bs <= bn * kmax:
                    extend(u + 1, mask2, size2, eb2, pe2)
                    bn, bs = best_num, best_size
            pe_run += inner
        return

    extend(0, 0, 0, 0, 0)
    return best_num, best_size, best_mask


def vertex_cheeger_from_masks(
    nbr_masks: Sequence[int], n: int, *, max_exact: int = MAX_EXACT_DEFAULT
) -> CheegerCertificate:
    """Exact vertex Cheeger constant of an arbitrary neighbor-mask graph.

    Loops (self bits) are allowed and never contribute boundary.
    """
    if n > max_exact:
        raise CapExceededError("max_exact", max_exact, n)
    if n < 2:
        raise ValueError("no admissible sets: need n >= 2")
    zero = _zero_ratio_witness(nbr_masks, n)
    if zero is not None and zero.bit_count() <= n // 2:
        return CheegerCertificate("vertex", Fraction(0), mask_members(zero))
    num, size, mask = _vertex_search(nbr_masks, n)
    return CheegerCertificate("vertex", Fraction(num, size), mask_members(mask))


def vertex_cheeger(graph: CayleyGraph, *, max_exact: int = MAX_EXACT_DEFAULT) -> CheegerCertificate:
    return vertex_cheeger_from_masks(graph.nbr_masks, graph.n, max_exact=max_exact)


def edge_cheeger(graph: CayleyGraph, *, max_exact: int = MAX_EXACT_DEFAULT) -> CheegerCertificate:
    n, d = graph.n, graph.d
    if n > max_exact:
        raise CapExceededError("max_exact", max_exact, n)
    if n < 2:
        raise ValueError("no admissible sets: need n >= 2")
    zero = _zero_ratio_witness(graph.nbr_masks, n)
    if zero is not None and zero.bit_count() <= n // 2:
        return CheegerCertificate("edge", Fraction(0), mask_members(zero))
    num, size, mask = _edge_search(graph.nbr_masks, n)
    return CheegerCertificate("edge", Fraction(num, d * size), mask_members(mask))


def dual_cheeger(graph: CayleyGraph, *, max_dual: int = MAX_DUAL_DEFAULT) -> CheegerCertificate:
    """Exact dual Cheeger constant with the canonical first-maximiser witness."""
    n, d = graph.n, graph.d
    if n > max_dual:
        raise CapExceededError("max_dual", max_dual, n)
    masks = graph.nbr_masks
    best_cross, best_m = -1, 1
    best_pair = (0, 0)

    def assign(v: int, m1: int, m2: int, n1: int, n2: int, cross: int) -> None:
        nonlocal best_cross, best_m, best_pair
        if v == n:
            m = n1 + n2
            if m and cross * best_m > best_cross * m:
                best_cross, best_m = cross, m
                best_pair = (m1, m2)
            return
        # Upper bound: remaining vertices add at most d crossings each, and
        # the volume denominator never shrinks.
        rem = n - v
        m_now = max(1, n1 + n2)
        if (cross + d * rem) * best_m <= best_cross * m_now:
            return
        bit = 1 << v
        nm = masks[v]
        assign(v + 1, m1 | bit, m2, n1 + 1, n2, cross + (nm & m2).bit_count())
        if m1:   # canonical: the first vertex outside V3 goes to V1
            assign(v + 1, m1, m2 | bit, n1, n2 + 1, cross + (nm & m1).bit_count())
        assign(v + 1, m1, m2, n1, n2, cross)

    assign(0, 0, 0, 0, 0, 0)
    value = Fraction(2 * best_cross, d * best_m)
    pair = (mask_members(best_pair[0]), mask_members(best_pair[1]))
    return CheegerCertificate("dual", value, pair[0], witness_pair=pair)


# ---------------------------------------------------------------------------
# Inequality checks


@dataclass(frozen=True)
class ExpansionResult:
    ok: bool
    eps: Fraction
    certificate: CheegerCertificate


def expansion_check(
    graph: CayleyGraph, eps: Fraction, *, max_exact: int = MAX_EXACT_DEFAULT
) -> ExpansionResult:
    """True iff |delta(A)| >= eps |A| for every admissible A (i.e. h >= eps)."""
    eps = Fraction(eps)
    cert = vertex_cheeger(graph, max_exact=max_exact)
    return ExpansionResult(cert.value >= eps, eps, cert)


def vertex_edge_relation_check(
    graph: CayleyGraph,
    *,
    h: Fraction | None = None,
    edge_h: Fraction | None = None,
    max_exact: int = MAX_EXACT_DEFAULT,
) -> bool:
    """Exact check of h/d <= h_edge <= h."""
    if h is None:
        h = vertex_cheeger(graph, max_exact=max_exact).value
    if edge_h is None:
        edge_h = edge_cheeger(graph, max_exact=max_exact).value
    return Fraction(h, graph.d) <= edge_h <= h


@dataclass(frozen=True)
class CheegerBuserResult:
    ok: bool
    lower_margin: float   # lambda_2 - h_edge^2/2
    upper_margin: float   # 2 h_edge - lambda_2


def cheeger_buser_check(
    graph: CayleyGraph,
    tol: float = 1e-9,
    *,
    edge_h: Fraction | None = None,
    lambda2: float | None = None,
    max_exact: int = MAX_EXACT_DEFAULT,
) -> CheegerBuserResult:
    """h_edge^2/2 <= lambda_2 <= 2 h_edge within tol."""
    if edge_h is None:
        edge_h = edge_cheeger(graph, max_exact=max_exact).value
    if lambda2 is None:
        from .spectral import spectrum

        lambda2 = spectrum(graph).lambda2
    lower = lambda2 - float(edge_h * edge_h / 2)
    upper = 2 * float(edge_h) - lambda2
    return CheegerBuserResult(lower >= -tol and upper >= -tol, lower, upper)


@dataclass(frozen=True)
class BauerJostResult:
    ok: bool
    lower_margin: float       # (2 - lambda_n) - (1 - dual)^2/2
    upper_margin: float       # 2(1 - dual) - (2 - lambda_n)
    equivalence_ok: bool      # dual == 1 exactly iff lambda_n == 2 within tol


def bauer_jost_check(
    graph: CayleyGraph,
    tol: float = 1e-9,
    *,
    dual_h: Fraction | None = None,
    lambda_n: float | None = None,
    max_dual: int = MAX_DUAL_DEFAULT,
) -> BauerJostResult:
    """(1 - dual)^2/2 <= 2 - lambda_n <= 2(1 - dual), and dual = 1 iff bipartite."""
    if dual_h is None:
        dual_h = dual_cheeger(graph, max_dual=max_dual).value
    if lambda_n is None:
        from .spectral import spectrum

        lambda_n = spectrum(graph).lambda_max
    gap = 2.0 - lambda_n
    one_minus = 1 - dual_h
    lower = gap - float(one_minus * one_minus / 2)
    upper = 2 * float(one_minus) - gap
    equivalence = (dual_h == 1) == (lambda_n >= 2 - tol)
    return BauerJostResult(
        lower >= -tol and upper >= -tol, lower, upper, equivalence
    )
