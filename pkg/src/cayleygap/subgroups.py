"""Index-2 subgroups and the structural bipartiteness criterion.

A connected Cayley graph C(G, S) is bipartite exactly when G has an index-2
subgroup H with H cap S empty; the parts are then H and its complement.
Every index-2 subgroup contains all squares and commutators, so the search
space is the quotient of G by the subgroup N those generate: an elementary
abelian 2-group whose hyperplanes are in bijection with the index-2 subgroups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .cayley import CayleyGraph
from .errors import CapExceededError, DisconnectedGraphError
from .groups import FiniteGroup
from .spectral import (
    SpectralSummary,
    is_bipartite_spectral,
    is_connected,
    spectrum,
)

MAX_RANK_DEFAULT = 20


@dataclass(frozen=True)
class SubgroupCertificate:
    elements: tuple[int, ...]
    index: int
    disjoint_from_s: bool | None = None


def closure(group: FiniteGroup, seeds: Iterable[int]) -> tuple[int, ...]:
    """Subgroup generated by the seeds.

    BFS under right multiplication; in a finite group the product closure of
    a set containing the identity is already a subgroup.
    """
    mult = group.mult
    gens = sorted({int(s) for s in seeds} | {group.identity})
    for s in gens:
        if not 0 <= s < group.order:
            raise ValueError(f"seed {s} outside 0..{group.order - 1}")
    members = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            row = mult[x]
            for s in gens:
                y = row[s]
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(members))


def _validate_subgroup(group: FiniteGroup, elements: tuple[int, ...]) -> None:
    members = set(elements)
    if group.identity not in members:
        raise AssertionError("candidate subgroup misses the identity")
    for a in elements:
        if group.inv[a] not in members:
            raise AssertionError(f"candidate subgroup not inverse-closed at {a}")
    mult = group.mult
    for a in elements:
        row = mult[a]
        for b in elements:
            if row[b] not in members:
                raise AssertionError(
                    f"candidate subgroup not closed: {a} * {b} escapes"
                )


def squares_commutators_subgroup(group: FiniteGroup) -> SubgroupCertificate:
    """Subgroup N generated by all squares and commutators.

    G/N is an elementary abelian 2-group: every element squares into N, and
    commutators land in N so the quotient is abelian.
    """
    n = group.order
    mult = group.mult
    inv = group.inv
    seeds = {mult[g][g] for g in range(n)}
    for g in range(n):
        ig = inv[g]
        for h in range(n):
            gh = mult[g][h]
            seeds.add(mult[mult[ig][inv[h]]][gh])
    members = closure(group, seeds)
    if n % len(members):
        raise AssertionError("subgroup order does not divide the group order")
    return SubgroupCertificate(members, n // len(members))


def index2_subgroups(
    group: FiniteGroup, *, max_rank: int = MAX_RANK_DEFAULT
) -> tuple[SubgroupCertificate, ...]:
    """All index-2 subgroups, sorted by element tuple.

    They are the preimages of the 2^k - 1 hyperplanes of the quotient
    (Z/2)^k by the squares-commutators subgroup; each one is re-validated by
    an explicit closure check.
    """
    n = group.order
    mult = group.mult
    base = squares_commutators_subgroup(group).elements
    q, rem = divmod(n, len(base))
    if rem:
        raise AssertionError("coset decomposition failed")
    if q == 1:
        return ()
    if q & (q - 1):
        raise AssertionError(f"quotient order {q} is not a power of 2")
    k = q.bit_length() - 1
    if k > max_rank:
        raise CapExceededError("max_rank", max_rank, k)

    # Minimal-element coset representatives; scanning g in increasing order
    # makes the first unseen element the minimum of its coset.
    coset_id = [-1] * n
    reps: list[int] = []
    for g in range(n):
        if coset_id[g] >= 0:
            continue
        cid = len(reps)
        reps.append(g)
        row = mult[g]
        for x in base:
            coset_id[row[x]] = cid
    if len(reps) != q:
        raise AssertionError("coset count mismatch")

    # F2 coordinates: grow a basis greedily, doubling the assigned span.
    vec = [-1] * q
    vec[coset_id[group.identity]] = 0
    assigned = [coset_id[group.identity]]
    rank = 0
    for c in range(q):
        if vec[c] >= 0:
            continue
        bit = 1 << rank
        rank += 1
        for c2 in list(assigned):
            c3 = coset_id[mult[reps[c2]][reps[c]]]
            if vec[c3] >= 0:
                raise AssertionError("quotient span collapsed")
            vec[c3] = vec[c2] | bit
            assigned.append(c3)
    if rank != k:
        raise AssertionError("quotient rank mismatch")
    for c1 in range(q):
        for c2 in range(q):
            c3 = coset_id[mult[reps[c1]][reps[c2]]]
            if vec[c3] != vec[c1] ^ vec[c2]:
                raise AssertionError("quotient is not elementary abelian")

    out = []
    for f in range(1, 1 << k):
        members = tuple(
            g for g in range(n) if (vec[coset_id[g]] & f).bit_count() % 2 == 0
        )
        if 2 * len(members) != n:
            raise AssertionError("hyperplane preimage has the wrong size")
        _validate_subgroup(group, members)
        out.append(SubgroupCertificate(members, 2))
    out.sort(key=lambda cert: cert.elements)
    return tuple(out)


def is_bipartite_structural(
    graph: CayleyGraph, *, max_rank: int = MAX_RANK_DEFAULT
) -> SubgroupCertificate | None:
    """First index-2 subgroup disjoint from S, or None.

    "First" is by element-tuple order, so the certificate is deterministic.
    """
    s_set = set(graph.gens.elements)
    for cert in index2_subgroups(graph.group, max_rank=max_rank):
        if not s_set.intersection(cert.elements):
            return SubgroupCertificate(cert.elements, cert.index, True)
    return None


@dataclass(frozen=True)
class EquivalenceResult:
    ok: bool
    spectral: bool
    structural: bool
    certificate: SubgroupCertificate | None


def proposition_equivalence_check(
    graph: CayleyGraph,
    tol: float = 1e-9,
    *,
    summary: SpectralSummary | None = None,
) -> EquivalenceResult:
    """Spectral bipartiteness must agree with the structural certificate."""
    if summary is None:
        summary = spectrum(graph)
    if not is_connected(summary, tol):
        raise DisconnectedGraphError(
            "bipartiteness equivalence is only meaningful for connected graphs"
        )
    cert = is_bipartite_structural(graph)
    spectral = is_bipartite_spectral(summary, tol)
    return EquivalenceResult(
        ok=(cert is not None) == spectral,
        spectral=spectral,
        structural=cert is not None,
        certificate=cert,
    )
