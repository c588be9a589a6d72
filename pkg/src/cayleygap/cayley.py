"""Cayley graphs with bitmask vertex sets and generator-square multisets.

Vertices are group elements; x and y are adjacent when some generator s has
s*x = y (left multiplication throughout). Vertex sets are plain ints used as
bitmasks, which gives O(1) union/intersection/complement at any order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .errors import GeneratingSetError, SpecParseError
from .groups import FiniteGroup, parse_permutation


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def mask_members(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class GeneratingSet:
    """Symmetric generating set, stored as sorted element indices."""

    elements: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.elements)


def generating_set(group: FiniteGroup, elements: Iterable[int]) -> GeneratingSet:
    """Validate symmetry and generation; report the obstruction otherwise."""
    elems = sorted({int(x) for x in elements})
    if not elems:
        raise GeneratingSetError("generating set is empty")
    n = group.order
    for s in elems:
        if not 0 <= s < n:
            raise GeneratingSetError(f"generator {s} outside 0..{n - 1}")
    elem_set = set(elems)
    for s in elems:
        if group.inv[s] not in elem_set:
            raise GeneratingSetError(
                f"not symmetric: inverse of {s} is {group.inv[s]}, missing from the set"
            )
    reached = 1
    frontier = [0]
    mult = group.mult
    while frontier:
        nxt = []
        for x in frontier:
            for s in elems:
                y = mult[s][x]
                b = 1 << y
                if not reached & b:
                    reached |= b
                    nxt.append(y)
        frontier = nxt
    if reached != (1 << n) - 1:
        missing = (~reached) & ((1 << n) - 1)
        v = (missing & -missing).bit_length() - 1
        raise GeneratingSetError(
            f"not generating: element {v} is unreachable from the identity"
        )
    return GeneratingSet(tuple(elems))


@dataclass(frozen=True, eq=False)
class CayleyGraph:
    """d-regular graph on the group; a loop (identity in S) counts one half-edge."""

    group: FiniteGroup
    gens: GeneratingSet
    neighbors: tuple[tuple[int, ...], ...]
    nbr_masks: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.group.order

    @property
    def d(self) -> int:
        return self.gens.size

    @property
    def full_mask(self) -> int:
        return (1 << self.group.order) - 1


def build(group: FiniteGroup, gens: GeneratingSet | Iterable[int]) -> CayleyGraph:
    """Construct the Cayley graph; validates the generating set."""
    if isinstance(gens, GeneratingSet):
        gens = generating_set(group, gens.elements)
    else:
        gens = generating_set(group, gens)
    mult = group.mult
    neighbors = tuple(
        tuple(mult[s][x] for s in gens.elements) for x in range(group.order)
    )
    nbr_masks = tuple(mask_of(row) for row in neighbors)
    # Distinct generators give distinct neighbors (s*x = s'*x forces s = s'),
    # and symmetry of S makes adjacency symmetric; verify both cheaply.
    for x, row in enumerate(neighbors):
        if len(set(row)) != len(row):
            raise GeneratingSetError(f"repeated neighbor at vertex {x}")
        for y in row:
            if not (nbr_masks[y] >> x) & 1:
                raise GeneratingSetError(f"asymmetric edge {x} -> {y}")
    return CayleyGraph(group, gens, neighbors, nbr_masks)


def set_image(graph: CayleyGraph, a_mask: int) -> int:
    """Bitmask of S·A = {s*a : s in S, a in A}."""
    mult = graph.group.mult
    members = mask_members(a_mask)
    acc = 0
    for s in graph.gens.elements:
        row = mult[s]
        for a in members:
            acc |= 1 << row[a]
    return acc


def vertex_boundary(graph: CayleyGraph, a_mask: int) -> int:
    """Bitmask of the outer vertex boundary (S·A) \\ A."""
    return set_image(graph, a_mask) & ~a_mask


def edge_boundary_count(graph: CayleyGraph, a_mask: int) -> int:
    """Number of pairs (a, s) with a in A and s*a outside A."""
    masks = graph.nbr_masks
    total = 0
    for a in iter_bits(a_mask):
        total += (masks[a] & ~a_mask).bit_count()
    return total


def left_translate(group: FiniteGroup, a_mask: int, s: int) -> int:
    """Bitmask of s·A."""
    row = group.mult[s]
    acc = 0
    for a in iter_bits(a_mask):
        acc |= 1 << row[a]
    return acc


def right_translate(group: FiniteGroup, a_mask: int, g: int) -> int:
    """Bitmask of A·g."""
    mult = group.mult
    acc = 0
    for a in iter_bits(a_mask):
        acc |= 1 << mult[a][g]
    return acc


@dataclass(frozen=True, eq=False)
class MultisetGenerators:
    """The multiset S·S of two-step products; total multiplicity is d^2."""

    group: FiniteGroup
    base_size: int
    counts: dict[int, int]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.counts))

    def multiplicity(self, g: int) -> int:
        return self.counts.get(g, 0)

    @property
    def total(self) -> int:
        return self.base_size * self.base_size


def square_multiset(gens: GeneratingSet, group: FiniteGroup) -> MultisetGenerators:
    """All products s*t with multiplicity; symmetric because S is."""
    counts: dict[int, int] = {}
    mult = group.mult
    for s in gens.elements:
        row = mult[s]
        for t in gens.elements:
            g = row[t]
            counts[g] = counts.get(g, 0) + 1
    ms = MultisetGenerators(group, gens.size, counts)
    for g, c in counts.items():
        if counts.get(group.inv[g], 0) != c:
            raise GeneratingSetError("square multiset lost its symmetry")
    return ms


class ImageExcess(NamedTuple):
    identified: int   # |supp(S·S)·A \ A|, each element once
    weighted: int     # same count with product multiplicities


def multiset_image_excess(ms: MultisetGenerators, a_mask: int) -> ImageExcess:
    """Both readings of |S'A \\ A| for the square multiset S' = S·S."""
    if a_mask == 0:
        raise ValueError("A must be nonempty")
    mult = ms.group.mult
    members = mask_members(a_mask)
    union_out = 0
    weighted = 0
    for g in sorted(ms.counts):
        row = mult[g]
        img = 0
        for a in members:
            img |= 1 << row[a]
        out = img & ~a_mask
        union_out |= out
        weighted += ms.counts[g] * out.bit_count()
    return ImageExcess(union_out.bit_count(), weighted)


_GEN_TOKEN_RE = re.compile(r"^(±|\+-|-)?(\d+)$")


def parse_generators(group: FiniteGroup, text: str) -> GeneratingSet:
    """Parse a generator spec: comma-separated indices with optional ±k / +-k
    (element and inverse) or -k (inverse only), or semicolon-separated cycle
    notation for permutation groups.
    """
    body = text.strip()
    if not body:
        raise GeneratingSetError("empty generator spec")
    if body.startswith("("):
        if group.perms is None:
            raise GeneratingSetError(
                "cycle notation requires a permutation-constructed group"
            )
        degree = len(group.perms[0])
        index = {p: i for i, p in enumerate(group.perms)}
        out = []
        for piece in body.split(";"):
            piece = piece.strip()
            if not piece:
                continue
            perm = parse_permutation(piece, degree=degree)
            if perm not in index:
                raise GeneratingSetError(f"permutation {piece} is not a group element")
            out.append(index[perm])
        return generating_set(group, out)
    out = []
    for token in body.split(","):
        token = token.strip()
        if not token:
            continue
        m = _GEN_TOKEN_RE.match(token)
        if not m:
            raise SpecParseError(f"bad generator token {token!r}")
        sign, digits = m.group(1), int(m.group(2))
        if not 0 <= digits < group.order:
            raise GeneratingSetError(f"generator {digits} outside 0..{group.order - 1}")
        if sign == "-":
            out.append(group.inv[digits])
        elif sign in ("±", "+-"):
            out.append(digits)
            out.append(group.inv[digits])
        else:
            out.append(digits)
    return generating_set(group, out)
