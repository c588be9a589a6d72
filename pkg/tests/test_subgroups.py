import pytest

from cayleygap import (
    CapExceededError,
    CayleyGraph,
    DisconnectedGraphError,
    GeneratingSet,
    closure,
    from_cyclic,
    from_dihedral,
    from_direct_product,
    from_symmetric,
    index2_subgroups,
    is_bipartite_structural,
    proposition_equivalence_check,
    squares_commutators_subgroup,
)

import families
import oracles


def test_closure_of_nothing_is_trivial():
    g = from_cyclic(6)
    assert closure(g, []) == (0,)


def test_closure_generates_subgroup():
    g = from_cyclic(6)
    assert closure(g, [2]) == (0, 2, 4)
    assert closure(g, [3]) == (0, 3)
    assert closure(g, [2, 3]) == (0, 1, 2, 3, 4, 5)


def test_closure_rejects_bad_seed():
    with pytest.raises(ValueError):
        closure(from_cyclic(6), [6])


@pytest.mark.parametrize(
    "group,expected",
    [
        (from_cyclic(4), (0, 2)),
        (from_cyclic(5), (0, 1, 2, 3, 4)),
        (from_cyclic(6), (0, 2, 4)),
    ],
    ids=["Z4", "Z5", "Z6"],
)
def test_squares_commutators_cyclic(group, expected):
    cert = squares_commutators_subgroup(group)
    assert cert.elements == expected
    assert cert.index == group.order // len(expected)


def test_squares_commutators_symmetric():
    s3 = from_symmetric(3)
    cert = squares_commutators_subgroup(s3)
    # the even permutations
    assert len(cert.elements) == 3
    assert cert.index == 2
    s4 = from_symmetric(4)
    cert4 = squares_commutators_subgroup(s4)
    assert len(cert4.elements) == 12
    assert cert4.index == 2


def test_index2_z6():
    subs = index2_subgroups(from_cyclic(6))
    assert len(subs) == 1
    assert subs[0].elements == (0, 2, 4)
    assert subs[0].index == 2


def test_index2_z5_none():
    assert index2_subgroups(from_cyclic(5)) == ()


def test_index2_dihedral4():
    subs = index2_subgroups(from_dihedral(4))
    assert [c.elements for c in subs] == [
        (0, 1, 2, 3),
        (0, 2, 4, 6),
        (0, 2, 5, 7),
    ]


def test_index2_s3_is_alternating():
    s3 = from_symmetric(3)
    subs = index2_subgroups(s3)
    assert len(subs) == 1
    elements = subs[0].elements
    assert len(elements) == 3
    assert squares_commutators_subgroup(s3).elements == elements


def test_index2_klein():
    klein = from_direct_product(from_cyclic(2), from_cyclic(2))
    subs = index2_subgroups(klein)
    assert [c.elements for c in subs] == [(0, 1), (0, 2), (0, 3)]


@pytest.mark.parametrize("member", families.small(12), ids=lambda m: m.name)
def test_index2_matches_brute_force(member):
    group = families.graph_of(member).group
    expected = oracles.brute_force_index2(group)
    assert [c.elements for c in index2_subgroups(group)] == expected


def test_index2_count_elementary_abelian():
    cube = from_direct_product(
        from_direct_product(from_cyclic(2), from_cyclic(2)), from_cyclic(2)
    )
    subs = index2_subgroups(cube)
    assert len(subs) == 7   # hyperplanes of F2^3


def test_max_rank_cap():
    cube = from_direct_product(
        from_direct_product(from_cyclic(2), from_cyclic(2)), from_cyclic(2)
    )
    with pytest.raises(CapExceededError) as exc:
        index2_subgroups(cube, max_rank=2)
    assert exc.value.cap_name == "max_rank"
    assert exc.value.needed == 3


@pytest.mark.parametrize("member", families.MEMBERS, ids=families.MEMBER_IDS)
def test_structural_matches_expected_bipartiteness(member):
    graph = families.graph_of(member)
    cert = is_bipartite_structural(graph)
    assert (cert is not None) == member.bipartite
    if cert is not None:
        assert cert.index == 2
        assert cert.disjoint_from_s
        assert not set(graph.gens.elements) & set(cert.elements)
        # parts H and G \ H: all edges cross
        h = set(cert.elements)
        for x in range(graph.n):
            for y in graph.neighbors[x]:
                assert (x in h) != (y in h)


@pytest.mark.parametrize("member", families.MEMBERS, ids=families.MEMBER_IDS)
def test_equivalence_on_family(member):
    res = proposition_equivalence_check(
        families.graph_of(member), summary=families.summary_of(member)
    )
    assert res.ok
    assert res.spectral == member.bipartite
    assert res.structural == member.bipartite
    assert (res.certificate is not None) == member.bipartite


def test_equivalence_needs_connected():
    g = from_cyclic(6)
    neighbors = tuple((g.mult[3][x],) for x in range(6))
    graph = CayleyGraph(
        group=g,
        gens=GeneratingSet((3,)),
        neighbors=neighbors,
        nbr_masks=tuple(1 << row[0] for row in neighbors),
    )
    with pytest.raises(DisconnectedGraphError):
        proposition_equivalence_check(graph)
