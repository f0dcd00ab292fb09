import itertools
import json

import pytest

from melonclass import families as fam
from melonclass import melonic as mel
from melonclass.poly import mul

from conftest import construction


def test_validate_good():
    c = construction(((3,), 0, 1), ((2, 2, 2), 1, 1))
    assert mel.validate(c) == []


def test_validate_root_stage():
    assert mel.validate(construction(((3,), 1, 1))) == \
        ["stage 1: must replace the root edge (parent_stage 0)"]
    msgs = mel.validate(construction(((3,), 0, 2)))
    assert msgs == ["stage 1: parent_banana must be 1"]


def test_validate_shapes():
    msgs = mel.validate(construction(((), 0, 1)))
    assert "stage 1: banana tuple is empty" in msgs
    msgs = mel.validate(construction(((0, 2), 0, 1)))
    assert "stage 1: banana sizes must be positive" in msgs
    assert mel.validate(mel.MelonicConstruction(())) == \
        ["construction has no stages"]


def test_validate_parent_references():
    msgs = mel.validate(construction(((2,), 0, 1), ((2, 2), 2, 1)))
    assert msgs == ["stage 2: parent_stage 2 not in 1..1"]
    msgs = mel.validate(construction(((2,), 0, 1), ((2, 2), 1, 3)))
    assert msgs == ["stage 2: parent_banana 3 out of range for stage 1"]


def test_validate_capacity():
    c = construction(((2,), 0, 1), ((2, 2), 1, 1), ((2, 2), 1, 1),
                     ((2, 2), 1, 1))
    msgs = mel.validate(c)
    assert msgs == ["banana 1 of stage 1 has 2 edges but is replaced by "
                    "3 later stages"]


def test_is_reduced():
    assert mel.is_reduced(construction(((3,), 0, 1), ((2, 2), 1, 1)))
    assert not mel.is_reduced(construction(((1,), 0, 1), ((2, 2), 1, 1)))
    # replacing inside a size-1 entry of a later stage
    c = construction(((2,), 0, 1), ((1, 2), 1, 1), ((3, 3), 2, 1))
    assert not mel.is_reduced(c)


def test_normalize_splices_into_parent():
    c = construction(((1,), 0, 1), ((2, 3), 1, 1))
    n = mel.normalize(c)
    assert n == construction(((2, 3), 0, 1))
    assert mel.is_reduced(n)
    assert mel.normalize(n) == n


def test_normalize_repoints_children():
    # stage 3 targets the spliced stage 2; stage 4 targets a later slot
    # of stage 1 and must shift
    c = construction(((2, 1, 2), 0, 1), ((3, 4), 1, 2), ((2, 2), 2, 2),
                     ((5, 5), 1, 3))
    n = mel.normalize(c)
    assert n == construction(((2, 3, 4, 2), 0, 1), ((2, 2), 1, 3),
                             ((5, 5), 1, 4))
    assert mel.validate(n) == []
    assert mel.is_reduced(n)


def test_normalize_preserves_class_and_size():
    cases = [
        construction(((1,), 0, 1), ((2, 3), 1, 1)),
        construction(((2, 1), 0, 1), ((2, 2), 1, 2), ((3, 3), 2, 1)),
        construction(((1,), 0, 1), ((1, 1, 2), 1, 1), ((2, 2), 2, 3)),
    ]
    for c in cases:
        n = mel.normalize(c)
        assert mel.is_reduced(n)
        assert c.num_edges() == n.num_edges()
        assert mel.class_of(c) == mel.class_of(n)
        g0, g1 = mel.to_graph(c), mel.to_graph(n)
        assert len(g0.edges) == len(g1.edges)
        assert g0.num_vertices == g1.num_vertices


def test_to_graph_banana():
    g = mel.to_graph(construction(((4,), 0, 1)))
    assert g.num_vertices == 2
    assert g.edges == ((0, 1),) * 4


def test_to_graph_triangle():
    g = mel.to_graph(construction(((2,), 0, 1), ((1, 1), 1, 1)))
    assert g.num_vertices == 3
    assert sorted(tuple(sorted(e)) for e in g.edges) == \
        [(0, 1), (0, 2), (1, 2)]


def test_to_graph_edge_count_matches():
    for c in mel.enumerate_constructions(6):
        g = mel.to_graph(c)
        assert len(g.edges) == c.num_edges()


def test_to_graph_rejects_invalid():
    with pytest.raises(ValueError):
        mel.to_graph(construction(((2,), 1, 1)))


def test_class_of_single_banana_rows():
    for m in range(1, 9):
        got = mel.class_of(construction(((m,), 0, 1)))
        assert got.poly == fam.b_poly(m).poly


def test_class_of_string_of_bananas():
    got = mel.class_of(construction(((2, 3, 2), 0, 1)))
    expected = mul(mul(fam.b_poly(2).poly, fam.b_poly(3).poly),
                   fam.b_poly(2).poly)
    assert got.poly == expected


def test_class_of_matches_necklace_families():
    for m in range(1, 6):
        for n in range(2, 6):
            tup = (m,) * (n - 1)
            c = construction(((m + 1,), 0, 1), (tup, 1, 1))
            assert mel.class_of(c).poly == fam.necklace_class(m, n).poly
            tup = (1,) + (m,) * (n - 2)
            c = construction(((m + 1,), 0, 1), (tup, 1, 1))
            assert mel.class_of(c).poly == \
                fam.clasped_necklace_class(m, n).poly


def test_class_invariant_under_banana_order():
    # permuting the bananas inside one stage relabels the graph only
    base = None
    for perm in itertools.permutations((1, 2, 3)):
        c = construction(((2,), 0, 1), (perm, 1, 1))
        got = mel.class_of(c).poly
        if base is None:
            base = got
        assert got == base


def test_class_of_unreduced_input():
    c = construction(((1,), 0, 1), ((2, 2), 1, 1))
    n = mel.normalize(c)
    assert mel.class_of(c) == mel.class_of(n)


def test_class_of_rejects_invalid():
    with pytest.raises(ValueError):
        mel.class_of(construction(((2,), 0, 1), ((2, 2), 1, 9)))


def test_enumerate_counts():
    counts = [len(list(mel.enumerate_constructions(n)))
              for n in range(1, 8)]
    assert counts == [1, 3, 8, 23, 71, 238, 840]


def test_enumerate_max_edges_two():
    got = {mel.serialize(c) for c in mel.enumerate_constructions(2)}
    assert got == {"[[[1],0,1]]", "[[[2],0,1]]", "[[[1,1],0,1]]"}


def test_enumerate_all_valid_reduced_canonical():
    seen = set()
    for c in mel.enumerate_constructions(6):
        assert mel.validate(c) == []
        assert mel.is_reduced(c)
        assert c.num_edges() <= 6
        assert mel.canonical_construction(c) == c
        key = mel.serialize(c)
        assert key not in seen
        seen.add(key)


def test_enumerate_rejects_nonpositive():
    with pytest.raises(ValueError):
        list(mel.enumerate_constructions(0))


def test_canonical_sorts_siblings():
    a = construction(((3, 3), 0, 1), ((2, 2), 1, 1), ((1, 1), 1, 2))
    b = construction(((3, 3), 0, 1), ((1, 1), 1, 2), ((2, 2), 1, 1))
    assert mel.canonical_key(a) == mel.canonical_key(b)
    assert mel.class_of(a).poly == mel.class_of(b).poly


def test_serialize_round_trip():
    c = construction(((2, 1), 0, 1), ((4, 5), 1, 1))
    assert mel.deserialize(mel.serialize(c)) == c


def test_json_round_trip():
    c = construction(((3,), 0, 1), ((2, 2, 2), 1, 1))
    data = mel.to_json_dict(c)
    assert data == {"stages": [
        {"bananas": [3], "parent_stage": 0, "parent_banana": 1},
        {"bananas": [2, 2, 2], "parent_stage": 1, "parent_banana": 1}]}
    assert mel.from_json_dict(json.loads(json.dumps(data))) == c


def test_from_json_rejects_malformed():
    with pytest.raises(ValueError):
        mel.from_json_dict([1, 2, 3])
    with pytest.raises(ValueError):
        mel.from_json_dict({"stages": "nope"})
    with pytest.raises(ValueError):
        mel.from_json_dict({"stages": [{"bananas": [2]}]})


def test_multigraph_validation():
    with pytest.raises(ValueError):
        mel.Multigraph(2, ((0, 5),))
    with pytest.raises(ValueError):
        mel.Multigraph(0, ())
    g = mel.Multigraph(2, ((1, 0), (0, 1)))
    assert g.sorted_edge_key() == (2, ((0, 1), (0, 1)))
