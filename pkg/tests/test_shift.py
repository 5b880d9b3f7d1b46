import pytest

import oracles
from retword.fingroup import abelianization_morphism, parse_morphism
from retword.freegroup import core_graph, is_conjugate, membership, subgroup_equal
from retword.shift import (
    NotAFactor,
    NotAFactorCode,
    extension_graph,
    is_dendric,
    is_suffix_connected,
    occurrence_prefixes,
    rauzy_graph,
    rauzy_group,
    return_group,
    return_words,
    return_words_to_set,
    welldoc_saturates,
)
from retword.words import oracle_for


def test_tribonacci_returns(trib):
    assert return_words(trib, "aba").as_set() == {"ab", "aba", "abac"}
    assert return_words(trib, "").as_set() == {"a", "b", "c"}
    assert return_group(trib, "aba").rank == 3


@pytest.mark.parametrize("text, u", [
    (oracles.TRIBONACCI, "aba"),
    (oracles.TRIBONACCI, "abacaba"),
    (oracles.EX_DERIVATION, "aabaab"),
    (oracles.EX_DERIVATION, "cb"),
    (oracles.PROP_COUNTER, "b"),
    (oracles.THUE_MORSE, "0"),
    (oracles.THUE_MORSE, "0110"),
])
def test_returns_match_brute_force(text, u):
    assert return_words(oracle_for(text), u).as_set() == oracles.brute_returns(text, u)


def test_listed_returns(ex44, tm):
    assert return_words(ex44, "aabaab").as_set() == {
        "aabaabacb", "aabaabacbacb", "aabaabbaacb",
        "aabaabacbaabbaacb", "aabaabacbaabbaacbaabbaacb",
    }
    assert return_words(tm, "0").as_set() == {"0", "01", "011"}


def test_not_a_factor(trib):
    with pytest.raises(NotAFactor):
        return_words(trib, "bb")
    with pytest.raises(NotAFactor):
        rauzy_group(trib, "cc")


def test_factor_code_returns(trib):
    assert return_words_to_set(trib, ["b", "c"]) == {"ba", "baa", "ca"}
    with pytest.raises(NotAFactorCode):
        return_words_to_set(trib, ["a", "ab"])


def test_tribonacci_rauzy_graph(trib):
    g = rauzy_graph(trib, 2)
    assert len(g.vertices) == 5 and len(g.edges) == 7
    assert ("aa", "a", "ab") in g.edges
    assert g.is_strongly_connected()
    assert 'label="a"' in g.to_dot()


def test_rauzy_group_of_ba(trib):
    gr = rauzy_group(trib, "ba")
    assert gr.rank == 3
    assert subgroup_equal(gr, core_graph(["baa", "ba", "baca"]))


def test_order_zero_rauzy_group(trib):
    assert rauzy_graph(trib, 0).vertices == ("",)
    assert rauzy_group(trib, "").rank == 3


def test_same_length_rauzy_groups_are_conjugate(trib):
    assert is_conjugate(rauzy_group(trib, "aa").basis, rauzy_group(trib, "ba").basis)


def test_extension_graph_of_b(trib):
    e = extension_graph(trib, "b", 2)
    assert set(e.left) == {"aa", "ba", "ca"} and set(e.right) == {"aa", "ab", "ac"}
    assert set(e.edges) == {("aa", "ac"), ("ba", "ac"), ("ca", "aa"), ("ca", "ab"), ("ca", "ac")}
    assert e.is_tree()
    with pytest.raises(ValueError):
        extension_graph(trib, "b", 0)


def test_tribonacci_is_dendric(trib):
    for n in range(5):
        for u in trib.language(n):
            assert is_dendric(trib, u), u
            assert is_suffix_connected(trib, u), u


def test_empty_word_with_complete_extensions_is_not_dendric(tm):
    # E¹(ε) in Thue-Morse is complete bipartite on {0,1}+{0,1}
    assert not is_dendric(tm, "")


def test_dendric_words_have_alphabet_many_returns(trib):
    for n in range(7):
        for u in trib.language(n):
            assert len(return_words(trib, u)) == 3, u


@pytest.mark.parametrize("fixture", ["trib", "ex44", "prop52"])
def test_prefix_monotonicity(fixture, request):
    o = request.getfixturevalue(fixture)
    for u in sorted(o.language(5)):
        for k in range(len(u)):
            smaller = return_group(o, u[:k])
            assert all(membership(smaller, r) for r in return_words(o, u))


@pytest.mark.parametrize("fixture", ["trib", "ex44"])
def test_returns_lie_in_rauzy_group(fixture, request):
    o = request.getfixturevalue(fixture)
    for n in range(1, 5):
        for u in o.language(n):
            gr = rauzy_group(o, u)
            assert all(membership(gr, r) for r in return_words(o, u))


@pytest.mark.parametrize("fixture", ["trib", "ex44", "prop52", "tm"])
def test_rauzy_graphs_strongly_connected(fixture, request):
    o = request.getfixturevalue(fixture)
    assert all(rauzy_graph(o, n).is_strongly_connected() for n in range(6))


def test_code_returns_decompose(trib):
    # returns to a refined code are products of returns to the coarser one
    coarse = return_words_to_set(trib, ["b", "c"])
    fine = return_words_to_set(trib, ["ba", "ca"])
    H = core_graph(sorted(coarse))
    assert all(membership(H, r) for r in fine)


def test_occurrence_prefixes(trib):
    occ = occurrence_prefixes(trib, "aba", 20)
    x = trib.point_prefix(25)
    assert occ.positions == tuple(m for m in range(20) if x.startswith("aba", m))
    assert all(x[len(p):].startswith("aba") for p in occ.members)


def test_welldoc_saturation(trib, ex44):
    assert welldoc_saturates(trib, "aba", abelianization_morphism("abc", 2)) is True
    assert welldoc_saturates(trib, "", abelianization_morphism("abc", 3)) is True
    assert welldoc_saturates(ex44, "aabaa", parse_morphism(oracles.S3_MORPHISM)) is False
