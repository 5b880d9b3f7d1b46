import random

import pytest
from hypothesis import given, strategies as st

import oracles
from retword.freegroup import (
    FreeMorphism,
    GroupWord,
    abelianize,
    abelianize_mod,
    canonical_form,
    conjugate,
    core_graph,
    determinant,
    hermite_normal_form,
    injective_on,
    invert,
    is_conjugate,
    is_full,
    is_proper,
    lattice,
    lattice_equal,
    lattice_full,
    lattice_image,
    membership,
    morphism_image,
    rank,
    reduce,
    smith_diagonal,
    subgroup_equal,
    subgroup_leq,
)


def gw(text):
    return GroupWord.parse(text)


def test_reduce():
    assert reduce([("a", 1), ("b", 1), ("b", -1), ("c", 1)]) == "ac"
    assert reduce([("a", 1), ("a", -1)]) == GroupWord()
    assert str(GroupWord()) == "ε"
    assert gw("baa").inverse() * gw("baaca") == "ca"


def test_conjugate_and_invert():
    assert conjugate("b", "a") == gw("a'ba")
    assert str(invert("abac")) == "c'a'b'a'"
    assert conjugate("", "abc") == GroupWord()


def test_small_core_graph():
    H = core_graph(["aa", "ab"])
    assert (H.size, len(H.edges), H.rank) == (2, 3, 2)
    trivial = core_graph([])
    assert (trivial.size, trivial.rank) == (1, 0)


def test_membership_examples():
    H = core_graph(["aa", "ab"])
    assert not membership(H, "aab")
    assert membership(H, gw("aa") * gw("ab").inverse())
    assert not oracles.naive_member(["aa", "ab"], "aab")


def test_tribonacci_returns_form_a_basis():
    H = core_graph(["ab", "aba", "abac"])
    assert H.rank == 3
    assert is_full(H, "abc")


def test_subgroup_relations():
    assert subgroup_equal(["a"], [gw("a'")])
    assert is_proper(["aa"], ["a"])
    assert not subgroup_leq(["a"], ["aa"])


def test_conjugacy():
    assert is_conjugate(["ab"], ["ba"])
    assert not is_conjugate(["aa"], ["ab"])


def test_canonical_form_ignores_order():
    assert canonical_form(["aa", "ab"]) == canonical_form(["ab", "aa"])
    assert canonical_form(["a"]) == canonical_form([gw("a'")])


def test_morphism_image_and_injectivity():
    assert subgroup_equal(morphism_image(FreeMorphism({"a": "a", "b": "b"}), ["ab", "ba"]), ["ab", "ba"])
    assert subgroup_equal(morphism_image(FreeMorphism({"a": "ab", "b": "a"}), ["a"]), ["ab"])
    assert not injective_on(FreeMorphism({"a": "a", "b": "a"}), ["a", "b"])
    assert injective_on(FreeMorphism({"a": "a", "b": "b"}), ["ab", "bb"])


def test_dot_marks_basepoint():
    dot = core_graph(["ab"]).to_dot()
    assert "0 [shape=doublecircle]" in dot
    assert 'label="a"' in dot


def test_abelianize():
    assert abelianize("abac", "abc") == (2, 1, 1)
    assert abelianize(gw("aba'"), "abc") == (0, 1, 0)
    assert abelianize_mod("aba", 2, "abc") == (0, 1, 0)


def test_lattices():
    trib = lattice([(1, 1, 0), (2, 1, 0), (2, 1, 1)])
    assert lattice_full(trib)
    assert abs(determinant([[1, 1, 0], [2, 1, 0], [2, 1, 1]])) == 1
    L = lattice([(2, 0), (0, 2)])
    assert not L.is_full and L.elementary_divisors == (2, 2)
    assert not lattice([], 3).is_full
    assert lattice_equal(lattice([(1, 2), (0, 3)]), lattice([(1, 5), (0, 3)]))
    assert lattice_image([[2, 0], [0, 1]], lattice([(1, 0), (0, 1)])).elementary_divisors == (1, 2)


def test_smith_diagonal():
    assert smith_diagonal([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]) == [2, 6, 12]


def test_hnf_is_canonical():
    rows = [(4, 6, 2), (2, 3, 1), (0, 2, 8)]
    rng = random.Random(3)
    for _ in range(20):
        # adding multiples of one generator to the others keeps the lattice
        ks = [rng.randint(-3, 3) for _ in rows]
        mixed = [tuple(a + k * b for a, b in zip(r, rows[1])) for r, k in zip(rows, ks)]
        mixed.append(rows[1])
        assert hermite_normal_form(mixed, 3) == hermite_normal_form(rows, 3)


signed = st.tuples(st.sampled_from("ab"), st.sampled_from([1, -1]))
small_words = st.lists(signed, min_size=1, max_size=3).map(lambda xs: GroupWord(xs)).filter(bool)
generator_sets = st.lists(small_words, min_size=1, max_size=3)


@given(generator_sets, st.randoms())
def test_fold_order_does_not_matter(gens, rnd):
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    extra = shuffled + [shuffled[0] * shuffled[-1]]
    assert canonical_form(gens) == canonical_form(shuffled) == canonical_form(extra)


@given(generator_sets, st.lists(signed, max_size=6))
def test_membership_agrees_with_naive_folding(gens, letters):
    g = GroupWord(letters)
    assert membership(gens, g) == oracles.naive_member([h.letters for h in gens], g.letters)


@given(generator_sets)
def test_products_of_generators_are_members(gens):
    H = core_graph(gens)
    for p in oracles.products([h.letters for h in gens], 3):
        assert GroupWord(p) in H


@given(generator_sets)
def test_rank_at_most_generator_count(gens):
    assert rank(gens) <= len(gens)


@given(generator_sets, small_words)
def test_conjugacy_invariant(gens, p):
    conj = [conjugate(g, p) for g in gens]
    assert is_conjugate(gens, conj)


@given(generator_sets)
def test_basis_lattice_matches_generator_lattice(gens):
    H = core_graph(gens)
    from_gens = lattice([abelianize(g, "ab") for g in gens], 2)
    from_basis = lattice([abelianize(g, "ab") for g in H.basis], 2)
    assert lattice_equal(from_gens, from_basis)


@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4)), max_size=5))
def test_lattice_fullness_matches_minors(vectors):
    assert lattice(vectors, 3).is_full == oracles.lattice_full_by_minors(vectors, 3)


@pytest.mark.parametrize("text", ["ab'c", "a'a", "cc'b"])
def test_parse_roundtrip(text):
    g = gw(text)
    assert gw(str(g)) == g if g else str(g) == "ε"
