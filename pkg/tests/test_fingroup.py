import pytest
from hypothesis import given, strategies as st

import oracles
from retword.fingroup import (
    FiniteMorphism,
    ModVec,
    MorphismSyntaxError,
    Perm,
    SizeExceeded,
    abelianization_morphism,
    closure,
    conjugate_subgroups,
    evaluate,
    is_full,
    parse_morphism,
)
from retword.freegroup import GroupWord, abelianize_mod, lattice

S3 = parse_morphism(oracles.S3_MORPHISM)


def test_parse_and_describe():
    assert S3.backend == "perm"
    assert S3.describe() == "perm: a->(1 2 3); b->(1 2); c->(1 2 3)"
    mod = parse_morphism("mod 2: a->[1,0]; b->[0,1]")
    assert mod.backend == "mod" and str(mod.images["b"]) == "[0,1]"


@pytest.mark.parametrize("text", ["a->(1 2)", "perm: a->(1 1)", "mod 0: a->[1]", "group: a->x", "perm: a->(1 2); a->(2 3)"])
def test_parse_errors(text):
    with pytest.raises(MorphismSyntaxError):
        parse_morphism(text)


def test_composition_is_right_to_left():
    f, g = Perm.from_cycles([(1, 2, 3)], 3), Perm.from_cycles([(1, 2)], 3)
    assert (f * g).images == oracles.perm_compose(f.images, g.images)


def test_evaluate_examples():
    assert str(evaluate(S3, "aab")) == "(2 3)"
    assert evaluate(S3, "").is_identity()
    mod = parse_morphism("mod 2: a->[1,0]; b->[0,1]")
    assert str(evaluate(mod, GroupWord.parse("aba'"))) == "[0,1]"


def test_closure_examples():
    t = Perm.from_cycles([(2, 3)], 3)
    assert sorted(map(str, closure([t]))) == ["(2 3)", "id"]
    assert closure([], one=Perm.identity(3)) == {Perm.identity(3)}
    assert len(closure([ModVec(2, (1, 0)), ModVec(2, (0, 1))])) == 4
    assert len(S3.group) == 6


def test_closure_cap():
    with pytest.raises(SizeExceeded):
        closure([ModVec(1000, (1, 0)), ModVec(1000, (0, 1))], cap=1000)


def test_fullness():
    assert not is_full([Perm.from_cycles([(2, 3)], 3)], S3)
    assert is_full(S3.images.values(), S3)


def test_conjugate_subgroups():
    G = S3.images.values()
    assert conjugate_subgroups([Perm.from_cycles([(1, 2)], 3)], [Perm.from_cycles([(2, 3)], 3)], G)
    assert not conjugate_subgroups([Perm.from_cycles([(1, 2, 3)], 3)], [Perm.from_cycles([(1, 2)], 3)], G)
    assert conjugate_subgroups([Perm.from_cycles([(1, 2)], 3)], [Perm.from_cycles([(1, 2)], 3)], G)


def test_mod_fullness_matches_lattice():
    vecs = [(1, 1), (1, 3)]
    for k in (2, 3, 4):
        phi = abelianization_morphism("ab", k)
        sub = [ModVec(k, v) for v in vecs]
        lifted = lattice(vecs + [(k, 0), (0, k)])
        assert is_full(sub, phi) == lifted.is_full


signed = st.tuples(st.sampled_from("abc"), st.sampled_from([1, -1]))
group_words = st.lists(signed, max_size=8).map(GroupWord)


@given(group_words, group_words)
def test_evaluate_is_a_homomorphism(g, h):
    assert evaluate(S3, g * h) == evaluate(S3, g) * evaluate(S3, h)


@given(group_words, st.integers(2, 6))
def test_mod_backend_is_abelianization(g, k):
    phi = abelianization_morphism("abc", k)
    assert evaluate(phi, g).entries == abelianize_mod(g, k, "abc")


@given(st.lists(group_words, max_size=3))
def test_closure_is_a_subgroup_of_lagrange_size(words):
    sub = closure([evaluate(S3, w) for w in words], one=S3.one)
    assert closure(sub, one=S3.one) == sub
    assert len(S3.group) % len(sub) == 0
