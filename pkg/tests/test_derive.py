import pytest

import oracles
from retword.derive import (
    ChainCapExceeded,
    DecompositionError,
    NotAPrefix,
    NotPurelySubstitutive,
    compose_all,
    decompose,
    derivating_substitution,
    derivation_cycle,
    derived_oracle,
    generating_power,
    ordered_returns,
    return_substitution,
)
from retword.freegroup import core_graph
from retword.shift import return_words
from retword.words import apply, oracle_for, parse_substitution


def rules(s):
    return s.as_dict()


@pytest.fixture(scope="module")
def record(ex44):
    return derivation_cycle(ex44)


def test_thetas_match_display(record):
    assert [rules(t) for t in record.thetas] == [
        {"1": "a", "2": "b", "3": "c"},
        {"1": "1", "2": "12", "3": "132", "4": "122"},
        {"1": "12", "2": "123", "3": "14", "4": "13", "5": "1233"},
        {"1": "12", "2": "1234", "3": "15", "4": "134", "5": "123434"},
    ]


def test_return_substitutions_match_display(record):
    assert rules(record.sigmas[1]) == {"1": "12", "2": "123", "3": "1413", "4": "1233"}
    assert rules(record.sigmas[2]) == {"1": "12", "2": "1234", "3": "15", "4": "134", "5": "123434"}
    assert record.sigmas[2] == record.sigmas[3]


def test_cycle_psi_alpha(record):
    assert (record.i, record.j) == (2, 3)
    assert record.prefixes[:4] == ["", "a", "aa", "aabaa"]
    assert rules(record.psi) == {"1": "aab", "2": "aabacb", "3": "aabb", "4": "aacb", "5": "aabacbacb"}
    assert rules(record.alpha) == {"1": "12", "2": "1234", "3": "15", "4": "134", "5": "123434"}
    assert record.C == ("1", "2", "3", "4", "5")


@pytest.mark.parametrize("n", [0, 1, 2])
def test_cycle_reproduces_return_sets(record, n):
    assert record.verify(n)


def test_cycle_prefixes(record):
    assert record.u(0) == "aa"
    assert record.u(1) == "aabaa"
    assert record.u(2) == "aabaabacbaabaa"


def test_chain_thetas_derive_each_prefix(record, ex44):
    # θ_0 ⋯ θ_n codes the return words to v^(n)
    for n in range(4):
        chain = compose_all(record.thetas[: n + 1])
        assert set(chain.images) == return_words(ex44, record.prefixes[n]).as_set()


@pytest.mark.parametrize("text", [oracles.TRIBONACCI, oracles.EX_DERIVATION, oracles.PROP_COUNTER, oracles.FIBONACCI])
def test_conjugation_identity(text):
    # θ σ_u = σ^k θ for every prefix tried
    o = oracle_for(text)
    sk = generating_power(o)
    x = o.point_prefix(6)
    for m in range(5):
        step = derivating_substitution(o, x[:m])
        for c in step.alphabet:
            assert apply(step.theta, step.sigma[c]) == apply(sk, step.theta[c])


def test_ordered_returns_follow_first_occurrence(trib):
    rets = ordered_returns(trib, "a")
    x = trib.point_prefix(200)
    firsts = [min(i for i in range(len(x)) if x.startswith(r + "a", i) and x[i] == "a") for r in rets]
    assert rets == ("ab", "ac", "a")
    assert set(rets) == oracles.brute_returns(oracles.TRIBONACCI, "a")
    assert firsts == sorted(firsts)


def test_decompose_roundtrip(trib):
    step = derivating_substitution(trib, "ab")
    index = {r: c for c, r in zip(step.alphabet, step.theta.images)}
    z = "1213121"
    assert decompose(apply(step.theta, z), "ab", index) == z
    with pytest.raises(DecompositionError):
        decompose("ba", "ab", index)


def test_prop_counter_return_substitution(prop52):
    assert prop52.seed == ("b", 2)
    assert rules(return_substitution(prop52, "b")) == {
        "1": "123334", "2": "123232533", "3": "123233", "4": "12333632734",
        "5": "12323232736533", "6": "12333632736533", "7": "12323232734",
    }


def test_tribonacci_cycle(trib):
    rec = derivation_cycle(trib)
    assert len(rec.C) == 3
    for n in range(3):
        assert rec.verify(n)
        assert core_graph(sorted(rec.returns_from_cycle(n))).rank == 3


def test_tribonacci_is_self_derived(trib):
    derived = derived_oracle(trib, "a")
    assert derived.alphabet == ("1", "2", "3")
    assert [derived.complexity(n) for n in range(1, 8)] == [trib.complexity(n) for n in range(1, 8)]


def test_unary_cycle():
    rec = derivation_cycle(oracle_for("a->aa"))
    assert all(len(t.domain) == 1 for t in rec.thetas)
    assert (rec.i, rec.j) == (0, 1)


def test_empty_prefix_is_renaming(ex44):
    step = derivating_substitution(ex44, "")
    assert rules(step.theta) == {"1": "a", "2": "b", "3": "c"}
    assert rules(step.sigma) == {"1": "112", "2": "132", "3": "21"}


def test_derived_oracle_off_prefix(trib):
    # "c" is not a prefix of the point, so the derived language is read through θ
    d = derived_oracle(trib, "c")
    thetas = dict(zip(d.alphabet, d.returns))
    assert set(d.returns) == return_words(trib, "c").as_set()
    for z in d.language(3):
        assert "".join(thetas[c] for c in z) + "c" in trib


def test_errors(trib):
    with pytest.raises(NotAPrefix):
        derivating_substitution(trib, "b")
    with pytest.raises(NotPurelySubstitutive):
        derivation_cycle(oracle_for(oracles.TRIBONACCI, "a->x;b->y;c->y"))
    with pytest.raises(ChainCapExceeded):
        derivation_cycle(trib, cap=0)


def test_derived_shift_of_prop_counter_is_substitutive(prop52):
    derived = derived_oracle(prop52, "b")
    assert derived.sigma == parse_substitution(
        "1->123334;2->123232533;3->123233;4->12333632734;"
        "5->12323232736533;6->12333632736533;7->12323232734"
    )
