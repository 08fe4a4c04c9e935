import pytest

from qipsim.automata import (AutomatonError, Dfa, Npfa, Rfa, all_a_rfa,
                             even_a_rfa, npfa_choice, npfa_coin, npfa_policy,
                             npfa_single_a, npfa_value, zero_dfa)
from qipsim.qfa import LEFT_END, RIGHT_END


def test_dfa_completeness_enforced():
    with pytest.raises(AutomatonError, match="missing transition"):
        Dfa(states=("a",), alphabet=("0",), initial="a",
            accepting=frozenset(), delta={})


def test_zero_dfa_examples():
    m = zero_dfa()
    assert m.accepts("0") and m.accepts("10") and not m.accepts("01")
    assert not m.accepts("")


def test_rfa_reversibility_enforced():
    with pytest.raises(AutomatonError, match="not reversible"):
        Rfa(non_halting=("s", "p", "q"), accepting=("y",), rejecting=(),
            initial="s", alphabet=("a",),
            delta={("s", LEFT_END): "p", ("p", "a"): "q", ("q", "a"): "q",
                   ("q", RIGHT_END): "y"})


def test_rfa_initial_not_reentered():
    with pytest.raises(AutomatonError, match="re-entered"):
        Rfa(non_halting=("s",), accepting=("y",), rejecting=(),
            initial="s", alphabet=("a",),
            delta={("s", "a"): "s", ("s", RIGHT_END): "y"})


def test_even_a_rfa_semantics():
    m = even_a_rfa()
    assert m.accepts("") is True
    assert m.accepts("a") is False
    assert m.accepts("aa") is True


def test_all_a_rfa():
    m = all_a_rfa()
    assert all(m.accepts("a" * k) is True for k in range(5))


def test_npfa_coin_structure_enforced():
    with pytest.raises(AutomatonError, match="two rightward"):
        Npfa(prob_states=("c",), nondet_states=(), accepting=("y",),
             rejecting=("n",), initial="c", alphabet=("a",),
             delta={("c", LEFT_END): (("y", 1),)})


def test_npfa_values():
    horizon = 40
    assert npfa_value(npfa_single_a(), "a", horizon) == pytest.approx(1.0)
    assert npfa_value(npfa_single_a(), "aa", horizon) == pytest.approx(0.0)
    assert npfa_value(npfa_coin(), "", horizon) == pytest.approx(0.5)
    assert npfa_value(npfa_choice(), "aaa", horizon) == pytest.approx(1.0)


def test_npfa_policy_prefers_accepting_branch():
    policy, values = npfa_policy(npfa_choice(), "a", 40)
    assert policy[("n0", 0)] == ("g", 1)
    assert values[("g", 1)] == pytest.approx(1.0)
