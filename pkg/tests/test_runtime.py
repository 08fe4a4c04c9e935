import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import qipsim.languages as lang
from qipsim.provers import DenseProver, EraseAllProver, IdentityProver, densify_schedule
from qipsim.qfa import BLANK
from qipsim.runtime import (RunError, count_interactions, expected_halting_time,
                            measure_every_run, query_weight, run, visible_schedule)


def assert_conserved(res):
    running = 0.0
    profile = dict((r, a + b) for (r, a, b) in res.halting_profile)
    for i, cont in enumerate(res.cont_trace, start=1):
        running += profile.get(i, 0.0)
        assert abs(running + cont - 1.0) <= 1e-9


def test_run_zero_public_honest(zero_public):
    res = run(zero_public, zero_public.honest_prover, "0", 16)
    assert res.p_acc == pytest.approx(1.0, abs=1e-9)
    assert_conserved(res)


def test_run_pal_sharp_honest_member(pal2):
    res = run(pal2, pal2.honest_prover, "01#10", 64)
    assert res.p_acc == pytest.approx(1.0, abs=1e-9)
    assert_conserved(res)


def test_run_pal_sharp_identity_rejects(pal2):
    res = run(pal2, IdentityProver(), "01#10", 64)
    assert res.p_rej >= 0.75


def test_expected_halting_time_values(zero_public, la_mo, pal1):
    assert expected_halting_time(zero_public, zero_public.honest_prover, "0") == (3.0, True)
    assert expected_halting_time(la_mo, la_mo.honest_prover, "") == (2.0, True)
    lower, known = expected_halting_time(pal1, pal1.honest_prover, "0#0")
    assert known and lower <= 64


def test_count_interactions_odd(odd):
    assert count_interactions(odd, odd.honest_prover, "10") == 1
    assert count_interactions(odd, odd.honest_prover, "0") == 0
    assert count_interactions(odd, IdentityProver(), "11") == 1


def test_count_interactions_needs_flag(zero_public):
    with pytest.raises(RunError, match="interaction-bounded"):
        count_interactions(zero_public, IdentityProver(), "0")


def test_count_interactions_needs_committed(odd):
    from qipsim.provers import ScriptedProver
    chatty = ScriptedProver(script_builder=lambda x: {1: {BLANK: "a"}}, name="chatty")
    with pytest.raises(RunError, match="committed"):
        count_interactions(odd, chatty, "10")


def test_query_weight_examples(odd):
    spec = odd.verifier
    assert query_weight(spec, "", "01") == pytest.approx(1.0, abs=1e-9)
    assert query_weight(spec, "", "00") == pytest.approx(0.0, abs=1e-12)
    assert query_weight(spec, "01", "") == 0.0


def test_query_weight_two_way_rejected(pal1):
    with pytest.raises(RunError, match="one-way"):
        query_weight(pal1.verifier, "", "0")


@settings(max_examples=40, deadline=None)
@given(st.text(alphabet="01", max_size=6), st.text(alphabet="01", max_size=6))
def test_query_weight_additive(odd, x, y):
    spec = odd.verifier
    lhs = query_weight(spec, "", x) + query_weight(spec, x, y)
    rhs = query_weight(spec, "", x + y)
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_measure_once_equals_measure_every_when_no_early_halt(la_mo):
    # the acceptor never enters halting states before the right endmarker, so
    # intermediate measurements take no mass and both runs agree
    for x in ("", "a", "aa", "aaa"):
        mo = run(la_mo, la_mo.honest_prover, x)
        me = measure_every_run(la_mo.verifier, la_mo.honest_prover, x)
        assert mo.p_acc == pytest.approx(me.p_acc, abs=1e-9)
        assert mo.p_rej == pytest.approx(me.p_rej, abs=1e-9)


@pytest.mark.parametrize("x", ["", "0", "10", "0110", "010101"])
def test_dense_sparse_agreement_zero_public(zero_public, x):
    schedule = visible_schedule(zero_public, x)
    dense = densify_schedule(schedule, zero_public.verifier.comm_alphabet,
                             zero_public.verifier.prover_alphabet, 3)
    sparse_res = run(zero_public, zero_public.honest_prover, x)
    dense_res = run(zero_public, dense, x)
    assert dense_res.p_acc == pytest.approx(sparse_res.p_acc, abs=1e-9)


@pytest.mark.parametrize("x", ["", "1", "10", "0100", "110100"])
def test_dense_sparse_agreement_odd(odd, x):
    schedule = visible_schedule(odd, x)
    dense = densify_schedule(schedule, odd.verifier.comm_alphabet,
                             odd.verifier.prover_alphabet, 2)
    assert run(odd, dense, x).p_acc == pytest.approx(
        run(odd, odd.honest_prover, x).p_acc, abs=1e-9)


def test_conservation_each_round_two_way(center2):
    for x in ("010", "001", "0110"):
        res = run(center2, center2.honest_prover, x)
        assert_conserved(res)
        assert res.max_conservation_error <= 1e-9 * max(1, res.rounds_executed)


def test_truncation_flag():
    import qipsim as q
    from qipsim.provers import ScriptedProver
    # a center verifier starved of its signal walks q3 to the right endmarker
    # and halts there; with the honest prover and tiny t_max it truncates
    c = q.center_protocol(2)
    res = run(c, c.honest_prover, "010", t_max=3)
    assert res.truncated and res.p_cont > 0.9


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 30), st.text(alphabet="01", max_size=5))
def test_random_classical_provers_conserve_probability(odd, seed, x):
    import random as _random

    from qipsim.provers import ClassicalProverTable, make_classical_prover

    rng = _random.Random(seed)
    pairs = [(g, m) for g in (BLANK, "a") for m in ("m0", "m1")]
    entries = {}
    for r in range(1, len(x) + 2):
        targets = rng.sample(pairs, len(pairs))
        for (g, m), (g2, m2) in zip(pairs, targets):
            if (g, m) != (g2, m2):
                entries[(r, g, m)] = (g2, m2)
    prover = make_classical_prover(ClassicalProverTable(entries, "m0"))
    res = run(odd, prover, x)
    assert res.p_acc + res.p_rej + res.p_cont == pytest.approx(1.0, abs=1e-9)
    assert res.max_conservation_error <= 1e-9 * max(1, res.rounds_executed)
