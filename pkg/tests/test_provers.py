import numpy as np
import pytest

from qipsim.provers import (ClassicalProverTable, DenseProver, EraseAllProver,
                            IdentityProver, ReversibilityError, ScriptedProver,
                            check_committed, densify_schedule,
                            make_classical_prover)
from qipsim.qfa import BLANK


def test_identity_table_is_identity_prover():
    table = ClassicalProverTable(entries={(1, "a", "m0"): ("a", "m0")})
    prover = make_classical_prover(table)
    assert prover.apply("x", 1, "a", "m0") == [("a", "m0", 1.0)]
    assert prover.apply("x", 5, "b", "m1") == [("b", "m1", 1.0)]


def test_collision_raises_naming_pair():
    table = ClassicalProverTable(entries={
        (1, "a", "m0"): ("#", "m0"),
        (1, "b", "m0"): ("#", "m0"),
    })
    with pytest.raises(ReversibilityError, match="both map to"):
        make_classical_prover(table)


def test_check_committed_identity():
    for x in ("", "ab", "abba"):
        assert check_committed(IdentityProver(), x, 2 * (len(x) + 2) ** 2,
                               comm_alphabet=(BLANK, "a", "b"))


def test_check_committed_blank_violation():
    bad = ScriptedProver(script_builder=lambda x: {1: {BLANK: "a"}}, name="bad")
    assert not check_committed(bad, "", 2, comm_alphabet=(BLANK, "a"))


def test_erase_all_is_committed():
    assert check_committed(EraseAllProver(), "10", 8, comm_alphabet=(BLANK, "a"))


def test_odd_honest_committed(odd):
    assert check_committed(odd.honest_prover, "10", 4,
                           comm_alphabet=odd.verifier.comm_alphabet)


def test_scripted_prover_records_consumed_symbol():
    p = ScriptedProver(script_builder=lambda x: {2: {"a": BLANK}}, name="t")
    assert p.apply("x", 1, "a", "") == [("a", "", 1.0)]
    [(g2, y2, amp)] = p.apply("x", 2, "a", "")
    assert (g2, y2) == (BLANK, "|a")
    [(g2, y2, amp)] = p.apply("x", 2, BLANK, "|a")
    assert (g2, y2) == (BLANK, "|a|" + BLANK)


def test_dense_prover_round_matrices_permute():
    mats = [np.eye(6, dtype=complex)]
    p = DenseProver((BLANK, "a"), (BLANK, "a", "b"), 1, mats)
    assert p.apply("x", 1, "a", ("b",)) == [("a", ("b",), 1.0)]
    assert p.apply("x", 9, "a", ("b",)) == [("a", ("b",), 1.0 + 0j)]


def test_densify_schedule_reproduces_visible_pairs():
    visible = [(BLANK, BLANK), ("a", BLANK), (BLANK, "a")]
    p = densify_schedule(visible, (BLANK, "a"), (BLANK, "a", "b"), 3)
    y = p.initial_tape("")
    for i, (seen, written) in enumerate(visible, start=1):
        [(g2, y2, amp)] = p.apply("", i, seen, y)
        assert g2 == written and amp == pytest.approx(1.0)
        y = y2
    for m in p.matrices:
        assert np.allclose(np.abs(m @ m.conj().T), np.eye(p.dim), atol=1e-12)


def test_densify_rejects_small_tape():
    with pytest.raises(ValueError, match="cannot encode"):
        densify_schedule([(BLANK, BLANK)] * 30, (BLANK,), (BLANK, "a"), 2)
