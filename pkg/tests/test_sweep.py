import pytest

from qipsim.adversary import AdversaryBudget
from qipsim.sweep import sweep
from qipsim.tiling import SizeError


def test_zero_public_sweep_matches_membership(zero_public):
    rows = sweep(zero_public, 2, budget=AdversaryBudget(memory_states=2, steps=4))
    assert [r.x for r in rows] == ["", "0", "1", "00", "01", "10", "11"]
    for r in rows:
        want = 1.0 if r.member else 0.0
        assert r.honest_p_acc == pytest.approx(want, abs=1e-9)
        assert r.adversary_p_acc == pytest.approx(want, abs=1e-6)


def test_la_mo_sweep_empty_string(la_mo):
    rows = sweep(la_mo, 0, budget=AdversaryBudget(memory_states=1, steps=2))
    assert len(rows) == 1
    row = rows[0]
    assert (row.x, row.member) == ("", False)
    assert row.honest_p_acc == pytest.approx(0.0, abs=1e-12)
    assert row.adversary_p_acc == pytest.approx(0.0, abs=1e-9)


def test_odd_sweep_honest_column_is_indicator(odd):
    rows = sweep(odd, 2, budget=AdversaryBudget(memory_states=1, steps=4))
    for r in rows:
        assert r.honest_p_acc == pytest.approx(1.0 if r.member else 0.0, abs=1e-9)


def test_sweep_cap(zero_public):
    with pytest.raises(SizeError):
        sweep(zero_public, 20, cap=100)
