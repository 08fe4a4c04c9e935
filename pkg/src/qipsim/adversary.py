"""Cheating-prover search: empirical lower bounds on the best acceptance.

Classical search enumerates every deterministic prover table within a budget
(step-indexed maps (round, cell symbol, memory) -> (cell', memory'), with
reversibility enforced on the reachable pairs).  The enumeration walks the
joint state: at each round it branches over all injective assignments on the
pairs actually present, which covers every distinct table behaviour without
writing out the full table space.  Subtrees are deduplicated by a canonical
form of the continuation state (normalized, phase-fixed, memory relabelled),
so the returned maximum is exact whenever the node cap is not hit.

Quantum search climbs over per-round dense unitaries acting on the cell and
c prover-tape cells: random-unitary restarts followed by accept-if-better
Givens-rotation moves.  The identity prover and the best classical table are
always in the restart pool, so the result can only improve on them.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .linalg import PRUNE_TOL, norm_sq
from .provers import (ClassicalProverTable, DenseProver, IdentityProver,
                      TableProver, make_classical_prover)
from .qfa import BLANK
from .runtime import QipSystem, default_t_max, run


class BudgetError(RuntimeError):
    pass


@dataclass
class AdversaryBudget:
    memory_states: int = 2
    steps: int = 16
    restarts: int = 8
    iterations: int = 60
    seed: int = 0
    node_cap: int = 2_000_000
    committed_only: bool = False


@dataclass
class AdversaryReport:
    best_p_acc: float
    best_strategy: dict
    strategies_tested: int
    is_exhaustive: bool
    seed: int = 0


# ---------------------------------------------------------------------------
# Exhaustive classical search
# ---------------------------------------------------------------------------

class _ClassicalSearch:
    def __init__(self, system: QipSystem, x: str, budget: AdversaryBudget):
        self.spec = system.verifier
        self.x = x
        self.n = len(x)
        self.width = self.n + 2
        self.budget = budget
        self.memory = tuple(f"m{i}" for i in range(budget.memory_states))
        self.targets = [(g, m) for g in self.spec.comm_alphabet for m in self.memory]
        self.t_max = default_t_max(self.spec, x)
        if self.spec.head_model.one_way:
            self.t_max = self.n + 2
        self.steps = min(budget.steps, self.t_max)
        self.memo: dict = {}
        self.nodes = 0
        self.capped = False

    # -- engine pieces over labels (q, k, gamma, m) --

    def _verifier_round(self, state):
        from .qfa import symbol_at
        out: dict = {}
        delta = self.spec.delta
        for (q, k, g, m), amp in state.items():
            for (q2, g2, d, a) in delta[(q, symbol_at(self.x, k), g)]:
                lbl = (q2, (k + d) % self.width, g2, m)
                v = out.get(lbl)
                out[lbl] = amp * a if v is None else v + amp * a
        acc = 0.0
        cont: dict = {}
        for lbl, amp in out.items():
            if abs(amp) < PRUNE_TOL:
                continue
            q = lbl[0]
            if self.spec.is_halting(q):
                if self.spec.is_accepting(q):
                    acc += abs(amp) ** 2
            else:
                cont[lbl] = amp
        return acc, cont

    def _tail_value(self, state, r) -> float:
        """Identity prover from round r on (past the table budget).

        ``state`` sits just after the round-r measurement, so the remaining
        verifier rounds are r+1 .. t_max.
        """
        acc_total = 0.0
        for _r in range(r + 1, self.t_max + 1):
            acc, state = self._verifier_round(state)
            acc_total += acc
            if not state:
                break
        return acc_total

    def _canonical(self, state):
        if not state:
            return ()
        labels = sorted(state, key=repr)
        norm = math.sqrt(norm_sq(state))
        ref = state[labels[0]]
        scale = 1.0 / (norm * (ref / abs(ref)))
        relabel: dict = {}
        out = []
        for lbl in labels:
            q, k, g, m = lbl
            if m not in relabel:
                relabel[m] = f"c{len(relabel)}"
            a = state[lbl] * scale
            out.append((q, k, g, relabel[m], round(a.real, 9), round(a.imag, 9)))
        return tuple(out)

    def _assignments(self, pairs):
        """Injective maps from the reachable (gamma, memory) pairs."""
        if self.budget.committed_only:
            blank_idx = [i for i, (g, _m) in enumerate(pairs) if g == BLANK]
            for combo in itertools.permutations(self.targets, len(pairs)):
                if all(combo[i][0] == BLANK for i in blank_idx):
                    yield combo
        else:
            yield from itertools.permutations(self.targets, len(pairs))

    def _value(self, state, r) -> float:
        """Max future acceptance from just before the round-r prover move."""
        if not state:
            return 0.0
        if r > self.steps:
            return self._tail_value(state, r)
        total = norm_sq(state)
        key = (r, self._canonical(state))
        hit = self.memo.get(key)
        if hit is not None:
            return hit * total
        self.nodes += 1
        if self.nodes > self.budget.node_cap:
            self.capped = True
            return self._tail_value(state, r)
        pairs = sorted({(g, m) for (_q, _k, g, m) in state})
        best = 0.0
        seen: set = set()
        for combo in self._assignments(pairs):
            mapped = dict(zip(pairs, combo))
            moved = {}
            for (q, k, g, m), amp in state.items():
                g2, m2 = mapped[(g, m)]
                lbl = (q, k, g2, m2)
                v = moved.get(lbl)
                moved[lbl] = amp if v is None else v + amp
            acc, cont = self._verifier_round(moved)
            ckey = self._canonical(cont)
            skey = (round(acc, 12), ckey)
            if skey in seen:
                continue
            seen.add(skey)
            bound = acc + norm_sq(cont)
            if bound <= best + 1e-12:
                continue
            val = acc + self._value(cont, r + 1)
            if val > best:
                best = val
                if best >= total - 1e-12:
                    break
        if not self.capped:
            self.memo[key] = best / total if total > 0 else 0.0
        return best

    def search(self):
        init = {(self.spec.initial, 0, BLANK, self.memory[0]): 1.0 + 0j}
        acc0, state = self._verifier_round(init)
        best = acc0 + self._value(state, 1)
        table = self._replay(state)
        return best, table

    def _replay(self, state) -> ClassicalProverTable:
        """Greedy second pass recovering an optimal table from the memo."""
        entries: dict = {}
        r = 1
        while state and r <= self.steps:
            pairs = sorted({(g, m) for (_q, _k, g, m) in state})
            best_val, best_combo, best_cont = -1.0, None, None
            for combo in self._assignments(pairs):
                mapped = dict(zip(pairs, combo))
                moved = {}
                for (q, k, g, m), amp in state.items():
                    g2, m2 = mapped[(g, m)]
                    lbl = (q, k, g2, m2)
                    moved[lbl] = moved.get(lbl, 0j) + amp
                acc, cont = self._verifier_round(moved)
                val = acc + self._value(cont, r + 1)
                if val > best_val + 1e-12:
                    best_val, best_combo, best_cont = val, mapped, cont
            for (g, m), (g2, m2) in best_combo.items():
                if (g, m) != (g2, m2):
                    entries[(r, g, m)] = (g2, m2)
            state = best_cont
            r += 1
        return ClassicalProverTable(entries=entries, initial_memory=self.memory[0])


def best_classical_prover(system: QipSystem, x: str,
                          budget: AdversaryBudget | None = None) -> AdversaryReport:
    """Exact maximum acceptance over classical prover tables within budget.

    The reported probability is the replayed value of the recovered table, so
    reports are reproducible even when the node cap truncated the search (in
    which case the result is a lower bound and is_exhaustive is False).
    """
    budget = budget or AdversaryBudget()
    search = _ClassicalSearch(system, x, budget)
    best, table = search.search()
    prover = make_classical_prover(table)
    achieved = run(system, prover, x).p_acc
    if not search.capped and abs(achieved - best) > 1e-9:
        raise RuntimeError(
            f"replayed table achieves {achieved}, search reported {best}")
    return AdversaryReport(best_p_acc=achieved,
                           best_strategy=prover.describe(),
                           strategies_tested=search.nodes,
                           is_exhaustive=not search.capped,
                           seed=budget.seed)


# ---------------------------------------------------------------------------
# Quantum hill climbing
# ---------------------------------------------------------------------------

def _random_unitary(rng, dim):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    qmat, rmat = np.linalg.qr(z)
    return qmat * (np.diagonal(rmat) / np.abs(np.diagonal(rmat)))


def _givens(dim, i, j, theta, phi):
    g = np.eye(dim, dtype=complex)
    c, s = math.cos(theta), math.sin(theta)
    g[i, i] = c
    g[j, j] = c
    g[i, j] = -s * np.exp(-1j * phi)
    g[j, i] = s * np.exp(1j * phi)
    return g


def _table_to_dense(table: ClassicalProverTable, comm, tape, c, rounds) -> DenseProver:
    base = len(tape)
    mem_labels = sorted({table.initial_memory}
                        | {m for (_i, _g, m) in table.entries}
                        | {m2 for (_g2, m2) in table.entries.values()})
    if len(mem_labels) > base ** c:
        raise BudgetError(f"{len(mem_labels)} memory states do not fit in {c} tape cells")

    def enc(m):
        v = mem_labels.index(m)
        digits = []
        for _ in range(c):
            digits.append(tape[v % base])
            v //= base
        return tuple(reversed(digits))

    probe = DenseProver(comm, tape, c, [])
    dim = probe.dim
    matrices = []
    for r in range(1, rounds + 1):
        pairs = [(g, m) for g in comm for m in mem_labels]
        mapping = {}
        for (g, m) in pairs:
            g2, m2 = table.entries.get((r, g, m), (g, m))
            mapping[probe._index(g, enc(m))] = probe._index(g2, enc(m2))
        perm = np.zeros((dim, dim), dtype=complex)
        used_dst = set(mapping.values())
        free_dst = [i for i in range(dim) if i not in used_dst]
        for src in range(dim):
            if src in mapping:
                perm[mapping[src], src] = 1.0
            else:
                perm[free_dst.pop(0), src] = 1.0
        matrices.append(perm)
    return DenseProver(comm, tape, c, matrices)


def search_quantum_prover(system: QipSystem, x: str, c: int = 1,
                          budget: AdversaryBudget | None = None,
                          dim_cap: int = 64,
                          classical_seed: AdversaryReport | None = None,
                          ) -> AdversaryReport:
    """Heuristic lower bound on the optimum over quantum provers.

    Never exhaustive; the report's strategy reproduces best_p_acc exactly.
    """
    budget = budget or AdversaryBudget()
    spec = system.verifier
    comm, tape = spec.comm_alphabet, spec.prover_alphabet
    dim = len(comm) * len(tape) ** c
    if dim > dim_cap:
        raise BudgetError(f"dense dimension {dim} exceeds cap {dim_cap}")
    rounds = min(budget.steps, default_t_max(spec, x))
    rng = np.random.default_rng(budget.seed)
    tested = 0

    def evaluate(prover):
        nonlocal tested
        tested += 1
        return run(system, prover, x).p_acc

    best_p = evaluate(IdentityProver())
    best_desc = {"kind": "identity"}

    if classical_seed is None:
        classical_seed = best_classical_prover(system, x, budget)
    if classical_seed.best_p_acc > best_p:
        best_p = classical_seed.best_p_acc
        best_desc = classical_seed.best_strategy

    seed_matrices = None
    if classical_seed.best_strategy.get("kind") == "classical_table":
        entries = {}
        for key, (g2, m2) in classical_seed.best_strategy["entries"].items():
            i, g, m = key.split("|")
            entries[(int(i), g, m)] = (g2, m2)
        table = ClassicalProverTable(
            entries=entries,
            initial_memory=classical_seed.best_strategy["initial_memory"])
        try:
            seed_matrices = _table_to_dense(table, comm, tape, c, rounds).matrices
        except BudgetError:
            seed_matrices = None

    for restart in range(budget.restarts):
        if restart == 0 and seed_matrices is not None:
            mats = [m.copy() for m in seed_matrices]
        elif restart == 1:
            mats = [np.eye(dim, dtype=complex) for _ in range(rounds)]
        else:
            mats = [_random_unitary(rng, dim) for _ in range(rounds)]
        prover = DenseProver(comm, tape, c, mats)
        cur = evaluate(prover)
        sigma = 0.8
        for _it in range(budget.iterations):
            r = int(rng.integers(rounds))
            i, j = rng.choice(dim, size=2, replace=False)
            theta = rng.normal() * sigma
            phi = rng.uniform(0, 2 * math.pi)
            g = _givens(dim, int(i), int(j), theta, phi)
            old = prover.matrices[r]
            prover.matrices[r] = g @ old
            prover.invalidate(r)
            val = evaluate(prover)
            if val > cur:
                cur = val
            else:
                prover.matrices[r] = old
                prover.invalidate(r)
            sigma = max(0.05, sigma * 0.97)
        if cur > best_p:
            best_p = cur
            best_desc = prover.describe()

    return AdversaryReport(best_p_acc=best_p, best_strategy=best_desc,
                           strategies_tested=tested, is_exhaustive=False,
                           seed=budget.seed)


# ---------------------------------------------------------------------------
# Replay
# ---------------------------------------------------------------------------

def prover_from_description(desc: dict, spec=None):
    """Rebuild a strategy from a report's embedded description."""
    kind = desc.get("kind")
    if kind == "identity":
        return IdentityProver()
    if kind == "classical_table":
        entries = {}
        for key, (g2, m2) in desc["entries"].items():
            i, g, m = key.split("|")
            entries[(int(i), g, m)] = (g2, m2)
        return TableProver(ClassicalProverTable(entries=entries,
                                                initial_memory=desc["initial_memory"]))
    if kind == "dense":
        dim = len(desc["comm_alphabet"]) * len(desc["tape_alphabet"]) ** desc["c"]
        mats = [np.array([complex(re, im) for re, im in m], dtype=complex).reshape(dim, dim)
                for m in desc["matrices"]]
        return DenseProver(desc["comm_alphabet"], desc["tape_alphabet"], desc["c"], mats)
    raise ValueError(f"unknown strategy description {kind!r}")


def replay(system: QipSystem, x: str, report: AdversaryReport) -> float:
    """Re-run the reported strategy; must reproduce best_p_acc within 1e-9."""
    prover = prover_from_description(report.best_strategy, system.verifier)
    return run(system, prover, x).p_acc
