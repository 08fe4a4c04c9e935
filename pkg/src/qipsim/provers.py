"""Prover strategies.

A prover acts once per round on the pair (communication symbol, private tape
string).  Strategies are stateless: every call gets the input word, the round
index (1-based) and the visible pair, and returns a finite superposition of
replacement pairs.  Sparse strategies grow the tape string on demand; dense
strategies act by an explicit unitary on the first ``c`` tape cells.

Honest provers are realized as per-round classical scripts.  A scripted round
either leaves everything alone or rewrites the cell symbol and pushes the
symbol it consumed onto the tape, which makes every round an isometry on the
whole visible space regardless of the rewrite map.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qfa import BLANK


class ReversibilityError(ValueError):
    """A classical table is not injective, so it has no unitary realization."""


class ProverStrategy:
    """Base contract; subclasses implement apply()."""

    mode = "sparse"

    def initial_tape(self, x: str) -> str:
        return ""

    def apply(self, x: str, i: int, gamma: str, y: str):
        """Return a list of (gamma', y', amplitude) for round i."""
        raise NotImplementedError

    def describe(self) -> dict:
        return {"kind": type(self).__name__}


class IdentityProver(ProverStrategy):
    """The prover that never touches anything; trivially committed."""

    def apply(self, x, i, gamma, y):
        return [(gamma, y, 1.0 + 0j)]

    def describe(self):
        return {"kind": "identity"}


@dataclass
class ScriptedProver(ProverStrategy):
    """Classical per-round rewrite maps over the cell symbol.

    ``script(x)`` produces a dict {round index: {gamma: gamma'}}.  Rounds
    absent from the dict act as the identity.  Active rounds append the
    consumed symbol to the tape, so the round action is injective for any
    rewrite map; symbols missing from a round's map pass through unchanged
    (still recorded).
    """

    script_builder: object  # callable x -> dict[int, dict[str, str]]
    name: str = "scripted"
    _cache: dict = field(default_factory=dict, repr=False)

    def _script(self, x: str) -> dict:
        if x not in self._cache:
            self._cache[x] = self.script_builder(x)
        return self._cache[x]

    def apply(self, x, i, gamma, y):
        rule = self._script(x).get(i)
        if rule is None:
            return [(gamma, y, 1.0 + 0j)]
        return [(rule.get(gamma, gamma), f"{y}|{gamma}", 1.0 + 0j)]

    def describe(self):
        return {"kind": "scripted", "name": self.name}


class EraseAllProver(ProverStrategy):
    """Rewrite any non-blank cell to blank, every round, recording the symbol.

    This is the honest strategy for the regular-language eraser protocol and
    for the erase-on-query protocols; it is committed (blanks stay blank).
    """

    def apply(self, x, i, gamma, y):
        if gamma == BLANK:
            return [(BLANK, y, 1.0 + 0j)]
        return [(BLANK, f"{y}|{gamma}", 1.0 + 0j)]

    def describe(self):
        return {"kind": "erase_all"}


# ---------------------------------------------------------------------------
# Classical prover tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassicalProverTable:
    """Deterministic step-indexed map (i, cell symbol, memory) -> (cell', memory').

    Pairs not listed act as the identity.  Memory states are opaque labels.
    """

    entries: dict[tuple[int, str, str], tuple[str, str]]
    initial_memory: str = "m0"

    def rounds(self):
        return sorted({i for (i, _g, _m) in self.entries})


class TableProver(ProverStrategy):
    def __init__(self, table: ClassicalProverTable):
        self.table = table

    def initial_tape(self, x):
        return self.table.initial_memory

    def apply(self, x, i, gamma, y):
        g2, m2 = self.table.entries.get((i, gamma, y), (gamma, y))
        return [(g2, m2, 1.0 + 0j)]

    def describe(self):
        return {"kind": "classical_table",
                "initial_memory": self.table.initial_memory,
                "entries": {f"{i}|{g}|{m}": list(v)
                            for (i, g, m), v in sorted(self.table.entries.items())}}


def make_classical_prover(table: ClassicalProverTable) -> TableProver:
    """Wrap a classical table, refusing tables that are visibly irreversible.

    Injectivity is checked per step over the listed entries together with the
    implied identity on unlisted pairs; a collision is a hard error naming the
    pair, since no unitary extends a non-injective map.
    """
    by_step: dict[int, dict] = {}
    for (i, g, m), (g2, m2) in table.entries.items():
        by_step.setdefault(i, {})[(g, m)] = (g2, m2)
    for i, step in sorted(by_step.items()):
        seen: dict[tuple[str, str], tuple[str, str]] = {}
        for src, dst in sorted(step.items()):
            if dst in seen:
                raise ReversibilityError(
                    f"step {i}: {seen[dst]} and {src} both map to {dst}")
            seen[dst] = src
    # collisions with the implied identity on unlisted pairs depend on which
    # pairs are reachable; the run-time conservation check catches those
    return TableProver(table)


# ---------------------------------------------------------------------------
# Dense strategies
# ---------------------------------------------------------------------------

def sufficient_dense_cells(spec, n: int) -> int:
    """Tape cells after which a space-bounded prover loses no power.

    A prover acting on the verifier's visible configuration space achieves any
    acceptance probability an unbounded one can, so |Delta|^c >= |Q|*|Gamma|*(n+2)
    suffices.  This is the principled default for dense realizations; searches
    usually use fewer cells and report lower bounds.
    """
    need = len(spec.states) * len(spec.comm_alphabet) * (n + 2)
    base = len(spec.prover_alphabet)
    c = 1
    while base ** c < need:
        c += 1
    return c

class DenseProver(ProverStrategy):
    """Per-round unitaries over (cell symbol, first c tape cells).

    ``matrices[i-1]`` acts at round i; rounds beyond the list are the
    identity.  The tape is a tuple of exactly c symbols (cell symbols can be
    multi-character strings, so plain concatenation would be ambiguous).
    """

    mode = "dense"

    def __init__(self, comm_alphabet, tape_alphabet, c: int, matrices):
        self.comm_alphabet = tuple(comm_alphabet)
        self.tape_alphabet = tuple(tape_alphabet)
        self.c = c
        self.matrices = list(matrices)
        self._g_idx = {g: i for i, g in enumerate(self.comm_alphabet)}
        self._d_idx = {s: i for i, s in enumerate(self.tape_alphabet)}
        self.dim = len(self.comm_alphabet) * len(self.tape_alphabet) ** c
        self._columns: dict[int, list] = {}
        for m in self.matrices:
            if m.shape != (self.dim, self.dim):
                raise ValueError(f"round matrix must be {self.dim}x{self.dim}")

    def initial_tape(self, x):
        return (BLANK,) * self.c

    def _index(self, gamma: str, y) -> int:
        v = self._g_idx[gamma]
        for sym in y:
            v = v * len(self.tape_alphabet) + self._d_idx[sym]
        return v

    def _label(self, idx: int):
        digits = []
        base = len(self.tape_alphabet)
        for _ in range(self.c):
            digits.append(self.tape_alphabet[idx % base])
            idx //= base
        return self.comm_alphabet[idx], tuple(reversed(digits))

    def invalidate(self, round_index0: int) -> None:
        """Drop the cached columns of matrices[round_index0] after mutation."""
        self._columns.pop(round_index0, None)

    def _column_lists(self, i0: int):
        cols = self._columns.get(i0)
        if cols is None:
            m = self.matrices[i0]
            cols = []
            for src in range(self.dim):
                col = m[:, src]
                entries = []
                for row in np.nonzero(np.abs(col) > 1e-14)[0]:
                    g2, y2 = self._label(int(row))
                    entries.append((g2, y2, complex(col[row])))
                cols.append(entries)
            self._columns[i0] = cols
        return cols

    def apply(self, x, i, gamma, y):
        if i > len(self.matrices):
            return [(gamma, y, 1.0 + 0j)]
        return self._column_lists(i - 1)[self._index(gamma, y)]

    def describe(self):
        return {"kind": "dense",
                "c": self.c,
                "comm_alphabet": list(self.comm_alphabet),
                "tape_alphabet": list(self.tape_alphabet),
                "matrices": [[[z.real, z.imag] for z in m.flatten()]
                             for m in self.matrices]}


def densify_schedule(visible: list[tuple[str, str]], comm_alphabet,
                     tape_alphabet, c: int) -> DenseProver:
    """Dense realization of a deterministic visible schedule.

    ``visible[i-1]`` is the (symbol seen, symbol written) pair at round i of
    the honest run.  Each round becomes a permutation that maps the scheduled
    pair with a round counter on the tape and completes the rest of the basis
    lexicographically; off-schedule behaviour is arbitrary but unitary.
    """
    base = len(tape_alphabet)
    if base ** c < len(visible) + 1:
        raise ValueError(f"c={c} cannot encode {len(visible)} rounds")

    def counter(t: int):
        digits = []
        for _ in range(c):
            digits.append(tape_alphabet[t % base])
            t //= base
        return tuple(reversed(digits))

    probe = DenseProver(comm_alphabet, tape_alphabet, c, [])
    dim = probe.dim
    matrices = []
    for t, (seen, written) in enumerate(visible):
        src = probe._index(seen, counter(t))
        dst = probe._index(written, counter(t + 1))
        perm = np.zeros((dim, dim), dtype=complex)
        perm[dst, src] = 1.0
        free_src = [i for i in range(dim) if i != src]
        free_dst = [i for i in range(dim) if i != dst]
        for s, d in zip(free_src, free_dst):
            perm[d, s] = 1.0
        matrices.append(perm)
    return DenseProver(comm_alphabet, tape_alphabet, c, matrices)


# ---------------------------------------------------------------------------
# Committed-prover check
# ---------------------------------------------------------------------------

def check_committed(prover: ProverStrategy, x: str, i_max: int,
                    comm_alphabet=None, tol: float = 1e-9,
                    max_states: int = 4096) -> bool:
    """True iff the prover never disturbs a blank cell through round i_max.

    Walks the reachable tape contents round by round (the S_i sets): S_0 is
    the blank tape, S_i collects every tape string producible from S_{i-1}
    under any visible cell symbol.  At each round, acting on (blank, y) must
    yield only blank-cell components, up to amplitude tolerance.
    """
    symbols = tuple(comm_alphabet) if comm_alphabet else (BLANK,)
    if BLANK not in symbols:
        symbols = (BLANK,) + symbols
    reachable = {prover.initial_tape(x)}
    for i in range(1, i_max + 1):
        nxt = set()
        for y in sorted(reachable):
            for (g2, y2, amp) in prover.apply(x, i, BLANK, y):
                if abs(amp) <= tol:
                    continue
                if g2 != BLANK:
                    return False
                nxt.add(y2)
            for gamma in symbols:
                if gamma == BLANK:
                    continue
                for (_g2, y2, amp) in prover.apply(x, i, gamma, y):
                    if abs(amp) > tol:
                        nxt.add(y2)
        if len(nxt) > max_states:
            raise ValueError(f"reachable tape set exceeded {max_states} entries")
        reachable = nxt
    return True
