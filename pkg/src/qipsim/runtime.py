"""Joint evolution of verifier, communication cell and prover tape.

The global state is a sparse amplitude map over labels (inner state, head
position, cell symbol, tape string).  One round is: prover action (absent in
round 1 — equivalently, the prover for round i acts right after the i-th
measurement), verifier step, measurement.  Measurement projects onto the
accepting / rejecting / non-halting state classes, accumulates the halting
masses and keeps the unnormalized non-halting part, so the accumulated masses
are exact unconditional probabilities.

Measure-once systems skip the intermediate measurements; a single measurement
follows verifier step n+2.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import PRUNE_TOL, norm_sq
from .provers import ProverStrategy
from .qfa import BLANK, AlphabetError, HeadModel, QfaSpec, symbol_at

CONSERVATION_TOL = 1e-9
TWO_WAY_ROUND_FACTOR = 20  # default t_max for 2-way runs is 20*(n+2)^2


class RunError(RuntimeError):
    """Structural violation during a run (e.g. a one-way verifier not halting)."""


@dataclass(frozen=True)
class QipSystem:
    """A verifier bundled with its honest prover and its claims."""

    name: str
    verifier: QfaSpec
    honest_prover: ProverStrategy
    language: object  # callable str -> bool
    claimed_bounds: tuple[float, float]
    public: bool = False
    measure_once: bool = False
    interaction_bounded: bool = False

    def member(self, x: str) -> bool:
        return bool(self.language(x))


@dataclass
class RunResult:
    p_acc: float
    p_rej: float
    p_cont: float
    halting_profile: list[tuple[int, float, float]]
    rounds_executed: int
    truncated: bool
    cont_trace: list[float] = field(default_factory=list)
    max_conservation_error: float = 0.0


def default_t_max(spec: QfaSpec, x: str) -> int:
    n = len(x)
    if spec.head_model.one_way:
        return n + 2
    return TWO_WAY_ROUND_FACTOR * (n + 2) ** 2


def _apply_verifier(spec: QfaSpec, x: str, state: dict, width: int) -> dict:
    out: dict = {}
    delta = spec.delta
    for (q, k, g, y), amp in state.items():
        key = (q, symbol_at(x, k), g)
        targets = delta.get(key)
        if targets is None:
            if g not in spec.comm_alphabet:
                raise AlphabetError(
                    f"prover wrote {g!r}, outside the communication alphabet")
            raise RunError(f"no transition for {key}; run validate_and_complete first")
        for (q2, g2, d, a) in targets:
            lbl = (q2, (k + d) % width, g2, y)
            v = out.get(lbl)
            out[lbl] = amp * a if v is None else v + amp * a
    return {lbl: a for lbl, a in out.items() if abs(a) >= PRUNE_TOL}


def _apply_prover(prover: ProverStrategy, x: str, i: int, state: dict) -> dict:
    out: dict = {}
    for (q, k, g, y), amp in state.items():
        for (g2, y2, a) in prover.apply(x, i, g, y):
            lbl = (q, k, g2, y2)
            v = out.get(lbl)
            out[lbl] = amp * a if v is None else v + amp * a
    return {lbl: a for lbl, a in out.items() if abs(a) >= PRUNE_TOL}


def _measure(spec: QfaSpec, state: dict) -> tuple[float, float, dict]:
    acc = rej = 0.0
    cont: dict = {}
    for lbl, amp in state.items():
        q = lbl[0]
        if spec.is_halting(q):
            if spec.is_accepting(q):
                acc += abs(amp) ** 2
            else:
                rej += abs(amp) ** 2
        else:
            cont[lbl] = amp
    return acc, rej, cont


def run(system: QipSystem, prover: ProverStrategy, x: str,
        t_max: int | None = None) -> RunResult:
    """Execute the protocol on input x and account for all probability mass."""
    return _run(system.verifier, prover, x, t_max,
                measure_once=system.measure_once)


def measure_every_run(spec: QfaSpec, prover: ProverStrategy, x: str,
                      t_max: int | None = None) -> RunResult:
    """Bare-spec run with a measurement after every verifier move."""
    return _run(spec, prover, x, t_max, measure_once=False)


def _run(spec: QfaSpec, prover: ProverStrategy, x: str, t_max, measure_once):
    spec.check_input(x)
    n = len(x)
    width = n + 2
    if t_max is None:
        t_max = default_t_max(spec, x)
    if spec.head_model.one_way:
        t_max = min(t_max, n + 2)
    if measure_once and spec.head_model is not HeadModel.MO_1WAY:
        raise RunError("measure-once runs need a measure-once 1-way verifier")

    state = {(spec.initial, 0, BLANK, prover.initial_tape(x)): 1.0 + 0j}
    p_acc = p_rej = 0.0
    profile: list[tuple[int, float, float]] = []
    cont_trace: list[float] = []
    max_err = 0.0
    rounds = 0
    for r in range(1, t_max + 1):
        rounds = r
        state = _apply_verifier(spec, x, state, width)
        final_round = r == t_max
        if not measure_once or r == n + 2:
            acc, rej, state = _measure(spec, state)
            p_acc += acc
            p_rej += rej
            if acc > 0 or rej > 0:
                profile.append((r, acc, rej))
        cont = norm_sq(state)
        cont_trace.append(cont)
        max_err = max(max_err, abs(p_acc + p_rej + cont - 1.0))
        if cont < PRUNE_TOL:
            state = {}
            break
        if not final_round:
            state = _apply_prover(prover, x, r, state)

    p_cont = norm_sq(state)
    truncated = (not spec.head_model.one_way) and p_cont >= PRUNE_TOL
    if (spec.head_model is HeadModel.ONE_WAY and rounds >= n + 2
            and p_cont > 1e-9):
        raise RunError(
            f"one-way verifier keeps continuation mass {p_cont:.3g} after n+2 steps")
    if max_err > CONSERVATION_TOL * max(1, rounds):
        raise RunError(f"probability conservation violated by {max_err:.3g}")
    return RunResult(p_acc=p_acc, p_rej=p_rej, p_cont=p_cont,
                     halting_profile=profile, rounds_executed=rounds,
                     truncated=truncated, cont_trace=cont_trace,
                     max_conservation_error=max_err)


def expected_halting_time(system: QipSystem, prover: ProverStrategy, x: str,
                          t_max: int | None = None) -> tuple[float, bool]:
    """Lower estimate of the mean halting round, and whether it is exact.

    Truncated mass contributes t_max rounds to the lower value; the estimate
    is exact (upper bound known) when essentially no mass was left running.
    """
    res = run(system, prover, x, t_max)
    lower = sum(r * (a + b) for (r, a, b) in res.halting_profile)
    lower += res.rounds_executed * res.p_cont
    return lower, res.p_cont < 1e-9


def visible_schedule(system: QipSystem, x: str,
                     t_max: int | None = None) -> list[tuple[str, str]]:
    """Per-round (cell seen, cell written) pairs of the honest run.

    Only defined when the honest prover's visible configuration is
    deterministic (a single cell symbol per round), which holds for every
    built-in honest protocol; raises otherwise.  The result is what
    densify_schedule needs to build a space-bounded twin of the prover.
    """
    prover = system.honest_prover
    log: dict[int, set] = {}

    class Recorder(ProverStrategy):
        def initial_tape(self, xx):
            return prover.initial_tape(xx)

        def apply(self, xx, i, gamma, y):
            out = prover.apply(xx, i, gamma, y)
            written = tuple(sorted({g2 for (g2, _y2, _a) in out}))
            log.setdefault(i, set()).add((gamma, written))
            return out

    res = run(system, Recorder(), x, t_max)
    schedule = []
    for i in range(1, res.rounds_executed + 1):
        entries = log.get(i)
        if entries is None:
            break
        if len(entries) != 1:
            raise RunError(f"round {i} shows {len(entries)} distinct cell views")
        (gamma, written), = entries
        if len(written) != 1:
            raise RunError(f"round {i} writes a superposition {written}")
        schedule.append((gamma, written[0]))
    return schedule


# ---------------------------------------------------------------------------
# Interaction counting
# ---------------------------------------------------------------------------

def count_interactions(system: QipSystem, prover: ProverStrategy, x: str,
                       t_max: int | None = None) -> int:
    """Maximum number of query configurations along any computation path.

    A query configuration is a non-halting configuration holding a non-blank
    cell symbol right after a verifier move.  Paths are chains through the
    parent->child links of the sparse evolution; when paths merge, the query
    count merges by maximum (the conservative reading of a per-path count).
    Requires an interaction-bounded system and a committed prover.
    """
    from .provers import check_committed

    if not system.interaction_bounded:
        raise RunError(f"system {system.name} is not interaction-bounded")
    spec = system.verifier
    spec.check_input(x)
    n = len(x)
    width = n + 2
    if t_max is None:
        t_max = default_t_max(spec, x)
    if spec.head_model.one_way:
        t_max = min(t_max, n + 2)
    if not check_committed(prover, x, t_max, comm_alphabet=spec.comm_alphabet):
        raise RunError("count_interactions requires a committed prover")

    state = {(spec.initial, 0, BLANK, prover.initial_tape(x)): 1.0 + 0j}
    counts = {next(iter(state)): 0}
    best = 0
    for r in range(1, t_max + 1):
        new_state: dict = {}
        new_counts: dict = {}
        for lbl, amp in state.items():
            (q, k, g, y) = lbl
            for (q2, g2, d, a) in spec.delta[(q, symbol_at(x, k), g)]:
                child = (q2, (k + d) % width, g2, y)
                v = new_state.get(child)
                new_state[child] = amp * a if v is None else v + amp * a
                c = counts[lbl]
                if c > new_counts.get(child, -1):
                    new_counts[child] = c
        state, counts = {}, {}
        for child, amp in new_state.items():
            if abs(amp) < PRUNE_TOL:
                continue
            q2, _k, g2, _y = child
            c = new_counts[child]
            if spec.is_halting(q2):
                best = max(best, c)
                continue
            if g2 != BLANK:
                c += 1  # the verifier wrote a non-blank symbol: a query
            best = max(best, c)
            state[child] = amp
            counts[child] = c
        if not state:
            break
        # prover action preserves the path structure of the verifier side
        new_state, new_counts = {}, {}
        for lbl, amp in state.items():
            (q, k, g, y) = lbl
            for (g2, y2, a) in prover.apply(x, r, g, y):
                child = (q, k, g2, y2)
                v = new_state.get(child)
                new_state[child] = amp * a if v is None else v + amp * a
                c = counts[lbl]
                if c > new_counts.get(child, -1):
                    new_counts[child] = c
        state = {lbl: a for lbl, a in new_state.items() if abs(a) >= PRUNE_TOL}
        counts = {lbl: new_counts[lbl] for lbl in state}
    return best


# ---------------------------------------------------------------------------
# Modified computation and query weight
# ---------------------------------------------------------------------------

def query_weight(spec: QfaSpec, x_prefix: str, y: str) -> float:
    """Query weight of the modified computation over the y-segment.

    The modified computation replaces the prover by a projection: after every
    measurement the communication cell is projected onto blank and the
    non-blank remainder is discarded.  The returned weight is the discarded
    squared mass at the rounds whose scanned position lies inside y.  By
    construction wt(x) + wt^(x)(y) = wt(xy).
    """
    if not spec.head_model.one_way:
        raise RunError("query weight is defined for one-way verifiers only")
    word = x_prefix + y
    spec.check_input(word)
    n = len(word)
    width = n + 2
    lo, hi = len(x_prefix) + 1, len(x_prefix) + len(y)  # positions holding y
    state = {(spec.initial, 0, BLANK): 1.0 + 0j}
    weight = 0.0
    for r in range(1, n + 2):
        pos = r - 1  # a one-way head scans position r-1 at round r
        nxt: dict = {}
        for (q, k, g), amp in state.items():
            for (q2, g2, d, a) in spec.delta[(q, symbol_at(word, k), g)]:
                lbl = (q2, (k + d) % width, g2)
                v = nxt.get(lbl)
                nxt[lbl] = amp * a if v is None else v + amp * a
        state = {}
        for lbl, amp in nxt.items():
            if abs(amp) < PRUNE_TOL:
                continue
            q2, _k, g2 = lbl
            if spec.is_halting(q2):
                continue
            if g2 != BLANK:
                if lo <= pos <= hi:
                    weight += abs(amp) ** 2
                continue  # projection onto blank discards this component
            state[lbl] = amp
        if not state:
            break
    return weight
