"""Probability tables over all inputs up to a length."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .adversary import AdversaryBudget, best_classical_prover
from .runtime import QipSystem, run
from .tiling import SizeError, all_strings


@dataclass
class SweepRow:
    x: str
    member: bool
    honest_p_acc: float
    adversary_p_acc: float


def sweep(system: QipSystem, n_max: int, t_max: int | None = None,
          budget: AdversaryBudget | None = None,
          cap: int = 4096) -> list[SweepRow]:
    """One row per input in Sigma^{<=n_max}: membership, honest and best-found
    adversarial acceptance (exhaustive classical tables under the budget)."""
    alphabet = system.verifier.input_alphabet
    if len(alphabet) ** (n_max + 1) > cap:
        raise SizeError(f"|Sigma|^{n_max + 1} exceeds the sweep cap {cap}")
    budget = budget or AdversaryBudget()
    rows = []
    for x in all_strings(alphabet, n_max):
        honest = run(system, system.honest_prover, x, t_max).p_acc
        adv = best_classical_prover(system, x, budget).best_p_acc
        rows.append(SweepRow(x=x, member=system.member(x),
                             honest_p_acc=honest, adversary_p_acc=adv))
    return rows


def _named_row(args) -> SweepRow:
    # worker for the process pool; rebuilds the system from its registry name,
    # since honest provers carry closures and do not pickle
    from .protocols import build_protocol

    name, x, t_max, budget = args
    system = build_protocol(name)
    honest = run(system, system.honest_prover, x, t_max).p_acc
    adv = best_classical_prover(system, x, budget).best_p_acc
    return SweepRow(x=x, member=system.member(x),
                    honest_p_acc=honest, adversary_p_acc=adv)


def sweep_named(name: str, n_max: int, t_max: int | None = None,
                budget: AdversaryBudget | None = None, cap: int = 4096,
                jobs: int = 1) -> list[SweepRow]:
    """Sweep a registry protocol by name; rows run in ``jobs`` processes."""
    from .protocols import build_protocol

    system = build_protocol(name)
    if jobs <= 1:
        return sweep(system, n_max, t_max, budget, cap)
    alphabet = system.verifier.input_alphabet
    if len(alphabet) ** (n_max + 1) > cap:
        raise SizeError(f"|Sigma|^{n_max + 1} exceeds the sweep cap {cap}")
    budget = budget or AdversaryBudget()
    work = [(name, x, t_max, budget) for x in all_strings(alphabet, n_max)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_named_row, work))
