#!/usr/bin/env python3
"""Run every built-in protocol on a few illustrative inputs.

Prints the honest and identity-prover probabilities next to the membership
bit, which is the quickest way to eyeball completeness and the free part of
soundness across the whole protocol zoo.
"""
import argparse

from qipsim.protocols import BUILTIN, build_protocol
from qipsim.provers import IdentityProver
from qipsim.runtime import run

SAMPLES = {
    "zero_public": ["", "0", "1", "010", "0110"],
    "la_mo": ["", "a", "aaa"],
    "odd": ["", "1", "10", "0100", "0101"],
    "pal_sharp": ["#", "0#0", "01#10", "0#1", "0110"],
    "center": ["1", "010", "0110", "00100", "001"],
    "upal": ["", "01", "0011", "001", "10"],
    "eraser_zero": ["", "0", "10", "011"],
    "eraser_end1": ["", "1", "10"],
    "rfa_even_a": ["", "a", "aa"],
    "rfa_all_a": ["", "aa"],
    "npfa_single_a": ["", "a", "aa"],
    "npfa_coin": ["", "a"],
    "npfa_choice": ["", "aa"],
    "union_zero_end1": ["", "0", "1", "10"],
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--protocol", choices=sorted(BUILTIN), default=None,
                        help="limit the tour to one protocol")
    args = parser.parse_args()
    names = [args.protocol] if args.protocol else sorted(SAMPLES)
    for name in names:
        system = build_protocol(name)
        a, b = system.claimed_bounds
        print(f"\n== {system.name}  claimed (a,b)=({a:.3g},{b:.3g})")
        for x in SAMPLES.get(name.split(":")[0], [""]):
            honest = run(system, system.honest_prover, x)
            ident = run(system, IdentityProver(), x)
            print(f"  {x!r:12} member={str(system.member(x)):5} "
                  f"honest acc={honest.p_acc:.6f}  identity acc={ident.p_acc:.6f}")


if __name__ == "__main__":
    main()
