"""Mana, Wigner negativity and exact-conversion verdicts for the named qutrit states.

    python3 scripts/mana_table.py
"""

import itertools

import numpy as np

from pwpq.states import named_state
from pwpq.transform import asymptotic_rate, lp_feasibility_oracle, plan_transform
from pwpq.wigner import mana, wigner_of_operator

STATES = ("strange", "norrell", "tmagic", "hmagic")


def main() -> None:
    print(f"{'state':<9}{'mana':>12}{'l1 norm':>12}{'min W':>12}{'#neg':>6}")
    for name in STATES:
        w = wigner_of_operator(named_state(name))
        print(f"{name:<9}{mana(named_state(name)):>12.6f}{np.abs(w).sum():>12.6f}{w.min():>12.6f}{int((w < -1e-12).sum()):>6}")

    print()
    print(f"{'from':<9}{'to':<9}{'exact':>7}{'lp':>5}{'rate':>10}")
    for a, b in itertools.permutations(STATES, 2):
        rho, sigma = named_state(a), named_state(b)
        plan = plan_transform(rho, sigma)
        lp = lp_feasibility_oracle(wigner_of_operator(rho), wigner_of_operator(sigma))
        print(f"{a:<9}{b:<9}{'yes' if plan.feasible else 'no':>7}{'yes' if lp else 'no':>5}{asymptotic_rate(rho, sigma):>10.4f}")


if __name__ == "__main__":
    main()
