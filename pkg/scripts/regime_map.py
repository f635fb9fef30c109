"""Strong-hopping regimes at n = 4: resonance vs initial node.

For each choice of atomic frequency (zero or the hub-mode frequency) and each
initial node, prints the minimum of the overall atomic occupation over
t <= 10/beta. For omega_a = 0 it also prints the node's weight w on the
degenerate zero-frequency field eigenspace; only that part of the photonic
amplitude is resonant, so the atomic occupation cannot drop below 1 - w.
"""

import argparse
import math

import numpy as np

from apollonian_jch.dynamics import evolve, find_hub_mode, overall, time_grid
from apollonian_jch.eigensolve import eig_sym
from apollonian_jch.model import (
    SystemParams,
    basis_for,
    build_field_hamiltonian,
    build_jch_hamiltonian,
    localized_state,
)
from apollonian_jch.network import generate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=4)
    ap.add_argument("--beta", type=float, default=1e-3)
    ap.add_argument("--nodes", type=int, nargs="*", default=None,
                    help="initial nodes (default: hub and every newest degree-3 node)")
    args = ap.parse_args()

    g = generate(args.n)
    b = basis_for(g)
    field = eig_sym(build_field_hamiltonian(g, 0.0, 1.0))
    phi_hub = find_hub_mode(field).frequency
    zero = [grp for grp in field.degeneracy_groups
            if abs(field.values[grp.start]) <= field.tolerance_used]
    w = (field.vectors[:, zero[0]] ** 2).sum(axis=1) if zero else np.zeros(g.node_count)

    nodes = args.nodes or [g.hub] + [
        k for k in g.nodes_of_generation(args.n) if g.degrees[k - 1] == 3
    ]
    print(f"phi_hub = {phi_hub:.8f}, zero-level multiplicity = {len(zero[0]) if zero else 0}")
    print("node  omega_a   min_at   floor(1-w)")
    for omega_a, tag in ((phi_hub, "phi_hub"), (0.0, "0")):
        eig = eig_sym(build_jch_hamiltonian(g, SystemParams(0.0, omega_a, args.beta, 1.0)))
        t = time_grid(10 / args.beta, eig)
        for k in nodes:
            _, at = overall(evolve(eig, b, localized_state(b, k, math.pi / 2), t))
            floor = f"{1 - w[k - 1]:.4f}" if tag == "0" else ""
            print(f"{k:4d}  {tag:8s} {at.min():.4f}   {floor}")


if __name__ == "__main__":
    main()
