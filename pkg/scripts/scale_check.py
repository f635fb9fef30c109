"""Time the full long-time-average matrices for n = 4, 5, 6 and summarise
where each newest-generation node's strongest off-diagonal photonic entry lands."""

import argparse
import time

import numpy as np

from apollonian_jch.scenarios import compute, preset


def main():
    argparse.ArgumentParser(description=__doc__).parse_args()
    for s in preset("fig8"):
        t0 = time.perf_counter()
        res = compute(s)
        elapsed = time.perf_counter() - t0
        g, chi = res.network, res.averages.chi_ph
        n = g.generation
        newest = g.nodes_of_generation(n)
        overall_nb = branch_nb = 0
        for k in newest:
            row = chi[k - 1].copy()
            row[k - 1] = -np.inf
            overall_nb += bool(g.adjacency[k - 1, np.argmax(row)])
            older = np.where(g.node_generation < n, row, -np.inf)
            top = np.argmax(older)
            branch_nb += bool(g.adjacency[k - 1, top] and g.node_generation[top] == n - 1)
        print(
            f"n={n} D={2 * g.node_count} {elapsed:.2f}s  "
            f"top entry is a neighbour: {overall_nb}/{len(newest)}  "
            f"top older-generation entry is the parent-generation neighbour: "
            f"{branch_nb}/{len(newest)}"
        )


if __name__ == "__main__":
    main()
