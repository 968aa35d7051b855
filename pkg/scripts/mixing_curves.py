"""Exact distance-to-uniform curves next to the conductance bound, as CSV.

    python scripts/mixing_curves.py --count 20 --seed 1 > curves.csv

Columns: instance, n, m, k, omega, phi, t, tv, bound.
"""

import argparse
import csv
import math
import sys
from dataclasses import dataclass

from hypermatch.chain import conductance_exact, make_rng, mixing_bound, tv_bound
from hypermatch.exact import build_transition_graph, count_matchings, tv_curve
from hypermatch.generators import random_kgraph


@dataclass
class CurveConfig:
    count: int = 20
    seed: int = 1
    max_omega: int = 20
    eps: float = 0.01
    stride: int = 1


def instances(cfg: CurveConfig):
    rng = make_rng(cfg.seed, 0)
    i = 0
    found = 0
    while found < cfg.count:
        k = int(rng.integers(2, 5))
        n = int(rng.integers(k + 1, 13))
        m = int(rng.integers(1, min(10, math.comb(n, k)) + 1))
        H = random_kgraph(n, m, k, cfg.seed * 10_000 + i)
        i += 1
        if 2 <= count_matchings(H) <= cfg.max_omega:
            found += 1
            yield H


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-omega", type=int, default=20)
    ap.add_argument("--eps", type=float, default=0.01)
    ap.add_argument("--stride", type=int, default=1, help="emit every stride-th t")
    cfg = CurveConfig(**{k.replace("-", "_"): v for k, v in vars(ap.parse_args(argv)).items()})

    out = csv.writer(sys.stdout)
    out.writerow(["instance", "n", "m", "k", "omega", "phi", "t", "tv", "bound"])
    for idx, H in enumerate(instances(cfg)):
        T = build_transition_graph(H)
        phi = conductance_exact(T).phi
        t_max = mixing_bound(phi, T.size, cfg.eps)
        curve = tv_curve(T, t_max)
        for t in range(0, t_max + 1, cfg.stride):
            out.writerow([idx, H.n, H.m, H.k, T.size, float(phi), t, f"{curve[t]:.6e}", f"{tv_bound(phi, T.size, t):.6e}"])


if __name__ == "__main__":
    main()
