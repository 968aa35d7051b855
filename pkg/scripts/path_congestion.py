"""Canonical-path congestion on random corpora: measured max |Pi| against its bounds.

    python scripts/path_congestion.py --count 40 --k 3 --general

One JSON line per instance, then a summary line.
"""

import argparse
import json
from dataclasses import dataclass

from hypermatch.generators import random_kgraph
from hypermatch.paths import cut_bound_check, verify_injectivity
from hypermatch.structure import wide_edges


@dataclass
class CongestionConfig:
    count: int = 40
    k: int = 3
    seed: int = 0
    general: bool = False
    max_m: int = 6
    cuts: bool = False


def corpus(cfg: CongestionConfig):
    i = 0
    found = 0
    while found < cfg.count:
        n = 6 + i % 7
        m = 2 + i % (cfg.max_m - 1)
        H = random_kgraph(n, m, cfg.k, cfg.seed * 100_000 + i)
        i += 1
        if cfg.general or not wide_edges(H):
            found += 1
            yield H


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--general", action="store_true", help="Euler-tour construction, any number of wide edges")
    ap.add_argument("--max-m", type=int, default=6)
    ap.add_argument("--cuts", action="store_true", help="also check every cut against the path bound")
    cfg = CongestionConfig(**{k.replace("-", "_"): v for k, v in vars(ap.parse_args(argv)).items()})

    worst_ratio = 0.0
    failures = 0
    for H in corpus(cfg):
        rep = verify_injectivity(H, general=cfg.general)
        row = {
            "n": H.n, "m": H.m, "s": rep.s, "omega": rep.omega, "max_pi": rep.max_pi,
            "pi_bound": str(rep.pi_bound), "ok": rep.ok, "empty_images": rep.empty_images,
        }
        if cfg.cuts and rep.omega <= 22:
            cut = cut_bound_check(H, general=cfg.general)
            row.update(phi=str(cut.phi), phi_lower=str(cut.phi_lower), cuts_ok=cut.ok)
            failures += not cut.ok
        worst_ratio = max(worst_ratio, rep.max_pi / rep.omega)
        failures += not rep.ok
        print(json.dumps(row, sort_keys=True))
    print(json.dumps({"instances": cfg.count, "failures": failures, "max_pi_over_omega": worst_ratio}))


if __name__ == "__main__":
    main()
