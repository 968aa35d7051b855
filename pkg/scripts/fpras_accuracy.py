"""Repeat the approximate counter over many seeds and report its error profile.

    python scripts/fpras_accuracy.py examples/foo.txt --runs 50 --eps 0.2
    python scripts/fpras_accuracy.py --builtin --runs 20
"""

import argparse
import json
import statistics
import time
from dataclasses import asdict, dataclass

from hypermatch.exact import count_matchings
from hypermatch.fpras import FprasConfig, count_fpras
from hypermatch.generators import subdivide
from hypermatch.hypergraph import hypergraph_from, parse


@dataclass
class AccuracyConfig:
    runs: int = 50
    eps: float = 0.2
    delta: float = 0.1
    mode: str = "heuristic"
    step_const: float = 20.0
    sample_const: float = 40.0


def builtin():
    return {
        "path3": hypergraph_from([(1, 2, 3), (3, 4, 5), (5, 6, 7)]),
        "subdivided-single": subdivide(hypergraph_from([(1, 2, 3)]), with_original=True),
        "comb": hypergraph_from([(1, 2, 3), (4, 5, 6), (7, 8, 9), (3, 4, 7)]),
    }


def profile(H, cfg: AccuracyConfig) -> dict:
    truth = count_matchings(H)
    errs = []
    t0 = time.perf_counter()
    for seed in range(cfg.runs):
        fc = FprasConfig(cfg.mode, seed, step_const=cfg.step_const, sample_const=cfg.sample_const)
        errs.append(count_fpras(H, cfg.eps, cfg.delta, fc).estimate / truth - 1)
    return {
        "count": truth,
        "within_eps": sum(abs(e) <= cfg.eps for e in errs),
        "runs": cfg.runs,
        "mean_rel_error": statistics.fmean(errs),
        "max_abs_rel_error": max(abs(e) for e in errs),
        "seconds": round(time.perf_counter() - t0, 2),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("files", nargs="*")
    ap.add_argument("--builtin", action="store_true")
    ap.add_argument("--runs", type=int, default=50)
    ap.add_argument("--eps", type=float, default=0.2)
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--step-const", type=float, default=20.0)
    ap.add_argument("--sample-const", type=float, default=40.0)
    args = ap.parse_args(argv)
    cfg = AccuracyConfig(args.runs, args.eps, args.delta, "heuristic", args.step_const, args.sample_const)

    todo = builtin() if args.builtin or not args.files else {}
    for f in args.files:
        with open(f) as fh:
            todo[f] = parse(fh.read())
    report = {name: profile(H, cfg) for name, H in todo.items()}
    print(json.dumps({"config": asdict(cfg), "instances": report}, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
