"""Command-line entry point: ``hypermatch <subcommand> ...``.

Exit codes: 0 success, 1 usage or input errors, 2 guard refusals.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import guards
from .chain import ChainParams, conductance_exact, mixing_bound, p_min, run
from .exact import build_transition_graph, count_matchings, tv_curve
from .fpras import FprasConfig, ScheduleTooLarge, count_fpras
from .generators import dual, from_bipartite, random_kgraph, rooted_blowup, subdivide
from .hypergraph import HypergraphError, parse, parse_graph, read_matching
from .paths import canonical_path_general, canonical_path_s0, GeneralComponent, verify_injectivity
from .structure import classify


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load(path: str):
    return parse(_read(path))


def cmd_analyze(args) -> str:
    return _dump(classify(_load(args.file)).to_dict())


def cmd_count(args) -> str:
    H = _load(args.file)
    if args.exact:
        return _dump({"count": str(count_matchings(H, args.max_edges)), "method": "exact"})
    cfg = FprasConfig(mode=args.mode, seed=args.seed, steps=args.steps, samples=args.samples)
    return _dump(count_fpras(H, args.eps, args.delta, cfg).to_dict())


def cmd_sample(args) -> str:
    H = _load(args.file)
    final, trace = run(H, ChainParams(args.steps, seed=args.seed, record_trace=args.trace))
    lines = []
    if trace is not None:
        lines = [_dump({"step": t, "kind": kind, "edge": h}) for t, kind, h in trace]
    lines.append(_dump(final.to_list()))
    return "\n".join(lines)


def cmd_generate(args) -> str:
    fam = args.family
    if fam == "subdivided":
        H = subdivide(_load(args.input), with_original=args.with_original)
    elif fam == "blowup":
        try:
            sizes = [int(x) for x in args.sizes.split(",")]
        except ValueError:
            raise UsageError(f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
        H = rooted_blowup(sizes, args.k, strict=args.strict)
    elif fam == "from-bipartite":
        H = from_bipartite(parse_graph(_read(args.input)), args.k)
    elif fam == "dual":
        H = dual(parse_graph(_read(args.input)))
    else:
        H = random_kgraph(args.n, args.m, args.k, args.seed)
    return H.to_json() if args.json else H.serialize().rstrip("\n")


def cmd_paths(args) -> str:
    H = _load(args.file)
    if args.action == "verify":
        return _dump(verify_injectivity(H, general=args.general, max_omega=args.max_omega).to_dict())
    if not (args.initial and args.final):
        raise UsageError("paths show needs --initial and --final")
    I = read_matching(H, _read(args.initial))
    F = read_matching(H, _read(args.final))
    build = canonical_path_general if args.general else canonical_path_s0
    return _dump(build(I, F).to_dict())


def cmd_conductance(args) -> str:
    H = _load(args.file)
    T = build_transition_graph(H, args.max_omega)
    res = conductance_exact(T, max_omega=args.max_omega)
    out = res.to_dict()
    out["p_min"] = str(p_min(H))
    if res.phi > 0:
        t_mix = mixing_bound(res.phi, T.size, args.eps)
        out["mixing_bound"] = t_mix
        out["eps"] = args.eps
        if args.curve is not None:
            t_max = args.curve if args.curve > 0 else t_mix
            out["tv_curve"] = [float(x) for x in tv_curve(T, t_max)]
    return _dump(out)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypermatch", description="Count and sample matchings in uniform hypergraphs.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    a = sub.add_parser("analyze", help="structure report (wide edges, combs, claw centers)")
    a.add_argument("file")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("count", help="exact or approximate number of matchings")
    c.add_argument("file")
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--exact", action="store_true")
    g.add_argument("--fpras", action="store_true")
    c.add_argument("--eps", type=float, default=0.2)
    c.add_argument("--delta", type=float, default=0.1)
    c.add_argument("--mode", choices=("heuristic", "rigorous"), default="heuristic")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--steps", type=int)
    c.add_argument("--samples", type=int)
    c.add_argument("--max-edges", type=int, default=guards.MAX_EDGES_COUNT)
    c.set_defaults(func=cmd_count)

    s = sub.add_parser("sample", help="run the matching chain from the empty matching")
    s.add_argument("file")
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trace", action="store_true")
    s.set_defaults(func=cmd_sample)

    gen = sub.add_parser("generate", help="emit an instance in the hypergraph text format")
    gen.add_argument("family", choices=("subdivided", "blowup", "from-bipartite", "dual", "random"))
    gen.add_argument("--input", help="input hypergraph (subdivided) or graph (from-bipartite, dual)")
    gen.add_argument("--with-original", action="store_true", help="subdivided: also keep each original triple")
    gen.add_argument("--sizes", help="blowup: comma-separated part sizes")
    gen.add_argument("--strict", action="store_true")
    gen.add_argument("--k", type=int, default=3)
    gen.add_argument("--n", type=int)
    gen.add_argument("--m", type=int)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--json", action="store_true")
    gen.set_defaults(func=cmd_generate)

    pa = sub.add_parser("paths", help="canonical paths")
    pa.add_argument("action", choices=("verify", "show"))
    pa.add_argument("file")
    pa.add_argument("--general", action="store_true", help="use the Euler-tour construction")
    pa.add_argument("--max-omega", type=int, default=guards.MAX_OMEGA_PATHS)
    pa.add_argument("--initial")
    pa.add_argument("--final")
    pa.set_defaults(func=cmd_paths)

    co = sub.add_parser("conductance", help="exact conductance and mixing bound")
    co.add_argument("file")
    co.add_argument("--max-omega", type=int, default=guards.MAX_OMEGA_CONDUCTANCE)
    co.add_argument("--eps", type=float, default=0.01)
    co.add_argument("--curve", type=int, nargs="?", const=0, help="include tv(t) for t=0..T (default: mixing bound)")
    co.set_defaults(func=cmd_conductance)
    return p


_REQUIRED = {
    "subdivided": ("input",),
    "blowup": ("sizes",),
    "from-bipartite": ("input",),
    "dual": ("input",),
    "random": ("n", "m"),
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "generate":
        missing = [f"--{x}" for x in _REQUIRED[args.family] if getattr(args, x) is None]
        if missing:
            print(f"hypermatch: error: generate {args.family} needs {', '.join(missing)}", file=sys.stderr)
            return 1
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            out = args.func(args)
    except guards.GuardError as exc:
        print(f"hypermatch: {exc}", file=sys.stderr)
        return 2
    except ScheduleTooLarge as exc:
        print(_dump({"refused": True, "schedule": exc.schedule.to_dict()}))
        print(f"hypermatch: {exc}", file=sys.stderr)
        return 2
    except (UsageError, HypergraphError, GeneralComponent, ValueError) as exc:
        print(f"hypermatch: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(out + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
