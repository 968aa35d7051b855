"""Approximate counting by self-reducibility.

With edges e_1..e_m in canonical order and H_i the hypergraph with e_1..e_i
deleted, the number of matchings telescopes:

    |Omega(H)| = prod_i |Omega(H_{i-1})| / |Omega(H_i)| = prod_i 1 / r_i,

where r_i is the probability that a uniform matching of H_{i-1} omits e_i.
Deleting e_i from the matchings that contain it is an injection into those
that omit it, so r_i >= 1/2. Each r_i is estimated from independent runs of
the matching chain on H_{i-1}.

The schedule constants are derived in ANALYSIS.md.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .chain import BatchChain, make_rng, mixing_bound, p_min
from .hypergraph import Hypergraph
from .structure import wide_edges

STEP_COUNTER_MAX = 2**63 - 1

RIGOROUS_SAMPLE_CONST = 74
RIGOROUS_LOG_CONST = 3
RIGOROUS_EPS_CAP = 0.5


class EstimationError(RuntimeError):
    pass


class ScheduleTooLarge(RuntimeError):
    def __init__(self, schedule: "Schedule"):
        self.schedule = schedule
        super().__init__(
            f"rigorous schedule needs {schedule.steps} steps per sample, "
            f"beyond a 64-bit step counter; refusing to run"
        )


@dataclass(frozen=True)
class FprasConfig:
    mode: str = "heuristic"
    seed: int = 0
    steps: int | None = None
    samples: int | None = None
    step_const: float = 20.0
    sample_const: float = 40.0

    def __post_init__(self):
        if self.mode not in ("heuristic", "rigorous"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class Schedule:
    mode: str
    stages: int
    samples: int
    steps: int
    runnable: bool = True
    phi_lower: Fraction | None = None
    omega_upper: int | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["phi_lower"] = None if self.phi_lower is None else str(self.phi_lower)
        d["omega_upper"] = None if self.omega_upper is None else str(self.omega_upper)
        d["steps"] = str(self.steps) if self.steps > STEP_COUNTER_MAX else self.steps
        return d


@dataclass(frozen=True)
class RatioStat:
    edge: int
    samples: int
    hits: int

    @property
    def ratio(self) -> float:
        return self.hits / self.samples


@dataclass(frozen=True)
class EstimateResult:
    estimate: float
    estimate_exact: Fraction
    eps: float
    delta: float
    ratios: tuple[RatioStat, ...]
    steps_per_sample: int
    samples_per_stage: int
    seed: int
    mode: str
    schedule: Schedule | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "estimate_exact": str(self.estimate_exact),
            "eps": self.eps,
            "delta": self.delta,
            "ratios": [
                {"edge": r.edge, "samples": r.samples, "hits": r.hits, "ratio": r.ratio} for r in self.ratios
            ],
            "steps_per_sample": self.steps_per_sample,
            "samples_per_stage": self.samples_per_stage,
            "seed": self.seed,
            "mode": self.mode,
            "method": "fpras",
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def omega_upper_bound(H: Hypergraph) -> int:
    """sum_{j <= n/k} C(m, j); never more than 2^m."""
    return sum(math.comb(H.m, j) for j in range(min(H.m, H.n // H.k) + 1))


def sample_schedule(
    H: Hypergraph,
    eps: float,
    delta: float,
    mode: str = "heuristic",
    s: int | None = None,
    step_const: float = 20.0,
    sample_const: float = 40.0,
) -> Schedule:
    """Samples per stage and chain steps per sample.

    ``s`` (the number of wide edges) is computed when not given; only the
    rigorous mode uses it.
    """
    _check_params(eps, delta)
    m = H.m
    if m == 0:
        return Schedule(mode, 0, 0, 0)
    if mode == "heuristic":
        n = max(H.n, 2)
        steps = math.ceil(step_const * m * (math.log(n) + math.log(1 / eps)))
        samples = math.ceil(sample_const * eps**-2 * math.log(m / delta))
        return Schedule(mode, m, samples, steps)
    if mode != "rigorous":
        raise ValueError(f"unknown mode {mode!r}")
    if s is None:
        s = len(wide_edges(H))
    e = min(eps, RIGOROUS_EPS_CAP)
    phi_lb = p_min(H) / (2 * H.n ** ((s + 1) * H.k))
    omega_ub = max(omega_upper_bound(H), 2)
    steps = mixing_bound(phi_lb, omega_ub, e / (6 * m))
    samples = math.ceil(RIGOROUS_SAMPLE_CONST * m * e**-2 * math.log(RIGOROUS_LOG_CONST * m / delta))
    return Schedule(mode, m, samples, steps, steps <= STEP_COUNTER_MAX, phi_lb, omega_ub)


def ratio_estimate(H_prev: Hypergraph, e: int, N: int, steps: int, rng: np.random.Generator) -> tuple[int, int]:
    """Run N independent chains on H_prev for ``steps`` steps from the empty
    matching; return (number of final states omitting edge e, N)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0 <= e < H_prev.m:
        raise ValueError(f"edge {e} not in hypergraph")
    eng = BatchChain(H_prev)
    states = eng.advance(eng.empty(N), steps, rng)
    hits = int(N - eng.contains(states, e).sum())
    return hits, N


def count_fpras(H: Hypergraph, eps: float, delta: float, config: FprasConfig | None = None) -> EstimateResult:
    """Randomized (eps, delta)-approximation of the number of matchings of H.

    Stage i uses its own stream ``make_rng(seed, i)``, so the stages are
    independent and the result is a deterministic function of the inputs.
    """
    config = config or FprasConfig()
    _check_params(eps, delta)
    sched = sample_schedule(H, eps, delta, config.mode, step_const=config.step_const, sample_const=config.sample_const)
    N = config.samples if config.samples is not None else sched.samples
    t = config.steps if config.steps is not None else sched.steps
    if config.steps is None and not sched.runnable:
        raise ScheduleTooLarge(sched)
    if H.m == 0:
        return EstimateResult(1.0, Fraction(1), eps, delta, (), 0, 0, config.seed, config.mode, sched)

    stats = []
    product = Fraction(1)
    for i in range(H.m):
        H_prev = H.remove_edges(range(i))
        hits, n = ratio_estimate(H_prev, 0, N, t, make_rng(config.seed, i))
        if hits == 0:
            raise EstimationError(f"stage {i}: no sample omitted edge {i}; ratio estimate is 0")
        stats.append(RatioStat(i, n, hits))
        product *= Fraction(n, hits)
    return EstimateResult(float(product), product, eps, delta, tuple(stats), t, N, config.seed, config.mode, sched)


def _check_params(eps: float, delta: float) -> None:
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
