"""Acceptance suite: one test per criterion, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import math
import subprocess
import sys
import time
import warnings
from fractions import Fraction

import numpy as np
import pytest

from oracles import (
    brute_comb_exists,
    brute_wide,
    graph_matching_count,
    independent_set_count,
)
from hypermatch.chain import BatchChain, conductance_exact, make_rng, mixing_bound, tv_bound
from hypermatch.exact import build_transition_graph, count_matchings, enumerate_matchings
from hypermatch.fpras import FprasConfig, count_fpras
from hypermatch.generators import (
    dual,
    from_bipartite,
    random_bipartite,
    random_kgraph,
    random_regular,
    rooted_blowup,
    subdivide,
)
from hypermatch.hypergraph import Graph, hypergraph_from, intersection_graph
from hypermatch.paths import verify_injectivity
from hypermatch.structure import claw_centers, find_three_comb, wide_edges

CORPUS_SEED = 1


def random_corpus(count=500, seed=CORPUS_SEED, max_n=15, max_m=12, ks=(2, 3, 4)):
    rng = make_rng(seed, 1)
    out = []
    for i in range(count):
        k = int(rng.choice(ks))
        n = int(rng.integers(k, max_n + 1))
        m = int(rng.integers(0, min(max_m, math.comb(n, k)) + 1))
        out.append(random_kgraph(n, m, k, seed * 100_000 + i))
    return out


@pytest.fixture(scope="module")
def corpus():
    return random_corpus()


# 1 -------------------------------------------------------------------------


def test_criterion_1_oracle_self_consistency(corpus):
    t0 = time.perf_counter()
    bad = [H for H in corpus if count_matchings(H) != len(enumerate_matchings(H))]
    elapsed = time.perf_counter() - t0
    assert {H.k for H in corpus} == {2, 3, 4}
    assert not bad
    assert elapsed < 60


# 2 -------------------------------------------------------------------------


def test_criterion_2_chain_exact_kernel(corpus):
    checked = 0
    for H in corpus:
        if H.m == 0 or count_matchings(H) > 500:
            continue
        T = build_transition_graph(H)
        N, q = T.size, Fraction(1, 2 * H.m)
        col = [Fraction(0)] * N
        for i in range(N):
            row = T.exact_row(i)
            assert sum(row.values()) == 1
            assert row[i] >= Fraction(1, 2)
            for j, p in row.items():
                col[j] += p
                if j != i:
                    assert p == q
                    assert T.probability(j, i) == p
        # uniform P = uniform, exactly
        assert all(c == 1 for c in col)
        checked += 1
    assert checked > 400


def _kernel_instances():
    return [
        hypergraph_from([(1, 2, 3)]),
        hypergraph_from([(1, 2, 3), (3, 4, 5)]),
        hypergraph_from([(1, 2, 3), (3, 4, 5), (5, 6, 7)]),
        hypergraph_from([(1, 2, 3), (4, 5, 6), (7, 8, 9), (3, 4, 7)]),
        random_kgraph(7, 8, 2, 3),
    ]


@pytest.mark.parametrize("idx", range(5))
def test_criterion_2_chain_empirical_kernel(idx):
    H = _kernel_instances()[idx]
    T = build_transition_graph(H)
    N = T.size
    total = 10**6
    per_state = total // N
    eng = BatchChain(H)
    rng = make_rng(2, idx)
    order = np.array(T.states, dtype=np.uint64)
    sorter = np.argsort(order)
    worst = 0.0
    for i in range(N):
        new = eng.step(eng.from_masks([T.states[i]] * per_state), rng)[0][:, 0]
        pos = sorter[np.searchsorted(order[sorter], new)]
        counts = np.bincount(pos, minlength=N)
        for j in range(N):
            p = float(T.probability(i, j))
            freq = counts[j] / per_state
            if p == 0:
                assert counts[j] == 0, (i, j)
                continue
            se = math.sqrt(p * (1 - p) / per_state)
            worst = max(worst, abs(freq - p) / se)
    print(f"instance {idx}: |Omega|={N}, worst deviation {worst:.2f} s.e.")
    assert worst <= 3


# 3 -------------------------------------------------------------------------


def _worst_start_tv(P: np.ndarray, t_max: int, checkpoints) -> tuple[np.ndarray, dict]:
    """Max over start states of the distance to uniform, for t = 0..t_max."""
    N = P.shape[0]
    Q = np.eye(N)
    u = 1.0 / N
    curve = np.empty(t_max + 1)
    at = {}
    for t in range(t_max + 1):
        if t:
            Q = Q @ P
        curve[t] = 0.5 * np.abs(Q - u).sum(axis=1).max()
        if t in checkpoints:
            at[t] = curve[t]
    return curve, at


def test_criterion_3_mixing_bound(corpus):
    t0 = time.perf_counter()
    checked = 0
    for H in corpus:
        if H.m == 0:
            continue
        omega = count_matchings(H)
        if not 2 <= omega <= 20:
            continue
        T = build_transition_graph(H)
        phi = conductance_exact(T).phi
        assert phi > 0
        t01 = mixing_bound(phi, omega, 0.01)
        t1 = mixing_bound(phi, omega, 0.1)
        curve, at = _worst_start_tv(T.dense(), t01, {t1, t01})
        ts = np.arange(t01 + 1)
        bound = omega**2 * (1 - float(phi) ** 2 / 2) ** ts
        assert tv_bound(phi, omega, t01) == pytest.approx(bound[-1])
        assert np.all(curve <= bound + 1e-12), H
        assert at[t1] <= 0.1 and at[t01] <= 0.01
        checked += 1
    elapsed = time.perf_counter() - t0
    print(f"{checked} instances with |Omega| <= 20 in {elapsed:.1f}s")
    assert checked >= 100
    assert elapsed < 300


# 4 -------------------------------------------------------------------------


def comb_free_corpus(size=50, seed=4):
    out = []
    # subdivided triples (m = 3 or 6) and small rooted blow-ups
    for i in range(8):
        H3 = random_kgraph(5 + i % 3, 1 + i % 2, 3, seed * 1000 + i)
        out.append(subdivide(H3))
    for sizes in ([2, 2], [2, 2, 1], [3, 1], [2, 1, 1], [1, 2, 2], [3, 2]):
        H = rooted_blowup(sizes, 3)
        if 0 < H.m <= 6:
            out.append(H)
    i = 0
    while len(out) < size:
        n = 6 + i % 7
        m = 2 + i % 5
        H = random_kgraph(n, m, 3, seed * 1000 + 100 + i)
        if not wide_edges(H):
            out.append(H)
        i += 1
    return out


def test_criterion_4_canonical_paths_s0():
    corpus = comb_free_corpus()
    assert len(corpus) == 50
    empties = 0
    for H in corpus:
        assert H.k == 3 and H.m <= 6 and find_three_comb(H) is None
        rep = verify_injectivity(H)
        assert rep.violation_count == 0, rep.violations
        assert rep.collision_count == 0, rep.collisions
        assert rep.images_outside == 0
        assert rep.max_pi <= rep.omega0
        assert rep.ok
        empties += rep.empty_images
    print(f"empty images across the corpus: {empties}")


# 5 -------------------------------------------------------------------------


def wide_corpus(size=30, seed=5):
    comb = [(1, 2, 3), (4, 5, 6), (7, 8, 9), (3, 4, 7)]
    out = [hypergraph_from(comb, n=9)]
    i = 0
    while len(out) < size:
        n = 9 + i % 4
        m = 4 + i % 3
        H = random_kgraph(n, m, 3, seed * 1000 + i)
        if 1 <= len(wide_edges(H)) <= 2:
            out.append(H)
        i += 1
    return out


def test_criterion_5_canonical_paths_general():
    corpus = wide_corpus()
    assert len(corpus) == 30
    seen_s = set()
    for H in corpus:
        rep = verify_injectivity(H, general=True)
        seen_s.add(rep.s)
        assert H.m <= 6 and rep.s in (1, 2)
        assert rep.violation_count == 0, rep.violations
        assert rep.collision_count == 0, rep.collisions
        assert rep.images_outside == 0
        assert rep.max_pi <= rep.omega_s_bound == H.n ** ((rep.s + 1) * H.k) * rep.omega
    print(f"wide-edge counts present: {sorted(seen_s)}")


# 6 -------------------------------------------------------------------------


def test_criterion_6_structural_equivalences():
    corpus = random_corpus(seed=6)
    discrepancies = 0
    for H in corpus:
        wide = wide_edges(H)
        brute = brute_wide(list(H.edges))
        if wide != claw_centers(intersection_graph(H)) or wide != brute:
            discrepancies += 1
        if (find_three_comb(H) is not None) != bool(brute) or brute_comb_exists(list(H.edges)) != bool(wide):
            discrepancies += 1
    assert sum(bool(wide_edges(H)) for H in corpus) > 0
    assert discrepancies == 0


# 7 -------------------------------------------------------------------------


def fpras_instances():
    C8 = Graph(8, tuple(sorted((min(i, i % 8 + 1), max(i, i % 8 + 1)) for i in range(1, 9))))
    return {
        "path3": hypergraph_from([(1, 2, 3), (3, 4, 5), (5, 6, 7)]),
        "subdivided-single": subdivide(hypergraph_from([(1, 2, 3)]), with_original=True),
        "comb": hypergraph_from([(1, 2, 3), (4, 5, 6), (7, 8, 9), (3, 4, 7)]),
        "dual-c8": dual(C8),
        "random-k2": random_kgraph(10, 12, 2, 7),
    }


def test_criterion_7_fpras_accuracy():
    t0 = time.perf_counter()
    eps, delta = 0.2, 0.1
    inst = fpras_instances()
    truth = {name: count_matchings(H) for name, H in inst.items()}
    assert truth["path3"] == 5 and truth["subdivided-single"] == 5
    assert all(2 <= c <= 10**4 for c in truth.values())
    for name, H in inst.items():
        good = 0
        for seed in range(50):
            est = count_fpras(H, eps, delta, FprasConfig(seed=seed)).estimate
            good += abs(est - truth[name]) <= eps * truth[name]
        print(f"{name}: count {truth[name]}, {good}/50 within eps")
        assert good >= 42, name
    assert time.perf_counter() - t0 < 600


# 8 -------------------------------------------------------------------------


def test_criterion_8_generator_claims():
    rng = make_rng(8, 0)
    for i in range(200):
        n = int(rng.integers(4, 10))
        m = int(rng.integers(1, min(8, math.comb(n, 3)) + 1))
        assert find_three_comb(subdivide(random_kgraph(n, m, 3, 8000 + i))) is None
        parts = [int(x) for x in rng.integers(1, 4, size=int(rng.integers(2, 6)))]
        k = int(rng.integers(2, 5))
        assert find_three_comb(rooted_blowup(parts, k)) is None

    for i in range(100):
        left, right = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        m = int(rng.integers(0, min(12, left * right) + 1))
        G = random_bipartite(left, right, m, 8100 + i)
        k = int(rng.integers(2, 6))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # odd-degree warnings are irrelevant to the count
            H = from_bipartite(G, k)
        assert count_matchings(H) == graph_matching_count(list(G.edges))

    done = 0
    i = 0
    while done < 100:
        n = int(rng.integers(4, 15))
        d = int(rng.integers(2, min(5, n)))
        i += 1
        if n * d % 2:
            continue
        G = random_regular(n, d, 8200 + i)
        assert count_matchings(dual(G)) == independent_set_count(n, G.edges)
        done += 1


# 9 -------------------------------------------------------------------------


def test_criterion_9_cli_reproducibility(tmp_path):
    comb = tmp_path / "comb.txt"
    comb.write_text("9 4 3\n1 2 3\n3 4 7\n4 5 6\n7 8 9\n")
    single = tmp_path / "single.txt"
    single.write_text("3 1 3\n1 2 3\n")
    runs = [
        ["count", str(comb), "--fpras", "--eps", "0.3", "--delta", "0.2", "--seed", "11"],
        ["count", str(single), "--fpras", "--seed", "0"],
        ["sample", str(comb), "--steps", "200", "--seed", "5", "--trace"],
        ["sample", str(comb), "--steps", "50"],
        ["generate", "random", "--n", "10", "--m", "7", "--k", "3", "--seed", "3"],
        ["generate", "random", "--n", "8", "--m", "5", "--k", "2", "--seed", "3", "--json"],
        ["count", str(comb), "--exact"],
        ["paths", "verify", str(comb), "--general"],
        ["conductance", str(comb), "--curve", "20"],
    ]
    for argv in runs:
        outs = [
            subprocess.run([sys.executable, "-m", "hypermatch", *argv], capture_output=True, check=True).stdout
            for _ in range(2)
        ]
        assert outs[0] and outs[0] == outs[1], argv
