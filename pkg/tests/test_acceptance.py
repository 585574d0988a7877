"""End-to-end acceptance checks, one per shipped guarantee.

Each test prints a [C#] line with the measured numbers next to the
stated target, so a verbose run reads as a checklist. Everything is
seeded; re-runs measure identical values.
"""

import json
import math
import os

import numpy as np
import pytest

from hbgraph.distance import jackknife, to_distribution
from hbgraph.diameter import double_sweep, giant_component, ifub, run_length_lower_bound
from hbgraph.engine import RunSet, error_evolution, run, run_exact, run_systolic, seed_sequence
from hbgraph.graph import Graph, gap_histogram, transpose
from hbgraph.hll import CounterArray, eta
from hbgraph.storage import CodecConfig, encode
from hbgraph.cli import main as cli_main, run_manifest
from util import (
    ba,
    distance_matrix,
    er,
    exact_curve,
    mixed_suite,
    random_tree,
    small_world,
    true_diameter,
)


def _pad_to(width, curve):
    out = np.full(width, curve[-1], dtype=float)
    out[: curve.size] = curve
    return out


def test_c01_single_counter_calibration():
    """Estimate spread and tail behaviour of lone counters at 10^5 items."""
    trials = 1500
    items = np.arange(100_000, dtype=np.uint64)
    shortfalls = []
    for m in (16, 32, 64):
        ests = np.empty(trials)
        for k in range(trials):
            c = CounterArray(1, m=m, seed=k)
            c.add_many(items)
            ests[k] = c.estimate(0)
        rel = ests / 100_000 - 1.0
        spread = float(rel.std())
        within = float(np.mean(np.abs(rel) <= 3 * eta(m)))
        print(
            f"[C1] m={m:2d}: spread {spread:.4f} (target <= {eta(m):.4f}), "
            f"within-3eta {within:.2%} (target >= 99%)"
        )
        if spread > eta(m):
            shortfalls.append(f"m={m}: spread {spread:.4f} > {eta(m):.4f}")
        if within < 0.99:
            shortfalls.append(f"m={m}: within-3eta {within:.2%} < 99%")
    if shortfalls:
        pytest.fail(
            "single-counter calibration misses the 1.06/sqrt(m) target:\n  "
            + "\n  ".join(shortfalls)
            + "\nAn ideal-hash simulation of this exact estimator (multinomial"
            " register occupancy, true geometric ranks) measures spread 0.2761"
            " (m=16), 0.1898 (m=32), 0.1316 (m=64) and within-3eta rates 98.7%,"
            " 99.1%, 99.4%. The implementation matches the ideal estimator; the"
            " 1.06/sqrt(m) constant is only approached as m grows, so the"
            " target is out of reach for m < 64 no matter the hash. See the"
            " README accuracy notes."
        )


def test_c02_estimated_curves_track_exact():
    """Mean of 10 sketched runs stays within 3*eta/sqrt(10) of truth."""
    rng = np.random.default_rng(202)
    graphs = []
    for _ in range(10):
        n = int(rng.integers(100, 2001))
        graphs.append(er(n, 8.0 / n, int(rng.integers(1 << 30))))
    for _ in range(10):
        n = int(rng.integers(100, 2001))
        graphs.append(ba(n, 4, int(rng.integers(1 << 30))))

    bound = 3 * eta(64) / math.sqrt(10)
    worst = 0.0
    for gi, g in enumerate(graphs):
        gid = f"c2-{gi}"
        ex = np.asarray(run_exact(g, graph_id=gid).monotone_values)
        rs = RunSet(
            [run(g, m=64, seed=s, graph_id=gid) for s in seed_sequence(1000 + gi, 10)]
        )
        est = rs.to_matrix().mean(axis=0)
        width = max(ex.size, est.size)
        rel = np.abs(_pad_to(width, est) / _pad_to(width, ex) - 1.0)
        worst = max(worst, float(rel.max()))
        assert rel.max() <= bound, (
            f"graph {gi} (n={g.n}): max relative error {rel.max():.4f} "
            f"exceeds {bound:.4f}"
        )

    # exact mode against an independent all-pairs BFS census
    small_rng = np.random.default_rng(203)
    small = [er(int(small_rng.integers(50, 260)), 0.06, 300 + i) for i in range(4)]
    small += [ba(int(small_rng.integers(50, 260)), 3, 400 + i) for i in range(4)]
    for g in small:
        got = np.asarray(run_exact(g).monotone_values)
        want = exact_curve(g)
        width = max(got.size, want.size)
        assert np.array_equal(_pad_to(width, got), _pad_to(width, want))
    print(
        f"[C2] 20 graphs, mean-of-10 runs: worst relative error {worst:.4f} "
        f"(bound {bound:.4f}); exact mode == BFS census on {len(small)} graphs"
    )


def test_c03_systolic_equivalence():
    """Change-driven propagation returns bit-identical estimates."""
    checked = 0
    for i, g in enumerate(mixed_suite(seed=303, count=50, max_n=120)):
        pred = transpose(g)
        m = 64 if i % 2 else 16
        a = run(g, m=m, seed=i, graph_id=f"c3-{i}")
        b = run_systolic(g, pred, m=m, seed=i, graph_id=f"c3-{i}")
        assert a.values == b.values, f"graph {i}: systolic diverged"
        assert a.iterations == b.iterations
        checked += 1
    print(f"[C3] systolic == plain on {checked}/50 graphs, bit for bit")


def _census_stats(g, include_self_pairs, q=0.9):
    """Distance statistics recomputed from scratch off the BFS matrix."""
    d = distance_matrix(g)
    vals = d[d >= 0].astype(float)
    if not include_self_pairs:
        vals = vals[vals > 0]
    mu = float(vals.mean())
    var = float(vals.var())
    counts = np.bincount(vals.astype(np.int64))
    cum = np.cumsum(counts)
    target = q * cum[-1]
    dq = int(np.argmax(cum >= target))
    if dq == 0:
        eff = 0.0
    else:
        step = cum[dq] - cum[dq - 1]
        eff = dq - 1 + (target - cum[dq - 1]) / step
    return mu, var, float(eff)


def test_c04_statistics_match_census():
    """Exact-pipeline mean/variance/spid/effective diameter vs brute force."""
    checked = 0
    for g in mixed_suite(seed=404, count=50, max_n=300):
        curve = run_exact(g).monotone_values
        for incl in (True, False):
            try:
                dist = to_distribution(curve, g.n, include_self_pairs=incl)
            except ValueError:
                continue  # nothing beyond self-pairs
            mu, var, eff = _census_stats(g, incl)
            assert abs(dist.mean() - mu) <= 1e-9
            assert abs(dist.variance() - var) <= 1e-9
            assert abs(dist.effective_diameter(0.9) - eff) <= 1e-9
            if mu > 0:
                assert abs(dist.spid() * dist.mean() - dist.variance()) <= 1e-12
        checked += 1
    print(f"[C4] statistics == census to 1e-9 on {checked}/50 graphs, "
          "spid*mean == variance to 1e-12")


def test_c05_jackknife_sanity_and_coverage():
    """Degenerate cases exact; 2-SE intervals cover truth >= 85/100."""
    # identical rows: leave-one-out estimates coincide, so SE is exactly 0
    row = np.asarray(exact_curve(er(300, 0.02, seed=5)), dtype=float)
    matrix = np.tile(row, (6, 1))
    for name in ("mean", "variance", "spid", "effective_diameter"):
        res = jackknife(matrix, name, n=300)
        assert res.se == 0.0, f"{name}: SE {res.se} != 0 on identical runs"

    # a linear functional passes through bias correction untouched
    g = er(500, 0.01, seed=6)
    rs = RunSet([run(g, m=16, seed=s, graph_id="c5") for s in seed_sequence(50, 8)])
    mat = rs.to_matrix()
    res = jackknife(mat, lambda c: float(c[-1]), n=g.n)
    assert res.estimate == pytest.approx(float(mat.mean(axis=0)[-1]), rel=1e-12)

    # coverage on one sparse random graph, 100 fresh run sets of 10
    big = er(2000, 0.005, seed=31)
    truth = to_distribution(run_exact(big, graph_id="c5big").monotone_values, big.n).mean()
    seeds = seed_sequence(7, 1000)
    hits = 0
    for b in range(100):
        batch = RunSet(
            [run(big, m=16, seed=s, graph_id="c5big") for s in seeds[b * 10 : (b + 1) * 10]]
        )
        est = jackknife(batch, "mean")
        hits += abs(est.estimate - truth) <= 2 * est.se
    print(f"[C5] SE==0 on identical runs; linear stat passes through; "
          f"2-SE coverage {hits}/100 (target >= 85)")
    assert hits >= 85


def test_c06_diameter_exactness():
    """Fringe refinement equals brute force; sweeps are exact on trees."""
    count = 0
    for g in mixed_suite(seed=606, count=400, max_n=160):
        if not g.symmetric:
            continue
        gc = giant_component(g)
        res = ifub(gc)
        assert res.exact
        assert res.diameter == true_diameter(gc), f"n={gc.n}: wrong diameter"
        assert res.bfs_count <= gc.n + 2
        count += 1
        if count == 200:
            break
    assert count == 200

    for seed in range(50):
        t = random_tree(4 + (seed * 11) % 280, seed=seed)
        assert double_sweep(t).lower == true_diameter(t)

    wins = 0
    used = []
    for seed in range(30):
        g = small_world(400, 3, 0.1, seed=seed)
        res = ifub(g)
        assert res.exact
        used.append(res.bfs_count)
        wins += res.bfs_count < g.n
    rate = wins / 30
    print(f"[C6] ifub == brute force on 200 graphs; sweeps exact on 50 trees; "
          f"{wins}/30 small-world runs used < n searches (median {int(np.median(used))} "
          f"of n=400)")
    assert rate >= 0.9


def test_c07_run_length_bound_soundness():
    """A stabilized run never iterates past the largest finite distance."""
    for i, g in enumerate(mixed_suite(seed=707, count=100, max_n=130)):
        r = run(g, m=16, seed=i, graph_id=f"c7-{i}")
        assert not r.truncated
        bound = run_length_lower_bound(r)
        assert bound <= true_diameter(g), (
            f"graph {i}: bound {bound} exceeds diameter {true_diameter(g)}"
        )
    print("[C7] run-length lower bound sound on 100/100 graphs")


def test_c08_codec_round_trips_and_density():
    """Lossless under every knob combination; unit gaps cost O(1) bits."""
    codes = [("gamma", 1), ("delta", 1), ("zeta", 3)]
    combos = [
        CodecConfig(window=w, min_interval=iv, residual_code=c, zeta_k=k)
        for c, k in codes
        for w in (0, 7)
        for iv in (0, 4)
    ]
    graphs = mixed_suite(seed=808, count=200, max_n=60)
    for g in graphs:
        for cfg in combos:
            h = encode(g, cfg).decode()
            assert np.array_equal(h.indptr, g.indptr)
            assert np.array_equal(h.indices, g.indices)

    n = 1_000_000
    srcs = np.arange(n, dtype=np.int64)
    ring = Graph.from_arcs(n, srcs, (srcs + 1) % n)
    enc = encode(ring, CodecConfig(window=0, min_interval=0, residual_code="gamma"))
    assert enc.bits_per_arc < 4.0
    assert np.array_equal(enc.decode().indices, ring.indices)

    # histogram equals an arc-by-arc recount, before and after a round trip
    recounted = 0
    for g in graphs[:25]:
        if g.num_arcs == 0:
            continue
        tally = {}
        for x in range(g.n):
            succ = g.successors(x).tolist()
            for pos, s in enumerate(succ):
                gap = abs(s - x) + 1 if pos == 0 else s - succ[pos - 1]
                b = gap.bit_length() - 1
                tally[b] = tally.get(b, 0) + 1
        manual = np.zeros(max(tally) + 1, dtype=np.int64)
        for b, c in tally.items():
            manual[b] = c
        assert np.array_equal(gap_histogram(g), manual)
        assert np.array_equal(gap_histogram(encode(g).decode()), manual)
        recounted += 1
    print(f"[C8] 200 graphs x {len(combos)} codec configs lossless; ring at "
          f"{enc.bits_per_arc:.2f} bits/arc (< 4); gap histogram == recount on "
          f"{recounted} graphs")


def test_c09_manifest_replay_byte_identical(tmp_path):
    """Replaying recorded commands reproduces every output byte for byte."""
    g = er(150, 0.04, seed=17, symmetric=True)
    edges = tmp_path / "edges.txt"
    with open(edges, "w") as fh:
        for u in range(g.n):
            for v in g.successors(u).tolist():
                fh.write(f"{u} {v}\n")
    hbg = str(tmp_path / "g.hbg")
    runs = str(tmp_path / "runs.json")
    stats = str(tmp_path / "stats.json")
    assert cli_main(["import", str(edges), "-o", hbg]) == 0
    assert cli_main(["anf", hbg, "-o", runs, "-m", "16", "-r", "5", "--seed", "9"]) == 0
    assert cli_main(["stats", runs, "-o", stats]) == 0

    compared = 0
    for produced in (hbg, runs, stats):
        manifest = produced + ".manifest.json"
        replay_dir = str(tmp_path / ("replay-" + os.path.basename(produced)))
        mapping = run_manifest(manifest, out_dir=replay_dir)
        for orig, copy in mapping.items():
            if orig.endswith(".manifest.json"):
                continue
            with open(orig, "rb") as a, open(copy, "rb") as b:
                assert a.read() == b.read(), f"replay of {orig} differs"
            compared += 1
    # replaying the replay changes nothing either
    again = run_manifest(runs + ".manifest.json", out_dir=str(tmp_path / "replay2"))
    for orig, copy in again.items():
        if not orig.endswith(".manifest.json"):
            with open(orig, "rb") as a, open(copy, "rb") as b:
                assert a.read() == b.read()
    print(f"[C9] import/anf/stats manifests replayed byte-identically "
          f"({compared} outputs compared)")


def test_c10_error_evolution_settles():
    """Per-step error drift shrinks as the diffusion saturates."""
    g = small_world(10_000, 3, 0.05, seed=4)
    ex = run_exact(g, graph_id="c10")
    est = run(g, m=64, seed=1, graph_id="c10")
    t, r, dr = error_evolution(est, ex)
    assert t.size >= 7, "graph stabilized too quickly for a three-way split"
    drift = np.abs(dr[1:])  # dr[0] is a padding artifact, not a step
    third = drift.size // 3
    early = float(drift[:third].mean())
    late = float(drift[-third:].mean())
    print(f"[C10] n=10000 small world, T={est.iterations}: mean |dr| "
          f"first third {early:.5f} vs final third {late:.5f}")
    assert late < early
