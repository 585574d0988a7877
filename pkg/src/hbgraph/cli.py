"""Command-line front end.

Subcommands mirror the library pipeline: import an edge list into
compressed storage, permute or transpose it, diffuse counters (anf),
then summarize (stats), bound or pin down diameters, and inspect the
compression (gaps, export-edges).

Every command that writes files also writes a manifest next to its first
output: the resolved argument vector plus content hashes of the inputs.
run_manifest() replays one and, because seeds are explicit and run files
never embed timings, the replayed outputs are byte-identical. Manifests
are never overwritten; a colliding name gets a numeric suffix.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import time

import numpy as np

from . import __version__
from .distance import to_distribution, summarize
from .diameter import double_sweep, giant_component, ifub, run_length_lower_bound
from .engine import (
    BudgetExceededError,
    RunSet,
    run,
    run_exact,
    run_systolic,
    seed_sequence,
)
from .graph import (
    Graph,
    apply_permutation,
    avg_degree,
    gap_histogram,
    info_lower_bound,
    load_edge_list,
    load_permutation,
    random_permutation,
    save_edge_list,
    transpose,
)
from .storage import MAGIC, CodecConfig, encode
from .storage import load as load_compressed
from .storage import save as save_compressed

__all__ = ["main", "run_manifest"]

log = logging.getLogger("hbgraph.cli")


# ---- small helpers ----


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _dump_json(obj, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _json_safe(obj):
    """Map nonfinite floats to null so the files stay strict JSON."""
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if np.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _print_table(rows, header=None) -> None:
    """Aligned columns: first column left, the rest right."""
    table = [tuple(str(c) for c in r) for r in rows]
    if header:
        table.insert(0, tuple(header))
    if not table:
        return
    widths = [max(len(r[i]) for r in table) for i in range(len(table[0]))]
    for r in table:
        cells = [
            f"{c:<{widths[0]}}" if i == 0 else f"{c:>{widths[i]}}"
            for i, c in enumerate(r)
        ]
        print("  ".join(cells).rstrip())


def _fresh_manifest_path(first_output: str) -> str:
    base = first_output + ".manifest"
    path = base + ".json"
    k = 2
    while os.path.exists(path):
        path = f"{base}-{k}.json"
        k += 1
    return path


def _write_manifest(command: str, argv: list, inputs: list, outputs: list) -> str:
    manifest = {
        "tool": "hbgraph",
        "version": __version__,
        "command": command,
        "argv": [str(a) for a in argv],
        "inputs": [{"path": p, "sha256": _sha256(p)} for p in inputs],
        "outputs": list(outputs),
    }
    path = _fresh_manifest_path(outputs[0])
    _dump_json(manifest, path)
    log.info("manifest written to %s", path)
    return path


def run_manifest(manifest_path: str, out_dir: str | None = None) -> dict:
    """Re-execute a recorded command; outputs land in out_dir when given.

    Input files are re-hashed first and a mismatch is an error, so a
    successful replay reproduces the original outputs byte for byte.
    Returns {original output path: replayed output path}.
    """
    with open(manifest_path, "r", encoding="ascii") as fh:
        manifest = json.load(fh)
    for item in manifest["inputs"]:
        if not os.path.exists(item["path"]):
            raise FileNotFoundError(f"manifest input missing: {item['path']}")
        digest = _sha256(item["path"])
        if digest != item["sha256"]:
            raise ValueError(
                f"manifest input changed since recording: {item['path']}"
            )
    argv = list(manifest["argv"])
    if out_dir is None:
        mapping = {o: o for o in manifest["outputs"]}
    else:
        os.makedirs(out_dir, exist_ok=True)
        mapping = {
            o: os.path.join(out_dir, os.path.basename(o))
            for o in manifest["outputs"]
        }
        argv = [mapping.get(tok, tok) for tok in argv]
    rc = main(argv)
    if rc != 0:
        raise RuntimeError(f"replay of {manifest_path} exited with status {rc}")
    return mapping


def _load_graph(path: str):
    """Accept compressed storage or a plain edge list; sniff by magic.

    Returns (graph, codec config or None). A .ids sidecar, when present
    next to compressed input, restores the original node ids.
    """
    with open(path, "rb") as fh:
        head = fh.read(len(MAGIC))
    if head == MAGIC:
        enc = load_compressed(path)
        g = enc.decode()
        sidecar = path + ".ids"
        if os.path.exists(sidecar):
            ids = np.loadtxt(sidecar, dtype=np.int64, ndmin=1)
            if ids.size != g.n:
                raise ValueError(
                    f"{sidecar} lists {ids.size} ids for {g.n} nodes"
                )
            g.original_ids = ids
        return g, enc.cfg
    return load_edge_list(path), None


def _save_ids(g: Graph, hbg_path: str) -> list:
    """Write the original-id sidecar; returns the paths written."""
    if g.original_ids is None:
        return []
    sidecar = hbg_path + ".ids"
    with open(sidecar, "w", encoding="ascii") as fh:
        for v in np.asarray(g.original_ids):
            fh.write(f"{int(v)}\n")
    return [sidecar]


def _codec_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument(
        "--window", type=int, default=None,
        help="how many previous lists a node may copy from (0 disables)",
    )
    sp.add_argument(
        "--min-interval", type=int, default=None,
        help="shortest consecutive run stored as an interval (0 disables)",
    )
    sp.add_argument(
        "--code", choices=("gamma", "delta", "zeta"), default=None,
        help="residual code",
    )
    sp.add_argument(
        "--zeta-k", type=int, default=None, help="shape parameter for zeta"
    )


def _codec_config(ns, fallback: CodecConfig | None) -> CodecConfig:
    base = fallback if fallback is not None else CodecConfig()
    return CodecConfig(
        window=base.window if ns.window is None else ns.window,
        min_interval=(
            base.min_interval if ns.min_interval is None else ns.min_interval
        ),
        residual_code=base.residual_code if ns.code is None else ns.code,
        zeta_k=base.zeta_k if ns.zeta_k is None else ns.zeta_k,
    )


def _codec_argv(cfg: CodecConfig) -> list:
    return [
        "--window", cfg.window,
        "--min-interval", cfg.min_interval,
        "--code", cfg.residual_code,
        "--zeta-k", cfg.zeta_k,
    ]


def _encode_and_save(g: Graph, cfg: CodecConfig, out: str) -> list:
    """Encode, save, print the compression report; returns outputs."""
    enc = encode(g, cfg)
    save_compressed(enc, out)
    outputs = [out] + _save_ids(g, out)
    floor = info_lower_bound(g.n, g.num_arcs)
    floor_per_arc = floor / g.num_arcs if g.num_arcs else 0.0
    _print_table(
        [
            ("nodes", g.n),
            ("arcs", g.num_arcs),
            ("symmetric", "yes" if g.symmetric else "no"),
            ("avg out-degree", f"{avg_degree(g):.3f}"),
            ("stream bytes", len(enc.stream)),
            ("bits per arc", f"{enc.bits_per_arc:.3f}"),
            ("copied arcs %", f"{100 * enc.copy_fraction:.2f}"),
            ("interval arcs %", f"{100 * enc.interval_fraction:.2f}"),
            ("size floor bits/arc", f"{floor_per_arc:.3f}"),
        ]
    )
    return outputs


# ---- commands ----


def cmd_import(ns) -> int:
    edges = os.path.abspath(ns.edges)
    out = os.path.abspath(ns.output)
    g = load_edge_list(
        edges, symmetrize=ns.symmetrize, allow_self_loops=ns.allow_self_loops
    )
    if not g.symmetric and g.is_symmetric():
        # arcs already come in pairs; record that so diameter tools accept it
        g.symmetric = True
    cfg = _codec_config(ns, None)
    outputs = _encode_and_save(g, cfg, out)
    argv = ["--threads", ns.threads, "import", edges, "-o", out]
    if ns.symmetrize:
        argv.append("--symmetrize")
    if ns.allow_self_loops:
        argv.append("--allow-self-loops")
    argv += _codec_argv(cfg)
    _write_manifest("import", argv, [edges], outputs)
    return 0


def cmd_permute(ns) -> int:
    src = os.path.abspath(ns.graph)
    out = os.path.abspath(ns.output)
    g, file_cfg = _load_graph(src)
    if (ns.perm is None) == (not ns.random):
        raise ValueError("pass exactly one of --perm FILE or --random")
    if ns.perm is not None:
        perm_path = os.path.abspath(ns.perm)
        perm = load_permutation(perm_path, g.n)
    else:
        perm = random_permutation(g.n, ns.seed)
    g2 = apply_permutation(g, perm)
    cfg = _codec_config(ns, file_cfg)
    outputs = _encode_and_save(g2, cfg, out)
    argv = ["--threads", ns.threads, "permute", src, "-o", out]
    inputs = [src]
    if ns.perm is not None:
        argv += ["--perm", perm_path]
        inputs.append(perm_path)
    else:
        argv += ["--random", "--seed", ns.seed]
    argv += _codec_argv(cfg)
    _write_manifest("permute", argv, inputs, outputs)
    return 0


def cmd_transpose(ns) -> int:
    src = os.path.abspath(ns.graph)
    out = os.path.abspath(ns.output)
    g, file_cfg = _load_graph(src)
    cfg = _codec_config(ns, file_cfg)
    outputs = _encode_and_save(transpose(g), cfg, out)
    argv = ["--threads", ns.threads, "transpose", src, "-o", out]
    argv += _codec_argv(cfg)
    _write_manifest("transpose", argv, [src], outputs)
    return 0


def cmd_anf(ns) -> int:
    src = os.path.abspath(ns.graph)
    out = os.path.abspath(ns.output)
    g, _ = _load_graph(src)
    gid = g.fingerprint()
    if ns.exact:
        if ns.runs not in (None, 1):
            raise ValueError("--exact computes one deterministic run; drop --runs")
        runs = [
            run_exact(g, max_iters=ns.max_iters, graph_id=gid, threads=ns.threads)
        ]
    else:
        count = 10 if ns.runs is None else ns.runs
        if count < 1:
            raise ValueError("--runs must be >= 1")
        pred = transpose(g) if ns.systolic else None
        runs = []
        for s in seed_sequence(ns.seed, count):
            if ns.systolic:
                r = run_systolic(
                    g, pred, m=ns.registers, seed=s, max_iters=ns.max_iters,
                    budget_bytes=ns.budget_bytes, graph_id=gid,
                    threads=ns.threads,
                )
            else:
                r = run(
                    g, m=ns.registers, seed=s, max_iters=ns.max_iters,
                    budget_bytes=ns.budget_bytes, graph_id=gid,
                    threads=ns.threads,
                )
            runs.append(r)
    rs = RunSet(runs)
    rs.save(out)
    rows = [
        (i, r.m or "exact", r.seed, r.iterations,
         f"{r.values[-1]:.1f}", "yes" if r.truncated else "no")
        for i, r in enumerate(rs.runs)
    ]
    _print_table(rows, header=("run", "registers", "seed", "iterations",
                               "N(T)", "truncated"))
    argv = ["--threads", ns.threads, "anf", src, "-o", out]
    if ns.exact:
        argv.append("--exact")
    else:
        argv += ["--registers", ns.registers, "--runs", len(runs),
                 "--seed", ns.seed]
        if ns.systolic:
            argv.append("--systolic")
    if ns.max_iters is not None:
        argv += ["--max-iters", ns.max_iters]
    if ns.budget_bytes is not None:
        argv += ["--budget-bytes", ns.budget_bytes]
    _write_manifest("anf", argv, [src], [out])
    return 0


def _stats_payload(rs: RunSet, include_self: bool, q: float) -> dict:
    if len(rs) >= 2:
        payload = summarize(rs, include_self_pairs=include_self, q=q).to_dict()
    else:
        r = rs.runs[0]
        curve = np.asarray(r.monotone_values)
        dist = to_distribution(curve, rs.n, include_self_pairs=include_self)
        try:
            excl = to_distribution(curve, rs.n, include_self_pairs=False)
            excl_mean = excl.mean()
        except ValueError:  # nothing but self-pairs
            excl_mean = float("nan")
        nan = float("nan")
        payload = {
            "n": rs.n,
            "runs": 1,
            "iterations": r.iterations,
            "reachable_pct": 100.0 * float(curve[-1]) / (rs.n * float(rs.n)),
            "mean": dist.mean(),
            "mean_se": nan,
            "mean_excl_self": excl_mean,
            "variance": dist.variance(),
            "variance_se": nan,
            "spid": dist.spid(),
            "spid_se": nan,
            "effective_diameter": dist.effective_diameter(q),
            "effective_diameter_se": nan,
            "within_ceiling_pct": dist.within_ceiling_pct(),
            "within_ceiling_se": nan,
        }
    payload["include_self_pairs"] = include_self
    payload["quantile"] = q
    return payload


def cmd_stats(ns) -> int:
    src = os.path.abspath(ns.runs_file)
    rs = RunSet.load(src)
    payload = _stats_payload(rs, not ns.exclude_self_pairs, ns.quantile)

    def fmt(key):
        v = payload[key]
        return "n/a" if not np.isfinite(v) else f"{v:.6f}"

    rows = [
        ("nodes", payload["n"], ""),
        ("runs", payload["runs"], ""),
        ("iterations", payload["iterations"], ""),
        ("reachable pairs %", f"{payload['reachable_pct']:.4f}", ""),
        ("mean distance", fmt("mean"), f"+- {fmt('mean_se')}"),
        ("mean (excl self)", fmt("mean_excl_self"), ""),
        ("variance", fmt("variance"), f"+- {fmt('variance_se')}"),
        ("spid", fmt("spid"), f"+- {fmt('spid_se')}"),
        ("effective diameter", fmt("effective_diameter"),
         f"+- {fmt('effective_diameter_se')}"),
        ("within ceil(mean) %", fmt("within_ceiling_pct"),
         f"+- {fmt('within_ceiling_se')}"),
    ]
    _print_table(rows)

    outputs = []
    if ns.output:
        out = os.path.abspath(ns.output)
        _dump_json(_json_safe(payload), out)
        outputs.append(out)
    if ns.tsv:
        tsv = os.path.abspath(ns.tsv)
        keys = sorted(k for k in payload if k not in ("include_self_pairs", "quantile"))
        with open(tsv, "w", encoding="ascii") as fh:
            fh.write("statistic\tvalue\n")
            for k in keys:
                fh.write(f"{k}\t{payload[k]!r}\n".replace("nan", "n/a"))
        outputs.append(tsv)
    if outputs:
        argv = ["--threads", ns.threads, "stats", src]
        if ns.output:
            argv += ["-o", os.path.abspath(ns.output)]
        if ns.tsv:
            argv += ["--tsv", os.path.abspath(ns.tsv)]
        if ns.exclude_self_pairs:
            argv.append("--exclude-self-pairs")
        argv += ["--quantile", ns.quantile]
        _write_manifest("stats", argv, [src], outputs)
    return 0


def cmd_diameter(ns) -> int:
    src = os.path.abspath(ns.graph)
    g, _ = _load_graph(src)
    if ns.giant:
        g = giant_component(g, allow_asymmetric=ns.allow_asymmetric)
    t0 = time.perf_counter()
    if ns.sweep_only:
        ds = double_sweep(g, start=ns.start, allow_asymmetric=ns.allow_asymmetric)
        payload = {
            "lower": ds.lower,
            "upper": None,
            "exact": False,
            "bfs_count": ds.bfs_count,
            "component_size": None,
            "far_pair": [ds.y, ds.z],
            "midpoint": ds.midpoint,
            "midpoint_ecc": ds.midpoint_ecc,
        }
        rows = [
            ("diameter lower bound", ds.lower),
            ("far pair", f"{ds.y} {ds.z}"),
            ("midpoint", ds.midpoint),
            ("midpoint eccentricity", ds.midpoint_ecc),
            ("searches", ds.bfs_count),
        ]
    else:
        res = ifub(g, start=ns.start, allow_asymmetric=ns.allow_asymmetric)
        payload = {
            "lower": res.lower,
            "upper": res.upper,
            "exact": res.exact,
            "bfs_count": res.bfs_count,
            "component_size": res.component_size,
            "diameter": res.diameter if res.exact else None,
        }
        rows = [
            ("diameter", res.diameter if res.exact else f"{res.lower}..{res.upper}"),
            ("component size", res.component_size),
            ("searches", res.bfs_count),
        ]
    log.info("diameter wall=%.3fs", time.perf_counter() - t0)
    _print_table(rows)
    if ns.output:
        out = os.path.abspath(ns.output)
        _dump_json(_json_safe(payload), out)
        argv = ["--threads", ns.threads, "diameter", src, "-o", out]
        if ns.start is not None:
            argv += ["--start", ns.start]
        if ns.giant:
            argv.append("--giant")
        if ns.sweep_only:
            argv.append("--sweep-only")
        if ns.allow_asymmetric:
            argv.append("--allow-asymmetric")
        _write_manifest("diameter", argv, [src], [out])
    return 0


def cmd_gaps(ns) -> int:
    src = os.path.abspath(ns.graph)
    g, _ = _load_graph(src)
    hist = gap_histogram(g)
    total = int(hist.sum())
    rows = []
    for b, count in enumerate(hist):
        lo, hi = 1 << b, (1 << (b + 1)) - 1
        span = str(lo) if lo == hi else f"{lo}..{hi}"
        pct = 100.0 * count / total if total else 0.0
        rows.append((f"2^{b}", span, int(count), f"{pct:.2f}"))
    _print_table(rows, header=("bin", "gap", "arcs", "%"))
    if ns.output:
        out = os.path.abspath(ns.output)
        with open(out, "w", encoding="ascii") as fh:
            fh.write("bin\tgap_lo\tgap_hi\tarcs\n")
            for b, count in enumerate(hist):
                fh.write(f"{b}\t{1 << b}\t{(1 << (b + 1)) - 1}\t{int(count)}\n")
        argv = ["--threads", ns.threads, "gaps", src, "-o", out]
        _write_manifest("gaps", argv, [src], [out])
    return 0


def cmd_bound(ns) -> int:
    src = os.path.abspath(ns.runs_file)
    rs = RunSet.load(src)
    bounds = [run_length_lower_bound(r) for r in rs.runs]
    rows = [
        (i, r.m or "exact", r.seed, r.iterations)
        for i, r in enumerate(rs.runs)
    ]
    _print_table(rows, header=("run", "registers", "seed", "iterations"))
    best = max(bounds)
    print(f"run-length diameter lower bound: {best}")
    if ns.output:
        out = os.path.abspath(ns.output)
        _dump_json({"lower_bound": best, "per_run": bounds}, out)
        argv = ["--threads", ns.threads, "bound", src, "-o", out]
        _write_manifest("bound", argv, [src], [out])
    return 0


def cmd_export_edges(ns) -> int:
    src = os.path.abspath(ns.graph)
    out = os.path.abspath(ns.output)
    g, _ = _load_graph(src)
    if ns.original_ids and g.original_ids is None:
        raise ValueError(
            "no original ids available (no .ids sidecar next to the input)"
        )
    save_edge_list(g, out, use_original_ids=ns.original_ids)
    print(f"wrote {g.num_arcs} arcs to {out}")
    argv = ["--threads", ns.threads, "export-edges", src, "-o", out]
    if ns.original_ids:
        argv.append("--original-ids")
    _write_manifest("export-edges", argv, [src], [out])
    return 0


# ---- parser ----


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hbgraph",
        description=(
            "Approximate neighbourhood functions, distance statistics and "
            "exact diameters for large graphs."
        ),
    )
    p.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("HB_THREADS", "1")),
        help="worker threads for diffusion sweeps (default: $HB_THREADS or 1)",
    )
    p.add_argument(
        "-q", "--quiet", action="store_true", help="suppress progress logging"
    )
    p.add_argument("--version", action="version", version=f"hbgraph {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sp = sub.add_parser("import", help="compress an edge list")
    sp.add_argument("edges", help="text file with one 'u v' arc per line")
    sp.add_argument("-o", "--output", required=True, help="compressed graph file")
    sp.add_argument("--symmetrize", action="store_true",
                    help="add the reverse of every arc")
    sp.add_argument("--allow-self-loops", action="store_true")
    _codec_args(sp)
    sp.set_defaults(func=cmd_import)

    sp = sub.add_parser("permute", help="relabel nodes and re-encode")
    sp.add_argument("graph", help="compressed graph or edge list")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--perm", help="permutation file (text or binary)")
    sp.add_argument("--random", action="store_true",
                    help="use a seeded random permutation")
    sp.add_argument("--seed", type=int, default=0)
    _codec_args(sp)
    sp.set_defaults(func=cmd_permute)

    sp = sub.add_parser("transpose", help="reverse every arc and re-encode")
    sp.add_argument("graph")
    sp.add_argument("-o", "--output", required=True)
    _codec_args(sp)
    sp.set_defaults(func=cmd_transpose)

    sp = sub.add_parser("anf", help="estimate the neighbourhood function")
    sp.add_argument("graph")
    sp.add_argument("-o", "--output", required=True, help="run file (JSON)")
    sp.add_argument("-m", "--registers", type=int, default=64,
                    help="registers per counter (power of two, >= 16)")
    sp.add_argument("-r", "--runs", type=int, default=None,
                    help="independent repetitions (default 10)")
    sp.add_argument("--seed", type=int, default=0,
                    help="master seed; per-run seeds derive from it")
    sp.add_argument("--systolic", action="store_true",
                    help="recompute only nodes whose successors changed")
    sp.add_argument("--exact", action="store_true",
                    help="bit-set diffusion: exact values, quadratic memory")
    sp.add_argument("--max-iters", type=int, default=None)
    sp.add_argument("--budget-bytes", type=int, default=None,
                    help="refuse to run if counter state would exceed this")
    sp.set_defaults(func=cmd_anf)

    sp = sub.add_parser("stats", help="distance statistics from a run file")
    sp.add_argument("runs_file")
    sp.add_argument("-o", "--output", help="write statistics as JSON")
    sp.add_argument("--tsv", help="write statistics as TSV")
    sp.add_argument("--exclude-self-pairs", action="store_true",
                    help="drop the n distance-0 pairs from the distribution")
    sp.add_argument("--quantile", type=float, default=0.9,
                    help="effective-diameter quantile (default 0.9)")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("diameter", help="exact diameter via fringe refinement")
    sp.add_argument("graph")
    sp.add_argument("-o", "--output", help="write the result as JSON")
    sp.add_argument("--start", type=int, default=None,
                    help="start node (default: highest degree)")
    sp.add_argument("--giant", action="store_true",
                    help="restrict to the largest component first")
    sp.add_argument("--sweep-only", action="store_true",
                    help="stop after the double sweep lower bound")
    sp.add_argument("--allow-asymmetric", action="store_true",
                    help="skip the symmetry check (results assume it anyway)")
    sp.set_defaults(func=cmd_diameter)

    sp = sub.add_parser("gaps", help="histogram of successor gaps")
    sp.add_argument("graph")
    sp.add_argument("-o", "--output", help="write the histogram as TSV")
    sp.set_defaults(func=cmd_gaps)

    sp = sub.add_parser("bound", help="diameter lower bound from run lengths")
    sp.add_argument("runs_file")
    sp.add_argument("-o", "--output", help="write the bound as JSON")
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("export-edges", help="decode back to an edge list")
    sp.add_argument("graph")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--original-ids", action="store_true",
                    help="use the ids from the .ids sidecar")
    sp.set_defaults(func=cmd_export_edges)
    return p


def main(argv=None) -> int:
    ns = _build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.WARNING if ns.quiet else logging.INFO,
        format="%(message)s",
    )
    try:
        return ns.func(ns)
    except (ValueError, OSError, RuntimeError, EOFError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
