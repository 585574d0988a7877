"""Exact diameters with far fewer than n breadth-first searches.

A double sweep (BFS to a far node y, BFS from y to the farthest z) gives
a strong lower bound d(y, z); the midpoint c of that path is a good
low-eccentricity pivot. The fringe refinement then walks the BFS levels
of c from the outside in: every node at depth i has eccentricity at most
i + ecc(c), and once every unexamined node provably cannot beat the
current lower bound the bound is the diameter. On graphs whose distances
hug the mean this terminates after a handful of per-node searches.

Everything here assumes symmetric arcs (the bound arguments use both
directions of the triangle inequality); pass allow_asymmetric=True only
when the graph is symmetric in substance but the flag was lost.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import NeighbourhoodRun, _segments
from .graph import Graph

__all__ = [
    "DiameterResult",
    "DoubleSweepResult",
    "bfs",
    "eccentricity",
    "double_sweep",
    "ifub",
    "component_labels",
    "giant_component",
    "run_length_lower_bound",
]


def _check_symmetric(g: Graph, allow_asymmetric: bool) -> None:
    if not g.symmetric and not allow_asymmetric:
        raise ValueError(
            "this computation is only correct on symmetric graphs; "
            "symmetrize first or pass allow_asymmetric=True if the arcs "
            "really do come in pairs"
        )


def bfs(
    g: Graph,
    source: int,
    segment_size: int | None = None,
    return_parents: bool = False,
):
    """Distances from source; -1 marks unreached nodes.

    Level-synchronous with a numpy frontier. `segment_size` caps how many
    frontier nodes are expanded per gather (memory control only: results
    are identical for every segmentation). Parents, when requested, are
    the lowest-id frontier predecessor of each node, so they are
    deterministic too.
    """
    if not 0 <= source < g.n:
        raise IndexError(f"source {source} out of range [0, {g.n})")
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    parents = np.full(g.n, -1, dtype=np.int64) if return_parents else None
    frontier = np.array([source], dtype=np.int64)
    d = 0
    step = segment_size if segment_size and segment_size > 0 else None
    while frontier.size:
        collected = []
        for lo in range(0, frontier.size, step or frontier.size):
            chunk = frontier[lo : lo + (step or frontier.size)]
            nodes, gather, _ = _segments(g.indptr, chunk)
            if gather.size == 0:
                continue
            dsts = g.indices[gather]
            fresh = dist[dsts] < 0
            if not fresh.any():
                continue
            dsts = dsts[fresh]
            if return_parents:
                lens = (g.indptr[nodes + 1] - g.indptr[nodes]).astype(np.int64)
                srcs = np.repeat(nodes, lens)[fresh]
                uniq, first = np.unique(dsts, return_index=True)
                parents[uniq] = srcs[first]
                dist[uniq] = d + 1
                collected.append(uniq)
            else:
                uniq = np.unique(dsts)
                dist[uniq] = d + 1
                collected.append(uniq)
        # keep the frontier sorted: parent choice then ignores segmentation
        frontier = (
            np.unique(np.concatenate(collected))
            if collected
            else np.empty(0, np.int64)
        )
        d += 1
    if return_parents:
        return dist, parents
    return dist


def eccentricity(g: Graph, x: int, segment_size: int | None = None) -> int:
    """Largest distance from x to any node it reaches."""
    dist = bfs(g, x, segment_size=segment_size)
    return int(dist.max())


@dataclass(frozen=True)
class DoubleSweepResult:
    lower: int  # d(y, z), a diameter lower bound
    y: int
    z: int
    midpoint: int
    midpoint_ecc: int  # upper bound on distance to anywhere from midpoint
    bfs_count: int


def double_sweep(
    g: Graph,
    start: int | None = None,
    allow_asymmetric: bool = False,
    segment_size: int | None = None,
) -> DoubleSweepResult:
    """Lower-bound the diameter with three searches.

    BFS from start finds a far node y; BFS from y finds the farthest z,
    and d(y, z) is the bound. The node halfway along the y-z path comes
    back as a pivot together with its eccentricity. Defaults to starting
    at the highest-degree node. On a disconnected graph the sweep stays
    inside start's component.
    """
    _check_symmetric(g, allow_asymmetric)
    if g.n == 0:
        raise ValueError("empty graph")
    if start is None:
        start = int(np.argmax(g.out_degrees()))
    d0 = bfs(g, start, segment_size=segment_size)
    y = int(np.argmax(d0))  # ties resolve to the smallest id
    d1, parents = bfs(g, y, segment_size=segment_size, return_parents=True)
    z = int(np.argmax(d1))
    lb = int(d1[z])
    # walk from z back towards y, stopping floor(lb/2) steps from y
    c = z
    for _ in range(lb - lb // 2):
        c = int(parents[c]) if parents[c] >= 0 else c
    dc = bfs(g, c, segment_size=segment_size)
    return DoubleSweepResult(
        lower=lb,
        y=y,
        z=z,
        midpoint=c,
        midpoint_ecc=int(dc.max()),
        bfs_count=3,
    )


@dataclass(frozen=True)
class DiameterResult:
    lower: int
    upper: int
    exact: bool
    bfs_count: int
    component_size: int

    @property
    def diameter(self) -> int:
        if not self.exact:
            raise ValueError("bounds did not close; no exact diameter")
        return self.lower


def ifub(
    g: Graph,
    start: int | None = None,
    allow_asymmetric: bool = False,
    segment_size: int | None = None,
) -> DiameterResult:
    """Exact diameter of start's component by fringe refinement.

    Seeds bounds with a double sweep from `start` (default: the
    highest-degree node), then examines the pivot's BFS levels outside
    in. A whole level is skipped when depth + pivot eccentricity cannot
    beat the bound; the scan stops, exact, once every remaining depth is
    dominated. Worst case n + 2 searches, typically a few dozen.
    """
    _check_symmetric(g, allow_asymmetric)
    if g.n == 0:
        raise ValueError("empty graph")
    if start is None:
        start = int(np.argmax(g.out_degrees()))
    d0 = bfs(g, start, segment_size=segment_size)
    ecc_start = int(d0.max())
    y = int(np.argmax(d0))
    d1, parents = bfs(g, y, segment_size=segment_size, return_parents=True)
    lb_sweep = int(d1.max())
    z = int(np.argmax(d1))
    c = z
    for _ in range(lb_sweep - lb_sweep // 2):
        c = int(parents[c]) if parents[c] >= 0 else c
    dist_c = bfs(g, c, segment_size=segment_size)
    h = int(dist_c.max())  # ecc(c)
    comp_size = int((dist_c >= 0).sum())
    bfs_count = 3

    # every full BFS from a component node yields a valid diameter lower bound
    lb = max(lb_sweep, h, ecc_start)
    done = {start, y, c}  # their eccentricities are already folded into lb
    if h == 0:
        return DiameterResult(0, 0, True, bfs_count, comp_size)
    for depth in range(h, 0, -1):
        if lb < depth + h:  # some node here could still beat lb
            for u in np.flatnonzero(dist_c == depth):
                u = int(u)
                if u in done:
                    continue
                du = bfs(g, u, segment_size=segment_size)
                bfs_count += 1
                lb = max(lb, int(du.max()))
        # everything at depth < current has ecc <= 2(depth - 1)
        if lb >= 2 * (depth - 1):
            return DiameterResult(lb, lb, True, bfs_count, comp_size)
    return DiameterResult(lb, lb, True, bfs_count, comp_size)


# ---- components ----


def component_labels(g: Graph, allow_asymmetric: bool = False) -> np.ndarray:
    """Connected-component label per node; labels count up from 0 in
    order of each component's smallest node id."""
    _check_symmetric(g, allow_asymmetric)
    labels = np.full(g.n, -1, dtype=np.int64)
    next_label = 0
    for seed in range(g.n):
        if labels[seed] >= 0:
            continue
        dist = bfs(g, seed)
        labels[dist >= 0] = next_label
        next_label += 1
    return labels


def giant_component(g: Graph, allow_asymmetric: bool = False) -> Graph:
    """Induced subgraph on the largest component (ties: smallest node id).

    Nodes are relabelled to 0..k-1 in ascending order of their old ids;
    the old ids (mapped through g.original_ids when present) ride along
    as original_ids on the result.
    """
    labels = component_labels(g, allow_asymmetric=allow_asymmetric)
    if labels.size == 0:
        raise ValueError("empty graph")
    sizes = np.bincount(labels)
    best = int(np.argmax(sizes))  # first maximum = smallest seed id
    keep = np.flatnonzero(labels == best)
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[keep] = np.arange(keep.size)
    src = np.repeat(np.arange(g.n, dtype=np.int64), g.out_degrees())
    mask = (remap[src] >= 0) & (remap[g.indices] >= 0)
    old_ids = keep if g.original_ids is None else np.asarray(g.original_ids)[keep]
    return Graph.from_arcs(
        keep.size,
        remap[src[mask]],
        remap[g.indices[mask]],
        symmetric=g.symmetric,
        original_ids=old_ids,
    )


def run_length_lower_bound(run: NeighbourhoodRun) -> int:
    """Diameter lower bound from how long a diffusion kept changing.

    Counters keep moving for as long as new nodes enter some ball, so the
    iteration count never exceeds the largest finite distance; sketch
    collisions can only stop it early. Meaningless if the run was
    truncated, so that is an error.
    """
    if run.truncated:
        raise ValueError("run was truncated; its length bounds nothing")
    return run.iterations
