"""Compressed successor-list storage.

Each node's list is split three ways before coding, mirroring the classic
web-graph playbook:

* **copy blocks**: if a nearby earlier node (within `window`) shares
  successors, the shared subset is expressed as a run-length mask over
  that reference list;
* **intervals**: leftover runs of >= `min_interval` consecutive ids are
  stored as (left extreme, length) pairs;
* **residuals**: whatever remains is gap-coded with the configured
  instantaneous code; the first residual is taken relative to the node id
  via a sign fold, later ones relative to their predecessor.

Chunks carry no outdegree: the per-node bit-offset table delimits every
chunk exactly, and instantaneous codes make "read residuals until the
chunk ends" unambiguous. The on-disk container (magic ``HBG1``) stores the
header, the offset table and the code stream; see FORMATS.md for the
bit-exact layout.
"""

from __future__ import annotations

import struct
import zlib
from collections import deque
from dataclasses import dataclass

import numpy as np

from .codes import BitReader, BitWriter, CODE_NAMES, coder, nat_length, read_nat, write_nat
from .graph import Graph

__all__ = [
    "CodecConfig",
    "EncodedGraph",
    "encode",
    "decode",
    "decode_node",
    "save",
    "load",
]

MAGIC = b"HBG1"
_HEADER = struct.Struct("<4sBBHQQIIBBBxI")  # see FORMATS.md
_LITTLE = 0xFE

_CODE_IDS = {name: i for i, name in enumerate(CODE_NAMES)}
_CODE_BY_ID = {i: name for name, i in _CODE_IDS.items()}


@dataclass(frozen=True)
class CodecConfig:
    """Knobs for the successor-list codec.

    window=0 disables copying, min_interval=0 disables intervalisation;
    min_interval=1 would make every lone id an interval, so the smallest
    useful value is 2.
    """

    window: int = 7
    min_interval: int = 4
    residual_code: str = "zeta"
    zeta_k: int = 3

    def __post_init__(self):
        if self.window < 0:
            raise ValueError("window must be >= 0")
        if self.min_interval < 0 or self.min_interval == 1:
            raise ValueError("min_interval must be 0 (disabled) or >= 2")
        if self.residual_code not in CODE_NAMES:
            raise ValueError(f"residual_code must be one of {CODE_NAMES}")
        if self.zeta_k < 1 or self.zeta_k > 31:
            raise ValueError("zeta_k out of range [1, 31]")


def _fold(diff: int) -> int:
    # sign fold favouring forward references; 0 only for self-loops
    return 2 * diff - 1 if diff > 0 else -2 * diff


def _unfold(val: int) -> int:
    return (val + 1) // 2 if val & 1 else -(val // 2)


class _NodeParts:
    """One node's list split into copy/interval/residual parts."""

    __slots__ = ("ref", "blocks", "intervals", "residuals", "copied_count")

    def __init__(self, ref, blocks, intervals, residuals, copied_count):
        self.ref = ref
        self.blocks = blocks
        self.intervals = intervals
        self.residuals = residuals
        self.copied_count = copied_count


def _split_runs(values: np.ndarray, min_interval: int):
    """Partition sorted ids into interval (left, length) pairs + residuals."""
    if min_interval == 0 or values.size == 0:
        return [], values
    breaks = np.flatnonzero(np.diff(values) != 1)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks + 1, [values.size]))
    intervals = []
    residual_mask = np.ones(values.size, dtype=bool)
    for s, e in zip(starts, ends):
        if e - s >= min_interval:
            intervals.append((int(values[s]), int(e - s)))
            residual_mask[s:e] = False
    return intervals, values[residual_mask]


def _blocks_from_mask(mask: np.ndarray) -> list[int]:
    """Run-length blocks over a reference list, alternating copy/skip.

    The first block is a copy length (possibly 0) and the final run is
    implicit: the decoder extends the alternation to the end of the
    reference list.
    """
    runs = [0]  # first run counts copies
    current = True
    for bit in mask:
        if bit == current:
            runs[-1] += 1
        else:
            runs.append(1)
            current = bool(bit)
    if len(runs) > 1:
        runs.pop()  # implicit trailing run
    elif current:
        runs = []  # whole list copied: zero explicit blocks
    return runs


def _apply_blocks(ref_list: np.ndarray, blocks: list[int]) -> np.ndarray:
    take = np.zeros(ref_list.size, dtype=bool)
    pos = 0
    copying = True
    for b in blocks:
        take[pos : pos + b] = copying
        pos += b
        copying = not copying
    take[pos:] = copying
    return ref_list[take]


def _measure_parts(parts: _NodeParts, x: int, res_len, cfg: CodecConfig) -> int:
    bits = 0
    if cfg.window > 0:
        bits += nat_length(parts.ref)
    if parts.ref:
        bits += nat_length(len(parts.blocks))
        for i, b in enumerate(parts.blocks):
            bits += nat_length(b if i == 0 else b - 1)
    if cfg.min_interval > 0:
        bits += nat_length(len(parts.intervals))
        prev_end = None
        for left, length in parts.intervals:
            if prev_end is None:
                bits += nat_length(_fold(left - x))
            else:
                bits += nat_length(left - prev_end - 2)
            bits += nat_length(length - cfg.min_interval)
            prev_end = left + length - 1
    res = parts.residuals
    if res.size:
        bits += res_len(_fold(int(res[0]) - x))
        for i in range(1, res.size):
            bits += res_len(int(res[i]) - int(res[i - 1]) - 1)
    return bits


def _write_parts(w: BitWriter, parts: _NodeParts, x: int, res_write, cfg: CodecConfig):
    if cfg.window > 0:
        write_nat(w, parts.ref)
    if parts.ref:
        write_nat(w, len(parts.blocks))
        for i, b in enumerate(parts.blocks):
            write_nat(w, b if i == 0 else b - 1)
    if cfg.min_interval > 0:
        write_nat(w, len(parts.intervals))
        prev_end = None
        for left, length in parts.intervals:
            if prev_end is None:
                write_nat(w, _fold(left - x))
            else:
                write_nat(w, left - prev_end - 2)
            write_nat(w, length - cfg.min_interval)
            prev_end = left + length - 1
    res = parts.residuals
    if res.size:
        res_write(w, _fold(int(res[0]) - x))
        for i in range(1, res.size):
            res_write(w, int(res[i]) - int(res[i - 1]) - 1)


def _plan_node(x: int, succ: np.ndarray, window_lists, cfg: CodecConfig, res_len) -> _NodeParts:
    """Pick the cheapest encoding for one node (no copy vs each reference)."""
    intervals, residuals = _split_runs(succ, cfg.min_interval)
    best = _NodeParts(0, [], intervals, residuals, 0)
    if cfg.window == 0 or succ.size == 0:
        return best
    best_bits = _measure_parts(best, x, res_len, cfg)
    succ_set = set(succ.tolist())
    for r in range(1, min(cfg.window, x) + 1):
        ref_list = window_lists(x - r)
        if ref_list is None or ref_list.size == 0:
            continue
        mask = np.fromiter((s in succ_set for s in ref_list.tolist()), dtype=bool, count=ref_list.size)
        copied = int(mask.sum())
        if copied == 0:
            continue
        blocks = _blocks_from_mask(mask)
        leftover = succ[~np.isin(succ, ref_list[mask], assume_unique=True)]
        ivals, resid = _split_runs(leftover, cfg.min_interval)
        cand = _NodeParts(r, blocks, ivals, resid, copied)
        bits = _measure_parts(cand, x, res_len, cfg)
        if bits < best_bits:
            best, best_bits = cand, bits
    return best


class EncodedGraph:
    """Compressed graph: code stream + per-node bit offsets + stats."""

    def __init__(self, n, num_arcs, symmetric, cfg, stream, offsets, copied_arcs, interval_arcs):
        self.n = int(n)
        self.num_arcs = int(num_arcs)
        self.symmetric = bool(symmetric)
        self.cfg = cfg
        self.stream = stream
        self.offsets = offsets  # (n + 1) uint64 bit offsets
        self.copied_arcs = int(copied_arcs)
        self.interval_arcs = int(interval_arcs)

    @property
    def stream_bits(self) -> int:
        return int(self.offsets[-1])

    @property
    def bits_per_arc(self) -> float:
        return self.stream_bits / self.num_arcs if self.num_arcs else 0.0

    @property
    def copy_fraction(self) -> float:
        return self.copied_arcs / self.num_arcs if self.num_arcs else 0.0

    @property
    def interval_fraction(self) -> float:
        return self.interval_arcs / self.num_arcs if self.num_arcs else 0.0

    def successors(self, x: int) -> np.ndarray:
        return decode_node(self, x)

    def decode(self) -> Graph:
        return decode(self)


def encode(g: Graph, cfg: CodecConfig | None = None) -> EncodedGraph:
    """Compress a graph's successor structure under `cfg`."""
    cfg = cfg or CodecConfig()
    res_write, _, res_len = coder(cfg.residual_code, cfg.zeta_k)
    w = BitWriter()
    offsets = np.zeros(g.n + 1, dtype=np.uint64)
    # recent[-1] is node x-1's list, recent[-2] node x-2's, and so on
    recent: deque = deque(maxlen=max(cfg.window, 1))
    copied_total = 0
    interval_total = 0

    for x in range(g.n):
        succ = g.successors(x)

        def ref_list(node, _x=x):
            offset = _x - node
            return recent[-offset] if 1 <= offset <= len(recent) else None

        parts = _plan_node(x, succ, ref_list, cfg, res_len)
        _write_parts(w, parts, x, res_write, cfg)
        offsets[x + 1] = w.bit_length
        copied_total += parts.copied_count
        interval_total += sum(length for _, length in parts.intervals)
        if cfg.window:
            recent.append(succ)
    return EncodedGraph(
        g.n, g.num_arcs, g.symmetric, cfg, w.getvalue(), offsets, copied_total, interval_total
    )


def _parse_chunk(enc: EncodedGraph, x: int):
    """Read one chunk into (ref, blocks, intervals, residuals)."""
    cfg = enc.cfg
    start, end = int(enc.offsets[x]), int(enc.offsets[x + 1])
    r = BitReader(enc.stream, start, end)
    _, res_read, _ = coder(cfg.residual_code, cfg.zeta_k)

    def rnat():
        return read_nat(r, "gamma")

    ref = rnat() if cfg.window > 0 else 0
    blocks: list[int] = []
    if ref:
        nblocks = rnat()
        for i in range(nblocks):
            b = rnat()
            blocks.append(b if i == 0 else b + 1)
    intervals: list[tuple[int, int]] = []
    if cfg.min_interval > 0:
        nint = rnat()
        prev_end = None
        for _ in range(nint):
            if prev_end is None:
                left = x + _unfold(rnat())
            else:
                left = prev_end + 2 + rnat()
            length = rnat() + cfg.min_interval
            intervals.append((left, length))
            prev_end = left + length - 1
    residuals: list[int] = []
    prev = None
    while r.remaining > 0:
        if prev is None:
            prev = x + _unfold(res_read(r))
        else:
            prev = prev + 1 + res_read(r)
        residuals.append(prev)
    return ref, blocks, intervals, residuals


def decode_node(enc: EncodedGraph, x: int) -> np.ndarray:
    """Successor list of one node, resolving copy chains iteratively."""
    if not 0 <= x < enc.n:
        raise IndexError(f"node {x} out of range [0, {enc.n})")
    chain = []
    node = x
    while True:
        ref, blocks, intervals, residuals = _parse_chunk(enc, node)
        chain.append((node, ref, blocks, intervals, residuals))
        if not ref:
            break
        node -= ref
    result = None
    for node, ref, blocks, intervals, residuals in reversed(chain):
        parts = []
        if ref:
            parts.append(_apply_blocks(result, blocks))
        for left, length in intervals:
            parts.append(np.arange(left, left + length, dtype=np.int64))
        if residuals:
            parts.append(np.asarray(residuals, dtype=np.int64))
        if parts:
            merged = np.concatenate(parts)
            merged.sort()
            result = merged
        else:
            result = np.empty(0, dtype=np.int64)
    return result


def decode(enc: EncodedGraph) -> Graph:
    """Materialize the full CSR graph (single forward pass)."""
    window = max(enc.cfg.window, 1)
    recent: deque = deque(maxlen=window)
    indptr = np.zeros(enc.n + 1, dtype=np.int64)
    chunks = []
    for x in range(enc.n):
        ref, blocks, intervals, residuals = _parse_chunk(enc, x)
        parts = []
        if ref:
            if ref > len(recent):
                raise ValueError(f"node {x}: reference {ref} reaches before the window")
            parts.append(_apply_blocks(recent[-ref], blocks))
        for left, length in intervals:
            parts.append(np.arange(left, left + length, dtype=np.int64))
        if residuals:
            parts.append(np.asarray(residuals, dtype=np.int64))
        if parts:
            succ = np.concatenate(parts)
            succ.sort()
        else:
            succ = np.empty(0, dtype=np.int64)
        if succ.size and (succ[0] < 0 or succ[-1] >= enc.n):
            raise ValueError(f"node {x}: decoded successor out of range")
        chunks.append(succ)
        indptr[x + 1] = indptr[x] + succ.size
        if enc.cfg.window:
            recent.append(succ)
    indices = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    if indices.size != enc.num_arcs:
        raise ValueError(
            f"corrupt stream: decoded {indices.size} arcs, header claims {enc.num_arcs}"
        )
    return Graph(enc.n, indptr, indices, symmetric=enc.symmetric)


# ---- container I/O ----


def save(enc: EncodedGraph, path) -> None:
    """Write the HBG1 container (header, offsets, stream)."""
    header = _HEADER.pack(
        MAGIC,
        1,  # format version
        _LITTLE,
        0,  # reserved
        enc.n,
        enc.num_arcs,
        enc.cfg.window,
        enc.cfg.min_interval,
        _CODE_IDS[enc.cfg.residual_code],
        enc.cfg.zeta_k,
        1 if enc.symmetric else 0,
        zlib.crc32(enc.stream),
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(enc.offsets.astype("<u8").tobytes())
        fh.write(enc.stream)


def load(path) -> EncodedGraph:
    """Read an HBG1 container back into an EncodedGraph."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size or blob[:4] != MAGIC:
        raise ValueError(f"{path}: not an HBG1 graph file")
    (
        _magic,
        version,
        endian,
        _reserved,
        n,
        num_arcs,
        window,
        min_interval,
        code_id,
        zeta_k,
        symmetric,
        crc,
    ) = _HEADER.unpack_from(blob)
    if version != 1:
        raise ValueError(f"{path}: unsupported format version {version}")
    if endian != _LITTLE:
        raise ValueError(f"{path}: bad endianness tag {endian:#x}")
    if code_id not in _CODE_BY_ID:
        raise ValueError(f"{path}: unknown residual code id {code_id}")
    off_start = _HEADER.size
    off_end = off_start + 8 * (n + 1)
    if len(blob) < off_end:
        raise ValueError(f"{path}: truncated offset table")
    offsets = np.frombuffer(blob[off_start:off_end], dtype="<u8").copy()
    stream = blob[off_end:]
    if zlib.crc32(stream) != crc:
        raise ValueError(f"{path}: code stream checksum mismatch")
    if offsets.size and int(offsets[-1]) > len(stream) * 8:
        raise ValueError(f"{path}: offset table points past the stream")
    cfg = CodecConfig(
        window=window,
        min_interval=min_interval,
        residual_code=_CODE_BY_ID[code_id],
        zeta_k=zeta_k,
    )
    # copy/interval tallies are encode-time stats; unknown after a reload
    return EncodedGraph(n, num_arcs, bool(symmetric), cfg, stream, offsets, 0, 0)
