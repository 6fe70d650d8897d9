"""Empirical scans over a computed ball: word vs CC distance, almost convexity, zero heights."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ball import BallTable, bfs_ball
from .cc import CCMetric
from .group import GeneratingSet, GroupElement, evaluate, preset


@dataclass
class DifferenceScan:
    per_shell: list[float]

    @property
    def running_max(self) -> list[float]:
        return np.maximum.accumulate(self.per_shell).tolist()


def bounded_difference_scan(table: BallTable, metric: CCMetric) -> DifferenceScan:
    """Per shell, max | |x|_S - d_cc(x, 0) |."""
    out = []
    for n in range(table.radius + 1):
        a, b, c2 = table.shell_elements(n)
        d = metric.distance(a, b, c2)
        if not np.isfinite(d).all():
            raise ArithmeticError(f"CC solver failed on shell {n}")
        out.append(float(np.abs(n - d).max()))
    return DifferenceScan(out)


@dataclass
class ACReport:
    k: int
    maxima: dict[int, int] = field(default_factory=dict)
    pairs: dict[int, int] = field(default_factory=dict)
    exhaustive: dict[int, bool] = field(default_factory=dict)


def _offsets(S: GeneratingSet, k: int):
    small = bfs_ball(S, k, store_pred=False)
    a, b, c2, d = small.all_elements()
    keep = d > 0
    return a[keep], b[keep], c2[keep]


def ac_scan(table: BallTable, k: int = 2, radii=None, exhaustive_upto: int = 15,
            max_sources: int = 2000, seed: int = 0) -> ACReport:
    """For x, y in S_n with |x^-1 y| <= k, the shortest x-to-y path inside B_n.

    All pairs for n <= ``exhaustive_upto``; above that a seeded sample of
    ``max_sources`` base points.  Each unordered pair is counted once.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    S = table.S
    radii = range(1, table.radius - k + 1) if radii is None else radii
    wa, wb, wc = _offsets(S, k)
    skeys, sdist = table._index
    NK = len(skeys)
    letters = [(s.element.a, s.element.b, s.element.c2) for s in S]
    rng = np.random.default_rng(seed)
    report = ACReport(k)
    for n in radii:
        xa, xb, xc = table.shell_elements(n)
        exhaustive = n <= exhaustive_upto or len(xa) <= max_sources
        if not exhaustive:
            pick = np.sort(rng.choice(len(xa), size=max_sources, replace=False))
            xa, xb, xc = xa[pick], xb[pick], xc[pick]
        # candidate targets y = x * w for every offset
        ya = xa[:, None] + wa[None, :]
        yb = xb[:, None] + wb[None, :]
        yc = xc[:, None] + wc[None, :] + xa[:, None] * wb[None, :] - xb[:, None] * wa[None, :]
        src_pos = _positions(table, xa, xb, xc)
        tgt_pos = _positions(table, ya.ravel(), yb.ravel(), yc.ravel()).reshape(ya.shape)
        tgt_ok = tgt_pos >= 0
        tgt_ok &= np.where(tgt_ok, sdist[np.maximum(tgt_pos, 0)] == n, False)
        # each unordered pair once (exhaustive case): keep y after x in the sorted key order
        if exhaustive:
            tgt_ok &= tgt_pos > src_pos[:, None]
        src_id, col = np.nonzero(tgt_ok)
        if len(src_id) == 0:
            report.maxima[n], report.pairs[n], report.exhaustive[n] = 0, 0, exhaustive
            continue
        targets = src_id.astype(np.int64) * NK + tgt_pos[src_id, col]
        targets = np.unique(targets)
        report.maxima[n] = _batched_reach(table, letters, src_pos, targets, n, NK)
        report.pairs[n] = len(targets)
        report.exhaustive[n] = exhaustive
    return report


def _positions(table: BallTable, a, b, c2) -> np.ndarray:
    a, b, c2 = (np.asarray(x, dtype=np.int64) for x in (a, b, c2))
    skeys, _ = table._index
    ok = table.packer.in_range(a, b, c2)
    keys = table.packer.pack(np.where(ok, a, 0), np.where(ok, b, 0), np.where(ok, c2, 0))
    pos = np.minimum(np.searchsorted(skeys, keys), len(skeys) - 1)
    return np.where(ok & (skeys[pos] == keys), pos, -1)


def _batched_reach(table, letters, src_pos, targets, n, NK) -> int:
    """Breadth-first from every source at once, inside B_n; depth at which the last target is hit."""
    skeys, sdist = table._index
    src_ids = np.unique(targets // NK)
    frontier = src_ids * NK + src_pos[src_ids]
    visited = np.sort(frontier)
    remaining = targets
    depth = 0
    while len(remaining):
        depth += 1
        if depth > 2 * n + 2:
            raise RuntimeError("unreachable pair inside the ball")  # pragma: no cover
        sid, pos = frontier // NK, frontier % NK
        a, b, c2 = table.packer.unpack(skeys[pos])
        nxt = []
        for la, lb, lc in letters:
            p = _positions(table, a + la, b + lb, c2 + lc + a * lb - b * la)
            ok = p >= 0
            ok &= np.where(ok, sdist[np.maximum(p, 0)] <= n, False)
            nxt.append(sid[ok] * NK + p[ok])
        nxt = np.unique(np.concatenate(nxt))
        nxt = nxt[~np.isin(nxt, visited, assume_unique=True)]
        visited = np.union1d(visited, nxt)
        remaining = remaining[~np.isin(remaining, nxt, assume_unique=True)]
        # drop sources with nothing left to find
        active = np.unique(remaining // NK)
        frontier = nxt[np.isin(nxt // NK, active)]
    return depth


@dataclass
class ZeroHeightReport:
    per_shell: list[int]
    violations: list[tuple[int, int]]


def zero_height_count(table: BallTable) -> ZeroHeightReport:
    """sigma^0(n): elements (a, b, 0) per shell, with the parity criterion checked on each."""
    counts, bad = [], []
    for n in range(table.radius + 1):
        a, b, c2 = table.shell_elements(n)
        z = c2 == 0
        counts.append(int(z.sum()))
        odd = z & ((a * b) % 2 != 0)
        bad.extend(zip(a[odd].tolist(), b[odd].tolist()))
    return ZeroHeightReport(counts, bad)


def zero_height_witness(a: int, b: int) -> list[int] | None:
    """A word over the std letters evaluating to (a, b, 0), or None when ab is odd."""
    def run(letter, count):
        return [letter if count >= 0 else letter + 2] * abs(count)
    if a % 2 == 0:
        return run(0, a // 2) + run(1, b) + run(0, a // 2)
    if b % 2 == 0:
        return run(1, b // 2) + run(0, a) + run(1, b // 2)
    return None


def zero_height_lemma(bound: int = 30) -> list[tuple[int, int]]:
    """Exhaustive check over |a|, |b| <= bound; returns violations (empty when the lemma holds).

    Existence is certified by an explicit std word; nonexistence by the
    parity of c2, which every word preserves.
    """
    S = preset("std")
    bad = []
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            w = zero_height_witness(a, b)
            exists = w is not None and evaluate(w, S) == GroupElement(a, b, 0)
            try:
                GroupElement(a, b, 0)
                lattice = True
            except ValueError:
                lattice = False
            if exists != ((a * b) % 2 == 0) or lattice != exists:
                bad.append((a, b))
    return bad
