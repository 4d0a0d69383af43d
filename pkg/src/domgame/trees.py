"""Census machinery for game-domination-critical trees.

Free (unlabeled) trees are enumerated via canonical level sequences with a
constant-amortized-time successor step, which gives three properties the
census needs: deterministic order, a resumable cursor (the last emitted
sequence), and cheap sharding. Each tree is probed for criticality with an
early exit (stop at the first vertex whose predomination fails to lower the
Dominator-start value); trees that survive the probe get a full report from
the reference solver.
"""

from __future__ import annotations

import json
import multiprocessing
import os
import time
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from ._fastscan import MAX_KERNEL_ORDER, FastScanner
from .graphs import (
    MAX_VERTICES,
    Graph,
    PartialState,
    VertexSet,
    build_spider,
    emit_graph6,
)
from .lemmas import Classification, classification_of
from .solver import GameConfig, GameSolver, Turn

_D = GameConfig(Turn.DOMINATOR)
_S = GameConfig(Turn.STALLER)

SCHEMA_VERSION = 1


class ResumeError(ValueError):
    """A checkpoint is unreadable or inconsistent with the requested scan."""


# --- free tree enumeration ---------------------------------------------------
#
# A rooted tree on n vertices is written as the sequence of vertex depths in
# preorder, root depth 0, children in lexicographically non-increasing
# subtree order; that canonical sequence is the lex-greatest among all
# preorders of the same rooted tree. Free trees keep one rooted
# representative per isomorphism class: the root is the end of a centroid
# edge chosen so the subtree hanging off the root's first child ("left") is
# no taller, then no larger, then lex no greater than the rest.


def _initial_layout(n: int) -> list[int]:
    return list(range(n // 2 + 1)) + list(range(1, (n + 1) // 2))


def _rooted_successor(seq: Sequence[int], chop: int | None = None) -> list[int] | None:
    """Next canonical rooted sequence, or the same tail-regularized sequence
    truncated at `chop` when jumping past a pruned region. None at the end."""
    p = len(seq) - 1 if chop is None else chop
    if chop is None:
        while p > 0 and seq[p] <= 1:
            p -= 1
    if p <= 0:
        return None
    q = p - 1
    while seq[q] != seq[p] - 1:
        q -= 1
    out = list(seq)
    for i in range(p, len(out)):
        out[i] = out[i - p + q]
    return out


def _split_free(seq: Sequence[int]) -> tuple[list[int], list[int]]:
    """(left, rest): the root's first subtree re-rooted, and the remainder."""
    m = len(seq)
    ones = 0
    for i, lvl in enumerate(seq):
        if lvl == 1:
            ones += 1
            if ones == 2:
                m = i
                break
    left = [seq[i] - 1 for i in range(1, m)]
    rest = [0] + list(seq[m:])
    return left, rest


def _is_free_canonical(seq: Sequence[int]) -> bool:
    left, rest = _split_free(seq)
    lh, rh = max(left), max(rest)
    if lh > rh:
        return False
    if lh == rh:
        if len(left) > len(rest):
            return False
        if len(left) == len(rest) and left > rest:
            return False
    return True


def _jump_past_invalid(seq: Sequence[int]) -> list[int] | None:
    """Successor that skips the whole subtree of rooted sequences sharing the
    failed left part: chop at the end of `left`, then regrow the tail as a
    maximal valid path when the chop deepened the left side."""
    left, _rest = _split_free(seq)
    p = len(left)
    cand = _rooted_successor(seq, chop=p)
    if cand is not None and seq[p] > 2:
        new_left, _ = _split_free(cand)
        suffix = list(range(1, max(new_left) + 2))
        cand[-len(suffix) :] = suffix
    return cand


def level_sequences(n: int, resume_after: Sequence[int] | None = None) -> Iterator[list[int]]:
    """Canonical level sequences of all free trees on n vertices, in the
    enumeration order. With `resume_after` (a previously yielded sequence)
    the stream continues strictly after it, emitting nothing twice."""
    if not 1 <= n <= MAX_VERTICES:
        raise ValueError(f"tree order must be in 1..{MAX_VERTICES}, got {n}")
    if n == 1:
        if resume_after is None:
            yield [0]
        return
    if resume_after is None:
        seq: list[int] | None = _initial_layout(n)
    else:
        if len(resume_after) != n:
            raise ResumeError(
                f"resume cursor has length {len(resume_after)}, expected {n}"
            )
        seq = _rooted_successor(resume_after)
    while seq is not None:
        if _is_free_canonical(seq):
            yield seq
            seq = _rooted_successor(seq)
        else:
            seq = _jump_past_invalid(seq)


def _seq_to_parents(seq: Sequence[int]) -> list[int]:
    parents = [-1] * len(seq)
    last_at = [0] * (len(seq) + 1)
    for i in range(1, len(seq)):
        lvl = seq[i]
        parents[i] = last_at[lvl - 1]
        last_at[lvl] = i
    return parents


def _parents_to_bits(parents: Sequence[int]) -> list[int]:
    bits = [1 << v for v in range(len(parents))]
    for v in range(1, len(parents)):
        p = parents[v]
        bits[v] |= 1 << p
        bits[p] |= 1 << v
    return bits


def tree_from_level_sequence(seq: Sequence[int]) -> Graph:
    """Graph for a canonical level sequence (vertices in preorder)."""
    if not seq or seq[0] != 0:
        raise ValueError("a level sequence starts with the root at depth 0")
    for i in range(1, len(seq)):
        if not 1 <= seq[i] <= seq[i - 1] + 1:
            raise ValueError(f"depth jump at position {i} is not a preorder")
    bits = _parents_to_bits(_seq_to_parents(seq))
    return Graph(len(bits), (VertexSet(b) for b in bits))


def enumerate_free_trees(n: int) -> Iterator[Graph]:
    """All free trees on n vertices, one per isomorphism class."""
    for seq in level_sequences(n):
        yield tree_from_level_sequence(seq)


# --- per-tree analysis --------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CriticalityReport:
    """Full game-theoretic profile of one graph."""

    graph_g6: str
    order: int
    gamma_g: int
    gamma_g_prime: int
    per_vertex: tuple[int, ...]
    classification: Classification
    is_critical: bool

    def to_dict(self) -> dict:
        return {
            "graph_g6": self.graph_g6,
            "order": self.order,
            "gamma_g": self.gamma_g,
            "gamma_g_prime": self.gamma_g_prime,
            "per_vertex": list(self.per_vertex),
            "classification": self.classification.value,
            "is_critical": self.is_critical,
        }

    @staticmethod
    def from_dict(d: dict) -> "CriticalityReport":
        return CriticalityReport(
            graph_g6=d["graph_g6"],
            order=d["order"],
            gamma_g=d["gamma_g"],
            gamma_g_prime=d["gamma_g_prime"],
            per_vertex=tuple(d["per_vertex"]),
            classification=Classification(d["classification"]),
            is_critical=d["is_critical"],
        )


def analyze(g: Graph, solver: GameSolver | None = None) -> CriticalityReport:
    """Solve the game on g and on every single-vertex predomination.

    Runs order + 2 solves against one shared memo table; critical means
    every predomination strictly lowers the Dominator-start value.
    """
    solver = solver if solver is not None else GameSolver(g)
    gamma_g = solver.value(VertexSet(0), _D)
    gamma_g_prime = solver.value(VertexSet(0), _S)
    per_vertex = tuple(
        solver.value(VertexSet(1 << v), _D) for v in range(g.order)
    )
    return CriticalityReport(
        graph_g6=emit_graph6(g),
        order=g.order,
        gamma_g=gamma_g,
        gamma_g_prime=gamma_g_prime,
        per_vertex=per_vertex,
        classification=classification_of(gamma_g, gamma_g_prime),
        is_critical=all(x < gamma_g for x in per_vertex),
    )


@dataclass(frozen=True, slots=True)
class SpiderVerdict:
    """Check of the closed form and criticality of a three-legged spider
    whose legs have lengths 4p, 4q, 4r."""

    p: int
    q: int
    r: int
    order: int
    expected_value: int
    gamma_g: int
    gamma_g_prime: int
    is_critical: bool
    passed: bool

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "order": self.order,
            "expected_value": self.expected_value,
            "gamma_g": self.gamma_g,
            "gamma_g_prime": self.gamma_g_prime,
            "is_critical": self.is_critical,
            "passed": self.passed,
        }


def verify_spider(p: int, q: int, r: int) -> SpiderVerdict:
    """Verify gamma_g = gamma_g' = 2(p+q+r)+1 and criticality for the spider
    with leg lengths 4p, 4q, 4r. Requires p, q, r >= 1: with a degenerate leg
    the graph is not a spider and the closed form does not apply."""
    if min(p, q, r) < 1:
        raise ValueError("spider verification needs p, q, r >= 1")
    g = build_spider(p, q, r)
    report = analyze(g)
    expected = 2 * (p + q + r) + 1
    passed = (
        report.gamma_g == expected
        and report.gamma_g_prime == expected
        and report.is_critical
    )
    return SpiderVerdict(
        p=p,
        q=q,
        r=r,
        order=g.order,
        expected_value=expected,
        gamma_g=report.gamma_g,
        gamma_g_prime=report.gamma_g_prime,
        is_critical=report.is_critical,
        passed=passed,
    )


# --- scanning ----------------------------------------------------------------


@dataclass
class ScanCheckpoint:
    """Resumable scan position: the cursor is the last level sequence whose
    tree has been fully processed and (if critical) emitted."""

    order: int
    generator_cursor: list[int] | None
    trees_scanned: int = 0
    reports_emitted: int = 0
    finished: bool = False

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "order": self.order,
            "generator_cursor": self.generator_cursor,
            "trees_scanned": self.trees_scanned,
            "reports_emitted": self.reports_emitted,
            "finished": self.finished,
        }

    def save(self, path) -> None:
        tmp = f"{path}.tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh)
        os.replace(tmp, path)

    @staticmethod
    def from_dict(d: dict) -> "ScanCheckpoint":
        try:
            if d["schema_version"] != SCHEMA_VERSION:
                raise ResumeError(
                    f"unsupported checkpoint schema {d['schema_version']!r}"
                )
            cp = ScanCheckpoint(
                order=d["order"],
                generator_cursor=d["generator_cursor"],
                trees_scanned=d["trees_scanned"],
                reports_emitted=d["reports_emitted"],
                finished=d["finished"],
            )
        except KeyError as exc:
            raise ResumeError(f"checkpoint is missing field {exc}") from exc
        if not isinstance(cp.order, int) or not 1 <= cp.order <= MAX_VERTICES:
            raise ResumeError(f"checkpoint order {cp.order!r} is invalid")
        cur = cp.generator_cursor
        if cur is not None:
            ok = (
                isinstance(cur, list)
                and len(cur) == cp.order
                and all(isinstance(x, int) for x in cur)
                and cur[0] == 0
                and all(1 <= cur[i] <= cur[i - 1] + 1 for i in range(1, len(cur)))
            )
            if not ok:
                raise ResumeError(f"checkpoint cursor {cur!r} is not a level sequence")
        for name in ("trees_scanned", "reports_emitted"):
            if not isinstance(getattr(cp, name), int) or getattr(cp, name) < 0:
                raise ResumeError(f"checkpoint field {name} must be a count")
        return cp

    @staticmethod
    def load(path) -> "ScanCheckpoint":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                d = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ResumeError(f"cannot read checkpoint {path}: {exc}") from exc
        if not isinstance(d, dict):
            raise ResumeError(f"checkpoint {path} is not a JSON object")
        return ScanCheckpoint.from_dict(d)


@dataclass
class ScanResult:
    """Outcome of one scan run (a full scan, or a budgeted slice of one)."""

    n: int
    trees_scanned: int
    critical_count: int
    reports: list[CriticalityReport]
    wall_time: float
    complete: bool
    checkpoint: ScanCheckpoint

    def summary(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "trees_scanned": self.trees_scanned,
            "critical_count": self.critical_count,
            "wall_time": round(self.wall_time, 3),
            "complete": self.complete,
        }


def _trial_order(parents: Sequence[int]) -> list[int]:
    """Vertex order for refutation attempts: leaves first. A non-critical
    tree usually keeps its value under a predominated leaf, so leaves refute
    earliest; internal vertices rarely need solving at all."""
    n = len(parents)
    deg = [0] * n
    for v in range(1, n):
        deg[v] += 1
        deg[parents[v]] += 1
    return sorted(range(n), key=lambda v: (deg[v], v))


def _probe_sequence(seq: Sequence[int], scanner: FastScanner) -> CriticalityReport | None:
    """Report if the tree with this level sequence is critical, else None."""
    parents = _seq_to_parents(seq)
    bits = _parents_to_bits(parents)
    # max_drop=1: on a tree every probe must land in {gamma_g - 1, gamma_g},
    # so the scan cross-checks that bound on every tree it touches
    base, refuter = scanner.criticality(bits, _trial_order(parents), max_drop=1)
    if refuter is not None:
        return None
    g = tree_from_level_sequence(seq)
    report = analyze(g)
    if report.gamma_g != base or not report.is_critical:
        raise RuntimeError(
            f"scan kernel disagrees with reference solver on {emit_graph6(g)}"
        )
    return report


_WORKER_SCANNER: FastScanner | None = None


def _scan_chunk(payload) -> tuple[int, list[dict], list[int]]:
    """Worker task: probe a chunk of level sequences, return critical
    reports as dicts plus the chunk's final cursor."""
    global _WORKER_SCANNER
    n, seqs, use_fast = payload
    if _WORKER_SCANNER is None or _WORKER_SCANNER.max_order < n:
        _WORKER_SCANNER = FastScanner(n)
        if not use_fast:
            _WORKER_SCANNER.kernel = False
    found = [
        report.to_dict()
        for seq in seqs
        if (report := _probe_sequence(seq, _WORKER_SCANNER)) is not None
    ]
    return len(seqs), found, seqs[-1]


def _chunks(it: Iterator[list[int]], size: int) -> Iterator[list[list[int]]]:
    chunk: list[list[int]] = []
    for item in it:
        chunk.append(item)
        if len(chunk) >= size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


def scan_critical_trees(
    n: int,
    checkpoint: ScanCheckpoint | None = None,
    *,
    jobs: int = 1,
    budget: float | None = None,
    checkpoint_path=None,
    checkpoint_interval: int = 10_000,
    use_fast_kernel: bool = True,
    on_report: Callable[[CriticalityReport], None] | None = None,
) -> ScanResult:
    """Scan all free trees on n vertices for game-domination criticality.

    Emits a CriticalityReport per critical tree (streamed through
    `on_report`, collected sorted by graph6 string in the result). The scan
    checkpoints every `checkpoint_interval` trees when `checkpoint_path` is
    set, stops cleanly after `budget` seconds (result.complete tells which),
    and resumes from a prior checkpoint without re-emitting or skipping any
    tree. `jobs` > 1 shards chunks of the sequence stream across processes;
    the merge order is deterministic, so results match a single-process run.
    """
    if not 1 <= n <= MAX_KERNEL_ORDER:
        raise ValueError(f"tree scans support orders 1..{MAX_KERNEL_ORDER}")
    if jobs < 1:
        raise ValueError("jobs must be at least 1")
    if checkpoint is not None:
        if checkpoint.order != n:
            raise ResumeError(
                f"checkpoint is for order {checkpoint.order}, scan wants {n}"
            )
        cp = ScanCheckpoint(
            order=n,
            generator_cursor=(
                None if checkpoint.generator_cursor is None else list(checkpoint.generator_cursor)
            ),
            trees_scanned=checkpoint.trees_scanned,
            reports_emitted=checkpoint.reports_emitted,
            finished=checkpoint.finished,
        )
    else:
        cp = ScanCheckpoint(order=n, generator_cursor=None)

    start = time.monotonic()
    reports: list[CriticalityReport] = []
    if cp.finished:
        return ScanResult(
            n=n,
            trees_scanned=cp.trees_scanned,
            critical_count=cp.reports_emitted,
            reports=[],
            wall_time=0.0,
            complete=True,
            checkpoint=cp,
        )

    deadline = None if budget is None else start + budget
    resume_after = cp.generator_cursor if cp.trees_scanned else None
    stream = level_sequences(n, resume_after=resume_after)
    since_save = 0

    def emit(report: CriticalityReport) -> None:
        reports.append(report)
        cp.reports_emitted += 1
        if on_report is not None:
            on_report(report)

    def save_if_due(done: int) -> int:
        if checkpoint_path is None:
            return 0
        if done >= checkpoint_interval:
            cp.save(checkpoint_path)
            return 0
        return done

    ran_out = False
    if jobs == 1:
        scanner = FastScanner(n)
        if not use_fast_kernel:
            scanner.kernel = False
        for seq in stream:
            report = _probe_sequence(seq, scanner)
            if report is not None:
                emit(report)
            cp.generator_cursor = seq
            cp.trees_scanned += 1
            since_save = save_if_due(since_save + 1)
            if deadline is not None and cp.trees_scanned % 32 == 0:
                if time.monotonic() >= deadline:
                    ran_out = True
                    break
    else:
        if use_fast_kernel:
            FastScanner(n).warmup()  # compile before fork, workers inherit
        chunk_size = max(32, min(1000, checkpoint_interval // max(1, jobs)))
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(jobs) as pool:
            results = pool.imap(
                _scan_chunk,
                ((n, chunk, use_fast_kernel) for chunk in _chunks(stream, chunk_size)),
            )
            for count, found, last_seq in results:
                for d in found:
                    emit(CriticalityReport.from_dict(d))
                cp.generator_cursor = last_seq
                cp.trees_scanned += count
                since_save = save_if_due(since_save + count)
                if deadline is not None and time.monotonic() >= deadline:
                    ran_out = True
                    pool.terminate()
                    break

    if not ran_out:
        cp.finished = True
    if checkpoint_path is not None:
        cp.save(checkpoint_path)
    reports.sort(key=lambda r: r.graph_g6)
    return ScanResult(
        n=n,
        trees_scanned=cp.trees_scanned,
        critical_count=cp.reports_emitted,
        reports=reports,
        wall_time=time.monotonic() - start,
        complete=not ran_out,
        checkpoint=cp,
    )
