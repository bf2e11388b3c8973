"""Backtracking search for Hadamard matrices with a prescribed type set.

Rows are grown one at a time in dephased normal form (first row and first
column all +).  Columns that look identical over the chosen prefix are
interchangeable, so a new row is only ever tried with its -1 entries packed
at the tail of each column class; this prunes column symmetry without losing
any existence answer.  A candidate row must be orthogonal to the prefix,
every quadruple it completes must have an allowed type, and every triple's
running count of completion types must still be able to reach the completion
identity sum (m^2) using allowed types only — an exact reachability table,
not just an interval bound.

Orthogonality and the per-triple type constraints are all linear functionals
over the per-class -1 counts (previous rows and triple-XOR rows are constant
on every column class), so they prune inside the class walk; the functional
evaluations are vectorized over numpy uint64 rows, which caps searchable
orders at 64.

Exhaustive mode traverses the pruned space completely (the ``exhausted``
flag certifies it); randomized mode shuffles candidate order per seed and
restarts, for orders where exhaustion is out of reach.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .matrix import BitMatrix, is_hadamard

_RESTART_NODES = 200_000
_MAX_SEARCH_ORDER = 64
_FAR = 1 << 30  # padding target that no partial sum can approach


@dataclass(frozen=True)
class SearchConfig:
    order: int
    allowed_types: frozenset[int]
    mode: str = "exhaustive"
    seed: int = 0
    max_solutions: int | None = None
    node_budget: int = 1_000_000_000
    thread_shards: int = 1
    # Diagnostic switches: disabling them must not change the solution set
    # (solutions are re-verified post hoc), only the work done to find it.
    prune_types: bool = True
    prune_feasibility: bool = True

    def __post_init__(self):
        n = self.order
        if n <= 0 or n % 4:
            raise ValueError(f"order must be a positive multiple of 4, got {n}")
        if n > _MAX_SEARCH_ORDER:
            raise ValueError(
                f"search supports orders up to {_MAX_SEARCH_ORDER}, got {n}"
            )
        if not frozenset(self.allowed_types) <= set(range(n // 8 + 1)):
            raise ValueError(
                f"allowed types {set(self.allowed_types)} not within 0..{n // 8}"
            )
        if self.node_budget <= 0:
            raise ValueError("node_budget must be positive")
        if self.thread_shards <= 0:
            raise ValueError("thread_shards must be positive")
        if self.mode not in ("exhaustive", "randomized"):
            raise ValueError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "allowed_types", frozenset(self.allowed_types))


@dataclass
class SearchOutcome:
    solutions: list[BitMatrix] = field(default_factory=list)
    nodes_explored: int = 0
    exhausted: bool = False


def _reach_sets(m4: int, weights: Sequence[int], max_rem: int) -> list[frozenset[int]]:
    """reach[r] = sums attainable with exactly r terms from ``weights``, capped
    at m4^2."""
    cap = m4 * m4
    table = [frozenset({0})]
    for _ in range(max_rem):
        prev = table[-1]
        table.append(frozenset(s + w for s in prev for w in weights if s + w <= cap))
    return table


def count_completions(
    order: int,
    rows: Sequence[int],
    triple: tuple[int, int, int],
    allowed_types: Sequence[int],
) -> bool:
    """Feasibility verdict for one triple of a partial row set.

    Accumulates the completion-identity contributions of the rows already
    present and asks whether the remaining ``order - len(rows)`` rows can
    close the gap to m^2 using allowed-type contributions only.
    """
    if len(rows) < 3:
        raise ValueError("partial matrix must have at least 3 rows")
    i, j, k = triple
    if len({i, j, k}) != 3:
        raise ValueError("triple indices must be distinct")
    n = order
    m4 = n // 4
    base = rows[i] ^ rows[j] ^ rows[k]
    acc = 0
    for l, r in enumerate(rows):
        if l in (i, j, k):
            continue
        w = (base ^ r).bit_count()
        p = abs(n - 2 * w)
        t = (n - p) // 8
        acc += (m4 - 2 * t) ** 2
    gap = m4 * m4 - acc
    if gap < 0:
        return False
    rem = n - len(rows)
    weights = sorted({(m4 - 2 * t) ** 2 for t in allowed_types})
    return gap in _reach_sets(m4, weights, rem)[rem]


def search(config: SearchConfig) -> SearchOutcome:
    """Run the configured search; solutions arrive in deterministic order.

    With ``thread_shards`` > 1 the candidate set for row 3 is split across
    worker processes (each receiving an equal slice of the node budget) and
    the merged output is identical to a single-shard run.
    """
    shards = config.thread_shards
    if shards == 1:
        results = [_run_shard(config, 0)]
    else:
        with ProcessPoolExecutor(max_workers=shards) as pool:
            futures = [pool.submit(_run_shard, config, s) for s in range(shards)]
            results = [f.result() for f in futures]

    merged: list[tuple[int, tuple[int, ...]]] = []
    nodes = 0
    complete = True
    for tagged, shard_nodes, shard_complete in results:
        merged.extend(tagged)
        nodes += shard_nodes
        complete = complete and shard_complete
    merged.sort(key=lambda item: item[0])

    out = SearchOutcome(nodes_explored=nodes)
    seen = set()
    for _, rows in merged:
        if rows in seen:
            continue
        seen.add(rows)
        out.solutions.append(BitMatrix(config.order, rows))
        if config.max_solutions is not None and len(out.solutions) >= config.max_solutions:
            complete = False
            break
    out.exhausted = config.mode == "exhaustive" and complete
    return out


def _run_shard(config: SearchConfig, shard_id: int):
    budget = max(1, config.node_budget // config.thread_shards)
    dfs = _Dfs(config, shard_id, budget)
    if config.mode == "exhaustive":
        dfs.run(rng=None)
        complete = not (dfs.aborted or dfs.hit_max)
    else:
        complete = False
        restart = 0
        while not dfs.hit_max and dfs.nodes < budget:
            dfs.cap = min(budget, dfs.nodes + _RESTART_NODES)
            dfs.aborted = False
            dfs.run(rng=random.Random(config.seed * 1_000_003 + restart))
            if not (dfs.aborted or dfs.hit_max):
                break  # full traversal inside one restart; nothing new will appear
            restart += 1
    return dfs.solutions, dfs.nodes, complete


class _Dfs:
    """One shard's depth-first traversal with incremental bookkeeping.

    Pairs and triples of prefix rows live in preallocated arrays with a fixed
    layout: the pairs (x, r) added with row r occupy ids C(r,2)..C(r+1,2)-1
    and the triples (a, b, r) occupy ids C(r,3)..C(r+1,3)-1, aligned with the
    pair ids of (a, b).  ``tri_x`` holds the XOR of each triple's rows and
    ``tri_s`` its accumulated completion-identity sum; both are costed
    against a candidate row in single vectorized passes.
    """

    def __init__(self, config: SearchConfig, shard_id: int, budget: int):
        self.cfg = config
        n = self.n = config.order
        self.m4 = n // 4
        self.m2 = self.m4 * self.m4
        self.mask = (1 << n) - 1
        self.allowed = config.allowed_types
        self.allowed_sorted = sorted(self.allowed)
        tmax = n // 8
        self.weight_lut = np.array(
            [(self.m4 - 2 * t) ** 2 for t in range(tmax + 1)], dtype=np.int64
        )
        self.allowed_mask = np.zeros(tmax + 1, dtype=bool)
        for t in self.allowed:
            self.allowed_mask[t] = True
        weights = sorted({int(self.weight_lut[t]) for t in self.allowed})
        reach = _reach_sets(self.m4, weights, n)
        self.reach_bool = np.zeros((n + 1, self.m2 + 1), dtype=bool)
        for r, values in enumerate(reach):
            for v in values:
                self.reach_bool[r, v] = True

        # fixed pair/triple layout for all n rows
        npairs = comb(n, 2)
        ntris = comb(n, 3)
        pa = np.zeros(npairs, dtype=np.int64)
        pb = np.zeros(npairs, dtype=np.int64)
        for r in range(1, n):
            base = comb(r, 2)
            for x in range(r):
                pa[base + x] = x
                pb[base + x] = r
        tri_a = np.zeros(ntris, dtype=np.int64)
        tri_b = np.zeros(ntris, dtype=np.int64)
        tri_pid = np.zeros((ntris, 3), dtype=np.int64)
        for r in range(2, n):
            tbase = comb(r, 3)
            pbase = comb(r, 2)
            for pid in range(pbase):
                tid = tbase + pid
                tri_a[tid] = pa[pid]
                tri_b[tid] = pb[pid]
                tri_pid[tid, 0] = pid
                tri_pid[tid, 1] = pbase + pa[pid]
                tri_pid[tid, 2] = pbase + pb[pid]
        self.tri_a = tri_a
        self.tri_b = tri_b
        self.tri_pid = tri_pid
        self.tri_x = np.zeros(ntris, dtype=np.uint64)
        self.tri_s = np.zeros(ntris, dtype=np.int64)
        self.rows_np = np.zeros(n, dtype=np.uint64)

        self.shard_id = shard_id
        self.shards = config.thread_shards
        self.budget = budget
        self.cap = budget
        self.nodes = 0
        self.aborted = False
        self.hit_max = False
        self.solutions: list[tuple[int, tuple[int, ...]]] = []
        self._seen: set[tuple[int, ...]] = set()

    def run(self, rng) -> None:
        self.rng = rng
        self.rows: list[int] = [0]
        self.rows_np[0] = 0
        self.tri_s[:] = 0
        self.classes: list[list[int]] = [list(range(self.n))]
        self._class_stack: list[list[list[int]]] = []
        self.cand3 = -1
        self._extend()

    # -- candidate rows ------------------------------------------------------

    def _gen_candidates(self) -> list[int]:
        """Enumerate canonical rows passing every linear-functional filter.

        The walk over column classes is breadth-first: all surviving partial
        assignments advance together as one (paths x functionals) matrix, so
        the constraint arithmetic stays vectorized.  Every functional's
        admissible finals come in symmetric pairs +-v, so only |partial| is
        compared against the nonnegative target values.
        """
        n = self.n
        classes = self.classes
        nrows = len(self.rows)
        ntri = comb(nrows, 3)
        ncls = len(classes)
        order = sorted(range(ncls), key=lambda c: -len(classes[c]))
        sizes = [len(classes[c]) for c in order]
        suffix = [0] * (ncls + 1)
        for c in range(ncls - 1, -1, -1):
            suffix[c] = suffix[c + 1] + sizes[c]
        tails: list[list[int]] = []
        for c in order:
            t = [0]
            acc = 0
            for col in reversed(classes[c]):
                acc |= 1 << col
                t.append(acc)
            tails.append(t)

        reps = np.array([classes[c][0] for c in order], dtype=np.uint64)
        use_tri = self.cfg.prune_types and ntri > 0
        defining = self.rows_np[:nrows]
        if use_tri:
            defining = np.concatenate([defining, self.tri_x[:ntri]])
        bits = (defining[:, None] >> reps[None, :]) & np.uint64(1)
        sgn = 1 - 2 * bits.astype(np.int32)

        nfun = len(defining)
        ka = max(1, len(self.allowed_sorted))
        tvals = np.full((nfun, ka), _FAR, np.int32)
        tvals[:nrows, 0] = 0
        if use_tri:
            rb = self.reach_bool[n - nrows - 1]
            narrow = self.cfg.prune_feasibility
            tri_s = self.tri_s[:ntri]
            for idx, t in enumerate(self.allowed_sorted):
                if narrow:
                    gaps = self.m2 - tri_s - int(self.weight_lut[t])
                    viable = (gaps >= 0) & rb[np.clip(gaps, 0, self.m2)]
                    tvals[nrows:, idx] = np.where(viable, n - 8 * t, _FAR)
                else:
                    tvals[nrows:, idx] = n - 8 * t
            if np.any(np.all(tvals[nrows:] == _FAR, axis=1)):
                return []

        partials = np.zeros((1, nfun), dtype=np.int32)
        bitmasks: list[int] = [0]
        for ci in range(ncls):
            size = sizes[ci]
            rem = suffix[ci + 1]
            top = size - 1 if classes[order[ci]][0] == 0 else size
            ys = size - 2 * np.arange(top + 1, dtype=np.int32)
            scol = sgn[:, ci]
            v = partials[:, None, :] + ys[None, :, None] * scol[None, None, :]
            av = np.abs(v)
            dist = np.abs(av - tvals[None, None, :, 0])
            for k in range(1, ka):
                np.minimum(dist, np.abs(av - tvals[None, None, :, k]), out=dist)
            ok = dist.max(axis=2) <= rem
            ok &= ((v[:, :, 0] + rem) & 1) == 0
            keep_path, keep_x = np.nonzero(ok)
            if keep_path.size == 0:
                return []
            partials = v[keep_path, keep_x]
            tail = tails[ci]
            bitmasks = [
                bitmasks[s] | tail[x]
                for s, x in zip(keep_path.tolist(), keep_x.tolist())
            ]

        if self.rng is not None:
            self.rng.shuffle(bitmasks)
        else:
            bitmasks.sort()
        return bitmasks

    # -- constraint checks -----------------------------------------------------

    def _check(self, cand: int):
        """None if the candidate is rejected; otherwise the per-triple weights
        and per-pair accumulations needed to push it."""
        n = self.n
        nrows = len(self.rows)
        ntri = comb(nrows, 3)
        npair = comb(nrows, 2)
        rb = self.reach_bool[n - nrows - 1]
        if ntri == 0:
            wt = np.zeros(0, dtype=np.int64)
            pair_acc = np.zeros(npair, dtype=np.int64)
        else:
            ws = np.bitwise_count(self.tri_x[:ntri] ^ np.uint64(cand)).astype(np.int64)
            p = np.abs(n - 2 * ws)
            t = (n - p) >> 3
            if self.cfg.prune_types and not self.allowed_mask[t].all():
                return None
            wt = self.weight_lut[t]
            if self.cfg.prune_feasibility:
                gaps = self.m2 - self.tri_s[:ntri] - wt
                if np.any((gaps < 0) | ~rb[np.clip(gaps, 0, self.m2)]):
                    return None
            pair_acc = np.zeros(npair, dtype=np.int64)
            np.add.at(pair_acc, self.tri_pid[:ntri].ravel(), np.repeat(wt, 3))
        if self.cfg.prune_feasibility and npair:
            gaps = self.m2 - pair_acc
            if np.any((gaps < 0) | ~rb[np.clip(gaps, 0, self.m2)]):
                return None
        return wt, pair_acc

    # -- tree walk ---------------------------------------------------------------

    def _extend(self) -> None:
        if self.aborted or self.hit_max:
            return
        depth = len(self.rows)
        if depth == self.n:
            self._emit()
            return
        cands = self._gen_candidates()
        sharding_here = depth == 3 and self.shards > 1
        for idx, cand in enumerate(cands):
            if sharding_here and idx % self.shards != self.shard_id:
                continue
            if depth == 3:
                self.cand3 = idx
            self.nodes += 1
            if self.nodes >= self.cap:
                self.aborted = True
                return
            checked = self._check(cand)
            if checked is None:
                continue
            self._push(cand, checked)
            self._extend()
            self._pop(checked)
            if self.aborted or self.hit_max:
                return

    def _push(self, cand: int, checked) -> None:
        wt, pair_acc = checked
        r = len(self.rows)
        lo, hi = comb(r, 3), comb(r + 1, 3)
        self.tri_s[: len(wt)] += wt
        if hi > lo:
            c64 = np.uint64(cand)
            self.tri_x[lo:hi] = (
                self.rows_np[self.tri_a[lo:hi]] ^ self.rows_np[self.tri_b[lo:hi]] ^ c64
            )
            self.tri_s[lo:hi] = pair_acc
        self.rows_np[r] = cand
        self.rows.append(cand)
        new_classes: list[list[int]] = []
        for cols in self.classes:
            zeros = [c for c in cols if not (cand >> c) & 1]
            ones = [c for c in cols if (cand >> c) & 1]
            if zeros:
                new_classes.append(zeros)
            if ones:
                new_classes.append(ones)
        self._class_stack.append(self.classes)
        self.classes = new_classes

    def _pop(self, checked) -> None:
        wt, _ = checked
        self.rows.pop()
        self.tri_s[: len(wt)] -= wt
        self.classes = self._class_stack.pop()

    def _emit(self) -> None:
        rows = tuple(self.rows)
        if rows in self._seen:
            return
        m = BitMatrix(self.n, rows)
        # re-verify independently of the search bookkeeping
        if not is_hadamard(m):
            return
        if not _distinct_types_direct(rows, self.n) <= self.allowed:
            return
        self._seen.add(rows)
        self.solutions.append((self.cand3, rows))
        if (
            self.cfg.max_solutions is not None
            and len(self.solutions) >= self.cfg.max_solutions
        ):
            self.hit_max = True


def _distinct_types_direct(rows: Sequence[int], n: int) -> set[int]:
    """Quadruple type set by plain enumeration (solution re-verification)."""
    types: set[int] = set()
    for i in range(n - 3):
        ri = rows[i]
        for j in range(i + 1, n - 2):
            rij = ri ^ rows[j]
            for k in range(j + 1, n - 1):
                rijk = rij ^ rows[k]
                for l in range(k + 1, n):
                    w = (rijk ^ rows[l]).bit_count()
                    p = n - 2 * w
                    if p < 0:
                        p = -p
                    types.add((n - p) >> 3)
    return types
