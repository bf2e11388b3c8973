"""Constructive recognition of Sylvester matrices from a {0, t} type spectrum.

A Hadamard matrix of order 8t whose quadruple types all lie in {0, t} is
equivalent to the order-8t doubling (Sylvester) matrix, and the equivalence
can be built row by row: every triple of rows has exactly one completion of
type 0, namely the row equal (up to negation) to the entrywise product of
the three, and chasing those completions doubles a recovered top block
[K ... K] until it fills the matrix.  The reducer returns the full move
transcript so the claim is replayable: applying it to the input must
reproduce the doubling matrix bit for bit.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .analysis import Profile, distinct_quad_types
from .matrix import (
    BitMatrix,
    Transcript,
    apply_op,
    dephase,
    is_hadamard,
    negate_row,
    permute_cols,
    permute_rows,
    swap_rows,
    sylvester,
)


class Verdict(enum.Enum):
    SYLVESTER = "Sylvester"
    NOT_TWO_TYPE_ZERO_T = "NotTwoTypeZeroT"
    INCONSISTENT = "Inconsistent"


@dataclass(frozen=True)
class RecognitionResult:
    verdict: Verdict
    transcript: Transcript | None = None


class CompletionError(LookupError):
    """No row, or more than one, matches the product of the given triple."""


def zero_type_completion(m: BitMatrix, i: int, j: int, k: int) -> int:
    """Index of the unique row equal, up to negation, to the product of rows
    i, j, k; that row is the triple's only type-0 completion."""
    if len({i, j, k}) != 3:
        raise ValueError("row indices must be distinct")
    rows = m.rows
    x = rows[i] ^ rows[j] ^ rows[k]
    xc = x ^ m.mask
    found = [l for l, r in enumerate(rows) if l not in (i, j, k) and r in (x, xc)]
    if len(found) != 1:
        raise CompletionError(
            f"triple ({i},{j},{k}) has {len(found)} type-0 completions, expected 1"
        )
    return found[0]


def reduce_to_sylvester(m: BitMatrix, prof: Profile | None = None) -> RecognitionResult:
    """Decide equivalence to the doubling matrix and emit the transcript.

    Verdicts: SYLVESTER with a replayable transcript; NOT_TWO_TYPE_ZERO_T if
    the quadruple types are not contained in {0, n/8}; INCONSISTENT if the
    reconstruction breaks down mid-run (unreachable for genuine two-type
    input).  Pass a precomputed ``prof`` to skip re-profiling.
    """
    if not is_hadamard(m):
        raise ValueError("input is not a Hadamard matrix")
    n = m.order

    if n >= 4:
        allowed = {0, n // 8} if n % 8 == 0 else {0}
        if not distinct_quad_types(m, prof) <= allowed:
            return RecognitionResult(Verdict.NOT_TWO_TYPE_ZERO_T)

    state = _Reduction(m)
    try:
        state.run()
    except (CompletionError, _ReductionError):
        return RecognitionResult(Verdict.INCONSISTENT)

    target = sylvester(n.bit_length() - 1, max_order=n)
    if state.w.rows != target.rows:
        return RecognitionResult(Verdict.INCONSISTENT)
    return RecognitionResult(Verdict.SYLVESTER, Transcript(tuple(state.ops)))


class _ReductionError(Exception):
    pass


class _Reduction:
    """Sequential state machine for one reduction run."""

    def __init__(self, m: BitMatrix):
        self.n = m.order
        self.w = m
        self.ops = []

    def do(self, op) -> None:
        self.w = apply_op(self.w, op)
        self.ops.append(op)

    def run(self) -> None:
        n = self.n
        w, t = dephase(self.w)
        self.w = w
        self.ops.extend(t.ops)
        if n == 1 or n == 2:
            return  # dephasing alone forces the doubling form
        if n % 4:
            raise _ReductionError(f"order {n} is not 1, 2, or a multiple of 4")
        self._seed_top_four()
        r = 2
        while (1 << r) < n:
            self._double_top_block(1 << r)
            r += 1

    def _seed_top_four(self) -> None:
        """Interleave columns on the classes of rows 1 and 2, then pull the
        type-0 completion of rows (0,1,2) into position 3."""
        n = self.n
        rows = self.w.rows
        groups: list[list[int]] = [[], [], [], []]
        for c in range(n):
            key = ((rows[1] >> c) & 1) | (((rows[2] >> c) & 1) << 1)
            groups[key].append(c)
        quarter = n // 4
        if any(len(g) != quarter for g in groups):
            raise _ReductionError("rows 1 and 2 do not split the columns evenly")
        perm = tuple(groups[c % 4][c // 4] for c in range(n))
        if perm != tuple(range(n)):
            self.do(permute_cols(perm))
        if n == 4:
            # unique dephased order-4 matrix up to row order
            order = {0: 0, 0b1010: 1, 0b1100: 2, 0b0110: 3}
            try:
                perm_rows = sorted(range(4), key=lambda i: order[self.w.rows[i]])
            except KeyError:
                raise _ReductionError("dephased order-4 rows are malformed") from None
            if perm_rows != [0, 1, 2, 3]:
                self.do(permute_rows(perm_rows))
            return
        self._place(3, target=self.w.rows[1] ^ self.w.rows[2], triple=(0, 1, 2))

    def _double_top_block(self, size: int) -> None:
        """Top ``size`` rows read [K ... K] columnwise; absorb the row at
        position ``size`` and extend to 2*size rows of [[K, K], [K, -K]]."""
        n = self.n
        rows = self.w.rows
        rho = rows[size]
        plus: list[list[int]] = [[] for _ in range(size)]
        minus: list[list[int]] = [[] for _ in range(size)]
        for c in range(n):
            (minus if (rho >> c) & 1 else plus)[c % size].append(c)
        copies = n // (2 * size)
        if any(len(g) != copies for g in plus) or any(len(g) != copies for g in minus):
            raise _ReductionError(
                f"row at position {size} is unbalanced over the column classes"
            )
        perm = []
        for c in range(n):
            b, val = divmod(c, 2 * size)
            perm.append(plus[val][b] if val < size else minus[val - size][b])
        perm = tuple(perm)
        if perm != tuple(range(n)):
            self.do(permute_cols(perm))
        for idx in range(1, size):
            target = self.w.rows[idx] ^ self.w.rows[size]
            self._place(size + idx, target=target, triple=(0, idx, size))

    def _place(self, pos: int, target: int, triple: tuple[int, int, int]) -> None:
        """Locate the type-0 completion of ``triple``, orient it to equal
        ``target`` exactly, and swap it into row position ``pos``."""
        l = zero_type_completion(self.w, *triple)
        row = self.w.rows[l]
        if row == target ^ self.w.mask:
            self.do(negate_row(l))
        elif row != target:
            raise _ReductionError(
                f"completion of {triple} matches neither the product row nor its negation"
            )
        if l != pos:
            self.do(swap_rows(pos, l))
