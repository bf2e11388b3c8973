"""Canonical block form of a row quadruple and the tight five-row pattern.

Any four distinct rows of a Hadamard matrix can be brought, by negating
columns (to make the first of the four rows all +), optionally negating one
row, and permuting columns, to a unique arrangement of eight column blocks

        s  t  t  s  t  s  s  t
    i:  +  +  +  +  +  +  +  +
    j:  +  +  +  +  -  -  -  -
    k:  +  +  -  -  +  +  -  -
    l:  +  -  +  -  +  -  +  -

with s + t = n/4; the block width t is exactly the quadruple's type.  For
five rows i, j, k, p, q the sum of the two types T(i,j,k,p) + T(i,j,k,q) is
at least m/2 (m = n/4), and when equality holds the five rows admit an
analogous twelve-block arrangement, which :func:`check_five_row_equality_form`
verifies by comparing column-class cardinalities.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import NotHadamardError, quad_type
from .matrix import (
    BitMatrix,
    EquivalenceOp,
    Transcript,
    negate_col,
    negate_row,
    permute_cols,
)

# Class keys are (sign_j << 2) | (sign_k << 1) | sign_l with 0 = '+'; block b
# has width s when the three signs multiply to +, width t when to -.
_BLOCK_IS_WIDE = tuple(bin(b).count("1") % 2 == 0 for b in range(8))


@dataclass(frozen=True)
class QuadCanonicalForm:
    """Recorded transform taking a row quadruple to the eight-block pattern."""

    s: int
    t: int
    rows: tuple[int, int, int, int]
    column_arrangement: tuple[int, ...]
    column_negations: int
    row_negations: tuple[bool, bool, bool, bool]
    block_sizes: tuple[int, int, int, int, int, int, int, int]

    def as_transcript(self) -> Transcript:
        """Moves that realize the pattern when applied to the source matrix."""
        ops: list[EquivalenceOp] = []
        neg = self.column_negations
        while neg:
            j = (neg & -neg).bit_length() - 1
            ops.append(negate_col(j))
            neg &= neg - 1
        for idx, flip in zip(self.rows, self.row_negations):
            if flip:
                ops.append(negate_row(idx))
        ops.append(permute_cols(self.column_arrangement))
        return Transcript(tuple(ops))


def reference_block_rows(n: int, s: int, t: int) -> tuple[int, int, int, int]:
    """The four bit-rows of the eight-block pattern at the given widths."""
    widths = (s, t, t, s, t, s, s, t)
    rows = [0, 0, 0, 0]
    pos = 0
    for b, w in enumerate(widths):
        block = ((1 << w) - 1) << pos
        if b & 4:
            rows[1] |= block
        if b & 2:
            rows[2] |= block
        if b & 1:
            rows[3] |= block
        pos += w
    return tuple(rows)


def canonicalize_quad(m: BitMatrix, i: int, j: int, k: int, l: int) -> QuadCanonicalForm:
    """Classify columns by the sign triple of rows (j, k, l) after dephasing
    row i, orient the product sign by negating row l if needed, and order the
    eight classes into the reference pattern (ties by original column index).
    """
    n = m.order
    t = quad_type(m, i, j, k, l)  # validates indices and divisibility
    s = n // 4 - t

    ri = m.rows[i]
    rj = m.rows[j] ^ ri
    rk = m.rows[k] ^ ri
    rl = m.rows[l] ^ ri

    signed = n - 2 * (rj ^ rk ^ rl).bit_count()
    negate_l = signed < 0
    if negate_l:
        rl ^= m.mask

    classes: list[list[int]] = [[] for _ in range(8)]
    for c in range(n):
        key = ((rj >> c) & 1) << 2 | ((rk >> c) & 1) << 1 | ((rl >> c) & 1)
        classes[key].append(c)

    sizes = tuple(len(cls) for cls in classes)
    expected = tuple(s if wide else t for wide in _BLOCK_IS_WIDE)
    if sizes != expected:
        raise NotHadamardError(
            f"rows ({i},{j},{k},{l}): column classes {sizes} do not fit the "
            f"(s,t) = ({s},{t}) block pattern; input is not Hadamard"
        )

    arrangement = tuple(c for cls in classes for c in cls)
    return QuadCanonicalForm(
        s=s,
        t=t,
        rows=(i, j, k, l),
        column_arrangement=arrangement,
        column_negations=ri,
        row_negations=(False, False, False, negate_l),
        block_sizes=sizes,
    )


# The twelve realizable column classes of the tight five-row arrangement,
# keyed by (sign_j << 3) | (sign_k << 2) | (sign_p << 1) | sign_q, and their
# widths in terms of t = T(i,j,k,p), s = T(i,j,k,q), t' = m/2 - t,
# s' = m/2 - s, h = m/2.
def _five_row_widths(t: int, s: int, tp: int, sp: int, h: int) -> dict[int, int]:
    return {
        0b0000: h,
        0b0001: tp,
        0b0010: sp,
        0b0101: t,
        0b0110: s,
        0b0111: h,
        0b1001: t,
        0b1010: s,
        0b1011: h,
        0b1100: h,
        0b1101: tp,
        0b1110: sp,
    }


def check_five_row_equality_form(
    m: BitMatrix, i: int, j: int, k: int, p: int, q: int
) -> bool:
    """True iff T(i,j,k,p) + T(i,j,k,q) = m/2 and some negation of rows
    j, k, p, q realizes the twelve-block arrangement.

    Column classification is permutation-invariant, so only cardinalities are
    compared; the 2^4 row-negation orientations are each tried.
    """
    n = m.order
    mdiv4 = n // 4
    t = quad_type(m, i, j, k, p)
    s = quad_type(m, i, j, k, q)
    if 2 * (t + s) != mdiv4:
        return False
    h = mdiv4 // 2
    expected = _five_row_widths(t, s, h - t, h - s, h)

    ri = m.rows[i]
    others = [m.rows[x] ^ ri for x in (j, k, p, q)]
    hist = [0] * 16
    for c in range(n):
        key = 0
        for r in others:
            key = (key << 1) | ((r >> c) & 1)
        hist[key] += 1

    for nu in range(16):
        if all(hist[key ^ nu] == expected.get(key, 0) for key in range(16)):
            return True
    return False
