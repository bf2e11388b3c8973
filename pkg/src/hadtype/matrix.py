"""Bit-packed Hadamard matrices and the equivalence moves that act on them.

A matrix entry is +1 or -1.  Rows are stored as Python integers with bit j of
row i set exactly when entry (i, j) is -1.  Under this encoding the entrywise
product of two rows is the XOR of their integers, and the sum of a row's
entries is ``n - 2 * popcount``, so every orthogonality and type computation
reduces to XOR plus ``int.bit_count``.  Bits at positions >= n are always zero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

#: Largest matrix order constructors will build by default.  Override per call
#: via the ``max_order`` keyword where offered.
MAX_ORDER = 256

SIGN_CHARS = {"+": 0, "-": 1}
ZEROONE_CHARS = {"0": 0, "1": 1}


class ParseError(ValueError):
    """Malformed matrix text: wrong shape, bad character, or empty input."""


@dataclass(frozen=True)
class BitMatrix:
    """Immutable square ±1 matrix with bit-packed rows (bit 1 encodes -1)."""

    order: int
    rows: tuple[int, ...]

    def __post_init__(self):
        n = self.order
        if n <= 0:
            raise ValueError(f"order must be positive, got {n}")
        if len(self.rows) != n:
            raise ValueError(f"expected {n} rows, got {len(self.rows)}")
        mask = (1 << n) - 1
        for i, r in enumerate(self.rows):
            if r & ~mask:
                raise ValueError(f"row {i} has bits set beyond column {n - 1}")

    @property
    def mask(self) -> int:
        """All-ones bit pattern of width ``order``."""
        return (1 << self.order) - 1

    def entry(self, i: int, j: int) -> int:
        """Matrix entry as +1 or -1."""
        return -1 if (self.rows[i] >> j) & 1 else 1

    def to_array(self) -> np.ndarray:
        """Dense ±1 representation (int8)."""
        n = self.order
        out = np.ones((n, n), dtype=np.int8)
        for i, r in enumerate(self.rows):
            for j in range(n):
                if (r >> j) & 1:
                    out[i, j] = -1
        return out

    @classmethod
    def from_array(cls, arr) -> "BitMatrix":
        """Build from any square array-like of +1/-1 entries."""
        a = np.asarray(arr)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.abs(a) == 1):
            raise ValueError("entries must be +1 or -1")
        n = a.shape[0]
        rows = []
        for i in range(n):
            r = 0
            for j in range(n):
                if a[i, j] < 0:
                    r |= 1 << j
            rows.append(r)
        return cls(n, tuple(rows))

    def transpose(self) -> "BitMatrix":
        n = self.order
        cols = [0] * n
        for i, r in enumerate(self.rows):
            while r:
                j = (r & -r).bit_length() - 1
                cols[j] |= 1 << i
                r &= r - 1
        return BitMatrix(n, tuple(cols))


# ---------------------------------------------------------------------------
# text formats


def parse_matrix(text: str, format: str = "signs") -> BitMatrix:
    """Parse one matrix from ``signs`` (+/-) or ``zeroone`` (0/1, 1 -> -1) text.

    Whitespace inside lines and blank lines are ignored.  The matrix must be
    square: line length equals the number of nonblank lines.
    """
    charmap = _charmap(format)
    rows: list[int] = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = "".join(raw.split())
        if not line:
            continue
        r = 0
        for j, ch in enumerate(line):
            try:
                bit = charmap[ch]
            except KeyError:
                raise ParseError(f"line {lineno}: illegal character {ch!r}") from None
            r |= bit << j
        if width is None:
            width = len(line)
        elif len(line) != width:
            raise ParseError(f"line {lineno}: length {len(line)} != {width}")
        rows.append(r)
    if width is None:
        raise ParseError("empty input")
    if len(rows) != width:
        raise ParseError(f"non-square input: {len(rows)} rows of length {width}")
    return BitMatrix(width, tuple(rows))


def parse_matrices(text: str, format: str = "signs") -> list[BitMatrix]:
    """Parse a blank-line-separated catalog of matrices (``.had`` convention)."""
    blocks: list[list[str]] = [[]]
    for raw in text.splitlines():
        if raw.strip():
            blocks[-1].append(raw)
        elif blocks[-1]:
            blocks.append([])
    return [parse_matrix("\n".join(b), format) for b in blocks if b]


def emit_matrix(m: BitMatrix, format: str = "signs") -> str:
    """Render as text; round-trips bit-exactly through :func:`parse_matrix`."""
    if format == "signs":
        chars = "+-"
    elif format == "zeroone":
        chars = "01"
    else:
        raise ValueError(f"unknown format {format!r}")
    lines = []
    for r in m.rows:
        lines.append("".join(chars[(r >> j) & 1] for j in range(m.order)))
    return "\n".join(lines) + "\n"


def _charmap(format: str) -> dict[str, int]:
    if format == "signs":
        return SIGN_CHARS
    if format == "zeroone":
        return ZEROONE_CHARS
    raise ValueError(f"unknown format {format!r}")


# ---------------------------------------------------------------------------
# verification


def is_hadamard(m: BitMatrix) -> bool:
    """True iff every pair of distinct rows is orthogonal.

    In bit form: popcount(r_i XOR r_j) == n/2 for all i < j.  Orders 1 and 2
    are allowed; other orders not divisible by 4 simply return False.
    """
    n = m.order
    if n == 1:
        return True
    if n % 2:
        return False
    half = n // 2
    rows = m.rows
    for i in range(n - 1):
        ri = rows[i]
        for j in range(i + 1, n):
            if (ri ^ rows[j]).bit_count() != half:
                return False
    return True


# ---------------------------------------------------------------------------
# equivalence operations

NEGATE_ROW = "negate_row"
NEGATE_COL = "negate_col"
SWAP_ROWS = "swap_rows"
SWAP_COLS = "swap_cols"
PERMUTE_ROWS = "permute_rows"
PERMUTE_COLS = "permute_cols"

OP_KINDS = (NEGATE_ROW, NEGATE_COL, SWAP_ROWS, SWAP_COLS, PERMUTE_ROWS, PERMUTE_COLS)


@dataclass(frozen=True)
class EquivalenceOp:
    """One Hadamard-equivalence move.

    ``kind`` selects the move; ``i``/``j`` are row or column indices for the
    negate/swap kinds, ``perm`` is the full permutation for the permute kinds
    with the convention new[i] = old[perm[i]] (rows) and new bit j = old bit
    perm[j] (columns).
    """

    kind: str
    i: int = 0
    j: int = 0
    perm: tuple[int, ...] = ()

    def to_json(self) -> dict:
        if self.kind in (NEGATE_ROW, NEGATE_COL):
            return {"op": self.kind, "i": self.i}
        if self.kind in (SWAP_ROWS, SWAP_COLS):
            return {"op": self.kind, "i": self.i, "j": self.j}
        return {"op": self.kind, "perm": list(self.perm)}

    @classmethod
    def from_json(cls, d: dict) -> "EquivalenceOp":
        kind = d["op"]
        if kind not in OP_KINDS:
            raise ValueError(f"unknown op kind {kind!r}")
        return cls(kind, d.get("i", 0), d.get("j", 0), tuple(d.get("perm", ())))


def negate_row(i: int) -> EquivalenceOp:
    return EquivalenceOp(NEGATE_ROW, i=i)


def negate_col(j: int) -> EquivalenceOp:
    return EquivalenceOp(NEGATE_COL, i=j)


def swap_rows(i: int, j: int) -> EquivalenceOp:
    return EquivalenceOp(SWAP_ROWS, i=i, j=j)


def swap_cols(i: int, j: int) -> EquivalenceOp:
    return EquivalenceOp(SWAP_COLS, i=i, j=j)


def permute_rows(perm: Sequence[int]) -> EquivalenceOp:
    return EquivalenceOp(PERMUTE_ROWS, perm=tuple(perm))


def permute_cols(perm: Sequence[int]) -> EquivalenceOp:
    return EquivalenceOp(PERMUTE_COLS, perm=tuple(perm))


@dataclass(frozen=True)
class Transcript:
    """Ordered, replayable sequence of equivalence moves."""

    ops: tuple[EquivalenceOp, ...] = ()

    def __len__(self) -> int:
        return len(self.ops)

    def __add__(self, other: "Transcript") -> "Transcript":
        return Transcript(self.ops + other.ops)

    def to_json(self) -> list[dict]:
        return [op.to_json() for op in self.ops]

    @classmethod
    def from_json(cls, data: Iterable[dict]) -> "Transcript":
        return cls(tuple(EquivalenceOp.from_json(d) for d in data))


def apply_op(m: BitMatrix, op: EquivalenceOp) -> BitMatrix:
    n = m.order
    rows = list(m.rows)
    kind = op.kind
    if kind == NEGATE_ROW:
        _check_index(op.i, n)
        rows[op.i] ^= m.mask
    elif kind == NEGATE_COL:
        _check_index(op.i, n)
        bit = 1 << op.i
        rows = [r ^ bit for r in rows]
    elif kind == SWAP_ROWS:
        _check_index(op.i, n)
        _check_index(op.j, n)
        rows[op.i], rows[op.j] = rows[op.j], rows[op.i]
    elif kind == SWAP_COLS:
        _check_index(op.i, n)
        _check_index(op.j, n)
        bi, bj = 1 << op.i, 1 << op.j
        for idx, r in enumerate(rows):
            a = (r >> op.i) & 1
            b = (r >> op.j) & 1
            if a != b:
                rows[idx] = r ^ bi ^ bj
    elif kind == PERMUTE_ROWS:
        _check_perm(op.perm, n)
        rows = [rows[op.perm[i]] for i in range(n)]
    elif kind == PERMUTE_COLS:
        _check_perm(op.perm, n)
        rows = [_permute_bits(r, op.perm) for r in rows]
    else:
        raise ValueError(f"unknown op kind {kind!r}")
    return BitMatrix(n, tuple(rows))


def apply_ops(m: BitMatrix, transcript: Transcript) -> BitMatrix:
    """Apply every op of ``transcript`` in order."""
    for op in transcript.ops:
        m = apply_op(m, op)
    return m


def _permute_bits(r: int, perm: tuple[int, ...]) -> int:
    out = 0
    for j, src in enumerate(perm):
        out |= ((r >> src) & 1) << j
    return out


def _check_index(i: int, n: int) -> None:
    if not 0 <= i < n:
        raise IndexError(f"index {i} out of range for order {n}")


def _check_perm(perm: tuple[int, ...], n: int) -> None:
    if sorted(perm) != list(range(n)):
        raise IndexError(f"payload is not a permutation of 0..{n - 1}")


# ---------------------------------------------------------------------------
# normalization


def dephase(m: BitMatrix) -> tuple[BitMatrix, Transcript]:
    """Normalize so the first row and first column are all +1.

    Columns where row 0 reads -1 are negated first, then rows where column 0
    reads -1.  The returned transcript replays the exact moves.
    """
    n = m.order
    ops: list[EquivalenceOp] = []
    rows = list(m.rows)
    r0 = rows[0]
    for j in range(n):
        if (r0 >> j) & 1:
            ops.append(negate_col(j))
    if r0:
        rows = [r ^ r0 for r in rows]
    mask = (1 << n) - 1
    for i in range(n):
        if rows[i] & 1:
            ops.append(negate_row(i))
            rows[i] ^= mask
    return BitMatrix(n, tuple(rows)), Transcript(tuple(ops))


# ---------------------------------------------------------------------------
# constructions


def kronecker(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """Kronecker product; the product of Hadamard matrices is Hadamard.

    Entry ((ai, bi), (aj, bj)) under block indexing is A[ai][aj] * B[bi][bj],
    which in bit form is XOR of the factors' bits.
    """
    na, nb = a.order, b.order
    n = na * nb
    maskb = (1 << nb) - 1
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            r = 0
            for ja in range(na):
                block = rb ^ maskb if (ra >> ja) & 1 else rb
                r |= block << (ja * nb)
            rows.append(r)
    return BitMatrix(n, tuple(rows))


H1 = BitMatrix(1, (0,))
H2 = BitMatrix(2, (0b00, 0b10))


def sylvester(r: int, *, max_order: int | None = None) -> BitMatrix:
    """Order-2^r matrix from the doubling construction [[H, H], [H, -H]].

    Starts from the 1x1 matrix [+]; each step is a Kronecker product with the
    order-2 matrix.  The result is dephased by construction.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    bound = MAX_ORDER if max_order is None else max_order
    if 1 << r > bound:
        raise ValueError(f"order 2^{r} exceeds the configured bound {bound}")
    m = H1
    for _ in range(r):
        m = kronecker(H2, m)
    return m


def paley_I(q: int) -> BitMatrix:
    """Hadamard matrix of order q + 1 from quadratic residues mod q.

    Requires q prime with q = 3 (mod 4).  The core has -1 on the diagonal and
    entry chi(a - b) off it, bordered by all-+1 first row and column, so the
    result is dephased as built.  Supplies non-doubling fixtures of orders
    12, 20, 24, 28.
    """
    if q < 3 or not _is_prime(q):
        raise ValueError(f"q = {q} is not prime")
    if q % 4 != 3:
        raise ValueError(f"q = {q} is not 3 mod 4")
    residues = {(x * x) % q for x in range(1, q)}
    n = q + 1
    rows = [0]
    for a in range(q):
        r = 0
        for b in range(q):
            if a == b:
                negative = True
            else:
                negative = ((a - b) % q) not in residues
            if negative:
                r |= 1 << (b + 1)
        rows.append(r)
    return BitMatrix(n, tuple(rows))


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# randomized scrambling (test harness for invariance checks)


def random_equivalence(m: BitMatrix, seed: int, k: int) -> tuple[BitMatrix, Transcript]:
    """Apply ``k`` pseudorandom equivalence moves; deterministic per seed."""
    rng = random.Random(seed)
    n = m.order
    ops = []
    for _ in range(k):
        kind = rng.choice(OP_KINDS)
        if kind in (NEGATE_ROW, NEGATE_COL):
            op = EquivalenceOp(kind, i=rng.randrange(n))
        elif kind in (SWAP_ROWS, SWAP_COLS):
            op = EquivalenceOp(kind, i=rng.randrange(n), j=rng.randrange(n))
        else:
            op = EquivalenceOp(kind, perm=tuple(rng.sample(range(n), n)))
        ops.append(op)
    t = Transcript(tuple(ops))
    return apply_ops(m, t), t
