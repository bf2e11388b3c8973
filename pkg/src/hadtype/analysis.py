"""Quadruple types, triple spectra, and profiles of Hadamard matrices.

For four distinct rows i, j, k, l of a Hadamard matrix of order n, let P be
the absolute value of the sum over columns of the product of the four
entries.  The *type* of the quadruple is t = (n - P) / 8, an integer between
0 and floor(n/8) that no equivalence move can change.  Fixing a triple of
rows and counting, for each t, the rows l that complete it to a quadruple of
type t gives the triple's *spectrum* (kappa_t counts); the multiset of
spectra over all C(n,3) triples is the matrix's *profile*, an equivalence
invariant fingerprint.  With m = n/4, every spectrum of a genuine Hadamard
matrix satisfies

    sum_t kappa_t * (m - 2t)^2 = m^2      (completion identity)

which doubles as a cheap integrity check and as a search-pruning bound.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

from .matrix import BitMatrix


class NotHadamardError(ValueError):
    """Type arithmetic failed: n - P is not divisible by 8.

    Only non-Hadamard input can trigger this; it exists to surface corrupted
    matrices early instead of silently truncating a division.
    """


def _require_distinct(indices: Sequence[int], n: int) -> None:
    if len(set(indices)) != len(indices):
        raise ValueError(f"row indices must be distinct, got {tuple(indices)}")
    for i in indices:
        if not 0 <= i < n:
            raise IndexError(f"row index {i} out of range for order {n}")


def quad_p(m: BitMatrix, i: int, j: int, k: int, l: int) -> int:
    """|sum over columns of the product of the four rows' entries|.

    Equals |n - 2 * popcount(r_i ^ r_j ^ r_k ^ r_l)|.
    """
    _require_distinct((i, j, k, l), m.order)
    rows = m.rows
    w = (rows[i] ^ rows[j] ^ rows[k] ^ rows[l]).bit_count()
    return abs(m.order - 2 * w)


def quad_type(m: BitMatrix, i: int, j: int, k: int, l: int) -> int:
    """Type of a row quadruple: (n - P) / 8, exact by orthogonality."""
    p = quad_p(m, i, j, k, l)
    n = m.order
    if (n - p) % 8:
        raise NotHadamardError(
            f"rows ({i},{j},{k},{l}): n - P = {n - p} is not divisible by 8"
        )
    return (n - p) // 8


@dataclass(frozen=True)
class TripleSpectrum:
    """Counts kappa_t of rows completing a fixed triple to type t.

    ``counts`` holds only nonzero entries as (t, kappa_t) pairs sorted by t.
    """

    counts: tuple[tuple[int, int], ...]

    def total(self) -> int:
        return sum(c for _, c in self.counts)

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    def identity_sum(self, m: int) -> int:
        """sum of kappa_t * (m - 2t)^2 over the spectrum."""
        return sum(c * (m - 2 * t) ** 2 for t, c in self.counts)

    def satisfies_identity(self, order: int) -> bool:
        """Completion identity plus the count total n - 3."""
        m = order // 4
        return self.total() == order - 3 and self.identity_sum(m) == m * m

    @classmethod
    def from_mapping(cls, counts: Mapping[int, int]) -> "TripleSpectrum":
        return cls(tuple(sorted((t, c) for t, c in counts.items() if c)))


def triple_spectrum(m: BitMatrix, i: int, j: int, k: int) -> TripleSpectrum:
    """Spectrum of one triple: one pass over the remaining n - 3 rows."""
    _require_distinct((i, j, k), m.order)
    return TripleSpectrum(_spectrum_key(m.rows, m.order, i, j, k))


def _spectrum_key(
    rows: Sequence[int], n: int, i: int, j: int, k: int
) -> tuple[tuple[int, int], ...]:
    base = rows[i] ^ rows[j] ^ rows[k]
    counts = [0] * (n // 8 + 1)
    for l in range(n):
        if l == i or l == j or l == k:
            continue
        w = (base ^ rows[l]).bit_count()
        p = n - 2 * w
        if p < 0:
            p = -p
        d = n - p
        if d & 7:
            raise NotHadamardError(
                f"rows ({i},{j},{k},{l}): n - P = {d} is not divisible by 8"
            )
        counts[d >> 3] += 1
    return tuple((t, c) for t, c in enumerate(counts) if c)


def verify_completion_identity(m: BitMatrix, i: int, j: int, k: int) -> bool:
    """Check the completion identity for one triple.

    Always true for genuine Hadamard input; False signals a corrupted or
    non-orthogonal matrix (diagnostic use).
    """
    _require_distinct((i, j, k), m.order)
    try:
        spec = triple_spectrum(m, i, j, k)
    except NotHadamardError:
        return False
    return spec.satisfies_identity(m.order)


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class Profile:
    """Multiset of triple spectra over all C(n,3) triples.

    Entries are sorted lexicographically by spectrum so that equality,
    serialization, and fingerprints are deterministic regardless of how the
    triples were enumerated or sharded.
    """

    order: int
    entries: tuple[tuple[TripleSpectrum, int], ...]

    def total(self) -> int:
        return sum(c for _, c in self.entries)

    def spectra(self) -> tuple[TripleSpectrum, ...]:
        return tuple(s for s, _ in self.entries)

    def distinct_types(self) -> frozenset[int]:
        return frozenset(t for s, _ in self.entries for t, _ in s.counts)

    def to_json_dict(self) -> dict:
        return {
            "order": self.order,
            "entries": [
                {"spectrum": [[t, c] for t, c in s.counts], "count": mult}
                for s, mult in self.entries
            ],
        }

    def canonical_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    def fingerprint(self) -> str:
        """sha256 of the canonical JSON bytes; stable across runs/platforms."""
        return hashlib.sha256(self.canonical_json().encode("ascii")).hexdigest()

    def validate(self) -> None:
        """Raise ValueError unless multiplicities and every spectrum check out."""
        n = self.order
        if self.total() != comb(n, 3):
            raise ValueError(
                f"multiplicities sum to {self.total()}, expected C({n},3) = {comb(n, 3)}"
            )
        for spec, _ in self.entries:
            if spec.total() != n - 3:
                raise ValueError(f"spectrum {spec.counts} has {spec.total()} != n-3 rows")
            m = n // 4
            got = spec.identity_sum(m)
            if got != m * m:
                raise ValueError(
                    f"spectrum {spec.counts} fails the completion identity: "
                    f"{got} != {m * m}"
                )

    @classmethod
    def from_counter(cls, order: int, counter: Mapping[tuple, int]) -> "Profile":
        entries = tuple(
            (TripleSpectrum(key), counter[key]) for key in sorted(counter)
        )
        return cls(order, entries)

    @classmethod
    def from_json_dict(cls, d: dict) -> "Profile":
        entries = tuple(
            (TripleSpectrum(tuple((t, c) for t, c in e["spectrum"])), e["count"])
            for e in d["entries"]
        )
        return cls(d["order"], entries)


def profile(m: BitMatrix, workers: int = 1) -> Profile:
    """Profile of ``m``; triples may be partitioned over worker processes.

    The merge is commutative, so the result is independent of ``workers``.
    """
    n = m.order
    if workers <= 1 or n < 8:
        counter = _profile_chunk(m.rows, n, range(n - 2))
    else:
        chunks = [range(w, n - 2, workers) for w in range(workers)]
        counter = Counter()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_profile_chunk, [m.rows] * workers, [n] * workers, chunks):
                counter.update(part)
    return Profile.from_counter(n, counter)


def _profile_chunk(rows: Sequence[int], n: int, i_values: Iterable[int]) -> Counter:
    counter: Counter = Counter()
    tmax = n // 8 + 1
    for i in i_values:
        ri = rows[i]
        for j in range(i + 1, n - 1):
            rij = ri ^ rows[j]
            for k in range(j + 1, n):
                base = rij ^ rows[k]
                counts = [0] * tmax
                for l in range(n):
                    if l == i or l == j or l == k:
                        continue
                    w = (base ^ rows[l]).bit_count()
                    p = n - 2 * w
                    if p < 0:
                        p = -p
                    d = n - p
                    if d & 7:
                        raise NotHadamardError(
                            f"rows ({i},{j},{k},{l}): n - P = {d} not divisible by 8"
                        )
                    counts[d >> 3] += 1
                counter[tuple((t, c) for t, c in enumerate(counts) if c)] += 1
    return counter


def distinct_quad_types(m: BitMatrix, prof: Profile | None = None) -> frozenset[int]:
    """Set of quadruple type values, read off the profile's spectrum keys."""
    if prof is None:
        prof = profile(m)
    return prof.distinct_types()


# ---------------------------------------------------------------------------
# row algebra


def row_hadamard_product(m: BitMatrix, indices: Sequence[int]) -> int:
    """Entrywise product of the selected rows, as a bit-vector (XOR)."""
    if not indices:
        raise ValueError("need at least one row index")
    out = 0
    for i in indices:
        out ^= m.rows[i]
    return out


def sigma(v: int, n: int) -> int:
    """|coordinate sum| of the ±1 vector encoded by ``v``: |n - 2*popcount|."""
    if v >> n:
        raise ValueError(f"vector has bits beyond length {n}")
    return abs(n - 2 * v.bit_count())
