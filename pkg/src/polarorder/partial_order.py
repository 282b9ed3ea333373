"""Channel-independent partial orders between bit channels.

Two universal orders are combined here:

* the swap order: moving a single 1 of the expansion of ``j - 1`` to a higher,
  zero position yields a channel that is at least as good;
* the domination order: turning any 0 into a 1 yields a channel that is at
  least as good.

Their reflexive-transitive closure is decided pair by pair with a counter
scan from the most significant bit down (:func:`combined_leq`).  The pairwise
outcome for a whole block length is stored in a :class:`RelationMatrix`.
"""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import ConsistencyError, DomainError
from .index import BitIndex, bit_matrix

# Dense N x N intermediates are needed by the matrix builder and the closure.
MAX_MATRIX_N = 13


class Relation(IntEnum):
    """Relation of the higher-indexed channel of a pair to the lower-indexed one."""

    UNKNOWN = 0
    BETTER = 1  # higher index is better
    WORSE = 2  # higher index is worse


class Source(IntEnum):
    PO = 0
    DR = 1


def _same_n(j, i):
    if j.n != i.n:
        raise DomainError(f"indices have different lengths: n={j.n} vs n={i.n}")


def po1_swap_cover(j, i):
    """True when ``j - 1`` turns into ``i - 1`` by moving one 1 to a higher 0.

    The expansions must differ in exactly two positions ``l < l'`` with
    ``j_l = 1, j_l' = 0`` and ``i_l = 0, i_l' = 1``.
    """
    _same_n(j, i)
    diff = (j.i - 1) ^ (i.i - 1)
    if bin(diff).count("1") != 2:
        return False
    low = diff & -diff
    high = diff ^ low
    jv = j.i - 1
    return bool(jv & low) and not (jv & high)


def po2_leq(j, i):
    """True when every 1 of ``j - 1`` is also a 1 of ``i - 1``."""
    _same_n(j, i)
    jv, iv = j.i - 1, i.i - 1
    return jv & iv == jv


def combined_leq(j, i):
    """True when channel ``j`` is degraded with respect to ``i`` by the combined order.

    Scans ``bits(i - 1) - bits(j - 1)`` from the most significant position
    down with a running counter; the pair is ordered iff the counter never
    goes negative.
    """
    _same_n(j, i)
    count = 0
    for a, b in zip(i.bits, j.bits):
        count += a - b
        if count < 0:
            return False
    return True


def prefix_counts(n):
    """``(N, n)`` array of running 1-counts of each expansion, MSB first."""
    return np.cumsum(bit_matrix(n), axis=1, dtype=np.int16)


def leq_matrix(n):
    """Dense ``(N, N)`` bool array ``L[a, b] = combined_leq(b + 1, a + 1)``."""
    if not 1 <= n <= MAX_MATRIX_N:
        raise DomainError(f"n must be in [1, {MAX_MATRIX_N}] for dense matrices, got {n}")
    P = prefix_counts(n)
    N = 1 << n
    out = np.empty((N, N), dtype=bool)
    block = max(1, (1 << 22) // (N * n))
    for r0 in range(0, N, block):
        r1 = min(N, r0 + block)
        out[r0:r1] = np.all(P[r0:r1, None, :] >= P[None, :, :], axis=2)
    return out


def _tri_size(N):
    return N * (N - 1) // 2


def _offset(i, j):
    # 1-based (i, j) with i > j, row-major over the strict lower triangle
    return (i - 1) * (i - 2) // 2 + (j - 1)


class RelationMatrix:
    """Ternary relations over all channel pairs of one block length.

    Only the strict lower triangle ``rel(i, j)`` with ``i > j`` is kept,
    row-major.  Each entry costs three bits: two bit planes for the value
    (better / worse) and one plane for the source (PO / DR), all packed with
    :func:`numpy.packbits`.
    """

    def __init__(self, n, *, _better=None, _worse=None, _dr=None):
        if not 1 <= n <= MAX_MATRIX_N:
            raise DomainError(f"n must be in [1, {MAX_MATRIX_N}], got {n}")
        self.n = n
        self.N = 1 << n
        self.size = _tri_size(self.N)
        nbytes = (self.size + 7) // 8
        self._better = np.zeros(nbytes, np.uint8) if _better is None else _better
        self._worse = np.zeros(nbytes, np.uint8) if _worse is None else _worse
        self._dr = np.zeros(nbytes, np.uint8) if _dr is None else _dr

    # -- flat views -------------------------------------------------------

    @classmethod
    def from_flat(cls, n, values, sources):
        """Build from unpacked lower-triangle arrays of :class:`Relation` codes and sources."""
        values = np.asarray(values, dtype=np.uint8)
        sources = np.asarray(sources, dtype=np.uint8)
        N = 1 << n
        if values.shape != (_tri_size(N),) or sources.shape != values.shape:
            raise DomainError("flat arrays do not match the triangle size")
        if np.any(values > Relation.WORSE) or np.any(sources > Source.DR):
            raise DomainError("invalid relation or source code")
        return cls(
            n,
            _better=np.packbits(values == Relation.BETTER),
            _worse=np.packbits(values == Relation.WORSE),
            _dr=np.packbits(sources == Source.DR),
        )

    def values(self):
        """Unpacked lower-triangle relation codes, row-major."""
        better = np.unpackbits(self._better, count=self.size)
        worse = np.unpackbits(self._worse, count=self.size)
        return (better + 2 * worse).astype(np.uint8)

    def sources(self):
        return np.unpackbits(self._dr, count=self.size)

    # -- dense views ------------------------------------------------------

    def _tri_mask(self):
        return np.tri(self.N, k=-1, dtype=bool)

    def better_matrix(self):
        """Dense bool ``B[a, b]``: channel ``a + 1`` is strictly better than ``b + 1``."""
        mask = self._tri_mask()
        vals = self.values()
        B = np.zeros((self.N, self.N), dtype=bool)
        B[mask] = vals == Relation.BETTER
        W = np.zeros((self.N, self.N), dtype=bool)
        W[mask] = vals == Relation.WORSE
        return B | W.T

    def source_matrix(self):
        """Dense bool lower-triangle mask of entries whose source is DR."""
        D = np.zeros((self.N, self.N), dtype=bool)
        D[self._tri_mask()] = self.sources().astype(bool)
        return D

    @classmethod
    def from_better(cls, n, better, dr=None):
        """Build from a dense strict-better matrix; ``dr`` marks DR-sourced pairs.

        A pair ordered both ways is a cycle and raises :class:`ConsistencyError`.
        """
        better = np.asarray(better, dtype=bool)
        N = 1 << n
        both = better & better.T
        if both.any():
            a, b = np.argwhere(both)[0]
            raise ConsistencyError(
                f"channels {a + 1} and {b + 1} are each better than the other",
                pair=(int(a) + 1, int(b) + 1),
            )
        if np.diagonal(better).any():
            a = int(np.flatnonzero(np.diagonal(better))[0])
            raise ConsistencyError(f"channel {a + 1} is better than itself", pair=(a + 1, a + 1))
        mask = np.tri(N, k=-1, dtype=bool)
        values = np.zeros(_tri_size(N), dtype=np.uint8)
        values[better[mask]] = Relation.BETTER
        values[better.T[mask]] = Relation.WORSE
        if dr is None:
            sources = np.zeros_like(values)
        else:
            dr = np.asarray(dr, dtype=bool)
            sources = ((dr | dr.T)[mask] & (values != Relation.UNKNOWN)).astype(np.uint8)
        return cls.from_flat(n, values, sources)

    # -- element access ---------------------------------------------------

    def _check_pair(self, i, j):
        if not 1 <= j < i <= self.N:
            raise DomainError(f"need 1 <= j < i <= {self.N}, got i={i}, j={j}")

    def get(self, i, j):
        """``(Relation, Source)`` stored for the pair ``i > j``."""
        self._check_pair(i, j)
        k = _offset(i, j)
        byte, bit = divmod(k, 8)
        shift = 7 - bit
        better = (self._better[byte] >> shift) & 1
        worse = (self._worse[byte] >> shift) & 1
        dr = (self._dr[byte] >> shift) & 1
        return Relation(int(better) + 2 * int(worse)), Source(int(dr))

    def set(self, i, j, relation, source=Source.PO):
        self._check_pair(i, j)
        relation = Relation(relation)
        source = Source(source)
        k = _offset(i, j)
        byte, bit = divmod(k, 8)
        m = np.uint8(1 << (7 - bit))
        for plane, on in (
            (self._better, relation is Relation.BETTER),
            (self._worse, relation is Relation.WORSE),
            (self._dr, source is Source.DR and relation is not Relation.UNKNOWN),
        ):
            if on:
                plane[byte] |= m
            else:
                plane[byte] &= ~m

    def is_better(self, a, b):
        """True when channel ``a`` is recorded strictly better than ``b``."""
        if a == b:
            return False
        if a > b:
            return self.get(a, b)[0] is Relation.BETTER
        return self.get(b, a)[0] is Relation.WORSE

    # -- summaries --------------------------------------------------------

    def determined_count(self, source=None):
        vals = self.values()
        det = vals != Relation.UNKNOWN
        if source is not None:
            det &= self.sources() == Source(source)
        return int(det.sum())

    def density(self):
        return self.determined_count() / self.size if self.size else 0.0

    def copy(self):
        return RelationMatrix(
            self.n, _better=self._better.copy(), _worse=self._worse.copy(), _dr=self._dr.copy()
        )

    def __eq__(self, other):
        if not isinstance(other, RelationMatrix):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self._better, other._better)
            and np.array_equal(self._worse, other._worse)
            and np.array_equal(self._dr, other._dr)
        )

    def __repr__(self):
        return (
            f"RelationMatrix(n={self.n}, determined={self.determined_count()}/{self.size}, "
            f"dr={self.determined_count(Source.DR)})"
        )


def po_relation_matrix(n):
    """All relations the combined partial order decides at block length ``2**n``.

    Every ordered pair ends up as ``BETTER`` since a strictly dominating
    channel always has the larger index.
    """
    L = leq_matrix(n)
    mask = np.tri(1 << n, k=-1, dtype=bool)
    values = L[mask].astype(np.uint8)  # BETTER == 1
    return RelationMatrix.from_flat(n, values, np.zeros_like(values))


@dataclass
class DegreeVectors:
    """Per-channel counts; entry ``i - 1`` belongs to channel ``i``.

    ``s`` counts channels provably worse than the channel, ``f`` channels
    provably better.
    """

    s: np.ndarray
    f: np.ndarray

    @property
    def N(self):
        return len(self.s)


def counting_channels(R):
    B = R.better_matrix()
    return DegreeVectors(s=B.sum(axis=1).astype(np.int64), f=B.sum(axis=0).astype(np.int64))


def closure_of(better):
    """Transitive closure of a dense strict-better matrix by repeated squaring."""
    C = np.asarray(better, dtype=bool).copy()
    if C.shape[0] == 0:
        return C
    while True:
        Cf = C.astype(np.float32)
        nxt = C | ((Cf @ Cf) > 0)
        if np.array_equal(nxt, C):
            return C
        C = nxt


def transitive_closure(R):
    """Add every relation implied by transitivity; new entries are tagged DR.

    Raises :class:`ConsistencyError` if the strict-better digraph has a cycle.
    """
    B = R.better_matrix()
    C = closure_of(B)
    diag = np.flatnonzero(np.diagonal(C))
    if diag.size:
        a = int(diag[0])
        partners = np.flatnonzero(C[a] & C[:, a])
        b = int(partners[0]) if partners.size else a
        raise ConsistencyError(
            f"cycle through channels {a + 1} and {b + 1}", pair=(a + 1, b + 1)
        )
    dr = R.source_matrix()
    dr = dr | dr.T | (C & ~B)
    return RelationMatrix.from_better(R.n, C, dr=dr)


def is_acyclic(R):
    C = closure_of(R.better_matrix())
    return not np.diagonal(C).any()


__all__ = [
    "BitIndex",
    "DegreeVectors",
    "MAX_MATRIX_N",
    "Relation",
    "RelationMatrix",
    "Source",
    "closure_of",
    "combined_leq",
    "counting_channels",
    "is_acyclic",
    "leq_matrix",
    "po1_swap_cover",
    "po2_leq",
    "po_relation_matrix",
    "prefix_counts",
    "transitive_closure",
]
