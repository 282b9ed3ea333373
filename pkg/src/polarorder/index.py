"""Index arithmetic for bit channels.

Bit channels are numbered ``1..N`` with ``N = 2**n``.  The expansion of a
channel ``i`` is the ``n``-bit binary string of ``i - 1`` written most
significant bit first, so ``bits[0]`` is position ``n`` and ``bits[-1]`` is
position 1.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MAX_N = 30


def _check_n(n):
    if not isinstance(n, (int, np.integer)) or n < 1 or n > MAX_N:
        raise DomainError(f"n must be an integer in [1, {MAX_N}], got {n!r}")


def to_bits(i, n):
    """Return the n-bit expansion of ``i - 1``, most significant bit first.

    >>> to_bits(23, 5)
    (1, 0, 1, 1, 0)
    """
    _check_n(n)
    if not 1 <= i <= (1 << n):
        raise DomainError(f"index {i} outside [1, {1 << n}]")
    v = i - 1
    return tuple((v >> k) & 1 for k in range(n - 1, -1, -1))


def from_bits(bits):
    """Inverse of :func:`to_bits`: the 1-based index whose expansion is ``bits``."""
    v = 0
    for b in bits:
        if b not in (0, 1):
            raise DomainError(f"not a bit: {b!r}")
        v = (v << 1) | b
    return v + 1


def hamming_weight(i):
    """Number of ones in the expansion of ``i - 1``."""
    return bin(i - 1).count("1")


def split(i, n_u, n_l):
    """Split channel ``i`` into its upper (top ``n_u`` bits) and lower parts.

    Both parts are returned as 1-based indices at their own block lengths.
    """
    if n_u < 1 or n_l < 0:
        raise DomainError(f"invalid partition n_u={n_u}, n_l={n_l}")
    n = n_u + n_l
    _check_n(n)
    if not 1 <= i <= (1 << n):
        raise DomainError(f"index {i} outside [1, {1 << n}]")
    v = i - 1
    return (v >> n_l) + 1, (v & ((1 << n_l) - 1)) + 1


def join(i_u, i_l, n_l):
    """Compose an upper and a lower index: ``(i_u - 1) * 2**n_l + i_l``."""
    if n_l < 0:
        raise DomainError(f"n_l must be non-negative, got {n_l}")
    if i_u < 1:
        raise DomainError(f"upper index must be >= 1, got {i_u}")
    if not 1 <= i_l <= (1 << n_l):
        raise DomainError(f"lower index {i_l} outside [1, {1 << n_l}]")
    return (i_u - 1) * (1 << n_l) + i_l


@dataclass(frozen=True)
class BitIndex:
    """A bit-channel index together with its block-length exponent."""

    i: int
    n: int

    def __post_init__(self):
        _check_n(self.n)
        if not 1 <= self.i <= (1 << self.n):
            raise DomainError(f"index {self.i} outside [1, {1 << self.n}]")

    @property
    def bits(self):
        return to_bits(self.i, self.n)

    @property
    def weight(self):
        return hamming_weight(self.i)

    def bit(self, position):
        """Bit at ``position`` (1 = least significant, n = most significant)."""
        if not 1 <= position <= self.n:
            raise DomainError(f"position {position} outside [1, {self.n}]")
        return ((self.i - 1) >> (position - 1)) & 1


def bit_matrix(n):
    """``(N, n)`` uint8 array; row ``i - 1`` holds the expansion of ``i - 1``, MSB first."""
    _check_n(n)
    v = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((v[:, None] >> shifts[None, :]) & 1).astype(np.uint8)
