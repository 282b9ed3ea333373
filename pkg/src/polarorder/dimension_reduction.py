"""Lift a short-length channel ranking into relations at the full length.

A channel index splits into an upper part (top ``n_u`` bits) and a lower part
(bottom ``n_l`` bits).  If the upper part of ``i`` is ranked strictly better
than that of ``j`` for the channel at hand, and the lower part of ``i`` is not
worse than that of ``j`` under the universal partial order, then ``i`` is
better than ``j``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError
from .partial_order import RelationMatrix, leq_matrix, transitive_closure


@dataclass
class DrConfig:
    n: int
    ranking: object  # ReliabilityRanking at n_u
    n_u: int = None
    apply_closure: bool = False

    def __post_init__(self):
        if self.n_u is None:
            self.n_u = self.n - 3
        if not 1 <= self.n_u < self.n:
            raise DomainError(f"need 1 <= n_u < n, got n_u={self.n_u}, n={self.n}")
        if self.ranking.n_u != self.n_u:
            raise DomainError(f"ranking is for n_u={self.ranking.n_u}, expected {self.n_u}")

    @property
    def n_l(self):
        return self.n - self.n_u


def upper_better(ranking, n_u):
    """Dense ``U[a, b]``: upper channel ``a + 1`` is ranked strictly above ``b + 1``
    while the partial order leaves the pair undecided.

    Raises :class:`ConsistencyError` when the ranking strictly contradicts the
    partial order on some pair.
    """
    metric = np.asarray(ranking.metric, dtype=float)
    L = leq_matrix(n_u)
    strict = metric[:, None] > metric[None, :]
    # L[b, a] with a != b: a is PO-degraded w.r.t. b, yet ranked above it
    bad = strict & L.T
    np.fill_diagonal(bad, False)
    if bad.any():
        a, b = (int(v) + 1 for v in np.argwhere(bad)[0])
        raise ConsistencyError(
            f"ranking puts upper channel {a} above {b}, but the partial order has {b} at least as good",
            pair=(a, b),
        )
    return strict & ~L & ~L.T


def dr_update(R, cfg):
    """Return a copy of ``R`` enriched with relations inferred by dimension reduction.

    Existing entries are kept as they are; new ones are tagged DR.  With
    ``cfg.apply_closure`` the result is transitively closed afterwards.
    """
    if R.n != cfg.n:
        raise DomainError(f"matrix is for n={R.n}, config for n={cfg.n}")
    U = upper_better(cfg.ranking, cfg.n_u)
    lower = leq_matrix(cfg.n_l)  # reflexive: equal lower parts count as "not worse"
    # composite (i_u-1)*N_l + (i_l-1) is exactly the Kronecker layout
    added = np.kron(U, lower).astype(bool)
    B = R.better_matrix()
    if np.any(added & B.T):
        a, b = (int(v) + 1 for v in np.argwhere(added & B.T)[0])
        raise ConsistencyError(f"inferred {a} better than {b} contradicts an existing entry", pair=(a, b))
    new = added & ~B
    dr = R.source_matrix()
    out = RelationMatrix.from_better(R.n, B | new, dr=dr | dr.T | new)
    if cfg.apply_closure:
        out = transitive_closure(out)
    return out
