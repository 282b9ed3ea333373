"""Split bit channels into information, frozen and undetermined sets."""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .dimension_reduction import DrConfig, dr_update
from .errors import DomainError
from .partial_order import counting_channels, po_relation_matrix, transitive_closure
from .reliability import channel_metric, rank_channels

PROVENANCE = ("PO", "DR", "resolved", "undetermined")


@dataclass
class Construction:
    """A partition of ``1..N`` into information set ``I``, frozen set ``F`` and ``U``.

    ``provenance[i - 1]`` says how channel ``i`` was placed: ``"PO"`` when the
    partial order alone sufficed, ``"DR"`` when dimension-reduction relations
    were needed, ``"resolved"`` when a full-length metric decided it and
    ``"undetermined"`` otherwise.  ``ties`` lists channels whose resolution
    was decided by the lower-index tie rule.
    """

    n: int
    K: int
    I: list
    F: list
    U: list
    provenance: list
    ties: list = field(default_factory=list)

    @property
    def N(self):
        return 1 << self.n

    @property
    def gamma(self):
        return len(self.U) / self.N

    @property
    def determined_fraction(self):
        return (len(self.I) + len(self.F)) / self.N

    def to_dict(self):
        return {
            "n": self.n,
            "N": self.N,
            "K": self.K,
            "I": list(self.I),
            "F": list(self.F),
            "U": list(self.U),
            "gamma": self.gamma,
            "provenance": list(self.provenance),
        }


def rate_to_k(N, rate):
    # N is a power of two, so N * rate is exact in binary floating point
    return math.floor(N * rate)


def _partition(d, K):
    N = d.N
    if not 0 <= K <= N:
        raise DomainError(f"K must lie in [0, {N}], got {K}")
    in_i = d.s >= N - K
    in_f = d.f >= K
    # cannot both hold unless the relation set is inconsistent
    assert not np.any(in_i & in_f)
    return in_i, in_f


def classify(d, K, po_degrees=None):
    """Apply the counting rule: better than ``N-K`` others -> I, worse than ``K`` others -> F.

    When ``po_degrees`` (degrees from the partial order alone) is given,
    channels that only reached their set thanks to extra relations are
    tagged ``"DR"``.
    """
    in_i, in_f = _partition(d, K)
    N = d.N
    if po_degrees is not None:
        po_i, po_f = _partition(po_degrees, K)
        po_known = po_i | po_f
    else:
        po_known = in_i | in_f
    prov = []
    for k in range(N):
        if not (in_i[k] or in_f[k]):
            prov.append("undetermined")
        else:
            prov.append("PO" if po_known[k] else "DR")
    idx = np.arange(1, N + 1)
    return Construction(
        n=int(math.log2(N)),
        K=K,
        I=idx[in_i].tolist(),
        F=idx[in_f].tolist(),
        U=idx[~(in_i | in_f)].tolist(),
        provenance=prov,
    )


def resolve(c, metric):
    """Fill ``I`` up to ``K`` channels with the best members of ``U`` by ``metric``.

    ``metric[i - 1]`` is a higher-is-better quality of channel ``i``.  Equal
    metrics are ordered lower index first.
    """
    metric = np.asarray(metric, dtype=float)
    U = np.asarray(c.U, dtype=np.int64)
    need = c.K - len(c.I)
    if need < 0 or need > len(U):
        raise DomainError(f"cannot resolve: need {need} channels from |U|={len(U)}")
    ranked = U[np.argsort(-metric[U - 1], kind="stable")]
    take, rest = ranked[:need], ranked[need:]
    ties = []
    if 0 < need < len(ranked) and metric[take[-1] - 1] == metric[rest[0] - 1]:
        boundary = metric[take[-1] - 1]
        ties = sorted(int(u) for u in U if metric[u - 1] == boundary)
    prov = list(c.provenance)
    for u in U:
        prov[u - 1] = "resolved"
    return Construction(
        n=c.n,
        K=c.K,
        I=sorted(c.I + take.tolist()),
        F=sorted(c.F + rest.tolist()),
        U=[],
        provenance=prov,
        ties=ties,
    )


@lru_cache(maxsize=8)
def _po_matrix(n):
    return po_relation_matrix(n)


def cached_po_matrix(n):
    """Channel-independent PO matrix, computed once per ``n`` per process."""
    return _po_matrix(n).copy()


def relation_matrix(n, model=None, use_dr=False, n_u=None, closure=False, ranking=None, po=None):
    """PO matrix for ``n``, optionally enriched by dimension reduction."""
    R = (po if po is not None else _po_matrix(n)).copy()
    if not use_dr:
        return transitive_closure(R) if closure else R
    if n_u is None:
        if n <= 3:
            return R
        n_u = n - 3
    if ranking is None:
        if model is None:
            raise DomainError("dimension reduction needs a channel model or a ranking")
        ranking = rank_channels(model, n_u)
    return dr_update(R, DrConfig(n=n, n_u=n_u, ranking=ranking, apply_closure=closure))


def construct(
    n,
    rate,
    model=None,
    use_dr=False,
    resolve_u=False,
    *,
    n_u=None,
    closure=False,
    ranking=None,
    full_metric=None,
    relations=None,
):
    """Run the whole pipeline and return a :class:`Construction`.

    ``ranking`` overrides the built-in evaluator for the upper block length;
    ``full_metric`` overrides the full-length metric used when resolving.
    ``relations`` skips the matrix stage entirely (used by the sweeps).
    """
    if not 0.0 < rate < 1.0:
        raise DomainError(f"rate must lie in (0, 1), got {rate}")
    N = 1 << n
    K = rate_to_k(N, rate)
    if relations is None:
        relations = relation_matrix(n, model, use_dr, n_u=n_u, closure=closure, ranking=ranking)
    d = counting_channels(relations)
    po_d = counting_channels(_po_matrix(n)) if use_dr else None
    c = classify(d, K, po_degrees=po_d)
    if resolve_u:
        if full_metric is None:
            if model is None:
                raise DomainError("resolution needs a channel model or an explicit metric")
            full_metric = channel_metric(model, n)
        c = resolve(c, full_metric)
    return c


def gamma_sweep_rate(n, model, use_dr, rates, *, n_u=None, closure=False):
    """``[(R, gamma), ...]`` with the relation matrix built once."""
    for r in rates:
        if not 0.0 < r < 1.0:
            raise DomainError(f"rate must lie in (0, 1), got {r}")
    R = relation_matrix(n, model, use_dr, n_u=n_u, closure=closure)
    d = counting_channels(R)
    N = 1 << n
    return [(r, classify(d, rate_to_k(N, r)).gamma) for r in rates]


def gamma_sweep_n(ns, rate, model, use_dr, *, closure=False):
    """``[(n, gamma), ...]`` for a fixed rate, default ``n_u = n - 3``."""
    ns = list(ns)
    if not ns:
        raise DomainError("need at least one block length")
    out = []
    for n in ns:
        c = construct(n, rate, model, use_dr, closure=closure)
        out.append((n, c.gamma))
    return out
