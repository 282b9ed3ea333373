"""Channel-specific bit-channel quality and rankings.

Two evaluators are built in: the exact Bhattacharyya recursion for the
binary erasure channel and Gaussian-approximation LLR means for BPSK over
AWGN.  Rankings produced elsewhere (for instance by a degrading-merge
construction) enter through :func:`import_ranking`.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, FormatError
from .index import bit_matrix

RANKING_FORMAT_VERSION = 1
DEFAULT_FLOOR = 1e-300

# two-piece approximation of the LLR consistency function
_A, _B, _C = 0.4527, 0.86, 0.0218
_SPLIT = 10.0


@dataclass(frozen=True)
class ChannelModel:
    """``kind`` is ``"bec"`` (param = erasure probability) or ``"awgn"`` (param = SNR in dB)."""

    kind: str
    param: float

    def __post_init__(self):
        if self.kind == "bec":
            if not 0.0 <= self.param <= 1.0:
                raise DomainError(f"erasure probability must lie in [0, 1], got {self.param}")
        elif self.kind == "awgn":
            if not math.isfinite(self.param):
                raise DomainError(f"SNR must be finite, got {self.param}")
        else:
            raise DomainError(f"unknown channel kind {self.kind!r}")
        object.__setattr__(self, "param", float(self.param))

    @classmethod
    def bec(cls, epsilon):
        return cls("bec", epsilon)

    @classmethod
    def awgn(cls, snr_db):
        return cls("awgn", snr_db)

    @classmethod
    def parse(cls, spec):
        """Parse ``bec:<epsilon>`` or ``awgn:<snr_db>``."""
        kind, sep, value = str(spec).strip().partition(":")
        if not sep:
            raise FormatError(f"channel spec {spec!r} is not of the form kind:value")
        try:
            param = float(value)
        except ValueError:
            raise FormatError(f"bad channel parameter in {spec!r}") from None
        try:
            return cls(kind.lower(), param)
        except DomainError as exc:
            raise FormatError(str(exc)) from None

    def __str__(self):
        return f"{self.kind}:{self.param!r}"


# -- binary erasure channel ---------------------------------------------------


def bec_bhattacharyya(n, epsilon, check=True):
    """Exact Bhattacharyya parameters of all ``2**n`` bit channels of BEC(epsilon).

    Bits of ``i - 1`` are consumed from the most significant one: a 0 maps
    ``z -> 2z - z**2`` and a 1 maps ``z -> z**2``.
    """
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"erasure probability must lie in [0, 1], got {epsilon}")
    bits = bit_matrix(n).astype(bool)
    z = np.full(1 << n, float(epsilon))
    for k in range(n):
        sq = z * z
        up = 2.0 * z - sq
        if check and not (np.all(sq <= z) and np.all(z <= up)):
            raise AssertionError("Bhattacharyya bounds z^2 <= z <= 2z - z^2 violated")
        z = np.where(bits[:, k], sq, up)
    return z


def bec_z(i, n, epsilon):
    """Bhattacharyya parameter of the single channel ``i``."""
    z = float(epsilon)
    v = i - 1
    for k in range(n - 1, -1, -1):
        z = z * z if (v >> k) & 1 else 2.0 * z - z * z
    return z


# -- Gaussian approximation ---------------------------------------------------


def log_phi(x):
    """Natural log of the two-piece approximation of phi, for ``x > 0``."""
    x = np.asarray(x, dtype=float)
    small = x <= _SPLIT
    xs = np.where(small, x, 1.0)
    xl = np.where(small, _SPLIT + 1.0, x)
    low = -_A * xs**_B + _C
    high = 0.5 * np.log(np.pi / xl) - xl / 4.0 + np.log1p(-10.0 / (7.0 * xl))
    return np.where(small, low, high)


def phi(x):
    return np.exp(log_phi(x))


def phi_inv_log(log_y, rtol=1e-10, floor=DEFAULT_FLOOR):
    """Solve ``log_phi(x) = log_y`` by geometric bisection to relative tolerance ``rtol``."""
    target = np.atleast_1d(np.asarray(log_y, dtype=float))
    lo = np.full(target.shape, floor)
    hi = np.ones(target.shape)
    while True:
        grow = log_phi(hi) > target
        if not grow.any():
            break
        hi = np.where(grow, hi * 2.0, hi)
    # everything at or above phi(floor) maps to the floor
    at_floor = log_phi(lo) <= target
    while True:
        active = hi > lo * (1.0 + rtol)
        if not active.any():
            break
        mid = np.sqrt(lo) * np.sqrt(hi)
        above = log_phi(mid) > target
        lo = np.where(active & above, mid, lo)
        hi = np.where(active & ~above, mid, hi)
    out = np.where(at_floor, floor, np.sqrt(lo) * np.sqrt(hi))
    return out if np.ndim(log_y) else float(out[0])


def phi_inv(y, rtol=1e-10, floor=DEFAULT_FLOOR):
    return phi_inv_log(np.log(y), rtol=rtol, floor=floor)


def ga_check_update(m, floor=DEFAULT_FLOOR):
    """Mean LLR after the check-node (bit 0) combination of two copies of mean ``m``.

    Computed as ``phi^-1(1 - (1 - phi(m))**2)`` in the log domain.  The result
    is capped at ``m``: below the fixed point of the approximation (about
    0.0294) the raw formula would otherwise return a *larger* mean.
    """
    m = np.asarray(m, dtype=float)
    lp = log_phi(m)
    p = np.exp(lp)
    target = lp + np.log(2.0 - p)
    out = phi_inv_log(target, floor=floor)
    return np.maximum(np.minimum(out, m), floor)


def initial_mean(snr_db):
    """Channel LLR mean ``2 / sigma**2`` for unit-energy BPSK at Es/N0 = ``snr_db``."""
    return 4.0 * 10.0 ** (snr_db / 10.0)


def ga_awgn_means(n, snr_db, floor=DEFAULT_FLOOR):
    """Mean LLR of every bit channel of BPSK-AWGN under Gaussian approximation.

    Bits of ``i - 1`` are consumed from the most significant one; a 1 doubles
    the mean, a 0 applies :func:`ga_check_update`.
    """
    if not math.isfinite(snr_db):
        raise DomainError(f"SNR must be finite, got {snr_db}")
    bits = bit_matrix(n).astype(bool)
    m = np.full(1 << n, max(initial_mean(snr_db), floor))
    for k in range(n):
        m = np.where(bits[:, k], 2.0 * m, ga_check_update(m, floor=floor))
    return m


# -- rankings -----------------------------------------------------------------


@dataclass
class ReliabilityRanking:
    """Best-first ordering of the ``2**n_u`` channels at one block length.

    ``metric[i - 1]`` is the quality of channel ``i`` (higher is better);
    ``order`` lists 1-based channel indices best first, equal metrics placed
    lower index first.  ``ties`` holds adjacent pairs of ``order`` whose
    metrics are equal.
    """

    n_u: int
    model: ChannelModel
    metric: np.ndarray
    order: np.ndarray
    ties: list = field(default_factory=list)
    evaluator: str = "builtin"
    tie_policy: str = "lower-index-first"

    def better(self, a, b):
        """Strict comparison of channels ``a`` and ``b`` by metric."""
        return bool(self.metric[a - 1] > self.metric[b - 1])

    def position(self):
        """Rank of each channel (0 = best), indexed by channel - 1."""
        pos = np.empty(len(self.order), dtype=np.int64)
        pos[self.order - 1] = np.arange(len(self.order))
        return pos

    def __eq__(self, other):
        if not isinstance(other, ReliabilityRanking):
            return NotImplemented
        return (
            self.n_u == other.n_u
            and self.model == other.model
            and self.evaluator == other.evaluator
            and np.array_equal(self.metric, other.metric)
            and np.array_equal(self.order, other.order)
            and [tuple(t) for t in self.ties] == [tuple(t) for t in other.ties]
        )


def po_monotone(metric, n):
    """Raise each channel's metric to the best metric among channels it dominates.

    The result is non-decreasing along the universal partial order; entries
    that were already consistent are left untouched.
    """
    from .partial_order import leq_matrix

    metric = np.asarray(metric, dtype=float)
    L = leq_matrix(n)
    np.fill_diagonal(L, True)
    return np.max(np.where(L, metric[None, :], -np.inf), axis=1)


def channel_metric(model, n, monotone=True):
    """Higher-is-better quality of every channel: ``-Z`` for BEC, mean LLR for AWGN.

    Gaussian-approximation means violate the partial order for the weakest
    channels (the approximation of phi exceeds 1 near zero), so by default
    they are passed through :func:`po_monotone`, which turns the offending
    pairs into ties.
    """
    if model.kind == "bec":
        return -bec_bhattacharyya(n, model.param)
    m = ga_awgn_means(n, model.param)
    return po_monotone(m, n) if monotone else m


def _adjacent_ties(metric, order):
    m = metric[order - 1]
    idx = np.flatnonzero(m[:-1] == m[1:])
    return [(int(order[k]), int(order[k + 1])) for k in idx]


def ranking_from_metric(metric, n_u, model, evaluator="builtin"):
    metric = np.asarray(metric, dtype=float)
    if metric.shape != (1 << n_u,):
        raise DomainError(f"metric must have {1 << n_u} entries, got {metric.shape}")
    order = np.argsort(-metric, kind="stable") + 1
    return ReliabilityRanking(
        n_u=n_u,
        model=model,
        metric=metric,
        order=order.astype(np.int64),
        ties=_adjacent_ties(metric, order),
        evaluator=evaluator,
    )


def evaluator_id(model):
    return "bec-exact" if model.kind == "bec" else "ga-po"


def rank_channels(model, n_u):
    if n_u < 1:
        raise DomainError(f"n_u must be >= 1, got {n_u}")
    return ranking_from_metric(channel_metric(model, n_u), n_u, model, evaluator_id(model))


# -- JSON exchange format -----------------------------------------------------


def ranking_to_dict(ranking):
    return {
        "version": RANKING_FORMAT_VERSION,
        "n_u": int(ranking.n_u),
        "channel": str(ranking.model),
        "evaluator": ranking.evaluator,
        "metric": [float(v) for v in ranking.metric],
        "order": [int(v) for v in ranking.order],
        "ties": [[int(a), int(b)] for a, b in ranking.ties],
    }


def export_ranking(ranking, stream=None):
    """Write ``ranking`` as JSON to ``stream``; return the text when no stream is given."""
    text = json.dumps(ranking_to_dict(ranking), indent=1) + "\n"
    if stream is None:
        return text
    stream.write(text)
    return None


def ranking_from_dict(data):
    if not isinstance(data, dict):
        raise FormatError("ranking must be a JSON object")
    missing = {"version", "n_u", "channel", "evaluator", "metric", "order"} - data.keys()
    if missing:
        raise FormatError(f"ranking is missing fields: {sorted(missing)}")
    if data["version"] != RANKING_FORMAT_VERSION:
        raise FormatError(f"unsupported ranking version {data['version']!r}")
    n_u = data["n_u"]
    if not isinstance(n_u, int) or isinstance(n_u, bool) or not 1 <= n_u <= 30:
        raise FormatError(f"bad n_u {n_u!r}")
    size = 1 << n_u
    model = ChannelModel.parse(data["channel"])
    try:
        metric = np.asarray(data["metric"], dtype=float)
        order = np.asarray(data["order"])
    except (TypeError, ValueError):
        raise FormatError("metric/order must be numeric arrays") from None
    if metric.shape != (size,) or order.shape != (size,):
        raise FormatError(f"metric and order must both have {size} entries")
    if not np.issubdtype(order.dtype, np.integer):
        raise FormatError("order must contain integers")
    order = order.astype(np.int64)
    if not np.array_equal(np.sort(order), np.arange(1, size + 1)):
        raise FormatError("order is not a permutation of 1..N_u")
    if np.isnan(metric).any():
        raise FormatError("metric contains NaN")
    along = metric[order - 1]
    if np.any(along[1:] > along[:-1]):
        raise FormatError("metric increases along order")
    ties = _adjacent_ties(metric, order)
    if "ties" in data:
        given = [tuple(t) for t in data["ties"]]
        if given != ties:
            raise FormatError("ties do not match equal adjacent metrics")
    return ReliabilityRanking(
        n_u=n_u, model=model, metric=metric, order=order, ties=ties, evaluator=str(data["evaluator"])
    )


def import_ranking(stream):
    """Read and validate a ranking from a JSON text stream (or a ``str``)."""
    text = stream if isinstance(stream, str) else stream.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed ranking JSON: {exc}") from None
    return ranking_from_dict(data)
