import numpy as np
import pytest

from polarorder.dimension_reduction import DrConfig, dr_update, upper_better
from polarorder.errors import ConsistencyError, DomainError
from polarorder.index import BitIndex, join, split
from polarorder.partial_order import (
    Relation,
    Source,
    combined_leq,
    is_acyclic,
    leq_matrix,
    po_relation_matrix,
)
from polarorder.reliability import ChannelModel, bec_bhattacharyya, rank_channels, ranking_from_metric

EPS_GRID = [round(0.1 * k, 1) for k in range(1, 10)]


def _ranking_with(n_u, better, worse):
    """A PO-consistent ranking that puts ``better`` strictly above ``worse``."""
    base = rank_channels(ChannelModel.bec(0.5), n_u).metric.copy()
    hi = max(base[better - 1], base[worse - 1])
    lo = min(base[better - 1], base[worse - 1])
    base[better - 1], base[worse - 1] = hi, lo
    return ranking_from_metric(base, n_u, ChannelModel.bec(0.5), evaluator="test")


def test_incomparable_pair_becomes_dr_determined():
    i, j = 159, 108
    assert split(i, 5, 3) == (20, 7) and split(j, 5, 3) == (14, 4)
    assert combined_leq(BitIndex(4, 3), BitIndex(7, 3))
    assert not combined_leq(BitIndex(14, 5), BitIndex(20, 5))
    assert not combined_leq(BitIndex(20, 5), BitIndex(14, 5))
    R = po_relation_matrix(8)
    assert R.get(i, j)[0] is Relation.UNKNOWN
    out = dr_update(R, DrConfig(n=8, n_u=5, ranking=_ranking_with(5, 20, 14)))
    assert out.get(i, j) == (Relation.BETTER, Source.DR)
    # the other direction of the upper ranking gives the reverse relation, stored as WORSE
    out = dr_update(R, DrConfig(n=8, n_u=5, ranking=_ranking_with(5, 14, 20)))
    assert out.get(join(20, 4, 3), join(14, 7, 3)) == (Relation.WORSE, Source.DR)


def test_equal_lower_parts_are_enough():
    n, n_u = 6, 4
    rk = rank_channels(ChannelModel.awgn(1.0), n_u)
    U = upper_better(rk, n_u)
    iu, ju = (int(v) + 1 for v in np.argwhere(U)[0])
    out = dr_update(po_relation_matrix(n), DrConfig(n=n, n_u=n_u, ranking=rk))
    for il in range(1, 5):
        assert out.is_better(join(iu, il, 2), join(ju, il, 2))


def test_ties_add_nothing():
    flat = ranking_from_metric(np.zeros(16), 4, ChannelModel.bec(0.5))
    R = po_relation_matrix(7)
    assert dr_update(R, DrConfig(n=7, n_u=4, ranking=flat)) == R


def test_contradiction_is_an_error():
    metric = np.arange(16, dtype=float)[::-1].copy()  # channel 1 best: contradicts the order
    bad = ranking_from_metric(metric, 4, ChannelModel.bec(0.5), evaluator="broken")
    with pytest.raises(ConsistencyError) as exc:
        dr_update(po_relation_matrix(6), DrConfig(n=6, n_u=4, ranking=bad))
    a, b = exc.value.pair
    assert combined_leq(BitIndex(a, 4), BitIndex(b, 4))


def test_config_validation():
    rk = rank_channels(ChannelModel.bec(0.5), 4)
    assert DrConfig(n=7, ranking=rk).n_u == 4
    with pytest.raises(DomainError):
        DrConfig(n=4, n_u=4, ranking=rk)
    with pytest.raises(DomainError):
        DrConfig(n=8, n_u=5, ranking=rk)


@pytest.mark.parametrize("n", range(4, 11))
def test_dr_sound_for_bec(n):
    n_u = n - 3
    R = po_relation_matrix(n)
    for eps in EPS_GRID:
        out = dr_update(R, DrConfig(n=n, n_u=n_u, ranking=rank_channels(ChannelModel.bec(eps), n_u)))
        z = bec_bhattacharyya(n, eps)
        B = out.better_matrix()
        assert not np.any(B & (z[:, None] > z[None, :]))


@pytest.mark.parametrize("n", range(4, 9))
@pytest.mark.parametrize("model", [ChannelModel.awgn(1.0), ChannelModel.bec(0.3)])
def test_growth_sources_and_acyclicity(n, model):
    R = po_relation_matrix(n)
    n_u = n - 3
    out = dr_update(R, DrConfig(n=n, n_u=n_u, ranking=rank_channels(model, n_u)))
    assert out.determined_count() >= R.determined_count()
    assert out.determined_count(Source.PO) == R.determined_count()
    po_entries = R.values() != Relation.UNKNOWN
    assert np.array_equal(out.values()[po_entries], R.values()[po_entries])
    assert is_acyclic(out)


@pytest.mark.parametrize("n, n_u", [(6, 3), (7, 4), (8, 5)])
def test_po_comparable_upper_pairs_are_redundant(n, n_u):
    n_l = n - n_u
    Lu = leq_matrix(n_u)
    np.fill_diagonal(Lu, False)
    Ll = leq_matrix(n_l)
    composite = np.kron(Lu, Ll).astype(bool)
    L = leq_matrix(n)
    assert not np.any(composite & ~L)


@pytest.mark.parametrize("n", [5, 7])
def test_closure_option(n):
    rk = rank_channels(ChannelModel.awgn(1.0), n - 3)
    plain = dr_update(po_relation_matrix(n), DrConfig(n=n, ranking=rk))
    closed = dr_update(po_relation_matrix(n), DrConfig(n=n, ranking=rk, apply_closure=True))
    assert closed.determined_count() >= plain.determined_count()
    assert np.all(closed.better_matrix() >= plain.better_matrix())


def test_n_mismatch():
    rk = rank_channels(ChannelModel.bec(0.5), 3)
    with pytest.raises(DomainError):
        dr_update(po_relation_matrix(5), DrConfig(n=6, ranking=rk))
