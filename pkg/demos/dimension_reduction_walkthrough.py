"""
Dimension reduction on a worked pair
====================================

Split each index into an upper and a lower part, rank the short upper
code for the actual channel, and use that ranking to settle pairs the
partial order cannot.
"""

from polarorder import ChannelModel, DrConfig, Relation, dr_update, po_relation_matrix, rank_channels, split

n, n_u = 8, 5
i, j = 159, 108
print("upper/lower of 159:", split(i, n_u, n - n_u))
print("upper/lower of 108:", split(j, n_u, n - n_u))

po = po_relation_matrix(n)
print("partial order alone:", po.get(i, j)[0].name)

ranking = rank_channels(ChannelModel.awgn(1.0), n_u)
iu, _ = split(i, n_u, n - n_u)
ju, _ = split(j, n_u, n - n_u)
print(f"upper channel {iu} better than {ju} at 1 dB:", ranking.better(iu, ju))

R = dr_update(po, DrConfig(n=n, n_u=n_u, ranking=ranking))
rel, src = R.get(i, j)
print("after reduction:", rel.name, "from", src.name)
assert rel is Relation.BETTER

# the gain over the whole matrix
print(f"determined: {po.determined_count()} -> {R.determined_count()} of {R.size}")

# closing the relation transitively settles still more
C = dr_update(po, DrConfig(n=n, n_u=n_u, ranking=ranking, apply_closure=True))
print(f"with closure: {C.determined_count()}")
