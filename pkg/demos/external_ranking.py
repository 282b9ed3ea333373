"""
Bringing your own ranking
=========================

Any evaluator can feed dimension reduction: write the ranking for the
upper code to JSON, read it back, and construct with it.
"""

import io

from polarorder import ChannelModel, construct, export_ranking, import_ranking, rank_channels

text = export_ranking(rank_channels(ChannelModel.awgn(1.0), 7))
print(text[:120], "...")

ranking = import_ranking(io.StringIO(text))
c = construct(10, 0.5, use_dr=True, n_u=7, ranking=ranking)
print(f"determined fraction with an imported ranking: {c.determined_fraction:.4f}")
