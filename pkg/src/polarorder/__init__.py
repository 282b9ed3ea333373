"""Polar code construction with channel-independent partial orders and dimension reduction."""

from .construction import (
    Construction,
    classify,
    construct,
    gamma_sweep_n,
    gamma_sweep_rate,
    resolve,
)
from .dimension_reduction import DrConfig, dr_update
from .errors import ConsistencyError, DomainError, FormatError
from .index import BitIndex, join, split, to_bits
from .partial_order import (
    DegreeVectors,
    Relation,
    RelationMatrix,
    Source,
    combined_leq,
    counting_channels,
    po1_swap_cover,
    po2_leq,
    po_relation_matrix,
    transitive_closure,
)
from .reliability import (
    ChannelModel,
    ReliabilityRanking,
    bec_bhattacharyya,
    export_ranking,
    ga_awgn_means,
    import_ranking,
    rank_channels,
)

__version__ = "0.1.0"
