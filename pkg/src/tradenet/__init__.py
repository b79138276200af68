"""Brokerage, backbone and null-model analysis of directed weighted trade networks."""

__version__ = "0.1.0"

from .backbone import BackboneResult, disparity_filter, edge_alpha
from .brokerage import ROLES, BrokerageCensus, brokerage_census, degree_role_table, role_totals
from .coreperiphery import CoreAssignment, rich_core
from .descriptives import (
    DescriptiveReport,
    EiScores,
    categorical_assortativity,
    degree_centralisation,
    density,
    describe,
    dyad_census,
    ei_index,
    reciprocity,
)
from .graph import (
    Partition,
    TradeGraph,
    degree,
    drop_isolates,
    load_edge_list,
    load_partition,
    read_edge_csv,
    read_partition_csv,
    strength,
)
from .nullmodels import RewireConfig, degree_preserving_sample
from .significance import ZScoreReport, classify, role_significance_profile, z_score

__all__ = [
    "ROLES", "BackboneResult", "BrokerageCensus", "CoreAssignment", "DescriptiveReport", "EiScores",
    "Partition", "RewireConfig", "TradeGraph", "ZScoreReport", "brokerage_census", "categorical_assortativity",
    "classify", "degree", "degree_centralisation", "degree_preserving_sample", "degree_role_table", "density",
    "describe", "disparity_filter", "drop_isolates", "dyad_census", "edge_alpha", "ei_index", "load_edge_list",
    "load_partition", "read_edge_csv", "read_partition_csv", "reciprocity", "rich_core",
    "role_significance_profile", "role_totals", "strength", "z_score",
]
