"""Offshore client-intermediary network analytics.

Ingests ICIJ Offshore Leaks style CSV tables, builds country-level
client-entity-intermediary graphs, fits intermediary degree distributions,
runs targeted knockout experiments, and extracts sanctioned-actor subgraphs.
"""

from .attack import AttackStrategy, KnockoutTrajectory, random_baseline, run_knockout, strategy_ratio
from .errors import DataError, FitError, GraphError, IngestError, OligraphError
from .graph import (
    AnalysisGraph,
    CountrySlice,
    build_country_slice,
    connected_components,
    induce_bipartite,
    remove_nodes,
)
from .ingest import Corpus, LinkClassMap, classify_links, load_corpus
from .metrics import (
    DegreeDistribution,
    DiversityReport,
    betweenness,
    client_intermediary_ratio,
    clustering_coefficient,
    count_triangles,
    degree_distribution,
    diversity_index,
    redundancy,
)
from .powerlaw import PowerLawFit, bootstrap_gof, fit_power_law
from .sanctions import build_ego_subgraph, match_names, stitch_components, tabulate_intermediaries
from .synth import SynthConfig, generate

__version__ = "0.1.0"

__all__ = [
    "AnalysisGraph",
    "AttackStrategy",
    "Corpus",
    "CountrySlice",
    "DataError",
    "DegreeDistribution",
    "DiversityReport",
    "FitError",
    "GraphError",
    "IngestError",
    "KnockoutTrajectory",
    "LinkClassMap",
    "OligraphError",
    "PowerLawFit",
    "SynthConfig",
    "betweenness",
    "bootstrap_gof",
    "build_country_slice",
    "build_ego_subgraph",
    "classify_links",
    "client_intermediary_ratio",
    "clustering_coefficient",
    "connected_components",
    "count_triangles",
    "degree_distribution",
    "diversity_index",
    "fit_power_law",
    "generate",
    "induce_bipartite",
    "load_corpus",
    "match_names",
    "random_baseline",
    "redundancy",
    "remove_nodes",
    "run_knockout",
    "stitch_components",
    "strategy_ratio",
    "tabulate_intermediaries",
    "__version__",
]
