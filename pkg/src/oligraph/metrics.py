"""Robustness and concentration metrics over analysis graphs.

All metrics run on the simple graph (edge multiplicity ignored) unless a
weighted flag says otherwise, and all are pure functions of an immutable
graph, so they are safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DataError
from .graph import CLIENT, INTERMEDIARY, AnalysisGraph, CountrySlice

NODE_CLASSES = ("clients", "intermediaries", "all")
_CLASS_CODES = {"clients": CLIENT, "intermediaries": INTERMEDIARY}


def _class_mask(graph: AnalysisGraph, node_class: str):
    if node_class not in NODE_CLASSES:
        raise DataError(
            f"unknown node class {node_class!r}; expected one of {NODE_CLASSES}"
        )
    if node_class == "all":
        return np.ones(graph.n_nodes, dtype=bool)
    return graph.kinds == _CLASS_CODES[node_class]


@dataclass
class DegreeDistribution:
    node_class: str
    histogram: dict
    mean: float | None

    @property
    def n_nodes(self) -> int:
        return sum(self.histogram.values())

    def to_rows(self):
        return [(k, self.histogram[k]) for k in sorted(self.histogram)]

    def to_dict(self):
        return {
            "node_class": self.node_class,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "mean": self.mean,
            "n_nodes": self.n_nodes,
        }


def degree_distribution(graph: AnalysisGraph, node_class="all", weighted=False) -> DegreeDistribution:
    """Exact degree histogram for a node class; mean is None when the class
    is empty. With weighted=True, degree sums edge multiplicities."""
    mask = _class_mask(graph, node_class)
    if weighted:
        degs = np.zeros(graph.n_nodes, dtype=np.int64)
        np.add.at(
            degs,
            np.repeat(np.arange(graph.n_nodes), np.diff(graph.indptr)),
            graph.mult,
        )
        degs = degs[mask]
    else:
        degs = graph.degrees()[mask]
    if len(degs) == 0:
        return DegreeDistribution(node_class=node_class, histogram={}, mean=None)
    values, counts = np.unique(degs, return_counts=True)
    hist = {int(v): int(c) for v, c in zip(values, counts)}
    return DegreeDistribution(
        node_class=node_class, histogram=hist, mean=float(degs.mean())
    )


def client_intermediary_ratio(slice_: CountrySlice) -> float:
    """|B| / |I| for a country slice; degenerate (no intermediaries) is an error."""
    if slice_.n_intermediaries == 0:
        raise DataError(
            f"slice {slice_.country} has no intermediaries; ratio undefined"
        )
    return slice_.n_clients / slice_.n_intermediaries


def count_triangles(graph: AnalysisGraph) -> int:
    """Closed 3-cycles in the simple graph (always 0 in bipartite mode)."""
    return kernels.triangle_count(graph.indptr, graph.indices)


def triplet_count(graph: AnalysisGraph) -> int:
    """Unordered connected triples, open or closed: sum of C(deg, 2)."""
    d = graph.degrees()
    return int((d * (d - 1) // 2).sum())


def clustering_coefficient(graph: AnalysisGraph) -> float:
    """Global transitivity: 3 * triangles / triplets; 0.0 with no triplets."""
    triplets = triplet_count(graph)
    if triplets == 0:
        return 0.0
    return 3.0 * count_triangles(graph) / triplets


def redundancy_raw(graph: AnalysisGraph) -> int:
    """Ordered connected pairs: sum of |a|(|a|-1) over components."""
    sizes = graph.component_sizes()
    return int((sizes * (sizes - 1)).sum())


def redundancy(graph_now: AnalysisGraph, graph_baseline: AnalysisGraph) -> float:
    """Connected-pair count of graph_now normalized by the baseline's."""
    base = redundancy_raw(graph_baseline)
    if base == 0:
        raise DataError("baseline graph has no connected pairs; redundancy undefined")
    return redundancy_raw(graph_now) / base


def betweenness(graph: AnalysisGraph, node_class="all", n_sources=None, seed=0):
    """Unnormalized shortest-path betweenness per node id.

    Exact by default. n_sources switches to seeded pivot sampling (scores
    scaled by n / n_sources); exact computation remains the reference and is
    what the oracle tests pin down.
    """
    mask = _class_mask(graph, node_class)
    n = graph.n_nodes
    if n == 0:
        return {}
    if n_sources is not None and n_sources < n:
        rng = np.random.Generator(np.random.PCG64(seed))
        sources = np.sort(rng.choice(n, size=n_sources, replace=False)).astype(np.int64)
        scores = kernels.betweenness_sources(graph.indptr, graph.indices, sources)
        scores *= n / float(n_sources)
    else:
        scores = kernels.betweenness(graph.indptr, graph.indices)
    return {
        int(graph.ids[p]): float(scores[p]) for p in np.flatnonzero(mask)
    }


@dataclass
class DiversityReport:
    """Jurisdiction concentration of a slice's intermediaries.

    hhi is the sum of squared shares; di_effective_count its inverse (the
    effective number of jurisdictions); di_normalized divides that by the
    number of observed categories K so it lies in (0, 1].
    """

    country: str
    shares: dict
    hhi: float
    di_effective_count: float
    di_normalized: float
    category_count: int
    unknown_count: int
    multi_jurisdiction_count: int | None = None
    flags: list = field(default_factory=list)

    def to_dict(self):
        return {
            "country": self.country,
            "shares": dict(sorted(self.shares.items())),
            "hhi": self.hhi,
            "di_effective_count": self.di_effective_count,
            "di_normalized": self.di_normalized,
            "category_count": self.category_count,
            "unknown_count": self.unknown_count,
            "multi_jurisdiction_count": self.multi_jurisdiction_count,
            "flags": list(self.flags),
        }


UNKNOWN_JURISDICTION = "UNKNOWN"


def diversity_index(slice_: CountrySlice, location_of) -> DiversityReport:
    """Inverse-HHI diversity of intermediary jurisdictions.

    location_of maps an intermediary node id to a jurisdiction string (or a
    dict doing the same); missing / empty values fall into the UNKNOWN
    bucket, which counts as a category of its own.
    """
    if slice_.n_intermediaries == 0:
        raise DataError(f"slice {slice_.country} has no intermediaries")
    lookup = location_of.get if hasattr(location_of, "get") else location_of
    counts = {}
    unknown = 0
    for node_id in slice_.intermediaries.tolist():
        juris = lookup(node_id)
        if not juris:
            juris = UNKNOWN_JURISDICTION
            unknown += 1
        counts[juris] = counts.get(juris, 0) + 1
    total = slice_.n_intermediaries
    shares = {j: c / total for j, c in counts.items()}
    hhi = float(sum(s * s for s in shares.values()))
    effective = 1.0 / hhi
    k = len(counts)
    flags = []
    if k == 1:
        flags.append("single jurisdiction: K = 1, diversity degenerate")
    return DiversityReport(
        country=slice_.country,
        shares=shares,
        hhi=hhi,
        di_effective_count=effective,
        di_normalized=effective / k,
        category_count=k,
        unknown_count=unknown,
        flags=flags,
    )


def jurisdictions_from_corpus(corpus, slice_: CountrySlice):
    """Default intermediary -> jurisdiction mapping: first country code on
    the node record. Returns (mapping, multi_jurisdiction_count)."""
    mapping = {}
    multi = 0
    for node_id in slice_.intermediaries.tolist():
        codes = corpus.countries[corpus.position_of(node_id)]
        if len(codes) > 1:
            multi += 1
        mapping[node_id] = codes[0] if codes else UNKNOWN_JURISDICTION
    return mapping, multi


def corpus_diversity_index(corpus, slice_: CountrySlice) -> DiversityReport:
    mapping, multi = jurisdictions_from_corpus(corpus, slice_)
    report = diversity_index(slice_, mapping)
    report.multi_jurisdiction_count = multi
    return report


def snapshot_metrics(graph: AnalysisGraph):
    """The four knockout metrics of one graph state, as plain values."""
    return {
        "size": graph.n_nodes,
        "triangles": count_triangles(graph),
        "clustering": clustering_coefficient(graph),
        "redundancy_raw": redundancy_raw(graph),
    }
