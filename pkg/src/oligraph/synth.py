"""Seeded synthetic bipartite network generator with preferential attachment.

Clients draw a degree of 1 + Poisson(mean - 1) and attach to distinct
intermediaries with probability proportional to (current degree + 1) raised
to the attachment bias; bias 0 is uniform choice, bias 1 linear preferential
attachment, bias > 1 winner-take-all. The RNG is numpy's PCG64 seeded with
the config seed, and clients are processed in id order, so a seed fully
determines the graph on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .graph import BIPARTITE, CLIENT, ENTITY, INTERMEDIARY, TRIPARTITE, AnalysisGraph


@dataclass(frozen=True)
class SynthConfig:
    n_clients: int
    n_intermediaries: int
    mean_client_degree: float = 1.036
    attachment_bias: float = 1.0
    seed: int = 0
    entity_layer: bool = False

    def validate(self):
        if self.n_clients < 1:
            raise DataError("n_clients must be >= 1")
        if self.n_intermediaries < 1:
            raise DataError("n_intermediaries must be >= 1")
        if self.mean_client_degree < 1:
            raise DataError("mean_client_degree must be >= 1")
        if self.mean_client_degree > self.n_intermediaries:
            raise DataError(
                f"mean client degree {self.mean_client_degree} exceeds the "
                f"{self.n_intermediaries} available intermediaries"
            )
        if self.attachment_bias < 0:
            raise DataError("attachment_bias must be >= 0")

    def to_dict(self):
        return {
            "n_clients": self.n_clients,
            "n_intermediaries": self.n_intermediaries,
            "mean_client_degree": self.mean_client_degree,
            "attachment_bias": self.attachment_bias,
            "seed": self.seed,
            "entity_layer": self.entity_layer,
        }


def generate(config: SynthConfig) -> AnalysisGraph:
    """Generate the configured graph.

    Node ids: clients [0, n_clients), intermediaries [n_clients,
    n_clients + n_intermediaries), and with entity_layer one entity per
    client-intermediary tie after that (in edge creation order). The
    entity-layer graph is tripartite and includes the induced
    client-intermediary edges.
    """
    config.validate()
    nc, ni = config.n_clients, config.n_intermediaries
    rng = np.random.Generator(np.random.PCG64(config.seed))
    degrees = 1 + rng.poisson(config.mean_client_degree - 1.0, size=nc)
    np.minimum(degrees, ni, out=degrees)

    inter_deg = np.zeros(ni, dtype=np.float64)
    pairs = []
    for b in range(nc):
        chosen = []
        for _ in range(int(degrees[b])):
            weights = (inter_deg + 1.0) ** config.attachment_bias
            if chosen:
                weights[chosen] = 0.0
            cdf = np.cumsum(weights)
            u = rng.uniform() * cdf[-1]
            i = int(np.searchsorted(cdf, u, side="right"))
            if i >= ni:
                i = ni - 1
            chosen.append(i)
            inter_deg[i] += 1.0
        pairs.extend((b, i) for i in sorted(chosen))

    client_nodes = [(b, CLIENT) for b in range(nc)]
    inter_nodes = [(nc + i, INTERMEDIARY) for i in range(ni)]
    if not config.entity_layer:
        edges = [(b, nc + i, 1) for b, i in pairs]
        return AnalysisGraph.build(client_nodes + inter_nodes, edges, BIPARTITE)

    base = nc + ni
    entity_nodes = [(base + k, ENTITY) for k in range(len(pairs))]
    edges = []
    for k, (b, i) in enumerate(pairs):
        e = base + k
        edges.append((b, e, 1))
        edges.append((nc + i, e, 1))
        edges.append((b, nc + i, 1))
    return AnalysisGraph.build(
        client_nodes + inter_nodes + entity_nodes, edges, TRIPARTITE
    )
