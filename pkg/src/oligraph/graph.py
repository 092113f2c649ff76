"""Immutable typed multigraph with bipartite and tripartite-induced views.

Kinds are client / entity / intermediary. A bipartite graph joins clients to
intermediaries only; a tripartite graph holds client-entity and
intermediary-entity ties plus the induced client-intermediary edges (a
client and an intermediary are joined iff they share an entity, with edge
multiplicity equal to the number of shared entities). Parallel input edges
collapse to one simple edge with a retained multiplicity count; self-loops
are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DataError, GraphError
from .ingest import Kind, LinkClass

CLIENT, ENTITY, INTERMEDIARY = 0, 1, 2
KIND_NAMES = ("client", "entity", "intermediary")
KIND_CODES = {name: code for code, name in enumerate(KIND_NAMES)}

BIPARTITE = "bipartite"
TRIPARTITE = "tripartite"
MODES = (BIPARTITE, TRIPARTITE)

_ALLOWED_KINDS = {
    BIPARTITE: frozenset({CLIENT, INTERMEDIARY}),
    TRIPARTITE: frozenset({CLIENT, ENTITY, INTERMEDIARY}),
}
_ALLOWED_PAIRS = {
    BIPARTITE: frozenset({(CLIENT, INTERMEDIARY)}),
    TRIPARTITE: frozenset({(CLIENT, ENTITY), (ENTITY, INTERMEDIARY), (CLIENT, INTERMEDIARY)}),
}


def _kind_code(kind):
    if isinstance(kind, str):
        try:
            return KIND_CODES[kind]
        except KeyError:
            raise GraphError(f"unknown node kind {kind!r}") from None
    code = int(kind)
    if code not in (CLIENT, ENTITY, INTERMEDIARY):
        raise GraphError(f"unknown node kind code {kind!r}")
    return code


class AnalysisGraph:
    """Simple undirected graph over externally-identified nodes.

    Nodes are stored sorted by id; adjacency is CSR with neighbor lists in
    ascending order, so every iteration order (and therefore every output)
    is reproducible. Instances are immutable: mutating operations return a
    new graph.
    """

    __slots__ = ("mode", "ids", "kinds", "indptr", "indices", "mult")

    def __init__(self, mode, ids, kinds, indptr, indices, mult):
        self.mode = mode
        self.ids = ids
        self.kinds = kinds
        self.indptr = indptr
        self.indices = indices
        self.mult = mult
        for arr in (ids, kinds, indptr, indices, mult):
            arr.setflags(write=False)

    @classmethod
    def build(cls, nodes, edges, mode) -> "AnalysisGraph":
        """Construct from (id, kind) pairs and (u, v, multiplicity) edges.

        Collapses parallel edges, validates the mode's kind and edge-pair
        constraints, and rejects self-loops, duplicate node ids, and edges
        naming unknown nodes.
        """
        if mode not in MODES:
            raise GraphError(f"unknown graph mode {mode!r}; expected one of {MODES}")
        node_list = [(int(i), _kind_code(k)) for i, k in nodes]
        ids = np.asarray([i for i, _ in node_list], dtype=np.int64)
        kinds = np.asarray([k for _, k in node_list], dtype=np.int8)
        order = np.argsort(ids, kind="stable")
        ids = ids[order]
        kinds = kinds[order]
        if len(ids) > 1 and (np.diff(ids) == 0).any():
            dup = int(ids[np.flatnonzero(np.diff(ids) == 0)[0]])
            raise GraphError(f"duplicate node id {dup}")
        bad_kinds = set(np.unique(kinds).tolist()) - _ALLOWED_KINDS[mode]
        if bad_kinds:
            names = ", ".join(KIND_NAMES[k] for k in sorted(bad_kinds))
            raise GraphError(f"kind(s) {names} not allowed in {mode} mode")

        n = len(ids)
        edge_list = list(edges)
        if edge_list:
            if n == 0:
                raise GraphError("edges given but node set is empty")
            eu = np.asarray([e[0] for e in edge_list], dtype=np.int64)
            ev = np.asarray([e[1] for e in edge_list], dtype=np.int64)
            em = np.asarray([e[2] for e in edge_list], dtype=np.int64)
            pu = np.minimum(np.searchsorted(ids, eu), n - 1)
            pv = np.minimum(np.searchsorted(ids, ev), n - 1)
            u_ok = ids[pu] == eu
            v_ok = ids[pv] == ev
            if not (u_ok & v_ok).all():
                idx = int(np.flatnonzero(~(u_ok & v_ok))[0])
                missing = int(eu[idx]) if not u_ok[idx] else int(ev[idx])
                raise GraphError(f"edge references unknown node id {missing}")
            if (pu == pv).any():
                loop = int(ids[pu[pu == pv][0]])
                raise GraphError(f"self-loop on node {loop}")
            if (em <= 0).any():
                raise GraphError("edge multiplicity must be positive")
            lo = np.minimum(pu, pv)
            hi = np.maximum(pu, pv)
            key = lo * n + hi
            uniq, inverse = np.unique(key, return_inverse=True)
            mult_u = np.zeros(len(uniq), dtype=np.int64)
            np.add.at(mult_u, inverse, em)
            lo = (uniq // n).astype(np.int64)
            hi = (uniq % n).astype(np.int64)
            pair_kinds = np.stack(
                [np.minimum(kinds[lo], kinds[hi]), np.maximum(kinds[lo], kinds[hi])],
                axis=1,
            )
            allowed = _ALLOWED_PAIRS[mode]
            for a, b in {tuple(row) for row in pair_kinds.tolist()}:
                if (a, b) not in allowed:
                    raise GraphError(
                        f"{KIND_NAMES[a]}-{KIND_NAMES[b]} edges not allowed in {mode} mode"
                    )
        else:
            lo = hi = np.empty(0, dtype=np.int64)
            mult_u = np.empty(0, dtype=np.int64)

        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        dmult = np.concatenate([mult_u, mult_u])
        order = np.lexsort((dst, src))
        indptr = np.zeros(n + 1, dtype=np.int64)
        if len(src):
            np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(mode, ids, kinds, indptr, dst[order].astype(np.int32), dmult[order])

    # -- basic accessors ---------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return len(self.ids)

    @property
    def n_edges(self) -> int:
        return len(self.indices) // 2

    def degrees(self):
        return np.diff(self.indptr)

    def position_of(self, node_id) -> int:
        p = int(np.searchsorted(self.ids, int(node_id)))
        if p >= len(self.ids) or self.ids[p] != int(node_id):
            raise GraphError(f"node {node_id} not in graph")
        return p

    def has_node(self, node_id) -> bool:
        p = np.searchsorted(self.ids, int(node_id))
        return p < len(self.ids) and self.ids[p] == int(node_id)

    def kind_of(self, node_id) -> str:
        return KIND_NAMES[self.kinds[self.position_of(node_id)]]

    def degree_of(self, node_id) -> int:
        p = self.position_of(node_id)
        return int(self.indptr[p + 1] - self.indptr[p])

    def neighbors(self, node_id):
        p = self.position_of(node_id)
        return self.ids[self.indices[self.indptr[p] : self.indptr[p + 1]]]

    def ids_of_kind(self, kind):
        return self.ids[self.kinds == _kind_code(kind)]

    def csr(self):
        return self.indptr, self.indices

    def edge_array(self):
        """Unique undirected edges as (u_id, v_id, multiplicity) arrays, u < v."""
        n = self.n_nodes
        src = np.repeat(np.arange(n, dtype=np.int64), np.diff(self.indptr))
        dst = self.indices.astype(np.int64)
        keep = src < dst
        return self.ids[src[keep]], self.ids[dst[keep]], self.mult[keep]

    # -- operations ---------------------------------------------------------

    def connected_components(self):
        """Components as id arrays, largest first (ties: smallest node id),
        plus the largest-component fraction |LGC| / |V| (0.0 for empty)."""
        n = self.n_nodes
        if n == 0:
            return [], 0.0
        labels, count = kernels.component_labels(self.indptr, self.indices)
        sizes = np.bincount(labels, minlength=count)
        # labels are assigned in ascending first-position order, so the
        # smallest node id of component c is ids[first occurrence of c]
        first = np.full(count, n, dtype=np.int64)
        np.minimum.at(first, labels, np.arange(n, dtype=np.int64))
        order = np.lexsort((self.ids[first], -sizes))
        comps = [self.ids[labels == c] for c in order]
        return comps, float(sizes.max()) / float(n)

    def component_sizes(self):
        n = self.n_nodes
        if n == 0:
            return np.empty(0, dtype=np.int64)
        labels, count = kernels.component_labels(self.indptr, self.indices)
        return np.bincount(labels, minlength=count)

    def largest_component(self) -> "AnalysisGraph":
        comps, _ = self.connected_components()
        if not comps:
            return self
        return self.induced_subgraph(comps[0])

    def induced_subgraph(self, keep_ids) -> "AnalysisGraph":
        keep_ids = np.asarray(sorted(int(i) for i in keep_ids), dtype=np.int64)
        pos = np.searchsorted(self.ids, keep_ids)
        bad = (pos >= len(self.ids)) | (self.ids[np.minimum(pos, len(self.ids) - 1)] != keep_ids)
        if bad.any():
            raise GraphError(f"node {int(keep_ids[bad][0])} not in graph")
        mask = np.zeros(self.n_nodes, dtype=bool)
        mask[pos] = True
        return self._filtered(mask)

    def remove_nodes(self, victims, prune_isolated=False) -> "AnalysisGraph":
        """New graph without the victim nodes and their incident edges.

        With prune_isolated, every node of degree 0 in the result is removed
        as well (repeated until none remain). A victim missing from the graph
        is an error: it signals a stale node reference upstream.
        """
        victims = [int(v) for v in victims]
        mask = np.ones(self.n_nodes, dtype=bool)
        for v in victims:
            mask[self.position_of(v)] = False
        out = self._filtered(mask)
        while prune_isolated and out.n_nodes:
            isolated = np.diff(out.indptr) == 0
            if not isolated.any():
                break
            out = out._filtered(~isolated)
        return out

    def _filtered(self, keep_mask) -> "AnalysisGraph":
        """Subgraph on the masked positions (edges with both endpoints kept)."""
        u, v, m = self._edges_pos()
        emask = keep_mask[u] & keep_mask[v]
        kept = np.flatnonzero(keep_mask)
        remap = np.full(self.n_nodes, -1, dtype=np.int64)
        remap[kept] = np.arange(len(kept))
        ids = self.ids[kept]
        kinds = self.kinds[kept]
        lo = remap[u[emask]]
        hi = remap[v[emask]]
        mult_u = m[emask]
        n = len(ids)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        dmult = np.concatenate([mult_u, mult_u])
        order = np.lexsort((dst, src))
        indptr = np.zeros(n + 1, dtype=np.int64)
        if len(src):
            np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return AnalysisGraph(
            self.mode, ids, kinds.copy(), indptr, dst[order].astype(np.int32), dmult[order]
        )

    def _edges_pos(self):
        n = self.n_nodes
        src = np.repeat(np.arange(n, dtype=np.int64), np.diff(self.indptr))
        dst = self.indices.astype(np.int64)
        keep = src < dst
        return src[keep], dst[keep], self.mult[keep]

    # -- edge-list text format ----------------------------------------------

    def to_edgelist_text(self) -> str:
        """Text form: '# mode:' header, one 'u v multiplicity kind_u kind_v'
        line per edge, and 'u - 0 kind_u -' lines for isolated nodes."""
        lines = [f"# mode: {self.mode}"]
        u, v, m = self.edge_array()
        pu = np.searchsorted(self.ids, u)
        pv = np.searchsorted(self.ids, v)
        for k in range(len(u)):
            lines.append(
                f"{u[k]} {v[k]} {m[k]} "
                f"{KIND_NAMES[self.kinds[pu[k]]]} {KIND_NAMES[self.kinds[pv[k]]]}"
            )
        if self.n_nodes:
            isolated = np.flatnonzero(np.diff(self.indptr) == 0)
            for p in isolated:
                lines.append(f"{self.ids[p]} - 0 {KIND_NAMES[self.kinds[p]]} -")
        return "\n".join(lines) + "\n"

    def write_edgelist(self, path) -> None:
        from .util import atomic_write_text

        atomic_write_text(path, self.to_edgelist_text())

    @classmethod
    def from_edgelist_text(cls, text, mode=None) -> "AnalysisGraph":
        nodes = {}
        edges = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                stripped = line.lstrip("#").strip()
                if stripped.startswith("mode:") and mode is None:
                    mode = stripped.split(":", 1)[1].strip()
                continue
            parts = line.split()
            if len(parts) != 5:
                raise GraphError(f"edge list line {lineno}: expected 5 fields, got {len(parts)}")
            u_s, v_s, m_s, ku, kv = parts
            u = int(u_s)
            if ku not in KIND_CODES:
                raise GraphError(f"edge list line {lineno}: unknown kind {ku!r}")
            nodes.setdefault(u, _kind_code(ku))
            if v_s == "-":
                continue
            v = int(v_s)
            if kv not in KIND_CODES:
                raise GraphError(f"edge list line {lineno}: unknown kind {kv!r}")
            nodes.setdefault(v, _kind_code(kv))
            edges.append((u, v, int(m_s)))
        if mode is None:
            kinds_present = set(nodes.values())
            mode = TRIPARTITE if ENTITY in kinds_present else BIPARTITE
        return cls.build(sorted(nodes.items()), edges, mode)

    @classmethod
    def read_edgelist(cls, path, mode=None) -> "AnalysisGraph":
        with open(path, encoding="utf-8") as f:
            return cls.from_edgelist_text(f.read(), mode=mode)

    def __repr__(self):
        return (
            f"AnalysisGraph(mode={self.mode!r}, nodes={self.n_nodes}, "
            f"edges={self.n_edges})"
        )


def connected_components(graph: AnalysisGraph):
    """Module-level alias: (components largest-first, LGC fraction)."""
    return graph.connected_components()


def remove_nodes(graph: AnalysisGraph, victims, prune_isolated=False) -> AnalysisGraph:
    return graph.remove_nodes(victims, prune_isolated=prune_isolated)


@dataclass(frozen=True)
class CountrySlice:
    """The per-country node sets and their analysis graph.

    clients holds every beneficiary officer of the country (B), entities the
    offshore vehicles those beneficiaries own (E), intermediaries the firms
    that created those vehicles (I). The graph covers B + I (bipartite) or
    B + E + I (tripartite) and keeps clients that have no intermediary link.
    """

    country: str
    mode: str
    clients: np.ndarray
    entities: np.ndarray
    intermediaries: np.ndarray
    graph: AnalysisGraph

    @property
    def n_clients(self) -> int:
        return len(self.clients)

    @property
    def n_entities(self) -> int:
        return len(self.entities)

    @property
    def n_intermediaries(self) -> int:
        return len(self.intermediaries)

    def counts(self):
        return {
            "country": self.country,
            "mode": self.mode,
            "clients": self.n_clients,
            "entities": self.n_entities,
            "intermediaries": self.n_intermediaries,
            "graph_nodes": self.graph.n_nodes,
            "graph_edges": self.graph.n_edges,
        }


def build_country_slice(corpus, country, mode=TRIPARTITE) -> CountrySlice:
    """Country-level client / entity / intermediary sets and graph.

    Set construction: clients are officer nodes carrying the country code
    with at least one beneficiary-class edge to an entity; entities are the
    nodes reached through those beneficiary edges; intermediaries are
    intermediary-kind nodes adjacent (any link class) to those entities.
    """
    if mode not in MODES:
        raise GraphError(f"unknown graph mode {mode!r}; expected one of {MODES}")
    code = str(country).strip().upper()
    if not code:
        raise DataError("country code must be non-empty")
    available = corpus.available_countries()
    if code not in available:
        raise DataError(
            f"unknown country code {code!r}; available: {', '.join(available) or '(none)'}"
        )

    kinds = corpus.kinds
    officer = kinds == int(Kind.OFFICER)
    entity = kinds == int(Kind.ENTITY)
    inter = kinds == int(Kind.INTERMEDIARY)

    s = corpus.edge_start_pos
    e = corpus.edge_end_pos
    ben = corpus.edge_class == int(LinkClass.BENEFICIARY)
    fwd = ben & officer[s] & entity[e]
    rev = ben & officer[e] & entity[s]
    b_pos = np.concatenate([s[fwd], e[rev]])
    e_pos = np.concatenate([e[fwd], s[rev]])

    in_country = np.zeros(corpus.n_nodes, dtype=bool)
    in_country[corpus.positions_with_country(code)] = True
    keep = in_country[b_pos]
    b_pos, e_pos = b_pos[keep], e_pos[keep]

    clients = np.unique(b_pos)
    entities = np.unique(e_pos)

    in_e = np.zeros(corpus.n_nodes, dtype=bool)
    in_e[entities] = True
    ifwd = inter[s] & in_e[e]
    irev = inter[e] & in_e[s]
    i_pos = np.concatenate([s[ifwd], e[irev]])
    ie_pos = np.concatenate([e[ifwd], s[irev]])
    inters = np.unique(i_pos)

    ids = corpus.ids
    ce_pairs = _count_pairs(ids[b_pos], ids[e_pos])
    ie_pairs = _count_pairs(ids[i_pos], ids[ie_pos])
    induced = _induce_pairs(ce_pairs, ie_pairs)

    client_nodes = [(int(ids[p]), CLIENT) for p in clients]
    inter_nodes = [(int(ids[p]), INTERMEDIARY) for p in inters]
    if mode == TRIPARTITE:
        nodes = client_nodes + [(int(ids[p]), ENTITY) for p in entities] + inter_nodes
        edges = (
            [(b, ee, m) for (b, ee), m in ce_pairs.items()]
            + [(i, ee, m) for (i, ee), m in ie_pairs.items()]
            + [(b, i, m) for (b, i), m in induced.items()]
        )
    else:
        nodes = client_nodes + inter_nodes
        edges = [(b, i, m) for (b, i), m in induced.items()]
    graph = AnalysisGraph.build(nodes, edges, mode)
    return CountrySlice(
        country=code,
        mode=mode,
        clients=ids[clients],
        entities=ids[entities],
        intermediaries=ids[inters],
        graph=graph,
    )


def _count_pairs(a_ids, b_ids):
    """Multiplicity map {(a, b): parallel row count} from aligned id arrays."""
    pairs = {}
    for a, b in zip(a_ids.tolist(), b_ids.tolist()):
        key = (a, b)
        pairs[key] = pairs.get(key, 0) + 1
    return pairs


def _induce_pairs(client_entity, inter_entity):
    """Client-intermediary projection: multiplicity = distinct shared entities."""
    clients_of = {}
    for (b, e), _ in client_entity.items():
        clients_of.setdefault(e, set()).add(b)
    inters_of = {}
    for (i, e), _ in inter_entity.items():
        inters_of.setdefault(e, set()).add(i)
    induced = {}
    for e, bs in clients_of.items():
        for i in inters_of.get(e, ()):
            for b in bs:
                key = (b, i)
                induced[key] = induced.get(key, 0) + 1
    return induced


def induce_bipartite(source) -> AnalysisGraph:
    """Bipartite client-intermediary projection of a tripartite graph.

    A client and an intermediary are adjacent iff they share at least one
    entity; multiplicity counts the shared entities. Entity nodes are
    dropped; clients and intermediaries are kept even if they end up
    isolated.
    """
    graph = source.graph if isinstance(source, CountrySlice) else source
    if graph.mode != TRIPARTITE:
        raise GraphError("bipartite projection requires a tripartite-mode graph")
    ce_pairs = {}
    ie_pairs = {}
    u, v, _ = graph.edge_array()
    pu = np.searchsorted(graph.ids, u)
    pv = np.searchsorted(graph.ids, v)
    for k in range(len(u)):
        ka, kb = graph.kinds[pu[k]], graph.kinds[pv[k]]
        a, b = int(u[k]), int(v[k])
        if ka == CLIENT and kb == ENTITY:
            ce_pairs[(a, b)] = 1
        elif kb == CLIENT and ka == ENTITY:
            ce_pairs[(b, a)] = 1
        elif ka == INTERMEDIARY and kb == ENTITY:
            ie_pairs[(a, b)] = 1
        elif kb == INTERMEDIARY and ka == ENTITY:
            ie_pairs[(b, a)] = 1
    induced = _induce_pairs(ce_pairs, ie_pairs)
    nodes = [
        (int(i), CLIENT) for i in graph.ids_of_kind(CLIENT)
    ] + [
        (int(i), INTERMEDIARY) for i in graph.ids_of_kind(INTERMEDIARY)
    ]
    edges = [(b, i, m) for (b, i), m in induced.items()]
    return AnalysisGraph.build(nodes, edges, BIPARTITE)
