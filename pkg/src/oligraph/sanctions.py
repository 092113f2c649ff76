"""Sanctioned-actor pipeline: fuzzy name matching against officer records,
one-degree ego subgraphs with component stitching, and the intermediary
service tabulation.

Name matching is never silently trusted: every query gets a review row with
its top candidates regardless of whether it cleared the threshold, and seed
lists can pin a query to an explicit node id.
"""

from __future__ import annotations

import unicodedata
from collections import deque
from dataclasses import dataclass, field
from difflib import SequenceMatcher

import numpy as np

from .errors import DataError
from .ingest import KIND_LABELS, Corpus, Kind

EXACT = "exact"
TOKEN_SET = "token_set"
EDIT_RATIO = "edit_ratio"
METHODS = (EXACT, TOKEN_SET, EDIT_RATIO)

SEED_LABEL = "oligarch"


def normalize_name(name: str) -> str:
    """Casefold, strip diacritics and punctuation, collapse whitespace."""
    decomposed = unicodedata.normalize("NFKD", name)
    stripped = "".join(c for c in decomposed if not unicodedata.combining(c))
    cleaned = "".join(c if c.isalnum() else " " for c in stripped.casefold())
    return " ".join(cleaned.split())


def _tokens(normalized: str):
    return set(normalized.split())


def token_set_ratio(a: str, b: str) -> float:
    """Classic token-set similarity on normalized strings.

    Compares the sorted shared-token core against each side's full sorted
    token string; symmetric under token reordering by construction.
    """
    ta, tb = _tokens(normalize_name(a)), _tokens(normalize_name(b))
    if not ta or not tb:
        return 0.0
    inter = " ".join(sorted(ta & tb))
    full_a = " ".join(sorted(ta))
    full_b = " ".join(sorted(tb))
    pairs = ((inter, full_a), (inter, full_b), (full_a, full_b))
    best = 0.0
    for x, y in pairs:
        if x == y:
            return 1.0
        best = max(best, SequenceMatcher(None, x, y).ratio())
    return best


def edit_ratio(a: str, b: str) -> float:
    na, nb = normalize_name(a), normalize_name(b)
    if not na or not nb:
        return 0.0
    return SequenceMatcher(None, na, nb).ratio()


def _score(method, query, name):
    if method == EXACT:
        return 1.0 if normalize_name(query) == normalize_name(name) else 0.0
    if method == TOKEN_SET:
        return token_set_ratio(query, name)
    return edit_ratio(query, name)


@dataclass
class SanctionMatch:
    query: str
    node_id: int | None
    node_name: str | None
    score: float
    method: str
    candidates: list = field(default_factory=list)
    pinned: bool = False
    error: str | None = None

    @property
    def matched(self) -> bool:
        return self.node_id is not None


def _officer_pool(corpus: Corpus):
    """(position, normalized name, token set) for every named officer node."""
    pool = []
    for p in corpus.positions_of_kind(Kind.OFFICER).tolist():
        norm = normalize_name(corpus.names[p])
        if norm:
            pool.append((p, norm, _tokens(norm)))
    return pool


def match_names(queries, corpus: Corpus, threshold=0.85, method=TOKEN_SET):
    """Match each query against officer-node names.

    Scores every candidate sharing a token with the query (all officers for
    edit_ratio), keeps the top five for review, and declares a match when
    the best score reaches the threshold (ties broken by ascending node id).
    Empty queries produce an error row; processing continues.
    """
    if not 0.0 < threshold <= 1.0:
        raise DataError("threshold must be in (0, 1]")
    if method not in METHODS:
        raise DataError(f"unknown match method {method!r}; expected one of {METHODS}")
    pool = _officer_pool(corpus)
    token_index = {}
    for entry in pool:
        for tok in entry[2]:
            token_index.setdefault(tok, []).append(entry)

    results = []
    for query in queries:
        query = str(query)
        if not normalize_name(query):
            results.append(
                SanctionMatch(
                    query=query, node_id=None, node_name=None, score=0.0,
                    method=method, error="empty query",
                )
            )
            continue
        if method == EDIT_RATIO:
            candidates = pool
        else:
            seen = set()
            candidates = []
            for tok in sorted(_tokens(normalize_name(query))):
                for entry in token_index.get(tok, ()):
                    if entry[0] not in seen:
                        seen.add(entry[0])
                        candidates.append(entry)
        scored = []
        for p, _, _ in candidates:
            s = _score(method, query, corpus.names[p])
            if s > 0.0:
                scored.append((-s, int(corpus.ids[p]), corpus.names[p]))
        scored.sort()
        top = [(node_id, name, -neg) for neg, node_id, name in scored[:5]]
        if top and top[0][2] >= threshold:
            results.append(
                SanctionMatch(
                    query=query, node_id=top[0][0], node_name=top[0][1],
                    score=top[0][2], method=method, candidates=top,
                )
            )
        else:
            best = top[0][2] if top else 0.0
            results.append(
                SanctionMatch(
                    query=query, node_id=None, node_name=None, score=best,
                    method=method, candidates=top,
                )
            )
    return results


def load_seed_list(path):
    """Seed file: one name per line, optionally 'name,node_id' to pin."""
    specs = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, _, pin = line.rpartition(",")
            if name and pin.strip().isdigit():
                specs.append((name.strip(), int(pin)))
            else:
                specs.append((line, None))
    return specs


def resolve_seeds(specs, corpus: Corpus, threshold=0.85, method=TOKEN_SET):
    """Seed specs -> (sorted seed ids, match rows). Pinned ids skip matching
    but still get a review row (score 1.0, flagged pinned)."""
    queries = [name for name, pin in specs if pin is None]
    matches = iter(match_names(queries, corpus, threshold=threshold, method=method))
    rows = []
    seed_ids = set()
    for name, pin in specs:
        if pin is not None:
            if not corpus.has_node(pin):
                rows.append(
                    SanctionMatch(
                        query=name, node_id=None, node_name=None, score=0.0,
                        method=method, pinned=True,
                        error=f"pinned node id {pin} not in corpus",
                    )
                )
                continue
            rows.append(
                SanctionMatch(
                    query=name, node_id=pin, node_name=corpus.name_of(pin),
                    score=1.0, method=method, pinned=True,
                )
            )
            seed_ids.add(pin)
        else:
            m = next(matches)
            rows.append(m)
            if m.matched:
                seed_ids.add(m.node_id)
    return sorted(seed_ids), rows


@dataclass
class EgoSubgraph:
    seed_ids: tuple
    node_ids: np.ndarray
    edges: list
    component_map: dict
    labels: dict

    @property
    def n_components(self) -> int:
        return len(set(self.component_map.values()))

    def to_rows(self):
        """Plot-ready edge rows plus node rows carrying the type labels."""
        return [
            (u, v, self.labels[u], self.labels[v], self.component_map[u], self.component_map[v])
            for u, v in self.edges
        ]


def build_ego_subgraph(corpus: Corpus, seeds, radius=1, include_addresses=False) -> EgoSubgraph:
    """Union of the seeds' closed radius-r neighborhoods with induced edges.

    Address nodes stay out unless include_addresses is set. Components are
    computed on the induced subgraph (pre-stitching) and recorded per node.
    """
    seeds = sorted(int(s) for s in seeds)
    if not seeds:
        raise DataError("no seeds resolved")
    indptr, indices = corpus.adjacency(include_addresses=include_addresses)
    seed_pos = [corpus.position_of(s) for s in seeds]

    depth = {}
    for p in seed_pos:
        depth[p] = 0
    frontier = deque(seed_pos)
    while frontier:
        v = frontier.popleft()
        if depth[v] >= radius:
            continue
        for w in indices[indptr[v] : indptr[v + 1]].tolist():
            if w not in depth:
                depth[w] = depth[v] + 1
                frontier.append(w)

    members = sorted(depth)
    member_set = set(members)
    edges = []
    for u in members:
        for w in indices[indptr[u] : indptr[u + 1]].tolist():
            if w > u and w in member_set:
                edges.append((u, w))

    # components of the induced subgraph, labeled in ascending-position order
    comp = {}
    next_label = 0
    adj = {}
    for u, w in edges:
        adj.setdefault(u, []).append(w)
        adj.setdefault(w, []).append(u)
    for start in members:
        if start in comp:
            continue
        comp[start] = next_label
        q = deque([start])
        while q:
            v = q.popleft()
            for w in adj.get(v, ()):
                if w not in comp:
                    comp[w] = next_label
                    q.append(w)
        next_label += 1

    ids = corpus.ids
    seed_id_set = set(seeds)
    labels = {}
    for p in members:
        node_id = int(ids[p])
        if node_id in seed_id_set:
            labels[node_id] = SEED_LABEL
        else:
            labels[node_id] = KIND_LABELS[int(corpus.kinds[p])]
    return EgoSubgraph(
        seed_ids=tuple(seeds),
        node_ids=ids[np.asarray(members, dtype=np.int64)],
        edges=[(int(ids[u]), int(ids[w])) for u, w in edges],
        component_map={int(ids[p]): c for p, c in comp.items()},
        labels=labels,
    )


@dataclass(frozen=True)
class StitchResult:
    component_a: int
    component_b: int
    path: tuple | None

    @property
    def bridged(self) -> bool:
        return self.path is not None


def stitch_components(corpus: Corpus, ego: EgoSubgraph, hop_budget=6,
                      include_addresses=False) -> list:
    """Minimum-length seed-to-seed paths joining distinct ego components.

    Paths run through the full corpus graph, may use nodes outside the ego
    subgraph, and are capped at hop_budget edges; a pair with no path within
    budget is reported unbridged (path None). Ties break to the smallest
    node-id sequence read from the lower-numbered component.
    """
    indptr, indices = corpus.adjacency(include_addresses=include_addresses)
    seed_pos_by_comp = {}
    for s in ego.seed_ids:
        c = ego.component_map[s]
        seed_pos_by_comp.setdefault(c, []).append(corpus.position_of(s))
    comps = sorted(seed_pos_by_comp)
    if len(comps) < 2:
        return []

    def bounded_bfs(start):
        dist = {start: 0}
        q = deque([start])
        while q:
            v = q.popleft()
            if dist[v] >= hop_budget:
                continue
            for w in indices[indptr[v] : indptr[v + 1]].tolist():
                if w not in dist:
                    dist[w] = dist[v] + 1
                    q.append(w)
        return dist

    dist_from = {}
    for c in comps:
        for t in seed_pos_by_comp[c]:
            dist_from[t] = bounded_bfs(t)

    ids = corpus.ids
    results = []
    for ai in range(len(comps)):
        for bi in range(ai + 1, len(comps)):
            ca, cb = comps[ai], comps[bi]
            best = None
            for t in seed_pos_by_comp[cb]:
                dist_t = dist_from[t]
                for s in seed_pos_by_comp[ca]:
                    d = dist_t.get(s)
                    if d is None:
                        continue
                    path = _lex_smallest_path(s, t, dist_t, indptr, indices)
                    key = (d, tuple(int(ids[p]) for p in path))
                    if best is None or key < best:
                        best = key
            results.append(
                StitchResult(
                    component_a=ca,
                    component_b=cb,
                    path=best[1] if best else None,
                )
            )
    return results


def _lex_smallest_path(s, t, dist_t, indptr, indices):
    """Greedy walk from s toward t along the shortest-path DAG, taking the
    smallest-position neighbor that still decreases the distance to t."""
    path = [s]
    cur = s
    while cur != t:
        d = dist_t[cur]
        nxt = None
        for w in indices[indptr[cur] : indptr[cur + 1]].tolist():
            if dist_t.get(w) == d - 1 and (nxt is None or w < nxt):
                nxt = w
        path.append(nxt)
        cur = nxt
    return path


@dataclass(frozen=True)
class IntermediaryRow:
    node_id: int
    name: str
    sanctioned_clients: int
    n_entities: int
    n_clients: int


def tabulate_intermediaries(corpus: Corpus, seeds) -> list:
    """Service counts for every intermediary one entity away from a seed.

    For each such intermediary: distinct seeds reached through a shared
    entity, distinct entities it is linked to corpus-wide, and distinct
    officer-kind clients across all those entities. Rows sort by sanctioned
    count descending (ties: name, then id).
    """
    seeds = sorted(int(s) for s in seeds)
    indptr, indices = corpus.adjacency(include_addresses=False)
    kinds = corpus.kinds

    def nbrs(p):
        return indices[indptr[p] : indptr[p + 1]].tolist()

    serves = {}
    for s in seeds:
        sp = corpus.position_of(s)
        for e in nbrs(sp):
            if kinds[e] != int(Kind.ENTITY):
                continue
            for i in nbrs(e):
                if kinds[i] == int(Kind.INTERMEDIARY):
                    serves.setdefault(i, set()).add(s)

    rows = []
    for i, seed_set in serves.items():
        entities = [e for e in nbrs(i) if kinds[e] == int(Kind.ENTITY)]
        clients = set()
        for e in entities:
            clients.update(o for o in nbrs(e) if kinds[o] == int(Kind.OFFICER))
        rows.append(
            IntermediaryRow(
                node_id=int(corpus.ids[i]),
                name=corpus.names[i],
                sanctioned_clients=len(seed_set),
                n_entities=len(entities),
                n_clients=len(clients),
            )
        )
    rows.sort(key=lambda r: (-r.sanctioned_clients, r.name, r.node_id))
    return rows
