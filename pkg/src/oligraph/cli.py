"""Command-line front end.

One subcommand per analysis (ingest, slice, metrics, fit, knockout, ratio,
diversity, sanctions, synth), composable through files so partial reruns stay
cheap. Every run writes a manifest recording the resolved config, input file
digests, and tool version; artifacts are written atomically. Exit codes:
0 success, 2 usage error, 3 data error, 4 internal error.
"""

from __future__ import annotations

import functools
import json
import os
import pickle
import sys
import time

import click

import numpy as np

from . import __version__, attack, metrics, powerlaw, sanctions, synth
from .errors import DataError, OligraphError
from .graph import (
    BIPARTITE,
    MODES,
    TRIPARTITE,
    AnalysisGraph,
    build_country_slice,
)
from .ingest import LinkClassMap, load_corpus
from .util import atomic_write_csv, atomic_write_json, atomic_write_text, fmt, sha256_file

OUTPUT_ENV = "OLIGRAPH_OUTPUT_DIR"
CACHE_FORMAT = 1

EXIT_DATA_ERROR = 3
EXIT_INTERNAL_ERROR = 4


class Run:
    """Per-invocation bookkeeping: config, inputs, outputs, manifest."""

    def __init__(self, command, out_dir, config):
        self.command = command
        self.out_dir = out_dir
        self.config = config
        self.inputs = {}
        self.outputs = []
        self.warnings = []
        self.peak = {"nodes": 0, "edges": 0}
        self.started = time.time()
        os.makedirs(out_dir, exist_ok=True)

    def register_input(self, path):
        self.inputs[str(path)] = sha256_file(path)

    def track_graph(self, n_nodes, n_edges):
        self.peak["nodes"] = max(self.peak["nodes"], int(n_nodes))
        self.peak["edges"] = max(self.peak["edges"], int(n_edges))

    def path(self, name):
        return os.path.join(self.out_dir, name)

    def write_csv(self, name, header, rows):
        atomic_write_csv(self.path(name), header, [[fmt(c) for c in r] for r in rows])
        self.outputs.append(name)

    def write_json(self, name, obj):
        atomic_write_json(self.path(name), obj)
        self.outputs.append(name)

    def write_text(self, name, text):
        atomic_write_text(self.path(name), text)
        self.outputs.append(name)

    def finish(self):
        manifest = {
            "tool": "oligraph",
            "version": __version__,
            "command": self.command,
            "config": self.config,
            "inputs": self.inputs,
            "outputs": sorted(self.outputs),
            "peak": self.peak,
            "warnings": self.warnings,
            "wall_seconds": time.time() - self.started,
        }
        atomic_write_json(self.path(f"manifest_{self.command}.json"), manifest)


def handle_errors(f):
    """Map package errors to exit 3 and anything unexpected to exit 4, with
    a machine-readable error report on stderr."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except click.ClickException:
            raise
        except OligraphError as exc:
            _emit_error(exc, EXIT_DATA_ERROR)
            sys.exit(EXIT_DATA_ERROR)
        except OSError as exc:
            _emit_error(exc, EXIT_DATA_ERROR)
            sys.exit(EXIT_DATA_ERROR)
        except Exception as exc:  # noqa: BLE001 - last-resort reporting
            _emit_error(exc, EXIT_INTERNAL_ERROR)
            sys.exit(EXIT_INTERNAL_ERROR)

    return wrapper


def _emit_error(exc, code):
    payload = {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}
    click.echo(json.dumps(payload, sort_keys=True), err=True)


def _default_out():
    return os.environ.get(OUTPUT_ENV, ".")


def out_option(f):
    return click.option(
        "--out", "out_dir", default=None,
        help=f"Output directory (default: ${OUTPUT_ENV} or the current directory).",
    )(f)


def threads_option(f):
    return click.option(
        "--threads", default=os.cpu_count() or 1, show_default="available cores",
        help="Worker threads for trial/replicate parallelism; results are "
             "identical for any value.",
    )(f)


def format_option(f):
    return click.option(
        "--format", "fmt_kind", type=click.Choice(["csv", "json"]), default="csv",
        show_default=True, help="Primary tabular artifact format.",
    )(f)


def corpus_options(f):
    f = click.option("--nodes", "node_files", multiple=True,
                     type=click.Path(exists=True, dir_okay=False),
                     help="Node CSV (repeatable; kind inferred from file name).")(f)
    f = click.option("--edges", "edge_file", default=None,
                     type=click.Path(exists=True, dir_okay=False),
                     help="Relationship CSV.")(f)
    f = click.option("--map", "map_file", default=None,
                     type=click.Path(exists=True, dir_okay=False),
                     help="Link-class map file (default: shipped map).")(f)
    f = click.option("--cache", "cache_file", default=None,
                     type=click.Path(exists=True, dir_okay=False),
                     help="Binary corpus cache written by `ingest --save-cache`.")(f)
    return f


def _load_link_map(map_file, run):
    if map_file:
        run.register_input(map_file)
        return LinkClassMap.from_file(map_file)
    return LinkClassMap.default()


def _save_cache(corpus, path, digests):
    payload = {
        "format": CACHE_FORMAT,
        "version": __version__,
        "digests": digests,
        "corpus": corpus,
    }
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        pickle.dump(payload, fh, protocol=pickle.HIGHEST_PROTOCOL)
    os.replace(tmp, path)


def _load_cache(path):
    with open(path, "rb") as fh:
        payload = pickle.load(fh)
    if payload.get("format") != CACHE_FORMAT:
        raise DataError(
            f"corpus cache {path} has format {payload.get('format')}, "
            f"expected {CACHE_FORMAT}; re-run ingest"
        )
    return payload


def _corpus_from_options(run, node_files, edge_file, map_file, cache_file):
    if cache_file:
        payload = _load_cache(cache_file)
        run.register_input(cache_file)
        if node_files or edge_file:
            digests = {os.path.basename(p): sha256_file(p)
                       for p in list(node_files) + ([edge_file] if edge_file else [])}
            stale = {
                name: d for name, d in digests.items()
                if payload["digests"].get(name) not in (None, d)
            }
            if stale:
                raise DataError(
                    "corpus cache is stale for: " + ", ".join(sorted(stale))
                    + "; re-run ingest"
                )
        return payload["corpus"]
    if not node_files or not edge_file:
        raise click.UsageError("provide --nodes/--edges or --cache")
    link_map = _load_link_map(map_file, run)
    for p in node_files:
        run.register_input(p)
    run.register_input(edge_file)
    corpus = load_corpus(list(node_files), edge_file, link_map)
    run.warnings.extend(corpus.report.warnings)
    return corpus


def _graph_from_options(run, corpus_opts, country, mode, graph_file):
    """Either a country slice from a corpus or a standalone edge-list graph.

    Returns (label, slice_or_graph, graph)."""
    if graph_file:
        run.register_input(graph_file)
        graph = AnalysisGraph.read_edgelist(graph_file, mode=None)
        label = os.path.splitext(os.path.basename(graph_file))[0]
        return label, graph, graph
    if not country:
        raise click.UsageError("provide --country (with a corpus) or --graph")
    corpus = _corpus_from_options(run, *corpus_opts)
    run.track_graph(corpus.n_nodes, corpus.n_edges)
    slice_ = build_country_slice(corpus, country, mode)
    return slice_.country, slice_, slice_.graph


@click.group()
@click.version_option(__version__, prog_name="oligraph")
def main():
    """Offshore client-intermediary network analytics."""


@main.command("ingest")
@corpus_options
@out_option
@click.option("--save-cache", "save_cache", default=None,
              help="Also write a binary corpus cache to this path.")
@handle_errors
def ingest_cmd(node_files, edge_file, map_file, cache_file, out_dir, save_cache):
    """Parse node/relationship CSVs and write the ingest report."""
    if cache_file:
        raise click.UsageError("ingest reads CSVs; --cache is not accepted here")
    run = Run("ingest", out_dir or _default_out(), {
        "nodes": [str(p) for p in node_files],
        "edges": str(edge_file) if edge_file else None,
        "map": str(map_file) if map_file else "<default>",
        "save_cache": save_cache,
    })
    corpus = _corpus_from_options(run, node_files, edge_file, map_file, None)
    run.track_graph(corpus.n_nodes, corpus.n_edges)
    run.write_json("ingest_report.json", corpus.report.to_dict())
    if save_cache:
        digests = {os.path.basename(p): run.inputs[str(p)] for p in node_files}
        digests[os.path.basename(edge_file)] = run.inputs[str(edge_file)]
        _save_cache(corpus, save_cache, digests)
    run.finish()
    cov = corpus.report.coverage
    click.echo(
        f"ingested {corpus.n_nodes} nodes, {corpus.n_edges} edges "
        f"({corpus.report.edges_quarantined} quarantined), "
        f"link coverage {cov.coverage:.4f}"
    )


@main.command("slice")
@corpus_options
@out_option
@click.option("--country", required=True, help="ISO-3166 alpha-3 country code.")
@click.option("--mode", type=click.Choice(list(MODES)), default=TRIPARTITE, show_default=True)
@click.option("--export-graph", is_flag=True, help="Also write the slice graph edge list.")
@handle_errors
def slice_cmd(node_files, edge_file, map_file, cache_file, out_dir, country, mode, export_graph):
    """Build the country-level client/entity/intermediary slice."""
    run = Run("slice", out_dir or _default_out(), {
        "country": country, "mode": mode, "export_graph": export_graph,
    })
    corpus = _corpus_from_options(run, node_files, edge_file, map_file, cache_file)
    slice_ = build_country_slice(corpus, country, mode)
    run.track_graph(slice_.graph.n_nodes, slice_.graph.n_edges)
    counts = slice_.counts()
    run.write_json(f"slice_{slice_.country}.json", counts)
    if export_graph:
        run.write_text(f"slice_{slice_.country}.edges", slice_.graph.to_edgelist_text())
    run.finish()
    click.echo(json.dumps(counts, sort_keys=True))


@main.command("metrics")
@corpus_options
@out_option
@format_option
@click.option("--country", default=None)
@click.option("--mode", type=click.Choice(list(MODES)), default=TRIPARTITE, show_default=True)
@click.option("--graph", "graph_file", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Edge-list graph file instead of a corpus slice.")
@click.option("--betweenness", "with_betweenness", is_flag=True,
              help="Also write exact per-node betweenness scores.")
@click.option("--betweenness-sources", default=None, type=int,
              help="Pivot-sample source count for approximate betweenness "
                   "(exact computation is the default).")
@click.option("--seed", default=0, show_default=True)
@handle_errors
def metrics_cmd(node_files, edge_file, map_file, cache_file, out_dir, fmt_kind,
                country, mode, graph_file, with_betweenness, betweenness_sources, seed):
    """Degree distributions and robustness metrics of one graph."""
    run = Run("metrics", out_dir or _default_out(), {
        "country": country, "mode": mode, "graph": graph_file,
        "betweenness": with_betweenness, "betweenness_sources": betweenness_sources,
        "seed": seed, "format": fmt_kind,
    })
    label, _, graph = _graph_from_options(
        run, (node_files, edge_file, map_file, cache_file), country, mode, graph_file
    )
    run.track_graph(graph.n_nodes, graph.n_edges)

    comps, lgc_fraction = graph.connected_components()
    bipartite = graph.mode == BIPARTITE
    if bipartite:
        run.warnings.append("bipartite mode: triangles and clustering reported absent")
    summary = {
        "label": label,
        "mode": graph.mode,
        "nodes": graph.n_nodes,
        "edges": graph.n_edges,
        "components": len(comps),
        "lgc_size": int(len(comps[0])) if comps else 0,
        "lgc_fraction": lgc_fraction,
        "triangles": None if bipartite else metrics.count_triangles(graph),
        "clustering": None if bipartite else metrics.clustering_coefficient(graph),
        "redundancy_raw": metrics.redundancy_raw(graph),
        "degree_mean": {},
    }
    for node_class in ("clients", "intermediaries", "all"):
        dist = metrics.degree_distribution(graph, node_class)
        summary["degree_mean"][node_class] = dist.mean
        rows = dist.to_rows()
        if fmt_kind == "csv":
            run.write_csv(f"degrees_{node_class}.csv", ["degree", "count"], rows)
        else:
            run.write_json(f"degrees_{node_class}.json", dist.to_dict())
    if with_betweenness or betweenness_sources:
        scores = metrics.betweenness(
            graph, "all", n_sources=betweenness_sources, seed=seed
        )
        rows = [
            (node_id, graph.kind_of(node_id), scores[node_id])
            for node_id in sorted(scores)
        ]
        run.write_csv("betweenness.csv", ["node_id", "kind", "score"], rows)
    run.write_json("metrics_summary.json", summary)
    run.finish()
    click.echo(json.dumps({k: summary[k] for k in ("label", "nodes", "edges", "lgc_fraction")},
                          sort_keys=True))


@main.command("fit")
@corpus_options
@out_option
@click.option("--country", default=None)
@click.option("--mode", type=click.Choice(list(MODES)), default=BIPARTITE, show_default=True)
@click.option("--graph", "graph_file", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--samples", "samples_file", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Plain-text integer samples, one per line.")
@click.option("--xmin", default=None, type=int, help="Fix the lower cutoff.")
@click.option("--exact-mle", is_flag=True, help="Refine alpha by exact zeta MLE.")
@click.option("--bootstrap", "n_boot", default=0, type=int,
              help="Bootstrap replicates for the goodness-of-fit p-value.")
@click.option("--seed", default=0, show_default=True)
@threads_option
@handle_errors
def fit_cmd(node_files, edge_file, map_file, cache_file, out_dir, country, mode,
            graph_file, samples_file, xmin, exact_mle, n_boot, seed, threads):
    """Fit a discrete power law to intermediary degrees (or raw samples)."""
    run = Run("fit", out_dir or _default_out(), {
        "country": country, "mode": mode, "graph": graph_file, "samples": samples_file,
        "xmin": xmin, "exact_mle": exact_mle, "bootstrap": n_boot, "seed": seed,
    })
    if samples_file:
        run.register_input(samples_file)
        with open(samples_file, encoding="utf-8") as fh:
            samples = np.asarray(
                [int(line) for line in fh.read().split() if line.strip()], dtype=np.int64
            )
    else:
        _, _, graph = _graph_from_options(
            run, (node_files, edge_file, map_file, cache_file), country, mode, graph_file
        )
        run.track_graph(graph.n_nodes, graph.n_edges)
        degrees = graph.degrees()[graph.kinds == 2]
        samples = degrees[degrees >= 1].astype(np.int64)
    fit = powerlaw.fit_power_law(samples, xmin=xmin, exact_mle=exact_mle)
    if n_boot:
        fit.p_value = powerlaw.bootstrap_gof(
            samples, fit, n_boot=n_boot, seed=seed, threads=threads
        )
    run.write_json("fit.json", fit.to_dict())
    run.write_csv("ccdf.csv", ["degree", "ccdf"], powerlaw.ccdf_points(samples))
    run.write_csv("xmin_scan.csv", ["xmin", "alpha", "ks", "n_tail"], fit.scan)
    run.finish()
    click.echo(json.dumps(
        {"alpha": fit.alpha, "xmin": fit.xmin, "ks": fit.ks_statistic, "p_value": fit.p_value},
        sort_keys=True,
    ))


def _knockout_options(f):
    f = click.option("--country", default=None)(f)
    f = click.option("--mode", type=click.Choice(list(MODES)), default=TRIPARTITE,
                     show_default=True)(f)
    f = click.option("--graph", "graph_file", default=None,
                     type=click.Path(exists=True, dir_okay=False))(f)
    f = click.option("--k", "k_max", default=3, show_default=True,
                     help="Number of intermediaries to remove.")(f)
    f = click.option("--recompute", is_flag=True,
                     help="Re-rank after every removal instead of ranking once.")(f)
    f = click.option("--lgc-only", is_flag=True,
                     help="Run on the largest connected component only.")(f)
    return f


@main.command("knockout")
@corpus_options
@out_option
@_knockout_options
@click.option("--strategy", type=click.Choice(list(attack.CRITERIA)), default="degree",
              show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--baseline-trials", default=0, type=int,
              help="Also write a seeded uniform-random removal baseline "
                   "averaged over this many trials.")
@threads_option
@handle_errors
def knockout_cmd(node_files, edge_file, map_file, cache_file, out_dir, country, mode,
                 graph_file, k_max, recompute, lgc_only, strategy, seed,
                 baseline_trials, threads):
    """Iterative targeted removal of top-ranked intermediaries."""
    run = Run("knockout", out_dir or _default_out(), {
        "country": country, "mode": mode, "graph": graph_file, "k": k_max,
        "strategy": strategy, "recompute": recompute, "lgc_only": lgc_only,
        "seed": seed, "baseline_trials": baseline_trials,
    })
    label, source, graph = _graph_from_options(
        run, (node_files, edge_file, map_file, cache_file), country, mode, graph_file
    )
    run.track_graph(graph.n_nodes, graph.n_edges)
    strat = attack.AttackStrategy(
        strategy, k_max, recompute=recompute,
        seed=seed if strategy == attack.RANDOM else None,
    )
    traj = attack.run_knockout(source, strat, lgc_only=lgc_only)
    run.warnings.extend(traj.warnings)
    header = ["country", "mode", "strategy", "k", "metric", "raw", "normalized"]
    run.write_csv(f"knockout_{strategy}.csv", header, traj.to_rows(label))
    run.write_json(f"knockout_{strategy}.json", {
        "label": label, "mode": traj.mode, "strategy": traj.criterion,
        "removed": traj.removed, "absent": list(traj.absent),
        "normalized": {m: traj.normalized(m) for m in attack.METRIC_NAMES},
        "raw": {m: traj.raw(m) for m in attack.METRIC_NAMES},
    })
    if baseline_trials:
        base = attack.random_baseline(
            source, k_max, baseline_trials, seed, threads=threads
        )
        run.write_csv(
            "random_baseline.csv",
            ["label", "metric", "k", "mean", "std"],
            base.to_rows(label),
        )
    run.finish()
    click.echo(f"removed {traj.removed}; normalized size: "
               + ", ".join(f"{v:.4f}" for v in traj.normalized("size")))


@main.command("ratio")
@corpus_options
@out_option
@_knockout_options
@handle_errors
def ratio_cmd(node_files, edge_file, map_file, cache_file, out_dir, country, mode,
              graph_file, k_max, recompute, lgc_only):
    """Betweenness-vs-degree knockout effectiveness ratio r(k, metric)."""
    run = Run("ratio", out_dir or _default_out(), {
        "country": country, "mode": mode, "graph": graph_file, "k": k_max,
        "recompute": recompute, "lgc_only": lgc_only,
    })
    label, source, graph = _graph_from_options(
        run, (node_files, edge_file, map_file, cache_file), country, mode, graph_file
    )
    run.track_graph(graph.n_nodes, graph.n_edges)
    rows, deg, bet = attack.strategy_ratio(
        source, k_max, recompute=recompute, lgc_only=lgc_only
    )
    run.warnings.extend(deg.warnings + bet.warnings)
    header = ["country", "mode", "strategy", "k", "metric", "raw", "normalized"]
    run.write_csv("knockout_degree.csv", header, deg.to_rows(label))
    run.write_csv("knockout_betweenness.csv", header, bet.to_rows(label))
    run.write_csv(
        "ratio.csv",
        ["label", "k", "metric", "r", "degenerate"],
        [
            (label, r.k, r.metric,
             "inf" if r.value is not None and np.isinf(r.value) else r.value,
             int(r.degenerate))
            for r in rows
        ],
    )
    run.write_json("ratio.json", {
        "label": label,
        "removed_degree": deg.removed,
        "removed_betweenness": bet.removed,
        "rows": [
            {"k": r.k, "metric": r.metric,
             "r": ("inf" if np.isinf(r.value) else r.value) if r.value is not None else None,
             "degenerate": r.degenerate}
            for r in rows
        ],
    })
    run.finish()
    size_r = {r.k: r.value for r in rows if r.metric == "size"}
    click.echo(json.dumps({"label": label, "size_r": {str(k): v for k, v in sorted(size_r.items())}},
                          sort_keys=True))


@main.command("diversity")
@corpus_options
@out_option
@click.option("--country", required=True)
@handle_errors
def diversity_cmd(node_files, edge_file, map_file, cache_file, out_dir, country):
    """Jurisdiction diversity (inverse-HHI) of a country's intermediaries."""
    run = Run("diversity", out_dir or _default_out(), {"country": country})
    corpus = _corpus_from_options(run, node_files, edge_file, map_file, cache_file)
    slice_ = build_country_slice(corpus, country, BIPARTITE)
    run.track_graph(slice_.graph.n_nodes, slice_.graph.n_edges)
    report = metrics.corpus_diversity_index(corpus, slice_)
    run.warnings.extend(report.flags)
    run.write_json(f"diversity_{slice_.country}.json", report.to_dict())
    run.write_csv(
        f"diversity_{slice_.country}_shares.csv",
        ["jurisdiction", "share"],
        sorted(report.shares.items()),
    )
    run.finish()
    click.echo(json.dumps(
        {"country": slice_.country, "hhi": report.hhi,
         "di_normalized": report.di_normalized, "categories": report.category_count},
        sort_keys=True,
    ))


@main.command("sanctions")
@corpus_options
@out_option
@click.option("--seeds", "seeds_file", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Seed names, one per line; 'name,node_id' pins a match.")
@click.option("--threshold", default=0.85, show_default=True)
@click.option("--method", type=click.Choice(list(sanctions.METHODS)),
              default=sanctions.TOKEN_SET, show_default=True)
@click.option("--radius", default=1, show_default=True)
@click.option("--hop-budget", default=6, show_default=True,
              help="Maximum stitching path length in edges.")
@click.option("--include-addresses", is_flag=True,
              help="Keep address nodes in the ego subgraph export.")
@handle_errors
def sanctions_cmd(node_files, edge_file, map_file, cache_file, out_dir, seeds_file,
                  threshold, method, radius, hop_budget, include_addresses):
    """Match sanctioned names, extract their ego network, stitch components."""
    run = Run("sanctions", out_dir or _default_out(), {
        "seeds": str(seeds_file), "threshold": threshold, "method": method,
        "radius": radius, "hop_budget": hop_budget,
        "include_addresses": include_addresses,
    })
    corpus = _corpus_from_options(run, node_files, edge_file, map_file, cache_file)
    run.track_graph(corpus.n_nodes, corpus.n_edges)
    run.register_input(seeds_file)
    specs = sanctions.load_seed_list(seeds_file)
    seed_ids, match_rows = sanctions.resolve_seeds(
        specs, corpus, threshold=threshold, method=method
    )
    review = []
    for m in match_rows:
        review.append((m.query, m.node_id, m.node_name, m.score, int(m.pinned), m.error))
        for cand_id, cand_name, cand_score in m.candidates:
            if cand_id != m.node_id:
                review.append((m.query, cand_id, cand_name, cand_score, 0, "candidate"))
    run.write_csv(
        "match_review.csv",
        ["query", "node_id", "name", "score", "pinned", "note"],
        review,
    )
    summary = {
        "queries": len(specs),
        "matched": len(seed_ids),
        "seed_ids": seed_ids,
    }
    if seed_ids:
        ego = sanctions.build_ego_subgraph(
            corpus, seed_ids, radius=radius, include_addresses=include_addresses
        )
        run.write_csv(
            "ego_nodes.csv",
            ["node_id", "label", "component"],
            [(n, ego.labels[n], ego.component_map[n]) for n in ego.node_ids.tolist()],
        )
        run.write_csv(
            "ego_edges.csv",
            ["node_id_a", "node_id_b", "label_a", "label_b", "component_a", "component_b"],
            ego.to_rows(),
        )
        stitches = sanctions.stitch_components(
            corpus, ego, hop_budget=hop_budget, include_addresses=include_addresses
        )
        run.write_csv(
            "stitch_paths.csv",
            ["component_a", "component_b", "length", "path"],
            [
                (s.component_a, s.component_b,
                 len(s.path) - 1 if s.bridged else None,
                 " ".join(map(str, s.path)) if s.bridged else "unbridged")
                for s in stitches
            ],
        )
        table = sanctions.tabulate_intermediaries(corpus, seed_ids)
        run.write_csv(
            "intermediary_table.csv",
            ["intermediary", "node_id", "sanctioned_clients", "entities", "clients"],
            [(r.name, r.node_id, r.sanctioned_clients, r.n_entities, r.n_clients)
             for r in table],
        )
        summary.update({
            "ego_nodes": int(len(ego.node_ids)),
            "ego_edges": len(ego.edges),
            "ego_components": ego.n_components,
            "bridged_pairs": sum(1 for s in stitches if s.bridged),
            "intermediaries_tabulated": len(table),
        })
    else:
        run.warnings.append("no seeds matched; ego outputs skipped")
    run.write_json("sanctions_summary.json", summary)
    run.finish()
    click.echo(json.dumps(summary, sort_keys=True))


@main.command("synth")
@out_option
@click.option("--clients", "n_clients", required=True, type=int)
@click.option("--intermediaries", "n_intermediaries", required=True, type=int)
@click.option("--mean-degree", default=1.036, show_default=True)
@click.option("--bias", default=1.0, show_default=True,
              help="Attachment bias: 0 uniform, 1 linear preferential.")
@click.option("--seed", default=0, show_default=True)
@click.option("--entities", "entity_layer", is_flag=True,
              help="Insert one entity per client-intermediary tie (tripartite).")
@handle_errors
def synth_cmd(out_dir, n_clients, n_intermediaries, mean_degree, bias, seed, entity_layer):
    """Generate a seeded synthetic client-intermediary network."""
    config = synth.SynthConfig(
        n_clients=n_clients, n_intermediaries=n_intermediaries,
        mean_client_degree=mean_degree, attachment_bias=bias,
        seed=seed, entity_layer=entity_layer,
    )
    run = Run("synth", out_dir or _default_out(), config.to_dict())
    graph = synth.generate(config)
    run.track_graph(graph.n_nodes, graph.n_edges)
    run.write_text("synth.edges", graph.to_edgelist_text())
    run.write_json("synth_config.json", config.to_dict())
    run.finish()
    click.echo(f"wrote {graph.n_nodes} nodes, {graph.n_edges} edges ({graph.mode})")


if __name__ == "__main__":
    main()
