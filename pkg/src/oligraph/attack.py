"""Knockout experiments: iterative targeted removal of intermediaries.

Only intermediary nodes are attackable. The default ranks victims once on
the step-0 graph (recompute=False); adaptive re-ranking after every removal
sits behind the recompute flag. After each removal, isolated nodes are
pruned, and the four robustness metrics (size, triangles, clustering,
redundancy) are recorded and normalized on their step-0 values.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import metrics
from .errors import DataError
from .graph import BIPARTITE, INTERMEDIARY, AnalysisGraph, CountrySlice

DEGREE = "degree"
BETWEENNESS = "betweenness"
RANDOM = "random"
CRITERIA = (DEGREE, BETWEENNESS, RANDOM)

METRIC_NAMES = ("size", "triangles", "redundancy", "clustering")


@dataclass(frozen=True)
class AttackStrategy:
    criterion: str
    k_max: int
    recompute: bool = False
    seed: int | None = None

    def validate(self):
        if self.criterion not in CRITERIA:
            raise DataError(
                f"unknown criterion {self.criterion!r}; expected one of {CRITERIA}"
            )
        if self.k_max < 1:
            raise DataError("k_max must be >= 1")
        if self.criterion == RANDOM and self.seed is None:
            raise DataError("random strategy requires a seed")


@dataclass(frozen=True)
class RobustnessSnapshot:
    step: int
    size: int
    triangles: int
    clustering: float
    redundancy_raw: int


@dataclass
class KnockoutTrajectory:
    mode: str
    criterion: str
    removed: list
    steps: list
    absent: tuple = ()
    warnings: list = field(default_factory=list)

    @property
    def k_max(self) -> int:
        return len(self.steps) - 1

    def raw(self, metric):
        if metric == "size":
            return [s.size for s in self.steps]
        if metric == "triangles":
            return [s.triangles for s in self.steps]
        if metric == "clustering":
            return [s.clustering for s in self.steps]
        if metric == "redundancy":
            return [s.redundancy_raw for s in self.steps]
        raise DataError(f"unknown metric {metric!r}")

    def normalized(self, metric):
        """Metric trajectory divided by its step-0 value; None per step when
        the metric is absent (zero baseline, e.g. triangles in bipartite mode)."""
        values = self.raw(metric)
        if metric in self.absent:
            return [None] * len(values)
        return [v / values[0] for v in values]

    def to_rows(self, label=""):
        rows = []
        for metric in METRIC_NAMES:
            raws = self.raw(metric)
            norms = self.normalized(metric)
            for k in range(len(self.steps)):
                rows.append(
                    (label, self.mode, self.criterion, k, metric, raws[k], norms[k])
                )
        return rows


def _as_graph(source) -> AnalysisGraph:
    return source.graph if isinstance(source, CountrySlice) else source


def _snapshot(graph: AnalysisGraph, step: int) -> RobustnessSnapshot:
    vals = metrics.snapshot_metrics(graph)
    return RobustnessSnapshot(
        step=step,
        size=vals["size"],
        triangles=vals["triangles"],
        clustering=vals["clustering"],
        redundancy_raw=vals["redundancy_raw"],
    )


def _rank(graph: AnalysisGraph, criterion: str, rng=None):
    """Attackable intermediaries, best target first; ties by ascending id."""
    inter_ids = graph.ids_of_kind(INTERMEDIARY)
    if criterion == DEGREE:
        degs = graph.degrees()[graph.kinds == INTERMEDIARY]
        order = np.lexsort((inter_ids, -degs))
        return inter_ids[order]
    if criterion == BETWEENNESS:
        scores = metrics.betweenness(graph, "intermediaries")
        arr = np.asarray([scores[int(i)] for i in inter_ids])
        order = np.lexsort((inter_ids, -arr))
        return inter_ids[order]
    return inter_ids[rng.permutation(len(inter_ids))]


def run_knockout(source, strategy: AttackStrategy, lgc_only=False) -> KnockoutTrajectory:
    """Remove the top-ranked intermediary k_max times, recording metrics.

    Step 0 is the as-built graph (isolated nodes included; they drop out at
    the first pruned step). With lgc_only the experiment runs on the largest
    connected component instead. A k_max beyond the available intermediaries
    truncates the trajectory with a warning rather than failing.
    """
    strategy.validate()
    graph = _as_graph(source)
    if lgc_only:
        graph = graph.largest_component()
    n_inter = len(graph.ids_of_kind(INTERMEDIARY))
    if n_inter == 0:
        raise DataError("graph has no intermediaries to attack")
    warnings_ = []
    k_max = strategy.k_max
    if k_max > n_inter:
        warnings_.append(
            f"k_max {k_max} exceeds {n_inter} intermediaries; trajectory truncated"
        )
        k_max = n_inter

    absent = []
    base = _snapshot(graph, 0)
    if graph.mode == BIPARTITE:
        absent += ["triangles", "clustering"]
        warnings_.append("bipartite mode: triangles and clustering reported absent")
    else:
        if base.triangles == 0:
            absent += ["triangles", "clustering"]
            warnings_.append("baseline has no triangles; triangle metrics absent")
    if base.redundancy_raw == 0:
        absent.append("redundancy")
        warnings_.append("baseline has no connected pairs; redundancy absent")

    rng = (
        np.random.Generator(np.random.PCG64(strategy.seed))
        if strategy.criterion == RANDOM
        else None
    )
    ranking = list(_rank(graph, strategy.criterion, rng)) if not strategy.recompute else None

    steps = [base]
    removed = []
    current = graph
    for k in range(1, k_max + 1):
        if strategy.recompute:
            candidates = _rank(current, strategy.criterion, rng)
            victim = int(candidates[0])
        else:
            victim = None
            while ranking:
                cand = int(ranking.pop(0))
                if current.has_node(cand):
                    victim = cand
                    break
            if victim is None:
                warnings_.append(f"ran out of intermediaries at step {k}")
                break
        current = current.remove_nodes([victim], prune_isolated=True)
        removed.append(victim)
        steps.append(_snapshot(current, k))
    return KnockoutTrajectory(
        mode=graph.mode,
        criterion=strategy.criterion,
        removed=removed,
        steps=steps,
        absent=tuple(absent),
        warnings=warnings_,
    )


@dataclass(frozen=True)
class RatioRow:
    k: int
    metric: str
    value: float | None
    degenerate: bool = False


def strategy_ratio(source, k_max, recompute=False, lgc_only=False):
    """Per-step ratio r = retained(betweenness attack) / retained(degree attack).

    r > 1 means the betweenness attack left more of the network intact, so
    the degree attack was more effective; r = 1 whenever both criteria chose
    the same victim set. A zero degree-side value with a nonzero betweenness
    value yields an inf sentinel (flagged degenerate); zero over zero means
    both attacks flattened the metric and reports 1.0 (also flagged).

    Returns (rows, degree_trajectory, betweenness_trajectory).
    """
    deg = run_knockout(source, AttackStrategy(DEGREE, k_max, recompute=recompute), lgc_only)
    bet = run_knockout(source, AttackStrategy(BETWEENNESS, k_max, recompute=recompute), lgc_only)
    rows = []
    n_steps = min(len(deg.steps), len(bet.steps))
    for metric in METRIC_NAMES:
        nd = deg.normalized(metric)
        nb = bet.normalized(metric)
        for k in range(n_steps):
            if nd[k] is None or nb[k] is None:
                rows.append(RatioRow(k=k, metric=metric, value=None))
            elif nd[k] == 0.0:
                if nb[k] == 0.0:
                    rows.append(RatioRow(k=k, metric=metric, value=1.0, degenerate=True))
                else:
                    rows.append(RatioRow(k=k, metric=metric, value=math.inf, degenerate=True))
            else:
                rows.append(RatioRow(k=k, metric=metric, value=nb[k] / nd[k]))
    return rows, deg, bet


@dataclass
class RandomBaseline:
    n_trials: int
    seed: int
    k_max: int
    mean: dict
    std: dict
    absent: tuple

    def to_rows(self, label=""):
        rows = []
        for metric in METRIC_NAMES:
            for k in range(self.k_max + 1):
                m = self.mean[metric][k] if metric not in self.absent else None
                s = self.std[metric][k] if metric not in self.absent else None
                rows.append((label, metric, k, m, s))
        return rows


def random_baseline(source, k_max, n_trials, seed, threads=1) -> RandomBaseline:
    """Mean and std of normalized metrics over seeded uniform-random attacks.

    Trial t uses seed + t, and results are reduced in trial order, so the
    outcome does not depend on the thread count.
    """
    if n_trials < 1:
        raise DataError("n_trials must be >= 1")

    def one(trial):
        return run_knockout(
            source, AttackStrategy(RANDOM, k_max, seed=seed + trial)
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trajectories = list(pool.map(one, range(n_trials)))
    else:
        trajectories = [one(t) for t in range(n_trials)]

    absent = trajectories[0].absent
    steps = min(len(t.steps) for t in trajectories)
    mean, std = {}, {}
    for metric in METRIC_NAMES:
        if metric in absent:
            mean[metric] = [None] * steps
            std[metric] = [None] * steps
            continue
        stacked = np.array([t.normalized(metric)[:steps] for t in trajectories])
        mean[metric] = stacked.mean(axis=0).tolist()
        std[metric] = stacked.std(axis=0).tolist()
    return RandomBaseline(
        n_trials=n_trials,
        seed=seed,
        k_max=steps - 1,
        mean=mean,
        std=std,
        absent=absent,
    )
