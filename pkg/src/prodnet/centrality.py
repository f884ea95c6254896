"""Node importance: weighted out-strength and PageRank on the reversed graph.

Out-strength measures how much an industry supplies overall; PageRank on
the reversed graph measures how important a supplier is given how
important its buyers are. Ranks break ties by industry code ascending.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, MetricMismatchError
from .graph_core import ProductionNetwork, degrees, reverse

METRICS = ("out_strength", "pagerank_out")

DEFAULT_DAMPING = 0.85
DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 1000


@dataclass(frozen=True)
class CentralityScore:
    code: str
    name: str
    metric: str
    value: float
    rank: int


@dataclass(frozen=True)
class CentralityReport:
    """Top-k industries for one metric at one cut-off."""

    zeta: float
    metric: str
    top: tuple[CentralityScore, ...]
    graph_size: tuple[int, int]

    def as_dict(self) -> dict:
        return {
            "zeta": self.zeta,
            "metric": self.metric,
            "graph": {"nodes": self.graph_size[0], "edges": self.graph_size[1]},
            "top": [
                {"rank": s.rank, "code": s.code, "name": s.name, "value": s.value}
                for s in self.top
            ],
        }


@dataclass(frozen=True)
class DriftRow:
    code: str
    name: str
    ranks: tuple[int | None, ...]
    max_drift: int
    dropped: bool


@dataclass(frozen=True)
class DriftTable:
    """Rank trajectories across cut-offs for every industry seen in a top list."""

    metric: str
    zetas: tuple[float, ...]
    rows: tuple[DriftRow, ...]


def pagerank(
    net: ProductionNetwork,
    damping: float = DEFAULT_DAMPING,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> np.ndarray:
    """Weighted PageRank scores summing to 1.

    Fixed point of score = (1-d)/n + d * (weighted in-flow + dangling
    mass spread uniformly), iterated until the L1 change drops below tol.
    Nodes without out-edges redistribute their whole mass uniformly.
    Raises ConvergenceError (carrying the last iterate and residual) if
    max_iter is reached first.
    """
    n = net.n_nodes
    if n == 0:
        raise ValueError("pagerank requires a non-empty graph")
    if not 0.0 < damping < 1.0:
        raise ValueError("damping must lie strictly between 0 and 1")
    out_weight = np.bincount(net.src, weights=net.weight, minlength=n)
    dangling = out_weight == 0
    coef = net.weight / out_weight[net.src] if net.n_edges else net.weight
    scores = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        inflow = np.bincount(net.dst, weights=scores[net.src] * coef, minlength=n)
        new_scores = (1.0 - damping) / n + damping * (
            inflow + scores[dangling].sum() / n
        )
        residual = float(np.abs(new_scores - scores).sum())
        scores = new_scores
        if residual < tol:
            return scores
    raise ConvergenceError(
        f"pagerank did not reach tol={tol} within {max_iter} iterations",
        last_iterate=scores,
        residual=residual,
    )


def pagerank_reversed(
    net: ProductionNetwork,
    damping: float = DEFAULT_DAMPING,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> np.ndarray:
    """PageRank computed after reversing every edge (weights kept)."""
    return pagerank(reverse(net), damping=damping, tol=tol, max_iter=max_iter)


def rank(
    net: ProductionNetwork,
    metric: str,
    k: int = 20,
    *,
    zeta: float = 0.0,
    damping: float = DEFAULT_DAMPING,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> CentralityReport:
    """Top-k industries by the chosen metric, ties broken by code ascending."""
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    if k < 1:
        raise ValueError("k must be a positive integer")
    if net.n_nodes == 0:
        raise ValueError("rank requires a non-empty graph")
    if metric == "out_strength":
        values = degrees(net, "out", weighted=True).values
    else:
        values = pagerank_reversed(net, damping=damping, tol=tol, max_iter=max_iter)
    codes = net.codes
    order = sorted(range(net.n_nodes), key=lambda i: (-values[i], codes[i]))
    if k > net.n_nodes:
        warnings.warn(
            f"k={k} exceeds the {net.n_nodes} nodes present; ranking truncated",
            stacklevel=2,
        )
    top = tuple(
        CentralityScore(
            code=net.nodes[i].code,
            name=net.nodes[i].name,
            metric=metric,
            value=float(values[i]),
            rank=pos + 1,
        )
        for pos, i in enumerate(order[: min(k, net.n_nodes)])
    )
    return CentralityReport(
        zeta=zeta, metric=metric, top=top, graph_size=(net.n_nodes, net.n_edges)
    )


def ranking_drift(reports: list[CentralityReport]) -> DriftTable:
    """Rank-per-cut-off table for every industry appearing in any top list.

    max_drift is the spread between an industry's best and worst rank
    over the cut-offs where it appears; an industry is flagged dropped
    when it is present at some cut-off and absent at a later one. Rows
    sort by max_drift descending, then code.
    """
    if len(reports) < 2:
        raise ValueError("ranking_drift needs at least two reports")
    metric = reports[0].metric
    if any(r.metric != metric for r in reports):
        raise MetricMismatchError("all reports must use the same metric")
    ordered = sorted(reports, key=lambda r: r.zeta)
    zetas = tuple(r.zeta for r in ordered)

    names: dict[str, str] = {}
    ranks: dict[str, list[int | None]] = {}
    for col, report in enumerate(ordered):
        for score in report.top:
            if score.code not in ranks:
                ranks[score.code] = [None] * len(ordered)
                names[score.code] = score.name
            ranks[score.code][col] = score.rank

    rows = []
    for code, row in ranks.items():
        present = [r for r in row if r is not None]
        max_drift = max(present) - min(present) if len(present) > 1 else 0
        seen = False
        dropped = False
        for r in row:
            if r is not None:
                seen = True
            elif seen:
                dropped = True
        rows.append(
            DriftRow(
                code=code,
                name=names[code],
                ranks=tuple(row),
                max_drift=max_drift,
                dropped=dropped,
            )
        )
    rows.sort(key=lambda r: (-r.max_drift, r.code))
    return DriftTable(metric=metric, zetas=zetas, rows=tuple(rows))


def write_drift_csv(table: DriftTable, stream, *, metric_column: bool = False) -> None:
    """Drift CSV [code, name, rank@zeta..., max_drift, dropped].

    With metric_column a leading ``metric`` column is added so several
    tables can share one file.
    """
    from .serialize import gstr

    writer = csv.writer(stream, lineterminator="\n")
    header = ["code", "name", *(f"rank@{gstr(z)}" for z in table.zetas), "max_drift", "dropped"]
    if metric_column:
        header.insert(0, "metric")
    writer.writerow(header)
    for row in table.rows:
        cells = [
            row.code,
            row.name,
            *("" if r is None else str(r) for r in row.ranks),
            str(row.max_drift),
            "true" if row.dropped else "false",
        ]
        if metric_column:
            cells.insert(0, table.metric)
        writer.writerow(cells)
