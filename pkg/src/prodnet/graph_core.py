"""Directed weighted production networks and degree/strength computations.

Edge direction follows the supplier -> buyer convention: the table cell
(row i, column j) means industry i buys from industry j, so it becomes
the edge j -> i. Out-degree of a node therefore counts the industries it
supplies. Self-supply (diagonal) cells never become edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, TextIO

import csv

import numpy as np

from .ingest import IndustryMeta, InputOutputTable


@dataclass(frozen=True, eq=False)
class ProductionNetwork:
    """Simple directed graph with positive edge weights.

    Nodes keep their industry metadata and order; edges are parallel
    arrays (src index, dst index, weight). No self-loops, at most one
    edge per ordered pair. Immutable after construction.
    """

    nodes: tuple[IndustryMeta, ...]
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        src = np.array(self.src, dtype=np.int64)
        dst = np.array(self.dst, dtype=np.int64)
        weight = np.array(self.weight, dtype=np.float64)
        for arr in (src, dst, weight):
            arr.setflags(write=False)
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "weight", weight)

        n = len(self.nodes)
        if not (src.shape == dst.shape == weight.shape) or src.ndim != 1:
            raise ValueError("edge arrays must be 1-d and equally sized")
        if src.size:
            if src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n:
                raise ValueError("edge endpoint index out of range")
            if np.any(src == dst):
                raise ValueError("self-loops are not allowed")
            if np.any(weight <= 0) or not np.all(np.isfinite(weight)):
                raise ValueError("edge weights must be finite and strictly positive")
            if np.unique(src * n + dst).size != src.size:
                raise ValueError("parallel edges are not allowed")

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return int(self.src.size)

    @property
    def codes(self) -> list[str]:
        return [m.code for m in self.nodes]

    @property
    def total_weight(self) -> float:
        return float(self.weight.sum())

    def edges(self) -> Iterator[tuple[int, int, float]]:
        for s, d, w in zip(self.src, self.dst, self.weight):
            yield int(s), int(d), float(w)

    def __eq__(self, other) -> bool:
        # graph equality: same nodes, same edge set (order independent)
        if not isinstance(other, ProductionNetwork):
            return NotImplemented
        if self.nodes != other.nodes or self.n_edges != other.n_edges:
            return False
        a = np.lexsort((self.dst, self.src))
        b = np.lexsort((other.dst, other.src))
        return (
            np.array_equal(self.src[a], other.src[b])
            and np.array_equal(self.dst[a], other.dst[b])
            and np.array_equal(self.weight[a], other.weight[b])
        )


@dataclass(frozen=True, eq=False)
class DegreeVector:
    """Per-node degree counts or strength sums for one direction."""

    values: np.ndarray
    direction: str
    weighted: bool


def build_network(table: InputOutputTable, min_weight: float = 0.0) -> ProductionNetwork:
    """Build the directed network: cell (i, j) > min_weight becomes edge j -> i.

    Diagonal cells are always dropped; min_weight is a strict lower
    bound, so zero cells never create edges at the default.
    """
    if min_weight < 0:
        raise ValueError("min_weight must be non-negative")
    mask = table.coefficients > min_weight
    np.fill_diagonal(mask, False)
    rows, cols = np.nonzero(mask)
    return ProductionNetwork(
        nodes=table.industries,
        src=cols,
        dst=rows,
        weight=table.coefficients[rows, cols],
    )


def prune(
    net: ProductionNetwork,
    zeta: float,
    drop_isolated: bool = True,
    *,
    strict: bool = False,
) -> ProductionNetwork:
    """Keep edges with weight >= zeta (or > zeta when strict).

    With drop_isolated, nodes left without any incident edge are removed
    and the survivors keep their relative order and metadata.
    """
    if zeta < 0:
        raise ValueError("zeta must be non-negative")
    keep = net.weight > zeta if strict else net.weight >= zeta
    src, dst, weight = net.src[keep], net.dst[keep], net.weight[keep]
    nodes = net.nodes
    if drop_isolated:
        used = np.zeros(net.n_nodes, dtype=bool)
        used[src] = True
        used[dst] = True
        new_index = np.cumsum(used) - 1
        nodes = tuple(m for m, u in zip(net.nodes, used) if u)
        src = new_index[src]
        dst = new_index[dst]
    return ProductionNetwork(nodes, src, dst, weight)


def degrees(net: ProductionNetwork, direction: str, weighted: bool) -> DegreeVector:
    """Unweighted degrees (edge counts) or strengths (weight sums) per node."""
    if direction not in ("in", "out"):
        raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")
    idx = net.dst if direction == "in" else net.src
    if weighted:
        values = np.bincount(idx, weights=net.weight, minlength=net.n_nodes)
    else:
        values = np.bincount(idx, minlength=net.n_nodes).astype(np.int64)
    return DegreeVector(values=values, direction=direction, weighted=weighted)


def reverse(net: ProductionNetwork) -> ProductionNetwork:
    """Flip every edge direction, keeping weights and node metadata."""
    return ProductionNetwork(net.nodes, net.dst, net.src, net.weight)


def scale_weights(net: ProductionNetwork, factor: float) -> ProductionNetwork:
    """Multiply every edge weight by a positive constant."""
    if factor <= 0:
        raise ValueError("factor must be positive")
    return ProductionNetwork(net.nodes, net.src, net.dst, net.weight * factor)


def write_edge_list(net: ProductionNetwork, stream: TextIO) -> None:
    """Edge-list CSV [source_code, target_code, weight], sorted by codes."""
    codes = net.codes
    order = sorted(range(net.n_edges), key=lambda k: (codes[net.src[k]], codes[net.dst[k]]))
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["source_code", "target_code", "weight"])
    for k in order:
        writer.writerow([codes[net.src[k]], codes[net.dst[k]], repr(float(net.weight[k]))])


def write_node_list(net: ProductionNetwork, stream: TextIO) -> None:
    """Node-list CSV [code, name], sorted by code."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["code", "name"])
    for meta in sorted(net.nodes, key=lambda m: m.code):
        writer.writerow([meta.code, meta.name])
