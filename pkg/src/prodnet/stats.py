"""Empirical distribution machinery.

Two-sample Kolmogorov-Smirnov statistic computed exactly on the merged
sorted sample (correct under ties), degree-sample extraction, and
log-binned densities for heavy-tailed strength distributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptySampleError
from .graph_core import ProductionNetwork, degrees
from .serialize import gstr

_KOLMOGOROV_TERM_TOL = 1e-12


@dataclass(frozen=True)
class KSResult:
    """Supremum ECDF distance between two samples, with asymptotic p-value."""

    statistic: float
    p_value: float | None
    n1: int
    n2: int


@dataclass(frozen=True, eq=False)
class BinnedDistribution:
    """Histogram density over logarithmically spaced bins.

    Densities are normalized so that sum(density * bin_width) == 1.
    ``n_zeros_excluded`` reports how many zero values were dropped before
    binning.
    """

    bin_edges: np.ndarray
    densities: np.ndarray
    scale: str
    direction: str | None
    weighted: bool | None
    n_values: int
    n_zeros_excluded: int


def _kolmogorov_sf(lam: float) -> float:
    """Asymptotic two-sided Kolmogorov survival function.

    Alternating series 2 * sum_k (-1)^(k-1) exp(-2 k^2 lam^2), truncated
    once terms drop below 1e-12. For very small lam the series does not
    settle within 100 terms and the survival probability is 1 anyway.
    """
    if lam <= 0:
        return 1.0
    total = 0.0
    sign = 1.0
    for k in range(1, 101):
        term = 2.0 * math.exp(-2.0 * k * k * lam * lam)
        total += sign * term
        if term < _KOLMOGOROV_TERM_TOL:
            return min(max(total, 0.0), 1.0)
        sign = -sign
    return 1.0


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> KSResult:
    """Exact two-sample KS statistic via the sorted-merge ECDF method.

    Both ECDFs are evaluated after all tied values are consumed
    (right-continuous step functions), so heavily tied integer samples
    are handled exactly. The p-value uses the asymptotic Kolmogorov
    distribution with effective size n1*n2/(n1+n2).
    """
    xa = np.sort(np.asarray(a, dtype=np.float64))
    xb = np.sort(np.asarray(b, dtype=np.float64))
    n1, n2 = xa.size, xb.size
    if n1 == 0 or n2 == 0:
        raise EmptySampleError("ks_two_sample requires two non-empty samples")
    merged = np.concatenate([xa, xb])
    cdf_a = np.searchsorted(xa, merged, side="right") / n1
    cdf_b = np.searchsorted(xb, merged, side="right") / n2
    statistic = float(np.max(np.abs(cdf_a - cdf_b)))
    effective = n1 * n2 / (n1 + n2)
    p_value = _kolmogorov_sf(math.sqrt(effective) * statistic)
    return KSResult(statistic=statistic, p_value=p_value, n1=n1, n2=n2)


def degree_sample(net: ProductionNetwork, direction: str, weighted: bool) -> np.ndarray:
    """Per-node degree (or strength) values over the graph's node set."""
    return degrees(net, direction, weighted).values.astype(np.float64)


def log_binned(
    sample: Sequence[float],
    bins_per_decade: int,
    *,
    direction: str | None = None,
    weighted: bool | None = None,
) -> BinnedDistribution:
    """Bin positive values into a geometric grid of bins_per_decade bins.

    Bin edges start at the sample minimum and step by 10^(1/bins_per_decade);
    the grid extends one edge past the maximum so every value lands
    strictly inside a half-open bin. Zeros are excluded and counted;
    negative values are rejected.
    """
    if bins_per_decade < 1:
        raise ValueError("bins_per_decade must be a positive integer")
    arr = np.asarray(sample, dtype=np.float64)
    if arr.size == 0:
        raise EmptySampleError("log_binned requires a non-empty sample")
    if np.any(arr < 0):
        raise ValueError("log_binned requires non-negative values")
    kept = arr[arr > 0]
    n_zeros = int(arr.size - kept.size)
    if kept.size == 0:
        raise EmptySampleError("log_binned requires at least one positive value")

    lo = float(kept.min())
    hi = float(kept.max())
    ratio = 10.0 ** (1.0 / bins_per_decade)
    n_bins = int(math.floor(math.log10(hi / lo) * bins_per_decade + 1e-9)) + 1
    while lo * ratio**n_bins <= hi:  # guard against floating roundoff
        n_bins += 1
    edges = lo * ratio ** np.arange(n_bins + 1)
    edges[0] = lo

    counts, _ = np.histogram(kept, bins=edges)
    while counts.size > 1 and counts[-1] == 0:  # roundoff can leave a spare bin
        counts = counts[:-1]
        edges = edges[:-1]
    widths = np.diff(edges)
    densities = counts / (kept.size * widths)
    return BinnedDistribution(
        bin_edges=edges,
        densities=densities,
        scale="log",
        direction=direction,
        weighted=weighted,
        n_values=int(kept.size),
        n_zeros_excluded=n_zeros,
    )


def write_distribution_csv(dist: BinnedDistribution, stream) -> None:
    """Plot-ready CSV [bin_left, bin_right, density] at 10 significant digits."""
    stream.write("bin_left,bin_right,density\n")
    for left, right, dens in zip(dist.bin_edges[:-1], dist.bin_edges[1:], dist.densities):
        stream.write(f"{gstr(left)},{gstr(right)},{gstr(dens)}\n")
