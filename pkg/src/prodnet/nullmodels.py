"""Null-model graph generators and growth-parameter fitting.

Two matched baselines for an observed directed network:

* uniform random: an exact uniform sample among simple directed graphs
  with the requested node and edge counts;
* scale-free: a directed preferential-attachment growth process with
  three rules applied repeatedly until the node budget is reached, then
  simplified (parallel edges collapsed, self-loops removed). With
  probability alpha a new node v is added with an edge v -> w, w picked
  proportionally to in-degree + delta_in; with probability beta an edge
  v -> w is added between existing nodes (v by out-degree + delta_out,
  w by in-degree + delta_in); with probability gamma a new node w is
  added with an edge v -> w, v picked by out-degree + delta_out.

Growth parameters can be fitted to an observed network by estimating the
in- and out-degree power-law tail exponents (discrete maximum likelihood,
x_min selected by KS-distance minimisation) and inverting the exponent
relations of the growth model:

    c_in  = 1 + (1 + delta_in  * (alpha + gamma)) / (alpha + beta)
    c_out = 1 + (1 + delta_out * (alpha + gamma)) / (beta + gamma)

together with alpha + beta + gamma = 1. All randomness goes through
numpy's default generator (PCG64); the same seed always reproduces the
same graph.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import zeta as hurwitz_zeta

from .errors import CapacityError, FitError
from .graph_core import IndustryMeta, ProductionNetwork, degrees

DEFAULT_DELTA_IN = 0.2
DEFAULT_DELTA_OUT = 0.0

# floor applied when a fitted point must be pushed back onto the simplex
SIMPLEX_EPS = 0.01

# tail fits need at least this many observations at or above x_min
MIN_TAIL_SIZE = 10

_EXPONENT_BOUNDS = (1.0001, 25.0)

# linear-index sampling is exact and fast; fall back to rejection
# sampling only when the pair space would not fit comfortably in memory
_DENSE_PAIR_LIMIT = 8_000_000


@dataclass(frozen=True)
class ScaleFreeParams:
    """Growth probabilities (alpha, beta, gamma) and attachment offsets."""

    alpha: float
    beta: float
    gamma: float
    delta_in: float
    delta_out: float

    def __post_init__(self):
        for label, p in (("alpha", self.alpha), ("beta", self.beta), ("gamma", self.gamma)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{label}={p} outside [0, 1]")
        if abs(self.alpha + self.beta + self.gamma - 1.0) > 1e-9:
            raise ValueError("alpha + beta + gamma must equal 1")
        if self.alpha + self.gamma <= 0.0:
            raise ValueError("alpha + gamma must be positive (growth must add nodes)")
        if self.delta_in < 0 or self.delta_out < 0:
            raise ValueError("delta_in and delta_out must be non-negative")


# safe defaults when a fit fails and a sweep still needs a generator
FALLBACK_PARAMS = ScaleFreeParams(
    alpha=0.41, beta=0.54, gamma=0.05,
    delta_in=DEFAULT_DELTA_IN, delta_out=DEFAULT_DELTA_OUT,
)


@dataclass(frozen=True)
class GeneratedGraph:
    """A generated null graph plus the recipe that produced it."""

    graph: ProductionNetwork
    model: str
    seed: int
    n_requested: int
    m_requested: int | None = None
    params: ScaleFreeParams | None = None
    growth_steps: int | None = None


@dataclass(frozen=True)
class TailFit:
    """Discrete power-law tail fit of one degree sample."""

    exponent: float
    x_min: int
    ks_distance: float
    n_tail: int


@dataclass(frozen=True)
class ParamFit:
    """Fitted growth parameters plus the tail exponents behind them."""

    params: ScaleFreeParams
    c_in: float
    c_out: float
    x_min_in: int
    x_min_out: int
    clamped: bool

    def to_json_record(self) -> dict:
        return {
            "alpha": self.params.alpha,
            "beta": self.params.beta,
            "gamma": self.params.gamma,
            "delta_in": self.params.delta_in,
            "delta_out": self.params.delta_out,
            "c_in": self.c_in,
            "c_out": self.c_out,
            "x_min_in": self.x_min_in,
            "x_min_out": self.x_min_out,
        }


def _synthetic_nodes(n: int) -> tuple[IndustryMeta, ...]:
    return tuple(IndustryMeta(code=f"n{i:06d}") for i in range(n))


def gen_random(n: int, m: int, seed: int) -> GeneratedGraph:
    """Uniform simple directed graph with exactly n nodes and m edges."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    if m < 0:
        raise ValueError("m must be non-negative")
    capacity = n * (n - 1)
    if m > capacity:
        raise CapacityError(
            f"m={m} exceeds the {capacity} possible edges of a simple directed graph on {n} nodes"
        )
    rng = np.random.default_rng(seed)
    if capacity <= _DENSE_PAIR_LIMIT:
        picks = rng.choice(capacity, size=m, replace=False)
    else:
        chosen: set[int] = set()
        while len(chosen) < m:
            k = int(rng.integers(capacity))
            chosen.add(k)
        picks = np.sort(np.fromiter(chosen, dtype=np.int64, count=m))
    picks = np.asarray(picks, dtype=np.int64)
    src = picks // (n - 1) if n > 1 else picks
    rem = picks % (n - 1) if n > 1 else picks
    dst = np.where(rem < src, rem, rem + 1)
    graph = ProductionNetwork(
        _synthetic_nodes(n), src, dst, np.ones(m, dtype=np.float64)
    )
    return GeneratedGraph(graph=graph, model="random", seed=seed, n_requested=n, m_requested=m)


def _pick_endpoint(rng, endpoints: list[int], n_nodes: int, delta: float) -> int:
    """Sample a node with probability (degree + delta) / (m + delta * n).

    ``endpoints`` lists one entry per edge (its source for out-degree
    picks, its target for in-degree picks), so picking a uniform entry
    is a degree-proportional pick. When the total mass is zero the pick
    is uniform over nodes.
    """
    m = len(endpoints)
    total = m + delta * n_nodes
    if total <= 0:
        return int(rng.integers(n_nodes))
    if rng.random() * total < m:
        return endpoints[int(rng.integers(m))]
    return int(rng.integers(n_nodes))


def gen_scale_free(n: int, params: ScaleFreeParams, seed: int) -> GeneratedGraph:
    """Grow a directed graph to n nodes, then simplify it.

    Growth starts from a single isolated node; each step adds exactly
    one edge (and, for the alpha/gamma rules, one node). The multigraph
    produced by the growth is simplified at the end: self-loops dropped,
    parallel edges collapsed.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    rng = np.random.default_rng(seed)
    ab = params.alpha + params.beta
    src_list: list[int] = []
    dst_list: list[int] = []
    n_cur = 1
    while n_cur < n:
        r = rng.random()
        if r < params.alpha:
            w = _pick_endpoint(rng, dst_list, n_cur, params.delta_in)
            v = n_cur
            n_cur += 1
        elif r < ab:
            v = _pick_endpoint(rng, src_list, n_cur, params.delta_out)
            w = _pick_endpoint(rng, dst_list, n_cur, params.delta_in)
        else:
            v = _pick_endpoint(rng, src_list, n_cur, params.delta_out)
            w = n_cur
            n_cur += 1
        src_list.append(v)
        dst_list.append(w)

    steps = len(src_list)
    if steps:
        src = np.asarray(src_list, dtype=np.int64)
        dst = np.asarray(dst_list, dtype=np.int64)
        pair = np.unique(src * n + dst)
        src, dst = pair // n, pair % n
        loop_free = src != dst
        src, dst = src[loop_free], dst[loop_free]
    else:
        src = np.zeros(0, dtype=np.int64)
        dst = np.zeros(0, dtype=np.int64)
    graph = ProductionNetwork(
        _synthetic_nodes(n), src, dst, np.ones(src.size, dtype=np.float64)
    )
    return GeneratedGraph(
        graph=graph,
        model="scale_free",
        seed=seed,
        n_requested=n,
        params=params,
        growth_steps=steps,
    )


def fit_tail_exponent(values, min_tail: int = MIN_TAIL_SIZE) -> TailFit:
    """Fit a discrete power-law tail to a degree sample.

    For every candidate x_min (each distinct positive value), the tail
    exponent is the discrete maximum-likelihood estimate and the
    candidate's score is the KS distance between the empirical tail CDF
    and the fitted model CDF; the candidate with the smallest distance
    wins. Raises FitError when the sample has no resolvable tail
    (fewer than two distinct positive values, tails always smaller than
    ``min_tail``, or an exponent stuck at the search boundary).
    """
    vals = np.asarray(values)
    pos = np.sort(vals[vals >= 1].astype(np.int64))
    uniq = np.unique(pos)
    if pos.size < min_tail or uniq.size < 2:
        raise FitError("degree sample has no resolvable power-law tail")

    # suffix sums of log(x) make the likelihood O(1) per candidate x_min
    logs = np.log(pos.astype(np.float64))
    suffix = np.concatenate([np.cumsum(logs[::-1])[::-1], [0.0]])

    best: TailFit | None = None
    for x_min in uniq:
        start = int(np.searchsorted(pos, x_min, side="left"))
        n_tail = pos.size - start
        if n_tail < min_tail:
            break  # candidates ascend, tails only shrink
        tail_uniq = uniq[uniq >= x_min]
        if tail_uniq.size < 2:
            break
        log_sum = suffix[start]

        def neg_loglik(a: float) -> float:
            return n_tail * math.log(hurwitz_zeta(a, x_min)) + a * log_sum

        res = minimize_scalar(
            neg_loglik, bounds=_EXPONENT_BOUNDS, method="bounded",
            options={"xatol": 1e-6},
        )
        exponent = float(res.x)
        norm = hurwitz_zeta(exponent, x_min)
        model_cdf = 1.0 - hurwitz_zeta(exponent, tail_uniq + 1) / norm
        ecdf = (np.searchsorted(pos, tail_uniq, side="right") - start) / n_tail
        distance = float(np.max(np.abs(ecdf - model_cdf)))
        if best is None or distance < best.ks_distance:
            best = TailFit(exponent=exponent, x_min=int(x_min),
                           ks_distance=distance, n_tail=n_tail)

    if best is None:
        raise FitError(f"no candidate x_min leaves a tail of at least {min_tail} points")
    lo, hi = _EXPONENT_BOUNDS
    if best.exponent <= lo + 0.05 or best.exponent >= hi - 0.1:
        raise FitError(f"tail exponent {best.exponent:.3f} pinned at the search boundary")
    return best


def solve_growth_params(
    c_in: float,
    c_out: float,
    delta_in: float,
    delta_out: float,
) -> tuple[ScaleFreeParams, bool]:
    """Invert the growth-model exponent relations for (alpha, beta, gamma).

    The two exponent relations plus alpha + beta + gamma = 1 reduce to a
    2x2 linear system in (alpha, beta). Solutions slightly outside the
    probability simplex are clamped back onto it (with a warning);
    solutions far outside raise FitError carrying the raw exponents.
    Returns the parameters and whether clamping changed them.
    """
    ci, co = c_in - 1.0, c_out - 1.0
    if ci <= 0 or co <= 0:
        raise FitError(
            f"tail exponents must exceed 1 (got c_in={c_in:.4g}, c_out={c_out:.4g})",
            c_in=c_in, c_out=c_out,
        )
    matrix = np.array([[ci, ci + delta_in], [co, -delta_out]], dtype=np.float64)
    rhs = np.array([1.0 + delta_in, co - 1.0 - delta_out], dtype=np.float64)
    det = float(np.linalg.det(matrix))
    if abs(det) < 1e-12:
        raise FitError(
            "exponent relations are degenerate for the supplied deltas",
            c_in=c_in, c_out=c_out,
        )
    alpha, beta = np.linalg.solve(matrix, rhs)
    raw = np.array([alpha, beta, 1.0 - alpha - beta])
    if not np.all(np.isfinite(raw)) or raw.min() < -0.25 or raw.max() > 1.25:
        raise FitError(
            f"no growth-parameter solution inside the simplex: raw (alpha, beta, gamma) = "
            f"({raw[0]:.4g}, {raw[1]:.4g}, {raw[2]:.4g})",
            c_in=c_in, c_out=c_out,
        )
    clipped = np.clip(raw, 0.0, 1.0)
    if clipped[0] + clipped[2] < 2 * SIMPLEX_EPS:
        clipped[0] = max(clipped[0], SIMPLEX_EPS)
        clipped[2] = max(clipped[2], SIMPLEX_EPS)
    clipped = clipped / clipped.sum()
    clamped = bool(np.max(np.abs(clipped - raw)) > 1e-9)
    if clamped:
        warnings.warn(
            "growth parameters clamped onto the simplex: "
            f"({raw[0]:.4g}, {raw[1]:.4g}, {raw[2]:.4g}) -> "
            f"({clipped[0]:.4g}, {clipped[1]:.4g}, {clipped[2]:.4g})",
            stacklevel=2,
        )
    params = ScaleFreeParams(
        alpha=float(clipped[0]), beta=float(clipped[1]), gamma=float(clipped[2]),
        delta_in=delta_in, delta_out=delta_out,
    )
    return params, clamped


def fit_params_record(
    net: ProductionNetwork,
    delta_in: float = DEFAULT_DELTA_IN,
    delta_out: float = DEFAULT_DELTA_OUT,
) -> ParamFit:
    """Fit growth parameters to an observed network, keeping fit details."""
    out_deg = degrees(net, "out", weighted=False).values
    if int(np.count_nonzero(out_deg > 0)) < 10:
        raise FitError("need at least 10 nodes with positive out-degree to fit")
    in_fit = fit_tail_exponent(degrees(net, "in", weighted=False).values)
    out_fit = fit_tail_exponent(out_deg)
    params, clamped = solve_growth_params(
        in_fit.exponent, out_fit.exponent, delta_in, delta_out
    )
    return ParamFit(
        params=params,
        c_in=in_fit.exponent,
        c_out=out_fit.exponent,
        x_min_in=in_fit.x_min,
        x_min_out=out_fit.x_min,
        clamped=clamped,
    )


def fit_params(
    net: ProductionNetwork,
    delta_in: float = DEFAULT_DELTA_IN,
    delta_out: float = DEFAULT_DELTA_OUT,
) -> ScaleFreeParams:
    """Fit growth parameters to an observed network (see fit_params_record)."""
    return fit_params_record(net, delta_in, delta_out).params
