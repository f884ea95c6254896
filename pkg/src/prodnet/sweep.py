"""Sweep orchestration: prune at each cut-off, compare against null models.

For every threshold in the grid the observed network is pruned
(isolated nodes dropped by default), matched random and scale-free
graphs are generated, and four KS statistics are recorded (in/out
degree, each vs both null models). Growth parameters are fitted once on
the unpruned network and reused at every cut-off unless refit_per_zeta
is requested. Each work item derives its own seeds from (seed, grid
index), so serial and parallel runs produce identical output.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__ as _version
from .errors import EmptySampleError, FitError, RangeError
from .graph_core import ProductionNetwork, prune
from .nullmodels import (
    FALLBACK_PARAMS,
    DEFAULT_DELTA_IN,
    DEFAULT_DELTA_OUT,
    ScaleFreeParams,
    fit_params_record,
    gen_random,
    gen_scale_free,
)
from .serialize import dumps, gstr
from .stats import KSResult, degree_sample, ks_two_sample

_KS_KEYS = ("in_random", "out_random", "in_sf", "out_sf")


@dataclass(frozen=True)
class ThresholdGrid:
    """Ascending cut-off values plus the recipe that generated them."""

    values: tuple[float, ...]
    spec: dict

    def __post_init__(self):
        vals = self.values
        if any(v < 0 for v in vals):
            raise RangeError("grid values must be non-negative")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise RangeError("grid values must be strictly ascending")


@dataclass(frozen=True)
class SweepRecord:
    """Everything measured at one cut-off."""

    zeta: float
    nodes: int
    edges: int
    ks_in_random: KSResult | None
    ks_out_random: KSResult | None
    ks_in_sf: KSResult | None
    ks_out_sf: KSResult | None
    ks_std: dict
    seeds: dict
    params: ScaleFreeParams | None
    flags: tuple[str, ...]


def make_grid(start: float, stop: float, count: int) -> ThresholdGrid:
    """count thresholds linearly spaced from start to stop, both included."""
    if count < 2:
        raise RangeError("count must be at least 2")
    if start < 0 or not start < stop:
        raise RangeError(f"need 0 <= start < stop, got start={start}, stop={stop}")
    values = tuple(float(v) for v in np.linspace(start, stop, count))
    return ThresholdGrid(values=values, spec={"start": start, "stop": stop, "count": count})


def explicit_grid(values) -> ThresholdGrid:
    vals = tuple(float(v) for v in values)
    return ThresholdGrid(values=vals, spec={"explicit": list(vals)})


def child_seed(seed: int, *key: int) -> int:
    """Deterministic integer sub-seed for a work item (seed must be >= 0)."""
    if seed < 0:
        raise ValueError("seed must be non-negative")
    return int(np.random.SeedSequence([int(seed), *map(int, key)]).generate_state(1)[0])


def _mean_ks(results: list[KSResult]) -> tuple[KSResult, float]:
    stats = np.array([r.statistic for r in results])
    if len(results) == 1:
        return results[0], 0.0
    mean = KSResult(
        statistic=float(stats.mean()), p_value=None, n1=results[0].n1, n2=results[0].n2
    )
    return mean, float(stats.std(ddof=1))


def _sample(net: ProductionNetwork, direction: str, exclude_zeros: bool) -> np.ndarray:
    values = degree_sample(net, direction, weighted=False)
    if exclude_zeros:
        values = values[values > 0]
    return values


def _sweep_one(
    index: int,
    zeta: float,
    net: ProductionNetwork,
    params: ScaleFreeParams,
    base_flags: tuple[str, ...],
    seed: int,
    replicates: int,
    drop_isolated: bool,
    strict_cut: bool,
    exclude_zeros: bool,
    refit_per_zeta: bool,
    delta_in: float,
    delta_out: float,
) -> SweepRecord:
    pruned = prune(net, zeta, drop_isolated, strict=strict_cut)
    n, m = pruned.n_nodes, pruned.n_edges
    if n == 0:
        return SweepRecord(
            zeta=zeta, nodes=0, edges=0,
            ks_in_random=None, ks_out_random=None, ks_in_sf=None, ks_out_sf=None,
            ks_std={}, seeds={}, params=None, flags=base_flags + ("empty_graph",),
        )

    flags = base_flags
    if refit_per_zeta:
        try:
            params = fit_params_record(pruned, delta_in, delta_out).params
            flags = tuple(f for f in flags if f != "fit_fallback")
        except FitError:
            params = ScaleFreeParams(
                FALLBACK_PARAMS.alpha, FALLBACK_PARAMS.beta, FALLBACK_PARAMS.gamma,
                delta_in, delta_out,
            )
            flags = flags + ("refit_failed",)

    seeds = {
        "random": tuple(child_seed(seed, index, 0, r) for r in range(replicates)),
        "scale_free": tuple(child_seed(seed, index, 1, r) for r in range(replicates)),
    }
    collected: dict[str, list[KSResult]] = {key: [] for key in _KS_KEYS}
    empty_sample = False
    for rep in range(replicates):
        g_rand = gen_random(n, m, seeds["random"][rep]).graph
        g_sf = gen_scale_free(n, params, seeds["scale_free"][rep]).graph
        for direction in ("in", "out"):
            try:
                obs = _sample(pruned, direction, exclude_zeros)
                collected[f"{direction}_random"].append(
                    ks_two_sample(obs, _sample(g_rand, direction, exclude_zeros))
                )
                collected[f"{direction}_sf"].append(
                    ks_two_sample(obs, _sample(g_sf, direction, exclude_zeros))
                )
            except EmptySampleError:
                empty_sample = True
    if empty_sample:
        flags = flags + ("empty_sample",)

    ks_mean: dict[str, KSResult | None] = {}
    ks_std: dict[str, float] = {}
    for key in _KS_KEYS:
        if collected[key]:
            ks_mean[key], ks_std[key] = _mean_ks(collected[key])
        else:
            ks_mean[key] = None
    return SweepRecord(
        zeta=zeta, nodes=n, edges=m,
        ks_in_random=ks_mean["in_random"], ks_out_random=ks_mean["out_random"],
        ks_in_sf=ks_mean["in_sf"], ks_out_sf=ks_mean["out_sf"],
        ks_std=ks_std, seeds=seeds, params=params, flags=flags,
    )


def run_sweep(
    net: ProductionNetwork,
    grid: ThresholdGrid,
    seed: int,
    replicates: int = 1,
    *,
    delta_in: float = DEFAULT_DELTA_IN,
    delta_out: float = DEFAULT_DELTA_OUT,
    refit_per_zeta: bool = False,
    strict_cut: bool = False,
    drop_isolated: bool = True,
    exclude_zeros: bool = False,
    threads: int = 1,
) -> list[SweepRecord]:
    """One SweepRecord per grid value; deterministic given the seed."""
    if replicates < 1:
        raise ValueError("replicates must be a positive integer")
    base_flags: tuple[str, ...] = ()
    try:
        params = fit_params_record(net, delta_in, delta_out).params
    except FitError:
        params = ScaleFreeParams(
            FALLBACK_PARAMS.alpha, FALLBACK_PARAMS.beta, FALLBACK_PARAMS.gamma,
            delta_in, delta_out,
        )
        base_flags = ("fit_fallback",)

    def work(item):
        index, zeta = item
        return _sweep_one(
            index, zeta, net, params, base_flags, seed, replicates,
            drop_isolated, strict_cut, exclude_zeros, refit_per_zeta,
            delta_in, delta_out,
        )

    items = list(enumerate(grid.values))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(work, items))
    else:
        records = [work(item) for item in items]

    # pruning can only shrink the graph as the cut-off rises
    for prev, cur in zip(records, records[1:]):
        if cur.nodes > prev.nodes or cur.edges > prev.edges:
            raise AssertionError("node/edge counts increased along the grid")
    return records


def _ks_dict(result: KSResult | None) -> dict | None:
    if result is None:
        return None
    return {
        "statistic": result.statistic,
        "p_value": result.p_value,
        "n1": result.n1,
        "n2": result.n2,
    }


def _record_dict(record: SweepRecord) -> dict:
    params = record.params
    return {
        "zeta": record.zeta,
        "nodes": record.nodes,
        "edges": record.edges,
        "ks_in_random": _ks_dict(record.ks_in_random),
        "ks_out_random": _ks_dict(record.ks_out_random),
        "ks_in_sf": _ks_dict(record.ks_in_sf),
        "ks_out_sf": _ks_dict(record.ks_out_sf),
        "ks_std": {k: record.ks_std[k] for k in _KS_KEYS if k in record.ks_std},
        "seeds": {k: list(v) for k, v in record.seeds.items()},
        "params": None if params is None else {
            "alpha": params.alpha, "beta": params.beta, "gamma": params.gamma,
            "delta_in": params.delta_in, "delta_out": params.delta_out,
        },
        "flags": list(record.flags),
    }


def emit_report(records: list[SweepRecord], fmt: str = "json", *, config: dict | None = None) -> str:
    """Serialize sweep records with stable field order and 10-digit floats."""
    if not records:
        raise ValueError("emit_report needs at least one record")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["zeta", "nodes", "edges", "ks_in_rand", "ks_out_rand", "ks_in_sf", "ks_out_sf", "flags"]
        )
        for rec in records:
            writer.writerow([
                gstr(rec.zeta), rec.nodes, rec.edges,
                *("" if ks is None else gstr(ks.statistic)
                  for ks in (rec.ks_in_random, rec.ks_out_random, rec.ks_in_sf, rec.ks_out_sf)),
                ";".join(rec.flags),
            ])
        return buf.getvalue()
    if fmt == "json":
        payload = {
            "tool": "prodnet",
            "version": _version,
            "config": config or {},
            "records": [_record_dict(r) for r in records],
        }
        return dumps(payload)
    raise ValueError(f"unsupported report format: {fmt!r}")


def parse_report(text: str) -> tuple[list[SweepRecord], dict]:
    """Rebuild records from a JSON report (inverse of emit_report)."""
    payload = json.loads(text)

    def ks_from(d):
        if d is None:
            return None
        return KSResult(statistic=d["statistic"], p_value=d["p_value"], n1=d["n1"], n2=d["n2"])

    records = []
    for r in payload["records"]:
        p = r["params"]
        records.append(SweepRecord(
            zeta=r["zeta"], nodes=r["nodes"], edges=r["edges"],
            ks_in_random=ks_from(r["ks_in_random"]),
            ks_out_random=ks_from(r["ks_out_random"]),
            ks_in_sf=ks_from(r["ks_in_sf"]),
            ks_out_sf=ks_from(r["ks_out_sf"]),
            ks_std=dict(r["ks_std"]),
            seeds={k: tuple(v) for k, v in r["seeds"].items()},
            params=None if p is None else ScaleFreeParams(**p),
            flags=tuple(r["flags"]),
        ))
    return records, payload.get("config", {})
