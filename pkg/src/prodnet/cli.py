"""Command-line entry point.

Subcommands: ingest (validate a table, cache the canonical CSV), sweep
(threshold sweep with null-model KS comparison), centrality (rankings
and drift across cut-offs), dist (log-binned strength distributions).
Flags override values from an optional TOML config file; every run
writes its effective configuration next to its outputs so it can be
reproduced exactly.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import shutil
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .errors import FitError, ProdnetError
from .graph_core import build_network, prune
from .ingest import attach_names, load_metadata, parse_table, summary, write_metadata, write_table
from .centrality import METRICS, ranking_drift, rank, write_drift_csv
from .nullmodels import DEFAULT_DELTA_IN, DEFAULT_DELTA_OUT, fit_params_record
from .serialize import dumps, gstr
from .stats import degree_sample, log_binned, write_distribution_csv
from .sweep import emit_report, make_grid, run_sweep

CACHE_ENV = "PRODNET_CACHE"

CENTRALITY_ZETAS = (0.0, 0.02, 0.04, 0.06, 0.08, 0.1)

# invocation-local knobs that never change output bytes are kept out of
# the config snapshot
_SNAPSHOT_EXCLUDE = {"out", "force", "threads"}


@dataclass
class RunConfig:
    table: str = ""
    meta: str = ""
    year: int = 0
    out: str = "run"
    seed: int = 0
    replicates: int = 1
    grid_start: float = 0.00001
    grid_stop: float = 0.5
    grid_count: int = 100
    centrality_zetas: tuple[float, ...] = CENTRALITY_ZETAS
    top_k: int = 20
    damping: float = 0.85
    tol: float = 1e-9
    max_iter: int = 1000
    delta_in: float = DEFAULT_DELTA_IN
    delta_out: float = DEFAULT_DELTA_OUT
    bins_per_decade: int = 10
    strict_cut: bool = False
    exclude_zeros: bool = False
    refit_per_zeta: bool = False
    drop_isolated: bool = True
    threads: int = 1
    force: bool = False

    def snapshot_toml(self) -> str:
        lines = []
        for f in fields(self):
            if f.name in _SNAPSHOT_EXCLUDE:
                continue
            lines.append(f"{f.name} = {_toml_value(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize config value {v!r}")


def load_config(path: str | Path) -> dict:
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    """Layer defaults < config file < command-line flags."""
    merged: dict = {}
    if getattr(args, "config", None):
        merged.update(load_config(args.config))
    known = {f.name for f in fields(RunConfig)}
    for key, value in vars(args).items():
        if key in known and value is not None:
            merged[key] = value
    if "centrality_zetas" in merged:
        merged["centrality_zetas"] = tuple(float(z) for z in merged["centrality_zetas"])
    return RunConfig(**merged)


def cache_dir() -> Path:
    root = os.environ.get(CACHE_ENV)
    if root:
        return Path(root)
    return Path.home() / ".cache" / "prodnet"


def _load_table(cfg: RunConfig):
    path = Path(cfg.table)
    if not cfg.table:
        raise FileNotFoundError("no input table given (use --table)")
    if not path.exists():
        raise FileNotFoundError(f"table not found: {path}")
    with open(path, newline="") as fh:
        table = parse_table(fh, year=cfg.year, source_label=path.name)
    if cfg.meta:
        meta_path = Path(cfg.meta)
        if not meta_path.exists():
            raise FileNotFoundError(f"metadata not found: {meta_path}")
        with open(meta_path, newline="") as fh:
            table = attach_names(table, load_metadata(fh))
    return table


class _RunDir:
    """Create the output directory; on failure remove what this run wrote."""

    def __init__(self, cfg: RunConfig):
        self.path = Path(cfg.out)
        self.force = cfg.force
        self.created_dir = False
        self.written: list[Path] = []

    def write(self, relative: str, text: str) -> None:
        path = self.path / relative
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
        self.written.append(path)

    def __enter__(self) -> "_RunDir":
        if self.path.exists():
            if any(self.path.iterdir()) and not self.force:
                raise ProdnetError(
                    f"output directory {self.path} is not empty (use --force to overwrite)"
                )
        else:
            self.path.mkdir(parents=True)
            self.created_dir = True
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is not None:
            if self.created_dir:
                shutil.rmtree(self.path, ignore_errors=True)
            else:
                for path in self.written:
                    path.unlink(missing_ok=True)
        return False


def _config_dict(cfg: RunConfig) -> dict:
    data = asdict(cfg)
    for key in _SNAPSHOT_EXCLUDE:
        data.pop(key, None)
    data["centrality_zetas"] = list(cfg.centrality_zetas)
    return data


def cmd_ingest(cfg: RunConfig) -> int:
    table = _load_table(cfg)
    for line in summary(table).lines():
        print(line)
    cache = cache_dir()
    cache.mkdir(parents=True, exist_ok=True)
    stem = Path(cfg.table).stem
    table_path = cache / f"{stem}_canonical.csv"
    with open(table_path, "w", newline="") as fh:
        write_table(table, fh)
    meta_path = cache / f"{stem}_meta.csv"
    with open(meta_path, "w", newline="") as fh:
        write_metadata(table.industries, fh)
    with open(cache / f"{stem}_config.toml", "w", newline="") as fh:
        fh.write(cfg.snapshot_toml())
    print(f"cached: {table_path}")
    print(f"cached: {meta_path}")
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    table = _load_table(cfg)
    net = build_network(table)
    grid = make_grid(cfg.grid_start, cfg.grid_stop, cfg.grid_count)
    records = run_sweep(
        net, grid, cfg.seed, cfg.replicates,
        delta_in=cfg.delta_in, delta_out=cfg.delta_out,
        refit_per_zeta=cfg.refit_per_zeta, strict_cut=cfg.strict_cut,
        drop_isolated=cfg.drop_isolated, exclude_zeros=cfg.exclude_zeros,
        threads=cfg.threads,
    )
    config = _config_dict(cfg)
    config["grid"] = grid.spec
    with _RunDir(cfg) as run:
        run.write("sweep.csv", emit_report(records, "csv"))
        run.write("sweep.json", emit_report(records, "json", config=config))
        try:
            fit = fit_params_record(net, cfg.delta_in, cfg.delta_out)
            run.write("fit.json", dumps(fit.to_json_record()))
        except FitError as exc:
            print(f"note: parameter fit unavailable ({exc}); sweep used fallback values")
        run.write("config.toml", cfg.snapshot_toml())
    print(f"wrote {len(records)} records to {cfg.out}")
    return 0


def cmd_centrality(cfg: RunConfig) -> int:
    table = _load_table(cfg)
    net = build_network(table)
    reports = {metric: [] for metric in METRICS}
    for zeta in cfg.centrality_zetas:
        pruned = prune(net, zeta, cfg.drop_isolated, strict=cfg.strict_cut)
        for metric in METRICS:
            reports[metric].append(
                rank(
                    pruned, metric, cfg.top_k, zeta=zeta,
                    damping=cfg.damping, tol=cfg.tol, max_iter=cfg.max_iter,
                )
            )
    with _RunDir(cfg) as run:
        for metric in METRICS:
            for report in reports[metric]:
                name = f"{metric}_zeta_{gstr(report.zeta)}.json"
                run.write(f"rankings/{name}", dumps(report.as_dict()))
        buf = io.StringIO()
        for i, metric in enumerate(METRICS):
            table_drift = ranking_drift(reports[metric])
            if i == 0:
                write_drift_csv(table_drift, buf, metric_column=True)
            else:
                body = io.StringIO()
                write_drift_csv(table_drift, body, metric_column=True)
                buf.write(body.getvalue().split("\n", 1)[1])
        run.write("drift.csv", buf.getvalue())
        run.write("config.toml", cfg.snapshot_toml())
    print(f"wrote rankings for {len(cfg.centrality_zetas)} cut-offs to {cfg.out}")
    return 0


def cmd_dist(cfg: RunConfig) -> int:
    table = _load_table(cfg)
    net = build_network(table)
    outputs = {}
    for direction in ("in", "out"):
        sample = degree_sample(net, direction, weighted=True)
        dist = log_binned(
            sample, cfg.bins_per_decade, direction=direction, weighted=True
        )
        buf = io.StringIO()
        write_distribution_csv(dist, buf)
        outputs[direction] = buf.getvalue()
        if dist.n_zeros_excluded:
            print(f"{direction}: excluded {dist.n_zeros_excluded} zero-strength nodes")
    with _RunDir(cfg) as run:
        run.write("degree_dist_in.csv", outputs["in"])
        run.write("degree_dist_out.csv", outputs["out"])
        run.write("config.toml", cfg.snapshot_toml())
    print(f"wrote strength distributions to {cfg.out}")
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--table", help="industry-by-industry requirements CSV")
    parser.add_argument("--meta", help="industry code/name metadata CSV")
    parser.add_argument("--out", help="output directory for this run")
    parser.add_argument("--seed", type=int, help="random seed (default 0)")
    parser.add_argument("--config", help="TOML config file; flags override it")
    parser.add_argument("--threads", type=int, help="worker cap for per-threshold work")
    parser.add_argument("--force", action="store_true", default=None,
                        help="allow writing into a non-empty output directory")
    parser.add_argument("--year", type=int, help="year label for the table")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prodnet",
        description="Production-network construction, threshold sweeps, and rankings "
                    "from input-output requirement tables",
    )
    parser.add_argument("--version", action="version", version=f"prodnet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a table and cache the canonical CSV")
    _add_common(p)

    p = sub.add_parser("sweep", help="threshold sweep with null-model KS comparison")
    _add_common(p)
    p.add_argument("--grid-start", dest="grid_start", type=float)
    p.add_argument("--grid-stop", dest="grid_stop", type=float)
    p.add_argument("--grid-count", dest="grid_count", type=int)
    p.add_argument("--replicates", type=int, help="null graphs per threshold (KS averaged)")
    p.add_argument("--delta-in", dest="delta_in", type=float)
    p.add_argument("--delta-out", dest="delta_out", type=float)
    p.add_argument("--strict-cut", dest="strict_cut", action="store_true", default=None,
                   help="prune with weight > zeta instead of >=")
    p.add_argument("--exclude-zeros", dest="exclude_zeros", action="store_true", default=None,
                   help="drop zero-degree nodes from KS samples")
    p.add_argument("--refit-per-zeta", dest="refit_per_zeta", action="store_true", default=None)
    p.add_argument("--drop-isolated", dest="drop_isolated",
                   action=argparse.BooleanOptionalAction, default=None)

    p = sub.add_parser("centrality", help="rankings and rank drift across cut-offs")
    _add_common(p)
    p.add_argument("--zetas", dest="centrality_zetas", type=float, nargs="+")
    p.add_argument("--top-k", dest="top_k", type=int)
    p.add_argument("--damping", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-iter", dest="max_iter", type=int)
    p.add_argument("--strict-cut", dest="strict_cut", action="store_true", default=None)
    p.add_argument("--drop-isolated", dest="drop_isolated",
                   action=argparse.BooleanOptionalAction, default=None)

    p = sub.add_parser("dist", help="log-binned weighted degree distributions")
    _add_common(p)
    p.add_argument("--bins-per-decade", dest="bins_per_decade", type=int)

    return parser


_COMMANDS = {
    "ingest": cmd_ingest,
    "sweep": cmd_sweep,
    "centrality": cmd_centrality,
    "dist": cmd_dist,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return _COMMANDS[args.command](cfg)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ProdnetError, ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
