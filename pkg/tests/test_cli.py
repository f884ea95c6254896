import json
from pathlib import Path

import numpy as np
import pytest

from prodnet import parse_table
from prodnet.cli import main
from conftest import FIXTURE_META, FIXTURE_TABLE

HUB_TABLE = (
    "code,H,X,Y,Z\n"
    "H,0,0,0,0\n"
    "X,0.4,0,0,0\n"
    "Y,0.3,0,0,0\n"
    "Z,0.2,0,0,0\n"
)


@pytest.fixture(autouse=True)
def cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("PRODNET_CACHE", str(tmp_path / "cache"))


def test_ingest_fixture(capsys, tmp_path):
    code = main(["ingest", "--table", str(FIXTURE_TABLE), "--meta", str(FIXTURE_META)])
    out = capsys.readouterr().out
    assert code == 0
    assert "N=20" in out
    cached = Path(out.rsplit("cached: ", 2)[1].strip().splitlines()[0])
    assert cached.exists()
    with open(FIXTURE_TABLE, newline="") as fh:
        original = parse_table(fh)
    with open(cached, newline="") as fh:
        assert parse_table(fh) == original


def test_ingest_missing_file(capsys):
    code = main(["ingest", "--table", "/nonexistent/table.csv"])
    err = capsys.readouterr().err
    assert code == 2
    assert "/nonexistent/table.csv" in err


def test_ingest_invalid_table(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("code,A,B\nA,0.1,0.2\nB,0.3\n")
    code = main(["ingest", "--table", str(bad)])
    assert code == 1


def sweep_args(out_dir, extra=()):
    return [
        "sweep", "--table", str(FIXTURE_TABLE), "--meta", str(FIXTURE_META),
        "--out", str(out_dir), "--seed", "0",
        "--grid-start", "0.0", "--grid-stop", "0.5", "--grid-count", "12",
        *extra,
    ]


def test_sweep_writes_expected_files(tmp_path):
    out = tmp_path / "run1"
    assert main(sweep_args(out)) == 0
    csv_lines = (out / "sweep.csv").read_text().splitlines()
    assert len(csv_lines) == 13  # header + one row per threshold
    payload = json.loads((out / "sweep.json").read_text())
    assert payload["tool"] == "prodnet"
    assert len(payload["records"]) == 12
    assert (out / "config.toml").exists()


def test_sweep_repeat_invocation_is_byte_identical(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(sweep_args(out1)) == 0
    assert main(sweep_args(out2)) == 0
    for name in ("sweep.csv", "sweep.json", "config.toml"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_sweep_refuses_to_overwrite_without_force(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(sweep_args(out)) == 0
    assert main(sweep_args(out)) == 1
    assert "--force" in capsys.readouterr().err
    assert main(sweep_args(out, extra=["--force"])) == 0


def test_sweep_rerun_from_snapshot_matches(tmp_path):
    out1 = tmp_path / "orig"
    assert main(sweep_args(out1)) == 0
    out2 = tmp_path / "replay"
    assert main([
        "sweep", "--config", str(out1 / "config.toml"), "--out", str(out2),
    ]) == 0
    for name in ("sweep.csv", "sweep.json", "config.toml"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_sweep_flag_overrides_config(tmp_path):
    cfg = tmp_path / "run.toml"
    cfg.write_text(
        f'table = "{FIXTURE_TABLE}"\ngrid_start = 0.0\ngrid_stop = 0.5\ngrid_count = 5\nseed = 3\n'
    )
    out = tmp_path / "out"
    assert main(["sweep", "--config", str(cfg), "--grid-count", "7", "--out", str(out)]) == 0
    assert len((out / "sweep.csv").read_text().splitlines()) == 8
    snapshot = (out / "config.toml").read_text()
    assert "grid_count = 7" in snapshot
    assert "seed = 3" in snapshot


def test_sweep_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text('tabel = "x.csv"\n')
    assert main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 1
    assert "unknown config keys" in capsys.readouterr().err


def test_centrality_hub_table(tmp_path):
    table_path = tmp_path / "hub.csv"
    table_path.write_text(HUB_TABLE)
    out = tmp_path / "cent"
    code = main([
        "centrality", "--table", str(table_path), "--out", str(out),
        "--zetas", "0.0", "0.1", "--top-k", "1",
    ])
    assert code == 0
    ranking_files = sorted((out / "rankings").glob("*.json"))
    assert len(ranking_files) == 4  # two metrics x two cut-offs
    for path in ranking_files:
        payload = json.loads(path.read_text())
        assert payload["top"][0]["code"] == "H"  # the only supplier dominates
        assert payload["graph"]["nodes"] == 4
    drift_lines = (out / "drift.csv").read_text().splitlines()
    assert drift_lines[0].startswith("metric,code,name")
    metrics = {line.split(",")[0] for line in drift_lines[1:]}
    assert metrics == {"out_strength", "pagerank_out"}


def test_centrality_fixture_defaults(tmp_path):
    out = tmp_path / "cent"
    code = main([
        "centrality", "--table", str(FIXTURE_TABLE), "--meta", str(FIXTURE_META),
        "--out", str(out),
    ])
    assert code == 0
    assert len(list((out / "rankings").glob("out_strength_*.json"))) == 6
    assert len(list((out / "rankings").glob("pagerank_out_*.json"))) == 6


def test_dist_outputs_normalized_densities(tmp_path):
    out = tmp_path / "dist"
    assert main([
        "dist", "--table", str(FIXTURE_TABLE), "--out", str(out),
        "--bins-per-decade", "6",
    ]) == 0
    for name in ("degree_dist_in.csv", "degree_dist_out.csv"):
        lines = (out / name).read_text().splitlines()
        assert lines[0] == "bin_left,bin_right,density"
        rows = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
        total = np.sum(rows[:, 2] * (rows[:, 1] - rows[:, 0]))
        assert total == pytest.approx(1.0, abs=1e-9)


def test_dist_empty_graph_fails(tmp_path, capsys):
    table_path = tmp_path / "zero.csv"
    table_path.write_text("code,A,B\nA,0,0\nB,0,0\n")
    assert main(["dist", "--table", str(table_path), "--out", str(tmp_path / "o")]) == 1
    assert "error" in capsys.readouterr().err
    assert not (tmp_path / "o").exists()  # no partial outputs left behind


def test_centrality_and_dist_reruns_are_byte_identical(tmp_path):
    paths = []
    for tag in ("x", "y"):
        cent = tmp_path / f"cent_{tag}"
        dist = tmp_path / f"dist_{tag}"
        assert main([
            "centrality", "--table", str(FIXTURE_TABLE), "--meta", str(FIXTURE_META),
            "--out", str(cent), "--zetas", "0.0", "0.05", "0.1", "--top-k", "5",
        ]) == 0
        assert main(["dist", "--table", str(FIXTURE_TABLE), "--out", str(dist)]) == 0
        paths.append((cent, dist))
    (c1, d1), (c2, d2) = paths
    assert (c1 / "drift.csv").read_bytes() == (c2 / "drift.csv").read_bytes()
    for f1 in sorted((c1 / "rankings").glob("*.json")):
        f2 = c2 / "rankings" / f1.name
        assert f1.read_bytes() == f2.read_bytes()
    assert (d1 / "degree_dist_out.csv").read_bytes() == (d2 / "degree_dist_out.csv").read_bytes()


def test_sweep_writes_fit_json_when_fit_succeeds(tmp_path, heavy_tail_table):
    import warnings
    from prodnet import write_table

    table_path = tmp_path / "heavy.csv"
    with open(table_path, "w", newline="") as fh:
        write_table(heavy_tail_table, fh)
    out = tmp_path / "run"
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # fit clamps onto the simplex
        code = main([
            "sweep", "--table", str(table_path), "--out", str(out), "--seed", "0",
            "--grid-start", "0.0", "--grid-stop", "0.3", "--grid-count", "4",
        ])
    assert code == 0
    fit = json.loads((out / "fit.json").read_text())
    assert set(fit) == {
        "alpha", "beta", "gamma", "delta_in", "delta_out",
        "c_in", "c_out", "x_min_in", "x_min_out",
    }
    assert fit["c_out"] > 1
    payload = json.loads((out / "sweep.json").read_text())
    assert "fit_fallback" not in payload["records"][0]["flags"]


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "prodnet" in capsys.readouterr().out
