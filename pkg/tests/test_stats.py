import io

import numpy as np
import pytest

from prodnet import (
    EmptySampleError,
    IndustryMeta,
    ProductionNetwork,
    degree_sample,
    ks_two_sample,
    log_binned,
)
from prodnet.stats import write_distribution_csv
from conftest import random_network


def brute_force_ks(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    points = np.union1d(a, b)
    best = 0.0
    for x in points:
        fa = np.count_nonzero(a <= x) / a.size
        fb = np.count_nonzero(b <= x) / b.size
        best = max(best, abs(fa - fb))
    return best


def test_ks_identical_samples():
    r = ks_two_sample([1, 2, 3], [1, 2, 3])
    assert r.statistic == 0.0
    assert r.p_value == 1.0


def test_ks_identical_ecdfs_different_multiplicity():
    # [1, 2] and [1, 1, 2, 2] share the same empirical CDF
    assert ks_two_sample([1, 2], [1, 1, 2, 2]).statistic == 0.0


def test_ks_disjoint_supports():
    r = ks_two_sample([1, 2], [10, 20])
    assert r.statistic == 1.0


def test_ks_hand_computed():
    r = ks_two_sample([1, 2, 3, 4], [3, 4, 5, 6])
    assert r.statistic == 0.5
    assert r.n1 == 4 and r.n2 == 4


def test_ks_empty_sample():
    with pytest.raises(EmptySampleError):
        ks_two_sample([], [1.0])
    with pytest.raises(EmptySampleError):
        ks_two_sample([1.0], [])


def test_ks_symmetry_and_bounds():
    rng = np.random.default_rng(31)
    for _ in range(100):
        a = rng.integers(0, 5, size=rng.integers(1, 30))
        b = rng.normal(size=rng.integers(1, 30))
        r1 = ks_two_sample(a, b)
        r2 = ks_two_sample(b, a)
        assert r1.statistic == r2.statistic
        assert 0.0 <= r1.statistic <= 1.0
        assert 0.0 <= r1.p_value <= 1.0


def test_ks_monotone_transform_invariance():
    rng = np.random.default_rng(37)
    for _ in range(50):
        a = 10.0 ** rng.uniform(-3, 2, size=rng.integers(2, 25))
        b = 10.0 ** rng.uniform(-3, 2, size=rng.integers(2, 25))
        base = ks_two_sample(a, b).statistic
        assert ks_two_sample(2 * a, 2 * b).statistic == base
        assert ks_two_sample(np.log(a), np.log(b)).statistic == base


def test_ks_matches_bruteforce_on_tied_samples():
    values = [0, 1, 2, 3]
    rng = np.random.default_rng(41)
    for _ in range(300):
        a = rng.choice(values, size=rng.integers(1, 9))
        b = rng.choice(values, size=rng.integers(1, 9))
        assert ks_two_sample(a, b).statistic == brute_force_ks(a, b)


def test_ks_matches_scipy_statistic():
    scipy_stats = pytest.importorskip("scipy.stats")
    rng = np.random.default_rng(43)
    for _ in range(50):
        a = rng.normal(size=rng.integers(2, 40))
        b = rng.normal(0.2, size=rng.integers(2, 40))
        assert ks_two_sample(a, b).statistic == pytest.approx(
            scipy_stats.ks_2samp(a, b).statistic, abs=1e-15
        )


def test_ks_pvalue_limits():
    # widely separated large samples: p indistinguishable from 0
    a = np.zeros(200)
    b = np.ones(200)
    r = ks_two_sample(a, b)
    assert r.statistic == 1.0
    assert r.p_value < 1e-12


def three_cycle():
    nodes = tuple(IndustryMeta(code=f"v{i}") for i in range(3))
    return ProductionNetwork(nodes, [0, 1, 2], [1, 2, 0], [1.0, 1.0, 1.0])


def test_degree_sample_three_cycle():
    assert degree_sample(three_cycle(), "in", weighted=False).tolist() == [1, 1, 1]


def test_degree_sample_hub():
    nodes = tuple(IndustryMeta(code=f"v{i}") for i in range(6))
    net = ProductionNetwork(nodes, [0] * 5, [1, 2, 3, 4, 5], np.ones(5))
    sample = degree_sample(net, "out", weighted=False)
    assert sorted(sample.tolist()) == [0, 0, 0, 0, 0, 5]


def test_degree_sample_matches_edge_accumulation():
    rng = np.random.default_rng(47)
    net = random_network(rng, n_max=40)
    acc = np.zeros(net.n_nodes)
    for s, _, w in net.edges():
        acc[s] += w
    assert np.allclose(degree_sample(net, "out", weighted=True), acc)


def test_log_binned_one_bin_per_decade():
    dist = log_binned([1.0, 10.0, 100.0], 1)
    assert dist.densities.size == 3
    counts = dist.densities * np.diff(dist.bin_edges) * dist.n_values
    assert np.allclose(counts, [1, 1, 1])


def test_log_binned_normalization():
    rng = np.random.default_rng(53)
    for _ in range(20):
        sample = 10.0 ** rng.uniform(-4, 3, size=rng.integers(1, 500))
        dist = log_binned(sample, int(rng.integers(1, 12)))
        total = float(np.sum(dist.densities * np.diff(dist.bin_edges)))
        assert total == pytest.approx(1.0, abs=1e-9)


def test_log_binned_excludes_zeros_with_count():
    dist = log_binned([0.0, 0.0, 1.0, 2.0], 4)
    assert dist.n_zeros_excluded == 2
    assert dist.n_values == 2


def test_log_binned_rejects_bad_input():
    with pytest.raises(EmptySampleError):
        log_binned([], 5)
    with pytest.raises(EmptySampleError):
        log_binned([0.0, 0.0], 5)
    with pytest.raises(ValueError):
        log_binned([1.0, -1.0], 5)
    with pytest.raises(ValueError):
        log_binned([1.0], 0)


def test_log_binned_powerlaw_slope():
    rng = np.random.default_rng(42)
    u = rng.random(100_000)
    sample = (1 - u) ** (-1 / 1.5)  # density ~ x^-2.5 above 1
    dist = log_binned(sample, 10)
    centers = np.sqrt(dist.bin_edges[:-1] * dist.bin_edges[1:])
    mask = dist.densities > 0
    slope = np.polyfit(np.log10(centers[mask]), np.log10(dist.densities[mask]), 1)[0]
    assert slope == pytest.approx(-2.5, abs=0.15)


def test_distribution_csv():
    dist = log_binned([1.0, 10.0, 100.0], 1, direction="out", weighted=True)
    buf = io.StringIO()
    write_distribution_csv(dist, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "bin_left,bin_right,density"
    assert len(lines) == 4
