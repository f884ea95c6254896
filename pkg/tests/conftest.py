from pathlib import Path

import numpy as np
import pytest

from prodnet import IndustryMeta, InputOutputTable, ProductionNetwork, parse_table

DATA_DIR = Path(__file__).parent / "data"
FIXTURE_TABLE = DATA_DIR / "fixture20_table.csv"
FIXTURE_META = DATA_DIR / "fixture20_meta.csv"


@pytest.fixture(scope="session")
def fixture_table() -> InputOutputTable:
    with open(FIXTURE_TABLE, newline="") as fh:
        return parse_table(fh)


def random_network(rng: np.random.Generator, n_max: int = 50, m_max: int | None = None) -> ProductionNetwork:
    """Random simple directed weighted graph; sparse enough to leave
    dangling nodes and disconnected pieces in most draws."""
    n = int(rng.integers(2, n_max + 1))
    cap = n * (n - 1)
    upper = min(cap, m_max if m_max is not None else 3 * n)
    m = int(rng.integers(1, upper + 1))
    picks = rng.choice(cap, size=m, replace=False)
    src = picks // (n - 1)
    rem = picks % (n - 1)
    dst = np.where(rem < src, rem, rem + 1)
    weight = 10.0 ** rng.uniform(-4, 0, size=m)
    nodes = tuple(IndustryMeta(code=f"c{i:03d}") for i in range(n))
    return ProductionNetwork(nodes, src, dst, weight)


def random_table(rng: np.random.Generator, n: int, density: float = 0.4) -> InputOutputTable:
    coeff = np.where(rng.random((n, n)) < density, 10.0 ** rng.uniform(-5, 0, (n, n)), 0.0)
    industries = tuple(IndustryMeta(code=f"c{i:03d}", name=f"sector {i}") for i in range(n))
    return InputOutputTable(industries, coeff)


@pytest.fixture(scope="session")
def heavy_tail_table() -> InputOutputTable:
    """300-industry table whose network supports a growth-parameter fit.

    Built from a preferential-attachment graph so the degree tails are
    real; seed chosen so the fit deterministically succeeds (clamped).
    """
    from prodnet import ScaleFreeParams, gen_scale_free

    graph = gen_scale_free(300, ScaleFreeParams(0.41, 0.54, 0.05, 0.2, 0.0), seed=0).graph
    n = graph.n_nodes
    coeff = np.zeros((n, n))
    rng = np.random.default_rng(1000)
    # edge s -> d (supplier -> buyer) lives at cell (buyer d, supplier s)
    coeff[graph.dst, graph.src] = 10.0 ** rng.uniform(-3, -0.3, size=graph.n_edges)
    industries = tuple(IndustryMeta(code=f"i{i:03d}", name=f"industry {i}") for i in range(n))
    return InputOutputTable(industries, coeff)
