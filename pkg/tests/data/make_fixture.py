"""Regenerate the bundled 20-industry fixture table (deterministic).

Run from the repository root:  python tests/data/make_fixture.py
The committed CSVs must never change silently; rerunning this script
reproduces them byte-identically.
"""

from pathlib import Path

import numpy as np

HERE = Path(__file__).parent
SEED = 20120405
N = 20


def build():
    rng = np.random.default_rng(SEED)
    codes = [f"S{i + 1:02d}xx0" for i in range(N)]
    names = [f"Synthetic sector {i + 1:02d}" for i in range(N)]

    coeff = np.zeros((N, N))
    mask = rng.random((N, N)) < 0.40
    # supplier hubs: two columns feed almost everyone, with larger flows
    mask[:, 2] |= rng.random(N) < 0.9
    mask[:, 7] |= rng.random(N) < 0.8
    values = 10.0 ** rng.uniform(-5.0, -0.25, size=(N, N))
    values[:, 2] *= 2.0
    values[:, 7] *= 1.5
    coeff[mask] = values[mask]
    np.fill_diagonal(coeff, 0.0)
    diag = rng.random(N) < 0.5
    coeff[np.diag_indices(N)] = np.where(diag, 10.0 ** rng.uniform(-3, -0.5, N), 0.0)
    coeff = np.round(coeff, 8)
    return codes, names, coeff


def main():
    codes, names, coeff = build()
    lines = ["code," + ",".join(codes)]
    for i, code in enumerate(codes):
        cells = [repr(float(v)) if v else "0.0" for v in coeff[i]]
        lines.append(code + "," + ",".join(cells))
    (HERE / "fixture20_table.csv").write_text("\n".join(lines) + "\n")

    meta = ["code,name"] + [f"{c},{n}" for c, n in zip(codes, names)]
    (HERE / "fixture20_meta.csv").write_text("\n".join(meta) + "\n")
    print("wrote fixture20_table.csv and fixture20_meta.csv")


if __name__ == "__main__":
    main()
