"""Walk a forecast-comparison CSV from disk to test decisions.

Builds a small quarterly file with two competing forecast columns, a
few missing survey values, and a date column, then shows the two
missing-data policies side by side: listwise deletion shortens the
sample, zero-fill keeps the length and scores absent forecasts as
perfect. The same flags drive the command-line interface:

    epatest test --data file.csv --forecast-cols A,B --realization-col Y \
        --date-col X1 --from 1995:01 --na-policy drop --method dm_fb
"""

import tempfile
from pathlib import Path

import numpy as np

from epatest import dm_test_bt_fb, dm_test_r, load_csv, loss_series

QUARTERS = [f"{year}:{q:02d}" for year in range(1990, 2002) for q in range(1, 5)]


def write_sample(path, rng):
    rows = ["X1,A,B,Y"]
    for t, date in enumerate(QUARTERS):
        y = 2.0 + rng.standard_normal()
        a = y + rng.standard_normal() * 1.4          # noisier forecaster
        b = y + rng.standard_normal() * 0.9
        a_txt = "" if t in (5, 17) else f"{a:.4f}"   # two missing surveys
        rows.append(f"{date},{a_txt},{b:.4f},{y:.4f}")
    path.write_text("\n".join(rows) + "\n")


def describe(tag, dataset):
    d = loss_series(dataset, loss="squared")
    base = dm_test_r(d, h=1)
    robust = dm_test_bt_fb(d)
    print(f"{tag}: n = {d.size}, mean d = {d.mean():+.4f}")
    print(f"    dm_r  stat = {base.stat:+.3f}  pval = {base.pval:.4f}")
    print(f"    dm_fb stat = {robust.stat:+.3f}  crit = {robust.critical_value:.3f} "
          f"-> {'reject' if robust.rej else 'no rejection'}")


def main():
    rng = np.random.default_rng(3)
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "quarterly.csv"
        write_sample(path, rng)

        common = dict(
            forecast_cols=("A", "B"), realization_col="Y", date_col="X1"
        )
        describe("drop policy", load_csv(path, na_policy="drop", **common))
        print()
        describe("zero policy", load_csv(path, na_policy="zero", **common))
        print()
        late = load_csv(
            path, na_policy="drop", date_range=("1995:01", None), **common
        )
        describe("drop policy, 1995 on", late)


if __name__ == "__main__":
    main()
