"""Static figures from hftsync CSV outputs.

    hftsync simulate --scenario compare --out report.csv --format csv \
        --runs-csv runs.csv --hist-csv hist.csv
    python3 scripts/plot.py runs.csv hist.csv figures/
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def histograms(hist: pd.DataFrame, out: Path) -> None:
    scenarios = list(hist["scenario"].unique())
    fig, axes = plt.subplots(1, len(scenarios), figsize=(5 * len(scenarios), 3.5), sharey=True)
    axes = [axes] if len(scenarios) == 1 else axes
    for ax, name in zip(axes, scenarios):
        rows = hist[hist["scenario"] == name]
        ax.bar(rows["bin_lower"], rows["count"], width=rows["bin_upper"] - rows["bin_lower"], align="edge")
        ax.set_title(name)
        ax.set_xlabel("transaction price")
    axes[0].set_ylabel("trades")
    fig.tight_layout()
    fig.savefig(out / "price_histogram.png", dpi=150)


def comparison(runs: pd.DataFrame, out: Path) -> None:
    metrics = ["mean_price", "volatility", "txn_probability", "volume"]
    fig, axes = plt.subplots(1, len(metrics), figsize=(4 * len(metrics), 3.5))
    for ax, metric in zip(axes, metrics):
        stats = runs.groupby("scenario")[metric].agg(["mean", "std", "count"])
        ci = 2 * stats["std"] / stats["count"] ** 0.5
        ax.bar(stats.index, stats["mean"], yerr=ci, capsize=6)
        ax.set_title(metric)
        if metric == "mean_price":
            ax.set_ylim(stats["mean"].min() - 3, stats["mean"].max() + 3)
    fig.tight_layout()
    fig.savefig(out / "scenario_comparison.png", dpi=150)


def main() -> None:
    runs_csv, hist_csv, out_dir = sys.argv[1:4]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    histograms(pd.read_csv(hist_csv), out)
    comparison(pd.read_csv(runs_csv), out)


if __name__ == "__main__":
    main()
