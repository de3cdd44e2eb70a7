"""Cross-report comparison: per-metric means/medians and pairwise CDF
dominance fractions."""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

__all__ = ["ComparisonResult", "compare_reports", "dominance", "load_report"]

METRICS = ("safety", "comfort", "efficiency")


def load_report(path: str | Path) -> dict:
    try:
        report = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: not a JSON report ({e.msg})") from None
    missing = [m for m in METRICS if m not in report.get("cdf", {})]
    if missing:
        raise ValueError(f"{path}: report lacks CDFs for {missing}")
    return report


def report_label(report: dict) -> str:
    cfg = report.get("config", {})
    weather = cfg.get("weather", {}).get("name", "?")
    rig = cfg.get("rig", {}).get("name", "?")
    seed = cfg.get("scenario", {}).get("seed", "?")
    agent = cfg.get("agent", "?")
    return f"{weather}/{rig}/s{seed}/{agent}"


def median_from_cdf(pairs: Sequence[Sequence[float]]) -> float:
    """Smallest value whose cumulative fraction reaches one half."""
    for value, fraction in pairs:
        if fraction >= 0.5:
            return value
    return pairs[-1][0]


def _cdf_at(pairs: Sequence[Sequence[float]], x: float) -> float:
    fraction = 0.0
    for value, f in pairs:
        if value <= x:
            fraction = f
        else:
            break
    return fraction


def dominance(
    pairs_a: Sequence[Sequence[float]], pairs_b: Sequence[Sequence[float]]
) -> float:
    """Fraction of the merged value grid where distribution A sits strictly
    above B (its CDF strictly lower, i.e. more mass at high scores).

    A distribution compared with itself scores 0.0.
    """
    grid = sorted({v for v, _ in pairs_a} | {v for v, _ in pairs_b})
    if not grid:
        return 0.0
    wins = sum(1 for x in grid if _cdf_at(pairs_a, x) < _cdf_at(pairs_b, x))
    return wins / len(grid)


@dataclass(frozen=True)
class ComparisonResult:
    labels: tuple[str, ...]
    rows: tuple[dict, ...]  # one summary row per report
    dominance: dict  # metric -> list of (label_a, label_b, fraction)

    def summary_csv(self) -> str:
        cols = ["report"]
        for metric in METRICS:
            cols += [f"{metric}_mean", f"{metric}_median"]
        cols += ["speed_score", "aggregate", "termination"]
        lines = [",".join(cols)]
        for row in self.rows:
            cells = [row["report"]]
            for metric in METRICS:
                cells += [repr(row[f"{metric}_mean"]), repr(row[f"{metric}_median"])]
            cells += [repr(row["speed_score"]), repr(row["aggregate"]), row["termination"]]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def format_text(self) -> str:
        out = []
        header = f"{'report':<40}" + "".join(
            f"{m + ' mean':>16}{m + ' median':>16}" for m in METRICS
        ) + f"{'speed':>10}{'aggregate':>12}"
        out.append(header)
        for row in self.rows:
            line = f"{row['report']:<40}"
            for metric in METRICS:
                line += f"{row[f'{metric}_mean']:>16.4f}{row[f'{metric}_median']:>16.4f}"
            line += f"{row['speed_score']:>10.4f}{row['aggregate']:>12.4f}"
            out.append(line)
        for metric in METRICS:
            out.append("")
            out.append(f"pairwise CDF dominance ({metric}): fraction of the value "
                       "grid where the row's CDF sits strictly above the column's")
            for a, b, frac in self.dominance[metric]:
                out.append(f"  {a}  vs  {b}: {frac:.3f}")
        return "\n".join(out)


def compare_reports(paths: Sequence[str | Path]) -> ComparisonResult:
    """Tabulate at least two reports; all must carry the same metric set."""
    if len(paths) < 2:
        raise ValueError("compare needs at least 2 reports")
    loaded = [(str(p), load_report(p)) for p in paths]
    labels = []
    rows = []
    for path, report in loaded:
        label = report_label(report)
        labels.append(label)
        row = {"report": label, "termination": report.get("termination", "?")}
        for metric in METRICS:
            row[f"{metric}_mean"] = report["scores"][metric]
            row[f"{metric}_median"] = median_from_cdf(report["cdf"][metric])
        row["speed_score"] = report["scores"]["speed"]
        row["aggregate"] = report["scores"]["aggregate"]
        rows.append(row)
    matrix: dict = {metric: [] for metric in METRICS}
    for metric in METRICS:
        for i, (_, ra) in enumerate(loaded):
            for j, (_, rb) in enumerate(loaded):
                if i == j:
                    continue
                frac = dominance(ra["cdf"][metric], rb["cdf"][metric])
                matrix[metric].append((labels[i], labels[j], frac))
    return ComparisonResult(
        labels=tuple(labels), rows=tuple(rows), dominance=matrix
    )
