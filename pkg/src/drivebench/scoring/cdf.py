"""Empirical distribution summaries for per-frame scores."""

from typing import Sequence

__all__ = ["build_cdf", "cdf_csv"]


def build_cdf(values: Sequence[float]) -> list[tuple[float, float]]:
    """Empirical CDF as (value, cumulative fraction) over unique sorted values.

    The final fraction is exactly 1.0; an empty input yields an empty CDF.
    """
    n = len(values)
    if n == 0:
        return []
    ordered = sorted(values)
    out: list[tuple[float, float]] = []
    for i, v in enumerate(ordered):
        if i + 1 < n and ordered[i + 1] == v:
            continue
        out.append((v, (i + 1) / n))
    return out


def cdf_csv(cdf: Sequence[tuple[float, float]]) -> str:
    """Serialise a CDF as deterministic two-column CSV text."""
    lines = ["value,cum_fraction"]
    for value, fraction in cdf:
        lines.append(f"{value!r},{fraction!r}")
    return "\n".join(lines) + "\n"
