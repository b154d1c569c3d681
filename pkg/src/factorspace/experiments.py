"""Compare factor planes from aggregated and full analyses.

Four comparisons are supported. With records grouped in their given order:

* ``AggOntoFull``: group aggregates projected as supplementary rows into the
  fit of all records, against the active fit of the aggregates;
* ``FullOntoAgg``: all records projected into the fit of the aggregates,
  against the active fit of all records.

The ``Clustered*`` variants do the same after records are sorted by their
first-factor coordinate in the full fit, so each group gathers similar
records. Distances are taken in the plane of factors 1 and 2, after flipping
factor signs to best agree, since each fit picks its signs independently.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import ca
from .matrix import ContingencyTable, RowGrouping, aggregate_rows, order_rows_by_scores


class Scenario(str, enum.Enum):
    AGG_ONTO_FULL = "AggOntoFull"
    FULL_ONTO_AGG = "FullOntoAgg"
    CLUSTERED_AGG_ONTO_FULL = "ClusteredAggOntoFull"
    FULL_ONTO_CLUSTERED_AGG = "FullOntoClusteredAgg"


class Ordering(str, enum.Enum):
    GIVEN = "given"
    FACTOR1 = "factor1"


class PlaneCoords(NamedTuple):
    labels: Sequence[str]
    xy: np.ndarray


@dataclass
class ComparisonReport:
    scenario: Scenario | None
    ssd: float
    n_points: int
    flips: tuple[bool, bool] = (False, False)
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario.value if self.scenario else None,
            "ssd": self.ssd,
            "n_points": self.n_points,
            "flips": list(self.flips),
            **self.extra,
        }


def ssd_principal_plane(a: PlaneCoords, b: PlaneCoords,
                        scenario: Scenario | None = None) -> ComparisonReport:
    """Sum of squared distances between matched points of two planes.

    Points are matched by label. Each axis of ``b`` may be negated; the
    combination giving the smallest sum is used and reported in ``flips``.
    """
    la, lb = list(a.labels), list(b.labels)
    if len(set(la)) != len(la) or set(la) != set(lb) or len(la) != len(lb):
        raise ValueError("label sets differ")
    pos = {label: i for i, label in enumerate(lb)}
    xa = np.asarray(a.xy, dtype=float)[:, :2]
    xb = np.asarray(b.xy, dtype=float)[[pos[label] for label in la], :2]
    best = None
    for flips in itertools.product((False, True), repeat=2):
        s = np.where(flips, -1.0, 1.0)
        d = float(np.sum((xa - xb * s) ** 2))
        if best is None or d < best[0]:
            best = (d, flips)
    return ComparisonReport(scenario, best[0], len(la), best[1])


def _plane(proj: ca.Projection) -> np.ndarray:
    out = np.zeros((len(proj.labels), 2))
    k = min(2, proj.coords.shape[1])
    out[:, :k] = proj.coords[:, :k]
    return out


def run_aggregation_protocol(
    table: ContingencyTable,
    group_size: int = 100,
    ordering: Ordering | str = Ordering.GIVEN,
) -> list[ComparisonReport]:
    """Fit full and aggregated tables, cross-project, and score both ways.

    Returns the aggregates-onto-full report followed by the
    full-onto-aggregates report.
    """
    ordering = Ordering(ordering)
    n = table.shape[0]
    grouping = RowGrouping.consecutive(n, group_size)
    full = ca.fit(table)
    if full.dropped_rows:
        raise ValueError(f"table has empty rows: {full.dropped_rows[:5]}")

    work = table
    if ordering is Ordering.FACTOR1:
        work = order_rows_by_scores(table, full.plane("rows")[:, 0])
    agg = aggregate_rows(work, grouping)
    agg_fit = ca.fit(agg)

    agg_on_full = ca.project_supplementary_rows(full, agg)
    full_on_agg = ca.project_supplementary_rows(agg_fit, table)

    clustered = ordering is Ordering.FACTOR1
    s1 = Scenario.CLUSTERED_AGG_ONTO_FULL if clustered else Scenario.AGG_ONTO_FULL
    s2 = Scenario.FULL_ONTO_CLUSTERED_AGG if clustered else Scenario.FULL_ONTO_AGG
    r1 = ssd_principal_plane(PlaneCoords(agg_on_full.labels, _plane(agg_on_full)),
                             PlaneCoords(agg_fit.row_labels, agg_fit.plane("rows")), s1)
    r2 = ssd_principal_plane(PlaneCoords(full_on_agg.labels, _plane(full_on_agg)),
                             PlaneCoords(full.row_labels, full.plane("rows")), s2)
    for r in (r1, r2):
        r.extra.update(group_size=group_size, ordering=ordering.value,
                       groups=[label for label, _ in grouping.groups])
    r1.extra["members"] = {label: [work.row_labels[i] for i in idx]
                           for label, idx in grouping.groups}
    return [r1, r2]
