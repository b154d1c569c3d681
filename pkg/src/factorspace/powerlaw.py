"""Rank-frequency curves and least-squares power-law fits in log-log space."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .corpus import Vocabulary


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class RankFrequency:
    ranks: np.ndarray
    frequencies: np.ndarray

    def __post_init__(self):
        if self.ranks.shape != self.frequencies.shape:
            raise ValueError("ranks and frequencies differ in length")
        if np.any(np.diff(self.frequencies) > 0):
            raise ValueError("frequencies must be non-increasing in rank")

    def __len__(self) -> int:
        return int(self.ranks.size)

    @classmethod
    def from_frequencies(cls, freqs) -> "RankFrequency":
        f = np.asarray(freqs)
        return cls(np.arange(1, f.size + 1), f)

    @property
    def points(self) -> list[tuple[int, int]]:
        return [(int(r), int(f)) for r, f in zip(self.ranks, self.frequencies)]


@dataclass(frozen=True)
class PowerLawFit:
    """OLS line ``ln f = intercept + slope * ln rank`` over ``fit_range``.

    ``alpha`` is ``-slope``. Whether that is the exponent of the frequency
    density or of its survival function depends on how the curve is read;
    only the raw slope is unambiguous.
    """

    slope: float
    intercept: float
    fit_range: tuple[int, int]
    r_squared: float
    n_points: int

    @property
    def alpha(self) -> float:
        return -self.slope

    def predict(self, rank):
        return np.exp(self.intercept) * np.asarray(rank, dtype=float) ** self.slope


def rank_frequency(vocab: Vocabulary) -> RankFrequency:
    if len(vocab) == 0:
        raise ValueError("empty vocabulary")
    return RankFrequency(np.array([e.rank for e in vocab]),
                         np.array([e.frequency for e in vocab]))


def auto_regime(rf: RankFrequency) -> tuple[int, int]:
    """Linear regime: frequency above 1, and ranks before the fan-out.

    The fan-out is taken to start where the longest run of tied frequencies
    begins (the latest such run if several are equally long). Without any
    ties the whole ``frequency > 1`` range is used.
    """
    f = rf.frequencies
    above = np.flatnonzero(f > 1)
    if above.size == 0:
        raise FitError("no ranks with frequency above 1")
    last = above[-1]
    best_len, best_start = 1, None
    start = 0
    for i in range(1, f.size + 1):
        if i == f.size or f[i] != f[start]:
            run = i - start
            if run > 1 and run >= best_len:
                best_len, best_start = run, start
            start = i
    if best_start is not None and best_start > 0:
        last = min(last, best_start - 1)
    return int(rf.ranks[0]), int(rf.ranks[last])


def fit_loglog(rf: RankFrequency, regime: tuple[int, int] | None = None) -> PowerLawFit:
    lo, hi = regime if regime is not None else auto_regime(rf)
    if lo > hi:
        raise FitError(f"empty regime {lo}:{hi}")
    sel = (rf.ranks >= lo) & (rf.ranks <= hi)
    zero = sel & (rf.frequencies <= 0)
    if zero.any():
        warnings.warn(f"{int(zero.sum())} zero frequencies in regime excluded", stacklevel=2)
        sel &= ~zero
    if sel.sum() < 3:
        raise FitError(f"need at least 3 usable points, have {int(sel.sum())}")
    x = np.log(rf.ranks[sel].astype(float))
    y = np.log(rf.frequencies[sel].astype(float))
    design = np.column_stack([np.ones_like(x), x])
    (intercept, slope), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (intercept + slope * x)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(resid @ resid) / ss_tot if ss_tot > 0 else 1.0
    return PowerLawFit(float(slope), float(intercept), (int(lo), int(hi)),
                       float(min(max(r2, 0.0), 1.0)), int(sel.sum()))


def loglog_points(rf: RankFrequency) -> np.ndarray:
    """``(ln rank, ln frequency)`` for every point with positive frequency."""
    pos = rf.frequencies > 0
    return np.column_stack([np.log(rf.ranks[pos].astype(float)),
                            np.log(rf.frequencies[pos].astype(float))])
