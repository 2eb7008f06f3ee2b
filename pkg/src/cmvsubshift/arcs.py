"""Disjoint unions of half-open arcs on a circle.

Band spectra live on the unit circle (period 2*pi, float endpoints) and
Gordon phase sets live on the torus R/Z (period 1, exact Fraction/Quadratic
endpoints).  One container serves both: endpoints may be any totally ordered
numeric type closed under subtraction, and all set algebra (merge, complement,
intersection, measure) stays in that type.  Floats appear only when a caller
asks for them (JSON export, sampling).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .errors import ValidationError
from .quadratic import Quadratic


def _reduce(x, period):
    """x modulo period, in [0, period)."""
    if isinstance(x, Quadratic):
        if period != 1:
            raise ValidationError("exact endpoints require period 1")
        return x.frac()
    if isinstance(x, (Fraction, int)) and period == 1:
        return Fraction(x) - math.floor(Fraction(x))
    r = x % period
    return r if r < period else r - period


class ArcSet:
    """A finite union of half-open arcs [lo, hi) on a circle of given period.

    Input pairs are sweeps from lo to hi (hi may exceed the period or the
    sweep may cross zero); construction normalizes into sorted disjoint arcs
    with endpoints in [0, period], splitting any arc that crosses zero.  A
    sweep of length >= period fills the circle.
    """

    __slots__ = ("period", "arcs")

    def __init__(self, arcs: Iterable[Tuple], period=1):
        if isinstance(period, (int, float)) and not period > 0:
            raise ValidationError("period must be positive")
        pieces: List[Tuple] = []
        full = False
        for lo, hi in arcs:
            span = hi - lo
            if span < 0 or (isinstance(span, float) and not math.isfinite(span)):
                raise ValidationError("arc sweep must be non-negative and finite")
            if span == 0:
                continue
            if span >= period:
                full = True
                break
            lo_r = _reduce(lo, period)
            hi_r = lo_r + span
            if hi_r <= period:
                pieces.append((lo_r, hi_r))
            else:
                pieces.append((lo_r, period))
                pieces.append((0 * span, hi_r - period))
        if full:
            zero = 0 * period if not isinstance(period, int) else 0
            self.period = period
            self.arcs = [(zero, period)]
            return
        pieces.sort(key=lambda arc: arc[0])
        merged: List[Tuple] = []
        for lo, hi in pieces:
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        self.period = period
        self.arcs = merged

    # -- constructors --------------------------------------------------------

    @staticmethod
    def full(period=1) -> "ArcSet":
        return ArcSet([(0, period)], period)

    @staticmethod
    def empty(period=1) -> "ArcSet":
        return ArcSet([], period)

    # -- basic queries -------------------------------------------------------

    @property
    def count(self) -> int:
        return len(self.arcs)

    @property
    def is_empty(self) -> bool:
        return not self.arcs

    @property
    def is_full(self) -> bool:
        return len(self.arcs) == 1 and self.arcs[0][0] == 0 and self.arcs[0][1] == self.period

    @property
    def measure(self):
        total = 0
        for lo, hi in self.arcs:
            total = total + (hi - lo)
        return total

    def contains(self, x) -> bool:
        v = _reduce(x, self.period)
        for lo, hi in self.arcs:
            if lo <= v < hi:
                return True
            if lo > v:
                break
        return False

    def contains_many(self, xs: Sequence[float]) -> np.ndarray:
        """Vectorized float membership (endpoints converted once)."""
        v = np.asarray(xs, dtype=float) % float(self.period)
        los = np.array([float(lo) for lo, _ in self.arcs])
        his = np.array([float(hi) for _, hi in self.arcs])
        if los.size == 0:
            return np.zeros(v.shape, dtype=bool)
        idx = np.searchsorted(los, v, side="right") - 1
        ok = idx >= 0
        idx = np.clip(idx, 0, len(los) - 1)
        return ok & (v < his[idx])

    # -- set algebra ---------------------------------------------------------

    def _check_same_circle(self, other: "ArcSet"):
        if self.period != other.period:
            raise ValidationError("arc sets live on circles of different periods")

    def union(self, other: "ArcSet") -> "ArcSet":
        self._check_same_circle(other)
        return ArcSet(list(self.arcs) + list(other.arcs), self.period)

    def complement(self) -> "ArcSet":
        if self.is_empty:
            return ArcSet.full(self.period)
        if self.is_full:
            return ArcSet.empty(self.period)
        gaps = []
        for k in range(len(self.arcs) - 1):
            gaps.append((self.arcs[k][1], self.arcs[k + 1][0]))
        gaps.append((self.arcs[-1][1], self.arcs[0][0] + self.period))
        return ArcSet(gaps, self.period)

    def intersect(self, other: "ArcSet") -> "ArcSet":
        self._check_same_circle(other)
        out = []
        for lo1, hi1 in self.arcs:
            for lo2, hi2 in other.arcs:
                lo = lo1 if lo1 >= lo2 else lo2
                hi = hi1 if hi1 <= hi2 else hi2
                if lo < hi:
                    out.append((lo, hi))
        return ArcSet(out, self.period)

    # -- sampling and export ---------------------------------------------------

    def sample_interior(self, count: int, margin, rng) -> np.ndarray:
        """Deterministic (seeded-rng) samples strictly inside the arcs,
        at least ``margin`` away from every endpoint."""
        los, his = [], []
        for lo, hi in self.arcs:
            flo, fhi = float(lo) + float(margin), float(hi) - float(margin)
            if fhi > flo:
                los.append(flo)
                his.append(fhi)
        if not los:
            raise ValidationError("no arc interior survives the requested margin")
        los = np.array(los)
        his = np.array(his)
        weights = his - los
        weights = weights / weights.sum()
        which = rng.choice(len(los), size=count, p=weights)
        return los[which] + rng.uniform(0.0, 1.0, count) * (his[which] - los[which])

    def as_dict(self) -> dict:
        return {
            "period": float(self.period),
            "count": self.count,
            "measure": float(self.measure),
            "arcs": [{"lo": float(lo), "hi": float(hi)} for lo, hi in self.arcs],
        }

    def __repr__(self):
        return f"ArcSet(count={self.count}, measure={float(self.measure):.6g}, period={float(self.period):.6g})"
