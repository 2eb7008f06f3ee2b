"""Band spectra of periodic approximants.

A q-periodic Verblunsky sequence (q even) has purely absolutely continuous
spectrum: the set of z = e^{i omega} where the trace of the q-site transfer
product -- the discriminant -- lies in [-2, 2].  This module computes
discriminants (directly or through the period-doubling trace recursion),
extracts the band arcs by adaptive grid scanning plus bisection on |disc| = 2,
and builds the finite q x q Floquet operator whose eigenvalues give the exact
band correspondence disc(z0) = phi + 1/phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .arcs import ArcSet
from .errors import NumericAssertionError, ValidationError
from .tracemap import trace_a_grid, trace_orbit
from .transfer import (
    VerblunskyMap,
    theta_matrix,
    transfer_product,
    transfer_product_grid,
)
from .words import SubstitutionRule, fixed_point_prefix

TAU = 2.0 * math.pi
DISC_IMAG_TOL = 1e-9
DEFAULT_RESOLUTION = 1 << 14
MAX_RESOLUTION = 1 << 20
EDGE_ANGLE_TOL = 1e-10


@dataclass(frozen=True)
class PeriodicAlphas:
    """A periodic coefficient sequence anchored at a start site.

    alpha(n) = values[(n - start) mod q]; the default anchor start = 1 makes
    values the coefficients of sites 1..q, matching word positions.
    """

    values: tuple
    start: int = 1

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.values)
        if not vals:
            raise ValidationError("periodic coefficient list is empty")
        if any(abs(v) >= 1.0 for v in vals):
            raise ValidationError("coefficients must lie strictly inside the unit disk")
        object.__setattr__(self, "values", vals)

    @property
    def period(self) -> int:
        return len(self.values)

    def alpha(self, n: int) -> complex:
        return self.values[(n - self.start) % self.period]


def periodic_approximant(
    rule: SubstitutionRule, level: int, f: VerblunskyMap
) -> PeriodicAlphas:
    """Coefficients read off the level-n substitution prefix, repeated."""
    if level < 2:
        raise ValidationError("approximant level must be >= 2")
    word = fixed_point_prefix(rule, level)
    return PeriodicAlphas(tuple(f.alpha(c) for c in word), start=1)


def _require_even_period(alphas: PeriodicAlphas) -> int:
    q = alphas.period
    if q % 2 or q < 2:
        raise ValidationError("band computations need an even period >= 2")
    return q


def discriminant(z: complex, alphas: PeriodicAlphas, imag_tol: float = DISC_IMAG_TOL) -> float:
    """Trace of the one-period transfer product; must be real on |z| = 1."""
    q = _require_even_period(alphas)
    tr = transfer_product(alphas, z, 1, q).trace
    if abs(tr.imag) > imag_tol * max(1.0, abs(tr)):
        raise NumericAssertionError(
            f"discriminant must be real on the unit circle; imaginary part {tr.imag}"
        )
    return tr.real


def raw_discriminant_grid(z: np.ndarray, alphas: PeriodicAlphas) -> np.ndarray:
    """One-period product trace over an array of points, before the reality check."""
    q = _require_even_period(alphas)
    prod = transfer_product_grid(alphas, np.asarray(z, dtype=complex), 1, q)
    return prod[0, 0] + prod[1, 1]


def reality_residual(tr: np.ndarray) -> float:
    """Worst relative imaginary part over an array of would-be-real values."""
    tr = np.atleast_1d(tr)
    return float(np.max(np.abs(tr.imag) / np.maximum(1.0, np.abs(tr))))


def discriminant_grid(
    z: np.ndarray, alphas: PeriodicAlphas, imag_tol: float = DISC_IMAG_TOL
) -> np.ndarray:
    """Vectorized discriminant over an array of unit-circle points."""
    tr = raw_discriminant_grid(z, alphas)
    worst = reality_residual(tr)
    if worst > imag_tol:
        raise NumericAssertionError(
            f"discriminant must be real on the unit circle; worst residual {worst}"
        )
    return tr.real


# ---------------------------------------------------------------------------
# band arcs
# ---------------------------------------------------------------------------


def _cyclic_runs(mask: np.ndarray):
    """Start/end sample indices of cyclic runs of True in a boolean array."""
    n = len(mask)
    change = mask != np.roll(mask, 1)  # True where a run starts at i
    starts = np.nonzero(change & mask)[0]
    ends_next = np.nonzero(change & ~mask)[0]  # first False after a run
    if len(starts) == 0:
        return [], []
    ends = []
    for s in starts:
        nxt = ends_next[ends_next > s]
        e = (nxt[0] if len(nxt) else ends_next[0] + n) - 1
        ends.append(e % n)
    return list(starts), ends


def _bisect_band_edges(
    inside_fn: Callable[[np.ndarray], np.ndarray],
    out_angles: np.ndarray,
    in_angles: np.ndarray,
    angle_tol: float,
):
    """Shrink brackets (outside angle, inside angle) down to angle_tol."""
    a = out_angles.astype(float).copy()
    b = in_angles.astype(float).copy()
    for _ in range(64):
        if np.max(np.abs(b - a)) <= angle_tol:
            break
        mid = 0.5 * (a + b)
        mid_in = inside_fn(mid)
        b = np.where(mid_in, mid, b)
        a = np.where(mid_in, a, mid)
    return 0.5 * (a + b)


def band_arcs_from_function(
    disc_fn: Callable[[np.ndarray], np.ndarray],
    resolution: int = DEFAULT_RESOLUTION,
    angle_tol: float = EDGE_ANGLE_TOL,
    max_resolution: int = MAX_RESOLUTION,
) -> ArcSet:
    """Band arcs {omega : |disc(e^{i omega})| <= 2} for a sampled discriminant.

    The grid doubles until the number of bands stabilizes (a cheap tangency
    fallback), then every edge is bisected to ``angle_tol``.
    """
    if resolution < 8:
        raise ValidationError("resolution too small to scan bands")

    def inside(omegas: np.ndarray) -> np.ndarray:
        return np.abs(disc_fn(omegas)) <= 2.0

    res = int(resolution)
    prev_count = -1
    while True:
        omegas = np.arange(res) * (TAU / res)
        mask = inside(omegas)
        starts, ends = _cyclic_runs(mask)
        count = len(starts)
        if (count == prev_count and count > 0) or res >= max_resolution or mask.all() or not mask.any():
            break
        prev_count = count
        res *= 2

    if mask.all():
        return ArcSet.full(TAU)
    if not mask.any():
        return ArcSet.empty(TAU)

    step = TAU / res
    starts = np.asarray(starts)
    ends = np.asarray(ends)
    left = _bisect_band_edges(inside, (starts - 1) * step, starts * step, angle_tol)
    right = _bisect_band_edges(inside, (ends + 1) * step, ends * step, angle_tol)
    pairs = []
    for lo, hi in zip(left, right):
        if hi < lo:
            hi += TAU
        pairs.append((lo, hi))
    return ArcSet(pairs, TAU)


def spectrum_arcs(
    alphas: PeriodicAlphas,
    resolution: int = DEFAULT_RESOLUTION,
    angle_tol: float = EDGE_ANGLE_TOL,
    max_resolution: int = MAX_RESOLUTION,
) -> ArcSet:
    """Band arcs of a periodic coefficient sequence (generic route)."""

    def disc(omegas: np.ndarray) -> np.ndarray:
        return discriminant_grid(np.exp(1j * omegas), alphas)

    return band_arcs_from_function(disc, resolution, angle_tol, max_resolution)


def period_doubling_arcs(
    level: int,
    f: VerblunskyMap,
    resolution: int = DEFAULT_RESOLUTION,
    angle_tol: float = EDGE_ANGLE_TOL,
    max_resolution: int = MAX_RESOLUTION,
) -> ArcSet:
    """Band arcs of the level-n period-doubling approximant.

    Uses the trace recursion (real arithmetic, O(level) per grid point)
    instead of the 2^level-fold matrix product.
    """
    if level < 1:
        raise ValidationError("level must be >= 1")

    def disc(omegas: np.ndarray) -> np.ndarray:
        return trace_a_grid(np.exp(1j * omegas), f, level)

    return band_arcs_from_function(disc, resolution, angle_tol, max_resolution)


def period_doubling_discriminant(z: complex, f: VerblunskyMap, level: int) -> float:
    """Scalar discriminant of the level-n period-doubling approximant."""
    return trace_orbit(z, f, level).trace_a_at(level)


# ---------------------------------------------------------------------------
# Floquet operator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FloquetOperator:
    """The q x q twisted one-period operator at Floquet phase phi."""

    mat: np.ndarray
    q: int
    phi: complex

    def unitarity_defect(self) -> float:
        e = self.mat
        return float(np.linalg.norm(e @ e.conj().T - np.eye(self.q), "fro"))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.mat)


def build_floquet(alphas: PeriodicAlphas, phi: complex) -> FloquetOperator:
    """Assemble the twisted one-period CMV operator from 2x2 unitary blocks.

    Two block-diagonal unitaries interleave: one carries the blocks at even
    offsets 0, 2, ..., q-2, the other the odd offsets 1, 3, ..., q-3 plus a
    wrapped corner block twisted by phi.  Their product is unitary and its
    eigenvalues z0 solve disc(z0) = phi + 1/phi.
    """
    q = alphas.period
    if q < 4 or q % 2:
        raise ValidationError("Floquet operator needs an even period >= 4")
    phi = complex(phi)
    if abs(abs(phi) - 1.0) > 1e-8:
        raise ValidationError("Floquet phase must sit on the unit circle")

    even_part = np.zeros((q, q), dtype=complex)
    for j in range(0, q, 2):
        even_part[j : j + 2, j : j + 2] = theta_matrix(alphas.alpha(j))

    odd_part = np.zeros((q, q), dtype=complex)
    for j in range(1, q - 2, 2):
        odd_part[j : j + 2, j : j + 2] = theta_matrix(alphas.alpha(j))
    corner = theta_matrix(alphas.alpha(q - 1))
    odd_part[q - 1, q - 1] = corner[0, 0]
    odd_part[q - 1, 0] = corner[0, 1] * phi
    odd_part[0, q - 1] = corner[1, 0] / phi
    odd_part[0, 0] = corner[1, 1]

    return FloquetOperator(even_part @ odd_part, q, phi)


def floquet_discriminant_residual(
    alphas: PeriodicAlphas, phi: complex
) -> dict:
    """Cross-validate the Floquet route against the transfer-product route.

    Returns the unitarity defect and the worst |disc(z0) - (phi + 1/phi)|
    over the eigenvalues z0 of the Floquet operator.
    """
    flo = build_floquet(alphas, phi)
    target = (phi + 1.0 / phi).real
    worst = 0.0
    for z0 in flo.eigenvalues():
        z0 = complex(z0)
        z0 /= abs(z0)  # eigenvalues of a unitary matrix, up to rounding
        worst = max(worst, abs(discriminant(z0, alphas) - target))
    return {
        "q": flo.q,
        "phi": flo.phi,
        "unitarity_defect": flo.unitarity_defect(),
        "worst_residual": worst,
    }
