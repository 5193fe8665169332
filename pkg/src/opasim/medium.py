"""Nonlinear dielectric medium as a pointwise polynomial polarization map.

The medium response to a field E is eps0*(chi1*E + chi2*E**2 + chi3*E**3),
applied sample by sample. The radiated output field is taken to be the
polarization divided by eps0*chi1, so a purely linear medium is the
identity channel and squeezing is always measured against the input
vacuum level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import TimeSeries


@dataclass(frozen=True)
class SusceptibilityProfile:
    """Medium constants. chi1 is allowed to be zero so that individual
    polarization orders can be isolated in analysis runs, but output
    normalization then becomes undefined and is rejected."""

    chi1: float = 1.0
    chi2: float = 0.0
    chi3: float = 0.0
    eps0: float = 1.0

    def __post_init__(self):
        if not self.eps0 > 0.0:
            raise ValueError("eps0 must be positive")
        if self.chi1 < 0.0:
            raise ValueError("chi1 must be non-negative")


def polarize(e: TimeSeries, medium: SusceptibilityProfile) -> TimeSeries:
    """Pointwise polarization eps0*(chi1*E + chi2*E^2 + chi3*E^3)."""
    v = e.values
    out = medium.chi1 * v + medium.chi2 * v * v
    if medium.chi3 != 0.0:
        out += medium.chi3 * v * v * v
    return TimeSeries(e.grid, medium.eps0 * out)


def normalize_output(p: TimeSeries, medium: SusceptibilityProfile) -> TimeSeries:
    """Scale a polarization to field units: p / (eps0 * chi1).

    With this convention the pump-off channel maps input to output
    identically, which pins the vacuum reference level of the output.
    """
    if medium.chi1 <= 0.0:
        raise ValueError("output normalization requires chi1 > 0")
    if medium.eps0 <= 0.0:
        raise ValueError("output normalization requires eps0 > 0")
    return TimeSeries(p.grid, p.values / (medium.eps0 * medium.chi1))


def transfer_values(values: np.ndarray, medium: SusceptibilityProfile) -> np.ndarray:
    """Array form of the polarize-then-normalize channel.

    Performs the exact operation sequence of
    normalize_output(polarize(...)) so that batched and per-sample paths
    agree bitwise.
    """
    if medium.chi1 <= 0.0:
        raise ValueError("output normalization requires chi1 > 0")
    p = medium.chi1 * values + medium.chi2 * values * values
    if medium.chi3 != 0.0:
        p += medium.chi3 * values * values * values
    return (medium.eps0 * p) / (medium.eps0 * medium.chi1)


def transfer(e: TimeSeries, medium: SusceptibilityProfile) -> TimeSeries:
    """Full single-pass channel: polarize then normalize to field units."""
    return TimeSeries(e.grid, transfer_values(e.values, medium))
