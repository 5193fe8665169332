"""Canonical field representations: time grids, spectral lines, quadratures.

All fields are dimensionless (normalized units). The fundamental angular
frequency defaults to ``2*pi`` so that one fundamental period equals one
time unit. Sampling is uniform and left-aligned with the endpoint of the
last period excluded, which makes discrete trigonometric orthogonality
exact and lock-in extraction leakage-free for band-limited signals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling of an integer number of fundamental periods.

    Parameters
    ----------
    samples_per_period : int
        Samples per fundamental period. Harmonic order k can only be
        represented without aliasing for k < samples_per_period / 2.
    n_periods : int
        Number of fundamental periods covered by the grid.
    omega : float
        Fundamental angular frequency. Defaults to 2*pi (period = 1).
    """

    samples_per_period: int = 64
    n_periods: int = 4
    omega: float = TWO_PI

    def __post_init__(self):
        if self.samples_per_period < 1:
            raise ValueError("samples_per_period must be a positive integer")
        if self.n_periods < 1:
            raise ValueError("n_periods must be a positive integer")
        if not self.omega > 0.0:
            raise ValueError("omega must be positive")

    @property
    def n_samples(self) -> int:
        return self.samples_per_period * self.n_periods

    @property
    def period(self) -> float:
        return TWO_PI / self.omega

    def times(self) -> np.ndarray:
        """Sample times t_n = n * period / samples_per_period, last endpoint excluded."""
        step = self.period / self.samples_per_period
        return np.arange(self.n_samples) * step

    def phases(self) -> np.ndarray:
        """Fundamental phases omega * t_n in radians."""
        return np.arange(self.n_samples) * (TWO_PI / self.samples_per_period)

    def max_harmonic(self) -> int:
        """Largest harmonic order representable without aliasing."""
        return (self.samples_per_period - 1) // 2

    def supports_harmonic(self, k: int) -> bool:
        return 0 <= k < self.samples_per_period / 2


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A real-valued field sampled on a :class:`TimeGrid`."""

    grid: TimeGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.shape[0] != self.grid.n_samples:
            raise ValueError(
                f"values must be a 1-d array of length {self.grid.n_samples}, "
                f"got shape {np.shape(self.values)}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __add__(self, other: "TimeSeries") -> "TimeSeries":
        if other.grid != self.grid:
            raise ValueError("cannot add series on different grids")
        return TimeSeries(self.grid, self.values + other.values)

    def mean_square(self) -> float:
        return float(np.mean(self.values**2))


@dataclass(frozen=True)
class HarmonicComponent:
    """One spectral line: c*cos(k*omega*t) + s*sin(k*omega*t).

    The equivalent polar form is magnitude * cos(k*omega*t - phase).
    DC (k = 0) has no sine part.
    """

    k: int
    c: float
    s: float = 0.0

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("harmonic order k must be non-negative")
        if self.k == 0 and self.s != 0.0:
            raise ValueError("DC component (k=0) cannot have a sine part")

    @property
    def magnitude(self) -> float:
        return math.hypot(self.c, self.s)

    @property
    def phase(self) -> float:
        """Phase in c*cos + s*sin = magnitude*cos(k*omega*t - phase), radians."""
        return math.atan2(self.s, self.c)


@dataclass(frozen=True)
class QuadraturePair:
    """Cosine/sine amplitudes of the fundamental-frequency field.

    The field is x1*cos(omega*t) + x2*sin(omega*t). For a carrier written
    as A*cos(omega*t + phi) the relation is x1 = A*cos(phi),
    x2 = -A*sin(phi).
    """

    x1: float
    x2: float

    @classmethod
    def from_amplitude_phase(cls, amplitude: float, phi: float) -> "QuadraturePair":
        return cls(amplitude * math.cos(phi), -amplitude * math.sin(phi))

    @property
    def amplitude(self) -> float:
        return math.hypot(self.x1, self.x2)

    @property
    def phi(self) -> float:
        """Carrier phase phi with x1 = A*cos(phi), x2 = -A*sin(phi)."""
        return math.atan2(-self.x2, self.x1)

    def projected(self, theta: float) -> float:
        """Rotated quadrature X(theta) = x1*cos(theta) + x2*sin(theta)."""
        return self.x1 * math.cos(theta) + self.x2 * math.sin(theta)

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2])


def quadratures_to_carrier(q: QuadraturePair) -> HarmonicComponent:
    """Represent a quadrature pair as the fundamental (k=1) spectral line."""
    return HarmonicComponent(k=1, c=q.x1, s=q.x2)


def carrier_to_quadratures(component: HarmonicComponent) -> QuadraturePair:
    """Inverse of :func:`quadratures_to_carrier`; only k=1 lines qualify."""
    if component.k != 1:
        raise ValueError(f"quadratures are defined for k=1 only, got k={component.k}")
    return QuadraturePair(component.c, component.s)


def pump_carrier(amplitude: float, phase: float = 0.0) -> HarmonicComponent:
    """Second-harmonic pump line -B*cos(2*omega*t + phase) with B = amplitude."""
    return HarmonicComponent(
        k=2, c=-amplitude * math.cos(phase), s=amplitude * math.sin(phase)
    )


def synthesize(
    carriers: Iterable[HarmonicComponent] | Sequence[HarmonicComponent],
    grid: TimeGrid,
) -> TimeSeries:
    """Sum spectral lines into a sampled time series.

    Raises ValueError if any carrier would alias on the grid
    (k >= samples_per_period / 2).
    """
    carriers = list(carriers)
    for comp in carriers:
        if not grid.supports_harmonic(comp.k):
            raise ValueError(
                f"harmonic k={comp.k} aliases on a grid with "
                f"samples_per_period={grid.samples_per_period}"
            )
    phases = grid.phases()
    values = np.zeros(grid.n_samples)
    for comp in carriers:
        values += comp.c * np.cos(comp.k * phases) + comp.s * np.sin(comp.k * phases)
    return TimeSeries(grid, values)
