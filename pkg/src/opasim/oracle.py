"""Closed-form single-pass quadrature map of the pumped quadratic medium.

With the pump at twice the fundamental and normalized pump strength
r = chi2*B/chi1, the omega-frequency channel multiplies the cosine
quadrature by (1-r) and the sine quadrature by (1+r). This "raw" map is
exactly what the truncated polynomial medium does and is the oracle the
numerical pipeline is checked against. Its gain product (1-r)*(1+r) dips
below one at second order in r, so the output is slightly "too pure" to
be a minimum-uncertainty state. The "symplectic" variant rescales the
gains to exp(-rho), exp(+rho) with rho = atanh(r), which keeps the
(1-r)/(1+r) gain ratio while forcing unit determinant, i.e. an idealized
minimum-uncertainty squeezer with the same squeezing angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensemble import GaussianState
from .fields import QuadraturePair

MODES = ("raw", "symplectic")


@dataclass(frozen=True)
class PassGain:
    """Normalized pump strength r = chi2*B/chi1 and map variant."""

    r: float
    mode: str = "raw"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not abs(self.r) < 1.0:
            raise ValueError(
                "|r| must be < 1: the single-pass map is only valid below "
                "threshold (and the symplectic rescaling atanh(r) requires it)"
            )

    def gains(self) -> tuple[float, float]:
        """Multipliers (g1, g2) for the cosine and sine quadratures."""
        if self.mode == "raw":
            return 1.0 - self.r, 1.0 + self.r
        rho = math.atanh(self.r)
        return math.exp(-rho), math.exp(rho)


def gain_matrix(gain: PassGain, pump_phase: float = 0.0) -> np.ndarray:
    """2x2 quadrature transfer matrix of the single pass.

    For pump phase 0 this is diag(g1, g2). A pump phase psi moves the
    squeezed axis to the direction -psi/2, so the matrix is the
    axis-aligned one conjugated by that rotation; psi = pi swaps the two
    gains (amplitude squeezing becomes phase squeezing). The matrix is
    symmetric.
    """
    g1, g2 = gain.gains()
    if pump_phase == 0.0:
        return np.array([[g1, 0.0], [0.0, g2]])
    alpha = -0.5 * pump_phase
    c, s = math.cos(alpha), math.sin(alpha)
    rot = np.array([[c, -s], [s, c]])
    return rot @ np.array([[g1, 0.0], [0.0, g2]]) @ rot.T


def single_pass(state: GaussianState, gain: PassGain) -> GaussianState:
    """Apply the quadrature gain map to means and covariance."""
    g1, g2 = gain.gains()
    mean = QuadraturePair(g1 * state.mean.x1, g2 * state.mean.x2)
    g = np.array([[g1, 0.0], [0.0, g2]])
    return GaussianState(mean, g @ state.cov @ g)


def iterate_passes(state: GaussianState, gain: PassGain, n: int) -> GaussianState:
    """n-fold composition of :func:`single_pass` (gains g1**n, g2**n)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    out = state
    for _ in range(n):
        out = single_pass(out, gain)
    return out


def gain_of_phase(amplitude: float, phi: float, gain: PassGain) -> float:
    """Output/input fundamental amplitude ratio for a carrier at phase phi.

    Deamplified at phi = 0 (and 180 deg), amplified at phi = +-90 deg
    when r > 0.
    """
    if not amplitude > 0.0:
        raise ValueError("amplitude must be positive")
    g1, g2 = gain.gains()
    q_in = QuadraturePair.from_amplitude_phase(amplitude, phi)
    return math.hypot(g1 * q_in.x1, g2 * q_in.x2) / amplitude


def map_quadratures(
    pairs: np.ndarray, gain: PassGain, pump_phase: float = 0.0
) -> np.ndarray:
    """Apply the gain map to an (n, 2) array of sampled quadrature pairs."""
    pairs = np.asarray(pairs, dtype=float)
    g1, g2 = gain.gains()
    if pump_phase == 0.0:
        return pairs * np.array([g1, g2])
    return pairs @ gain_matrix(gain, pump_phase).T


def map_state(
    state: GaussianState, gain: PassGain, pump_phase: float = 0.0
) -> GaussianState:
    """Gain map on a Gaussian state, with optional pump phase."""
    if pump_phase == 0.0:
        return single_pass(state, gain)
    m = gain_matrix(gain, pump_phase)
    mean_vec = m @ state.mean.as_array()
    return GaussianState(QuadraturePair(*mean_vec), m @ state.cov @ m.T)
