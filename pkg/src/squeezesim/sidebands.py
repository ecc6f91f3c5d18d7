"""Sideband picture of a phase-modulated carrier.

A detection frequency ``omega`` picks out the upper (``w0 + omega``, mode 0)
and lower (``w0 - omega``, mode 1) sideband modes. Homodyne detection of the
phase quadrature jointly measures ``X2+ + X2-`` and ``X1+ - X1-``; squeezed
sidebands are a two-mode squeezed vacuum oriented so both combinations are
below shot noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gaussian as g

UPPER, LOWER = 0, 1


@dataclass(frozen=True)
class SidebandPair:
    """Two sideband modes at ``±omega`` around a coherent carrier of amplitude ``carrier_alpha``."""

    omega: float
    state: g.GaussianState
    carrier_alpha: float = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"sideband frequency must be > 0, got {self.omega}")
        if self.state.n_modes != 2:
            raise ValueError(f"a sideband pair holds exactly 2 modes, got {self.state.n_modes}")
        if self.carrier_alpha < 0:
            raise ValueError(f"carrier_alpha must be >= 0, got {self.carrier_alpha}")

    def replace(self, **changes):
        kw = dict(omega=self.omega, state=self.state, carrier_alpha=self.carrier_alpha)
        kw.update(changes)
        return SidebandPair(**kw)


def prepare_pair(omega, r, carrier_alpha=0.0):
    """Phase-squeezed vacuum sidebands; ``r = 0`` gives vacuum sidebands."""
    if r < 0:
        raise ValueError(f"squeeze parameter must be non-negative, got {r}")
    state = g.two_mode_squeeze(g.vacuum(2), UPPER, LOWER, r)
    return SidebandPair(omega, state, carrier_alpha)


def _joint_coeffs(theta):
    c, s = math.cos(theta), math.sin(theta)
    # X_theta = x cos + p sin on each sideband
    same = np.array([c, s, c, s])
    # conjugate quadrature, antisymmetric combination
    c2, s2 = -s, c
    diff = np.array([c2, s2, -c2, -s2])
    return same, diff


def joint_variance(pair, theta):
    """Joint sideband variance seen by a homodyne detector at LO phase ``theta``.

    ``(V(X_t+ + X_t-) + V(X_t'+ - X_t'-)) / 4`` with ``t' = theta + pi/2``,
    normalised so vacuum sidebands give 1 SNU. ``theta = pi/2`` is the
    phase quadrature, ``theta = 0`` the amplitude quadrature.
    """
    same, diff = _joint_coeffs(theta)
    s = pair.state
    return 0.25 * (g.quadrature_variance(s, same) + g.quadrature_variance(s, diff))


def joint_phase_variance(pair):
    """``(V(X2+ + X2-) + V(X1+ - X1-)) / 4``: the phase-quadrature imprecision in SNU."""
    s = pair.state
    return 0.25 * (
        g.quadrature_variance(s, [0.0, 1.0, 0.0, 1.0])
        + g.quadrature_variance(s, [1.0, 0.0, -1.0, 0.0])
    )


def joint_amplitude_variance(pair):
    """``(V(X1+ + X1-) + V(X2+ - X2-)) / 4``: the anti-squeezed partner."""
    s = pair.state
    return 0.25 * (
        g.quadrature_variance(s, [1.0, 0.0, 1.0, 0.0])
        + g.quadrature_variance(s, [0.0, 1.0, 0.0, -1.0])
    )


def apply_symmetric_loss(pair, eta):
    """Equal loss on both sidebands; the carrier amplitude scales by ``sqrt(eta)``."""
    s = g.loss(g.loss(pair.state, UPPER, eta), LOWER, eta)
    return pair.replace(state=s, carrier_alpha=math.sqrt(eta) * pair.carrier_alpha)


def homodyne_arc(pair, thetas):
    """``[(theta, V(theta)), ...]`` for an LO phase sweep."""
    return [(float(t), joint_variance(pair, t)) for t in thetas]
