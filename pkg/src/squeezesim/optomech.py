"""Optomechanical transduction, cavity filtering, mechanical spectra and SQL scaling.

All frequencies are angular (rad/s). The mechanical displacement is made
dimensionless with an explicit zero-point length ``x_zpf`` before it enters
the modulation index, so ``g0`` keeps its meaning as a rate.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import constants

from . import gaussian as g
from .detection import SpectrumResult, effective_efficiency, measured_variance
from .sidebands import LOWER, UPPER, SidebandPair, joint_variance


@dataclass(frozen=True)
class MechanicalMode:
    """Lorentzian vibration mode: frequency, FWHM linewidth and peak displacement PSD (m^2/Hz)."""

    omega_m: float
    gamma_m: float
    s_x_peak: float

    def __post_init__(self):
        if not self.omega_m > 0:
            raise ValueError(f"omega_m must be > 0, got {self.omega_m}")
        if not self.gamma_m > 0:
            raise ValueError(f"gamma_m must be > 0, got {self.gamma_m}")
        if self.s_x_peak < 0:
            raise ValueError(f"s_x_peak must be >= 0, got {self.s_x_peak}")

    @classmethod
    def thermal(cls, omega_m, gamma_m, mass, temperature):
        """Classical thermal mode, single-sided PSD per Hz.

        ``S_x(omega_m) = 4 k_B T / (m gamma_m omega_m^2)``, which makes the
        integral of the PSD over ``omega / 2 pi`` equal ``k_B T / (m omega_m^2)``.
        """
        if mass <= 0 or temperature < 0:
            raise ValueError("mass must be > 0 and temperature >= 0")
        peak = 4.0 * constants.k * temperature / (mass * gamma_m * omega_m**2)
        return cls(omega_m, gamma_m, peak)


@dataclass(frozen=True)
class CavityParams:
    """Optical resonance: total linewidth ``kappa``, taper coupling ``kappa_ex``, detuning."""

    kappa: float
    kappa_ex: float
    detuning: float = 0.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise ValueError(f"kappa must be > 0, got {self.kappa}")
        if not 0.0 <= self.kappa_ex <= self.kappa:
            raise ValueError(f"kappa_ex must lie in [0, kappa], got {self.kappa_ex}")

    @property
    def regime(self):
        half = self.kappa / 2
        if math.isclose(self.kappa_ex, half, rel_tol=1e-12):
            return "critical"
        return "under-coupled" if self.kappa_ex < half else "over-coupled"


@dataclass(frozen=True)
class OptomechCoupling:
    g0: float
    x_zpf: float

    def __post_init__(self):
        if self.g0 < 0:
            raise ValueError(f"g0 must be >= 0, got {self.g0}")
        if not self.x_zpf > 0:
            raise ValueError(f"x_zpf must be > 0, got {self.x_zpf}")


def modulation_index(coupling, delta_x, omega_m):
    """Phase-modulation depth ``xi = g0 (delta_x / x_zpf) / omega_m``."""
    if not omega_m > 0:
        raise ValueError(f"omega_m must be > 0, got {omega_m}")
    return coupling.g0 * (delta_x / coupling.x_zpf) / omega_m


def transduce(pair, xi):
    """Displace both sidebands by ``xi * alpha / sqrt(2)`` along the phase quadrature."""
    if xi < 0:
        raise ValueError(f"modulation index must be >= 0, got {xi}")
    amp = xi * pair.carrier_alpha / math.sqrt(2.0)
    s = g.displace(g.displace(pair.state, UPPER, 0.0, amp), LOWER, 0.0, amp)
    return pair.replace(state=s)


def cavity_transmission(cavity, omega):
    """Complex field transmission past a side-coupled resonator.

    ``t = 1 - kappa_ex / (kappa/2 - i (detuning + omega))``. Accepts arrays.
    """
    return 1.0 - cavity.kappa_ex / (cavity.kappa / 2 - 1j * (cavity.detuning + np.asarray(omega)))


def squeezing_after_cavity(pair, cavity):
    """Pass a resonantly probed sideband pair through the resonator.

    Each sideband sees a loss of ``|t(±omega)|^2`` and a rotation by
    ``arg t(±omega)``; the carrier amplitude scales by ``|t(0)|``.
    """
    if cavity.detuning != 0:
        raise ValueError("squeezing_after_cavity assumes resonant probing (detuning = 0)")
    s = pair.state
    for mode, om in ((UPPER, pair.omega), (LOWER, -pair.omega)):
        t = complex(cavity_transmission(cavity, om))
        eta = min(abs(t) ** 2, 1.0)
        phi = math.atan2(t.imag, t.real)
        if eta != 1.0:
            s = g.loss(s, mode, eta)
        if phi != 0.0:
            s = g.phase_rotate(s, mode, phi)
    t0 = abs(complex(cavity_transmission(cavity, 0.0)))
    return pair.replace(state=s, carrier_alpha=t0 * pair.carrier_alpha)


def mechanical_psd(mode, omega):
    """``s_x_peak * gamma^2 omega_m^2 / ((omega_m^2 - omega^2)^2 + gamma^2 omega^2)``."""
    om = np.asarray(omega, dtype=float)
    num = mode.gamma_m**2 * mode.omega_m**2
    den = (mode.omega_m**2 - om**2) ** 2 + mode.gamma_m**2 * om**2
    out = mode.s_x_peak * num / den
    return float(out) if out.ndim == 0 else out


def _worker_count(n_points):
    try:
        cap = int(os.environ.get("SQUEEZESIM_THREADS", "1"))
    except ValueError:
        cap = 1
    return max(1, min(cap, n_points))


def transduced_spectrum(pair_factory, modes, coupling, chain, grid):
    """Homodyne noise PSD of the transduced vibration spectrum.

    For each grid frequency the floor is the sideband pair's joint variance
    at the chain's LO phase passed through ``chain``. The signal is
    ``eta * 2 alpha^2 (g0/x_zpf)^2 * sum(S_x) / omega^2`` per unit bandwidth.
    Grid points are independent; ``SQUEEZESIM_THREADS`` > 1 evaluates them
    on a thread pool with results kept in grid order.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("frequency grid must be a non-empty 1-D sequence")
    eta = effective_efficiency(chain)
    gain = (coupling.g0 / coupling.x_zpf) ** 2

    def point(omega):
        pair = pair_factory(omega)
        if not isinstance(pair, SidebandPair):
            raise TypeError("pair_factory must return a SidebandPair")
        floor = measured_variance(joint_variance(pair, chain.lo_phase), chain)
        s_x = sum(mechanical_psd(m, omega) for m in modes)
        signal = eta * 2.0 * pair.carrier_alpha**2 * gain * s_x / omega**2
        return floor, signal

    workers = _worker_count(grid.size)
    if workers == 1:
        rows = [point(w) for w in grid]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(point, grid))
    floor, signal = (np.array(col, dtype=float) for col in zip(*rows))
    return SpectrumResult(grid, floor, signal)


def sql_total_noise(n_photons, r, a, b):
    """Imprecision, back-action and total noise at photon number ``n_photons``.

    Phase squeezing by ``r`` scales imprecision by ``e^{-2r}`` and
    back-action by ``e^{+2r}``.
    """
    if not n_photons > 0:
        raise ValueError(f"photon number must be > 0, got {n_photons}")
    if not (a > 0 and b > 0):
        raise ValueError("noise coefficients a and b must be > 0")
    if r < 0:
        raise ValueError(f"squeeze parameter must be non-negative, got {r}")
    imprecision = a * math.exp(-2.0 * r) / n_photons
    backaction = b * math.exp(2.0 * r) * n_photons
    return imprecision, backaction, imprecision + backaction


def sql_optimum(r, a, b):
    """Photon number at the SQL and the minimum total noise ``2 sqrt(a b)``."""
    if not (a > 0 and b > 0):
        raise ValueError("noise coefficients a and b must be > 0")
    if r < 0:
        raise ValueError(f"squeeze parameter must be non-negative, got {r}")
    return math.exp(-2.0 * r) * math.sqrt(a / b), 2.0 * math.sqrt(a * b)
