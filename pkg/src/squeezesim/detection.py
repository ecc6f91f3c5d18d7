"""Homodyne detection chain: stacked efficiencies, dark noise and dB bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def v_to_db(v):
    """Variance in shot-noise units to dB (0 dB is the shot-noise level)."""
    if np.ndim(v):
        return 10.0 * np.log10(np.asarray(v, dtype=float))
    return 10.0 * math.log10(v)


def db_to_v(db):
    if np.ndim(db):
        return 10.0 ** (np.asarray(db, dtype=float) / 10.0)
    return 10.0 ** (db / 10.0)


def r_to_db(r):
    """Squeezed-quadrature level ``e^{-2r}`` in dB."""
    if np.ndim(r):
        return v_to_db(np.exp(-2.0 * np.asarray(r, dtype=float)))
    return v_to_db(math.exp(-2.0 * r))


def db_to_r(db):
    """Squeeze parameter giving a squeezed-quadrature level of ``db`` (<= 0)."""
    if np.ndim(db):
        return -0.5 * np.log(db_to_v(db))
    return -0.5 * math.log(db_to_v(db))


def enhancement_db(coherent_floor, squeezed_floor):
    """Floor change from injecting squeezing; negative means quantum enhancement."""
    return v_to_db(squeezed_floor / coherent_floor)


def visibility_efficiency(visibility):
    """Mode-overlap efficiency of a homodyne visibility (enters squared)."""
    if not 0.0 <= visibility <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {visibility}")
    return visibility**2


def efficiency_after(v_in, eta):
    """Variance after a loss of efficiency ``eta`` (vacuum admixed)."""
    return eta * v_in + (1.0 - eta)


@dataclass(frozen=True)
class DetectionChain:
    """Ordered efficiency stack, local oscillator and electronic noise.

    ``efficiencies`` holds ``(label, eta)`` pairs already in power-efficiency
    form; use :meth:`build` to enter a homodyne visibility, which is squared
    on the way in. ``lo_amplitude`` only matters for :meth:`raw_power`; all
    other outputs are normalised to shot noise and do not depend on it.
    """

    efficiencies: tuple = ()
    lo_amplitude: float = 1.0
    lo_phase: float = math.pi / 2
    dark_noise_snu: float = 0.0

    def __post_init__(self):
        effs = tuple((str(label), float(eta)) for label, eta in self.efficiencies)
        for label, eta in effs:
            if not 0.0 <= eta <= 1.0:
                raise ValueError(f"efficiency {label!r} must lie in [0, 1], got {eta}")
        if self.dark_noise_snu < 0:
            raise ValueError(f"dark_noise_snu must be >= 0, got {self.dark_noise_snu}")
        if self.lo_amplitude <= 0:
            raise ValueError(f"lo_amplitude must be > 0, got {self.lo_amplitude}")
        object.__setattr__(self, "efficiencies", effs)

    @classmethod
    def build(cls, losses=(), visibility=None, quantum_efficiency=None, dark_noise_db=None,
              lo_amplitude=1.0, lo_phase=math.pi / 2):
        """Assemble a chain from named losses, visibility, QE and dark noise in dB."""
        effs = list(losses)
        if visibility is not None:
            effs.append(("visibility", visibility_efficiency(visibility)))
        if quantum_efficiency is not None:
            effs.append(("quantum_efficiency", quantum_efficiency))
        dark = 0.0 if dark_noise_db is None else db_to_v(dark_noise_db)
        return cls(tuple(effs), lo_amplitude, lo_phase, dark)

    def without_dark(self):
        return DetectionChain(self.efficiencies, self.lo_amplitude, self.lo_phase, 0.0)

    def effective_efficiency(self):
        return effective_efficiency(self)

    def measured_variance(self, v_in):
        return measured_variance(v_in, self)

    def raw_power(self, v_in):
        """Un-normalised homodyne noise power, ``beta^2`` times the SNU variance."""
        return self.lo_amplitude**2 * measured_variance(v_in, self)


def effective_efficiency(chain):
    return math.prod(eta for _, eta in chain.efficiencies)


def measured_variance(v_in, chain):
    """Detected variance in SNU: ``eta v_in + (1 - eta) + dark``.

    Electronic dark noise is added after the optical losses.
    """
    eta = effective_efficiency(chain)
    return eta * v_in + (1.0 - eta) + chain.dark_noise_snu


@dataclass
class SpectrumResult:
    """Ideal homodyne noise PSD on an angular-frequency grid, in SNU."""

    grid: np.ndarray
    floor_snu: np.ndarray
    signal_snu: np.ndarray
    total_snu: np.ndarray = field(init=False)
    total_db: np.ndarray = field(init=False)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.floor_snu = np.asarray(self.floor_snu, dtype=float)
        self.signal_snu = np.asarray(self.signal_snu, dtype=float)
        if not (self.grid.shape == self.floor_snu.shape == self.signal_snu.shape):
            raise ValueError("grid, floor and signal must have equal lengths")
        self.total_snu = self.floor_snu + self.signal_snu
        self.total_db = v_to_db(self.total_snu)

    @property
    def omega_hz(self):
        return self.grid / (2.0 * math.pi)

    def __len__(self):
        return self.grid.size
