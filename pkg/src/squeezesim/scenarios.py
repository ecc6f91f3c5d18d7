"""The four experiment scenarios driven by an :class:`ExperimentConfig`."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gaussian as g
from .detection import (
    SpectrumResult,
    efficiency_after,
    enhancement_db,
    measured_variance,
    v_to_db,
    visibility_efficiency,
)
from .optomech import sql_optimum, sql_total_noise, squeezing_after_cavity, transduced_spectrum
from .sidebands import homodyne_arc, prepare_pair


def _audit(pair, where):
    if not g.is_physical(pair.state):
        raise g.UnphysicalStateError(f"unphysical sideband state after {where}")
    return pair


def _pair_factory(cfg, r):
    def factory(omega):
        pair = prepare_pair(omega, r, cfg.carrier_alpha)
        return _audit(squeezing_after_cavity(pair, cfg.cavity), "cavity")

    return factory


@dataclass
class CharacterizeResult:
    thetas: np.ndarray
    variance_snu: np.ndarray
    dark_snu: float

    @property
    def variance_db(self):
        return v_to_db(self.variance_snu)

    @property
    def subtracted_db(self):
        return v_to_db(self.variance_snu - self.dark_snu)

    @property
    def min_db(self):
        return float(self.variance_db.min())

    @property
    def max_db(self):
        return float(self.variance_db.max())


def run_characterize(cfg, dark=True):
    """LO-phase sweep of the transmitted squeezed state with the resonator decoupled."""
    thetas = np.linspace(0.0, 2.0 * math.pi, cfg.theta_points)
    pair = _audit(prepare_pair(1.0, cfg.source_r(), cfg.carrier_alpha), "preparation")
    chain = cfg.chain(dark=dark, in_situ=False)
    arc = homodyne_arc(pair, thetas)
    v = np.array([measured_variance(var, chain) for _, var in arc])
    return CharacterizeResult(thetas, v, chain.dark_noise_snu)


@dataclass
class SpectrumRun:
    coherent: SpectrumResult
    squeezed: SpectrumResult
    dark_snu: float

    def _floor(self, res):
        # floors are frequency-flat only without cavity filtering; report the median
        return float(np.median(res.floor_snu))

    @property
    def coherent_floor(self):
        return self._floor(self.coherent)

    @property
    def squeezed_floor(self):
        return self._floor(self.squeezed)

    @property
    def enhancement_db(self):
        return enhancement_db(self.coherent_floor, self.squeezed_floor)

    @property
    def subtracted_enhancement_db(self):
        return enhancement_db(self.coherent_floor - self.dark_snu, self.squeezed_floor - self.dark_snu)

    def peak_frequencies(self, result=None):
        """Grid frequencies (rad/s) of local maxima in the signal."""
        res = self.squeezed if result is None else result
        s = res.signal_snu
        if s.size < 3:
            return np.array([])
        idx = np.flatnonzero((s[1:-1] > s[:-2]) & (s[1:-1] >= s[2:])) + 1
        return res.grid[idx]


def run_spectrum(cfg, dark=True):
    """Coherent (r = 0) and squeezed spectra through the same chain."""
    chain = cfg.chain(dark=dark)
    grid = cfg.grid.omegas()
    coherent = transduced_spectrum(_pair_factory(cfg, 0.0), cfg.modes, cfg.coupling, chain, grid)
    squeezed = transduced_spectrum(_pair_factory(cfg, cfg.source_r()), cfg.modes, cfg.coupling, chain, grid)
    for res in (coherent, squeezed):
        if not np.all(np.isfinite(res.total_snu)):
            raise g.UnphysicalStateError("non-finite spectrum values")
    return SpectrumRun(coherent, squeezed, chain.dark_noise_snu)


@dataclass
class SqlRow:
    r: float
    n: float
    imprecision: float
    backaction: float
    total: float


@dataclass
class SqlRun:
    rows: list
    optima: list  # (r, n_star, s_min)


def run_sql(cfg):
    """Noise versus photon number for coherent and squeezed probing."""
    spec = cfg.sql
    ns = np.geomspace(spec.n_min, spec.n_max, spec.points)
    rows, optima = [], []
    for r in (0.0, cfg.source_r()):
        for n in ns:
            rows.append(SqlRow(r, float(n), *sql_total_noise(float(n), r, spec.a, spec.b)))
        optima.append((r, *sql_optimum(r, spec.a, spec.b)))
    return SqlRun(rows, optima)


@dataclass
class BudgetStage:
    label: str
    eta: float | None
    variance_snu: float

    @property
    def level_db(self):
        return v_to_db(self.variance_snu)


@dataclass
class BudgetRun:
    stages: list
    coherent_floor: float
    target_db: float | None
    residual_eta: float | None
    required_source_r: float | None

    @property
    def output_db(self):
        return enhancement_db(self.coherent_floor, self.stages[-1].variance_snu)

    def erosion_db(self):
        """dB of squeezing lost at each stage after the source."""
        out = []
        for prev, cur in zip(self.stages, self.stages[1:]):
            out.append(cur.level_db - prev.level_db)
        return out


def budget_stages(v_source, losses, dark_snu=0.0):
    """Cumulative variance after each ``(label, eta)`` loss, then dark noise."""
    stages = [BudgetStage("source", None, v_source)]
    v = v_source
    for label, eta in losses:
        v = efficiency_after(v, eta)
        stages.append(BudgetStage(label, eta, v))
    if dark_snu:
        stages.append(BudgetStage("dark_noise", None, v + dark_snu))
    return stages


def residual_efficiency(v_out, target_db, dark_snu=0.0):
    """Extra efficiency that moves ``v_out`` to ``target_db`` relative to the coherent floor.

    A value above 1 means the chain is already too lossy for the target.
    Returns ``None`` when the target lies above the shot-noise level.
    """
    v_target = 10.0 ** (target_db / 10.0) * (1.0 + dark_snu) - dark_snu
    if v_out >= 1.0:
        return None
    eta = (1.0 - v_target) / (1.0 - v_out)
    return eta if eta >= 0.0 else None


def required_source_r(eta_total, target_db, dark_snu=0.0):
    """Source squeeze parameter that makes the full chain reach ``target_db``."""
    v_target = 10.0 ** (target_db / 10.0) * (1.0 + dark_snu) - dark_snu
    if eta_total <= 0:
        return None
    v_src = 1.0 - (1.0 - v_target) / eta_total
    if not 0.0 < v_src <= 1.0:
        return None
    return -0.5 * math.log(v_src)


def run_budget(cfg, dark=True):
    """Stage-by-stage squeezing erosion from the source to the detector output."""
    losses = list(cfg.losses)
    losses.append(("visibility", visibility_efficiency(cfg.visibility)))
    losses.append(("quantum_efficiency", cfg.quantum_efficiency))
    dark_snu = cfg.dark_snu(dark)
    stages = budget_stages(cfg.source_variance(), losses, dark_snu)
    residual = required = None
    if cfg.target_floor_db is not None:
        v_opt = stages[-2].variance_snu if dark_snu else stages[-1].variance_snu
        residual = residual_efficiency(v_opt, cfg.target_floor_db, dark_snu)
        required = required_source_r(math.prod(eta for _, eta in losses), cfg.target_floor_db, dark_snu)
    return BudgetRun(stages, 1.0 + dark_snu, cfg.target_floor_db, residual, required)
