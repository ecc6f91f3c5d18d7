"""JSON experiment configuration.

Frequencies are given in Hz under ``*_hz`` keys and converted to angular
frequency on load. Every validation failure raises :class:`ConfigError`
naming the offending field with a dotted path.

Schema (all sections except ``squeezing`` optional)::

    {
      "squeezing": {"r": 0.138} | {"db": -1.20},  "reference": "detected" | "source",
      "carrier_alpha": 1e4,
      "cavity": {"kappa_hz": 180e6, "kappa_ex_hz": 0.0, "detuning_hz": 0.0},
      "coupling": {"g0_hz": 500.0, "x_zpf_m": 1e-16},
      "mechanical_modes": [
        {"label": "m1", "omega_m_hz": 5.2e6, "gamma_m_hz": 2e4, "s_x_peak_m2_per_hz": 2e-31},
        {"label": "m2", "omega_m_hz": 6.1e6, "gamma_m_hz": 2e4, "mass_kg": 1e-11, "temperature_k": 295}
      ],
      "chain": {"losses": [{"label": "unattributed", "eta": 0.633}],
                "visibility": 0.98, "quantum_efficiency": 0.87, "dark_noise_db": -25.0,
                "lo_amplitude": 1.0, "lo_phase_rad": 1.5707963267948966},
      "grid": {"omega_min_hz": 4e6, "omega_max_hz": 8e6, "points": 4096},
      "characterize": {"theta_points": 361},
      "sql": {"a": 1.0, "b": 1.0, "n_min": 0.01, "n_max": 100.0, "points": 41},
      "budget": {"target_floor_db": -0.72},
      "metadata": {...}
    }

``squeezing.reference`` selects how the squeezing level is read:
``"detected"`` means the level seen by the homodyne detector with the
resonator decoupled (visibility and quantum efficiency already included,
dark noise excluded); ``"source"`` means the level of the sideband pair
before any loss.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from dataclasses import dataclass, field

import numpy as np

from .detection import DetectionChain, db_to_r, db_to_v, visibility_efficiency
from .optomech import CavityParams, MechanicalMode, OptomechCoupling

TWO_PI = 2.0 * math.pi
REFERENCES = ("detected", "source")


def example_config_path():
    """Path of the bundled ``examples/paper.json`` configuration."""
    return str(resources.files("squeezesim") / "examples" / "paper.json")


class ConfigError(ValueError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


def _section(d, key, path, required=False):
    if key not in d:
        if required:
            raise ConfigError(f"{path}{key}", "missing required section")
        return {}
    val = d[key]
    if not isinstance(val, dict):
        raise ConfigError(f"{path}{key}", "must be an object")
    return val


def _num(d, key, path, default=None, *, lo=None, hi=None, lo_open=False, required=False):
    full = f"{path}{key}"
    if key not in d:
        if required or default is None:
            raise ConfigError(full, "missing required value")
        return default
    val = d[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(full, f"must be a number, got {val!r}")
    val = float(val)
    if not math.isfinite(val):
        raise ConfigError(full, "must be finite")
    if lo is not None and (val <= lo if lo_open else val < lo):
        raise ConfigError(full, f"must be {'>' if lo_open else '>='} {lo}, got {val}")
    if hi is not None and val > hi:
        raise ConfigError(full, f"must be <= {hi}, got {val}")
    return val


def _int(d, key, path, default, lo):
    full = f"{path}{key}"
    val = d.get(key, default)
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(full, f"must be an integer, got {val!r}")
    if val < lo:
        raise ConfigError(full, f"must be >= {lo}, got {val}")
    return val


@dataclass(frozen=True)
class GridSpec:
    omega_min: float
    omega_max: float
    points: int

    def omegas(self):
        return np.linspace(self.omega_min, self.omega_max, self.points)


@dataclass(frozen=True)
class SqlSpec:
    a: float = 1.0
    b: float = 1.0
    n_min: float = 0.01
    n_max: float = 100.0
    points: int = 41


@dataclass(frozen=True)
class ExperimentConfig:
    r: float
    reference: str
    carrier_alpha: float
    cavity: CavityParams
    coupling: OptomechCoupling
    modes: tuple
    mode_labels: tuple
    losses: tuple
    visibility: float
    quantum_efficiency: float
    dark_noise_db: float | None
    lo_amplitude: float
    lo_phase: float
    grid: GridSpec
    theta_points: int = 361
    sql: SqlSpec = SqlSpec()
    target_floor_db: float | None = None
    metadata: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigError("<root>", "config must be a JSON object")

        sq = _section(d, "squeezing", "", required=True)
        has_r, has_db = "r" in sq, "db" in sq
        if has_r == has_db:
            raise ConfigError("squeezing", "specify exactly one of 'r' or 'db'")
        if has_r:
            r = _num(sq, "r", "squeezing.", lo=0.0)
        else:
            r = db_to_r(_num(sq, "db", "squeezing.", hi=0.0))
        reference = sq.get("reference", "source")
        if reference not in REFERENCES:
            raise ConfigError("squeezing.reference", f"must be one of {REFERENCES}, got {reference!r}")

        alpha = _num(d, "carrier_alpha", "", 0.0, lo=0.0)

        cav = _section(d, "cavity", "")
        kappa = _num(cav, "kappa_hz", "cavity.", 180e6, lo=0.0, lo_open=True)
        kappa_ex = _num(cav, "kappa_ex_hz", "cavity.", 0.0, lo=0.0)
        if kappa_ex > kappa:
            raise ConfigError("cavity.kappa_ex_hz", f"must not exceed kappa_hz ({kappa})")
        detuning = _num(cav, "detuning_hz", "cavity.", 0.0)
        if detuning != 0.0:
            raise ConfigError("cavity.detuning_hz", "only resonant probing (0) is supported")
        cavity = CavityParams(TWO_PI * kappa, TWO_PI * kappa_ex, 0.0)

        cp = _section(d, "coupling", "")
        coupling = OptomechCoupling(
            TWO_PI * _num(cp, "g0_hz", "coupling.", 0.0, lo=0.0),
            _num(cp, "x_zpf_m", "coupling.", 1.0, lo=0.0, lo_open=True),
        )

        raw_modes = d.get("mechanical_modes", [])
        if not isinstance(raw_modes, list):
            raise ConfigError("mechanical_modes", "must be a list")
        modes, labels = [], []
        for k, m in enumerate(raw_modes):
            p = f"mechanical_modes[{k}]."
            if not isinstance(m, dict):
                raise ConfigError(p[:-1], "must be an object")
            om = TWO_PI * _num(m, "omega_m_hz", p, lo=0.0, lo_open=True, required=True)
            gm = TWO_PI * _num(m, "gamma_m_hz", p, lo=0.0, lo_open=True, required=True)
            if "s_x_peak_m2_per_hz" in m:
                modes.append(MechanicalMode(om, gm, _num(m, "s_x_peak_m2_per_hz", p, lo=0.0)))
            elif "mass_kg" in m:
                mass = _num(m, "mass_kg", p, lo=0.0, lo_open=True)
                temp = _num(m, "temperature_k", p, lo=0.0, required=True)
                modes.append(MechanicalMode.thermal(om, gm, mass, temp))
            else:
                raise ConfigError(p + "s_x_peak_m2_per_hz", "give s_x_peak_m2_per_hz or mass_kg + temperature_k")
            labels.append(str(m.get("label", f"mode{k}")))

        ch = _section(d, "chain", "")
        raw_losses = ch.get("losses", [])
        if not isinstance(raw_losses, list):
            raise ConfigError("chain.losses", "must be a list")
        losses = []
        for k, item in enumerate(raw_losses):
            p = f"chain.losses[{k}]."
            if not isinstance(item, dict):
                raise ConfigError(p[:-1], "must be an object")
            losses.append((str(item.get("label", f"loss{k}")), _num(item, "eta", p, lo=0.0, hi=1.0, required=True)))
        vis = _num(ch, "visibility", "chain.", 1.0, lo=0.0, hi=1.0)
        qe = _num(ch, "quantum_efficiency", "chain.", 1.0, lo=0.0, hi=1.0)
        dark_db = _num(ch, "dark_noise_db", "chain.", math.nan) if "dark_noise_db" in ch else None
        lo_amp = _num(ch, "lo_amplitude", "chain.", 1.0, lo=0.0, lo_open=True)
        lo_phase = _num(ch, "lo_phase_rad", "chain.", math.pi / 2)

        gr = _section(d, "grid", "")
        wmin = _num(gr, "omega_min_hz", "grid.", 4e6, lo=0.0, lo_open=True)
        wmax = _num(gr, "omega_max_hz", "grid.", 8e6, lo=0.0, lo_open=True)
        if wmax <= wmin:
            raise ConfigError("grid.omega_max_hz", "must exceed omega_min_hz")
        npts = _int(gr, "points", "grid.", 4096, 2)

        chz = _section(d, "characterize", "")
        theta_points = _int(chz, "theta_points", "characterize.", 361, 2)

        sq_sec = _section(d, "sql", "")
        sql = SqlSpec(
            _num(sq_sec, "a", "sql.", 1.0, lo=0.0, lo_open=True),
            _num(sq_sec, "b", "sql.", 1.0, lo=0.0, lo_open=True),
            _num(sq_sec, "n_min", "sql.", 0.01, lo=0.0, lo_open=True),
            _num(sq_sec, "n_max", "sql.", 100.0, lo=0.0, lo_open=True),
            _int(sq_sec, "points", "sql.", 41, 2),
        )
        if sql.n_max <= sql.n_min:
            raise ConfigError("sql.n_max", "must exceed n_min")

        bud = _section(d, "budget", "")
        target = _num(bud, "target_floor_db", "budget.", math.nan) if "target_floor_db" in bud else None

        meta = d.get("metadata", {})
        if not isinstance(meta, dict):
            raise ConfigError("metadata", "must be an object")

        cfg = cls(
            r=r, reference=reference, carrier_alpha=alpha, cavity=cavity, coupling=coupling,
            modes=tuple(modes), mode_labels=tuple(labels), losses=tuple(losses),
            visibility=vis, quantum_efficiency=qe, dark_noise_db=dark_db,
            lo_amplitude=lo_amp, lo_phase=lo_phase, grid=GridSpec(TWO_PI * wmin, TWO_PI * wmax, npts),
            theta_points=theta_points, sql=sql, target_floor_db=target, metadata=meta,
        )
        cfg.source_variance()  # rejects a detected level the detector could not have seen
        return cfg

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError("<file>", f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    @property
    def detector_efficiency(self):
        return visibility_efficiency(self.visibility) * self.quantum_efficiency

    def source_variance(self):
        """Squeezed-quadrature variance of the sideband pair at the source."""
        v = math.exp(-2.0 * self.r)
        if self.reference == "source":
            return v
        eta = self.detector_efficiency
        deficit = (1.0 - v) / eta if eta > 0 else math.inf
        if deficit >= 1.0:
            raise ConfigError(
                "squeezing", "detected level exceeds what the visibility and quantum efficiency allow"
            )
        return 1.0 - deficit

    def source_r(self):
        return -0.5 * math.log(self.source_variance())

    def chain(self, dark=True, in_situ=True):
        """Detection chain; ``in_situ=False`` omits the configured losses (resonator decoupled)."""
        losses = self.losses if in_situ else ()
        dark_db = self.dark_noise_db if dark else None
        return DetectionChain.build(
            losses, self.visibility, self.quantum_efficiency, dark_db, self.lo_amplitude, self.lo_phase
        )

    def dark_snu(self, dark=True):
        return db_to_v(self.dark_noise_db) if (dark and self.dark_noise_db is not None) else 0.0
