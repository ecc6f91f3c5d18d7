import math

import numpy as np
import pytest
from scipy import optimize

from squeezesim.config import ConfigError, ExperimentConfig
from squeezesim.detection import v_to_db
from squeezesim.scenarios import (
    budget_stages,
    required_source_r,
    residual_efficiency,
    run_budget,
    run_characterize,
    run_spectrum,
    run_sql,
)


class TestConfig:
    def test_bundled_values(self, example_cfg):
        assert example_cfg.r == 0.138
        assert example_cfg.reference == "detected"
        assert example_cfg.cavity.kappa == pytest.approx(2 * math.pi * 180e6)
        assert example_cfg.visibility == 0.98
        assert example_cfg.quantum_efficiency == 0.87
        assert example_cfg.dark_noise_db == -25.0
        assert example_cfg.losses == (("unattributed", 0.633),)
        assert len(example_cfg.modes) == 3

    def test_db_form(self, make_config):
        d = make_config()
        d["squeezing"] = {"db": -1.2, "reference": "source"}
        cfg = ExperimentConfig.from_dict(d)
        assert cfg.r == pytest.approx(0.1381551, rel=1e-6)

    def test_detected_reference_source_variance(self, example_cfg):
        # detected level = eta_det * v_src + 1 - eta_det
        eta = 0.98**2 * 0.87
        v_det = eta * example_cfg.source_variance() + 1 - eta
        assert v_det == pytest.approx(math.exp(-0.276), rel=1e-12)

    def test_thermal_mode(self, make_config):
        d = make_config(mechanical_modes=[
            {"omega_m_hz": 5e6, "gamma_m_hz": 1e4, "mass_kg": 1e-11, "temperature_k": 295.0}
        ])
        cfg = ExperimentConfig.from_dict(d)
        assert cfg.modes[0].s_x_peak > 0
        assert cfg.mode_labels == ("mode0",)

    @pytest.mark.parametrize(
        "override, field",
        [
            (dict(squeezing={"r": 0.1, "db": -1.0}), "squeezing"),
            (dict(squeezing={"r": -0.1}), "squeezing.r"),
            (dict(squeezing={"db": 1.0}), "squeezing.db"),
            (dict(squeezing={"r": 0.1, "reference": "elsewhere"}), "squeezing.reference"),
            (dict(squeezing={"r": 3.0, "reference": "detected"}), "squeezing"),
            (dict(carrier_alpha=-1.0), "carrier_alpha"),
            (dict(carrier_alpha="big"), "carrier_alpha"),
            (dict(cavity={"kappa_hz": 0.0}), "cavity.kappa_hz"),
            (dict(cavity={"kappa_ex_hz": 1e9}), "cavity.kappa_ex_hz"),
            (dict(cavity={"detuning_hz": 1e6}), "cavity.detuning_hz"),
            (dict(coupling={"x_zpf_m": 0.0}), "coupling.x_zpf_m"),
            (dict(coupling={"g0_hz": -1.0}), "coupling.g0_hz"),
            (dict(mechanical_modes=[{"omega_m_hz": -1.0, "gamma_m_hz": 1.0, "s_x_peak_m2_per_hz": 0.0}]),
             "mechanical_modes[0].omega_m_hz"),
            (dict(mechanical_modes=[{"omega_m_hz": 1.0, "gamma_m_hz": 0.0, "s_x_peak_m2_per_hz": 0.0}]),
             "mechanical_modes[0].gamma_m_hz"),
            (dict(mechanical_modes=[{"omega_m_hz": 1.0, "gamma_m_hz": 1.0, "s_x_peak_m2_per_hz": -1.0}]),
             "mechanical_modes[0].s_x_peak_m2_per_hz"),
            (dict(mechanical_modes=[{"omega_m_hz": 1.0, "gamma_m_hz": 1.0}]),
             "mechanical_modes[0].s_x_peak_m2_per_hz"),
            (dict(mechanical_modes={"a": 1}), "mechanical_modes"),
            (dict(chain={"losses": [{"label": "x", "eta": 1.5}]}), "chain.losses[0].eta"),
            (dict(chain={"losses": [{"label": "x"}]}), "chain.losses[0].eta"),
            (dict(chain={"visibility": 1.2}), "chain.visibility"),
            (dict(chain={"quantum_efficiency": -0.2}), "chain.quantum_efficiency"),
            (dict(chain={"lo_amplitude": 0.0}), "chain.lo_amplitude"),
            (dict(grid={"points": 1}), "grid.points"),
            (dict(grid={"points": 10.5}), "grid.points"),
            (dict(grid={"omega_min_hz": 9e6}), "grid.omega_max_hz"),
            (dict(characterize={"theta_points": 1}), "characterize.theta_points"),
            (dict(sql={"a": 0.0}), "sql.a"),
            (dict(sql={"n_max": 0.001}), "sql.n_max"),
            (dict(metadata=[1]), "metadata"),
        ],
    )
    def test_validation_names_field(self, make_config, override, field):
        d = make_config(**override)
        if "squeezing" in override:
            d["squeezing"] = override["squeezing"]
        with pytest.raises(ConfigError) as exc:
            ExperimentConfig.from_dict(d)
        assert exc.value.path == field
        assert str(exc.value).startswith(field)

    def test_missing_squeezing(self, make_config):
        d = make_config()
        del d["squeezing"]
        with pytest.raises(ConfigError, match="squeezing"):
            ExperimentConfig.from_dict(d)


class TestCharacterize:
    def test_bundled_minimum(self, example_cfg):
        res = run_characterize(example_cfg)
        assert res.subtracted_db.min() == pytest.approx(-1.20, abs=0.03)
        assert res.min_db == pytest.approx(-1.20, abs=0.03)

    def test_no_dark_minimum_exact(self, example_cfg):
        res = run_characterize(example_cfg, dark=False)
        assert res.min_db == pytest.approx(-1.1986527700529752, abs=1e-9)

    def test_vacuum_flat(self, make_config):
        cfg = ExperimentConfig.from_dict(make_config(squeezing={"r": 0.0}))
        res = run_characterize(cfg, dark=False)
        np.testing.assert_allclose(res.variance_db, 0.0, atol=1e-12)

    def test_row_count(self, make_config):
        cfg = ExperimentConfig.from_dict(make_config(characterize={"theta_points": 17}))
        assert len(run_characterize(cfg).thetas) == 17


class TestSpectrum:
    def test_bundled_enhancement(self, example_cfg):
        run = run_spectrum(example_cfg)
        assert run.enhancement_db == pytest.approx(-0.72, abs=0.01)
        assert run.subtracted_enhancement_db == pytest.approx(-0.72, abs=0.01)

    def test_empty_modes_flat(self, make_config):
        cfg = ExperimentConfig.from_dict(make_config(mechanical_modes=[], grid={"points": 64}))
        run = run_spectrum(cfg)
        for res in (run.coherent, run.squeezed):
            assert np.ptp(res.total_snu) == 0.0
            np.testing.assert_array_equal(res.signal_snu, 0.0)

    def test_peaks_at_configured_frequencies(self, example_cfg):
        run = run_spectrum(example_cfg)
        step = example_cfg.grid.omegas()[1] - example_cfg.grid.omegas()[0]
        peaks = run.peak_frequencies()
        assert len(peaks) == len(example_cfg.modes)
        for mode in example_cfg.modes:
            assert np.min(np.abs(peaks - mode.omega_m)) <= step


class TestSql:
    def test_symmetric(self, make_config):
        cfg = ExperimentConfig.from_dict(make_config(sql={"a": 4.0, "b": 1.0}))
        run = run_sql(cfg)
        r0, n0, s0 = run.optima[0]
        assert r0 == 0.0
        assert n0 == pytest.approx(2.0)

    def test_squeezed_shift_and_equal_minimum(self, example_cfg):
        run = run_sql(example_cfg)
        (_, n0, s0), (r, n1, s1) = run.optima
        # oracle: numeric minimiser on the squeezed total
        a, b = example_cfg.sql.a, example_cfg.sql.b
        f = lambda u: a * math.exp(-2 * r) / math.exp(u) + b * math.exp(2 * r) * math.exp(u)  # noqa: E731
        num = optimize.minimize_scalar(f, bracket=(-2.0, 2.0), method="brent", tol=1e-12)
        assert n1 == pytest.approx(math.exp(num.x), rel=1e-6)
        assert n1 / n0 == pytest.approx(math.exp(-2 * r), rel=1e-12)
        assert s1 == pytest.approx(s0, rel=1e-6)
        assert len(run.rows) == 2 * example_cfg.sql.points


class TestBudget:
    stages = [("taper", 0.70), ("visibility", 0.9604), ("quantum_efficiency", 0.87)]

    def test_required_r_matches_root_find(self):
        eta = 0.70 * 0.9604 * 0.87
        r = required_source_r(eta, -0.72)
        f = lambda x: v_to_db(eta * math.exp(-2 * x) + 1 - eta) + 0.72  # noqa: E731
        assert r == pytest.approx(optimize.brentq(f, 0.0, 5.0, xtol=1e-14), rel=1e-10)
        assert r == pytest.approx(0.15136516033321035, rel=1e-10)
        out = budget_stages(math.exp(-2 * r), self.stages)[-1]
        assert out.level_db == pytest.approx(-0.72, abs=1e-10)

    def test_unity_stages_pass_through(self):
        stages = budget_stages(math.exp(-0.276), [("a", 1.0), ("b", 1.0)])
        assert stages[-1].level_db == pytest.approx(-1.1986527700529752, rel=1e-12)

    def test_removing_stage_never_hurts(self):
        v0 = math.exp(-0.5)
        full = budget_stages(v0, self.stages)[-1].variance_snu
        for k in range(len(self.stages)):
            fewer = self.stages[:k] + self.stages[k + 1:]
            assert budget_stages(v0, fewer)[-1].variance_snu <= full

    def test_residual_efficiency(self):
        v_out = math.exp(-0.276)
        eta = residual_efficiency(v_out, -0.72)
        assert eta == pytest.approx((1 - 10**-0.072) / (1 - v_out), rel=1e-12)
        assert residual_efficiency(1.0, -0.72) is None

    def test_bundled_budget(self, example_cfg):
        run = run_budget(example_cfg, dark=False)
        labels = [s.label for s in run.stages]
        assert labels == ["source", "unattributed", "visibility", "quantum_efficiency"]
        assert run.output_db == pytest.approx(-0.72, abs=0.01)
        assert all(e > 0 for e in run.erosion_db())
        assert run.residual_eta == pytest.approx(1.0, abs=0.01)

    def test_source_reference_budget(self, make_config):
        d = make_config(
            squeezing={"r": 0.5, "reference": "source"},
            chain={"losses": [{"label": "taper", "eta": 0.7}], "dark_noise_db": -25.0},
            budget={"target_floor_db": -0.72},
        )
        run = run_budget(ExperimentConfig.from_dict(d))
        assert run.stages[0].variance_snu == pytest.approx(math.exp(-1.0))
        assert run.stages[-1].label == "dark_noise"
        assert run.required_source_r is not None
