"""Config files, figure presets, CSV output, and the oracle cross-check."""

import math

import numpy as np
import pytest

from spinbath.configspace import Backend
from spinbath.errors import CapacityError, UsageError
from spinbath.experiments import (BathSpec, GaussianStats, TimeGrid, config_from_keys,
                                  list_presets, oracle_check, parse_config_file,
                                  preset, run)
from spinbath.model import Boundary


def single_keys(**overrides):
    keys = {
        "mode": "single",
        "system.epsilon": "2",
        "system.delta": "1",
        "bath.n_spins": "3",
        "bath.eps": "1",
        "bath.g": "0.5",
        "bath.chi": "0.1",
        "thermal.beta": "1",
        "grid.t_end": "4",
        "grid.n_points": "5",
    }
    keys.update(overrides)
    return keys


class TestTimeGrid:
    def test_times(self):
        grid = TimeGrid(0.0, 2.0, 5)
        assert np.allclose(grid.times(), [0.0, 0.5, 1.0, 1.5, 2.0])

    def test_rejects_reversed(self):
        with pytest.raises(UsageError):
            TimeGrid(3.0, 1.0, 5)

    def test_rejects_single_point(self):
        with pytest.raises(UsageError):
            TimeGrid(0.0, 1.0, 1)


class TestBathSpec:
    def test_uniform_materializes(self):
        spec = BathSpec(n_spins=3, kind="uniform", eps=1.0, g=0.5, chi=0.1)
        bath = spec.materialize()
        assert bath.g_i == (0.5,) * 3

    def test_random_reproducible(self):
        spec = BathSpec(n_spins=4, kind="random", seed=7,
                        g_stats=GaussianStats(5.0, 1.0),
                        eps_stats=GaussianStats(1.0, 0.2),
                        chi_stats=GaussianStats(1.0, 0.2))
        a, b = spec.materialize(), spec.materialize()
        assert a.g_i == b.g_i and a.eps_i == b.eps_i and a.chi_i == b.chi_i

    def test_random_substreams_differ(self):
        spec = BathSpec(n_spins=4, kind="random", seed=7,
                        g_stats=GaussianStats(0.0, 1.0),
                        eps_stats=GaussianStats(0.0, 1.0),
                        chi_stats=GaussianStats(0.0, 1.0))
        bath = spec.materialize()
        assert bath.g_i != bath.eps_i

    def test_resized_random_keeps_prefix_seed(self):
        spec = BathSpec(n_spins=6, kind="random", seed=3,
                        g_stats=GaussianStats(5.0, 1.0),
                        eps_stats=GaussianStats(1.0, 0.2),
                        chi_stats=GaussianStats(1.0, 0.2))
        small = spec.resized(4).materialize()
        big = spec.materialize()
        assert small.g_i == big.g_i[:4]

    def test_explicit_cannot_resize(self):
        spec = BathSpec(n_spins=2, kind="explicit", eps_list=(1.0, 1.0),
                        g_list=(1.0, 2.0), chi_list=(0.0,))
        with pytest.raises(UsageError):
            spec.resized(3)

    def test_missing_field(self):
        with pytest.raises(UsageError):
            BathSpec(n_spins=2, kind="uniform", eps=1.0, g=0.5)


class TestConfigParsing:
    def test_minimal_single(self):
        config = config_from_keys(single_keys())
        assert config.mode == "single"
        assert config.system.epsilon == 2.0
        assert config.bath.kind == "uniform"
        assert config.grid.n_points == 5
        assert config.backend is Backend.ENUMERATE
        assert config.series == ("uncorrelated", "correlated")

    def test_unknown_key_is_named(self):
        with pytest.raises(UsageError, match="bogus.key"):
            config_from_keys(single_keys(**{"bogus.key": "1"}))

    def test_missing_required(self):
        keys = single_keys()
        del keys["thermal.beta"]
        with pytest.raises(UsageError, match="thermal.beta"):
            config_from_keys(keys)

    def test_mixed_bath_styles_rejected(self):
        with pytest.raises(UsageError, match="pick one style"):
            config_from_keys(single_keys(**{"bath.g_list": "1,2,3"}))

    def test_two_qubit_defaults(self):
        keys = {
            "mode": "two_qubit",
            "system.eps1": "1", "system.eps2": "2",
            "system.delta1": "4", "system.delta2": "1",
            "bath.n_spins": "2", "bath.eps": "1", "bath.g": "1", "bath.chi": "0",
            "thermal.beta": "1",
        }
        config = config_from_keys(keys)
        assert config.state_kind == "bell"
        assert config.system.lam == 0.0
        assert config.grid.t_end == 10.0

    def test_amplitude_state_is_normalized(self):
        keys = {
            "mode": "two_qubit",
            "system.eps1": "1", "system.eps2": "2",
            "system.delta1": "4", "system.delta2": "1",
            "state.amplitudes": "1,0,0,0,0,0,1,0",
            "bath.n_spins": "2", "bath.eps": "1", "bath.g": "1", "bath.chi": "0",
            "thermal.beta": "1",
        }
        psi = config_from_keys(keys).state_vector()
        assert np.allclose(psi, [2 ** -0.5, 0.0, 0.0, 2 ** -0.5])

    def test_amplitudes_need_eight_numbers(self):
        keys = single_keys()
        keys["mode"] = "two_qubit"
        for k in ("system.epsilon", "system.delta"):
            del keys[k]
        keys.update({"system.eps1": "1", "system.eps2": "2",
                     "system.delta1": "4", "system.delta2": "1",
                     "state.amplitudes": "1,0,0"})
        with pytest.raises(UsageError, match="8"):
            config_from_keys(keys)

    def test_series_filter(self):
        config = config_from_keys(single_keys(series="correlated"))
        assert config.series == ("correlated",)

    def test_parse_file_roundtrip(self, tmp_path):
        path = tmp_path / "run.ini"
        path.write_text(
            "# a comment\n\nmode = single\nsystem.epsilon = 2\nsystem.delta = 1\n"
            "bath.n_spins = 3\nbath.eps = 1\nbath.g = 0.5\nbath.chi = 0.1\n"
            "thermal.beta = 1\ngrid.t_end = 4\ngrid.n_points = 5\n")
        config = parse_config_file(path)
        assert config == config_from_keys(single_keys())

    def test_parse_file_duplicate_key(self, tmp_path):
        path = tmp_path / "dup.ini"
        path.write_text("mode = single\nmode = single\n")
        with pytest.raises(UsageError, match="duplicate"):
            parse_config_file(path)

    def test_parse_file_garbage_line(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("mode single\n")
        with pytest.raises(UsageError, match="key = value"):
            parse_config_file(path)


class TestPresets:
    def test_catalog_is_complete(self):
        assert list_presets() == [f"fig{i}" for i in range(1, 20)]

    def test_single_qubit_regimes(self):
        config = preset("fig4")
        assert config.mode == "single"
        assert config.bath.n_spins == 50
        assert config.backend is Backend.COLLAPSE
        assert config.grid.t_end == 20.0
        assert config.beta == 1.0

    def test_small_bath_presets_enumerate(self):
        for name in ("fig7", "fig8", "fig9", "fig10", "fig11", "fig12", "fig17"):
            config = preset(name)
            assert config.bath.n_spins == 10
            assert config.backend is Backend.ENUMERATE

    def test_two_qubit_regimes(self):
        config = preset("fig18")
        assert config.mode == "two_qubit"
        assert config.system.lam == 3.0
        assert config.state_kind == "bell"
        assert config.grid.t_end == 10.0

    def test_product_state_preset(self):
        assert preset("fig19").state_kind == "product"
        assert preset("fig19").system.lam == 5.0

    def test_random_presets_record_seeds(self):
        assert preset("fig11").bath.seed == 11
        assert preset("fig12").bath.seed == 12

    def test_seed_override(self):
        assert preset("fig11", seed=99).bath.seed == 99

    def test_seed_override_rejected_for_fixed(self):
        with pytest.raises(UsageError, match="--seed"):
            preset("fig1", seed=5)

    def test_unknown_preset(self):
        with pytest.raises(UsageError, match="unknown preset"):
            preset("fig99")


@pytest.fixture(scope="module")
def tiny_table():
    return run(config_from_keys(single_keys()))


class TestRunAndCsv:
    def test_columns(self, tiny_table):
        assert tiny_table.columns == ("t", "px_uncorrelated", "px_correlated")

    def test_row_shape(self, tiny_table):
        assert tiny_table.rows.shape == (5, 3)
        assert tiny_table.rows[0, 0] == 0.0
        assert tiny_table.rows[0, 1] == 1.0  # theta defaults to +x

    def test_render_format(self, tiny_table):
        text = tiny_table.render()
        lines = text.split("\n")
        assert lines[0].startswith("# tool = spinbath ")
        header_at = next(i for i, l in enumerate(lines) if not l.startswith("#"))
        assert lines[header_at] == "t,px_uncorrelated,px_correlated"
        assert text.endswith("\n")
        assert "\r" not in text

    def test_floats_roundtrip_exactly(self, tiny_table):
        lines = [l for l in tiny_table.render().split("\n") if l and not l.startswith("#")]
        for row_text, row in zip(lines[1:], tiny_table.rows):
            parsed = [float(x) for x in row_text.split(",")]
            assert parsed == list(row)

    def test_write_csv(self, tiny_table, tmp_path):
        path = tmp_path / "out.csv"
        tiny_table.write_csv(path)
        assert path.read_text() == tiny_table.render()

    def test_metadata_has_no_volatile_fields(self, tiny_table):
        keys = [k for k, _ in tiny_table.metadata]
        assert not any("time" in k or "date" in k or "host" in k for k in keys)

    def test_two_qubit_columns(self):
        keys = {
            "mode": "two_qubit",
            "system.eps1": "1", "system.eps2": "2",
            "system.delta1": "4", "system.delta2": "1",
            "bath.n_spins": "2", "bath.eps": "1", "bath.g": "1", "bath.chi": "0",
            "thermal.beta": "1", "grid.n_points": "3",
        }
        table = run(config_from_keys(keys))
        assert table.columns == ("t", "C_uncorrelated", "C_correlated")
        assert table.rows[0, 1] == pytest.approx(1.0, abs=1e-12)

    def test_series_filter_drops_column(self):
        table = run(config_from_keys(single_keys(series="uncorrelated")))
        assert table.columns == ("t", "px_uncorrelated")

    def test_collapse_requires_uniform(self):
        keys = single_keys(backend="collapse")
        keys.pop("bath.eps"), keys.pop("bath.g"), keys.pop("bath.chi")
        keys.update({"bath.eps_list": "1,1,1", "bath.g_list": "1,2,1",
                     "bath.chi_list": "0,0"})
        with pytest.raises(UsageError, match="g_i"):
            run(config_from_keys(keys))


class TestOracleCheck:
    def test_passes_on_honest_run(self):
        config = config_from_keys(single_keys())
        report = oracle_check(config, n_override=3)
        assert report.passed
        assert {name for name, _ in report.entries} == {
            "bloch_uncorrelated", "bloch_correlated"}
        assert all(dev < 1e-9 for _, dev in report.entries)

    def test_two_qubit_entries(self):
        keys = {
            "mode": "two_qubit",
            "system.eps1": "1", "system.eps2": "2",
            "system.delta1": "4", "system.delta2": "1", "system.lambda": "3",
            "bath.n_spins": "5", "bath.eps": "1", "bath.g": "1", "bath.chi": "0.1",
            "thermal.beta": "1", "grid.t_end": "4", "grid.n_points": "6",
        }
        report = oracle_check(config_from_keys(keys), n_override=3)
        assert report.passed
        assert {name for name, _ in report.entries} == {
            "rho_uncorrelated", "rho_correlated",
            "concurrence_uncorrelated", "concurrence_correlated"}

    def test_corrupted_weights_trip_the_check(self):
        config = config_from_keys(single_keys())
        report = oracle_check(config, n_override=3, analytic_beta_skew=1e-5)
        assert not report.passed

    def test_dimension_cap(self):
        config = config_from_keys(single_keys())
        with pytest.raises(CapacityError):
            oracle_check(config, n_override=20)

    def test_report_lines_mention_verdict(self):
        config = config_from_keys(single_keys())
        report = oracle_check(config, n_override=2)
        text = "\n".join(report.lines())
        assert "PASS" in text
