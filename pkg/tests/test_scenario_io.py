import numpy as np
import pytest

from debtregime.errors import ConfigError
from debtregime.extensions import estimate_kappa
from debtregime.scenario import DEFAULTS, load_scenario, load_series_csv
from debtregime.tables import (
    TABLE_IDS,
    TableArtifact,
    build_table,
    emit_csv,
    scenario_report,
)


class TestLoadScenario:
    def test_empty_file_gives_baseline_defaults(self, tmp_path):
        path = tmp_path / "empty.cfg"
        path.write_text("")
        sc = load_scenario(str(path))
        econ = sc.econ_state()
        assert econ.b_prev == 2.40
        assert econ.pi == 0.027
        p = sc.two_layer()
        assert (p.theta, p.psi, p.z, p.c_bar, p.phi_req) == (0.65, 0.97, 0.02, 0.06, 0.85)
        rg = sc.regime_params()
        assert (rg.phi, rg.phi_bar, rg.kappa) == (0.88, 0.85, 0.01)

    def test_none_path_is_baseline(self):
        assert load_scenario(None).values == dict(DEFAULTS)

    def test_override_and_comments(self, tmp_path):
        path = tmp_path / "mon.cfg"
        path.write_text(
            "# monitoring-concept run\n"
            "econ.b_prev = 1.574   # narrower instrument-level ratio\n"
            "closure.z = 0.03\n"
        )
        sc = load_scenario(str(path))
        assert sc.econ_state().b_prev == 1.574
        assert sc.two_layer().z == 0.03

    def test_core_alias(self, tmp_path):
        path = tmp_path / "alias.cfg"
        path.write_text("core.b_prev = 1.574\n")
        assert load_scenario(str(path)).econ_state().b_prev == 1.574

    def test_unknown_key_lists_the_key(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("econ.b_prevv = 2.0\n")
        with pytest.raises(ConfigError, match="econ.b_prevv"):
            load_scenario(str(path))

    def test_unit_violation_names_field_and_bound(self, tmp_path):
        path = tmp_path / "units.cfg"
        path.write_text("econ.pi = 2.7\n")  # percent instead of fraction
        with pytest.raises(ConfigError, match="econ.pi"):
            load_scenario(str(path))
        path.write_text("closure.theta = 1.4\n")
        with pytest.raises(ConfigError, match=r"closure.theta.*\[0, 1\]"):
            load_scenario(str(path))

    def test_malformed_numeric_reports_line(self, tmp_path):
        path = tmp_path / "num.cfg"
        path.write_text("econ.b_prev = 2.40\neconpi = oops\n")
        with pytest.raises(ConfigError, match="line 2"):
            load_scenario(str(path))
        path.write_text("econ.pi = zero\n")
        with pytest.raises(ConfigError, match="line 1"):
            load_scenario(str(path))

    def test_sweep_rows(self, tmp_path):
        path = tmp_path / "sweep.cfg"
        path.write_text(
            "sweep.mygrid.low = closure.theta=0.60,closure.z=0.02\n"
            "sweep.mygrid.high = closure.theta=0.45,closure.z=0.035\n"
        )
        sc = load_scenario(str(path))
        rows = sc.sweep_rows("mygrid")
        assert [name for name, _ in rows] == ["low", "high"]
        assert rows[0][1]["closure.theta"] == 0.60
        assert sc.sweep_rows("stress_v2")[0][0] == "baseline_2026"
        with pytest.raises(ConfigError):
            sc.sweep_rows("nope")

    def test_with_overrides_validates(self):
        sc = load_scenario(None)
        sc2 = sc.with_overrides({"closure.theta": 0.55})
        assert sc2.two_layer().theta == 0.55
        assert sc.two_layer().theta == 0.65  # original untouched
        with pytest.raises(ConfigError):
            sc.with_overrides({"closure.thetaa": 0.5})

    def test_fiscal_table_pairs(self, tmp_path):
        path = tmp_path / "fr.cfg"
        path.write_text(
            "fiscal.mode = general\n"
            "fiscal.table = 2.0:0.018, 2.4:0.020, 2.8:0.026\n"
        )
        fr = load_scenario(str(path)).fiscal_response()
        assert fr.table == ((2.0, 0.018), (2.4, 0.020), (2.8, 0.026))

    def test_r_rep_defaults_to_nominal_rate(self, tmp_path):
        sc = load_scenario(None)
        assert sc.r_rep() == sc.econ_state().r_n
        path = tmp_path / "rr.cfg"
        path.write_text("closure.r_rep = 0.015\n")
        assert load_scenario(str(path)).r_rep() == 0.015

    def test_config_hash_stable_and_sensitive(self):
        sc = load_scenario(None)
        assert sc.config_hash() == load_scenario(None).config_hash()
        assert sc.config_hash() != sc.with_overrides({"econ.d": 0.021}).config_hash()


class TestEmitCsv:
    def test_format_contract(self, tmp_path):
        art = TableArtifact(
            "demo", ("name", "value"),
            [("pi", 0.0271828182845), ("none_cell", None), ("flag", True)],
            {"seed": 42},
        )
        path = tmp_path / "demo.csv"
        emit_csv(art, str(path))
        text = path.read_text()
        lines = text.split("\n")
        assert lines[0] == "# table_id: demo"
        assert lines[1] == "# seed: 42"
        assert lines[2] == "name,value"
        assert lines[3] == "pi,0.0271828"  # 6 significant digits
        assert lines[4] == "none_cell,"
        assert lines[5] == "flag,true"
        assert "\r" not in text

    def test_empty_rows_header_only(self, tmp_path):
        art = TableArtifact("empty", ("a", "b"), [], {"seed": 1})
        path = tmp_path / "empty.csv"
        emit_csv(art, str(path))
        lines = path.read_text().strip().split("\n")
        assert lines[-1] == "a,b"

    def test_byte_identical_across_emissions(self, tmp_path):
        sc = load_scenario(None)
        art = build_table("stress_v2", sc, seed=42)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_csv(art, str(p1))
        emit_csv(build_table("stress_v2", sc, seed=42), str(p2))
        assert p1.read_bytes() == p2.read_bytes()

    def test_series_round_trip(self, tmp_path):
        # an emitted series is loadable by the estimator and the infer input
        t = np.arange(12.0)
        phi = 0.93 - 0.002 * t
        art = TableArtifact(
            "series", ("t", "value"), list(zip(t, phi)), {"seed": 0}
        )
        path = tmp_path / "series.csv"
        emit_csv(art, str(path))
        ts, vs = load_series_csv(str(path))
        assert ts == pytest.approx(list(t))
        out = estimate_kappa(list(zip(ts, vs)))
        assert out["slope_full"] == pytest.approx(-0.002, abs=1e-9)

    def test_series_errors(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,value\n0,abc\n")
        with pytest.raises(ConfigError, match="line 2"):
            load_series_csv(str(path))
        path.write_text("t,value\n")
        with pytest.raises(ConfigError, match="no data rows"):
            load_series_csv(str(path))


class TestGoldenTables:
    def test_all_table_ids_build(self):
        sc = load_scenario(None)
        for tid in TABLE_IDS:
            art = build_table(tid, sc, seed=42, n_reps=10)
            assert art.table_id == tid
            assert art.metadata["seed"] == 42
            assert "config_hash" in art.metadata
            assert len(art.rows) > 0

    def test_stress_v2_schema(self):
        sc = load_scenario(None)
        art = build_table("stress_v2", sc, seed=42)
        assert art.columns == (
            "scenario", "theta", "z", "phi_d0", "rho_star",
            "required_dg", "label", "paper_rho_ref",
        )
        assert len(art.rows) == 6
        byname = {r[0]: r for r in art.rows}
        ext = byname["external_stress"]
        assert ext[3] == pytest.approx(0.8196, abs=5e-5)   # phi_d0
        assert ext[4] == pytest.approx(0.505714, abs=1e-4)  # engine premium, %
        assert ext[7] == pytest.approx(0.39, abs=1e-12)     # published reference, %
        assert byname["baseline_2026"][6] == "Conditional"
        assert byname["severe"][6] == "Infeasible"

    def test_calibration_headline_numbers(self):
        sc = load_scenario(None)
        art = build_table("calibration", sc, seed=42)
        vals = {r[0]: r[1] for r in art.rows}
        assert vals["sprint_cumulative_improvement"] == pytest.approx(2.4, abs=1e-9)
        assert vals["annual_repression_dividend"] == pytest.approx(1.2, abs=1e-9)
        assert vals["x_max_safe"] == pytest.approx(-0.08, abs=1e-9)
        assert vals["clock_linear"] == pytest.approx(3.0, abs=1e-9)

    def test_psi_table_ordering(self):
        sc = load_scenario(None)
        art = build_table("psi_countries", sc, seed=42)
        for scheme in ("equal", "monetary_heavy", "absorption_heavy", "fx_deemphasized"):
            vals = {r[1]: r[8] for r in art.rows if r[0] == scheme}
            assert vals["japan"] > vals["italy"] > vals["greece"]

    def test_scenario_report_sections(self):
        sc = load_scenario(None)
        art = scenario_report(sc, seed=42)
        sections = {r[0] for r in art.rows}
        assert sections == {
            "recursion", "stability", "scope", "clock", "bounds",
            "closure", "transition",
        }
        vals = {(r[0], r[1]): r[2] for r in art.rows}
        assert vals[("recursion", "b_next")] == pytest.approx(2.4008, abs=1e-9)
        assert vals[("closure", "case")] == "a_interior"
