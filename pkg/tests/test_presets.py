import csv
import json

import pytest

from core.exceptions import InvalidParameterError, UnknownPresetError
from core.models import Manifest, Proportional
from data.preset_manager import FigurePresetManager
from output.figures import run_figure_preset
from output.logger import MANIFEST_FILE, REPORT_FILE
from output.writer import emit_plot_script, format_number


@pytest.fixture(scope="module")
def manager() -> FigurePresetManager:
    return FigurePresetManager()


def read_csv(path) -> list[list[str]]:
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.reader(f))


class TestPresetManager:
    def test_all_presets_load(self, manager):
        assert len(manager) == 7
        assert manager.names() == [f"fig{i}" for i in range(1, 8)]
        assert manager.label_map()["fig1"] == "qoe0"

    @pytest.mark.parametrize("name,expected", [("fig3", "fig3"), ("FIG3", "fig3"), ("qoe6", "fig7"), (" qoe1 ", "fig2")])
    def test_lookup(self, manager, name, expected):
        assert manager.get(name).name == expected

    def test_unknown(self, manager):
        with pytest.raises(UnknownPresetError):
            manager.get("fig8")

    def test_proportional_preset(self, manager):
        preset = manager.get("fig7")
        assert isinstance(preset.protocol, Proportional)
        assert preset.work_ratio
        assert preset.steps == 401

    def test_missing_file(self, tmp_path):
        assert len(FigurePresetManager(str(tmp_path / "missing.json"))) == 0

    def test_invalid_preset_is_skipped(self, tmp_path):
        path = tmp_path / "figures.json"
        path.write_text(json.dumps({"presets": [
            {"name": "bad", "source_label": "x", "title": "", "kind": "levels", "axis": "r", "axis_range": [0, 1]},
            {"name": "ok", "source_label": "y", "title": "", "kind": "levels", "axis": "h", "axis_range": [0, 1],
             "level_panels": [{"panel": "a", "params": {"J": 1.0, "gamma": 0.0, "h": 0.0}}]},
        ]}), encoding="utf-8")
        assert FigurePresetManager(str(path)).names() == ["ok"]


class TestLevelPreset:
    def test_files_and_manifest(self, manager, tmp_path):
        preset = manager.get("fig2").replace(steps=5)
        manifest = run_figure_preset(preset, tmp_path)

        assert [entry.path for entry in manifest.files] == ["fig2_a.csv", "fig2_b.csv"]
        rows = read_csv(tmp_path / "fig2_b.csv")
        assert rows[0] == ["h", "E1", "E2", "E3", "E4"]
        assert len(rows) == 6
        assert rows[3][0] == "1"
        assert float(rows[3][4]) == pytest.approx(0.344031, abs=1e-6)

        saved = json.loads((tmp_path / MANIFEST_FILE).read_text(encoding="utf-8"))
        assert saved["preset"] == "fig2"
        assert saved["source_label"] == "qoe1"
        assert (tmp_path / REPORT_FILE).read_text(encoding="utf-8").startswith("# fig2 (qoe1)")

    def test_plot_script(self, manager, tmp_path):
        manifest = run_figure_preset(manager.get("fig6").replace(steps=3), tmp_path, save_manifest=False)
        script = emit_plot_script(manifest, tmp_path)
        assert script.name == "fig6.gp"
        text = script.read_text(encoding="utf-8")
        assert '"fig6_a.csv" using 1:2' in text
        assert not (tmp_path / MANIFEST_FILE).exists()


class TestCyclePreset:
    def test_ratio_preset(self, manager, tmp_path):
        preset = manager.get("fig7").replace(steps=5)
        manifest = run_figure_preset(preset, tmp_path, gamma_points=3)

        assert len(manifest.entries("curve")) == 5
        assert len(manifest.entries("ratio")) == 5
        assert len(manifest.entries("inset")) == 1
        assert len(manifest.entries("ratio_inset")) == 1
        assert manifest.parameters == {"h1": 0.5, "h2": 0.3, "T1": 1.0, "T2": 0.5}

        curve = read_csv(tmp_path / "fig7_gamma-1.csv")
        assert curve[0] == ["x", "W", "Q1", "Q2", "eta", "eta_carnot", "regime"]
        assert curve[1][-1] == "engine"

        ratio = read_csv(tmp_path / "fig7_ratio_gamma0.csv")
        assert ratio[0] == ["x", "W_over_wq", "eta"]
        assert float(ratio[1][1]) == pytest.approx(2.0, abs=1e-9)

        inset = read_csv(tmp_path / "fig7_inset_ratio.csv")
        assert [row[0] for row in inset[1:]] == ["-1", "0", "1"]
        assert all(float(row[1]) >= 2.0 - 1e-9 for row in inset[1:])

    def test_rerun_is_byte_identical(self, manager, tmp_path):
        preset = manager.get("fig3").replace(steps=4, curve_gammas=(0.4,), inset_panels=())
        run_figure_preset(preset, tmp_path / "first")
        run_figure_preset(preset, tmp_path / "second")
        for name in ("fig3_gamma0.4.csv", MANIFEST_FILE, REPORT_FILE):
            assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def test_empty_manifest_has_no_plot(tmp_path):
    with pytest.raises(InvalidParameterError):
        emit_plot_script(Manifest(preset="empty"), tmp_path)


@pytest.mark.parametrize("value,text", [(None, ""), (-0.0, "0"), (0.5, "0.5"), (1.0 / 3.0, "0.333333333333")])
def test_format_number(value, text):
    assert format_number(value) == text
