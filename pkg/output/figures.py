"""
图预设运行器

每条 γ 曲线一个 CSV，每个插图面板一个 CSV，外加 manifest.json 与 report.md。
"""
from pathlib import Path

import numpy as np
from loguru import logger

from core.exceptions import BaselineZeroError
from core.models import TOL_ZERO, FigurePreset, Manifest, ManifestEntry, Proportional, SweepSpec
from core.spectrum import level_table
from core.sweep import gamma_profile, sweep1d
from core.thermo import kieu_qubit_cycle

from .logger import write_manifest_json, write_manifest_markdown
from .writer import (
    PROFILE_COLUMNS,
    RATIO_COLUMNS,
    RATIO_PROFILE_COLUMNS,
    SWEEP_COLUMNS,
    level_columns,
    write_levels_csv,
    write_profile_csv,
    write_ratio_csv,
    write_ratio_profile_csv,
    write_sweep_csv,
)


def _parameters(preset: FigurePreset) -> dict[str, float]:
    if preset.kind == "levels":
        return {
            f"{panel.panel}.{key}": value
            for panel in preset.level_panels
            for key, value in panel.params.model_dump().items()
            if key != preset.axis
        }
    fixed = preset.protocol.model_dump(exclude={"kind", "gamma", preset.axis})
    return {**fixed, "T1": preset.baths.t_hot, "T2": preset.baths.t_cold}


def _work_baseline(protocol: Proportional, preset: FigurePreset) -> float:
    baseline = kieu_qubit_cycle(protocol.h1, protocol.h2, preset.baths.t_hot, preset.baths.t_cold).work
    if baseline <= TOL_ZERO:
        raise BaselineZeroError(f"单比特基准功 w_q={baseline:.3e} 不为正, 无法输出功比")
    return baseline


def _run_levels(preset: FigurePreset, out: Path, digits: int) -> list[ManifestEntry]:
    lo, hi = preset.axis_range
    values = np.linspace(lo, hi, preset.steps)
    entries = []
    for panel in preset.level_panels:
        rows = level_table(panel.params, preset.level_axis, values)
        path = f"{preset.name}_{panel.panel}.csv"
        write_levels_csv(out / path, preset.axis, rows, digits)
        label = " ".join(f"{k}={v:g}" for k, v in panel.params.model_dump().items() if k != preset.axis)
        entries.append(ManifestEntry(path=path, role="levels", panel=panel.panel, label=label, columns=level_columns(preset.axis)))
    return entries


def _run_cycles(preset: FigurePreset, out: Path, workers: int, gamma_points: int, digits: int) -> list[ManifestEntry]:
    spec = SweepSpec.create(
        protocol=preset.protocol,
        axis=preset.axis,
        axis_range=preset.axis_range,
        steps=preset.steps,
        baths=preset.baths,
    )
    baseline = _work_baseline(preset.protocol, preset) if preset.work_ratio else None

    entries = []
    for gamma in preset.curve_gammas:
        label = f"gamma={gamma:g}"
        result = sweep1d(spec.with_protocol(gamma=gamma), workers=workers)
        path = f"{preset.name}_gamma{gamma:g}.csv"
        write_sweep_csv(out / path, result, digits)
        entries.append(ManifestEntry(path=path, role="curve", label=label, columns=SWEEP_COLUMNS))
        if baseline is not None:
            path = f"{preset.name}_ratio_gamma{gamma:g}.csv"
            write_ratio_csv(out / path, result, baseline, digits)
            entries.append(ManifestEntry(path=path, role="ratio", label=label, columns=RATIO_COLUMNS))

    if preset.inset_panels:
        inner = spec.replace(axis_range=preset.inset_range or preset.axis_range)
        rows = gamma_profile(inner, points=gamma_points, workers=workers)
        for panel in preset.inset_panels:
            path = f"{preset.name}_inset_{panel}.csv"
            write_profile_csv(out / path, rows, digits)
            entries.append(ManifestEntry(path=path, role="inset", panel=panel, columns=PROFILE_COLUMNS))
        if baseline is not None:
            path = f"{preset.name}_inset_ratio.csv"
            write_ratio_profile_csv(out / path, rows, baseline, digits)
            entries.append(ManifestEntry(path=path, role="ratio_inset", columns=RATIO_PROFILE_COLUMNS))
    return entries


def run_figure_preset(
    preset: FigurePreset,
    out_dir: Path,
    workers: int = 1,
    gamma_points: int = 21,
    digits: int = 12,
    save_manifest: bool = True,
) -> Manifest:
    """
    运行一个图预设并写出全部 CSV；save_manifest 为真时另写 manifest.json 与 report.md

    Returns:
        写出文件的清单（路径相对 out_dir）
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    logger.info(f"运行预设 {preset.name} ({preset.source_label}) -> {out}")

    if preset.kind == "levels":
        entries = _run_levels(preset, out, digits)
    else:
        entries = _run_cycles(preset, out, workers, gamma_points, digits)

    manifest = Manifest(
        preset=preset.name,
        source_label=preset.source_label,
        title=preset.title,
        axis=preset.axis,
        axis_range=preset.axis_range,
        inset_range=preset.inset_range if preset.inset_panels else None,
        steps=preset.steps,
        parameters=_parameters(preset),
        files=tuple(entries),
    )
    if save_manifest:
        write_manifest_json(manifest, out)
        write_manifest_markdown(manifest, out)
    logger.info(f"预设 {preset.name} 完成, 写出 {len(entries)} 个 CSV")
    return manifest
