"""
CSV 与绘图脚本输出

所有数值以 12 位有效数字写出，同样的输入重跑得到逐字节相同的文件。
"""
import csv
from pathlib import Path
from typing import Iterable, Optional, Sequence

from loguru import logger

from core.exceptions import InvalidParameterError
from core.models import LevelRow, Manifest, ProfileRow, SweepResult

SWEEP_COLUMNS = ("x", "W", "Q1", "Q2", "eta", "eta_carnot", "regime")
PROFILE_COLUMNS = ("gamma", "W_m", "eta_m")
RATIO_COLUMNS = ("x", "W_over_wq", "eta")
RATIO_PROFILE_COLUMNS = ("gamma", "W_m_over_wq")

SIGNIFICANT_DIGITS = 12


def format_number(value: Optional[float], digits: int = SIGNIFICANT_DIGITS) -> str:
    """缺失值写成空串；-0 归一为 0"""
    if value is None:
        return ""
    if value == 0.0:
        value = 0.0
    return f"{value:.{digits}g}"


def level_columns(axis: str) -> tuple[str, ...]:
    return (axis, "E1", "E2", "E3", "E4")


def _write_rows(path: Path, columns: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)
    logger.debug(f"已写出 {path}")
    return path


def write_sweep_csv(path: Path, result: SweepResult, digits: int = SIGNIFICANT_DIGITS) -> Path:
    """x,W,Q1,Q2,eta,eta_carnot,regime；非热机行 eta 为空，求值失败的行 regime 为 error"""
    fmt = lambda v: format_number(v, digits)
    rows = []
    for row in result.rows:
        regime = row.regime.value if row.regime is not None else "error"
        rows.append((fmt(row.x), fmt(row.work), fmt(row.q_hot), fmt(row.q_cold), fmt(row.efficiency), fmt(row.carnot), regime))
    return _write_rows(path, SWEEP_COLUMNS, rows)


def write_levels_csv(path: Path, axis: str, rows: Sequence[LevelRow], digits: int = SIGNIFICANT_DIGITS) -> Path:
    """h,E1,E2,E3,E4 或 J,E1,E2,E3,E4"""
    data = [(format_number(r.x, digits), *(format_number(e, digits) for e in r.energies)) for r in rows]
    return _write_rows(path, level_columns(axis), data)


def write_profile_csv(path: Path, rows: Sequence[ProfileRow], digits: int = SIGNIFICANT_DIGITS) -> Path:
    """gamma,W_m,eta_m；没有热机点的 γ 两列为空"""
    data = [(format_number(r.gamma, digits), format_number(r.w_max, digits), format_number(r.eta_max, digits)) for r in rows]
    return _write_rows(path, PROFILE_COLUMNS, data)


def write_ratio_csv(path: Path, result: SweepResult, baseline: float, digits: int = SIGNIFICANT_DIGITS) -> Path:
    """x,W_over_wq,eta"""
    data = []
    for row in result.rows:
        ratio = row.work / baseline if row.work is not None else None
        data.append((format_number(row.x, digits), format_number(ratio, digits), format_number(row.efficiency, digits)))
    return _write_rows(path, RATIO_COLUMNS, data)


def write_ratio_profile_csv(path: Path, rows: Sequence[ProfileRow], baseline: float, digits: int = SIGNIFICANT_DIGITS) -> Path:
    """gamma,W_m_over_wq"""
    data = [
        (format_number(r.gamma, digits), format_number(r.w_max / baseline if r.w_max is not None else None, digits))
        for r in rows
    ]
    return _write_rows(path, RATIO_PROFILE_COLUMNS, data)


def _plot_block(output: str, xlabel: str, ylabel: str, series: list[tuple[str, int, str]]) -> list[str]:
    lines = [
        f'set output "{output}"',
        f'set xlabel "{xlabel}"',
        f'set ylabel "{ylabel}"',
    ]
    parts = [f'"{path}" using 1:{column} with lines title "{title}"' for path, column, title in series]
    lines.append("plot " + ", \\\n     ".join(parts))
    lines.append("")
    return lines


def emit_plot_script(manifest: Manifest, out_dir: Path) -> Path:
    """
    为 gnuplot 生成绘图脚本，CSV 按相对路径引用

    Raises:
        InvalidParameterError: 清单中没有文件
    """
    if manifest.is_empty:
        raise InvalidParameterError(f"清单 {manifest.preset} 为空, 无法生成绘图脚本")

    name = manifest.preset
    lines = [
        f"# {name} ({manifest.source_label}): {manifest.title}",
        'set datafile separator ","',
        "set key autotitle columnhead",
        "set terminal pngcairo size 900,600",
        "",
    ]

    curves = manifest.entries("curve")
    ratios = manifest.entries("ratio")
    if ratios:
        series = [(e.path, 2, e.label) for e in ratios]
        lines += _plot_block(f"{name}_a.png", manifest.axis, "W/w_q", series)
    elif curves:
        lines += _plot_block(f"{name}_a.png", manifest.axis, "W", [(e.path, 2, e.label) for e in curves])
        lines += _plot_block(f"{name}_b.png", manifest.axis, "eta", [(e.path, 5, e.label) for e in curves])

    for entry in manifest.entries("inset"):
        column, ylabel = (3, "eta_m") if entry.panel == "b" else (2, "W_m")
        lines += _plot_block(f"{name}_inset_{entry.panel}.png", "gamma", ylabel, [(entry.path, column, ylabel)])
    for entry in manifest.entries("ratio_inset"):
        lines += _plot_block(f"{name}_inset_ratio.png", "gamma", "W_m/w_q", [(entry.path, 2, "W_m/w_q")])

    for entry in manifest.entries("levels"):
        series = [(entry.path, column, f"E{column - 1}") for column in range(2, 6)]
        lines += _plot_block(f"{name}_{entry.panel}.png", manifest.axis, "E_n", series)

    path = Path(out_dir) / f"{name}.gp"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines), encoding="utf-8")
    logger.info(f"绘图脚本已写出: {path}")
    return path
