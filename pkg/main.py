#!/usr/bin/env python3
"""
LMG 量子 Otto 热机模拟器
主入口文件

支持的命令：
- spectrum  能谱与能级表
- cycle     单次 Otto 循环
- sweep     一维参数扫描（CSV）
- figure    图预设 fig1..fig7（CSV + 清单 + 可选绘图脚本）
- selftest  数值自检
"""
import argparse
import sys
from pathlib import Path

# 添加项目根目录到 Python 路径
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

import numpy as np
from loguru import logger
from pydantic import ValidationError

from config import Config, RunConfig, config
from core.exceptions import InvalidParameterError, LmgError, NumericalError
from core.models import Axis, LmgParams, Objective
from core.protocols import run_protocol
from core.spectrum import level_table, lmg_spectrum
from core.sweep import maximize, operating_window, sweep1d
from core.verification import DEFAULT_SAMPLES, DEFAULT_SEED, run_selftest
from data.preset_manager import FigurePresetManager
from output.display import RunDisplay
from output.figures import run_figure_preset
from output.logger import RunLogger
from output.writer import emit_plot_script, write_levels_csv, write_sweep_csv

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

PARAMETER_FLAGS = ("case", "J", "J1", "J2", "h", "h1", "h2", "gamma", "r", "T1", "T2", "axis", "range", "steps", "out")


def _parameter_parser() -> argparse.ArgumentParser:
    """各计算命令共用的参数"""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", type=str, help="key=value 配置文件（命令行参数优先）")
    parent.add_argument("--case", choices=["i", "ii", "iii"], help="绝热协议: i 改变 h, ii 改变 J, iii J=r·h")
    for name in ("J", "J1", "J2", "h", "h1", "h2", "gamma", "r", "T1", "T2"):
        parent.add_argument(f"--{name}", type=float)
    parent.add_argument("--axis", type=str, help="扫描轴（协议参数名）")
    parent.add_argument("--range", type=str, help="扫描区间 min:max（负数写成 --range=-5:5）")
    parent.add_argument("--steps", type=int, help="网格点数")
    parent.add_argument("--out", type=str, help="输出路径")
    return parent


def build_parser() -> argparse.ArgumentParser:
    """构造命令行解析器"""
    parser = argparse.ArgumentParser(
        description="LMG 两自旋量子 Otto 热机模拟器",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  python main.py spectrum --J 2 --gamma 0.4 --h 1
  python main.py cycle --case i --J 1 --h1 0.5 --h2 0.25 --T1 1 --T2 0.5
  python main.py sweep --case i --h1 0.5 --h2 0.25 --T1 1 --T2 0.5 --axis J --range 0:5
  python main.py figure fig1 --plot
  python main.py selftest
        """,
    )
    parser.add_argument("--log-dir", type=str, default=None, help="日志目录（默认从 .env 读取或使用 logs）")
    parser.add_argument("--workers", type=int, default=None, help="扫描并发线程数")

    sub = parser.add_subparsers(dest="command", required=True)
    params = _parameter_parser()

    sub.add_parser("spectrum", parents=[params], help="能谱；给出 --axis h|J 与 --range 时输出能级表")
    sub.add_parser("cycle", parents=[params], help="单次 Otto 循环")
    sub.add_parser("sweep", parents=[params], help="一维参数扫描")

    figure = sub.add_parser("figure", help="运行图预设")
    figure.add_argument("name", help="fig1..fig7 或 qoe0..qoe6")
    figure.add_argument("--out", type=str, help="输出目录（默认 results/<预设名>）")
    figure.add_argument("--steps", type=int, help="覆盖预设的网格点数")
    figure.add_argument("--plot", action="store_true", help="同时生成 gnuplot 脚本")

    selftest = sub.add_parser("selftest", help="数值自检")
    selftest.add_argument("--seed", type=int, default=DEFAULT_SEED)
    selftest.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    flags = {name: getattr(args, name, None) for name in PARAMETER_FLAGS}
    return RunConfig.load(args.config, **flags)


def cmd_spectrum(args: argparse.Namespace, settings: Config, display: RunDisplay) -> int:
    rc = _run_config(args)
    if rc.axis is None:
        display.show_spectrum(lmg_spectrum(rc.params()))
        return EXIT_OK

    if rc.axis not in {"h", "J"} or rc.range is None:
        raise InvalidParameterError("能级表需要 --axis h|J 与 --range")
    # 扫描轴上的参数由网格给出，可以省略
    fixed = {"J": rc.J, "h": rc.h, rc.axis: rc.range[0]}
    missing = [k for k, v in fixed.items() if v is None]
    if missing:
        raise InvalidParameterError(f"缺少参数: {', '.join(missing)}")
    base = LmgParams.create(gamma=rc.gamma, **fixed)
    axis = Axis.FIELD if rc.axis == "h" else Axis.COUPLING
    values = np.linspace(rc.range[0], rc.range[1], rc.steps or settings.sweep.default_steps)
    out = Path(rc.out or Path(settings.output.out_dir) / f"levels_{rc.axis}.csv")
    write_levels_csv(out, rc.axis, level_table(base, axis, values), settings.output.significant_digits)
    display.show_info(f"能级表已写出: {out}")
    return EXIT_OK


def cmd_cycle(args: argparse.Namespace, settings: Config, display: RunDisplay) -> int:
    rc = _run_config(args)
    result = run_protocol(rc.protocol(), rc.baths())
    display.show_cycle(result)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, settings: Config, display: RunDisplay) -> int:
    rc = _run_config(args)
    spec = rc.sweep_spec(settings.sweep.default_steps)
    result = sweep1d(spec, workers=settings.sweep.workers)

    out = Path(rc.out or Path(settings.output.out_dir) / f"sweep_{spec.axis}.csv")
    write_sweep_csv(out, result, settings.output.significant_digits)

    best = maximize(spec, Objective.WORK, result, tol=settings.sweep.golden_tol) if result.engine_rows else None
    window = operating_window(spec, result, tol=settings.sweep.bisect_tol)
    display.show_sweep_summary(result, best, window)
    display.show_info(f"扫描结果已写出: {out}")
    return EXIT_OK


def cmd_figure(args: argparse.Namespace, settings: Config, display: RunDisplay) -> int:
    preset = FigurePresetManager().get(args.name)
    display.show_welcome()
    if args.steps is not None:
        preset = preset.replace(steps=args.steps)

    out = Path(args.out or Path(settings.output.out_dir) / preset.name)
    manifest = run_figure_preset(
        preset,
        out,
        workers=settings.sweep.workers,
        gamma_points=settings.sweep.gamma_points,
        digits=settings.output.significant_digits,
        save_manifest=settings.log.save_manifest,
    )
    display.show_manifest(manifest, str(out))
    if args.plot:
        script = emit_plot_script(manifest, out)
        display.show_info(f"绘图脚本已写出: {script}")
    return EXIT_OK


def cmd_selftest(args: argparse.Namespace, settings: Config, display: RunDisplay) -> int:
    display.show_welcome()
    results = run_selftest(seed=args.seed, samples=args.samples)
    display.show_selftest(results)
    failed = sum(1 for r in results if not r.passed)
    display.show_info(f"自检: {len(results) - failed}/{len(results)} 通过")
    return EXIT_OK if failed == 0 else EXIT_NUMERIC


COMMANDS = {
    "spectrum": cmd_spectrum,
    "cycle": cmd_cycle,
    "sweep": cmd_sweep,
    "figure": cmd_figure,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    """主函数，返回退出码"""
    args = build_parser().parse_args(argv)
    display = RunDisplay()

    overrides = {}
    if args.log_dir is not None:
        overrides["log_dir"] = args.log_dir
    if args.workers is not None:
        overrides["workers"] = args.workers

    try:
        settings = config.with_overrides(**overrides)
        run_logger = RunLogger(settings.log.log_dir, settings.log.log_level, run_name=args.command)
        run_logger.log_command(args.command, vars(args))
        return COMMANDS[args.command](args, settings, display)
    except NumericalError as e:
        logger.error(f"数值计算失败: {e}")
        display.show_error(f"数值计算失败: {e}")
        return EXIT_NUMERIC
    except (LmgError, ValidationError) as e:
        logger.error(f"参数错误: {e}")
        display.show_error(str(e))
        return EXIT_USAGE
    except OSError as e:
        logger.error(f"I/O 错误: {e}")
        display.show_error(f"I/O 错误: {e}")
        return EXIT_IO


def run():
    """入口函数"""
    sys.exit(main())


if __name__ == "__main__":
    run()
