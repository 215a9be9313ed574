"""
输出模块
"""
from .logger import RunLogger
from .display import RunDisplay
from .figures import run_figure_preset
from .writer import emit_plot_script

__all__ = ["RunLogger", "RunDisplay", "run_figure_preset", "emit_plot_script"]
