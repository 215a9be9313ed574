"""
数据模块
"""
from .preset_manager import FigurePresetManager

__all__ = ["FigurePresetManager"]
