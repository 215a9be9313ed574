"""
图预设管理
"""
import json
from pathlib import Path
from typing import Optional
from loguru import logger

from core.exceptions import InvalidParameterError, UnknownPresetError
from core.models import FigurePreset


class FigurePresetManager:
    """图预设管理器，既接受 fig1..fig7 也接受源文件标签 qoe0..qoe6"""

    def __init__(self, presets_file: Optional[str] = None):
        if presets_file is None:
            presets_file = Path(__file__).parent / "figures.json"

        self.presets_file = Path(presets_file)
        self.presets: dict[str, FigurePreset] = {}
        self._load_presets()

    def _load_presets(self) -> None:
        """加载预设"""
        try:
            with open(self.presets_file, "r", encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError:
            logger.warning(f"预设文件不存在: {self.presets_file}")
            return
        except json.JSONDecodeError as e:
            logger.error(f"预设文件解析错误: {e}")
            return

        for raw in data.get("presets", []):
            try:
                preset = FigurePreset.create(**raw)
            except InvalidParameterError as e:
                logger.error(f"预设 {raw.get('name', '?')} 非法, 已跳过: {e}")
                continue
            self.presets[preset.name] = preset

        logger.info(f"预设加载成功，共 {len(self.presets)} 张图")

    def get(self, name: str) -> FigurePreset:
        """
        按名称获取预设

        Raises:
            UnknownPresetError: 名称既不是预设名也不是源文件标签
        """
        key = name.strip().lower()
        if key in self.presets:
            return self.presets[key]
        for preset in self.presets.values():
            if preset.source_label == key:
                return preset
        raise UnknownPresetError(f"未知的图预设: {name} (可选: {', '.join(self.names())})")

    def names(self) -> list[str]:
        return sorted(self.presets)

    def label_map(self) -> dict[str, str]:
        """预设名 -> 源文件标签"""
        return {name: self.presets[name].source_label for name in self.names()}

    def __len__(self) -> int:
        return len(self.presets)
