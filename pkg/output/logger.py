"""
运行日志系统 - 文件日志与预设清单存储
"""
import json
from pathlib import Path
from typing import Optional
from loguru import logger

from core.models import Manifest

MANIFEST_FILE = "manifest.json"
REPORT_FILE = "report.md"


def write_manifest_json(manifest: Manifest, out_dir: Path) -> Path:
    """清单写为 JSON（不含时间戳，重跑逐字节相同）"""
    path = Path(out_dir) / MANIFEST_FILE
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest.model_dump(mode="json"), f, ensure_ascii=False, indent=2)
        f.write("\n")
    logger.info(f"清单已保存: {path}")
    return path


def write_manifest_markdown(manifest: Manifest, out_dir: Path) -> Path:
    """清单写为 Markdown 报告"""
    path = Path(out_dir) / REPORT_FILE
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_generate_markdown_report(manifest), encoding="utf-8")
    logger.info(f"报告已保存: {path}")
    return path


def _generate_markdown_report(manifest: Manifest) -> str:
    lines = []

    lines.append(f"# {manifest.preset} ({manifest.source_label})")
    lines.append("")
    lines.append(f"**{manifest.title}**")
    lines.append("")

    if manifest.axis_range is not None:
        lo, hi = manifest.axis_range
        lines.append(f"- 扫描轴: `{manifest.axis}` ∈ [{lo:g}, {hi:g}], {manifest.steps} 个点")
    if manifest.inset_range is not None:
        lo, hi = manifest.inset_range
        lines.append(f"- 插图内层区间: `{manifest.axis}` ∈ [{lo:g}, {hi:g}]")
    lines.append("")

    if manifest.parameters:
        lines.append("## 参数")
        lines.append("")
        lines.append("| 参数 | 值 |")
        lines.append("|------|----|")
        for key, value in manifest.parameters.items():
            lines.append(f"| {key} | {value:.12g} |")
        lines.append("")

    lines.append("## 文件")
    lines.append("")
    lines.append("| 文件 | 类型 | 面板 | 曲线 | 列 |")
    lines.append("|------|------|------|------|----|")
    for entry in manifest.files:
        lines.append(f"| `{entry.path}` | {entry.role} | {entry.panel} | {entry.label} | {','.join(entry.columns)} |")
    lines.append("")

    return "\n".join(lines)


class RunLogger:
    """
    运行日志管理器

    功能：
    1. 文件日志存储（完整详细日志，终端输出由 RunDisplay 接管）
    2. 命令参数记录
    """

    def __init__(self, log_dir: str = "logs", level: str = "DEBUG", run_name: Optional[str] = None):
        self.log_dir = Path(log_dir)
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self.log_file = self.log_dir / f"{run_name or 'lmg-otto'}.log"
        self.level = level

        self._setup_logger()

    def _setup_logger(self) -> None:
        """配置日志器"""
        # 移除默认处理器
        logger.remove()

        logger.add(
            self.log_file,
            format="{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function}:{line} | {message}",
            level=self.level,
            encoding="utf-8",
            rotation="10 MB",
        )

        logger.info(f"日志文件: {self.log_file}")

    def log_command(self, command: str, options: dict) -> None:
        """记录命令开始"""
        logger.info("=" * 60)
        logger.info(f"命令: {command}")
        for key, value in options.items():
            if value is not None:
                logger.info(f"  {key} = {value}")
        logger.info("=" * 60)
