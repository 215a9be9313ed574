"""
测试公共夹具
"""
import sys
from pathlib import Path

import pytest

# 添加项目根目录到 Python 路径
sys.path.insert(0, str(Path(__file__).parent.parent))

from core.models import BathPair, FieldSweep  # noqa: E402


@pytest.fixture
def baths() -> BathPair:
    """T1 = 1, T2 = 0.5"""
    return BathPair.create(t_hot=1.0, t_cold=0.5)


@pytest.fixture
def field_sweep() -> FieldSweep:
    """J=1, γ=0, h1=0.5, h2=0.25 的情形 (i) 热机"""
    return FieldSweep.create(J=1.0, gamma=0.0, h1=0.5, h2=0.25)


@pytest.fixture
def log_dir(tmp_path: Path) -> str:
    return str(tmp_path / "logs")
