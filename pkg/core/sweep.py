"""
一维参数扫描、W/η 最大化、γ 依赖表与热机工作窗口

网格点之间互不依赖，可以并发求值；结果总是按网格顺序组装。
"""
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional

import numpy as np
from loguru import logger
from scipy.optimize import bisect

from .exceptions import InvalidParameterError, LmgError, NoEnginePointError
from .models import MaxReport, Objective, ProfileRow, Regime, SweepResult, SweepRow, SweepSpec, Window
from .protocols import run_protocol

DEFAULT_STEPS = 401
GOLDEN_TOL = 1e-8
WINDOW_TOL = 1e-8
CUTOFF_TOL = 1e-4

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/φ
_INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0  # 1/φ²


def evaluate(spec: SweepSpec, x: float) -> SweepRow:
    """在自由轴取值 x 处运行一次循环；失败记录在 row.error 中"""
    x = float(x)
    try:
        result = run_protocol(spec.protocol_at(x), spec.baths)
    except LmgError as exc:
        logger.debug(f"{spec.axis}={x:.12g} 求值失败: {exc}")
        return SweepRow(x=x, error=f"{type(exc).__name__}: {exc}")
    return SweepRow(
        x=x,
        work=result.work,
        q_hot=result.q_hot,
        q_cold=result.q_cold,
        efficiency=result.efficiency,
        carnot=result.carnot,
        regime=result.regime,
    )


def sweep1d(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """
    在 steps 个均匀网格点（含两端）上运行协议

    Args:
        spec: 扫描定义
        workers: 并发线程数，1 表示串行；行顺序与之无关
    """
    grid = spec.grid
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda x: evaluate(spec, x), grid))
    else:
        rows = [evaluate(spec, x) for x in grid]

    failed = sum(1 for row in rows if row.error)
    if failed:
        logger.warning(f"扫描 {spec.axis}: {failed}/{len(rows)} 个点求值失败")
    logger.debug(f"扫描 {spec.axis}∈[{grid[0]:.6g}, {grid[-1]:.6g}] 完成, {len(rows)} 行")
    return SweepResult(axis=spec.axis, rows=tuple(rows))


def _objective_value(row: SweepRow, objective: Objective) -> float:
    """非热机点（含求值失败的点）的目标值为 -inf"""
    if not row.is_engine:
        return -math.inf
    return row.work if objective is Objective.WORK else row.efficiency


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float = GOLDEN_TOL) -> tuple[float, float]:
    """
    黄金分割搜索 f 在 [a, b] 上的最大值

    假设 f 在区间内单峰；迭代次数由 tol 事先确定，
    最终区间宽度不超过 tol。

    Returns:
        (x, f(x))
    """
    a, b = min(a, b), max(a, b)
    width = b - a
    if width <= tol:
        x = (a + b) / 2.0
        return x, f(x)

    n = int(math.ceil(math.log(tol / width) / math.log(_INV_PHI)))
    c = a + _INV_PHI_SQ * width
    d = a + _INV_PHI * width
    yc, yd = f(c), f(d)

    for _ in range(n - 1):
        width *= _INV_PHI
        # 相等时保留左半区间，平局偏向较小的轴值
        if yc >= yd:
            b, d, yd = d, c, yc
            c = a + _INV_PHI_SQ * width
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            d = a + _INV_PHI * width
            yd = f(d)

    return (c, yc) if yc >= yd else (d, yd)


def maximize(
    spec: SweepSpec,
    objective: Objective,
    result: Optional[SweepResult] = None,
    tol: float = GOLDEN_TOL,
) -> MaxReport:
    """
    最大功 W_m 或最大效率 η_m

    先在粗网格上取最优点（并列取较小的轴值），再在其相邻
    三点构成的区间上做黄金分割细化，报告两者中较大的值。

    Args:
        spec: 扫描定义
        objective: work 或 efficiency
        result: 已有的同一 spec 的扫描结果，避免重复求值

    Raises:
        NoEnginePointError: 网格上没有热机工作点
    """
    objective = Objective(objective)
    if result is None:
        result = sweep1d(spec)

    values = np.array([_objective_value(row, objective) for row in result.rows])
    if not np.any(np.isfinite(values)):
        raise NoEnginePointError(f"{spec.axis} 扫描网格上没有热机工作点, {objective.value} 最大值无定义")

    xs = result.xs
    best = int(np.argmax(values))  # 第一个最大值，即较小的轴值
    lo = xs[max(best - 1, 0)]
    hi = xs[min(best + 1, len(xs) - 1)]

    def f(x: float) -> float:
        return _objective_value(evaluate(spec, x), objective)

    arg, value = float(xs[best]), float(values[best])
    x_gold, y_gold = golden_section_max(f, lo, hi, tol)
    if y_gold > value:
        arg, value = float(x_gold), float(y_gold)

    on_boundary = best in (0, len(xs) - 1)
    if on_boundary:
        logger.warning(f"{objective.value} 最大值落在扫描区间端点 {spec.axis}={arg:.6g}, 区间可能过窄")
    return MaxReport(objective=objective, arg=arg, value=value, refined=True, on_boundary=on_boundary)


def gamma_profile(
    spec: SweepSpec,
    gammas: Optional[Iterable[float]] = None,
    points: int = 21,
    workers: int = 1,
) -> list[ProfileRow]:
    """
    γ 依赖表：每个 γ 上对内层轴分别最大化 W 和 η

    Args:
        spec: 内层扫描定义（协议中的 γ 会被逐个替换）
        gammas: γ 取值；缺省为 [-1, 1] 上 points 个均匀点
        points: 缺省 γ 网格点数

    没有热机工作点的 γ 记为空值，不中断整张表。
    """
    if spec.axis == "gamma":
        raise InvalidParameterError("γ 依赖表的内层轴不能是 gamma")
    values = np.linspace(-1.0, 1.0, points) if gammas is None else np.asarray(list(gammas), dtype=float)

    rows = []
    for gamma in values:
        inner = spec.with_protocol(gamma=float(gamma))
        result = sweep1d(inner, workers=workers)
        try:
            w_max = maximize(inner, Objective.WORK, result).value
            eta_max = maximize(inner, Objective.EFFICIENCY, result).value
        except NoEnginePointError:
            w_max = eta_max = None
        rows.append(ProfileRow(gamma=float(gamma), w_max=w_max, eta_max=eta_max))
    logger.info(f"γ 依赖表完成: {len(rows)} 个 γ, {sum(r.w_max is not None for r in rows)} 个有热机点")
    return rows


def _work(spec: SweepSpec, x: float) -> float:
    row = evaluate(spec, x)
    return row.work if row.work is not None else math.nan


def _edge(spec: SweepSpec, inside: float, outside: float, tol: float) -> float:
    """
    热机区与非热机区之间的边界

    W 在两点间严格变号时对 W 二分；否则（例如外侧 W 恰为 0）
    对"是否热机"这一判据二分，返回仍属热机区的一端。
    """
    w_in, w_out = _work(spec, inside), _work(spec, outside)
    if math.isfinite(w_out) and w_in * w_out < 0.0:
        lo, hi = sorted((inside, outside))
        return float(bisect(lambda x: _work(spec, x), lo, hi, xtol=tol, maxiter=200))

    while abs(outside - inside) > tol:
        mid = (inside + outside) / 2.0
        if evaluate(spec, mid).is_engine:
            inside = mid
        else:
            outside = mid
    return float(inside)


def operating_window(spec: SweepSpec, result: Optional[SweepResult] = None, tol: float = WINDOW_TOL) -> Window:
    """
    W > 0 的热机工作窗口

    网格上连续的热机点构成一段；每段的内部端点二分到 tol，
    落在扫描区间端点上的段保持区间端点不变。
    """
    if result is None:
        result = sweep1d(spec)
    rows = result.rows
    flags = [row.is_engine for row in rows]

    intervals = []
    i = 0
    while i < len(rows):
        if not flags[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(rows) and flags[j + 1]:
            j += 1
        lo = rows[i].x if i == 0 else _edge(spec, rows[i].x, rows[i - 1].x, tol)
        hi = rows[j].x if j == len(rows) - 1 else _edge(spec, rows[j].x, rows[j + 1].x, tol)
        intervals.append((lo, hi))
        i = j + 1

    logger.debug(f"{spec.axis} 热机窗口: {intervals or '空'}")
    return Window(intervals=tuple(intervals))


def _has_engine_point(spec: SweepSpec, gamma: float) -> bool:
    inner = spec.with_protocol(gamma=float(gamma))
    return any(row.is_engine for row in sweep1d(inner).rows)


def engine_cutoff(spec: SweepSpec, gamma_range: tuple[float, float] = (-1.0, 1.0), tol: float = CUTOFF_TOL) -> Optional[float]:
    """
    γ 截止值：内层扫描出现热机点与不出现热机点之间的 γ

    要求两端一个有热机点、一个没有，否则返回 None。
    """
    lo, hi = (float(gamma_range[0]), float(gamma_range[1]))
    if not lo < hi:
        raise InvalidParameterError(f"γ 区间必须满足 lo < hi: {gamma_range}")
    at_lo, at_hi = _has_engine_point(spec, lo), _has_engine_point(spec, hi)
    if at_lo == at_hi:
        logger.info(f"γ∈[{lo}, {hi}] 两端热机状态相同 ({at_lo}), 无截止值")
        return None

    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if _has_engine_point(spec, mid) == at_lo:
            lo = mid
        else:
            hi = mid
    cutoff = (lo + hi) / 2.0
    logger.info(f"γ 截止值 ≈ {cutoff:.4f}")
    return cutoff
