"""
N=2 LMG 模型的哈密顿量与精确本征系统

计算基底按 {|11>, |10>, |01>, |00>} 排列，|1> 是 σ_z = +1 的本征态，
与 np.kron 的自然顺序一致。
"""
import math
from typing import Iterable, Optional

import numpy as np
from loguru import logger
from scipy.optimize import bisect

from .exceptions import ConvergenceError, InvalidBracketError, InvalidParameterError
from .models import Axis, CrossingReport, LevelRow, LmgParams, Spectrum

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
IDENTITY_2 = np.eye(2)

# 两自旋算符（σ_y ⊗ σ_y 是实矩阵）
XX = np.kron(SIGMA_X, SIGMA_X)
YY = np.kron(SIGMA_Y, SIGMA_Y).real
Z_TOTAL = np.kron(SIGMA_Z, IDENTITY_2) + np.kron(IDENTITY_2, SIGMA_Z)

BASIS_LABELS = ("|11>", "|10>", "|01>", "|00>")
LEVEL_PAIRS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# Jacobi 校验器
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 50

# 能级交叉搜索
CROSSING_SCAN_POINTS = 200
CROSSING_TOL = 1e-10


def lmg_hamiltonian(params: LmgParams) -> np.ndarray:
    """
    构造 N=2 LMG 哈密顿量

    H = -J/4 (σx σx + γ σy σy) - h/2 (σz¹ + σz²) - J(1+γ)/4

    Args:
        params: 已校验的 (J, γ, h)

    Returns:
        只读的 4x4 实对称矩阵
    """
    J, gamma, h = params.J, params.gamma, params.h
    matrix = -(J / 4.0) * (XX + gamma * YY) - (h / 2.0) * Z_TOTAL - (J * (1.0 + gamma) / 4.0) * np.eye(4)
    matrix.setflags(write=False)
    return matrix


def lmg_spectrum(params: LmgParams) -> Spectrum:
    """
    闭式本征系统

    E1 = 0, E2 = -J(1+γ)/2, E3,4 = -[J(1+γ) ± κ]/4，
    κ = sqrt(16h² + J²(γ-1)²)，A± = (-4h ± κ)/(J(γ-1))。
    J(γ-1) = 0 时 {|11>, |00>} 块已对角，ψ3 = |11>，ψ4 = |00>。
    所有向量取实数，|00> 分量非负（ψ2 取 |01> 分量非负）。
    """
    J, gamma, h = params.J, params.gamma, params.h
    coupling = J * (1.0 + gamma)
    mixing = J * (1.0 - gamma)  # = -J(γ-1)
    kappa = math.hypot(4.0 * h, mixing)

    energies = (
        0.0,
        -coupling / 2.0,
        -(coupling + kappa) / 4.0,
        -(coupling - kappa) / 4.0,
    )
    psi1 = (0.0, _INV_SQRT2, -_INV_SQRT2, 0.0)
    psi2 = (0.0, _INV_SQRT2, _INV_SQRT2, 0.0)

    if mixing == 0.0:
        a_minus = a_plus = None
        psi3 = (1.0, 0.0, 0.0, 0.0)
        psi4 = (0.0, 0.0, 0.0, 1.0)
    else:
        # A+ 的有理化形式避免 κ - 4h 的相消
        spread = 4.0 * h + kappa
        a_minus = spread / mixing
        a_plus = -mixing / spread
        psi3 = _block_vector(math.copysign(spread, mixing), abs(mixing))
        psi4 = _block_vector(-mixing, spread)

    return Spectrum(
        params=params,
        energies=energies,
        vectors=(psi1, psi2, psi3, psi4),
        kappa=kappa,
        a_minus=a_minus,
        a_plus=a_plus,
    )


def _block_vector(amp_11: float, amp_00: float) -> tuple[float, float, float, float]:
    """span{|11>, |00>} 中归一化的向量"""
    norm = math.hypot(amp_11, amp_00)
    return (amp_11 / norm, 0.0, 0.0, amp_00 / norm)


def diagonalize_oracle(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    循环 Jacobi 旋转求解实对称矩阵的本征系统

    独立于闭式解的校验工具；迭代直到非对角 Frobenius 范数不超过
    1e-13（按矩阵范数放大，范数小于 1 时即为绝对阈值）。

    Returns:
        (升序本征值, 列向量为对应本征向量的正交矩阵)

    Raises:
        InvalidParameterError: 矩阵非方阵、非对称或含非有限值
        ConvergenceError: 超过旋转轮数预算
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidParameterError(f"需要方阵, 得到形状 {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidParameterError("矩阵含有非有限值")
    if not np.array_equal(a, a.T):
        raise InvalidParameterError("矩阵不对称")

    n = a.shape[0]
    vectors = np.eye(n)
    tol = JACOBI_TOL * max(1.0, float(np.linalg.norm(a)))

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_diagonal_norm(a) <= tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                rotation = _jacobi_rotation(a, p, q)
                a = rotation.T @ a @ rotation
                vectors = vectors @ rotation
    else:
        if _off_diagonal_norm(a) > tol:
            raise ConvergenceError(f"Jacobi 在 {JACOBI_MAX_SWEEPS} 轮内未收敛")

    energies = np.diag(a).copy()
    order = np.argsort(energies, kind="stable")
    return energies[order], vectors[:, order]


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _jacobi_rotation(a: np.ndarray, p: int, q: int) -> np.ndarray:
    """消去 a[p, q] 的平面旋转"""
    theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
    t = (1.0 if theta >= 0.0 else -1.0) / (abs(theta) + math.hypot(theta, 1.0))
    c = 1.0 / math.hypot(t, 1.0)
    s = t * c
    rotation = np.eye(a.shape[0])
    rotation[p, p] = c
    rotation[q, q] = c
    rotation[p, q] = s
    rotation[q, p] = -s
    return rotation


def qubit_spectrum(h: float) -> tuple[float, float]:
    """单比特 H_q = -h/2 σ_z 的 (基态, 激发态) 能量"""
    if not math.isfinite(h) or h < 0.0:
        raise InvalidParameterError(f"单比特能隙必须为非负有限值: h={h}")
    return (-h / 2.0, h / 2.0)


def e2_below_e3(params: LmgParams) -> bool:
    """E2 < E3 当且仅当 J(1+γ) > 0 且 J²γ > 4h²"""
    J, gamma, h = params.J, params.gamma, params.h
    return J * (1.0 + gamma) > 0.0 and J * J * gamma > 4.0 * h * h


def find_level_crossing(
    base: LmgParams,
    vary: Axis,
    pair: tuple[int, int],
    bracket: tuple[float, float],
) -> Optional[CrossingReport]:
    """
    沿磁场或耦合轴搜索 E_m = E_n 的交叉点

    先在区间上做 200 点预扫描，取第一个变号区间，再二分到 1e-10。

    Args:
        base: 其余参数
        vary: 变化的轴 (field -> h, coupling -> J)
        pair: 结构标签 (m, n)
        bracket: 搜索区间

    Returns:
        CrossingReport；区间内无变号时返回 None

    Raises:
        InvalidBracketError: 端点不是合法参数或区间为空
        InvalidParameterError: 标签非法
    """
    vary = Axis(vary)
    m, n = pair
    if m == n or not {m, n} <= {1, 2, 3, 4}:
        raise InvalidParameterError(f"能级标签必须是 1..4 中两个不同的值: {pair}")

    lo, hi = (float(bracket[0]), float(bracket[1]))
    if not lo < hi:
        raise InvalidBracketError(f"搜索区间必须满足 lo < hi: {bracket}")
    for end in (lo, hi):
        try:
            base.replace(**{vary.parameter: end})
        except InvalidParameterError as exc:
            raise InvalidBracketError(f"区间端点 {vary.parameter}={end} 非法: {exc}") from exc

    def gap(x: float) -> float:
        spectrum = lmg_spectrum(base.replace(**{vary.parameter: float(x)}))
        return spectrum.energy(m) - spectrum.energy(n)

    grid = np.linspace(lo, hi, CROSSING_SCAN_POINTS)
    values = [gap(x) for x in grid]

    location = None
    for i, value in enumerate(values):
        if value == 0.0:
            location = float(grid[i])
            break
        if i + 1 < len(values) and value * values[i + 1] < 0.0:
            location = float(bisect(gap, grid[i], grid[i + 1], xtol=CROSSING_TOL * 1e-2, maxiter=400))
            break

    if location is None:
        logger.debug(f"E{m}/E{n} 在 {vary.parameter}∈[{lo}, {hi}] 上无交叉")
        return None

    residual = abs(gap(location))
    logger.debug(f"E{m}/E{n} 交叉于 {vary.parameter}={location:.12g} (|ΔE|={residual:.2e})")
    return CrossingReport(
        pair=(m, n),
        axis=vary,
        location=location,
        bracket=(lo, hi),
        gap=residual,
    )


def level_table(base: LmgParams, vary: Axis, values: Iterable[float]) -> list[LevelRow]:
    """沿一个轴列出四条结构能级（能级图数据）"""
    vary = Axis(vary)
    rows = []
    for x in values:
        spectrum = lmg_spectrum(base.replace(**{vary.parameter: float(x)}))
        rows.append(LevelRow(x=float(x), energies=spectrum.energies))
    return rows
