"""
Gibbs 热化与量子 Otto 循环能量学

绝热过程按结构标签 n 保持占据概率 p_n（不是按能量排序映射），
因此能级交叉前后同一标签的态被视为同一条绝热线。
"""
import math
from typing import Sequence, Union

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import logsumexp

from .exceptions import InvalidParameterError, LabelMismatchError, NumericalError
from .models import TOL_ZERO, BathPair, CycleResult, LmgParams, Regime, Spectrum, ThermalState
from .spectrum import diagonalize_oracle, lmg_hamiltonian, lmg_spectrum, qubit_spectrum

Levels = Union[Spectrum, Sequence[float]]

# 第一定律闭合的相对容差（相对于各项 |E_n δ_n| 之和）
FIRST_LAW_RTOL = 1e-12


def _energies(levels: Levels) -> np.ndarray:
    values = levels.energies if isinstance(levels, Spectrum) else levels
    energies = np.asarray(values, dtype=float)
    if energies.ndim != 1 or energies.size == 0:
        raise LabelMismatchError("能级必须是非空的一维序列")
    if not np.all(np.isfinite(energies)):
        raise InvalidParameterError("能级含有非有限值")
    return energies


def _check_temperature(temperature: float) -> float:
    if not math.isfinite(temperature) or temperature <= 0.0:
        raise InvalidParameterError(f"温度必须为正的有限值: T={temperature}")
    return float(temperature)


def gibbs(energies: Levels, temperature: float) -> ThermalState:
    """
    Gibbs 分布 p_n = exp(-E_n/T)/Z

    指数化前减去最低能量，|E|/T 很大时也不会溢出；
    partition 是平移后能量的配分函数，平移量记录在 shift 中。
    """
    e = _energies(energies)
    t = _check_temperature(temperature)
    shift = float(e.min())
    weights = np.exp(-(e - shift) / t)
    partition = float(weights.sum())
    return ThermalState(
        populations=tuple(float(p) for p in weights / partition),
        partition=partition,
        shift=shift,
        temperature=t,
    )


def internal_energy(energies: Levels, populations: Union[ThermalState, Sequence[float]]) -> float:
    """U = Σ E_n p_n"""
    e = _energies(energies)
    p = np.asarray(populations.populations if isinstance(populations, ThermalState) else populations, dtype=float)
    if p.shape != e.shape:
        raise LabelMismatchError(f"能级数 {e.size} 与占据概率数 {p.size} 不一致")
    return float(np.dot(e, p))


def carnot_efficiency(t_hot: float, t_cold: float) -> float:
    """η_c = 1 - T2/T1"""
    baths = BathPair.create(t_hot=t_hot, t_cold=t_cold)
    return 1.0 - baths.t_cold / baths.t_hot


def classify(q_hot: float, q_cold: float, work: float, tol: float = TOL_ZERO) -> Regime:
    """
    循环状态判定

    engine:     W > tol 且 Q1 > -Q2 > 0
    null:       |W| <= tol
    non-engine: 其它情况
    """
    if abs(work) <= tol:
        return Regime.NULL
    if work > tol and q_hot > -q_cold > 0.0:
        return Regime.ENGINE
    return Regime.NON_ENGINE


def _assemble(q_hot: float, q_cold: float, work: float, baths: BathPair, scale: float = 0.0) -> CycleResult:
    """
    组装循环结果

    scale 为 Σ|E_n δ_n| + Σ|E'_n δ_n|，第一定律按它衡量舍入误差；
    通过检查后 Q2 取 W - Q1，使 W = Q1 + Q2 在舍入意义下闭合。
    """
    if abs(work - (q_hot + q_cold)) > FIRST_LAW_RTOL * max(1.0, scale, abs(q_hot) + abs(q_cold)):
        raise NumericalError(f"第一定律不闭合: W={work!r}, Q1+Q2={q_hot + q_cold!r}")
    q_cold = work - q_hot
    regime = classify(q_hot, q_cold, work)
    return CycleResult.create(
        q_hot=q_hot,
        q_cold=q_cold,
        work=work,
        efficiency=work / q_hot if regime is Regime.ENGINE else None,
        carnot=1.0 - baths.t_cold / baths.t_hot,
        regime=regime,
    )


def otto_cycle(hot: tuple[Levels, float], cold: tuple[Levels, float]) -> CycleResult:
    """
    量子 Otto 循环

    Q1 = Σ E_n (p_n - p'_n)
    Q2 = Σ E'_n (p'_n - p_n)
    W  = Σ (E_n - E'_n)(p_n - p'_n)

    Args:
        hot: (热端能谱, T1)，在 T1 下热化
        cold: (冷端能谱, T2)，在 T2 下热化；标签与热端一一对应

    Raises:
        BathOrderError: T1 <= T2
        LabelMismatchError: 两端能级数不同
    """
    (hot_levels, t_hot), (cold_levels, t_cold) = hot, cold
    baths = BathPair.create(t_hot=t_hot, t_cold=t_cold)
    e_hot, e_cold = _energies(hot_levels), _energies(cold_levels)
    if e_hot.shape != e_cold.shape:
        raise LabelMismatchError(f"两端能级数不同: {e_hot.size} vs {e_cold.size}")

    p_hot = np.array(gibbs(e_hot, baths.t_hot).populations)
    p_cold = np.array(gibbs(e_cold, baths.t_cold).populations)
    delta = p_hot - p_cold

    q_hot = float(np.dot(e_hot, delta))
    q_cold = float(-np.dot(e_cold, delta))
    work = float(np.dot(e_hot - e_cold, delta))
    scale = float(np.abs(e_hot * delta).sum() + np.abs(e_cold * delta).sum())
    return _assemble(q_hot, q_cold, work, baths, scale)


def kieu_qubit_cycle(h1: float, h2: float, t_hot: float, t_cold: float) -> CycleResult:
    """单比特 Otto 循环（Kieu 基准），热机时 η = 1 - h2/h1"""
    for name, value in (("h1", h1), ("h2", h2)):
        if not math.isfinite(value) or value <= 0.0:
            raise InvalidParameterError(f"{name} 必须为正: {value}")
    return otto_cycle((qubit_spectrum(h1), t_hot), (qubit_spectrum(h2), t_cold))


def kieu_pwc(h1: float, h2: float, t_hot: float, t_cold: float) -> bool:
    """Kieu 正功条件 T1 > (h1/h2) T2"""
    if not all(math.isfinite(v) for v in (h1, h2, t_hot, t_cold)):
        raise InvalidParameterError("正功条件的参数必须有限")
    if h2 <= 0.0:
        raise InvalidParameterError(f"h2 必须为正: {h2}")
    return t_hot > (h1 / h2) * t_cold


def uniform_gap_cycle(energies: Levels, alpha: float, baths: BathPair) -> CycleResult:
    """
    所有能隙按同一比例 α 缩放的多能级 Otto 循环

    冷端能谱为 E_n/α；热机条件为 α > 1 且 T1 > α T2，效率 1 - 1/α。
    """
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise InvalidParameterError(f"能隙比例必须为正: α={alpha}")
    e = _energies(energies)
    return otto_cycle((e, baths.t_hot), (e / alpha, baths.t_cold))


def density_matrix(spectrum: Spectrum, state: ThermalState) -> np.ndarray:
    """ρ = Σ p_n |ψ_n><ψ_n|（计算基底）"""
    p = np.asarray(state.populations)
    if p.size != 4:
        raise LabelMismatchError(f"需要 4 个占据概率, 得到 {p.size}")
    vectors = spectrum.vector_matrix
    return vectors @ np.diag(p) @ vectors.T


def _labelled_eigensystem(params: LmgParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Jacobi 本征系统，按与闭式向量的最大重叠分配结构标签"""
    hamiltonian = lmg_hamiltonian(params)
    energies, vectors = diagonalize_oracle(hamiltonian)
    overlap = lmg_spectrum(params).vector_matrix.T @ vectors
    labels, columns = linear_sum_assignment(-(overlap ** 2))
    order = columns[np.argsort(labels)]
    return hamiltonian, energies[order], vectors[:, order]


def _boltzmann(energies: np.ndarray, temperature: float) -> np.ndarray:
    log_weights = -energies / temperature
    return np.exp(log_weights - logsumexp(log_weights))


def trace_cycle(hot_params: LmgParams, cold_params: LmgParams, baths: BathPair) -> CycleResult:
    """
    由密度矩阵逐阶段重算 Otto 循环（独立交叉校验）

    Q1 = Tr[H ρ1] - Tr[H ρ2']，Q2 = Tr[H' ρ2] - Tr[H' ρ1']，
    本征系统来自 Jacobi 求解器，占据概率用 logsumexp 单独计算。
    """
    h_hot, e_hot, v_hot = _labelled_eigensystem(hot_params)
    h_cold, e_cold, v_cold = _labelled_eigensystem(cold_params)
    p = _boltzmann(e_hot, baths.t_hot)
    p_prime = _boltzmann(e_cold, baths.t_cold)

    def rho(vectors: np.ndarray, populations: np.ndarray) -> np.ndarray:
        return vectors @ np.diag(populations) @ vectors.T

    rho_1 = rho(v_hot, p)  # 阶段 1 结束：热端热平衡
    rho_1_prime = rho(v_cold, p)  # 阶段 2 结束：绝热到冷端
    rho_2 = rho(v_cold, p_prime)  # 阶段 3 结束：冷端热平衡
    rho_2_prime = rho(v_hot, p_prime)  # 阶段 4 结束：绝热回热端

    q_hot = float(np.trace(h_hot @ rho_1) - np.trace(h_hot @ rho_2_prime))
    q_cold = float(np.trace(h_cold @ rho_2) - np.trace(h_cold @ rho_1_prime))
    return _assemble(q_hot, q_cold, q_hot + q_cold, baths)
