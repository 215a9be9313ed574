"""
三种绝热变化协议

(i)   FieldSweep:    h1 -> h2 -> h1，J 固定
(ii)  CouplingSweep: J1 -> J2 -> J1，h 固定
(iii) Proportional:  J_i = r·h_i，r 固定

(h1, J1) 一端总是与热库 T1 热化；若要反向分配只能交换协议端点。
"""
import math
from itertools import product
from typing import Iterable, Optional, Sequence

from loguru import logger

from .exceptions import BaselineZeroError, InvalidParameterError, LmgError, ProtocolVariantError
from .models import (
    TOL_ZERO,
    BathPair,
    CouplingSweep,
    CycleResult,
    FieldSweep,
    GapRatio,
    LmgParams,
    Proportional,
    PwcAudit,
    PwcCounterexample,
    Regime,
)
from .spectrum import LEVEL_PAIRS, lmg_spectrum
from .thermo import kieu_pwc, kieu_qubit_cycle, otto_cycle

AnyProtocol = FieldSweep | CouplingSweep | Proportional


def endpoints(protocol: AnyProtocol) -> tuple[LmgParams, LmgParams]:
    """(热端参数, 冷端参数)"""
    return protocol.endpoints()


def run_protocol(protocol: AnyProtocol, baths: BathPair) -> CycleResult:
    """热端在 T1 热化、冷端在 T2 热化，按结构标签映射的 Otto 循环"""
    hot, cold = endpoints(protocol)
    return otto_cycle(
        (lmg_spectrum(hot), baths.t_hot),
        (lmg_spectrum(cold), baths.t_cold),
    )


def closed_form_efficiency(protocol: AnyProtocol) -> Optional[float]:
    """
    已知闭式解的效率

    - FieldSweep 且 J = 0、h1 > h2:          1 - h2/h1
    - CouplingSweep 且 h = 0、|J1| > |J2| 同号: 1 - J2/J1
    - Proportional 且 h1 > h2:              1 - h2/h1
    其它情况返回 None，不做外推。
    """
    if isinstance(protocol, FieldSweep):
        if protocol.J == 0.0 and protocol.h1 > protocol.h2:
            return 1.0 - protocol.h2 / protocol.h1
        return None
    if isinstance(protocol, CouplingSweep):
        J1, J2 = protocol.J1, protocol.J2
        if protocol.h == 0.0 and J1 * J2 > 0.0 and abs(J1) > abs(J2):
            return 1.0 - J2 / J1
        return None
    if isinstance(protocol, Proportional):
        if protocol.h1 > protocol.h2:
            return 1.0 - protocol.h2 / protocol.h1
        return None
    return None


def _require_proportional(protocol: AnyProtocol) -> Proportional:
    if not isinstance(protocol, Proportional):
        raise ProtocolVariantError(f"需要 Proportional 协议, 得到 {type(protocol).__name__}")
    return protocol


def gap_ratio(protocol: AnyProtocol) -> GapRatio:
    """
    情形 (iii) 中所有能隙的公共缩放比 α = h1/h2

    偏差定义为 |ΔE_mn - α ΔE'_mn| 除以热端谱宽（最大能隙），
    避免近零能隙上的相消误差被放大。
    """
    protocol = _require_proportional(protocol)
    if protocol.h1 <= 0.0 or protocol.h2 <= 0.0:
        raise InvalidParameterError(f"能隙比要求 h1, h2 > 0: h1={protocol.h1}, h2={protocol.h2}")

    hot, cold = (lmg_spectrum(p) for p in endpoints(protocol))
    alpha = protocol.h1 / protocol.h2
    gaps_hot = [hot.energy(m) - hot.energy(n) for m, n in LEVEL_PAIRS]
    gaps_cold = [cold.energy(m) - cold.energy(n) for m, n in LEVEL_PAIRS]
    width = max(abs(g) for g in gaps_hot)

    if width == 0.0:
        deviation = 0.0
    else:
        deviation = max(abs(g - alpha * gc) for g, gc in zip(gaps_hot, gaps_cold)) / width
    return GapRatio(alpha=alpha, max_deviation=deviation)


def work_ratio(protocol: AnyProtocol, baths: BathPair) -> float:
    """协作功比 W / w_q，w_q 为单比特在同一循环中的功"""
    protocol = _require_proportional(protocol)
    baseline = kieu_qubit_cycle(protocol.h1, protocol.h2, baths.t_hot, baths.t_cold).work
    if baseline <= TOL_ZERO:
        raise BaselineZeroError(f"单比特基准功 w_q={baseline:.3e} 不为正, 功比无定义")
    return run_protocol(protocol, baths).work / baseline


def coupling_pwc(J1: float, J2: float, t_hot: float, t_cold: float) -> bool:
    """h = 0 时情形 (ii) 的正功条件 T1 > (J1/J2) T2"""
    if not all(math.isfinite(v) for v in (J1, J2, t_hot, t_cold)):
        raise InvalidParameterError("正功条件的参数必须有限")
    if J2 == 0.0:
        raise InvalidParameterError("J2 不能为 0")
    return t_hot > (J1 / J2) * t_cold


def audit_proportional_pwc(
    r_values: Iterable[float],
    gamma_values: Iterable[float],
    cases: Sequence[tuple[float, float, float, float]],
) -> PwcAudit:
    """
    情形 (iii) 正功条件猜想的数值审计

    对网格上每个热机循环检查 T1 > (h1/h2) T2 且 h1 > h2，
    记录反例而不断言。

    Args:
        r_values: 相对耦合强度
        gamma_values: 各向异性参数
        cases: (h1, h2, T1, T2) 组合
    """
    checked = 0
    engines = 0
    counterexamples = []
    for r, gamma, (h1, h2, t_hot, t_cold) in product(list(r_values), list(gamma_values), cases):
        protocol = Proportional.create(r=float(r), gamma=float(gamma), h1=h1, h2=h2)
        baths = BathPair.create(t_hot=t_hot, t_cold=t_cold)
        try:
            result = run_protocol(protocol, baths)
        except LmgError as exc:
            logger.warning(f"审计点 {protocol} 求值失败: {exc}")
            continue
        checked += 1
        if result.regime is not Regime.ENGINE:
            continue
        engines += 1
        if not (h2 > 0.0 and h1 > h2 and kieu_pwc(h1, h2, t_hot, t_cold)):
            counterexamples.append(PwcCounterexample(protocol=protocol, baths=baths, work=result.work))

    if counterexamples:
        logger.warning(f"正功条件审计发现 {len(counterexamples)} 个反例")
    logger.info(f"正功条件审计: {checked} 个循环, {engines} 个热机, {len(counterexamples)} 个反例")
    return PwcAudit(checked=checked, engine_cycles=engines, counterexamples=tuple(counterexamples))
