"""
自检套件

用独立的 Jacobi 求解器和密度矩阵迹公式交叉检验闭式谱与循环能量学，
并检查第一定律、Carnot 上界、J -> -J 对称性和单比特基准。
"""
from typing import Callable

import numpy as np
from loguru import logger

from .models import BathPair, CheckResult, CouplingSweep, FieldSweep, LmgParams, Proportional, Regime
from .protocols import closed_form_efficiency, run_protocol
from .spectrum import diagonalize_oracle, lmg_hamiltonian, lmg_spectrum
from .thermo import kieu_qubit_cycle, trace_cycle

DEFAULT_SEED = 20240
DEFAULT_SAMPLES = 50

ORACLE_TOL = 1e-10
IDENTITY_TOL = 1e-12


def _random_params(rng: np.random.Generator) -> LmgParams:
    return LmgParams.create(
        J=float(rng.uniform(-3.0, 3.0)),
        gamma=float(rng.uniform(-1.0, 1.0)),
        h=float(rng.uniform(0.0, 2.0)),
    )


def _random_baths(rng: np.random.Generator) -> BathPair:
    t_cold = float(rng.uniform(0.05, 1.0))
    return BathPair.create(t_hot=t_cold * float(rng.uniform(1.1, 4.0)), t_cold=t_cold)


def _check(suite: str, name: str, error: float, tol: float) -> CheckResult:
    return CheckResult(suite=suite, name=name, passed=bool(error <= tol), detail=f"err={error:.2e} tol={tol:.0e}")


def check_oracle(rng: np.random.Generator, samples: int) -> list[CheckResult]:
    """闭式能级与 Jacobi 求解器一致，且两者的本征残差都足够小"""
    results = []
    for i in range(samples):
        params = _random_params(rng)
        matrix = lmg_hamiltonian(params)
        spectrum = lmg_spectrum(params)
        energies, vectors = diagonalize_oracle(matrix)
        scale = max(1.0, float(np.abs(matrix).max()))

        results.append(_check("oracle", f"energies[{i}]", float(np.abs(np.sort(spectrum.energy_array) - energies).max()), ORACLE_TOL * scale))
        results.append(_check("oracle", f"residual[{i}]", float(np.abs(matrix @ vectors - vectors * energies).max()), ORACLE_TOL * scale))

        closed = spectrum.vector_matrix
        residual = float(np.abs(matrix @ closed - closed * spectrum.energy_array).max())
        results.append(_check("oracle", f"closed_form_residual[{i}]", residual, ORACLE_TOL * scale))
        results.append(_check("oracle", f"orthonormal[{i}]", float(np.abs(closed.T @ closed - np.eye(4)).max()), IDENTITY_TOL))
    return results


def check_identities(rng: np.random.Generator, samples: int) -> list[CheckResult]:
    """迹恒等式、第一定律、Carnot 上界与迹公式循环"""
    results = []
    for i in range(samples):
        params = _random_params(rng)
        scale = max(1.0, abs(params.J))
        expected = -params.J * (1.0 + params.gamma)
        results.append(_check("identity", f"trace[{i}]", abs(sum(lmg_spectrum(params).energies) - expected), IDENTITY_TOL * scale))
        results.append(_check("identity", f"matrix_trace[{i}]", abs(float(np.trace(lmg_hamiltonian(params))) - expected), IDENTITY_TOL * scale))

        protocol = FieldSweep.create(J=params.J, gamma=params.gamma, h1=params.h, h2=float(rng.uniform(0.0, 2.0)))
        baths = _random_baths(rng)
        cycle = run_protocol(protocol, baths)
        law = abs(cycle.work - (cycle.q_hot + cycle.q_cold))
        results.append(_check("identity", f"first_law[{i}]", law, IDENTITY_TOL * max(1.0, abs(cycle.q_hot) + abs(cycle.q_cold))))

        if cycle.regime is Regime.ENGINE and cycle.work > 1e-9:
            excess = max(0.0, cycle.efficiency - cycle.carnot)
            results.append(_check("identity", f"carnot_bound[{i}]", excess, 1e-9))

        hot, cold = protocol.endpoints()
        traced = trace_cycle(hot, cold, baths)
        mismatch = max(abs(traced.work - cycle.work), abs(traced.q_hot - cycle.q_hot), abs(traced.q_cold - cycle.q_cold))
        results.append(_check("identity", f"trace_cycle[{i}]", mismatch, ORACLE_TOL * scale))
    return results


def check_symmetries(rng: np.random.Generator, samples: int) -> list[CheckResult]:
    """情形 (i) 的 J -> -J、情形 (ii) 的 (J1, J2) -> (-J1, -J2) 与情形 (iii) 的 r -> -r 不改变功"""
    results = []
    for i in range(samples):
        baths = _random_baths(rng)
        J, gamma = float(rng.uniform(0.0, 3.0)), float(rng.uniform(-1.0, 1.0))
        h1, h2 = float(rng.uniform(0.0, 2.0)), float(rng.uniform(0.0, 2.0))
        field = FieldSweep.create(J=J, gamma=gamma, h1=h1, h2=h2)
        diff = abs(run_protocol(field, baths).work - run_protocol(field.replace(J=-J), baths).work)
        results.append(_check("symmetry", f"field_J_sign[{i}]", diff, IDENTITY_TOL))

        J1, J2 = float(rng.uniform(0.1, 3.0)), float(rng.uniform(0.1, 3.0))
        coupling = CouplingSweep.create(h=h1, gamma=gamma, J1=J1, J2=J2)
        diff = abs(run_protocol(coupling, baths).work - run_protocol(coupling.replace(J1=-J1, J2=-J2), baths).work)
        results.append(_check("symmetry", f"coupling_J_sign[{i}]", diff, 1e-9))

        r = float(rng.uniform(0.0, 10.0))
        prop = Proportional.create(r=r, gamma=gamma, h1=h1, h2=h2)
        diff = abs(run_protocol(prop, baths).work - run_protocol(prop.replace(r=-r), baths).work)
        results.append(_check("symmetry", f"proportional_r_sign[{i}]", diff, 1e-9))
    return results


def check_baselines(rng: np.random.Generator, samples: int) -> list[CheckResult]:
    """单比特 Kieu 循环与情形 (iii) 的闭式效率"""
    results = []
    w_q = kieu_qubit_cycle(0.5, 0.3, 1.0, 0.5).work
    results.append(_check("baseline", "kieu_work", abs(w_q - 0.0046394), 1e-7))

    for i in range(samples):
        baths = _random_baths(rng)
        h1 = float(rng.uniform(0.2, 2.0))
        h2 = h1 * float(rng.uniform(0.1, 0.95))
        protocol = Proportional.create(r=float(rng.uniform(-10.0, 10.0)), gamma=float(rng.uniform(-1.0, 1.0)), h1=h1, h2=h2)
        cycle = run_protocol(protocol, baths)
        # 功太小时 W/Q1 的相对舍入误差会被放大
        if cycle.regime is not Regime.ENGINE or cycle.work < 1e-6:
            continue
        results.append(_check("baseline", f"proportional_efficiency[{i}]", abs(cycle.efficiency - closed_form_efficiency(protocol)), 1e-9))
    return results


SUITES: dict[str, Callable[[np.random.Generator, int], list[CheckResult]]] = {
    "oracle": check_oracle,
    "identity": check_identities,
    "symmetry": check_symmetries,
    "baseline": check_baselines,
}


def run_selftest(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> list[CheckResult]:
    """按固定种子运行全部自检套件"""
    rng = np.random.default_rng(seed)
    results = []
    for name, suite in SUITES.items():
        checks = suite(rng, samples)
        failed = [c for c in checks if not c.passed]
        for check in failed:
            logger.warning(f"自检失败 {check.suite}/{check.name}: {check.detail}")
        logger.info(f"自检 {name}: {len(checks) - len(failed)}/{len(checks)} 通过")
        results.extend(checks)
    return results
