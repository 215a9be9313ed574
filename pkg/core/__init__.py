"""
核心模块
"""
from .exceptions import (
    LmgError, InvalidParameterError, BathOrderError, InvalidBracketError,
    LabelMismatchError, ProtocolVariantError, UnknownPresetError,
    NumericalError, ConvergenceError, BaselineZeroError, NoEnginePointError
)
from .models import (
    Regime, Axis, Objective, LmgParams, Spectrum, CrossingReport, BathPair,
    ThermalState, CycleResult, FieldSweep, CouplingSweep, Proportional,
    SweepSpec, SweepResult, MaxReport, Window, ProfileRow
)
from .spectrum import lmg_hamiltonian, lmg_spectrum, diagonalize_oracle, qubit_spectrum, find_level_crossing
from .thermo import gibbs, internal_energy, carnot_efficiency, otto_cycle, kieu_qubit_cycle, kieu_pwc
from .protocols import run_protocol, closed_form_efficiency, gap_ratio, work_ratio
from .sweep import sweep1d, maximize, gamma_profile, operating_window

__all__ = [
    "LmgError", "InvalidParameterError", "BathOrderError", "InvalidBracketError",
    "LabelMismatchError", "ProtocolVariantError", "UnknownPresetError",
    "NumericalError", "ConvergenceError", "BaselineZeroError", "NoEnginePointError",
    "Regime", "Axis", "Objective", "LmgParams", "Spectrum", "CrossingReport", "BathPair",
    "ThermalState", "CycleResult", "FieldSweep", "CouplingSweep", "Proportional",
    "SweepSpec", "SweepResult", "MaxReport", "Window", "ProfileRow",
    "lmg_hamiltonian", "lmg_spectrum", "diagonalize_oracle", "qubit_spectrum", "find_level_crossing",
    "gibbs", "internal_energy", "carnot_efficiency", "otto_cycle", "kieu_qubit_cycle", "kieu_pwc",
    "run_protocol", "closed_form_efficiency", "gap_ratio", "work_ratio",
    "sweep1d", "maximize", "gamma_profile", "operating_window",
]
