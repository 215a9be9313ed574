import numpy as np
import pytest

from core.exceptions import BaselineZeroError, InvalidParameterError, ProtocolVariantError
from core.models import BathPair, CouplingSweep, FieldSweep, LmgParams, Proportional, Regime
from core.protocols import (
    audit_proportional_pwc,
    closed_form_efficiency,
    coupling_pwc,
    endpoints,
    gap_ratio,
    run_protocol,
    work_ratio,
)
from core.thermo import kieu_qubit_cycle


def lmg(J: float, gamma: float, h: float) -> LmgParams:
    return LmgParams.create(J=J, gamma=gamma, h=h)


class TestEndpoints:
    def test_field_sweep(self):
        protocol = FieldSweep.create(J=2.0, gamma=0.0, h1=0.5, h2=0.25)
        assert endpoints(protocol) == (lmg(2.0, 0.0, 0.5), lmg(2.0, 0.0, 0.25))

    def test_proportional_uncoupled(self):
        protocol = Proportional.create(r=0.0, gamma=0.5, h1=0.5, h2=0.3)
        assert endpoints(protocol) == (lmg(0.0, 0.5, 0.5), lmg(0.0, 0.5, 0.3))

    def test_coupling_sweep(self):
        protocol = CouplingSweep.create(h=1.0, gamma=1.0, J1=1.0, J2=2.0)
        assert endpoints(protocol) == (lmg(1.0, 1.0, 1.0), lmg(2.0, 1.0, 1.0))

    def test_proportional_couplings(self):
        protocol = Proportional.create(r=3.0, gamma=0.0, h1=0.5, h2=0.25)
        assert (protocol.J1, protocol.J2) == (1.5, 0.75)

    def test_invalid_gamma(self):
        with pytest.raises(InvalidParameterError):
            FieldSweep.create(J=1.0, gamma=1.5, h1=0.5, h2=0.25)


class TestRunProtocol:
    def test_field_sweep_engine(self, field_sweep, baths):
        result = run_protocol(field_sweep, baths)
        assert result.regime is Regime.ENGINE
        assert result.work == pytest.approx(0.01086, abs=5e-5)

    def test_uncoupled_pair_doubles_qubit_work(self, baths):
        for gamma in (-1.0, 0.0, 0.7):
            result = run_protocol(Proportional.create(r=0.0, gamma=gamma, h1=0.5, h2=0.3), baths)
            assert result.work == pytest.approx(2.0 * kieu_qubit_cycle(0.5, 0.3, 1.0, 0.5).work, abs=1e-12)
            assert result.work == pytest.approx(9.279e-3, abs=1e-6)
            assert result.efficiency == pytest.approx(0.4, abs=1e-12)

    def test_coupling_boundary(self, baths):
        result = run_protocol(CouplingSweep.create(h=0.0, gamma=0.0, J1=2.0, J2=1.0), baths)
        assert abs(result.work) <= 1e-12

    def test_unchanged_field_gives_zero_work(self, baths):
        result = run_protocol(FieldSweep.create(J=1.3, gamma=0.4, h1=0.7, h2=0.7), baths)
        assert result.work == 0.0
        assert result.regime is Regime.NULL

    def test_unchanged_coupling_gives_zero_work(self, baths):
        result = run_protocol(CouplingSweep.create(h=0.4, gamma=-0.3, J1=1.1, J2=1.1), baths)
        assert result.work == 0.0


class TestSymmetries:
    @pytest.mark.parametrize("gamma", [-1.0, -0.4, 0.0, 0.6, 1.0])
    def test_field_sweep_coupling_sign(self, gamma, baths):
        protocol = FieldSweep.create(J=1.7, gamma=gamma, h1=0.5, h2=0.25)
        a = run_protocol(protocol, baths)
        b = run_protocol(protocol.replace(J=-1.7), baths)
        assert a.work == pytest.approx(b.work, abs=1e-9)
        assert a.regime is b.regime

    @pytest.mark.parametrize("gamma", [-1.0, 0.0, 0.5, 1.0])
    def test_coupling_sweep_joint_sign(self, gamma):
        baths = BathPair.create(t_hot=0.15, t_cold=0.1)
        protocol = CouplingSweep.create(h=1.0, gamma=gamma, J1=1.0, J2=2.5)
        a = run_protocol(protocol, baths)
        b = run_protocol(protocol.replace(J1=-1.0, J2=-2.5), baths)
        assert a.work == pytest.approx(b.work, abs=1e-9)

    @pytest.mark.parametrize("r", [0.5, 2.0, 7.5])
    def test_proportional_ratio_sign(self, r, baths):
        protocol = Proportional.create(r=r, gamma=-0.5, h1=0.5, h2=0.3)
        a = run_protocol(protocol, baths)
        b = run_protocol(protocol.replace(r=-r), baths)
        assert a.work == pytest.approx(b.work, abs=1e-9)
        assert a.q_hot == pytest.approx(b.q_hot, abs=1e-9)


class TestClosedFormEfficiency:
    def test_proportional(self):
        assert closed_form_efficiency(Proportional.create(r=3.7, gamma=-0.5, h1=0.5, h2=0.3)) == pytest.approx(0.4)

    def test_uncoupled_field_sweep(self):
        assert closed_form_efficiency(FieldSweep.create(J=0.0, gamma=0.0, h1=0.5, h2=0.25)) == pytest.approx(0.5)

    def test_coupled_field_sweep_has_none(self):
        assert closed_form_efficiency(FieldSweep.create(J=2.0, gamma=0.4, h1=0.1, h2=0.3)) is None

    def test_zero_field_coupling_sweep(self):
        assert closed_form_efficiency(CouplingSweep.create(h=0.0, gamma=0.3, J1=2.0, J2=1.0)) == pytest.approx(0.5)
        assert closed_form_efficiency(CouplingSweep.create(h=1.0, gamma=0.3, J1=2.0, J2=1.0)) is None
        assert closed_form_efficiency(CouplingSweep.create(h=0.0, gamma=0.3, J1=2.0, J2=-1.0)) is None
        assert closed_form_efficiency(CouplingSweep.create(h=0.0, gamma=0.3, J1=1.0, J2=2.0)) is None

    def test_reversed_fields_have_none(self):
        assert closed_form_efficiency(Proportional.create(r=1.0, gamma=0.0, h1=0.3, h2=0.5)) is None

    def test_matches_engine_cycle(self, baths):
        protocol = Proportional.create(r=3.7, gamma=-0.5, h1=0.5, h2=0.3)
        result = run_protocol(protocol, baths)
        assert result.regime is Regime.ENGINE
        assert result.efficiency == pytest.approx(closed_form_efficiency(protocol), abs=1e-9)


class TestGapRatio:
    @pytest.mark.parametrize(
        "r,gamma,h1,h2,alpha",
        [(1.0, 0.4, 0.5, 0.3, 5.0 / 3.0), (0.0, 0.0, 1.0, 0.5, 2.0), (5.0, -1.0, 0.5, 0.3, 5.0 / 3.0)],
    )
    def test_alpha(self, r, gamma, h1, h2, alpha):
        ratio = gap_ratio(Proportional.create(r=r, gamma=gamma, h1=h1, h2=h2))
        assert ratio.alpha == pytest.approx(alpha, rel=1e-12)
        assert ratio.max_deviation <= 1e-12

    def test_requires_proportional(self, field_sweep):
        with pytest.raises(ProtocolVariantError):
            gap_ratio(field_sweep)

    def test_requires_positive_fields(self):
        with pytest.raises(InvalidParameterError):
            gap_ratio(Proportional.create(r=1.0, gamma=0.0, h1=0.5, h2=0.0))


class TestWorkRatio:
    def test_uncoupled_ratio_is_two(self, baths):
        assert work_ratio(Proportional.create(r=0.0, gamma=0.3, h1=0.5, h2=0.3), baths) == pytest.approx(2.0, abs=1e-9)

    def test_ratio_sign_symmetry(self, baths):
        protocol = Proportional.create(r=4.0, gamma=-1.0, h1=0.5, h2=0.3)
        assert work_ratio(protocol, baths) == pytest.approx(work_ratio(protocol.replace(r=-4.0), baths), abs=1e-9)

    def test_zero_baseline(self, baths):
        with pytest.raises(BaselineZeroError):
            work_ratio(Proportional.create(r=1.0, gamma=0.0, h1=0.5, h2=0.5), baths)

    def test_negative_baseline(self, baths):
        with pytest.raises(BaselineZeroError):
            work_ratio(Proportional.create(r=1.0, gamma=0.0, h1=0.3, h2=0.5), baths)

    def test_requires_proportional(self, field_sweep, baths):
        with pytest.raises(ProtocolVariantError):
            work_ratio(field_sweep, baths)


def test_coupling_pwc():
    assert coupling_pwc(2.0, 1.0, 1.5, 0.5)
    assert not coupling_pwc(2.0, 1.0, 1.0, 0.5)
    with pytest.raises(InvalidParameterError):
        coupling_pwc(2.0, 0.0, 1.0, 0.5)


def test_proportional_pwc_audit():
    cases = [(0.5, 0.3, 1.0, 0.5), (0.5, 0.3, 0.8, 0.5), (0.3, 0.5, 1.0, 0.5)]
    audit = audit_proportional_pwc(np.linspace(-10.0, 10.0, 5), (-1.0, 0.0, 1.0), cases)
    assert audit.checked == 5 * 3 * 3
    assert audit.engine_cycles == 5 * 3
    assert audit.holds
