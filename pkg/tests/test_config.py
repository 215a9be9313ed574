import pytest

from config import Config, RunConfig
from core.exceptions import BathOrderError, InvalidParameterError
from core.models import CouplingSweep, FieldSweep, Proportional


class TestConfig:
    def test_defaults(self, monkeypatch):
        for name in ("LMG_SWEEP_STEPS", "LMG_SWEEP_WORKERS", "LMG_GAMMA_POINTS", "LMG_LOG_DIR", "LMG_LOG_LEVEL", "LMG_OUT_DIR"):
            monkeypatch.delenv(name, raising=False)
        settings = Config()
        assert settings.sweep.default_steps == 401
        assert settings.sweep.workers == 1
        assert settings.output.out_dir == "results"

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("LMG_SWEEP_STEPS", "11")
        monkeypatch.setenv("LMG_OUT_DIR", "elsewhere")
        settings = Config()
        assert settings.sweep.default_steps == 11
        assert settings.output.out_dir == "elsewhere"

    def test_bad_environment_value(self, monkeypatch):
        monkeypatch.setenv("LMG_SWEEP_WORKERS", "many")
        with pytest.raises(InvalidParameterError):
            Config()

    def test_with_overrides_copies(self):
        settings = Config()
        workers, log_dir = settings.sweep.workers, settings.log.log_dir
        updated = settings.with_overrides(workers=workers + 3, log_dir="tmp-logs")
        assert updated.sweep.workers == workers + 3
        assert updated.log.log_dir == "tmp-logs"
        assert (settings.sweep.workers, settings.log.log_dir) == (workers, log_dir)

    def test_unknown_override(self):
        with pytest.raises(InvalidParameterError):
            Config().with_overrides(colour="red")


class TestRunConfig:
    def test_range_parsing(self):
        rc = RunConfig.load(range="0:5", axis="J")
        assert rc.range == (0.0, 5.0)

    def test_negative_range(self):
        assert RunConfig.load(range="-5:-1").range == (-5.0, -1.0)

    @pytest.mark.parametrize("text", ["5", "a:b"])
    def test_bad_range(self, text):
        with pytest.raises(InvalidParameterError):
            RunConfig.load(range=text)

    def test_file_and_flags(self, tmp_path):
        path = tmp_path / "run.env"
        path.write_text("case=i\nJ=1\nh1=0.5\nh2=0.25\nT1=1\nT2=0.5\n", encoding="utf-8")
        rc = RunConfig.load(path, J=2.0)
        assert rc.J == 2.0
        assert rc.h1 == 0.5
        assert rc.protocol() == FieldSweep.create(J=2.0, gamma=0.0, h1=0.5, h2=0.25)

    def test_unknown_key_in_file(self, tmp_path):
        path = tmp_path / "run.env"
        path.write_text("case=i\ncolour=red\n", encoding="utf-8")
        with pytest.raises(InvalidParameterError, match="colour"):
            RunConfig.load(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            RunConfig.load(tmp_path / "absent.env")

    def test_steps_lower_bound(self):
        with pytest.raises(InvalidParameterError):
            RunConfig.load(steps=1)

    @pytest.mark.parametrize(
        "flags,kind",
        [
            ({"case": "i", "J": 1.0, "h1": 0.5, "h2": 0.25}, FieldSweep),
            ({"case": "ii", "h": 1.0, "J1": 1.0, "J2": 2.0}, CouplingSweep),
            ({"case": "iii", "r": 3.0, "h1": 0.5, "h2": 0.3}, Proportional),
        ],
    )
    def test_protocol_by_case(self, flags, kind):
        assert isinstance(RunConfig.load(**flags).protocol(), kind)

    def test_missing_case_parameter(self):
        with pytest.raises(InvalidParameterError, match="h2"):
            RunConfig.load(case="i", J=1.0, h1=0.5).protocol()

    def test_axis_parameter_taken_from_range(self):
        rc = RunConfig.load(case="i", h1=0.5, h2=0.25, T1=1.0, T2=0.5, axis="J", range="0:5", steps=11)
        spec = rc.sweep_spec(default_steps=401)
        assert spec.protocol.J == 0.0
        assert spec.steps == 11

    def test_default_steps(self):
        rc = RunConfig.load(case="i", J=1.0, h1=0.5, h2=0.25, T1=1.0, T2=0.5, axis="J", range="0:5")
        assert rc.sweep_spec(default_steps=21).steps == 21

    def test_bath_order(self):
        with pytest.raises(BathOrderError):
            RunConfig.load(T1=0.5, T2=1.0).baths()
