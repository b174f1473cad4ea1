import pytest

from courantkit import cli
from courantkit.cli import build_flags, build_parser
from courantkit.config import Settings, load_settings
from courantkit.runner import ReportDocument


class TestSettings:
    def test_defaults(self, monkeypatch):
        for name in ("MAX_DEGREE", "WORKERS", "SEED", "SAMPLES", "LOG_LEVEL"):
            monkeypatch.delenv(f"COURANTKIT_{name}", raising=False)
        assert load_settings() == Settings()

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("COURANTKIT_WORKERS", "4")
        monkeypatch.setenv("COURANTKIT_LOG_LEVEL", "debug")
        settings = load_settings()
        assert settings.workers == 4
        assert settings.log_level == "DEBUG"

    def test_overrides_win(self, monkeypatch):
        monkeypatch.setenv("COURANTKIT_SEED", "7")
        assert load_settings(seed=3).seed == 3
        assert load_settings(seed=None).seed == 7

    @pytest.mark.parametrize("name,value", [("COURANTKIT_WORKERS", "many"), ("COURANTKIT_MAX_DEGREE", "-1")])
    def test_invalid(self, monkeypatch, name, value):
        monkeypatch.setenv(name, value)
        with pytest.raises(ValueError):
            load_settings()

    def test_negative_samples(self):
        with pytest.raises(ValueError):
            load_settings(samples=-1)


class TestFlagsFromSettings:
    def test_samples_from_environment(self, monkeypatch):
        monkeypatch.setenv("COURANTKIT_SAMPLES", "3")
        args = build_parser().parse_args(["courant-check", "models/plane.model"])
        flags = build_flags(args, load_settings(samples=args.samples))
        assert flags.samples == 3

    def test_flag_wins(self, monkeypatch):
        monkeypatch.setenv("COURANTKIT_SAMPLES", "3")
        args = build_parser().parse_args(["anomaly", "m.model", "--samples", "1", "--seed", "9"])
        flags = build_flags(args, load_settings(samples=args.samples, seed=args.seed))
        assert (flags.samples, flags.seed) == (1, 9)

    def test_main_forwards_settings(self, monkeypatch, models_dir):
        seen = []

        def capture(doc, command, flags, echo):
            seen.append(flags)
            return ReportDocument(echo)

        monkeypatch.setenv("COURANTKIT_SAMPLES", "2")
        monkeypatch.setattr(cli, "run_command", capture)
        assert cli.main(["validate", str(models_dir / "plane.model")]) == 0
        assert seen[0].samples == 2
