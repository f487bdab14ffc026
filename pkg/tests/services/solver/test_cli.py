"""
Tests for the solver CLI entrypoint.
"""
import json
from pathlib import Path
from unittest.mock import Mock

import pytest

from services.solver.src import cli
from shared.utils.errors import BudgetError, PrecisionError, ReductionError


def _fake_service(monkeypatch, certificate=None, error=None):
    service = Mock()
    if error is not None:
        service.verify_and_save.side_effect = error
        service.verify.side_effect = error
    else:
        service.verify_and_save.return_value = (certificate, Path("certificates/fpp.json"))
        service.verify.return_value = certificate
    factory = Mock(return_value=service)
    monkeypatch.setattr(cli, "VerificationService", factory)
    return factory, service


def _stored_certificate(tmp_path) -> Path:
    config = {
        "pair": {"equation": "fpp"},
        "precision": 256,
        "precision_cap": 10000,
        "k_max": 400,
        "n_max": 100,
        "m_guard": 20,
        "n_guard": 100,
        "convergent_start_index": 74,
        "extra_convergents": 12,
    }
    path = tmp_path / "fpp.json"
    path.write_text(json.dumps({"format_version": "1", "config": config}))
    return path


class TestArgumentParsing:
    def test_missing_subcommand(self):
        assert cli.run_cli([]) == cli.EXIT_USAGE

    def test_unknown_flag(self):
        assert cli.run_cli(["verify", "--bogus"]) == cli.EXIT_USAGE

    def test_unknown_equation(self):
        assert cli.run_cli(["verify", "--equation", "custom"]) == cli.EXIT_USAGE

    def test_non_positive_budget(self):
        assert cli.run_cli(["search", "--equation", "fpp", "--k-max", "0"]) == cli.EXIT_USAGE

    def test_main_exits_with_code(self):
        with pytest.raises(SystemExit) as exc_info:
            cli.main(["--bogus"])
        assert exc_info.value.code == cli.EXIT_USAGE


class TestVerifyCommand:
    def test_success(self, monkeypatch, capsys):
        certificate = Mock()
        certificate.stage3.k_values = [1, 2, 3, 5, 12]
        factory, _ = _fake_service(monkeypatch, certificate=certificate)

        assert cli.run_cli(["verify", "--equation", "fpp", "--convergent-index", "74"]) == 0
        output = json.loads(capsys.readouterr().out)
        assert output["k_values"] == [1, 2, 3, 5, 12]
        assert factory.call_args.kwargs["convergent_start_index"] == 74

    def test_needs_a_pair(self, monkeypatch):
        _fake_service(monkeypatch, certificate=Mock())
        assert cli.run_cli(["verify"]) == cli.EXIT_VALIDATION

    def test_invalid_custom_pair(self, monkeypatch, tmp_path):
        _, service = _fake_service(monkeypatch, certificate=Mock())
        config = tmp_path / "pair.json"
        config.write_text(json.dumps({"U": {"a": 1, "b": 1}, "V": {"a": 4, "b": 1}}))
        assert cli.run_cli(["verify", "--config", str(config)]) == cli.EXIT_VALIDATION
        service.verify_and_save.assert_not_called()

    @pytest.mark.parametrize(
        "error",
        [
            PrecisionError("cap reached"),
            BudgetError("n too large"),
            ReductionError("no convergent", label="gamma1/positive"),
        ],
    )
    def test_uncertified(self, monkeypatch, error):
        _fake_service(monkeypatch, error=error)
        assert cli.run_cli(["verify", "--equation", "fpp"]) == cli.EXIT_UNCERTIFIED

    def test_unexpected_failure(self, monkeypatch):
        _fake_service(monkeypatch, error=RuntimeError("boom"))
        assert cli.run_cli(["verify", "--equation", "ffp"]) == cli.EXIT_USAGE


class TestSearchAndBoundsCommands:
    def test_search(self, capsys):
        assert cli.run_cli(["search", "--equation", "ffp", "--k-max", "20", "--n-max", "10"]) == 0
        solutions = json.loads(capsys.readouterr().out)
        assert sorted({s["k"] for s in solutions}) == [1, 2, 3, 7]
        assert all(isinstance(s["value"], str) for s in solutions)

    def test_bounds(self, capsys):
        assert cli.run_cli(["bounds", "--equation", "fpp"]) == 0
        bounds = json.loads(capsys.readouterr().out)
        assert int(bounds["n_bound"]) <= 5 * 10**30
        assert bounds["d_multiple"] == 4


class TestReduceCommand:
    def test_published_first_form(self, capsys):
        argv = [
            "reduce", "--tau-pair", "fpp", "--form", "first",
            "--M", str(3 * 10**31), "--convergent-index", "74",
        ]
        assert cli.run_cli(argv) == 0
        outcomes = json.loads(capsys.readouterr().out)
        assert [o["exponent_bound"] for o in outcomes] == [49, 49]
        assert {o["convergent_index"] for o in outcomes} == {74}

    def test_second_form_family(self, capsys):
        argv = [
            "reduce", "--tau-pair", "fpp", "--form", "second", "--m-max", "5",
            "--M", str(3 * 10**31), "--convergent-index", "74",
        ]
        assert cli.run_cli(argv) == 0
        families = json.loads(capsys.readouterr().out)
        assert [len(f["members"]) for f in families] == [5, 5]
        assert all(f["max_bound"] <= 53 for f in families)


class TestReplayCommand:
    def test_identical(self, monkeypatch, tmp_path, capsys):
        path = _stored_certificate(tmp_path)
        factory, service = _fake_service(monkeypatch, certificate=Mock())
        monkeypatch.setattr(cli.CertificateRepository, "matches", lambda self, c, p: True)

        assert cli.run_cli(["replay", "--certificate", str(path)]) == cli.EXIT_OK
        assert json.loads(capsys.readouterr().out)["identical"] is True
        kwargs = factory.call_args.kwargs
        assert kwargs["convergent_start_index"] == 74
        assert kwargs["settings"].m_guard == 20
        service.verify.assert_called_once()

    def test_differs(self, monkeypatch, tmp_path):
        path = _stored_certificate(tmp_path)
        _fake_service(monkeypatch, certificate=Mock())
        monkeypatch.setattr(cli.CertificateRepository, "matches", lambda self, c, p: False)
        assert cli.run_cli(["replay", "--certificate", str(path)]) == cli.EXIT_UNCERTIFIED

    def test_not_a_certificate(self, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("[]")
        assert cli.run_cli(["replay", "--certificate", str(path)]) == cli.EXIT_VALIDATION

    def test_missing_file(self, tmp_path):
        assert cli.run_cli(["replay", "--certificate", str(tmp_path / "x.json")]) == 2
