"""
Tests for the command-line front-end: output and exit codes.
"""

import json

import pytest

from qcone.cli import EXIT_OK, EXIT_UNEXPECTED, EXIT_USAGE, main


def _json(capsys):
    return json.loads(capsys.readouterr().out)


class TestNormalize:
    def test_commuting_conjugates(self, capsys):
        assert main(["normalize", "--preset", "twistor", "xb x - x xb"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "0"

    def test_json(self, capsys):
        assert main(["--format", "json", "normalize", "--preset", "qplane-short", "y x"]) == EXIT_OK
        payload = _json(capsys)
        assert payload == {"preset": "qplane-short", "input": "y x", "normal_form": "q^-1 x y"}

    def test_parse_error(self, capsys):
        assert main(["normalize", "--preset", "twistor", "x + + y"]) == EXIT_USAGE
        assert "parse error" in capsys.readouterr().err

    def test_long_word(self, capsys):
        expr = " ".join(["y"] * 40 + ["x"] * 40)
        assert main(["normalize", "--preset", "qplane-short", expr]) == EXIT_OK
        expected = "q^-1600 " + " ".join(["x"] * 40 + ["y"] * 40)
        assert capsys.readouterr().out.strip() == expected

    def test_unknown_token(self):
        assert main(["normalize", "--preset", "twistor", "q^(1/2) z"]) == EXIT_USAGE

    def test_unknown_preset(self):
        with pytest.raises(SystemExit) as exc_info:
            main(["normalize", "--preset", "nowhere", "x"])
        assert exc_info.value.code == EXIT_USAGE


class TestVerify:
    def test_group(self, capsys):
        assert main(["--format", "json", "verify", "--group", "epsilon"]) == EXIT_OK
        reports = _json(capsys)
        assert [r["check"] for r in reports] == ["epsilon-contract", "epsilon-null"]
        assert all(set(r) >= {"check", "status", "witnesses"} for r in reports)

    def test_printed_typo_is_unexpected(self, capsys):
        assert main(["verify", "--preset", "coord-deriv", "--printed-typo"]) == EXIT_UNEXPECTED
        assert "relations-coord-deriv" in capsys.readouterr().out

    def test_degree_cap_below_three(self):
        with pytest.raises(SystemExit) as exc_info:
            main(["verify", "--max-degree", "2"])
        assert exc_info.value.code == EXIT_USAGE

    def test_preset_and_all_are_exclusive(self):
        with pytest.raises(SystemExit) as exc_info:
            main(["verify", "--all", "--preset", "twistor"])
        assert exc_info.value.code == EXIT_USAGE

    @pytest.mark.slow
    @pytest.mark.integration
    def test_all_is_green_and_deterministic(self, capsys):
        assert main(["--format", "json", "verify", "--all"]) == EXIT_OK
        first = capsys.readouterr().out
        assert main(["--format", "json", "verify", "--all"]) == EXIT_OK
        assert capsys.readouterr().out == first


class TestConfluence:
    def test_confluent_preset(self, capsys):
        assert main(["confluence", "--preset", "nullvector"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("[pass] confluence-nullvector")

    def test_registered_finding(self, capsys):
        assert main(["--format", "json", "confluence", "--preset", "coord-deriv"]) == EXIT_OK
        report = _json(capsys)
        assert report["status"] == "fail"
        assert report["expected"] == "fail"
        assert any(w["input"].startswith("D22 X22 X11") for w in report["witnesses"])


class TestSolveExponents:
    def test_family(self, capsys):
        assert main(["--format", "json", "solve-exponents"]) == EXIT_OK
        payload = _json(capsys)
        assert payload["free"] == ["n"]
        assert len(payload["reduced"]) == 3

    def test_with_reality(self, capsys):
        assert main(["solve-exponents", "--with-reality"]) == EXIT_OK
        assert "n = 0, m = 1, k = -1, l = 0" in capsys.readouterr().out

    def test_with_star_closure(self, capsys):
        assert main(["--format", "json", "solve-exponents", "--with-star-closure"]) == EXIT_OK
        assert _json(capsys)["solution"] == {"n": "0", "m": "1", "k": "-1", "l": "0"}


class TestLimit:
    def test_box_first_order(self, capsys):
        assert main(["--format", "json", "limit", "--order", "1", "box"]) == EXIT_OK
        parts = _json(capsys)["parts"]
        assert parts == {"h^0": "D11 D22 - D12 D21", "h^1": "-2 i D12 D21"}

    def test_momenta(self, capsys):
        assert main(["--format", "json", "limit", "--order", "0", "--momenta"]) == EXIT_OK
        assert _json(capsys)["parts"] == {"h^0": "-P11 P22 + P12 P21"}

    def test_expression(self, capsys):
        assert main(["limit", "--order", "3", "D11"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "h^0: D11"

    def test_negative_order(self):
        with pytest.raises(SystemExit):
            main(["limit", "--order", "-1"])


class TestListPresets:
    def test_lists_every_preset(self, capsys):
        assert main(["--format", "json", "list-presets"]) == EXIT_OK
        presets = _json(capsys)
        assert len(presets) == 9
        twistor = next(p for p in presets if p["name"] == "twistor")
        assert {g["token"] for g in twistor["generators"]} >= {"x", "xb", "dyb"}

    def test_text_mentions_dotted_labels(self, capsys):
        assert main(["list-presets"]) == EXIT_OK
        assert "X12 = x^{1 2" in capsys.readouterr().out


class TestErrorBoundary:
    """Only input errors become exit code 2; internal errors propagate."""

    def test_internal_value_error_is_not_a_usage_error(self, monkeypatch):
        def broken(*args, **kwargs):
            raise ValueError("broken solver")

        monkeypatch.setattr("qcone.cli.solve", broken)
        with pytest.raises(ValueError, match="broken solver"):
            main(["solve-exponents"])

    def test_internal_key_error_propagates(self, monkeypatch):
        def broken(*args, **kwargs):
            raise KeyError("missing rule")

        monkeypatch.setattr("qcone.cli.normalize", broken)
        with pytest.raises(KeyError):
            main(["normalize", "--preset", "qplane-short", "y x"])
