import json
import subprocess
import sys

import pytest

from gkverify import checks as checks_module
from gkverify.checks import CheckContext, CheckResult, REGISTRY, run_checks
from gkverify.cli import main
from gkverify.exactfield import Scalar
from gkverify.presets import (
    PRESET_NAMES,
    build_group,
    default_center_gram,
    default_field_d,
    parse_basis,
    parse_group_token,
    preset_pair,
)
from gkverify.report import render_json, render_text


class TestGroupTokens:
    def test_factors_and_torus(self):
        assert parse_group_token("A1,U1") == ((("A", 1),), 1)
        assert parse_group_token("U1,A1") == ((("A", 1),), 1)
        assert parse_group_token("T2") == ((), 2)
        assert parse_group_token("U1,U1") == ((), 2)
        assert parse_group_token("A1,A1") == ((("A", 1), ("A", 1)), 0)
        assert parse_group_token("A2") == ((("A", 2),), 0)
        assert parse_group_token("A1,T3,U1") == ((("A", 1),), 4)

    def test_x_separator_alias(self):
        assert parse_group_token("A1xU1") == parse_group_token("A1,U1")

    def test_rejects_unknown_factor(self):
        with pytest.raises(ValueError, match="unknown group factor"):
            parse_group_token("B2")
        with pytest.raises(ValueError, match="unknown group factor"):
            parse_group_token("A1,")

    def test_field_default(self):
        assert default_field_d(()) == 1
        assert default_field_d((("A", 1),)) == 1
        assert default_field_d((("A", 2),)) == 3

    def test_center_gram_default(self):
        assert default_center_gram((), 0, 1) is None
        pure = default_center_gram((), 2, 1)
        assert pure[0, 0] == Scalar.one() and not pure[0, 1]
        mixed = default_center_gram((("A", 1),), 1, 1)
        assert mixed[0, 0] == Scalar.from_rational(8)


class TestPresets:
    @pytest.mark.parametrize("token", ("T2", "A1,U1", "A1,A1", "A2"))
    def test_all_presets_build(self, token):
        setup = build_group(token)
        for name in PRESET_NAMES:
            pair = preset_pair(setup, name)
            assert pair.canonical == (name == "canonical")

    def test_induced_presets_differ_by_swap(self):
        setup = build_group("A1,U1")
        one = preset_pair(setup, "induced-pair-1")
        two = preset_pair(setup, "induced-pair-2")
        assert one.l_plus.subspace == two.l_minus.subspace
        assert one.l_minus.subspace == two.l_plus.subspace

    def test_unknown_preset(self):
        setup = build_group("T2")
        with pytest.raises(ValueError, match="unknown preset"):
            preset_pair(setup, "standard")

    def test_unsupported_shape(self):
        setup = build_group("T4")
        with pytest.raises(ValueError, match="no presets"):
            preset_pair(setup, "canonical")

    def test_parse_basis(self):
        vectors = parse_basis("1,0;0,i", 2, 1)
        assert vectors == [(Scalar.one(), Scalar.zero()),
                           (Scalar.zero(), Scalar.i())]
        with pytest.raises(ValueError, match="components"):
            parse_basis("1,0,0", 2, 1)

    def test_opposite_borel_keeps_flags_and_degree(self):
        from gkverify.genkahler import degree_canonical
        setup = build_group("A1,U1")
        standard = preset_pair(setup, "canonical")
        opposite = preset_pair(setup, "canonical", borel="opposite")
        assert opposite.canonical and opposite.induced
        assert opposite.l_plus.subspace != standard.l_plus.subspace
        lhs = degree_canonical(standard, "plus_metric")
        rhs = degree_canonical(opposite, "plus_metric")
        assert lhs.degree == rhs.degree

    def test_unknown_borel(self):
        setup = build_group("A1,U1")
        with pytest.raises(ValueError, match="borel"):
            preset_pair(setup, "canonical", borel="sideways")


@pytest.fixture(scope="module")
def a1u1_context():
    setup = build_group("A1,U1")
    return CheckContext(setup, preset_pair(setup, "canonical"))


class TestChecks:
    def test_all_pass_on_canonical(self, a1u1_context):
        results = run_checks(a1u1_context)
        assert [r.name for r in results] == sorted(REGISTRY)
        assert all(r.status == "pass" for r in results)

    def test_torus_restriction_skipped_on_induced(self):
        setup = build_group("A1,U1")
        ctx = CheckContext(setup, preset_pair(setup, "induced-pair-1"))
        results = run_checks(ctx, ["lem.torus-restriction"])
        assert results[0].status == "skipped"

    def test_subset_selection_is_sorted(self, a1u1_context):
        results = run_checks(a1u1_context, ["thm.degree", "lem.samelson"])
        assert [r.name for r in results] == ["lem.samelson", "thm.degree"]

    def test_unknown_names_rejected(self, a1u1_context):
        with pytest.raises(ValueError, match="unknown checks"):
            run_checks(a1u1_context, ["thm.degree", "thm.missing"])

    def test_failure_is_reported_not_raised(self, a1u1_context, monkeypatch):
        def broken(ctx):
            raise checks_module.CheckFailure("witness text")
        monkeypatch.setitem(REGISTRY, "tmp.broken", ("anchor", broken))
        results = run_checks(a1u1_context, ["tmp.broken"])
        assert results[0].status == "fail"
        assert results[0].witness == "witness text"

    def test_crash_is_reported_as_failure(self, a1u1_context, monkeypatch):
        def crash(ctx):
            raise KeyError("boom")
        monkeypatch.setitem(REGISTRY, "tmp.crash", ("anchor", crash))
        results = run_checks(a1u1_context, ["tmp.crash"])
        assert results[0].status == "fail"
        assert "KeyError" in results[0].witness


class TestReport:
    def _results(self):
        return [CheckResult("a.one", "anchor one", "pass", "fine", 0.51),
                CheckResult("b.two", "anchor two", "fail", "bad", 1.02)]

    def test_json_shape_and_summary(self):
        doc = json.loads(render_json({"group": "T2"}, self._results()))
        assert doc["tool"] == "gkverify"
        assert doc["summary"] == {"pass": 1, "fail": 1, "skipped": 0}
        assert [c["name"] for c in doc["checks"]] == ["a.one", "b.two"]
        assert "elapsed" not in doc["checks"][0]

    def test_timing_opt_in(self):
        doc = json.loads(render_json({}, self._results(), timing=True))
        assert doc["checks"][0]["elapsed"] == 0.51

    def test_text_contains_summary(self):
        text = render_text({"group": "T2"}, self._results())
        assert "summary: 1 pass, 1 fail, 0 skipped" in text


class TestCli:
    def run(self, argv, capsys):
        code = main(argv)
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    def test_full_torus_run(self, capsys):
        code, out, err = self.run(["T2"], capsys)
        assert code == 0 and not err
        doc = json.loads(out)
        assert doc["summary"]["fail"] == 0
        assert doc["summary"]["pass"] == len(REGISTRY)

    def test_deterministic_output(self, capsys):
        argv = ["A1,U1", "--checks", "thm.degree,lem.pure-spinor"]
        _, first, _ = self.run(argv, capsys)
        _, second, _ = self.run(argv, capsys)
        assert first == second

    def test_cache_does_not_change_output(self, capsys, tmp_path):
        argv = ["A1,U1", "--checks", "prop.dcl-spinor,cl.d-squared"]
        _, plain, _ = self.run(argv, capsys)
        cached = argv + ["--cache", str(tmp_path / "cache")]
        _, cold, _ = self.run(cached, capsys)
        _, warm, _ = self.run(cached, capsys)
        assert plain == cold == warm

    def test_explicit_torus_lines(self, capsys):
        code, out, _ = self.run(
            ["A1,U1", "--t10-plus", "0,0,i,-i", "--t10-minus", "0,0,i,i",
             "--checks", "thm.degree"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["config"]["t10_plus"] == "0,0,i,-i"
        assert "preset" not in doc["config"]

    def test_borel_flag_echoed(self, capsys):
        code, out, _ = self.run(
            ["A1,U1", "--borel", "opposite", "--checks", "thm.degree"],
            capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["config"]["borel"] == "opposite"

    def test_bad_borel_in_config_file(self, capsys, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("group = T2\nborel = sideways\n")
        code, _, err = self.run(["--config", str(path)], capsys)
        assert code == 2 and "borel" in err

    def test_text_format(self, capsys):
        code, out, _ = self.run(
            ["T2", "--checks", "thm.degree", "--format", "text"], capsys)
        assert code == 0
        assert out.startswith("gkverify")
        assert "degree 0" in out

    def test_timing_flag_adds_elapsed(self, capsys):
        _, out, _ = self.run(
            ["T2", "--checks", "thm.degree", "--timing"], capsys)
        assert "elapsed" in out

    def test_config_file_with_flag_override(self, capsys, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("# comment\ngroup = A1,U1\npreset = induced-pair-1\n"
                        "checks = prop.picard\nformat = text\n")
        code, out, _ = self.run(["--config", str(path)], capsys)
        assert code == 0 and "prop.picard" in out
        code, out, _ = self.run(
            ["--config", str(path), "--checks", "thm.degree"], capsys)
        assert "thm.degree" in out and "prop.picard" not in out

    def test_exit_two_on_config_errors(self, capsys, tmp_path):
        cases = (
            ["B9"],
            ["A1,U1", "--preset", "nope"],
            ["A1,U1", "--t10-plus", "0,0,i,-i"],
            ["A1,U1", "--checks", "thm.missing"],
            ["A1,U1", "--t10-plus", "0,0,i", "--t10-minus", "0,0,i"],
            [],
        )
        for argv in cases:
            code, _, err = self.run(argv, capsys)
            assert code == 2 and err.startswith("gkverify: error:")
        bad = tmp_path / "bad.conf"
        bad.write_text("no equals sign\n")
        code, _, err = self.run(["--config", str(bad)], capsys)
        assert code == 2 and "expected key=value" in err
        bad.write_text("mystery = 1\n")
        code, _, err = self.run(["--config", str(bad)], capsys)
        assert code == 2 and "unknown key" in err

    def test_exit_one_on_failing_check(self, capsys, monkeypatch):
        def broken(ctx):
            raise checks_module.CheckFailure("forced")
        monkeypatch.setitem(REGISTRY, "tmp.broken", ("anchor", broken))
        code, out, _ = self.run(
            ["T2", "--checks", "tmp.broken"], capsys)
        assert code == 1
        assert json.loads(out)["summary"]["fail"] == 1

    def test_invalid_torus_lines_are_config_errors(self, capsys):
        code, _, err = self.run(
            ["A1,U1", "--t10-plus", "1,0,0,0", "--t10-minus", "1,0,0,0",
             "--checks", "thm.degree"], capsys)
        assert code == 2

    def test_list_checks(self, capsys):
        code, out, _ = self.run(["--list-checks"], capsys)
        assert code == 0
        assert all(name in out for name in REGISTRY)

    def test_console_entry_point(self, tmp_path):
        run = subprocess.run(
            [sys.executable, "-m", "gkverify.cli", "T2",
             "--checks", "lem.samelson"],
            capture_output=True, text=True)
        assert run.returncode == 0
        assert json.loads(run.stdout)["summary"]["pass"] == 1
