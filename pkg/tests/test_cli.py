"""Command-line surface: arguments, formats, exit codes, determinism."""

import json
import math
import os

import pytest
from click.testing import CliRunner

from igfields import asymptotics, bounds, quadfield
from igfields.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def _run(runner, args, **kwargs):
    return runner.invoke(main, args, catch_exceptions=False, **kwargs)


class TestSeedCatalog:
    def test_lists_groups_and_sequences(self, runner):
        res = _run(runner, ["--seed-catalog"])
        assert res.exit_code == 0
        assert "s3 6" in res.output
        assert "q8 8" in res.output
        assert "sprimen" in res.output

    def test_is_eager(self, runner):
        # Takes effect even when a subcommand and its args are present.
        res = _run(runner, ["--seed-catalog", "construct", "--n", "1"])
        assert res.exit_code == 0
        assert "built-in groups" in res.output


class TestConstruct:
    def test_n2_json(self, runner):
        res = _run(runner, ["construct", "--n", "2"])
        assert res.exit_code == 0
        got = json.loads(res.output)
        assert got["rn"] == 14
        assert got["P"] == [3, 5]
        assert got["Q"][0] == 7 and len(got["Q"]) == 14
        assert got["d"] == got["discriminant"]
        assert set(got) == {
            "n", "rn", "P", "Q", "r", "d", "discriminant", "genus",
            "ramified", "gs_threshold",
        }
        assert len(got["ramified"]) >= got["gs_threshold"]

    def test_n0_usage_error(self, runner):
        res = runner.invoke(main, ["construct", "--n", "0"])
        assert res.exit_code == 2

    def test_max_guard(self, runner):
        res = runner.invoke(main, ["construct", "--n", "30", "--max", "10"])
        assert res.exit_code == 2
        res = _run(runner, ["construct", "--n", "10", "--max", "10"])
        assert res.exit_code == 0

    def test_csv_schema(self, runner):
        res = _run(runner, ["construct", "--n", "3", "--format", "csv"])
        header, row = res.output.strip().splitlines()
        assert header == "n,rn,P,Q,r,d,discriminant,genus,ramified,gs_threshold"
        fields = row.split(",")
        assert fields[0] == "3"
        assert fields[2] == "3;5;7"
        assert int(fields[1]) == quadfield.rn_formula(3)

    def test_output_file(self, runner, tmp_path):
        target = tmp_path / "out.json"
        res = _run(runner, ["construct", "--n", "1", "--output", str(target)])
        assert res.exit_code == 0
        got = json.loads(target.read_text())
        assert got["rn"] == 12

    def test_output_dir_env(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("IGFIELDS_OUTPUT_DIR", str(tmp_path))
        res = _run(runner, ["construct", "--n", "1", "--output", "k1.json"])
        assert res.exit_code == 0
        assert (tmp_path / "k1.json").exists()
        assert not os.path.exists("k1.json")

    def test_deterministic_bytes(self, runner):
        a = _run(runner, ["construct", "--n", "4"]).output
        b = _run(runner, ["construct", "--n", "4"]).output
        assert a == b


class TestDeficiency:
    def test_matches_epsilon_identity(self, runner):
        res = _run(runner, ["deficiency", "--n", "10"])
        assert res.exit_code == 0
        got = json.loads(res.output)
        eps = asymptotics.epsilon_n(10, "nf")
        assert math.isclose(got["deficiency"], 1 - eps, rel_tol=1e-9)
        assert got["variant"] == "nf"
        assert 0 <= got["deficiency"] <= 1

    def test_csv_row(self, runner):
        res = _run(runner, ["deficiency", "--n", "10", "--format", "csv"])
        header, row = res.output.strip().splitlines()
        assert header == "variant,n,lhs,deficiency,alpha"
        fields = row.split(",")
        assert fields[0] == "nf" and fields[1] == "10"
        assert math.isclose(
            float(fields[2]) + float(fields[3]), 1.0, rel_tol=1e-12
        )

    def test_zero_splits_arch_only(self, runner):
        res = _run(runner, ["deficiency", "--n", "3", "--splits", "0"])
        got = json.loads(res.output)
        assert got["finite_term"] == 0
        assert [p["place"] for p in got["places"]] == ["R"]
        coeffs = bounds.arch_coefficients("nf")
        assert math.isclose(
            got["deficiency"],
            1 - got["places"][0]["phi"] * coeffs.a_R,
            rel_tol=1e-12,
        )

    def test_partial_splits_smaller_lhs(self, runner):
        full = json.loads(_run(runner, ["deficiency", "--n", "5"]).output)
        part = json.loads(
            _run(runner, ["deficiency", "--n", "5", "--splits", "2"]).output
        )
        assert part["lhs"] < full["lhs"]

    def test_grh_variant(self, runner):
        res = _run(runner, ["deficiency", "--n", "6", "--variant", "grh"])
        got = json.loads(res.output)
        assert got["variant"] == "grh"
        assert got["lhs"] > 0

    def test_ff_variant_rejected_on_number_field(self, runner):
        res = runner.invoke(main, ["deficiency", "--n", "3", "--variant", "ff"])
        assert res.exit_code == 2

    def test_splits_bounds_checked(self, runner):
        res = runner.invoke(main, ["deficiency", "--n", "3", "--splits", "4"])
        assert res.exit_code == 2
        res = runner.invoke(main, ["deficiency", "--n", "3", "--depth", "0"])
        assert res.exit_code == 2


class TestDensity:
    def test_group_mode(self, runner):
        res = _run(runner, ["density", "--group", "s3", "--subgroup", "(12)"])
        got = json.loads(res.output)
        assert got["value"] == "2/3"
        assert got["lower_bound"] == "1/3"

    def test_group_mode_csv(self, runner):
        res = _run(
            runner,
            ["density", "--group", "s3", "--subgroup", "(12)", "--format", "csv"],
        )
        lines = res.output.strip().splitlines()
        assert lines[0].split(",")[:3] == ["value", "lower_bound", "upper_bound"]
        assert lines[1].split(",")[:3] == ["2/3", "1/3", "2/3"]

    def test_group_mode_generator_list(self, runner):
        res = _run(runner, ["density", "--group", "s4", "--subgroup", "(12);(34)"])
        got = json.loads(res.output)
        assert got["value"] not in ("0", "1")

    def test_quad_mode(self, runner):
        res = _run(runner, ["density", "--quad", "105", "--x", "10000"])
        got = json.loads(res.output)
        assert set(got) == {"d", "x", "fraction", "split_count", "considered"}
        assert got["d"] == 105 and got["x"] == 10000
        assert abs(got["fraction"] - 0.5) < 0.05

    def test_norton_json(self, runner):
        res = _run(runner, ["density", "--norton", "3,1", "--x", "1000"])
        got = json.loads(res.output)
        assert set(got) == {"q", "a", "x", "partial_sum", "deviation"}
        assert math.isclose(
            got["deviation"],
            got["partial_sum"] - math.log(math.log(1000)) / 2,
            rel_tol=1e-12,
        )

    def test_norton_csv_ladder(self, runner):
        res = _run(
            runner,
            ["density", "--norton", "3,1", "--x", "100000", "--format", "csv"],
        )
        lines = res.output.strip().splitlines()
        assert lines[0] == "x,partial_sum,deviation"
        xs = [int(line.split(",")[0]) for line in lines[1:]]
        assert xs == [1000, 10000, 100000]

    def test_mode_required(self, runner):
        assert runner.invoke(main, ["density"]).exit_code == 2

    def test_modes_exclusive(self, runner):
        res = runner.invoke(
            main, ["density", "--group", "s3", "--quad", "105", "--x", "1000"]
        )
        assert res.exit_code == 2

    def test_quad_requires_x(self, runner):
        assert runner.invoke(main, ["density", "--quad", "105"]).exit_code == 2

    def test_unknown_group(self, runner):
        res = runner.invoke(main, ["density", "--group", "m11", "--subgroup", "e"])
        assert res.exit_code == 2

    def test_bad_norton_spec(self, runner):
        res = runner.invoke(main, ["density", "--norton", "3;1", "--x", "1000"])
        assert res.exit_code == 2
        res = runner.invoke(main, ["density", "--norton", "4,1", "--x", "1000"])
        assert res.exit_code == 2


class TestAsymptotics:
    def test_default_format_is_csv(self, runner):
        res = _run(runner, ["asymptotics", "--name", "sn", "--samples", "10,100"])
        lines = res.output.strip().splitlines()
        assert lines[0] == "n,computed,asymptote,ratio"
        assert len(lines) == 3

    def test_json_opt_in(self, runner):
        res = _run(
            runner,
            ["asymptotics", "--name", "sprimen", "--samples", "10", "--format",
             "json"],
        )
        got = json.loads(res.output)
        assert got["name"] == "sprimen"
        assert got["samples"][0]["n"] == 10

    def test_epsilon_uses_variant(self, runner):
        res = _run(
            runner,
            ["asymptotics", "--name", "epsilon", "--samples", "10,30",
             "--variant", "grh"],
        )
        lines = res.output.strip().splitlines()
        n, computed, asymptote, ratio = lines[1].split(",")
        assert math.isclose(
            float(computed), asymptotics.epsilon_n(10, "grh"), rel_tol=1e-12
        )

    def test_default_samples(self, runner):
        res = _run(runner, ["asymptotics", "--name", "epsilon"])
        xs = [int(line.split(",")[0]) for line in res.output.strip().splitlines()[1:]]
        assert xs == [10, 30, 100]

    def test_bad_samples(self, runner):
        res = runner.invoke(main, ["asymptotics", "--name", "sn", "--samples", "abc"])
        assert res.exit_code == 2
        res = runner.invoke(main, ["asymptotics", "--name", "sn", "--samples", "1"])
        assert res.exit_code == 2
        res = runner.invoke(
            main, ["asymptotics", "--name", "sn", "--samples", "30,10"]
        )
        assert res.exit_code == 2

    def test_deterministic_bytes(self, runner):
        args = ["asymptotics", "--name", "sn", "--samples", "10,100,1000"]
        assert _run(runner, args).output == _run(runner, args).output
