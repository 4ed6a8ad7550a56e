"""Command-line interface: commands, exit codes, CSV format, determinism."""

import csv
import json
import math

import numpy as np
import pytest

from superpos.cli import RunConfig, main
from superpos.states import DensityMatrix, make_state, save_state

FAST = ["--restarts", "3", "--max-iters", "700"]


@pytest.fixture
def bell_file(tmp_path):
    path = tmp_path / "bell.json"
    save_state(make_state("psi_minus"), path)
    return str(path)


@pytest.fixture
def ladder_file(tmp_path):
    path = tmp_path / "fig1.json"
    save_state(make_state("fig1_state", 0.2), path)
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestRunConfig:
    def test_json_round_trip(self):
        config = RunConfig(command="sweep", family="fig2", points=7, seed=3)
        again = RunConfig.from_json(config.to_json())
        assert again == config

    def test_rejects_unknown_fields(self):
        with pytest.raises(ValueError):
            RunConfig.from_json('{"bogus": 1}')

    def test_config_file_overrides_flags(self, tmp_path, bell_file, capsys):
        override = tmp_path / "conf.json"
        override.write_text(json.dumps({"restarts": 2, "seed": 9}))
        code = main(
            ["measure", "--state", bell_file, "--restarts", "30", "--config", str(override)]
        )
        assert code == 0
        assert "value,converged" in capsys.readouterr().out


class TestMeasure:
    def test_bell_nonlocal(self, bell_file, capsys):
        code = main(["measure", "--state", bell_file, *FAST])
        out = capsys.readouterr().out.strip().splitlines()
        assert code == 0
        assert out[0] == "value,converged,variant,wall_time_s"
        value, converged, variant, _ = out[1].split(",")
        assert abs(float(value) - 1.0) < 1e-6
        assert converged == "true"
        assert variant == "root"

    def test_ladder_local_sum(self, ladder_file, capsys):
        code = main(
            ["measure", "--state", ladder_file, "--kind", "ls", "--block", "0",
             "--variant", "sum", *FAST]
        )
        out = capsys.readouterr().out.strip().splitlines()
        assert code == 0
        assert abs(float(out[1].split(",")[0]) - 0.583987) < 1e-5

    def test_w_state_partition(self, tmp_path, capsys):
        path = tmp_path / "w.json"
        save_state(make_state("w_state"), path)
        code = main(
            ["measure", "--state", str(path), "--partition", "0|1|2", *FAST]
        )
        out = capsys.readouterr().out.strip().splitlines()
        assert code == 0
        assert abs(float(out[1].split(",")[0]) - 1.1547) < 1e-3

    def test_catalog_name_input(self, capsys):
        code = main(["measure", "--name", "schmidt_state:0.6", *FAST])
        out = capsys.readouterr().out.strip().splitlines()
        assert code == 0
        assert abs(float(out[1].split(",")[0]) - 0.96) < 1e-6

    def test_out_file_has_no_wall_time(self, tmp_path, bell_file):
        out = tmp_path / "row.csv"
        main(["measure", "--state", bell_file, "--out", str(out), *FAST])
        rows = read_csv(out)
        assert set(rows[0]) == {"value", "converged", "variant"}

    def test_missing_state_exits_one(self, capsys):
        assert main(["measure", "--state", "/nonexistent.json"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_invalid_state_file_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"dims": [2], "amps": [[1.2, 0.0], [0.0, 0.0]]}')
        assert main(["measure", "--state", str(bad)]) == 1
        assert "normalization" in capsys.readouterr().err

    def test_ls_without_block_exits_one(self, bell_file, capsys):
        assert main(["measure", "--state", bell_file, "--kind", "ls"]) == 1

    def test_non_convergence_exits_two(self, ladder_file, capsys):
        code = main(
            ["measure", "--state", ladder_file, "--kind", "ls", "--block", "0",
             "--restarts", "1", "--max-iters", "1"]
        )
        assert code == 2


class TestSweep:
    def test_unknown_family_exits_one(self, capsys):
        assert main(["sweep", "--family", "fig9"]) == 1
        assert "unknown sweep family" in capsys.readouterr().err

    def test_bad_grid_exits_one(self, capsys):
        assert main(["sweep", "--family", "fig1", "--points", "0"]) == 1

    def test_fig2_rows_match_concurrence(self, tmp_path):
        out = tmp_path / "fig2.csv"
        code = main(
            ["sweep", "--family", "fig2", "--points", "8", "--out", str(out), *FAST]
        )
        assert code == 0
        rows = read_csv(out)
        assert len(rows) == 8
        for row in rows:
            alpha = float(row["alpha"])
            assert abs(float(row["nls"]) - float(row["closed_form"])) < 1e-6
            expected = 2 * alpha * math.sqrt(1 - alpha**2)
            assert abs(float(row["closed_form"]) - expected) < 1e-12

    def test_fig1_surfaces_both_variants(self, tmp_path):
        out = tmp_path / "fig1.csv"
        code = main(
            ["sweep", "--family", "fig1", "--points", "4", "--out", str(out), *FAST]
        )
        assert code == 0
        rows = read_csv(out)
        for row in rows:
            assert abs(float(row["ls_sum_of_pairroots"]) - float(row["closed_form_sum"])) < 1e-5
            assert abs(float(row["ls_root_of_pairsum"]) - float(row["closed_form_root"])) < 1e-5
            # The two printed forms genuinely disagree away from the edges.
        mid = rows[1]
        assert float(mid["closed_form_sum"]) > float(mid["closed_form_root"]) + 0.01

    def test_byte_determinism(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        args = ["sweep", "--family", "ghz_like", "--points", "5", "--seed", "7", *FAST]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_parallel_jobs_match_serial(self, tmp_path):
        serial = tmp_path / "serial.csv"
        parallel = tmp_path / "parallel.csv"
        args = ["sweep", "--family", "fig2", "--points", "6", *FAST]
        assert main(args + ["--out", str(serial)]) == 0
        assert main(args + ["--out", str(parallel), "--jobs", "3"]) == 0
        assert serial.read_bytes() == parallel.read_bytes()


class TestTable1:
    def test_values_and_format(self, tmp_path, capsys):
        out = tmp_path / "table1.csv"
        code = main(["table1", "--out", str(out), "--restarts", "4"])
        assert code == 0
        stdout = capsys.readouterr().out
        assert "NLS in A|B|C" in stdout
        rows = read_csv(out)
        assert len(rows) == 10
        for row in rows:
            assert abs(float(row["ghz"]) - 1.0) < 1e-4
            if row["superposition"] == "NLS in A|B|C":
                assert abs(float(row["w"]) - 1.1547) < 1e-3
            else:
                assert abs(float(row["w"]) - 0.9428) < 1e-3


class TestCertify:
    def test_rsp_state(self, tmp_path, capsys):
        path = tmp_path / "rsp.json"
        save_state(make_state("rsp_state"), path)
        witness = tmp_path / "witness.json"
        code = main(["certify", "--state", str(path), "--out", str(witness)])
        assert code == 0
        out = capsys.readouterr().out
        assert "CQ(side A): CERTIFIED_NONZERO" in out
        assert "classical: CERTIFIED_NONZERO" in out
        assert "PPT: satisfied" in out
        data = json.loads(witness.read_text())
        assert data["CQ(side A)"]["verdict"] == "CERTIFIED_NONZERO"

    def test_werner_ppt_violation(self, tmp_path, capsys):
        path = tmp_path / "werner.json"
        save_state(make_state("werner", 0.5), path)
        code = main(["certify", "--state", str(path)])
        assert code == 0
        out = capsys.readouterr().out
        assert "PPT: violated (min eig -0.125)" in out

    def test_classical_diagonal(self, tmp_path, capsys):
        path = tmp_path / "classical.json"
        save_state(DensityMatrix((2, 2), np.diag([0.5, 0, 0, 0.5]).astype(complex)), path)
        code = main(["certify", "--state", str(path)])
        assert code == 0
        assert "classical: CERTIFIED_ZERO" in capsys.readouterr().out


class TestSchmidt:
    def test_w_state_cut(self, tmp_path, capsys):
        path = tmp_path / "w.json"
        save_state(make_state("w_state"), path)
        code = main(["schmidt", "--state", str(path), "--partition", "01|2"])
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "k,coefficient"
        coeffs = [float(line.split(",")[1]) for line in lines[1:]]
        assert abs(coeffs[0] - math.sqrt(2 / 3)) < 1e-12
        assert abs(coeffs[1] - math.sqrt(1 / 3)) < 1e-12

    def test_rejects_density_input(self, tmp_path, capsys):
        path = tmp_path / "rho.json"
        save_state(make_state("werner", 0.5), path)
        assert main(["schmidt", "--state", str(path)]) == 1
