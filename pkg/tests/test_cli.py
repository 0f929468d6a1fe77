"""End to end tests of the command line, through run(argv)."""

import csv
import json

import numpy as np
import pytest

from weylscope import core
from weylscope.exceptions import IterationLimitError
from weylscope.main import run
from weylscope.measure import SignedMeasure


def _rows(path):
    with open(path) as stream:
        return list(csv.DictReader(stream))


class TestSolve:

    def test_delta_at_origin(self, delta0, write_measure, tmp_path):
        out = tmp_path / "solve.csv"
        code = run(["solve", "--measure", write_measure(delta0), "--z=-1",
                    "--xmax", "1", "--output", str(out)])
        assert code == 0
        rows = _rows(out)
        assert list(rows[0]) == ["x", "re_c", "im_c", "re_cp", "im_cp",
                                 "re_s", "im_s", "re_sp", "im_sp"]
        assert float(rows[-1]["x"]) == 1.0
        assert float(rows[-1]["re_c"]) == pytest.approx(3.893483, abs=1e-6)

    def test_json_format(self, free, write_measure, tmp_path):
        out = tmp_path / "solve.json"
        code = run(["solve", "--measure", write_measure(free), "--z=0+1i",
                    "--format", "json", "--output", str(out)])
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["columns"][0] == "x"
        assert payload["records"]["z"] == [0.0, 1.0]
        k = np.sqrt(-1j)
        last = payload["rows"][-1]
        assert complex(last[1], last[2]) == pytest.approx(np.cosh(k), rel=1e-12)


class TestInputErrors:

    def test_missing_file(self, tmp_path):
        assert run(["solve", "--measure", str(tmp_path / "nope.json"), "--z=1i",
                    "--output", str(tmp_path / "out.csv")]) == 1

    def test_malformed_file(self, write_measure, tmp_path):
        path = write_measure('{\n "atoms": [[0.5, 1.0],\n  [0.4, 1.0]]\n}')
        assert run(["solve", "--measure", path, "--z=1i",
                    "--output", str(tmp_path / "out.csv")]) == 1

    @pytest.mark.parametrize("text", [
        '{"density": [{"from": "abc", "to": 1, "coeffs": [1]}]}',
        '{"density": 5}',
        '{"atoms": [[0.5, NaN]]}',
    ])
    def test_wrong_value_types(self, text, write_measure, tmp_path):
        assert run(["solve", "--measure", write_measure(text), "--z=1i",
                    "--output", str(tmp_path / "out.csv")]) == 1

    def test_bad_complex(self, free, write_measure, tmp_path):
        assert run(["solve", "--measure", write_measure(free), "--z=one",
                    "--output", str(tmp_path / "out.csv")]) == 1

    def test_positive_real_z(self, free, write_measure, tmp_path):
        assert run(["solve", "--measure", write_measure(free), "--z=2",
                    "--output", str(tmp_path / "out.csv")]) == 1

    def test_missing_argument(self, free, write_measure):
        assert run(["solve", "--measure", write_measure(free)]) == 1

    def test_no_command(self):
        assert run([]) == 1

    def test_output_directory_must_exist(self, free, write_measure, tmp_path):
        assert run(["solve", "--measure", write_measure(free), "--z=1i",
                    "--output", str(tmp_path / "missing" / "out.csv")]) == 1

    def test_version_and_levels(self):
        assert run(["--version"]) == 0
        assert run(["--list-level"]) == 0


class TestSolverErrors:

    def test_iteration_limit_exit_code(self, free, write_measure, tmp_path, monkeypatch):
        def fail(*args, **kwargs):
            raise IterationLimitError(200, 1e-3, "[0, 0.05)")

        monkeypatch.setattr(core, "solve_fundamental", fail)
        assert run(["solve", "--measure", write_measure(free), "--z=1i",
                    "--output", str(tmp_path / "out.csv")]) == 2


class TestWeyl:

    def test_free(self, free, write_measure, tmp_path):
        out = tmp_path / "weyl.csv"
        code = run(["weyl", "--measure", write_measure(free), "--z=0+1i", "--z=0+100i",
                    "--output", str(out)])
        assert code == 0
        rows = _rows(out)
        assert len(rows) == 2
        for row, z in zip(rows, (1j, 100j)):
            expected = -np.sqrt(-z)
            assert complex(float(row["re_m"]), float(row["im_m"])) == pytest.approx(expected, rel=1e-12)
            assert complex(float(row["re_m_exact"]), float(row["im_m_exact"])) == pytest.approx(expected, rel=1e-12)

    def test_density_has_no_exact(self, constant_density, write_measure, tmp_path):
        out = tmp_path / "weyl.csv"
        assert run(["weyl", "--measure", write_measure(constant_density), "--z=0+4i",
                    "--output", str(out)]) == 0
        assert np.isnan(float(_rows(out)[0]["re_m_exact"]))


class TestSweeps:

    def test_asym_is_deterministic(self, delta05, write_measure, tmp_path):
        path = write_measure(delta05)
        outputs = []
        for name in ("first.csv", "second.csv"):
            out = tmp_path / name
            assert run(["asym", "--measure", path, "--rmin", "100", "--rmax", "10000",
                        "--points-per-decade", "2", "--output", str(out)]) == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]
        rows = list(csv.DictReader(outputs[0].decode().splitlines()))
        assert len(rows) == 5
        assert float(rows[0]["R"]) == 100.0

    def test_asym_with_workers(self, delta05, write_measure, tmp_path, monkeypatch):
        path = write_measure(delta05)
        serial, parallel = tmp_path / "serial.csv", tmp_path / "parallel.csv"
        args = ["asym", "--measure", path, "--rmin", "100", "--rmax", "1000",
                "--points-per-decade", "1"]
        assert run(args + ["--output", str(serial)]) == 0
        monkeypatch.setenv("WEYLSCOPE_JOBS", "2")
        assert run(args + ["--output", str(parallel)]) == 0
        assert serial.read_bytes() == parallel.read_bytes()

    def test_dist(self, delta05, write_measure, tmp_path):
        out = tmp_path / "dist.csv"
        assert run(["dist", "--measure", write_measure(delta05), "--phi-center", "0.5",
                    "--rmin", "100", "--rmax", "1000", "--points-per-decade", "1",
                    "--output", str(out)]) == 0
        rows = _rows(out)
        assert len(rows) == 2
        assert float(rows[0]["phi_center"]) == 0.5

    def test_dist_uses_truncation(self, delta05, write_measure, tmp_path, monkeypatch):
        seen = []
        sweep = core.distributional_residual_sweep

        def recording(*args):
            seen.append(args[-1])
            return sweep(*args)

        monkeypatch.setattr(core, "distributional_residual_sweep", recording)
        assert run(["dist", "--measure", write_measure(delta05), "--phi-center", "0.5",
                    "--x0", "2.5",
                    "--rmin", "100", "--rmax", "1000", "--points-per-decade", "1",
                    "--output", str(tmp_path / "dist.csv")]) == 0
        assert seen == [2.5]

    @pytest.mark.parametrize("command", [["asym"], ["dist", "--phi-center", "0.5"]])
    def test_invariant_failure_late_in_ray(self, command, delta05, write_measure,
                                           tmp_path, monkeypatch):
        checked = []
        invariants = core.hard_invariants

        def failing_at_large_z(m, z, x0, tol):
            checked.append(abs(z.z))
            results = invariants(m, z, x0, tol)
            if abs(z.z) > 500:
                results[0] = results[0]._replace(passed=False)
            return results

        monkeypatch.setattr(core, "hard_invariants", failing_at_large_z)
        assert run(command + ["--measure", write_measure(delta05),
                    "--rmin", "100", "--rmax", "1000", "--points-per-decade", "1",
                    "--output", str(tmp_path / "out.csv")]) == 3
        assert checked == pytest.approx([100.0, 1000.0])

    def test_dist_bump_outside_domain(self, write_measure, tmp_path):
        m = SignedMeasure(atoms=[(0.5, 1.0)], domain_end=1.0)
        assert run(["dist", "--measure", write_measure(m), "--phi-center", "0.9",
                    "--output", str(tmp_path / "dist.csv")]) == 1


class TestCheck:

    @pytest.mark.parametrize("name", ["free", "delta05", "two_atoms"])
    def test_suite_passes(self, suite, name, write_measure):
        assert run(["check", "--measure", write_measure(suite[name])]) == 0

    def test_density(self, constant_density):
        results = core.run_checks(constant_density, 1.0, 1e-12)
        failed = [r.name for r in results if not r.passed and not r.advisory]
        assert not failed
