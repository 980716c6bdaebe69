import json
import math

import numpy as np
import pytest

from geojsd import (
    DiscreteDensity,
    MeanSpec,
    bhattacharyya_gaussian,
    chernoff,
    js,
    js_m_extended,
    kl_between_mixtures,
    kl_gaussian,
)
from geojsd.cli import main, parse_mean


@pytest.fixture
def discrete_files(tmp_path):
    p1 = tmp_path / "p1.txt"
    p2 = tmp_path / "p2.txt"
    p1.write_text("# two atoms\n0.5 0.5\n")
    p2.write_text("0.25\n0.75\n")
    return str(p1), str(p2)


@pytest.fixture
def gaussian_files(tmp_path):
    g1 = tmp_path / "g1.json"
    g2 = tmp_path / "g2.json"
    g1.write_text(json.dumps({"mu": [0.0], "sigma": [[1.0]]}))
    g2.write_text(json.dumps({"mu": [1.0], "sigma": [[1.0]]}))
    return str(g1), str(g2)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParseMean:
    def test_descriptors(self):
        assert parse_mean("arithmetic", 0.3).kind.value == "arithmetic"
        assert parse_mean("power:-2", 0.5).gamma == -2.0
        assert parse_mean("quasi:log", 0.5).phi == "log"
        assert parse_mean("quasi:power:3", 0.5).gamma == 3.0
        with pytest.raises(ValueError):
            parse_mean("median", 0.5)


class TestCompute:
    def test_json_vector_input(self, capsys, tmp_path):
        p1 = tmp_path / "p1.json"
        p2 = tmp_path / "p2.json"
        p1.write_text("[0.5, 0.5]")
        p2.write_text("[0.25, 0.75]")
        code, out, _ = run_cli(capsys, "compute", "--div", "tv",
                               "--p1", str(p1), "--p2", str(p2))
        assert code == 0
        assert json.loads(out)["value"] == pytest.approx(0.25, abs=1e-15)

    def test_js(self, capsys, discrete_files):
        p1, p2 = discrete_files
        code, out, _ = run_cli(capsys, "compute", "--div", "js",
                               "--p1", p1, "--p2", p2)
        assert code == 0
        payload = json.loads(out)
        expected = js(DiscreteDensity.probability([0.5, 0.5]),
                      DiscreteDensity.probability([0.25, 0.75]))
        assert payload["value"] == pytest.approx(expected, abs=1e-15)
        assert payload["base"] == "nats"
        assert payload["method"] == "exact"

    def test_js_m_same_density_is_zero(self, capsys, discrete_files):
        p1, _ = discrete_files
        code, out, _ = run_cli(capsys, "compute", "--div", "js_m",
                               "--mean", "geometric", "--p1", p1, "--p2", p1)
        assert code == 0
        assert json.loads(out)["value"] == 0.0

    def test_gjsd_gaussian_closed_form(self, capsys, gaussian_files):
        g1, g2 = gaussian_files
        code, out, _ = run_cli(capsys, "compute", "--div", "gjsd",
                               "--gaussian", "--p1", g1, "--p2", g2)
        assert code == 0
        payload = json.loads(out)
        # jeffreys/4 - bhattacharyya = 1/4 - 1/8
        assert payload["value"] == pytest.approx(0.125, abs=1e-12)
        assert payload["method"] == "closed-form"

    def test_chernoff_reports_maximizer(self, capsys, discrete_files):
        p1, p2 = discrete_files
        code, out, _ = run_cli(capsys, "compute", "--div", "chernoff",
                               "--p1", p1, "--p2", p2)
        assert code == 0
        payload = json.loads(out)
        value, alpha_star = chernoff(DiscreteDensity.probability([0.5, 0.5]),
                                     DiscreteDensity.probability([0.25, 0.75]))
        assert payload["value"] == pytest.approx(value, abs=1e-12)
        assert payload["alpha_star"] == pytest.approx(alpha_star, abs=1e-9)

    def test_bits_base(self, capsys, discrete_files):
        p1, p2 = discrete_files
        _, out_nats, _ = run_cli(capsys, "compute", "--div", "kl",
                                 "--p1", p1, "--p2", p2)
        _, out_bits, _ = run_cli(capsys, "compute", "--div", "kl",
                                 "--p1", p1, "--p2", p2, "--base", "bits")
        nats = json.loads(out_nats)["value"]
        bits = json.loads(out_bits)["value"]
        assert bits == pytest.approx(nats / math.log(2.0), rel=1e-12)

    def test_kl_mixtures(self, capsys, discrete_files):
        p1, p2 = discrete_files
        code, out, _ = run_cli(capsys, "compute", "--div", "kl_mixtures",
                               "--mean", "arithmetic", "--mean2", "geometric",
                               "--p1", p1, "--p2", p2)
        assert code == 0
        expected = kl_between_mixtures(
            DiscreteDensity.probability([0.5, 0.5]),
            DiscreteDensity.probability([0.25, 0.75]),
            MeanSpec.arithmetic(), MeanSpec.geometric())
        assert json.loads(out)["value"] == pytest.approx(expected, abs=1e-15)

    def test_gamma_gaussian_near_kl(self, capsys, gaussian_files):
        g1, g2 = gaussian_files
        code, out, _ = run_cli(capsys, "compute", "--div", "gamma",
                               "--gaussian", "--p1", g1, "--p2", g2,
                               "--gamma", "0.001")
        assert code == 0
        value = json.loads(out)["value"]
        assert value == pytest.approx(0.5, abs=2e-3)

    def test_js_gaussian_monte_carlo(self, capsys, gaussian_files):
        g1, g2 = gaussian_files
        code, out, _ = run_cli(capsys, "compute", "--div", "js", "--gaussian",
                               "--p1", g1, "--p2", g2,
                               "--samples", "200000", "--seed", "11")
        assert code == 0
        payload = json.loads(out)
        assert payload["method"] == "monte-carlo"
        assert payload["value"] == pytest.approx(0.1113, abs=0.01)
        assert payload["std_error"] > 0.0

    def test_extended_divergences_accept_unnormalized_inputs(self, capsys,
                                                             tmp_path):
        q1 = tmp_path / "q1.txt"
        q2 = tmp_path / "q2.txt"
        q1.write_text("0.6 0.9\n")
        q2.write_text("0.3 1.2\n")
        for div in ("kl_plus", "js_m_plus"):
            code, out, _ = run_cli(capsys, "compute", "--div", div,
                                   "--p1", str(q1), "--p2", str(q2))
            assert code == 0
            assert json.loads(out)["value"] > 0.0
        expected = js_m_extended(DiscreteDensity.positive([0.6, 0.9]),
                                 DiscreteDensity.positive([0.3, 1.2]),
                                 MeanSpec.geometric())
        code, out, _ = run_cli(capsys, "compute", "--div", "js_m_plus",
                               "--mean", "geometric",
                               "--p1", str(q1), "--p2", str(q2))
        assert json.loads(out)["value"] == pytest.approx(expected, abs=1e-15)

    def test_deterministic_output(self, capsys, gaussian_files):
        g1, g2 = gaussian_files
        argv = ("compute", "--div", "js_m_plus", "--mean", "power:2",
                "--gaussian", "--p1", g1, "--p2", g2,
                "--samples", "50000", "--seed", "21")
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second

    def test_env_seed(self, capsys, gaussian_files, monkeypatch):
        # GEOJSD_SEED must act as the default seed
        g1, g2 = gaussian_files
        monkeypatch.setenv("GEOJSD_SEED", "77")
        import importlib

        import geojsd.cli as cli_module
        importlib.reload(cli_module)
        code = cli_module.main(["compute", "--div", "js", "--gaussian",
                                "--p1", g1, "--p2", g2, "--samples", "20000"])
        out_env = capsys.readouterr().out
        assert code == 0
        code = cli_module.main(["compute", "--div", "js", "--gaussian",
                                "--p1", g1, "--p2", g2, "--samples", "20000",
                                "--seed", "77"])
        out_explicit = capsys.readouterr().out
        assert out_env == out_explicit
        monkeypatch.delenv("GEOJSD_SEED")
        importlib.reload(cli_module)


class TestExitCodes:
    def test_missing_file_is_usage_error(self, capsys, discrete_files):
        p1, _ = discrete_files
        code, _, err = run_cli(capsys, "compute", "--div", "kl",
                               "--p1", p1, "--p2", "/does/not/exist")
        assert code == 2
        assert "error" in err

    def test_disjoint_support_is_math_error(self, capsys, tmp_path):
        a = tmp_path / "a.txt"
        b = tmp_path / "b.txt"
        a.write_text("1 0\n")
        b.write_text("0 1\n")
        code, _, err = run_cli(capsys, "compute", "--div", "js_m",
                               "--mean", "geometric",
                               "--p1", str(a), "--p2", str(b))
        assert code == 3
        assert "disjoint" in err

    def test_bad_mass_is_usage_error(self, capsys, tmp_path):
        a = tmp_path / "a.txt"
        a.write_text("0.5 0.6\n")
        code, _, _ = run_cli(capsys, "compute", "--div", "js",
                             "--p1", str(a), "--p2", str(a))
        assert code == 2

    def test_multivariate_tv_rejected(self, capsys, tmp_path):
        g = tmp_path / "g.json"
        g.write_text(json.dumps({"mu": [0.0, 0.0],
                                 "sigma": [[1.0, 0.0], [0.0, 1.0]]}))
        code, _, _ = run_cli(capsys, "compute", "--div", "tv", "--gaussian",
                             "--p1", str(g), "--p2", str(g))
        assert code == 2

    def test_unknown_divergence_is_usage_error(self, capsys, discrete_files):
        p1, p2 = discrete_files
        with pytest.raises(SystemExit) as excinfo:
            main(["compute", "--div", "wasserstein", "--p1", p1, "--p2", p2])
        assert excinfo.value.code == 2
        capsys.readouterr()


class TestVerify:
    def test_counterexamples_pass(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "counterexamples")
        assert code == 0
        assert "PASS" in out
        assert "0 failed" in out

    def test_json_report(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "counterexamples", "--json")
        assert code == 0
        report = json.loads(out)
        assert len(report) == 3
        assert all(entry["passed"] for entry in report)


class TestSweep:
    def test_empty_grid_header_only(self, capsys, tmp_path):
        spec = tmp_path / "sweep.json"
        spec.write_text(json.dumps({
            "parameter": "gamma", "values": [],
            "inputs": {"kind": "discrete", "p1": [0.5, 0.5],
                       "p2": [0.25, 0.75]},
        }))
        code, out, _ = run_cli(capsys, "sweep", str(spec))
        assert code == 0
        assert out.splitlines() == ["parameter,value,std_error,oracle,abs_error"]

    def test_gamma_sweep_monotone(self, capsys, tmp_path):
        spec = tmp_path / "sweep.json"
        spec.write_text(json.dumps({
            "parameter": "gamma",
            "values": [1e-2, 1e-3, 1e-4],
            "target": "gamma_divergence",
            "inputs": {"kind": "gaussian",
                       "p1": {"mu": [0.0], "sigma": [[1.0]]},
                       "p2": {"mu": [1.0], "sigma": [[2.0]]}},
        }))
        code, out, _ = run_cli(capsys, "sweep", str(spec))
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 4
        errors = [float(line.split(",")[4]) for line in lines[1:]]
        assert errors[0] > errors[1] > errors[2]

    def test_samples_sweep_stderr_shrinks(self, capsys, tmp_path):
        spec = tmp_path / "sweep.json"
        spec.write_text(json.dumps({
            "parameter": "samples",
            "values": [10_000, 40_000, 160_000],
            "target": "estimate_z",
            "mean": "geometric",
            "inputs": {"kind": "gaussian",
                       "p1": {"mu": [0.0], "sigma": [[1.0]]},
                       "p2": {"mu": [1.0], "sigma": [[1.0]]}},
            "estimator": {"seed": 17},
        }))
        code, out, _ = run_cli(capsys, "sweep", str(spec))
        assert code == 0
        lines = out.strip().splitlines()[1:]
        stderrs = [float(line.split(",")[2]) for line in lines]
        # 4x samples about halves the standard error
        assert stderrs[1] / stderrs[0] == pytest.approx(0.5, rel=0.2)
        assert stderrs[2] / stderrs[1] == pytest.approx(0.5, rel=0.2)
        oracle = float(lines[0].split(",")[3])
        assert oracle == pytest.approx(math.exp(-0.125), rel=1e-10)

    def test_alpha_sweep_bhattacharyya(self, capsys, tmp_path):
        spec = tmp_path / "sweep.json"
        spec.write_text(json.dumps({
            "parameter": "alpha",
            "values": [0.25, 0.5, 0.75],
            "target": "bhattacharyya",
            "inputs": {"kind": "discrete", "p1": [0.5, 0.5],
                       "p2": [0.25, 0.75]},
        }))
        code, out, _ = run_cli(capsys, "sweep", str(spec))
        assert code == 0
        lines = out.strip().splitlines()[1:]
        for line in lines:
            abs_error = float(line.split(",")[4])
            assert abs_error < 1e-10

    def test_bad_spec_is_usage_error(self, capsys, tmp_path):
        spec = tmp_path / "sweep.json"
        spec.write_text(json.dumps({"parameter": "frequency", "values": [1]}))
        code, _, _ = run_cli(capsys, "sweep", str(spec))
        assert code == 2
