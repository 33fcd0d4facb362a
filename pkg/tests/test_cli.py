import csv

import numpy as np
import pytest

from ddlab import cli, sweeps
from ddlab.exceptions import ConfigError, MissingColumn
from ddlab.svg import emit_svg_plot


def _rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _header(path):
    with open(path, encoding="utf-8") as fh:
        return fh.readline().rstrip("\n")


class TestAlphaGrid:
    def test_inclusive_and_rounded(self):
        grid = sweeps.alpha_grid(0.05, 10.0, 0.05)
        assert len(grid) == 200
        assert grid[0] == 0.05 and grid[19] == 1.0 and grid[-1] == 10.0

    def test_single_point(self):
        assert sweeps.alpha_grid(1.0, 1.0, 0.1) == [1.0]

    @pytest.mark.parametrize("args", [(1.0, 2.0, 0.0), (2.0, 1.0, 0.1)])
    def test_rejects_bad_grid(self, args):
        with pytest.raises(ConfigError):
            sweeps.alpha_grid(*args)


class TestTheorySweep:
    def test_schema_and_single_point(self, tmp_path):
        out = tmp_path / "t.csv"
        code = cli.run(["theory-sweep", "--alpha-start", "1", "--alpha-stop", "1",
                        "--alpha-step", "0.05", "--lambda", "1e-5", "--out", str(out)])
        assert code == 0
        assert _header(out) == ",".join(sweeps.THEORY_COLUMNS)
        rows = _rows(out)
        assert len(rows) == 1 and rows[0]["status"] == "ok"

    def test_rows_ordered_lambda_then_alpha(self, tmp_path):
        out = tmp_path / "t.csv"
        cli.run(["theory-sweep", "--alphas", "0.5,2", "--lambda", "0.005,5", "--out", str(out)])
        pairs = [(float(r["lambda"]), float(r["alpha"])) for r in _rows(out)]
        assert pairs == [(0.005, 0.5), (0.005, 2.0), (5.0, 0.5), (5.0, 2.0)]

    def test_seventeen_digits_and_lf(self, tmp_path):
        out = tmp_path / "t.csv"
        cli.run(["theory-sweep", "--alphas", "0.3", "--lambda", "0.1", "--out", str(out)])
        raw = out.read_bytes()
        assert b"\r" not in raw
        row = _rows(out)[0]
        assert float(row["test_error"]) == float(format(float(row["test_error"]), ".17g"))
        assert row["alpha"] == format(0.3, ".17g")

    def test_byte_identical_reruns(self, tmp_path):
        args = ["theory-sweep", "--alpha-start", "0.1", "--alpha-stop", "3", "--alpha-step",
                "0.1", "--lambda", "1e-5,0.5", "--rho1", "0.7"]
        cli.run(args + ["--out", str(tmp_path / "a.csv")])
        cli.run(args + ["--out", str(tmp_path / "b.csv")])
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_thread_count_does_not_change_output(self, tmp_path, monkeypatch):
        args = ["theory-sweep", "--alphas", "0.5,1,2", "--lambda", "0.1", "--loss", "logistic"]
        monkeypatch.setenv("DDLAB_THREADS", "1")
        cli.run(args + ["--out", str(tmp_path / "a.csv")])
        monkeypatch.setenv("DDLAB_THREADS", "4")
        cli.run(args + ["--out", str(tmp_path / "b.csv")])
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_failed_point_sets_exit_code(self, tmp_path, monkeypatch):
        def boom(*args, **kwargs):
            raise sweeps.ConfigError("nope")

        monkeypatch.setattr(sweeps, "solve", boom)
        out = tmp_path / "t.csv"
        code = cli.run(["theory-sweep", "--alphas", "1", "--lambda", "0.1", "--out", str(out)])
        assert code == 1
        row = _rows(out)[0]
        assert row["status"] == "ConfigError"
        assert row["test_error"] == "" and row["r_star"] == ""

    def test_config_file_and_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        out = tmp_path / "t.csv"
        cfg.write_text(
            "# uneven clusters\nalpha_start = 0.5\nalpha_stop = 1.0\nalpha_step = 0.25\n"
            f"lambda = 0.5\nrho1 = 0.7\nout = {out}\n"
        )
        assert cli.run(["theory-sweep", "--config", str(cfg), "--rho1", "0.6"]) == 0
        rows = _rows(out)
        assert [float(r["alpha"]) for r in rows] == [0.5, 0.75, 1.0]
        assert {r["rho1"] for r in rows} == {"0.59999999999999998"}

    @pytest.mark.parametrize(
        "argv",
        [
            ["theory-sweep", "--alphas", "1", "--lambda", "0", "--out", "x.csv"],
            ["theory-sweep", "--alphas", "1", "--lambda", "0.1"],
            ["theory-sweep", "--alphas", "1", "--lambda", "0.1", "--loss", "huber", "--out", "x.csv"],
            ["theory-sweep", "--alpha-start", "1", "--lambda", "0.1", "--out", "x.csv"],
            ["lambda-sweep", "--lambda", "0.1", "--out", "x.csv"],
            ["verify", "--alphas", "2", "--lambda", "0.1", "--seeds", "1", "--out", "x.csv"],
        ],
    )
    def test_config_errors_exit_2(self, argv, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert cli.run(argv) == 2

    def test_unknown_config_key(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("colour = blue\n")
        with pytest.raises(ConfigError):
            cli.read_config(str(cfg))


class TestLambdaSweep:
    def test_single_lambda(self, tmp_path):
        out = tmp_path / "l.csv"
        assert cli.run(["lambda-sweep", "--alpha", "4", "--lambda", "0.1", "--out", str(out)]) == 0
        assert len(_rows(out)) == 1

    def test_interior_minimum_uneven(self, tmp_path):
        lams = np.logspace(-5, 3, 33)
        out = tmp_path / "l.csv"
        cli.run(["lambda-sweep", "--alpha", "4", "--rho1", "0.55",
                 "--lambda", ",".join(f"{x:.17g}" for x in lams), "--out", str(out)])
        err = np.array([float(r["test_error"]) for r in _rows(out)])
        k = int(np.argmin(err))
        assert 0 < k < len(err) - 1
        assert err[-1] > err[k] + 0.05

    def test_steady_beyond_minimum_symmetric(self, tmp_path):
        lams = np.logspace(-5, 3, 33)
        out = tmp_path / "l.csv"
        cli.run(["lambda-sweep", "--alpha", "4", "--lambda", ",".join(f"{x:.17g}" for x in lams),
                 "--out", str(out)])
        err = np.array([float(r["test_error"]) for r in _rows(out)])
        k = int(np.argmin(err))
        assert np.all(np.diff(err[k:]) <= 1e-12)


class TestSimulateVerify:
    def test_zero_seeds_header_only(self, tmp_path):
        out = tmp_path / "v.csv"
        code = cli.run(["verify", "--alphas", "2", "--lambda", "0.1", "--dim", "20",
                        "--out", str(out)])
        assert code == 0
        assert out.read_text() == ",".join(sweeps.VERIFY_COLUMNS) + "\n"

    def test_verify_rows(self, tmp_path):
        out = tmp_path / "v.csv"
        code = cli.run(["verify", "--alphas", "2,4", "--lambda", "0.1", "--dim", "30",
                        "--seeds", "1,2", "--n-test", "5000", "--out", str(out)])
        assert code == 0
        rows = _rows(out)
        assert [(r["alpha"], r["seed"]) for r in rows] == [
            ("2", "1"), ("2", "2"), ("4", "1"), ("4", "2")
        ]
        for r in rows:
            assert int(r["n"]) == round(float(r["alpha"]) * 30)
            gap = abs(float(r["emp_test_error"]) - float(r["theory_test_error"]))
            np.testing.assert_allclose(float(r["abs_gap"]), gap, rtol=1e-15)

    def test_simulate_byte_identical(self, tmp_path):
        args = ["simulate", "--alphas", "1.5", "--lambda", "0.1", "--dim", "25",
                "--seeds", "3,4", "--n-test", "2000", "--loss", "logistic"]
        cli.run(args + ["--out", str(tmp_path / "a.csv")])
        cli.run(args + ["--out", str(tmp_path / "b.csv")])
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert _header(tmp_path / "a.csv") == ",".join(sweeps.SIMULATE_COLUMNS)

    def test_rejects_several_lambdas(self, tmp_path):
        spec = sweeps.SweepSpec(mode="simulate", alphas=(2.0,), lambda_values=(0.1, 0.2),
                                d=10, seeds=(1,), output_path=str(tmp_path / "s.csv"))
        with pytest.raises(ConfigError):
            spec.validate()


class TestSvg:
    def _sweep(self, tmp_path, lams="0.005,0.5,5"):
        out = tmp_path / "t.csv"
        cli.run(["theory-sweep", "--alpha-start", "0.05", "--alpha-stop", "4",
                 "--alpha-step", "0.05", "--lambda", lams, "--out", str(out), "--svg"])
        return out

    def test_svg_alongside_csv(self, tmp_path):
        self._sweep(tmp_path)
        svg = (tmp_path / "t.svg").read_text()
        assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
        assert svg.count("<polyline") == 3
        assert "lambda=0.005" in svg

    def test_single_group_peak(self, tmp_path):
        csv_path = self._sweep(tmp_path, lams="1e-5")
        svg = emit_svg_plot(str(csv_path), "alpha", "test_error", None, str(tmp_path / "p.svg"))
        text = open(svg).read()
        assert text.count("<polyline") == 1
        pts = text.split('points="')[1].split('"')[0].split()
        xs = [float(p.split(",")[0]) for p in pts]
        ys = [float(p.split(",")[1]) for p in pts]
        # SVG y grows downward, so the peak is the smallest y
        peak_x = xs[int(np.argmin(ys))]
        # x pixel for alpha = 1 on a 0..4 axis spanning 420 px from x = 70
        assert abs(peak_x - (70 + 420 * 1.0 / 4.0)) <= 420 * 0.05 / 4.0 + 1e-6

    def test_deterministic(self, tmp_path):
        csv_path = self._sweep(tmp_path)
        a = emit_svg_plot(str(csv_path), "alpha", "test_error", "lambda", str(tmp_path / "a.svg"))
        b = emit_svg_plot(str(csv_path), "alpha", "test_error", "lambda", str(tmp_path / "b.svg"))
        assert open(a, "rb").read() == open(b, "rb").read()

    def test_empty_rows_axes_only(self, tmp_path):
        path = tmp_path / "e.csv"
        path.write_text(",".join(sweeps.THEORY_COLUMNS) + "\n")
        out = emit_svg_plot(str(path), "alpha", "test_error", "lambda", str(tmp_path / "e.svg"))
        text = open(out).read()
        assert "<polyline" not in text
        assert "<rect" in text and "<line" in text

    def test_missing_column(self, tmp_path):
        csv_path = self._sweep(tmp_path)
        with pytest.raises(MissingColumn):
            emit_svg_plot(str(csv_path), "alpha", "nope", None, str(tmp_path / "x.svg"))

    def test_plot_command(self, tmp_path):
        csv_path = self._sweep(tmp_path)
        out = tmp_path / "cmd.svg"
        code = cli.run(["plot", "--csv", str(csv_path), "--x", "alpha", "--y", "test_error",
                        "--group", "lambda", "--out", str(out)])
        assert code == 0 and out.exists()
        assert cli.run(["plot", "--csv", str(csv_path), "--x", "alpha", "--y", "zz",
                        "--out", str(out)]) == 2

    def test_log_axis_label(self, tmp_path):
        out = tmp_path / "l.csv"
        cli.run(["lambda-sweep", "--alpha", "4", "--lambda", "1e-4,1e-2,1,100", "--out",
                 str(out), "--svg"])
        assert "lambda (log scale)" in (tmp_path / "l.svg").read_text()
