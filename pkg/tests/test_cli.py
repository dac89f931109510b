import json
import subprocess
import sys

import numpy as np
import pytest

from uwenhance import synthetic
from uwenhance.calib import fit_mlr, load_ratings
from uwenhance.cli import BenchReport, main
from uwenhance.dehaze import DehazeParams, dehaze, enhance_dcp
from uwenhance.features import DetectConfig, match_count_report
from uwenhance.gate import GateConfig, run_gate
from uwenhance.imgcore import ImageBuffer, read_pnm, write_pnm
from uwenhance.quality import DEFAULT_COEFFICIENTS, score


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def frames(tmp_path):
    d = tmp_path / "frames"
    d.mkdir()
    clear = synthetic.corpus(3, 48, 64)
    for i, c in enumerate(clear):
        write_pnm(d / f"f{i:02d}.ppm", synthetic.hazy(c, 0.4))
    write_pnm(tmp_path / "clear.ppm", clear[0])
    write_pnm(tmp_path / "hazy.ppm", synthetic.hazy(clear[0], 0.4))
    return tmp_path


@pytest.fixture
def ratings_csv(tmp_path, rng):
    p = tmp_path / "ratings.csv"
    lines = ["sigma_c,con_l,mu_s,score"]
    for _ in range(155):
        f = (rng.uniform(5, 15), rng.uniform(20, 60), rng.uniform(0, 1))
        lines.append("%r,%r,%r,%r" % (*f, DEFAULT_COEFFICIENTS.combine(*f)))
    p.write_text("\n".join(lines) + "\n")
    return p


class TestEnhance:
    def test_writes_file(self, capsys, frames):
        out = frames / "out.ppm"
        code, _, _ = run(capsys, "enhance", frames / "hazy.ppm", out, "--method", "dcp")
        assert code == 0
        assert read_pnm(out) == synthetic.quantize(enhance_dcp(read_pnm(frames / "hazy.ppm")))

    def test_missing_input(self, capsys, tmp_path):
        code, out, err = run(capsys, "enhance", tmp_path / "nope.ppm", tmp_path / "o.ppm")
        assert code == 2 and out == ""
        assert "no such file" in err

    def test_bad_pnm_is_usage_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.ppm"
        bad.write_bytes(b"P3 1 1 255\n0 0 0\n")
        code, _, err = run(capsys, "enhance", bad, tmp_path / "o.ppm")
        assert code == 2 and err

    def test_udcp_equals_dcp_when_red_never_minimum(self, capsys, tmp_path, rng):
        px = rng.uniform(0.05, 0.9, (40, 50, 3))
        px[..., 0] = 1.0
        write_pnm(tmp_path / "in.ppm", ImageBuffer(px))
        run(capsys, "enhance", tmp_path / "in.ppm", tmp_path / "dcp.ppm", "--method", "dcp")
        run(capsys, "enhance", tmp_path / "in.ppm", tmp_path / "udcp.ppm", "--method", "udcp")
        assert (tmp_path / "dcp.ppm").read_bytes() == (tmp_path / "udcp.ppm").read_bytes()

    def test_directory(self, capsys, frames):
        code, _, _ = run(capsys, "enhance", frames / "frames", frames / "out", "--patch-radius", "3")
        assert code == 0
        assert sorted(p.name for p in (frames / "out").iterdir()) == ["f00.ppm", "f01.ppm", "f02.ppm"]
        lib = dehaze(read_pnm(frames / "frames" / "f01.ppm"), DehazeParams(patch_radius=3)).output
        assert read_pnm(frames / "out" / "f01.ppm") == synthetic.quantize(lib)

    def test_compute_error_exit_1(self, capsys, tmp_path, rng):
        px = rng.uniform(0.05, 0.9, (20, 20, 3))
        px[..., 0] = 0.0
        write_pnm(tmp_path / "nored.ppm", ImageBuffer(px))
        code, _, err = run(capsys, "enhance", tmp_path / "nored.ppm", tmp_path / "o.ppm")
        assert code == 1 and "airlight" in err.lower()


class TestScore:
    def test_gray_is_zero(self, capsys, tmp_path):
        write_pnm(tmp_path / "g.ppm", ImageBuffer(np.full((16, 16, 3), 0.4)))
        code, out, _ = run(capsys, "score", tmp_path / "g.ppm")
        d = json.loads(out)
        assert code == 0 and abs(d["uciqe"]) < 1e-9
        assert d["psnr"] is None and d["ssim"] is None

    def test_self(self, capsys, frames):
        code, out, _ = run(capsys, "score", frames / "hazy.ppm", "--ref", frames / "hazy.ppm")
        d = json.loads(out)
        assert d["psnr"] == "inf" and d["ssim"] == pytest.approx(1.0, abs=1e-12)

    def test_equals_library(self, capsys, frames):
        _, out, _ = run(capsys, "score", frames / "hazy.ppm", "--ref", frames / "clear.ppm")
        lib = score(read_pnm(frames / "hazy.ppm"), read_pnm(frames / "clear.ppm")).to_dict()
        assert json.loads(out) == lib

    def test_coeffs_file(self, capsys, frames):
        cf = frames / "c.json"
        cf.write_text(json.dumps({"coefficients": {"c1": 1.0, "c2": 0.0, "c3": 0.0}}))
        _, out, _ = run(capsys, "score", frames / "clear.ppm", "--coeffs", cf)
        d = json.loads(out)
        assert d["uciqe"] == d["sigma_c"]

    def test_ref_mismatch(self, capsys, frames):
        write_pnm(frames / "small.ppm", ImageBuffer(np.zeros((8, 8, 3))))
        code, _, err = run(capsys, "score", frames / "clear.ppm", "--ref", frames / "small.ppm")
        assert code == 1 and err

    def test_directory_listing(self, capsys, frames):
        _, out, _ = run(capsys, "score", frames / "frames")
        rows = json.loads(out)
        assert [r["path"] for r in rows] == ["f00.ppm", "f01.ppm", "f02.ppm"]


class TestGate:
    def test_clear_passthrough(self, capsys, frames):
        out = frames / "g.ppm"
        code, stdout, _ = run(capsys, "gate", frames / "clear.ppm", out)
        assert code == 0 and json.loads(stdout)["verdict"] == "CLEAR_PASSTHROUGH"
        assert out.read_bytes() == (frames / "clear.ppm").read_bytes()

    def test_identity_plugin(self, capsys, frames):
        cfg = frames / "gate.json"
        cfg.write_text(json.dumps(
            {"tau": 100, "max_iterations": 2, "enhancer": "external", "external_command": "cp {in} {out}"}
        ))
        code, stdout, _ = run(capsys, "gate", frames / "hazy.ppm", frames / "g.ppm", "--config", cfg)
        d = json.loads(stdout)
        assert code == 0 and d["verdict"] == "ENHANCED_GAVE_UP" and len(d["trace"]) == 3

    def test_equals_library(self, capsys, frames):
        cfg = frames / "gate.json"
        cfg.write_text(json.dumps({"tau": 6.0, "max_iterations": 3, "enhancer": "dcp"}))
        _, stdout, _ = run(capsys, "gate", frames / "hazy.ppm", frames / "g.ppm", "--config", cfg)
        lib = run_gate(read_pnm(frames / "hazy.ppm"), GateConfig(tau=6.0))
        assert json.loads(stdout) == json.loads(json.dumps(lib.summary()))

    def test_plugin_failure_exit_1(self, capsys, frames):
        cfg = frames / "gate.json"
        cfg.write_text(json.dumps({"tau": 100, "enhancer": "external", "external_command": "false {in} {out}"}))
        code, _, _ = run(capsys, "gate", frames / "hazy.ppm", frames / "g.ppm", "--config", cfg)
        assert code == 1

    def test_bad_config(self, capsys, frames):
        cfg = frames / "gate.json"
        cfg.write_text("{not json")
        assert run(capsys, "gate", frames / "hazy.ppm", frames / "g.ppm", "--config", cfg)[0] == 2
        assert run(capsys, "gate", frames / "hazy.ppm", frames / "g.ppm", "--config", frames / "x.json")[0] == 2


class TestFit:
    def test_noiseless(self, capsys, ratings_csv):
        code, out, _ = run(capsys, "fit", ratings_csv, "--holdout", "0.2", "--seed", "5")
        d = json.loads(out)
        c = d["fit"]["coefficients"]
        assert code == 0
        assert np.allclose([c["c1"], c["c2"], c["c3"]], [0.1654, 0.0324, -0.1365], atol=1e-9, rtol=0)
        assert all(abs(a - p) <= 1e-9 for a, p in d["holdout"]["test_pairs"])
        assert d["fit"] == json.loads(json.dumps(fit_mlr(load_ratings(ratings_csv)).to_dict()))

    def test_seed_repeatable(self, capsys, ratings_csv):
        a = run(capsys, "fit", ratings_csv, "--holdout", "0.3", "--seed", "9")[1]
        b = run(capsys, "fit", ratings_csv, "--holdout", "0.3", "--seed", "9")[1]
        assert a == b

    def test_malformed_names_line(self, capsys, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("sigma_c,con_l,mu_s,score\n1,2,0.3,3\n2,3,0.1,4\n1,x,0.2,3\n")
        code, _, err = run(capsys, "fit", p)
        assert code == 2 and "line 4" in err

    def test_singular(self, capsys, tmp_path):
        p = tmp_path / "flat.csv"
        p.write_text("sigma_c,con_l,mu_s,score\n" + "10,40,0.5,3\n" * 5)
        assert run(capsys, "fit", p)[0] == 1


class TestMatch:
    def test_self(self, capsys, frames):
        _, out, _ = run(capsys, "match", frames / "clear.ppm", frames / "clear.ppm")
        d = json.loads(out)
        assert d["matches"] == d["described_a"] > 0

    def test_constant(self, capsys, tmp_path):
        write_pnm(tmp_path / "c.ppm", ImageBuffer(np.full((64, 64, 3), 0.5)))
        code, out, _ = run(capsys, "match", tmp_path / "c.ppm", tmp_path / "c.ppm")
        d = json.loads(out)
        assert code == 0 and d["keypoints_a"] == 0 and d["matches"] == 0

    def test_equals_library(self, capsys, frames):
        _, out, _ = run(capsys, "match", frames / "clear.ppm", frames / "hazy.ppm", "--levels", "3")
        lib = match_count_report(read_pnm(frames / "clear.ppm"), read_pnm(frames / "hazy.ppm"), DetectConfig(levels=3))
        assert json.loads(out) == lib.to_dict()

    def test_too_small(self, capsys, tmp_path):
        write_pnm(tmp_path / "s.ppm", ImageBuffer(np.zeros((10, 10, 3))))
        assert run(capsys, "match", tmp_path / "s.ppm", tmp_path / "s.ppm")[0] == 1


class TestBench:
    def test_counts_and_stats(self, capsys, frames):
        d = frames / "two"
        d.mkdir()
        for name in ("a.ppm", "b.ppm"):
            (d / name).write_bytes((frames / "hazy.ppm").read_bytes())
        code, out, _ = run(capsys, "bench", d, "--repeat", "3")
        rep = json.loads(out)
        assert code == 0 and rep["count"] == 6 and len(rep["durations"]) == 6
        dur = np.array(rep["durations"])
        assert abs(rep["mean"] - dur.mean()) <= 1e-12
        assert abs(rep["std"] - np.sqrt(np.mean((dur - dur.mean()) ** 2))) <= 1e-12
        assert rep["reference"]["platforms"]["laptop_cpu"]["mean"] == 0.031761

    def test_include_io_cleans_up(self, capsys, frames):
        code, _, _ = run(capsys, "bench", frames / "frames", "--include-io")
        assert code == 0
        assert sorted(p.name for p in (frames / "frames").iterdir()) == ["f00.ppm", "f01.ppm", "f02.ppm"]

    def test_empty_dir(self, capsys, tmp_path):
        assert run(capsys, "bench", tmp_path)[0] == 2

    def test_report_population_std(self):
        rep = BenchReport([1.0, 2.0, 3.0, 4.0], "dcp", "test")
        assert rep.mean == 2.5 and rep.std == pytest.approx(np.sqrt(1.25), abs=1e-15)


class TestJobs:
    @pytest.mark.parametrize(
        "argv",
        [
            ["score", "{d}/frames"],
            ["score", "{d}/frames", "--ref", "{d}/frames"],
            ["gate", "{d}/frames", "{d}/out"],
            ["enhance", "{d}/frames", "{d}/out"],
            ["match", "{d}/clear.ppm", "{d}/hazy.ppm"],
        ],
    )
    def test_jobs_identical(self, capsys, frames, argv):
        results = []
        for jobs in ("1", "4"):
            args = [a.format(d=frames) for a in argv] + ["--jobs", jobs]
            code, out, _ = run(capsys, *args)
            files = {}
            if (frames / "out").exists():
                files = {p.name: p.read_bytes() for p in sorted((frames / "out").iterdir())}
            results.append((code, out, files))
        assert results[0] == results[1]


def test_module_entry_point(frames):
    proc = subprocess.run(
        [sys.executable, "-m", "uwenhance", "score", str(frames / "clear.ppm")], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["uciqe"] > 0


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["enhance"])
    assert exc.value.code == 2
