"""Release acceptance checks, one test per numbered criterion.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import json
import math
import time

import numpy as np
import pytest

import oracles
from uwenhance import synthetic
from uwenhance.calib import RatingSample, fit_mlr, holdout_eval
from uwenhance.cli import main
from uwenhance.dehaze import (
    ChannelSet,
    DehazeParams,
    dark_channel,
    dehaze,
    enhance_dcp,
    enhance_udcp,
    recover_radiance,
    synthesize_haze,
)
from uwenhance.features import match, match_count_report
from uwenhance.gate import GateConfig, Verdict, run_gate
from uwenhance.imgcore import encode_pnm, write_pnm
from uwenhance.quality import (
    DEFAULT_COEFFICIENTS,
    adversarial_loss,
    cycle_loss,
    mse,
    psnr,
    ssim,
    ssim_loss,
    uciqe,
)


@pytest.mark.criterion(1, "dark channel equals nested-min oracle on 100 random images, r in {0,1,2}, < 5 s")
def test_dark_channel_oracle():
    rng = np.random.default_rng(1)
    elapsed = 0.0
    for _ in range(100):
        h, w = rng.integers(1, 17, 2)
        px = rng.random((h, w, 3))
        for r in (0, 1, 2):
            t0 = time.perf_counter()
            got = dark_channel(px, DehazeParams(patch_radius=r)).plane
            elapsed += time.perf_counter() - t0
            assert np.array_equal(got, oracles.dark_channel(px, r))
    assert elapsed < 5.0


@pytest.mark.criterion(2, "haze model round trip within 1e-5 on 20 textures")
def test_haze_round_trip():
    rng = np.random.default_rng(2)
    for i in range(20):
        tex = synthetic.textured_scene(48, 64, seed=100 + i).pixels
        J = 0.05 + 0.9 * tex
        t = rng.uniform(0.2, 1.0, (48, 64))
        A = rng.uniform(0.3, 1.0, 3)
        back = recover_radiance(synthesize_haze(J, t, A), t, A).pixels
        assert np.max(np.abs(back - J)) <= 1e-5


@pytest.mark.criterion(3, "DCP and UDCP raise UCIQE on >= 90% of a 20-frame corpus hazed at t=0.4")
def test_haze_benefit_ordering():
    hazy = [synthetic.hazy(c, 0.4) for c in synthetic.corpus(20)]
    base = np.array([uciqe(h).uciqe for h in hazy])
    for enhance in (enhance_dcp, enhance_udcp):
        delta = np.array([uciqe(enhance(h)).uciqe for h in hazy]) - base
        assert np.mean(delta > 0) >= 0.9
        assert delta.mean() > 0


@pytest.mark.criterion(4, "UDCP and DCP agree when red never sets the minimum")
def test_udcp_dcp_consistency():
    rng = np.random.default_rng(4)
    for _ in range(5):
        px = rng.uniform(0.05, 0.9, (60, 80, 3))
        px[..., 0] = 1.0
        a = dehaze(px)
        b = dehaze(px, DehazeParams(channel_set=ChannelSet.GREEN_BLUE))
        assert np.array_equal(a.transmission.plane, b.transmission.plane)
        assert np.max(np.abs(a.output.pixels - b.output.pixels)) <= 1e-9


@pytest.mark.criterion(5, "metric identities and SSIM window oracle within 1e-6")
def test_metric_identities():
    rng = np.random.default_rng(5)
    x = rng.random((16, 16, 3))
    y = rng.random((16, 16, 3))
    assert psnr(x, x) == math.inf
    assert abs(ssim(x, x)[0] - 1.0) <= 1e-12
    assert mse(x, y) == mse(y, x)
    black, white = np.zeros((1, 1)), np.ones((1, 1))
    assert mse(black, white) == 65025.0
    assert psnr(black, white) == 0.0
    for _ in range(10):
        a, b = rng.random((16, 16)), rng.random((16, 16))
        assert abs(ssim(a, b)[0] - oracles.ssim_mean(a, b)) <= 1e-6


@pytest.mark.criterion(6, "adversarial, cycle and SSIM loss formulas")
def test_loss_formulas():
    rng = np.random.default_rng(6)
    assert abs(adversarial_loss([0.5], [0.5]) - 2 * math.log(0.5)) <= 1e-12
    x, y = rng.random((8, 8, 3)), rng.random((8, 8, 3))
    assert abs(cycle_loss(x, x + 0.1, y, y + 0.2) - 0.3) <= 1e-12
    assert ssim_loss(x, x) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.criterion(7, "MLR recovers generator coefficients on 155 noiseless rows; holdout on identity line")
def test_mlr_recovery():
    rng = np.random.default_rng(7)
    F = np.column_stack([rng.uniform(5, 15, 155), rng.uniform(20, 60, 155), rng.uniform(0, 1, 155)])
    rows = [RatingSample(*f, DEFAULT_COEFFICIENTS.combine(*f)) for f in F]
    fit = fit_mlr(rows)
    got = np.array([fit.coeffs.c1, fit.coeffs.c2, fit.coeffs.c3])
    assert np.max(np.abs(got - [0.1654, 0.0324, -0.1365])) <= 1e-9
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    res = holdout_eval(rows, 0.2, seed=7)
    assert all(abs(a - p) <= 1e-9 for a, p in res.pairs)


@pytest.mark.criterion(8, "gate passthrough, identity loop bound and trace invariant on 50 configs")
def test_gate_contract():
    frame = synthetic.corpus(1)[0]
    out = run_gate(frame, GateConfig(tau=uciqe(frame).uciqe - 1))
    assert out.verdict is Verdict.CLEAR_PASSTHROUGH
    assert encode_pnm(out.final) == encode_pnm(frame)

    hazy = synthetic.hazy(frame, 0.4)
    out = run_gate(hazy, GateConfig(tau=100, max_iterations=3), enhancer=lambda img: img)
    assert out.verdict is Verdict.ENHANCED_GAVE_UP and out.iterations_used == 3 and len(out.trace) == 4

    rng = np.random.default_rng(8)
    small = synthetic.hazy(synthetic.corpus(1, 40, 48)[0], 0.5)
    for _ in range(50):
        cfg = GateConfig(tau=float(rng.uniform(0, 8)), max_iterations=int(rng.integers(1, 6)),
                         enhancer=str(rng.choice(["dcp", "udcp"])))
        oc = run_gate(small, cfg)
        assert oc.iterations_used <= cfg.max_iterations
        assert len(oc.trace) == oc.iterations_used + 1
        assert all(s < cfg.tau for s in oc.trace[:-1])


@pytest.mark.criterion(9, "enhancement strictly increases matches on the hazy standard scene; matcher equals oracle")
def test_feature_matching_ordering():
    a, b = synthetic.standard_scene()
    ha, hb = synthetic.hazy(a, 0.25), synthetic.hazy(b, 0.25)
    hazy = match_count_report(ha, hb).matches
    enhanced = match_count_report(enhance_dcp(ha), enhance_dcp(hb)).matches
    print(f"hazy pair: {hazy} matches, enhanced pair: {enhanced} matches")
    assert enhanced > hazy

    rng = np.random.default_rng(9)
    da = rng.integers(0, 256, (100, 32), dtype=np.uint8)
    db = da[rng.permutation(100)] ^ (rng.random((100, 32)) < 0.3 * rng.random((100, 1))).astype(np.uint8)
    got = [(p.index_a, p.index_b, p.distance) for p in match(da, db)]
    assert got == oracles.match(da, db, 0.8)


@pytest.mark.criterion(10, "bench statistics recompute to 1e-12; 640x480 DCP mean <= 0.5 s")
def test_bench_harness(tmp_path, capsys):
    d = tmp_path / "frames"
    d.mkdir()
    for i in range(2):
        scene = synthetic.textured_scene(480, 640, seed=10 + i)
        write_pnm(d / f"frame{i}.ppm", synthetic.hazy(scene, 0.4))
    assert main(["bench", str(d), "--repeat", "3"]) == 0
    rep = json.loads(capsys.readouterr().out)
    dur = np.array(rep["durations"])
    assert len(dur) == rep["count"] == 6
    assert abs(rep["mean"] - dur.mean()) <= 1e-12
    assert abs(rep["std"] - math.sqrt(np.mean((dur - dur.mean()) ** 2))) <= 1e-12
    assert rep["mean"] <= 0.5


@pytest.mark.criterion(11, "non-timing commands are byte-identical with --jobs 1 and --jobs 4")
def test_determinism_across_jobs(tmp_path, capsys):
    frames = tmp_path / "frames"
    frames.mkdir()
    clear = synthetic.corpus(4, 48, 64)
    for i, c in enumerate(clear):
        write_pnm(frames / f"f{i}.ppm", synthetic.hazy(c, 0.4))
    write_pnm(tmp_path / "clear.ppm", clear[0])
    csv = tmp_path / "r.csv"
    rng = np.random.default_rng(11)
    lines = ["sigma_c,con_l,mu_s,score"]
    for _ in range(40):
        f = (rng.uniform(5, 15), rng.uniform(20, 60), rng.uniform(0, 1))
        lines.append("%r,%r,%r,%r" % (*f, min(5.0, DEFAULT_COEFFICIENTS.combine(*f) + rng.normal(0, 0.1))))
    csv.write_text("\n".join(lines) + "\n")
    commands = [
        ["enhance", frames, "{out}"],
        ["score", frames, "--ref", frames],
        ["gate", frames, "{out}"],
        ["fit", csv, "--holdout", "0.25", "--seed", "3"],
        ["match", tmp_path / "clear.ppm", frames / "f0.ppm"],
    ]
    for cmd in commands:
        runs = []
        for jobs in ("1", "4"):
            out_dir = tmp_path / f"out-{cmd[0]}-{jobs}"
            argv = [str(out_dir) if a == "{out}" else str(a) for a in cmd] + ["--jobs", jobs]
            assert main(argv) == 0
            stdout = capsys.readouterr().out
            files = sorted((p.name, p.read_bytes()) for p in out_dir.iterdir()) if out_dir.exists() else []
            runs.append((stdout, files))
        assert runs[0] == runs[1], cmd[0]
