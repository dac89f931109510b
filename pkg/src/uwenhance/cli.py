"""Command-line entry point: ``uwenhance {enhance,score,gate,fit,match,bench}``.

JSON goes to stdout, diagnostics to stderr.  Exit status is 0 on success,
1 when a computation fails and 2 for usage or I/O problems.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .calib import fit_mlr, holdout_eval, load_ratings
from .dehaze import ChannelSet, DehazeParams, dehaze
from .errors import PnmError, RatingsFormatError, UwEnhanceError
from .features import DetectConfig, match_count_report
from .gate import GateConfig, run_gate
from .imgcore import read_pnm, write_pnm
from .quality import DEFAULT_COEFFICIENTS, UciqeCoefficients, score

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_USAGE = 2

PNM_SUFFIXES = {".ppm", ".pgm", ".pnm"}

# per-frame enhancement time of the GAN enhancer on three platforms (seconds)
GAN_TIMING_REFERENCE = {
    "laptop_cpu": {"mean": 0.031761, "std": 0.002903},
    "raspberry_pi_3b_plus": {"mean": 0.077947, "std": 0.005827},
    "nvidia_xavier": {"mean": 0.04984, "std": 0.006043},
}


class UsageError(Exception):
    pass


@dataclass
class BenchReport:
    durations: list
    method: str
    platform: str
    include_io: bool = False
    frames: int = 0
    repeat: int = 1
    mean: float = field(init=False)
    std: float = field(init=False)

    def __post_init__(self):
        d = np.asarray(self.durations, dtype=np.float64)
        self.mean = float(d.mean())
        self.std = float(d.std())  # population

    @property
    def count(self) -> int:
        return len(self.durations)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "count": self.count,
            "frames": self.frames,
            "repeat": self.repeat,
            "include_io": self.include_io,
            "mean": self.mean,
            "std": self.std,
            "durations": list(self.durations),
            "platform": self.platform,
            "reference": {
                "note": "published per-image GAN enhancement times, for context only",
                "platforms": GAN_TIMING_REFERENCE,
            },
        }


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")
    sys.stdout.flush()


def _frames(directory: Path) -> list[Path]:
    return sorted(p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in PNM_SUFFIXES)


def _inputs(path: Path) -> list[Path]:
    if not path.exists():
        raise UsageError(f"{path}: no such file or directory")
    if path.is_dir():
        frames = _frames(path)
        if not frames:
            raise UsageError(f"{path}: no PNM frames found")
        return frames
    return [path]


def _map(fn, items, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _dehaze_params(args, channel_set=ChannelSet.ALL_RGB) -> DehazeParams:
    return DehazeParams(
        patch_radius=args.patch_radius,
        omega=args.omega,
        t_floor=args.t_floor,
        airlight_fraction=args.airlight_fraction,
        guided_radius=args.guided_radius,
        guided_eps=args.guided_eps,
        channel_set=channel_set,
    )


def _method_channels(method: str) -> ChannelSet:
    return ChannelSet.GREEN_BLUE if method == "udcp" else ChannelSet.ALL_RGB


def _load_coeffs(path) -> UciqeCoefficients:
    if path is None:
        return DEFAULT_COEFFICIENTS
    p = Path(path)
    if not p.exists():
        raise UsageError(f"{p}: no such file")
    try:
        d = json.loads(p.read_text(encoding="utf-8"))
        d = d.get("coefficients", d)
        return UciqeCoefficients.from_dict(d)
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise UsageError(f"{p}: invalid coefficients file ({exc})") from None


def _out_paths(inputs: list[Path], src: Path, out: Path) -> list[Path]:
    if src.is_dir():
        out.mkdir(parents=True, exist_ok=True)
        return [out / p.name for p in inputs]
    return [out]


# ---------------------------------------------------------------------------
# subcommands


def cmd_enhance(args) -> int:
    src, out = Path(args.input), Path(args.output)
    inputs = _inputs(src)
    outputs = _out_paths(inputs, src, out)
    params = _dehaze_params(args, _method_channels(args.method))
    frames = [read_pnm(p) for p in inputs]
    results = _map(lambda f: dehaze(f, params).output, frames, args.jobs)
    for path, img in zip(outputs, results):
        write_pnm(path, img)
    return EXIT_OK


def cmd_score(args) -> int:
    src = Path(args.input)
    inputs = _inputs(src)
    coeffs = _load_coeffs(args.coeffs)
    refs = [None] * len(inputs)
    if args.ref is not None:
        ref = Path(args.ref)
        if src.is_dir():
            if not ref.is_dir():
                raise UsageError("--ref must be a directory when scoring a directory")
            refs = [ref / p.name for p in inputs]
        else:
            refs = [ref]
        for r in refs:
            if not r.exists():
                raise UsageError(f"{r}: no such file")

    def one(pair):
        img_path, ref_path = pair
        img = read_pnm(img_path)
        ref_img = read_pnm(ref_path) if ref_path is not None else None
        return score(img, ref_img, coeffs).to_dict()

    reports = _map(one, list(zip(inputs, refs)), args.jobs)
    if src.is_dir():
        _emit([{"path": p.name, **r} for p, r in zip(inputs, reports)])
    else:
        _emit(reports[0])
    return EXIT_OK


def cmd_gate(args) -> int:
    src, out = Path(args.input), Path(args.output)
    inputs = _inputs(src)
    outputs = _out_paths(inputs, src, out)
    if args.config is None:
        config = GateConfig()
    else:
        cfg = Path(args.config)
        if not cfg.exists():
            raise UsageError(f"{cfg}: no such file")
        try:
            config = GateConfig.load(cfg)
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"{cfg}: invalid gate config ({exc})") from None
    frames = [read_pnm(p) for p in inputs]
    outcomes = _map(lambda f: run_gate(f, config), frames, args.jobs)
    for path, oc in zip(outputs, outcomes):
        write_pnm(path, oc.final)
    if src.is_dir():
        _emit([{"path": p.name, **oc.summary()} for p, oc in zip(inputs, outcomes)])
    else:
        _emit(outcomes[0].summary())
    return EXIT_OK


def cmd_fit(args) -> int:
    path = Path(args.ratings)
    if not path.exists():
        raise UsageError(f"{path}: no such file")
    samples = load_ratings(path)
    fit = fit_mlr(samples, intercept=args.intercept)
    result = {"fit": fit.to_dict(), "samples": len(samples)}
    if args.holdout is not None:
        result["holdout"] = holdout_eval(samples, args.holdout, args.seed, intercept=args.intercept).to_dict()
        result["holdout"]["seed"] = args.seed
        result["holdout"]["split_fraction"] = args.holdout
    _emit(result)
    return EXIT_OK


def cmd_match(args) -> int:
    paths = [Path(args.a), Path(args.b)]
    for p in paths:
        if not p.exists():
            raise UsageError(f"{p}: no such file")
    config = DetectConfig(
        n_features=args.n_features,
        fast_threshold=args.fast_threshold,
        levels=args.levels,
        scale_factor=args.scale_factor,
    )
    img_a, img_b = _map(read_pnm, paths, args.jobs)
    _emit(match_count_report(img_a, img_b, config, ratio=args.ratio).to_dict())
    return EXIT_OK


def cmd_bench(args) -> int:
    directory = Path(args.frames_dir)
    if not directory.is_dir():
        raise UsageError(f"{directory}: no such directory")
    paths = _frames(directory)
    if not paths:
        raise UsageError(f"{directory}: no PNM frames found")
    if args.repeat < 1:
        raise UsageError("--repeat must be >= 1")
    params = _dehaze_params(args, _method_channels(args.method))
    frames = None if args.include_io else [read_pnm(p) for p in paths]
    durations = []
    for _ in range(args.repeat):
        for i, p in enumerate(paths):
            if args.include_io:
                t0 = time.perf_counter()
                write_pnm(Path(args.scratch or directory) / f".bench-{p.name}", dehaze(read_pnm(p), params).output)
                durations.append(time.perf_counter() - t0)
            else:
                t0 = time.perf_counter()
                dehaze(frames[i], params)
                durations.append(time.perf_counter() - t0)
    if args.include_io:
        for p in paths:
            (Path(args.scratch or directory) / f".bench-{p.name}").unlink(missing_ok=True)
    note = f"{platform.platform()}; {platform.processor() or platform.machine()}; python {platform.python_version()}"
    report = BenchReport(
        durations=durations,
        method=args.method,
        platform=note,
        include_io=args.include_io,
        frames=len(paths),
        repeat=args.repeat,
    )
    _emit(report.to_dict())
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_dehaze_flags(p: argparse.ArgumentParser) -> None:
    d = DehazeParams()
    p.add_argument("--method", choices=("dcp", "udcp"), default="dcp")
    p.add_argument("--patch-radius", type=int, default=d.patch_radius)
    p.add_argument("--omega", type=float, default=d.omega)
    p.add_argument("--t-floor", type=float, default=d.t_floor)
    p.add_argument("--airlight-fraction", type=float, default=d.airlight_fraction)
    p.add_argument("--guided-radius", type=int, default=d.guided_radius)
    p.add_argument("--guided-eps", type=float, default=d.guided_eps)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uwenhance", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    jobs = argparse.ArgumentParser(add_help=False)
    jobs.add_argument("--jobs", type=int, default=1, help="worker threads (output is identical for any value)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enhance", parents=[jobs], help="dehaze a frame or a directory of frames")
    p.add_argument("input")
    p.add_argument("output")
    _add_dehaze_flags(p)
    p.set_defaults(func=cmd_enhance)

    p = sub.add_parser("score", parents=[jobs], help="UCIQE (and PSNR/SSIM against --ref) as JSON")
    p.add_argument("input")
    p.add_argument("--ref")
    p.add_argument("--coeffs", help="JSON file with c1, c2, c3")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("gate", parents=[jobs], help="quality-gated enhancement")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--config", help="gate config JSON")
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("fit", parents=[jobs], help="fit UCIQE coefficients to a ratings CSV")
    p.add_argument("ratings")
    p.add_argument("--holdout", type=float, help="fraction of samples held out for testing")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--intercept", action="store_true", help="add a constant term to the regression")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("match", parents=[jobs], help="feature-match two frames")
    p.add_argument("a")
    p.add_argument("b")
    d = DetectConfig()
    p.add_argument("--n-features", type=int, default=d.n_features)
    p.add_argument("--fast-threshold", type=float, default=d.fast_threshold)
    p.add_argument("--levels", type=int, default=d.levels)
    p.add_argument("--scale-factor", type=float, default=d.scale_factor)
    p.add_argument("--ratio", type=float, default=0.8)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("bench", help="time enhancement over a directory of frames")
    p.add_argument("frames_dir")
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--include-io", action="store_true", help="time decode and encode as well")
    p.add_argument("--scratch", help="directory for --include-io output files (default: frames_dir)")
    _add_dehaze_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"uwenhance {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PnmError, RatingsFormatError, OSError) as exc:
        print(f"uwenhance {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UwEnhanceError, ValueError, ArithmeticError) as exc:
        print(f"uwenhance {args.command}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
