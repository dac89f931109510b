"""Quality-gated enhancement loop.

A frame whose UCIQE already reaches ``tau`` passes through untouched.  Below
the threshold the configured enhancer is applied to its own output again and
again, re-scoring after every pass, until the score reaches ``tau`` or
``max_iterations`` passes have run.
"""

from __future__ import annotations

import enum
import json
import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from .dehaze import DehazeParams, enhance_dcp, enhance_udcp
from .errors import DegenerateLabels, GateError, PnmError
from .imgcore import ImageBuffer, as_image, read_pnm, write_pnm
from .quality import DEFAULT_COEFFICIENTS, UciqeCoefficients, uciqe

__all__ = [
    "Verdict",
    "GateConfig",
    "GateOutcome",
    "ENHANCERS",
    "register_enhancer",
    "run_gate",
    "run_external_enhancer",
    "calibrate_tau",
    "balanced_accuracy",
    "DEFAULT_TAU",
    "TIMEOUT_ENV",
]

# calibrate_tau on synthetic.corpus() (20 clear frames) against their t=0.4
# hazed copies; deployments should recalibrate on their own footage
DEFAULT_TAU = 4.6053
DEFAULT_TIMEOUT = 10.0
TIMEOUT_ENV = "UWENHANCE_EXTERNAL_TIMEOUT"

Enhancer = Callable[[ImageBuffer], ImageBuffer]

ENHANCERS: dict[str, Enhancer] = {
    "dcp": enhance_dcp,
    "udcp": enhance_udcp,
}


def register_enhancer(name: str, fn: Enhancer) -> None:
    """Make ``fn`` selectable as ``GateConfig.enhancer``."""
    if name == "external":
        raise ValueError("'external' is reserved for the subprocess plugin")
    ENHANCERS[name] = fn


class Verdict(str, enum.Enum):
    CLEAR_PASSTHROUGH = "CLEAR_PASSTHROUGH"
    ENHANCED_CLEAR = "ENHANCED_CLEAR"
    ENHANCED_GAVE_UP = "ENHANCED_GAVE_UP"


@dataclass(frozen=True)
class GateConfig:
    tau: float = DEFAULT_TAU
    max_iterations: int = 3
    enhancer: str = "dcp"
    external_command: Optional[str] = None
    coeffs: UciqeCoefficients = DEFAULT_COEFFICIENTS
    dehaze: DehazeParams = field(default_factory=DehazeParams)

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.enhancer == "external":
            if not self.external_command:
                raise ValueError("external enhancer needs external_command")
        else:
            if self.external_command:
                raise ValueError("external_command is only valid with enhancer 'external'")
            if self.enhancer not in ENHANCERS:
                raise ValueError(f"unknown enhancer {self.enhancer!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "GateConfig":
        coeffs = d.get("coefficients")
        return cls(
            tau=float(d["tau"]) if "tau" in d else DEFAULT_TAU,
            max_iterations=int(d.get("max_iterations", 3)),
            enhancer=d.get("enhancer", "dcp"),
            external_command=d.get("external_command"),
            coeffs=UciqeCoefficients.from_dict(coeffs) if coeffs else DEFAULT_COEFFICIENTS,
        )

    @classmethod
    def load(cls, path) -> "GateConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "max_iterations": self.max_iterations,
            "enhancer": self.enhancer,
            "external_command": self.external_command,
            "coefficients": self.coeffs.to_dict(),
        }


@dataclass(frozen=True)
class GateOutcome:
    final: ImageBuffer
    iterations_used: int
    trace: list
    verdict: Verdict

    def summary(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "iterations_used": self.iterations_used,
            "trace": list(self.trace),
        }


def _enhancer_for(config: GateConfig) -> Enhancer:
    if config.enhancer == "external":
        return lambda img: run_external_enhancer(img, config.external_command)
    fn = ENHANCERS[config.enhancer]
    if fn in (enhance_dcp, enhance_udcp):
        return lambda img: fn(img, config.dehaze)
    return fn


def run_gate(img, config: GateConfig, enhancer: Optional[Enhancer] = None) -> GateOutcome:
    """Score, then enhance until clear or out of iterations.

    ``enhancer`` overrides the one named in ``config``.  Any failure inside
    the enhancer is re-raised as :class:`GateError` tagged with the 1-based
    iteration.
    """
    img = as_image(img)
    fn = enhancer or _enhancer_for(config)
    score = uciqe(img, config.coeffs).uciqe
    trace = [score]
    if score >= config.tau:
        return GateOutcome(img, 0, trace, Verdict.CLEAR_PASSTHROUGH)
    current = img
    for it in range(1, config.max_iterations + 1):
        try:
            current = as_image(fn(current))
        except GateError as exc:
            raise GateError(str(exc), iteration=it, stderr=exc.stderr) from exc
        except Exception as exc:
            raise GateError(f"enhancer failed: {exc}", iteration=it) from exc
        if current.shape != img.shape:
            raise GateError(f"enhancer changed frame shape to {current.shape}", iteration=it)
        score = uciqe(current, config.coeffs).uciqe
        trace.append(score)
        if score >= config.tau:
            return GateOutcome(current, it, trace, Verdict.ENHANCED_CLEAR)
    return GateOutcome(current, config.max_iterations, trace, Verdict.ENHANCED_GAVE_UP)


def _timeout() -> float:
    raw = os.environ.get(TIMEOUT_ENV)
    if raw is None:
        return DEFAULT_TIMEOUT
    try:
        return float(raw)
    except ValueError:
        raise GateError(f"{TIMEOUT_ENV}={raw!r} is not a number") from None


def run_external_enhancer(img, command_template: str, timeout: Optional[float] = None) -> ImageBuffer:
    """Enhance through an external program speaking PNM files.

    The frame is written to a temporary file; ``{in}`` and ``{out}`` in the
    template are replaced by the input and expected output paths.  The
    template is split shell-style and run without a shell.  Timeout defaults
    to 10 s, overridable by the ``UWENHANCE_EXTERNAL_TIMEOUT`` environment
    variable.
    """
    img = as_image(img)
    if "{in}" not in command_template or "{out}" not in command_template:
        raise GateError("command template needs {in} and {out} placeholders")
    if timeout is None:
        timeout = _timeout()
    ext = ".ppm" if img.channels == 3 else ".pgm"
    with tempfile.TemporaryDirectory(prefix="uwenhance-") as tmp:
        src = os.path.join(tmp, "in" + ext)
        dst = os.path.join(tmp, "out" + ext)
        write_pnm(src, img)
        argv = [tok.replace("{in}", src).replace("{out}", dst) for tok in shlex.split(command_template)]
        try:
            proc = subprocess.run(argv, capture_output=True, timeout=timeout)
        except subprocess.TimeoutExpired:
            raise GateError(f"external enhancer timed out after {timeout} s") from None
        except OSError as exc:
            raise GateError(f"could not start external enhancer: {exc}") from None
        stderr = proc.stderr.decode("utf-8", "replace")
        if proc.returncode != 0:
            raise GateError(f"external enhancer exited with status {proc.returncode}", stderr=stderr)
        if not os.path.exists(dst):
            raise GateError("external enhancer produced no output file", stderr=stderr)
        try:
            out = read_pnm(dst)
        except PnmError as exc:
            raise GateError(f"external enhancer output unreadable: {exc}", stderr=stderr) from None
    if out.shape != img.shape:
        raise GateError(f"external enhancer output has shape {out.shape}, expected {img.shape}")
    return out


def balanced_accuracy(scores: Sequence[float], labels: Sequence[bool], tau: float) -> float:
    """Mean of the clear-frame and blurry-frame recall for ``score >= tau``."""
    tp = sum(1 for s, c in zip(scores, labels) if c and s >= tau)
    tn = sum(1 for s, c in zip(scores, labels) if not c and s < tau)
    n_pos = sum(1 for c in labels if c)
    n_neg = len(labels) - n_pos
    return 0.5 * (tp / n_pos + tn / n_neg)


def _as_label(v) -> bool:
    if isinstance(v, str):
        key = v.strip().lower()
        if key == "clear":
            return True
        if key in ("blurry", "hazy"):
            return False
        raise ValueError(f"unknown label {v!r}")
    return bool(v)


def calibrate_tau(corpus: Sequence[tuple]) -> float:
    """Threshold that best separates clear from blurry frames.

    ``corpus`` holds ``(uciqe, label)`` pairs (an optional leading path is
    ignored), with labels ``True``/``"clear"`` or ``False``/``"blurry"``.
    Candidates are the midpoints between consecutive distinct scores plus the
    lowest score; the one with the highest balanced accuracy wins, ties going
    to the lower threshold.
    """
    scores, labels = [], []
    for row in corpus:
        row = tuple(row)
        if len(row) == 3:
            row = row[1:]
        scores.append(float(row[0]))
        labels.append(_as_label(row[1]))
    if not any(labels) or all(labels):
        raise DegenerateLabels("corpus needs both clear and blurry frames")
    distinct = sorted(set(scores))
    candidates = [distinct[0]] + [(lo + hi) / 2 for lo, hi in zip(distinct, distinct[1:])]
    best_tau, best_ba = None, -1.0
    for tau in candidates:
        ba = balanced_accuracy(scores, labels, tau)
        if ba > best_ba:
            best_tau, best_ba = tau, ba
    return best_tau
