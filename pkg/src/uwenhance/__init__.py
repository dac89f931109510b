"""Real-time enhancement and quality gating for underwater vision.

Dark-channel dehazing (DCP/UDCP), UCIQE/PSNR/SSIM scoring, a quality-gated
enhancement loop and an ORB-style matcher to measure downstream benefit.
"""

__version__ = "0.1.0"

from .imgcore import (  # noqa: E402
    ImageBuffer,
    PixelColor,
    as_image,
    decode_pnm,
    encode_pnm,
    read_pnm,
    write_pnm,
)
from .dehaze import DehazeParams, ChannelSet, enhance_dcp, enhance_udcp, synthesize_haze  # noqa: E402
from .quality import DEFAULT_COEFFICIENTS, QualityReport, UciqeCoefficients, psnr, ssim, uciqe  # noqa: E402
from .gate import GateConfig, GateOutcome, Verdict, run_gate  # noqa: E402

__all__ = [
    "ImageBuffer",
    "PixelColor",
    "as_image",
    "decode_pnm",
    "encode_pnm",
    "read_pnm",
    "write_pnm",
    "DehazeParams",
    "ChannelSet",
    "enhance_dcp",
    "enhance_udcp",
    "synthesize_haze",
    "DEFAULT_COEFFICIENTS",
    "QualityReport",
    "UciqeCoefficients",
    "psnr",
    "ssim",
    "uciqe",
    "GateConfig",
    "GateOutcome",
    "Verdict",
    "run_gate",
]
