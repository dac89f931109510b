"""Fit UCIQE weights to human opinion scores by multiple linear regression."""

from __future__ import annotations

import csv
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InsufficientData, RatingsFormatError, SingularDesign
from .quality import UciqeCoefficients

__all__ = [
    "RatingSample",
    "FitResult",
    "HoldoutResult",
    "fit_mlr",
    "predict",
    "r_squared",
    "holdout_eval",
    "load_ratings",
]

MAX_CONDITION = 1e12


@dataclass(frozen=True)
class RatingSample:
    sigma_c: float
    con_l: float
    mu_s: float
    score: float

    def __post_init__(self):
        for name in ("sigma_c", "con_l", "mu_s", "score"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not 1.0 <= self.score <= 5.0:
            raise ValueError(f"score {self.score} outside the 1-5 rating scale")

    @property
    def features(self) -> tuple[float, float, float]:
        return (self.sigma_c, self.con_l, self.mu_s)


@dataclass(frozen=True)
class FitResult:
    coeffs: UciqeCoefficients
    r_squared: float
    residuals: list = field(default_factory=list)
    intercept: float = 0.0

    def to_dict(self) -> dict:
        return {
            "coefficients": self.coeffs.to_dict(),
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "residuals": list(self.residuals),
        }


@dataclass(frozen=True)
class HoldoutResult:
    fit: FitResult
    pairs: list  # (actual, predicted) for each held-out sample
    r_squared: float

    def to_dict(self) -> dict:
        return {
            "fit": self.fit.to_dict(),
            "test_pairs": [list(p) for p in self.pairs],
            "test_r_squared": self.r_squared,
        }


def _design(samples: Sequence[RatingSample]) -> tuple[np.ndarray, np.ndarray]:
    X = np.array([s.features for s in samples], dtype=np.float64).reshape(-1, 3)
    y = np.array([s.score for s in samples], dtype=np.float64)
    return X, y


def r_squared(actual, predicted) -> float:
    """``1 - SS_res / SS_tot`` with ``SS_tot`` taken about the mean of ``actual``."""
    actual = np.asarray(actual, dtype=np.float64)
    predicted = np.asarray(predicted, dtype=np.float64)
    ss_res = float(np.sum((actual - predicted) ** 2))
    ss_tot = float(np.sum((actual - actual.mean()) ** 2))
    if ss_tot == 0:
        return 1.0 if ss_res == 0 else -math.inf
    return 1.0 - ss_res / ss_tot


def fit_mlr(samples: Sequence[RatingSample], intercept: bool = False) -> FitResult:
    """Ordinary least squares of score on ``(sigma_c, con_l, mu_s)``.

    Solved through the normal equations.  The default model has no intercept,
    matching the three-term UCIQE form; ``intercept=True`` adds a constant
    column.  A Gram matrix with condition number above 1e12 is rejected.
    """
    samples = list(samples)
    if len(samples) < 3:
        raise InsufficientData(f"need at least 3 samples, got {len(samples)}")
    X, y = _design(samples)
    if intercept:
        X = np.column_stack([X, np.ones(len(y))])
    if len(y) < X.shape[1]:
        raise InsufficientData("fewer samples than unknowns")
    gram = X.T @ X
    if np.linalg.matrix_rank(X) < X.shape[1] or np.linalg.cond(gram) > MAX_CONDITION:
        raise SingularDesign("feature columns are (nearly) collinear")
    beta = np.linalg.solve(gram, X.T @ y)
    fitted = X @ beta
    resid = y - fitted
    coeffs = UciqeCoefficients(*beta[:3])
    return FitResult(
        coeffs=coeffs,
        r_squared=r_squared(y, fitted),
        residuals=resid.tolist(),
        intercept=float(beta[3]) if intercept else 0.0,
    )


def predict(coeffs: UciqeCoefficients, features, intercept: float = 0.0) -> float:
    """Linear UCIQE prediction for one ``(sigma_c, con_l, mu_s)`` triple."""
    if isinstance(features, RatingSample):
        features = features.features
    sigma_c, con_l, mu_s = features
    return coeffs.combine(sigma_c, con_l, mu_s) + intercept


def holdout_eval(
    samples: Sequence[RatingSample], split_fraction: float = 0.2, seed: int = 0, intercept: bool = False
) -> HoldoutResult:
    """Fit on a seeded random train split and score the held-out part.

    ``split_fraction`` is the share of samples held out for testing.
    """
    if not 0 < split_fraction < 1:
        raise ValueError("split_fraction must be in (0, 1)")
    samples = list(samples)
    n = len(samples)
    n_test = int(round(split_fraction * n))
    if n_test == 0 or n_test == n:
        raise InsufficientData(f"split {split_fraction} of {n} samples leaves an empty side")
    perm = np.random.default_rng(seed).permutation(n)
    test = [samples[i] for i in perm[:n_test]]
    train = [samples[i] for i in perm[n_test:]]
    fit = fit_mlr(train, intercept=intercept)
    pairs = [(s.score, predict(fit.coeffs, s, fit.intercept)) for s in test]
    actual, pred = zip(*pairs)
    return HoldoutResult(fit=fit, pairs=pairs, r_squared=r_squared(actual, pred))


def load_ratings(path, scorer=None) -> list[RatingSample]:
    """Read a ratings CSV.

    Two layouts are accepted: ``sigma_c,con_l,mu_s,score`` with precomputed
    features, or ``path,score`` where each image (relative paths resolve
    against the CSV's folder) is scored with ``scorer`` (UCIQE components by
    default).  Repeated ratings of one image are averaged.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise RatingsFormatError("empty ratings file", line=1)
    header = [h.strip() for h in rows[0]]
    body = [(i + 2, r) for i, r in enumerate(rows[1:]) if any(c.strip() for c in r)]
    if header == ["sigma_c", "con_l", "mu_s", "score"]:
        return [_feature_row(lineno, r) for lineno, r in body]
    if header == ["path", "score"]:
        return _path_rows(path.parent, body, scorer)
    raise RatingsFormatError(f"unrecognised header {header!r}", line=1)


def _floats(lineno, cells, n):
    if len(cells) != n:
        raise RatingsFormatError(f"expected {n} fields, got {len(cells)}", line=lineno)
    try:
        vals = [float(c) for c in cells]
    except ValueError as exc:
        raise RatingsFormatError(str(exc), line=lineno) from None
    if not all(math.isfinite(v) for v in vals):
        raise RatingsFormatError("non-finite value", line=lineno)
    return vals


def _feature_row(lineno, cells) -> RatingSample:
    vals = _floats(lineno, cells, 4)
    try:
        return RatingSample(*vals)
    except ValueError as exc:
        raise RatingsFormatError(str(exc), line=lineno) from None


def _path_rows(base: Path, body: Iterable, scorer) -> list[RatingSample]:
    if scorer is None:
        from .imgcore import read_pnm
        from .quality import uciqe_components

        def scorer(p):
            return uciqe_components(read_pnm(p))

    scores: "OrderedDict[str, list[float]]" = OrderedDict()
    for lineno, cells in body:
        if len(cells) != 2:
            raise RatingsFormatError(f"expected 2 fields, got {len(cells)}", line=lineno)
        (score,) = _floats(lineno, cells[1:], 1)
        scores.setdefault(cells[0].strip(), []).append(score)
    out = []
    for rel, vals in scores.items():
        p = Path(rel)
        if not p.is_absolute():
            p = base / p
        out.append(RatingSample(*scorer(p), float(np.mean(vals))))
    return out
