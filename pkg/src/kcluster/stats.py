"""pi-values, log-log normalization, and left-skewed Gumbel significance tests."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .filtration import PersistenceDiagram

EULER_GAMMA = float(np.euler_gamma)
GUMBEL_MEAN = -EULER_GAMMA
GUMBEL_STD = float(np.pi / np.sqrt(6.0))
MIN_FIT_SIZE = 10


@dataclass(eq=False)
class PiSample:
    values: np.ndarray  # death/birth, strictly > 1, descending
    excluded: int = 0

    def __len__(self):
        return len(self.values)


@dataclass(eq=False)
class SignificanceReport:
    pi: np.ndarray
    ell: np.ndarray
    A: float
    B: float
    p_raw: np.ndarray
    p_corrected: np.ndarray
    significant_count: int
    n_essential: int
    level: float

    @property
    def cluster_count(self) -> int:
        return self.significant_count + self.n_essential

    def to_dict(self) -> dict:
        return {
            "pi": self.pi.tolist(),
            "ell": self.ell.tolist(),
            "p_raw": self.p_raw.tolist(),
            "p_corrected": self.p_corrected.tolist(),
            "significant_count": self.significant_count,
            "n_essential": self.n_essential,
            "cluster_count": self.cluster_count,
            "level": self.level,
            "A": self.A,
            "B": self.B,
        }

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=1)
            fh.write("\n")


def pi_values(dgm: PersistenceDiagram) -> PiSample:
    """Death/birth of the finite points, largest first.

    Essential classes are skipped.  Points born at 0, or with ratio 1,
    are counted in ``excluded``; zero births also raise a warning since
    they make the ratio meaningless (typically k = 1).
    """
    b, d = dgm.births, dgm.deaths
    zero = b <= 0
    if zero.any():
        warnings.warn(f"{int(zero.sum())} diagram points born at 0 excluded from pi-values", stacklevel=2)
    ok = ~zero
    pi = d[ok] / b[ok]
    keep = pi > 1
    return PiSample(np.sort(pi[keep])[::-1], int(zero.sum() + (~keep).sum()))


def loglog(pi) -> np.ndarray:
    return np.log(np.log(np.asarray(pi, dtype=float)))


def ell_normalize(ps: PiSample | np.ndarray) -> tuple[np.ndarray, float, float]:
    """Affine map of log log pi matching the left-skewed Gumbel mean and variance.

    Returns ``(ell, A, B)`` with ``ell = A * log(log(pi)) + B``.
    """
    pi = ps.values if isinstance(ps, PiSample) else np.asarray(ps, dtype=float)
    if len(pi) < MIN_FIT_SIZE:
        raise ValueError(f"need at least {MIN_FIT_SIZE} pi-values to normalize, got {len(pi)}")
    if np.any(pi <= 1):
        raise ValueError("pi-values must exceed 1")
    lam = loglog(pi)
    sd = lam.std()
    if not sd > 0:
        raise ValueError("log log pi has zero variance; cannot normalize")
    A = GUMBEL_STD / sd
    B = GUMBEL_MEAN - A * lam.mean()
    return A * lam + B, float(A), float(B)


def p_value(x):
    """Left-skewed Gumbel survival function ``exp(-exp(x))``."""
    return np.exp(-np.exp(x))


def lgumbel_cdf(x):
    return -np.expm1(-np.exp(x))


def significant_clusters(dgm: PersistenceDiagram, level: float = 0.05, max_tested: int | None = None) -> SignificanceReport:
    """Bonferroni-corrected Gumbel test of the most persistent finite points.

    Ranks ``1..m`` are tested with ``m = max_tested`` (default
    ``min(20, sample size)``); the significant count is the longest
    leading run of ranks whose corrected p-value is at most ``level``.
    """
    if not 0 < level < 1:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    ps = pi_values(dgm)
    ell, A, B = ell_normalize(ps)
    m = min(20, len(ps)) if max_tested is None else min(int(max_tested), len(ps))
    if m < 1:
        raise ValueError("max_tested must be >= 1")
    raw = p_value(ell[:m])
    corrected = np.minimum(1.0, m * raw)
    passing = corrected <= level
    count = m if passing.all() else int(np.argmin(passing))
    return SignificanceReport(
        pi=ps.values, ell=ell, A=A, B=B, p_raw=raw, p_corrected=corrected,
        significant_count=count, n_essential=dgm.n_essential, level=level,
    )


def ks_distance(sample, cdf=lgumbel_cdf) -> float:
    """Kolmogorov-Smirnov sup distance between a sample and a reference CDF."""
    sample = np.asarray(sample, dtype=float)
    if sample.size == 0:
        raise ValueError("empty sample")
    return float(sps.kstest(sample, cdf).statistic)


def ks_two_sample(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("empty sample")
    return float(sps.ks_2samp(a, b).statistic)
