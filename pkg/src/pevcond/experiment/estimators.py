"""
Estimators of an expectation from Monte Carlo samples.

Condition numbers are heavy tailed, so next to the sample mean with its normal
95% interval the bundle carries a median-of-means over contiguous index blocks
and a symmetric trimmed mean.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from pevcond.core.matpoly import PevcondError


Z_95 = 1.96


class EmptyInput(PevcondError, ValueError):
    """
    Raised when there are no samples to estimate from.
    """
    pass


@dataclass(frozen=True)
class Estimates:
    """
    ``mom_spread`` is the median absolute deviation of the block means.
    """
    count: int
    mean: float
    stderr: float
    ci95: Tuple[float, float]
    mom: float
    mom_spread: float
    trimmed: float


def median_of_means(samples: np.ndarray, blocks: int) -> Tuple[float, float]:
    """
    Median of the means of ``blocks`` contiguous blocks, and their median absolute deviation.

    Block sizes differ by at most one (numpy array_split).
    """
    blocks = max(1, min(int(blocks), len(samples)))
    means = np.array([block.mean() for block in np.array_split(samples, blocks)])
    center = float(np.median(means))
    return center, float(np.median(np.abs(means - center)))


def trimmed_mean(samples: np.ndarray, trim: float) -> float:
    """
    Mean after dropping floor(trim * N) samples from each end of the sorted data.
    """
    if not 0.0 <= trim < 0.5:
        raise ValueError(f"trim must lie in [0, 0.5), got {trim}")
    ordered = np.sort(samples)
    cut = int(math.floor(trim * len(ordered)))
    return float(ordered[cut:len(ordered) - cut].mean())


def estimate(
    samples: Sequence[float],
    mom_blocks: Optional[int] = None,
    trim: float = 0.0
) -> Estimates:
    """
    Estimator bundle for a nonempty sample.

    Args:
        samples: Finite samples in trial order
        mom_blocks: Median-of-means block count, ceil(sqrt(N)) when omitted
        trim: Fraction trimmed from each end for the trimmed mean

    Returns:
        Estimates: mean, stderr, ci95, mom, mom_spread, trimmed

    Raises:
        EmptyInput: If samples is empty
        ValueError: If a sample is not finite
    """
    values = np.asarray(samples, dtype=float)
    count = len(values)
    if count == 0:
        raise EmptyInput("Cannot estimate from an empty sample")
    if not np.all(np.isfinite(values)):
        raise ValueError("Samples must be finite")
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(count)) if count > 1 else 0.0
    blocks = math.ceil(math.sqrt(count)) if mom_blocks is None else mom_blocks
    mom, spread = median_of_means(values, blocks)
    return Estimates(
        count=count,
        mean=mean,
        stderr=stderr,
        ci95=(mean - Z_95 * stderr, mean + Z_95 * stderr),
        mom=mom,
        mom_spread=spread,
        trimmed=trimmed_mean(values, trim),
    )
