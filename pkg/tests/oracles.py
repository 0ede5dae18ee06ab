"""Independent measurement oracles used across test modules."""

from __future__ import annotations

import numpy as np


def track_pitch(samples: np.ndarray, sample_rate: int) -> float:
    """Autocorrelation pitch estimate with parabolic peak interpolation.

    Independent of the synthesizer: works on any rendered PCM clip.
    """
    x = np.asarray(samples, dtype=np.float64)
    # analyze the middle of the clip to dodge fades and gaps
    mid = len(x) // 2
    win = min(len(x), int(0.12 * sample_rate))
    seg = x[mid - win // 2 : mid + win // 2]
    seg = seg - seg.mean()
    corr = np.correlate(seg, seg, mode="full")[len(seg) - 1 :]
    lag_min = int(sample_rate / 500.0)
    lag_max = int(sample_rate / 60.0)
    window = corr[lag_min:lag_max]
    peak = int(np.argmax(window)) + lag_min
    if 0 < peak < len(corr) - 1:
        a, b, c = corr[peak - 1], corr[peak], corr[peak + 1]
        denom = a - 2 * b + c
        shift = 0.5 * (a - c) / denom if denom != 0 else 0.0
    else:
        shift = 0.0
    return sample_rate / (peak + shift)
