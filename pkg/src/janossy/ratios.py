import numpy as np

from .errors import DataIntegrityError


def gap_ratios(levels):
    """r_n = (E_{n+1} - E_n) / (E_n - E_{n-1}) for every interior level."""
    x = np.asarray(levels, dtype=float)
    if x.size < 3:
        return np.empty(0)
    g = np.diff(x)
    if np.any(g <= 0):
        i = int(np.argmax(g <= 0))
        raise DataIntegrityError(f"levels not strictly increasing at position {i + 1}")
    return g[1:] / g[:-1]


def fold(r):
    """r~ = min(r, 1/r), written to stay exact at r = 1 and finite at r = 0."""
    r = np.asarray(r, dtype=float)
    return np.where(r > 1.0, 1.0 / np.where(r > 1.0, r, 1.0), r)


def tilde_ratios(levels):
    """r~_n directly from the gaps: min(g_+, g_-) / max(g_+, g_-)."""
    x = np.asarray(levels, dtype=float)
    if x.size < 3:
        return np.empty(0)
    g = np.diff(x)
    if np.any(g <= 0):
        i = int(np.argmax(g <= 0))
        raise DataIntegrityError(f"levels not strictly increasing at position {i + 1}")
    return np.minimum(g[1:], g[:-1]) / np.maximum(g[1:], g[:-1])
