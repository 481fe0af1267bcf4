"""Gap-ratio statistics of Riemann zeta zeros.

Zero tables are plain text, one ordinate per line, ``#`` comments allowed,
optionally gzip-compressed. Windows are read in a single pass with per-bin
accumulators so memory does not grow with file size.
"""
import gzip
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .densities import MomentSet
from .errors import (DataIntegrityError, FitError, InsufficientStatisticsError,
                     InvalidArgumentError, ParseError)

K_MAX = 4
DEFAULT_BINS = 10
CHUNK = 1 << 16
TWO_PI = 2.0 * math.pi


def rho_bar(gamma):
    """Smoothed zero density log(gamma / 2 pi) / (2 pi)."""
    return np.log(np.asarray(gamma, dtype=float) / TWO_PI) / TWO_PI


@dataclass(frozen=True, eq=False)
class ZeroWindow:
    ordinates: np.ndarray
    start_index: int | None = None
    label: str = ""

    def __post_init__(self):
        g = np.asarray(self.ordinates, dtype=float)
        if g.ndim != 1:
            raise InvalidArgumentError("ordinates must be one-dimensional")
        if g.size and not g[0] > 14.0:
            raise DataIntegrityError(f"ordinate {g[0]} is not above 14")
        bad = np.flatnonzero(np.diff(g) <= 0)
        if bad.size:
            raise DataIntegrityError(f"ordinates not strictly increasing at position {bad[0] + 2}")
        object.__setattr__(self, "ordinates", g)

    def __len__(self):
        return self.ordinates.size

    @property
    def gamma_start(self):
        return float(self.ordinates[0])


def _open_text(path):
    path = str(path)
    if path.endswith(".gz"):
        return gzip.open(path, "rt")
    return open(path, "r")


def iter_ordinates(path, skip=0, take=None, chunk=CHUNK):
    """Yield arrays of ordinates (at most ``chunk`` each) from a zero table.

    Every yielded value is parsed and checked against its predecessor; errors
    carry the 1-based file line number. Skipped values are counted but only
    the last one is kept, for the monotonicity check.
    """
    if skip < 0:
        raise InvalidArgumentError("skip must be >= 0")
    seen = 0
    prev = None
    buf = []
    with _open_text(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            try:
                x = float(s)
            except ValueError:
                raise ParseError(f"cannot parse ordinate {s!r}", line=lineno) from None
            if not math.isfinite(x):
                raise ParseError(f"non-finite ordinate {s!r}", line=lineno)
            if prev is not None and not x > prev:
                raise DataIntegrityError(f"ordinate {s} does not exceed the previous value {prev!r}", line=lineno)
            prev = x
            seen += 1
            if seen <= skip:
                continue
            buf.append(x)
            if take is not None and seen - skip >= take:
                break
            if len(buf) >= chunk:
                yield np.array(buf)
                buf = []
    if buf:
        yield np.array(buf)


def load_zeros(path, skip=0, take=None, start_index=None, label=None):
    """Read ``take`` ordinates after skipping ``skip`` (all remaining when
    ``take`` is None). ``start_index`` defaults to ``skip + 1``, assuming the file
    starts at the first zero. Ratio statistics need at least three ordinates;
    shorter windows load but are rejected there."""
    if take is not None and take < 1:
        raise InvalidArgumentError(f"take must be >= 1, got {take}")
    parts = list(iter_ordinates(path, skip, take))
    g = np.concatenate(parts) if parts else np.empty(0)
    if take is not None and g.size < take:
        raise InsufficientStatisticsError(f"{path}: only {g.size} ordinates after skipping {skip}, wanted {take}")
    if g.size == 0:
        raise InsufficientStatisticsError(f"{path}: no ordinates after skipping {skip}")
    return ZeroWindow(g, skip + 1 if start_index is None else start_index,
                      label if label is not None else f"{path}[{skip}:{skip + g.size}]")


def convert_indexed(src, dst):
    """Rewrite a two-column ``index ordinate`` table as one ordinate per line.

    Indices must be consecutive. Returns ``(first_index, count)``.
    """
    first = None
    count = 0
    opener = gzip.open if str(dst).endswith(".gz") else open
    with _open_text(src) as fin, opener(dst, "wt") as fout:
        for lineno, line in enumerate(fin, 1):
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            parts = s.replace(",", " ").split()
            if len(parts) != 2:
                raise ParseError(f"expected two columns, got {len(parts)}", line=lineno)
            try:
                idx = int(parts[0])
                float(parts[1])
            except ValueError:
                raise ParseError(f"cannot parse {s!r}", line=lineno) from None
            if first is None:
                first = idx
                fout.write(f"# first index {idx}\n")
            elif idx != first + count:
                raise DataIntegrityError(f"index {idx} breaks the sequence (expected {first + count})", line=lineno)
            fout.write(parts[1] + "\n")
            count += 1
    if first is None:
        raise ParseError(f"{src}: no data lines")
    return first, count


def index_window(N):
    """``(skip, take)`` selecting zeros N .. floor(1.001 N + 1) inclusive."""
    if N < 1:
        raise InvalidArgumentError("N must be >= 1")
    last = N + N // 1000 + 1  # floor(1.001 N + 1) in exact integer arithmetic
    return N - 1, last - N + 1


def unfold(win):
    """Unfolded spacings (delta_plus, delta_minus) at every interior zero, with the
    density taken at the central zero."""
    g = win.ordinates if isinstance(win, ZeroWindow) else np.asarray(win, dtype=float)
    if g.size < 3:
        raise InvalidArgumentError("need at least 3 ordinates to unfold")
    rho = rho_bar(g[1:-1])
    return rho * (g[2:] - g[1:-1]), rho * (g[1:-1] - g[:-2])


class RatioAccumulator:
    """Streaming sums of r~^k in ``n_bins`` contiguous bins over a window with a
    known number of ratios. Ordinates are fed in order via :meth:`push`."""

    def __init__(self, n_ratios, n_bins=DEFAULT_BINS, k_max=K_MAX):
        if n_ratios < n_bins:
            raise InsufficientStatisticsError(f"{n_ratios} ratios cannot fill {n_bins} bins")
        self.n_ratios = n_ratios
        self.n_bins = n_bins
        self.k_max = k_max
        self.sums = np.zeros((n_bins, k_max))
        self.counts = np.zeros(n_bins, dtype=np.int64)
        self._tail = np.empty(0)
        self._pos = 0
        self._offset = 0

    def push(self, ordinates):
        x = np.concatenate([self._tail, np.asarray(ordinates, dtype=float)])
        if x.size < 3:
            self._tail = x
            return
        g = np.diff(x)
        bad = np.flatnonzero(g <= 0)
        if bad.size:
            raise DataIntegrityError(f"zero spacing or decreasing ordinates at ordinate {self._offset + bad[0] + 2}")
        rt = np.minimum(g[1:], g[:-1]) / np.maximum(g[1:], g[:-1])
        n = min(rt.size, self.n_ratios - self._pos)
        rt = rt[:n]
        idx = (np.arange(self._pos, self._pos + n) * self.n_bins) // self.n_ratios
        p = rt.copy()
        for k in range(self.k_max):
            self.sums[:, k] += np.bincount(idx, weights=p, minlength=self.n_bins)
            p *= rt
        self.counts += np.bincount(idx, minlength=self.n_bins)
        self._pos += n
        self._offset += x.size - 2
        self._tail = x[-2:]

    @property
    def complete(self):
        return self._pos == self.n_ratios

    def result(self):
        if not self.complete:
            raise InsufficientStatisticsError(f"window supplied {self._pos} of {self.n_ratios} ratios")
        return jackknife(self.sums, self.counts)


def jackknife(bin_sums, bin_counts):
    """Full-sample means and leave-one-bin-out jackknife errors.

    ``bin_sums`` is (B, K), ``bin_counts`` is (B,). Returns ``(means, errors)``.
    """
    sums = np.asarray(bin_sums, dtype=float)
    if sums.ndim == 1:
        sums = sums[:, None]
    counts = np.asarray(bin_counts, dtype=float)
    B = counts.size
    if B < 2:
        raise InsufficientStatisticsError("jackknife needs at least 2 bins")
    total = counts.sum()
    full = sums.sum(axis=0) / total
    loo = (sums.sum(axis=0)[None, :] - sums) / (total - counts)[:, None]
    err = np.sqrt((B - 1) / B * np.sum((loo - loo.mean(axis=0)) ** 2, axis=0))
    return full, err


@dataclass(frozen=True, eq=False)
class WindowStats:
    moments: np.ndarray
    jackknife_errors: np.ndarray
    mean_density: float
    n_ratios: int
    label: str = ""
    N: int | None = None
    gamma_N: float = math.nan

    def rows(self):
        """``window_label,N,gamma_N,rho_bar,k,moment,jackknife_err`` rows."""
        return [(self.label, self.N, self.gamma_N, self.mean_density, k + 1, float(m), float(e))
                for k, (m, e) in enumerate(zip(self.moments, self.jackknife_errors))]


def _check_bins(n, n_bins):
    if n_bins < 2:
        raise InvalidArgumentError("n_bins must be >= 2")
    if n < 10 * n_bins:
        raise InsufficientStatisticsError(f"window of {n} ordinates is shorter than 10 x {n_bins} bins")


def window_moments(win, n_bins=DEFAULT_BINS, k_max=K_MAX):
    """<r~^k>, k = 1..k_max, over a window with jackknife errors from ``n_bins``
    contiguous bins."""
    n = len(win)
    _check_bins(n, n_bins)
    acc = RatioAccumulator(n - 2, n_bins, k_max)
    acc.push(win.ordinates)
    m, e = acc.result()
    g0 = win.gamma_start
    return WindowStats(m, e, float(rho_bar(g0)), n - 2, win.label, win.start_index, g0)


def stream_window_stats(path, skip, take, n_bins=DEFAULT_BINS, k_max=K_MAX, label=None, start_index=None,
                        chunk=CHUNK):
    """Same as :func:`window_moments` on ``load_zeros(path, skip, take)``, in bounded memory."""
    _check_bins(take, n_bins)
    acc = RatioAccumulator(take - 2, n_bins, k_max)
    g0 = None
    got = 0
    for part in iter_ordinates(path, skip, take, chunk):
        if g0 is None:
            g0 = float(part[0])
            if not g0 > 14.0:
                raise DataIntegrityError(f"ordinate {g0} is not above 14")
        acc.push(part)
        got += part.size
    if got < take:
        raise InsufficientStatisticsError(f"{path}: only {got} ordinates after skipping {skip}, wanted {take}")
    m, e = acc.result()
    return WindowStats(m, e, float(rho_bar(g0)), take - 2,
                       label if label is not None else f"{path}[{skip}:{skip + take}]",
                       skip + 1 if start_index is None else start_index, g0)


@dataclass(frozen=True)
class FitRow:
    k: int
    slope: float
    intercept: float
    chi2: float
    slope_proportional: float
    chi2_proportional: float


def _wls(x, y, sigma, intercept):
    w = 1.0 / sigma**2
    if intercept:
        A = np.column_stack([np.ones_like(x), x])
    else:
        A = x[:, None]
    sw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(A * sw[:, None], y * sw, rcond=None)
    res = y - A @ coef
    return coef, float(np.sum(w * res**2))


def scaling_fit(stats, gue_moments):
    """Weighted fits of y = <r~^k>/E[r~^k] - 1 against x = rho_bar^-3.

    Both the affine fit and the intercept-free proportional fit are reported,
    one :class:`FitRow` per moment.
    """
    if len(stats) < 2:
        raise FitError("scaling fit needs at least 2 windows")
    x = np.array([s.mean_density for s in stats]) ** -3.0
    if np.ptp(x) == 0.0:
        raise FitError("all windows have the same density; slope is undetermined")
    exact = np.asarray(gue_moments.values if isinstance(gue_moments, MomentSet) else gue_moments, dtype=float)
    k_max = min(len(exact), min(len(s.moments) for s in stats))
    rows = []
    for k in range(k_max):
        m = np.array([s.moments[k] for s in stats])
        e = np.array([s.jackknife_errors[k] for s in stats])
        if np.any(e <= 0):
            raise FitError(f"non-positive jackknife error for k={k + 1}")
        y = m / exact[k] - 1.0
        sig = e / exact[k]
        (b, a), chi2 = _wls(x, y, sig, True)
        (c,), chi2p = _wls(x, y, sig, False)
        rows.append(FitRow(k + 1, float(a), float(b), chi2, float(c), chi2p))
    return rows


WINDOW_COLUMNS = ("window_label", "N", "gamma_N", "rho_bar", "k", "moment", "jackknife_err")
FIT_COLUMNS = ("k", "slope", "intercept", "chi2", "slope_proportional", "chi2_proportional")


def fit_rows(fits):
    return [(f.k, f.slope, f.intercept, f.chi2, f.slope_proportional, f.chi2_proportional) for f in fits]
