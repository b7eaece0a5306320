"""RSSI to wall-count classification.

Pipeline: median-smooth the RSSI series, cluster into K+1 levels, derive the
K midpoint thresholds, then classify each reading by the staircase rule.
Stronger signal means fewer walls, so centroids are kept in strictly
descending dBm order and thresholds inherit that ordering.

The clustering step solves the 1-D k-means objective exactly with the
classic dynamic program over sorted samples (clusters of an optimal 1-D
solution are contiguous runs). That keeps the fit deterministic regardless
of seed; the ``seed`` argument is accepted for interface stability and
ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .errors import (
    DegenerateClustersError,
    EmptyTraceError,
    InvalidWindowError,
    NotDescendingError,
    TooFewSamplesError,
)


def smooth_rssi(values: np.ndarray, window: int = 11) -> np.ndarray:
    """Sliding median with an odd window, centered on each sample.

    Near the edges the window shrinks symmetrically (so it stays centered
    and odd); the first and last samples pass through unchanged. window=1 is
    the identity.
    """
    if window < 1 or window % 2 == 0:
        raise InvalidWindowError(f"window must be odd and positive, got {window}")
    x = np.asarray(values, np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected 1-D RSSI series, got shape {x.shape}")
    n = x.shape[0]
    if n == 0:
        raise EmptyTraceError("cannot smooth an empty series")
    half = window // 2
    out = x.copy()
    if half == 0 or n == 1:
        return out
    body_half = min(half, (n - 1) // 2)
    # interior: full (or largest odd) window via a strided view
    w = 2 * body_half + 1
    if n >= w:
        windows = np.lib.stride_tricks.sliding_window_view(x, w)
        out[body_half : n - body_half] = np.median(windows, axis=1)
    # edges: symmetric shrink
    for i in range(body_half):
        out[i] = np.median(x[: 2 * i + 1])
        out[n - 1 - i] = np.median(x[n - 1 - 2 * i :])
    return out


def fit_kmeans_1d(samples: np.ndarray, clusters: int, seed: int | None = None) -> np.ndarray:
    """Centroids of the exact 1-D k-means partition, strictly descending.

    Raises TooFewSamplesError when there are fewer samples than clusters and
    DegenerateClustersError when the data cannot support ``clusters``
    distinct levels (for example all samples equal).
    """
    del seed  # deterministic by construction
    x = np.sort(np.asarray(samples, np.float64))
    if clusters < 1:
        raise ValueError(f"clusters must be >= 1, got {clusters}")
    if x.shape[0] < clusters:
        raise TooFewSamplesError(f"{x.shape[0]} samples for {clusters} clusters")
    if np.unique(x).shape[0] < clusters:
        raise DegenerateClustersError(f"only {np.unique(x).shape[0]} distinct values for {clusters} clusters")
    s1 = np.concatenate(([0.0], np.cumsum(x)))
    s2 = np.concatenate(([0.0], np.cumsum(x * x)))
    bounds = kernels.kmeans_dp(s1, s2, clusters)
    edges = np.concatenate((bounds, [x.shape[0]]))
    means = np.array([x[edges[i] : edges[i + 1]].mean() for i in range(clusters)])
    centroids = means[::-1].copy()  # ascending data order -> descending dBm
    if np.any(np.diff(centroids) >= 0):
        raise DegenerateClustersError("coincident centroids; reduce the cluster count")
    return centroids


def thresholds_from_centroids(centroids: np.ndarray) -> np.ndarray:
    """Midpoints between consecutive centroids; strictly descending."""
    c = np.asarray(centroids, np.float64)
    if c.ndim != 1 or c.shape[0] < 2:
        raise ValueError("need at least two centroids")
    if np.any(np.diff(c) >= 0):
        raise NotDescendingError(f"centroids not strictly descending: {c}")
    return (c[:-1] + c[1:]) / 2.0


def classify_rssi(values, thresholds) -> np.ndarray:
    """Staircase classification: k = number of thresholds >= value.

    Thresholds are strictly descending (t_1 > ... > t_K). A value above t_1
    is class 0, a value equal to t_j lands in class j (the boundary belongs
    to the upper side), anything at or below t_K is class K.
    """
    t = np.asarray(thresholds, np.float64)
    if np.any(np.diff(t) >= 0):
        raise NotDescendingError(f"thresholds not strictly descending: {t}")
    v = np.asarray(values, np.float64)
    ascending = t[::-1]
    k = t.shape[0] - np.searchsorted(ascending, v, side="left")
    return k.astype(np.int32)


@dataclass
class RssiClassifier:
    """Fitted centroids and thresholds for one router."""

    k_max: int
    centroids: np.ndarray
    thresholds: np.ndarray

    @classmethod
    def fit(cls, rssi: np.ndarray, k_max: int, window: int = 11, seed: int | None = None) -> "RssiClassifier":
        filtered = smooth_rssi(np.asarray(rssi, np.float64), window)
        centroids = fit_kmeans_1d(filtered, k_max + 1, seed)
        return cls(k_max=k_max, centroids=centroids, thresholds=thresholds_from_centroids(centroids))

    def classify(self, values) -> np.ndarray:
        return classify_rssi(values, self.thresholds)

    def save(self, path: str | Path) -> None:
        lines = [f"k_max={self.k_max}"]
        lines.append("centroids=" + ",".join(repr(float(c)) for c in self.centroids))
        lines.append("thresholds=" + ",".join(repr(float(t)) for t in self.thresholds))
        Path(path).write_text("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "RssiClassifier":
        kv: dict[str, str] = {}
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            kv[key.strip()] = value.strip()
        return cls(
            k_max=int(kv["k_max"]),
            centroids=np.array([float(v) for v in kv["centroids"].split(",")]),
            thresholds=np.array([float(v) for v in kv["thresholds"].split(",")]),
        )
