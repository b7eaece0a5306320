"""Trajectory samples and CSV trace files.

A trace is a CSV with header ``t,x,y,rssi`` (seconds, meters, meters, dBm).
Optional extra columns: ``k`` (classified wall count), ``k_true`` (simulator
ground truth) and ``collision`` (0/1, marks the sample cell Occupied instead
of Free). Column order on write is t,x,y,rssi,k_true,k,collision with absent
columns omitted; floats are written with 6 decimals so reruns are
byte-identical.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .errors import EmptyTraceError


@dataclass
class TrajectorySample:
    index: int
    t: float
    x: float
    y: float
    rssi: float | None = None
    rssi_filtered: float | None = None
    k: int | None = None
    k_true: int | None = None
    collision: bool = False

    @property
    def position(self) -> tuple[float, float]:
        return (self.x, self.y)


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def save_trace(samples: list[TrajectorySample], path: str | Path) -> None:
    if not samples:
        raise EmptyTraceError("refusing to write a trace with no samples")
    have_rssi = any(s.rssi is not None for s in samples)
    have_ktrue = any(s.k_true is not None for s in samples)
    have_k = any(s.k is not None for s in samples)
    have_coll = any(s.collision for s in samples)
    fields = ["t", "x", "y"]
    if have_rssi:
        fields.append("rssi")
    if have_ktrue:
        fields.append("k_true")
    if have_k:
        fields.append("k")
    if have_coll:
        fields.append("collision")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for s in samples:
            row = [_fmt(s.t), _fmt(s.x), _fmt(s.y)]
            if have_rssi:
                row.append("" if s.rssi is None else _fmt(s.rssi))
            if have_ktrue:
                row.append("" if s.k_true is None else str(s.k_true))
            if have_k:
                row.append("" if s.k is None else str(s.k))
            if have_coll:
                row.append("1" if s.collision else "0")
            writer.writerow(row)


def load_trace(path: str | Path) -> list[TrajectorySample]:
    samples: list[TrajectorySample] = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyTraceError(f"{path}: no header row")
        missing = {"t", "x", "y"} - set(reader.fieldnames)
        if missing:
            raise EmptyTraceError(f"{path}: missing columns {sorted(missing)}")
        for i, row in enumerate(reader):
            rssi = row.get("rssi")
            k = row.get("k")
            k_true = row.get("k_true")
            coll = row.get("collision")
            samples.append(
                TrajectorySample(
                    index=i,
                    t=float(row["t"]),
                    x=float(row["x"]),
                    y=float(row["y"]),
                    rssi=float(rssi) if rssi not in (None, "") else None,
                    k=int(k) if k not in (None, "") else None,
                    k_true=int(k_true) if k_true not in (None, "") else None,
                    collision=bool(int(coll)) if coll not in (None, "") else False,
                )
            )
    if not samples:
        raise EmptyTraceError(f"{path}: no samples")
    return samples
