"""Command-line front end.

Subcommands mirror the library modules: simulate, kvis, dense-invert,
classify, sparse-invert, evaluate, render. Maps are PGM files with a
``.meta`` sidecar; wherever a map path is accepted the builtin name
``three-room`` works too (built at ``--resolution``). Runtime failures
print one ``error: ...`` line to stderr and exit 1; usage problems exit 2.

Log verbosity comes from the SFW_LOG environment variable (debug, info,
warning, error).
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import maps
from .classify import RssiClassifier, smooth_rssi
from .dense import invert_dense
from .errors import WifimapError
from .evaluate import evaluate_maps
from .grid import GridMap, load_pgm, save_pgm
from .kvisibility import kvis_plot, load_kgrid_pgm, save_kgrid_pgm
from .render import render_belief, render_composite, render_kgrid, render_occupancy
from .simulate import PathLossParams, densify, generate_trace
from .sparse import MODE_GAUSSIAN, MODES, SparseParams, WallBeliefGrid, build_sparse_map
from .traces import load_trace, save_trace

log = logging.getLogger(__name__)

BUILTIN_MAP = "three-room"
_LOG_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}


def _setup_logging() -> None:
    raw = os.environ.get("SFW_LOG", "warning").strip().lower()
    level = _LOG_LEVELS.get(raw)
    if level is None:
        level = logging.WARNING
        logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
        log.warning("unknown SFW_LOG value %r; using warning", raw)
        return
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _parse_world(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _parse_cell(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected COL,ROW, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _parse_extent(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"expected XMIN,YMIN,XMAX,YMAX, got {text!r}")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if vals[2] <= vals[0] or vals[3] <= vals[1]:
        raise argparse.ArgumentTypeError("extent max must exceed min on both axes")
    return vals


def _load_map(spec: str, resolution: float | None = None) -> GridMap:
    if spec == BUILTIN_MAP:
        return maps.three_room_map(resolution or 0.05)
    return load_pgm(Path(spec))


def _read_config(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise WifimapError(f"bad config line (expected key=value): {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


# ----------------------------------------------------------------------
# subcommands


def _cmd_simulate(args: argparse.Namespace) -> int:
    grid = _load_map(args.map, args.resolution)
    cfg = _read_config(args.config) if args.config else {}

    def pick(flag_value, key, default):
        if flag_value is not None:
            return flag_value
        if key in cfg:
            return float(cfg[key])
        return default

    params = PathLossParams(
        p0=pick(args.p0, "p0", -30.0),
        n=pick(args.exponent, "exponent", 2.0),
        wall_loss=pick(args.wall_loss, "wall_loss", 12.0),
        noise_sigma=pick(args.noise_sigma, "noise_sigma", 0.0),
        seed=args.seed,
    )
    rate = pick(args.rate, "rate", 10.0)
    spacing = pick(args.spacing, "spacing", 0.05)

    if args.router is not None:
        router = args.router
    elif args.map == BUILTIN_MAP:
        router = maps.three_room_router()
    else:
        raise WifimapError("--router is required for maps loaded from files")

    if args.trajectory == "perimeter":
        if args.map != BUILTIN_MAP:
            raise WifimapError("--trajectory perimeter is only defined for the builtin map")
        points = maps.three_room_trajectory(spacing)
    else:
        waypoints = []
        with open(args.trajectory, newline="") as fh:
            for row in csv.DictReader(fh):
                waypoints.append((float(row["x"]), float(row["y"])))
        if not waypoints:
            raise WifimapError(f"no waypoints in {args.trajectory}")
        points = densify(waypoints, spacing)

    samples = generate_trace(grid, router, points, rate, params)
    save_trace(samples, Path(args.out))
    if args.export_map:
        save_pgm(grid, Path(args.export_map))
    log.info("wrote %d samples to %s", len(samples), args.out)
    return 0


def _cmd_kvis(args: argparse.Namespace) -> int:
    grid = _load_map(args.map, args.resolution)
    kgrid = kvis_plot(grid, args.router)
    save_kgrid_pgm(kgrid, Path(args.out), grid.resolution, grid.origin)
    return 0


def _cmd_dense_invert(args: argparse.Namespace) -> int:
    kgrid, carrier = load_kgrid_pgm(Path(args.kgrid))
    result = invert_dense(kgrid, args.router, carrier.resolution, carrier.origin)
    save_pgm(result, Path(args.out))
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    samples = load_trace(Path(args.trace))
    rssi = [s.rssi for s in samples]
    if any(v is None for v in rssi):
        raise WifimapError("trace has samples without rssi; cannot classify")
    clf = RssiClassifier.fit(rssi, args.kmax, window=args.window, seed=args.seed)
    smoothed = smooth_rssi(rssi, args.window)
    for s, f in zip(samples, smoothed):
        s.rssi_filtered = float(f)
        s.k = int(clf.classify(f))
    save_trace(samples, Path(args.out))
    if args.model:
        clf.save(Path(args.model))
    return 0


def _classify_k(samples, kmax: int | None, window: int, seed: int) -> str:
    """Fill sample.k in place, preferring explicit columns over RSSI."""
    if all(s.k is not None for s in samples):
        return "k column"
    if all(s.k_true is not None for s in samples):
        for s in samples:
            s.k = s.k_true
        return "k_true column"
    rssi = [s.rssi for s in samples]
    if any(v is None for v in rssi):
        raise WifimapError("trace has neither complete k columns nor complete rssi")
    if kmax is None:
        raise WifimapError("--kmax is required when k must be classified from rssi")
    clf = RssiClassifier.fit(rssi, kmax, window=window, seed=seed)
    for s, f in zip(samples, smooth_rssi(rssi, window)):
        s.rssi_filtered = float(f)
        s.k = int(clf.classify(f))
    return f"rssi classification (kmax={kmax}, window={window})"


def _cmd_sparse_invert(args: argparse.Namespace) -> int:
    samples = load_trace(Path(args.trace))
    k_source = _classify_k(samples, args.kmax, args.window, args.seed)
    log.info("k source: %s", k_source)

    if args.like:
        carrier = _load_map(args.like, args.resolution)
    else:
        if args.resolution is None:
            raise WifimapError("--resolution is required without --like")
        if args.extent:
            xmin, ymin, xmax, ymax = args.extent
        else:
            xs = [s.x for s in samples] + [args.router[0]]
            ys = [s.y for s in samples] + [args.router[1]]
            margin = 0.5
            xmin, ymin = min(xs) - margin, min(ys) - margin
            xmax, ymax = max(xs) + margin, max(ys) + margin
        cols = max(1, int(np.ceil((xmax - xmin) / args.resolution)))
        rows = max(1, int(np.ceil((ymax - ymin) / args.resolution)))
        carrier = GridMap.blank(cols, rows, args.resolution, (xmin, ymin))

    params = SparseParams(
        mode=args.mode,
        free_threshold=args.free_threshold,
        wall_threshold_frac=args.wall_threshold,
        threads=args.threads,
    )
    result = build_sparse_map(samples, args.router, carrier, params)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    save_pgm(result.occupancy, outdir / "occupancy.pgm")

    mmax = result.beliefs.max_mu()
    mu_gray = np.zeros(result.beliefs.mu.shape, np.uint8)
    if mmax > 0:
        scaled = np.clip(result.beliefs.mu / mmax, 0.0, 1.0) * 255.0
        mu_gray[result.beliefs.seen] = np.round(scaled[result.beliefs.seen]).astype(np.uint8)
    save_pgm(GridMap(mu_gray, carrier.resolution, carrier.origin), outdir / "belief_mu.pgm")

    with open(outdir / "belief.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["col", "row", "mu", "sigma"])
        rows_idx, cols_idx = np.nonzero(result.beliefs.seen)
        for r, c in zip(rows_idx.tolist(), cols_idx.tolist()):
            writer.writerow([c, r, f"{result.beliefs.mu[r, c]:.9f}", f"{result.beliefs.sigma[r, c]:.9f}"])

    save_pgm(
        GridMap(result.free_space.score(), carrier.resolution, carrier.origin),
        outdir / "free_score.pgm",
    )

    report = [
        f"k_source={k_source}",
        f"mode={params.mode}",
        f"free_threshold={params.free_threshold}",
        f"wall_threshold_frac={params.wall_threshold_frac:.6f}",
        f"threads={params.threads}",
        f"rays={result.stats['rays']}",
        f"zero_length={result.stats['zero_length']}",
        f"negative_dk={result.stats['negative_dk']}",
        f"ambiguous_boundary={result.stats['ambiguous_boundary']}",
        f"telescope_violations={result.stats['telescope_violations']}",
        f"coverage_fraction={result.coverage.mean():.6f}",
    ]
    (outdir / "report.txt").write_text("\n".join(report) + "\n")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    pred = _load_map(args.pred, args.resolution)
    truth = _load_map(args.truth, args.resolution)
    region = None
    if args.region:
        region = load_pgm(Path(args.region)).cells > 0
    report = evaluate_maps(pred, truth, args.tolerance, region)
    print(report.to_json() if args.json else report.to_text())
    return 0


def _cmd_render(args: argparse.Namespace) -> int:
    chosen = [bool(args.map), bool(args.kgrid), bool(args.belief), bool(args.composite)]
    if sum(chosen) != 1:
        raise WifimapError("pass exactly one of --map, --kgrid, --belief, --composite")
    if args.map:
        png = render_occupancy(_load_map(args.map, args.resolution), args.scale)
    elif args.kgrid:
        kgrid, _ = load_kgrid_pgm(Path(args.kgrid))
        png = render_kgrid(kgrid, args.scale)
    elif args.belief:
        like = _load_map(args.like, args.resolution) if args.like else None
        if like is None:
            raise WifimapError("--belief needs --like for the grid shape")
        beliefs = _load_belief_csv(Path(args.belief), like.cells.shape)
        png = render_belief(beliefs, args.scale)
    else:
        outdir = Path(args.composite)
        occupancy = load_pgm(outdir / "occupancy.pgm")
        beliefs = _load_belief_csv(outdir / "belief.csv", occupancy.cells.shape)
        trajectory = None
        if args.trace:
            samples = load_trace(Path(args.trace))
            _classify_k(samples, args.kmax, args.window, args.seed)
            trajectory = []
            for s in samples:
                c, r = occupancy.world_to_cell(s.position)
                trajectory.append((c, r, int(s.k)))
        png = render_composite(occupancy, beliefs, trajectory, args.scale)
    Path(args.out).write_bytes(png)
    return 0


def _load_belief_csv(path: Path, shape: tuple[int, int]) -> WallBeliefGrid:
    beliefs = WallBeliefGrid.blank(shape)
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            r, c = int(row["row"]), int(row["col"])
            beliefs.mu[r, c] = float(row["mu"])
            beliefs.sigma[r, c] = float(row["sigma"])
            beliefs.seen[r, c] = True
    return beliefs


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wifimap",
        description="Indoor occupancy mapping from trajectories and router signal strength.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=0, help="seed for anything randomized")
        p.add_argument("--threads", type=int, default=1, help="worker threads where supported")
        p.add_argument(
            "--resolution",
            type=float,
            default=None,
            help="cell size in meters (used when building builtin maps or blank grids)",
        )

    p = sub.add_parser("simulate", help="generate an RSSI trace over a map")
    common(p)
    p.add_argument("--map", required=True, help=f"map PGM path or '{BUILTIN_MAP}'")
    p.add_argument("--router", type=_parse_world, default=None, help="router X,Y in meters")
    p.add_argument(
        "--trajectory",
        default="perimeter",
        help="waypoint CSV (columns x,y) or 'perimeter' for the builtin loop",
    )
    p.add_argument("--spacing", type=float, default=None, help="sample spacing along the path, meters")
    p.add_argument("--rate", type=float, default=None, help="samples per second for timestamps")
    p.add_argument("--p0", type=float, default=None, help="RSSI at the reference distance, dBm")
    p.add_argument("--exponent", type=float, default=None, help="path loss exponent")
    p.add_argument("--wall-loss", dest="wall_loss", type=float, default=None, help="dB lost per wall")
    p.add_argument("--noise-sigma", dest="noise_sigma", type=float, default=None, help="noise stddev, dB")
    p.add_argument("--config", default=None, help="key=value file supplying any of the above")
    p.add_argument("--export-map", dest="export_map", default=None, help="also write the map PGM here")
    p.add_argument("--out", required=True, help="trace CSV to write")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("kvis", help="wall-count plot for a known map and router")
    common(p)
    p.add_argument("--map", required=True, help=f"map PGM path or '{BUILTIN_MAP}'")
    p.add_argument("--router", type=_parse_cell, required=True, help="router cell COL,ROW")
    p.add_argument("--out", required=True, help="k-grid PGM to write")
    p.set_defaults(func=_cmd_kvis)

    p = sub.add_parser("dense-invert", help="reconstruct walls from a complete k-grid")
    common(p)
    p.add_argument("--kgrid", required=True, help="k-grid PGM from kvis")
    p.add_argument("--router", type=_parse_cell, required=True, help="router cell COL,ROW")
    p.add_argument("--out", required=True, help="occupancy PGM to write")
    p.set_defaults(func=_cmd_dense_invert)

    p = sub.add_parser("classify", help="assign k to each trace sample from RSSI")
    common(p)
    p.add_argument("--trace", required=True, help="trace CSV with t,x,y,rssi")
    p.add_argument("--kmax", type=int, required=True, help="largest wall count to model")
    p.add_argument("--window", type=int, default=11, help="median filter window (odd)")
    p.add_argument("--model", default=None, help="write fitted centroids/thresholds here")
    p.add_argument("--out", required=True, help="trace CSV with k column to write")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("sparse-invert", help="occupancy map from a classified trace")
    common(p)
    p.add_argument("--trace", required=True, help="trace CSV (t,x,y plus k, k_true or rssi)")
    p.add_argument("--router", type=_parse_world, required=True, help="router X,Y in meters")
    p.add_argument("--mode", choices=MODES, default=MODE_GAUSSIAN, help="wall probability shape")
    p.add_argument("--window", type=int, default=11, help="median window when classifying rssi")
    p.add_argument("--kmax", type=int, default=None, help="kmax when classifying rssi")
    p.add_argument("--like", default=None, help="take grid geometry from this map")
    p.add_argument("--extent", type=_parse_extent, default=None, help="XMIN,YMIN,XMAX,YMAX in meters")
    p.add_argument("--free-threshold", type=int, default=160, help="score at or above which a cell is Free")
    p.add_argument(
        "--wall-threshold",
        type=float,
        default=0.5,
        help="fraction of the max belief mean that marks a wall",
    )
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_sparse_invert)

    p = sub.add_parser("evaluate", help="score a reconstruction against ground truth")
    common(p)
    p.add_argument("--pred", required=True, help="predicted occupancy PGM")
    p.add_argument("--truth", required=True, help=f"ground truth PGM or '{BUILTIN_MAP}'")
    p.add_argument("--tolerance", type=int, default=1, help="wall match tolerance in cells")
    p.add_argument("--region", default=None, help="PGM mask; zero cells are ignored")
    p.add_argument("--json", action="store_true", help="emit JSON instead of key=value lines")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("render", help="PNG views of maps, k-grids and beliefs")
    common(p)
    p.add_argument("--map", default=None, help="occupancy PGM to render")
    p.add_argument("--kgrid", default=None, help="k-grid PGM to render")
    p.add_argument("--belief", default=None, help="belief CSV to render (needs --like)")
    p.add_argument("--composite", default=None, help="sparse-invert output directory")
    p.add_argument("--like", default=None, help="map supplying the grid shape for --belief")
    p.add_argument("--trace", default=None, help="trace CSV for the trajectory overlay")
    p.add_argument("--kmax", type=int, default=None, help="kmax when the overlay must classify rssi")
    p.add_argument("--window", type=int, default=11, help="median window for overlay classification")
    p.add_argument("--scale", type=int, default=1, help="integer upscale factor")
    p.add_argument("--out", required=True, help="PNG to write")
    p.set_defaults(func=_cmd_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WifimapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
