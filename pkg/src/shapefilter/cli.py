"""Command-line interface.

Commands: ``filter`` (smooth a PGM mask sequence), ``weights`` (export the
per-frame weights only), ``eval`` (Dice/MSE between two mask directories),
``embed`` (2D trajectory of a contours CSV), ``synth`` (generate a
deterministic synthetic dataset).  Every run writes a ``manifest.json``
capturing the resolved configuration; ``--manifest`` re-runs from one.

Exit codes: 0 success; 1 internal error; 2 missing or empty input;
3 invalid configuration or degenerate weighting; 4 dimension mismatch;
5 disconnected neighborhood graph.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__, io
from .contours import canonical_seed, resample_contour
from .embedding import embedding_svg, isomap_embed, trajectory_length
from .errors import (
    AllWeightsZero,
    DimensionMismatch,
    DisconnectedGraph,
    EmptyInput,
    EmptyMask,
    EmptyPath,
    InsufficientFrames,
    InvalidLength,
    InvalidSampleCount,
    LengthMismatch,
    NonIncreasingTimes,
    SampleCountMismatch,
    ShapeFilterError,
    TooFewFrames,
    TooFewPoints,
    TooFewPositiveWeights,
)
from .metrics import dice, mse, rasterize
from .pipeline import FilterConfig, compute_weights, filter_prepared, prepare_sequence
from .srv import ShapePath, srv_transform
from .synthetic import SyntheticScenario, generate_synthetic_sequence

_EXIT_INPUT = 2
_EXIT_CONFIG = 3
_EXIT_DIMENSION = 4
_EXIT_DISCONNECTED = 5

_ERROR_EXIT_CODES = (
    (DisconnectedGraph, _EXIT_DISCONNECTED),
    ((DimensionMismatch, LengthMismatch, SampleCountMismatch,
      NonIncreasingTimes), _EXIT_DIMENSION),
    ((InvalidSampleCount, InvalidLength, AllWeightsZero,
      TooFewPositiveWeights), _EXIT_CONFIG),
    ((EmptyInput, EmptyMask, InsufficientFrames, TooFewFrames,
      TooFewPoints, EmptyPath), _EXIT_INPUT),
)


@dataclass
class RunConfig:
    """Resolved parameters of one CLI invocation (manifest payload)."""

    command: str
    input: str | None = None
    scheme: str = "bi3"
    rho: float = 0.6
    rho_pre: float = 0.05
    samples: int = 100
    a_const: float = 1.0
    c_const: float = 1.0
    flags: str | None = None
    k: int | None = None
    seed: int = 0
    frames: int = 12
    outliers: int = 1
    noise: float = 1.0
    size: str = "128x128"

    def manifest_config(self) -> dict:
        payload = asdict(self)
        payload.pop("command")
        return payload


def _fail(error: BaseException, code: int) -> int:
    name = type(error).__name__
    if isinstance(error, ValueError):
        name = "ConfigError"
    sys.stderr.write(json.dumps({"error": name, "detail": str(error)}) + "\n")
    return code


def _exit_code_for(error: ShapeFilterError) -> int:
    for types, code in _ERROR_EXIT_CODES:
        if isinstance(error, types):
            return code
    return 1


def _resolve_config(args: argparse.Namespace, command: str) -> RunConfig:
    """Defaults <- manifest values <- explicit CLI flags."""
    stored: dict = {}
    if getattr(args, "manifest", None):
        manifest = io.read_json(args.manifest)
        stored = manifest.get("config", {})
    config = RunConfig(command=command)
    for key in config.manifest_config():
        explicit = getattr(args, key, None)
        if explicit is not None:
            setattr(config, key, explicit)
        elif key in stored and stored[key] is not None:
            setattr(config, key, stored[key])
    return config


def _write_manifest(out_dir: Path, config: RunConfig) -> None:
    io.write_json(
        out_dir / "manifest.json",
        io.build_manifest(config.command, config.manifest_config(), __version__),
    )


def _require_out(args: argparse.Namespace) -> Path:
    if not args.out:
        raise ValueError("--out is required")
    return Path(args.out)


def _filter_config(config: RunConfig, n_frames: int) -> FilterConfig:
    outlier_flags = None
    if config.flags:
        outlier_flags = io.read_flags_csv(config.flags)
        if outlier_flags.size != n_frames:
            raise LengthMismatch(
                f"{outlier_flags.size} flags for {n_frames} frames"
            )
    return FilterConfig(
        n_samples=config.samples,
        rho=config.rho,
        rho_pre=config.rho_pre,
        scheme=config.scheme,
        a_const=config.a_const,
        c_const=config.c_const,
        outlier_flags=outlier_flags,
    )


def cmd_filter(args: argparse.Namespace) -> int:
    config = _resolve_config(args, "filter")
    if not config.input:
        raise ValueError("--in is required")
    out_dir = _require_out(args)
    masks = io.read_mask_dir(config.input)
    filter_config = _filter_config(config, masks.shape[0])
    contours, weights, _ = filter_prepared(
        prepare_sequence(masks, filter_config.n_samples), filter_config
    )
    height, width = masks.shape[1:]
    io.write_contours_csv(out_dir / "contours.csv", contours)
    io.write_weights_csv(out_dir / "weights.csv", weights.w)
    io.write_mask_dir(out_dir, np.stack(
        [rasterize(c, width, height) for c in contours], axis=0
    ))
    _write_manifest(out_dir, config)
    return 0


def cmd_weights(args: argparse.Namespace) -> int:
    config = _resolve_config(args, "weights")
    if not config.input:
        raise ValueError("--in is required")
    out_dir = _require_out(args)
    masks = io.read_mask_dir(config.input)
    filter_config = _filter_config(config, masks.shape[0])
    prepared = prepare_sequence(masks, filter_config.n_samples)
    weights = compute_weights(prepared, filter_config)
    io.write_weights_csv(out_dir / "weights.csv", weights.w)
    _write_manifest(out_dir, config)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    if not args.truth or not args.test:
        raise ValueError("--truth and --test are required")
    truth = io.read_mask_dir(args.truth)
    test = io.read_mask_dir(args.test)
    if truth.shape[0] != test.shape[0]:
        raise DimensionMismatch(
            f"frame counts differ: {truth.shape[0]} vs {test.shape[0]}"
        )
    payload = {
        "dice": dice(truth, test),
        "mse": mse(truth, test),
        "frames": int(truth.shape[0]),
    }
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    if args.out:
        out_dir = Path(args.out)
        io.write_json(out_dir / "metrics.json", payload)
        config = _resolve_config(args, "eval")
        _write_manifest(out_dir, config)
    return 0


def cmd_embed(args: argparse.Namespace) -> int:
    config = _resolve_config(args, "embed")
    if not config.input:
        raise ValueError("--in is required (contours CSV)")
    out_dir = _require_out(args)
    contours = io.read_contours_csv(config.input)
    if len(contours) < 3:
        raise TooFewFrames(f"need >= 3 frames, got {len(contours)}")
    counts = {c.n for c in contours}
    n = config.samples if getattr(args, "samples", None) is not None else (
        contours[0].n if len(counts) == 1 else config.samples
    )
    shapes = [
        srv_transform(canonical_seed(resample_contour(c, n))) for c in contours
    ]
    path = ShapePath(shapes, np.arange(len(shapes), dtype=float))
    k = config.k if config.k is not None else min(6, len(shapes) - 1)
    embedding = isomap_embed(path, k)
    io.write_embedding_csv(out_dir / "embedding.csv", embedding.coords)
    io._atomic_write_text(out_dir / "embedding.svg", embedding_svg(embedding))
    io.write_json(out_dir / "embedding_stats.json", {
        "stress": embedding.stress,
        "trajectory_length": trajectory_length(embedding),
        "k": k,
        "frames": len(shapes),
    })
    _write_manifest(out_dir, config)
    return 0


def _parse_size(size: str) -> tuple[int, int]:
    try:
        w_s, h_s = size.lower().split("x")
        return int(w_s), int(h_s)
    except Exception as exc:
        raise ValueError(f"--size must look like 128x128, got {size!r}") from exc


def _synth_scenario(config: RunConfig) -> SyntheticScenario:
    width, height = _parse_size(config.size)
    if config.frames < 2:
        raise ValueError(f"--frames must be >= 2, got {config.frames}")
    if not 0 <= config.outliers <= max(config.frames - 4, 0):
        raise ValueError(
            f"--outliers must fit interior frames, got {config.outliers}"
        )
    rng = np.random.default_rng(config.seed)
    chosen: list[int] = []
    candidates = list(range(2, config.frames - 2))
    rng.shuffle(candidates)
    for c in candidates:
        if all(abs(c - o) >= 3 for o in chosen):
            chosen.append(c)
        if len(chosen) == config.outliers:
            break
    return SyntheticScenario(
        n_frames=config.frames,
        width=width,
        height=height,
        center=(width / 2.0 - 8.0, height / 2.0 - 4.0),
        outlier_frames=tuple(sorted(chosen)),
        noise_sigma=config.noise,
        seed=config.seed,
    )


def cmd_synth(args: argparse.Namespace) -> int:
    config = _resolve_config(args, "synth")
    out_dir = _require_out(args)
    scenario = _synth_scenario(config)
    masks, truth = generate_synthetic_sequence(scenario)
    io.write_mask_dir(out_dir / "truth", truth)
    io.write_mask_dir(out_dir / "noisy", masks)
    _write_manifest(out_dir, config)
    return 0


def _add_common_filter_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--in", dest="input", help="input directory of PGM frames")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--scheme", choices=("unity", "piecewise", "bi3", "sgaussian"))
    parser.add_argument("--rho", type=float, help="data/smoothness trade-off in [0,1]")
    parser.add_argument("--rho-pre", dest="rho_pre", type=float,
                        help="trade-off of the reference pre-fit")
    parser.add_argument("--samples", type=int, help="boundary samples per frame")
    parser.add_argument("--A", dest="a_const", type=float,
                        help="amplifier of the bi3 scheme")
    parser.add_argument("--C", dest="c_const", type=float,
                        help="constant of the piecewise scheme")
    parser.add_argument("--flags", help="CSV of per-frame outlier flags (t,flag)")
    parser.add_argument("--manifest", help="load configuration from a manifest.json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shapefilter",
        description="Smooth time-indexed cell segmentation masks in shape space.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_filter = sub.add_parser("filter", help="filter a PGM mask sequence")
    _add_common_filter_flags(p_filter)
    p_filter.set_defaults(func=cmd_filter)

    p_weights = sub.add_parser("weights", help="export per-frame weights only")
    _add_common_filter_flags(p_weights)
    p_weights.set_defaults(func=cmd_weights)

    p_eval = sub.add_parser("eval", help="Dice/MSE between two mask directories")
    p_eval.add_argument("--truth", help="ground-truth PGM directory")
    p_eval.add_argument("--test", help="candidate PGM directory")
    p_eval.add_argument("--out", help="optional directory for metrics.json")
    p_eval.set_defaults(func=cmd_eval)

    p_embed = sub.add_parser("embed", help="2D trajectory of a contours CSV")
    p_embed.add_argument("--in", dest="input", help="contours CSV (t,i,x,y)")
    p_embed.add_argument("--out", help="output directory")
    p_embed.add_argument("--k", type=int, help="neighborhood size of the graph")
    p_embed.add_argument("--samples", type=int,
                         help="resample contours to this count first")
    p_embed.add_argument("--manifest", help="load configuration from a manifest.json")
    p_embed.set_defaults(func=cmd_embed)

    p_synth = sub.add_parser("synth", help="generate a synthetic dataset")
    p_synth.add_argument("--out", help="output directory (truth/ and noisy/)")
    p_synth.add_argument("--frames", type=int, help="number of frames")
    p_synth.add_argument("--outliers", type=int, help="number of outlier frames")
    p_synth.add_argument("--noise", type=float, help="boundary noise sigma in px")
    p_synth.add_argument("--seed", type=int, help="RNG seed")
    p_synth.add_argument("--size", help="frame size as WIDTHxHEIGHT")
    p_synth.add_argument("--manifest", help="load configuration from a manifest.json")
    p_synth.set_defaults(func=cmd_synth)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ShapeFilterError as error:
        return _fail(error, _exit_code_for(error))
    except ValueError as error:
        return _fail(error, _EXIT_CONFIG)
    except Exception as error:  # pragma: no cover - defensive
        return _fail(error, 1)


if __name__ == "__main__":
    sys.exit(main())
