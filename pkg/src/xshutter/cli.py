"""Command-line entry point.

Exit codes: 0 ok, 2 configuration error, 3 I/O error, 4 solver divergence.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import kernels
from .decompose import DecomposeConfig
from .errors import ConfigError, ParameterError, SolverDivergenceError
from .harness import ExperimentSpec, run_experiment
from .io import load_config
from .synthetic import TEXTURES

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_DIVERGED = 0, 2, 3, 4

log = logging.getLogger("xshutter")


def _lengths(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("no lengths given")
    return values


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON experiment config")
    common.add_argument("--seed", type=_seed, help="random seed (overrides the config)")
    common.add_argument("--threads", type=int,
                        help="kernel threads; 1 selects the reproducible single-threaded mode "
                             "(default: all cores)")
    common.add_argument("--bit-depth", type=int, choices=(8, 16), default=16)
    common.add_argument("--gamma", type=float, default=1.0,
                        help="display gamma of the PNGs; 1 means they hold linear intensities")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="xshutter",
                                     description="Latent-sequence recovery from a blurred / rolling-shutter image pair.")
    sub = parser.add_subparsers(dest="mode", required=True)

    p = sub.add_parser("synthesize", parents=[common], help="render (B, R) and ground truth from a sequence")
    p.add_argument("--input", type=Path, help="latent sequence directory (omit for a procedural scene)")
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--scene", choices=TEXTURES, default="smooth")
    p.add_argument("--velocity", type=int, default=2, help="horizontal speed in px per latent frame")
    p.add_argument("--size", type=int, default=128)
    p.add_argument("--n-latent", type=int, default=9)
    p.add_argument("--suite", action="store_true", help="write all 16 cases of the synthetic suite")

    p = sub.add_parser("decompose", parents=[common], help="recover the latent frames of a pair")
    p.add_argument("--input", type=Path, required=True, help="pair directory or a directory of pairs")
    p.add_argument("--output", type=Path, required=True)

    p = sub.add_parser("evaluate", parents=[common], help="score recovered frames against ground truth")
    p.add_argument("--input", type=Path, required=True, help="recovered sequence(s)")
    p.add_argument("--gt", type=Path, required=True, help="ground-truth sequence(s)")
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--lengths", type=_lengths, help="evaluation lengths, e.g. 3,5,9")
    p.add_argument("--crop", type=int, default=0, help="border pixels excluded from the metrics")

    p = sub.add_parser("degrade", parents=[common], help="write shifted and low-light copies of the RS view")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)

    p = sub.add_parser("report", parents=[common], help="image grid of GT, B, R and the recovered mid-frame")
    p.add_argument("--input", type=Path, required=True, help="pair directory")
    p.add_argument("--recovered", type=Path, required=True)
    p.add_argument("--gt", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True, help="PNG file or directory")
    return parser


def spec_from_args(args) -> tuple[ExperimentSpec, int]:
    cfg = load_config(args.config) if args.config else {"timing": None, "decompose": DecomposeConfig()}
    seed = args.seed if args.seed is not None else int(cfg.get("seed", 0))
    threads = args.threads if args.threads is not None else int(cfg.get("threads", 0))
    if threads < 0:
        raise ConfigError("threads must be >= 0")
    degrade = cfg.get("degrade", {})
    spec = ExperimentSpec(
        mode=args.mode,
        input_path=getattr(args, "input", None),
        output_path=args.output,
        timing=cfg["timing"],
        decompose_cfg=dataclasses.replace(cfg["decompose"], seed=seed),
        eval_lengths=getattr(args, "lengths", None) or list(cfg.get("eval_lengths", [3, 5, 9])),
        seed=seed,
        gt_path=getattr(args, "gt", None),
        recovered_path=getattr(args, "recovered", None),
        suite=getattr(args, "suite", False),
        texture=getattr(args, "scene", "smooth"),
        velocity=getattr(args, "velocity", 2),
        size=getattr(args, "size", 128),
        n_latent=getattr(args, "n_latent", 9),
        response_gamma=args.gamma,
        bit_depth=args.bit_depth,
        shifts=tuple(degrade.get("shifts", ExperimentSpec.shifts)),
        peaks=tuple(degrade.get("peaks", ExperimentSpec.peaks)),
        gamma_range=tuple(degrade.get("gamma_range", ExperimentSpec.gamma_range)),
        crop_px=getattr(args, "crop", 0),
        reproducible=threads == 1,
    )
    return spec, threads or (os.cpu_count() or 1)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        spec, threads = spec_from_args(args)
        kernels.set_threads(threads)
        start = time.perf_counter()
        result = run_experiment(spec)
        log.info("%s finished in %.2f s", args.mode, time.perf_counter() - start)
        if result is not None:
            print(json.dumps(result.to_dict(), indent=2))
    except (ConfigError, ParameterError) as exc:
        print(f"xshutter: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverDivergenceError as exc:
        print(f"xshutter: solver diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except OSError as exc:
        print(f"xshutter: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
