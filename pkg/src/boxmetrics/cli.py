"""Batch command-line front end: pair, batch, and oracle subcommands."""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

from . import __version__
from .distance import v2v
from .geometry import DEFAULT_TOL
from .intersection import iou
from .io import ALL_METRICS, ParseError, parse_box_file, parse_point_cloud, run_batch, run_pair
from .oracles import OracleConfig, mc_iou, sampled_v2v


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL, help="validity tolerance (default 1e-9)")
    parser.add_argument("--output", default="-", help="output path, or - for stdout")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boxmetrics", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    pair = sub.add_parser("pair", help="compare two boxes from a box file")
    pair.add_argument("boxfile")
    pair.add_argument("box_a", metavar="idA")
    pair.add_argument("box_b", metavar="idB")
    pair.add_argument("--cloud", help="optional point cloud (xyz text or ascii PLY)")
    pair.add_argument("--metrics", help="comma-separated subset of: " + ",".join(ALL_METRICS))
    _add_common(pair)

    batch = sub.add_parser("batch", help="evaluate every job in a pairs file")
    batch.add_argument("boxfile")
    batch.add_argument("pairsfile")
    batch.add_argument("--metrics", help="comma-separated subset of: " + ",".join(ALL_METRICS))
    batch.add_argument("--workers", type=int, default=1, help="parallel job evaluators (default 1)")
    _add_common(batch)

    oracle = sub.add_parser("oracle", help="sampling-based reference metrics for one pair")
    oracle.add_argument("boxfile")
    oracle.add_argument("box_a", metavar="idA")
    oracle.add_argument("box_b", metavar="idB")
    oracle.add_argument("--samples", type=int, default=1_000_000, help="Monte-Carlo samples")
    oracle.add_argument("--seed", type=int, default=0, help="PRNG seed")
    oracle.add_argument("--grid", type=int, default=32, help="surface lattice resolution")
    _add_common(oracle)
    return parser


@contextlib.contextmanager
def _open_output(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _lookup(records, box_id: str):
    for record in records:
        if record.box_id == box_id:
            return record
    raise ValueError(f"unknown box id {box_id!r}")


def _split_metrics(arg: str | None):
    if arg is None:
        return None
    return [m.strip() for m in arg.split(",") if m.strip()]


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "pair":
            records = parse_box_file(args.boxfile)
            rec_a = _lookup(records, args.box_a)
            rec_b = _lookup(records, args.box_b)
            cloud = parse_point_cloud(args.cloud) if args.cloud else None
            line = run_pair(
                rec_a, rec_b, cloud=cloud, tol=args.tol, metrics=_split_metrics(args.metrics)
            )
            with _open_output(args.output) as out:
                out.write(line + "\n")
            return 0

        if args.command == "batch":
            with _open_output(args.output) as out:
                return run_batch(
                    args.boxfile,
                    args.pairsfile,
                    out,
                    tol=args.tol,
                    metrics=_split_metrics(args.metrics),
                    workers=max(1, args.workers),
                )

        records = parse_box_file(args.boxfile)
        box_a = _lookup(records, args.box_a).to_box()
        box_b = _lookup(records, args.box_b).to_box()
        cfg = OracleConfig(sample_count=args.samples, seed=args.seed, grid_res=args.grid)
        estimate, std_error = mc_iou(box_a, box_b, cfg)
        payload = {
            "boxA": args.box_a,
            "boxB": args.box_b,
            "mc_iou": estimate,
            "mc_iou_std_error": std_error,
            "sampled_v2v": sampled_v2v(box_a, box_b, cfg),
            "iou": iou(box_a, box_b, args.tol),
            "v2v": v2v(box_a, box_b, args.tol),
            "samples": cfg.sample_count,
            "seed": cfg.seed,
            "grid": cfg.grid_res,
            "tool_version": __version__,
        }
        with _open_output(args.output) as out:
            out.write(json.dumps(payload, separators=(",", ":")) + "\n")
        return 0
    except (ParseError, OSError, ValueError) as exc:
        print(f"boxmetrics: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
