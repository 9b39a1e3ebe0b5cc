"""Headless access to the engine, evaluator, and annotation service.

Exit codes: 0 success, 2 usage error (argparse), 3 data error
(missing/invalid inputs), 4 internal error or failure to bind the
service port.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
from pathlib import Path

import numpy as np
from PIL import Image

from . import engine, evaluation, reports
from .errors import ScribbleSegError
from .maskpng import Palette, load_mask_png, save_mask_png
from .service.config import DATA_ROOT_ENV, ServiceConfig, load_config
from .strokes import StrokeDocument

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_INTERNAL = 4


def _add_engine_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed-fraction", type=float, default=0.75,
                        help="fraction of labeled pixels sampled per iteration")
    parser.add_argument("--iterations", type=int, default=8,
                        help="Monte Carlo iterations per refine")
    parser.add_argument("--rng-seed", type=int, default=0, help="random seed")
    parser.add_argument("--color-scale", type=float, default=20.0,
                        help="Lab-distance scale of the growing metric")
    parser.add_argument("--spatial-scale", type=float, default=None,
                        help="pixel-distance scale (default: max(W,H)/4)")
    parser.add_argument("--workers", type=int, default=1,
                        help="threads for Monte Carlo iterations")


def _config_from_args(args: argparse.Namespace) -> engine.GrowConfig:
    return engine.GrowConfig(
        seed_fraction=args.seed_fraction,
        iterations=args.iterations,
        color_scale=args.color_scale,
        spatial_scale=args.spatial_scale,
        rng_seed=args.rng_seed,
    )


def _load_rgb(path: Path) -> np.ndarray:
    with Image.open(path) as img:
        return np.asarray(img.convert("RGB"))


def _load_trace(path: Path, image_shape: tuple[int, int]) -> np.ndarray:
    if path.suffix.lower() == ".json":
        doc = StrokeDocument.from_json(path.read_text())
        if (doc.height, doc.width) != image_shape:
            raise ScribbleSegError(
                f"stroke document is {doc.width}x{doc.height}, "
                f"image is {image_shape[1]}x{image_shape[0]}"
            )
        return doc.rasterize()
    return load_mask_png(path)


def cmd_refine(args: argparse.Namespace) -> int:
    image = _load_rgb(Path(args.image))
    trace = _load_trace(Path(args.trace), image.shape[:2])
    result = engine.refine(image, trace, _config_from_args(args), workers=args.workers)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    mask_path = out_dir / "mask.png"
    save_mask_png(mask_path, result.label_mask, Palette.default(256 - 1))
    written = [str(mask_path)]
    for c in range(result.num_categories):
        plane = np.round(result.likelihood[..., c] * 65535.0).astype(np.uint16)
        plane_path = out_dir / f"likelihood_c{c:03d}.png"
        Image.fromarray(plane).save(plane_path)
        written.append(str(plane_path))
    for path in written:
        print(path)
    return EXIT_OK


def cmd_rasterize(args: argparse.Namespace) -> int:
    doc = StrokeDocument.from_json(Path(args.strokes).read_text())
    raster = doc.rasterize()
    save_mask_png(Path(args.output), raster, Palette.default(256 - 1))
    print(args.output)
    return EXIT_OK


def _mask_pairs(pred_dir: Path, gt_dir: Path) -> list[tuple[str, Path, Path]]:
    if not pred_dir.is_dir():
        raise ScribbleSegError(f"prediction directory {pred_dir} does not exist")
    if not gt_dir.is_dir():
        raise ScribbleSegError(f"ground-truth directory {gt_dir} does not exist")
    pairs = []
    for gt_path in sorted(gt_dir.glob("*.png")):
        pred_path = pred_dir / gt_path.name
        if pred_path.is_file():
            pairs.append((gt_path.stem, pred_path, gt_path))
    if not pairs:
        raise ScribbleSegError("no matching prediction/ground-truth file names")
    return pairs


def cmd_eval(args: argparse.Namespace) -> int:
    pairs = _mask_pairs(Path(args.pred), Path(args.gt))
    if args.categories:
        categories = {int(c) for c in args.categories.split(",")}
    else:
        categories = set()
        for _, _, gt_path in pairs:
            gt = load_mask_png(gt_path)
            categories |= {int(v) for v in np.unique(gt) if v != evaluation.VOID}
    per_image: dict[str, evaluation.IouReport] = {}
    total_inter = {c: 0 for c in categories}
    total_union = {c: 0 for c in categories}
    for name, pred_path, gt_path in pairs:
        pred = load_mask_png(pred_path)
        gt = load_mask_png(gt_path)
        inter, union = evaluation.iou_counts(pred, gt, categories)
        per_image[name] = evaluation.report_from_counts(inter, union)
        for c in categories:
            total_inter[c] += inter[c]
            total_union[c] += union[c]
    aggregate = evaluation.report_from_counts(total_inter, total_union)
    table = reports.eval_table(per_image, aggregate, threshold=args.threshold)
    if args.output:
        out_path = Path(args.output)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(table)
        figure = out_path.with_suffix(".png")
        reports.plot_category_iou(figure, aggregate)
        print(out_path)
        print(figure)
    else:
        sys.stdout.write(table)
    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    report = evaluation.final_score(args.mean_iou, args.elapsed, args.objects)
    table = reports.score_table(args.mean_iou, args.elapsed, args.objects, report)
    if args.output:
        Path(args.output).write_text(table)
        print(args.output)
    else:
        sys.stdout.write(table)
    return EXIT_OK


def cmd_consensus(args: argparse.Namespace) -> int:
    masks_dir = Path(args.masks)
    if not masks_dir.is_dir():
        raise ScribbleSegError(f"mask directory {masks_dir} does not exist")
    paths = sorted(masks_dir.glob("*.png"))
    if not paths:
        raise ScribbleSegError(f"no masks found under {masks_dir}")
    masks = [load_mask_png(p) for p in paths]
    counts = evaluation.consensus_counts(masks, args.category)
    majority = evaluation.consensus_majority(masks)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    counts_path = out_dir / "counts.png"
    Image.fromarray(counts.counts.astype(np.uint8), mode="L").save(counts_path)
    majority_path = out_dir / "majority.png"
    save_mask_png(majority_path, majority, Palette.default(256 - 1))
    table_path = out_dir / "consensus.csv"
    table_path.write_text(reports.consensus_table(counts))
    figure_path = out_dir / "consensus_map.png"
    reports.plot_consensus_map(figure_path, counts)
    for path in (counts_path, majority_path, table_path, figure_path):
        print(path)
    return EXIT_OK


def _port_is_free(host: str, port: int) -> bool:
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as sock:
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            sock.bind((host, port))
        except OSError:
            return False
    return True


def cmd_serve(args: argparse.Namespace) -> int:
    if args.config:
        config = load_config(args.config)
    elif args.data_root:
        config = ServiceConfig(data_root=Path(args.data_root))
    else:
        raise ScribbleSegError(
            f"no data root configured (use --config, --data-root, or ${DATA_ROOT_ENV})"
        )
    if args.data_root:
        config.data_root = Path(args.data_root)
    if args.port is not None:
        config.port = args.port
    if args.rng_seed is not None:
        config.rng_seed = args.rng_seed
    if not config.data_root.is_dir():
        raise ScribbleSegError(f"data root {config.data_root} does not exist")
    if not _port_is_free(config.host, config.port):
        print(f"error: port {config.port} is already in use", file=sys.stderr)
        return EXIT_INTERNAL

    import uvicorn

    from .service import create_app

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scribbleseg",
        description="Grow sparse scribbles into dense segmentation masks, "
        "evaluate them, and serve the annotation workflow.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("refine", help="propagate a trace into a dense mask")
    p.add_argument("image", help="RGB image file")
    p.add_argument("trace", help="trace raster PNG or stroke-list JSON")
    p.add_argument("-o", "--out-dir", default=".", help="output directory")
    _add_engine_flags(p)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("rasterize", help="render a stroke list to a trace PNG")
    p.add_argument("strokes", help="stroke-list JSON document")
    p.add_argument("-o", "--output", default="trace.png", help="output PNG path")
    p.set_defaults(func=cmd_rasterize)

    p = sub.add_parser("eval", help="IoU report over prediction/ground-truth dirs")
    p.add_argument("pred", help="directory of predicted masks")
    p.add_argument("gt", help="directory of ground-truth masks")
    p.add_argument("-o", "--output", default=None,
                   help="CSV path; a figure is written alongside")
    p.add_argument("--categories", default=None,
                   help="comma-separated category ids (default: from ground truth)")
    p.add_argument("--threshold", type=float, default=0.70,
                   help="checkpoint threshold for the pass/fail column")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("score", help="final score from accuracy, time, objects")
    p.add_argument("--mean-iou", type=float, required=True)
    p.add_argument("--elapsed", type=float, required=True, help="seconds")
    p.add_argument("--objects", type=int, required=True)
    p.add_argument("-o", "--output", default=None, help="CSV path")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("consensus", help="agreement maps over annotator masks")
    p.add_argument("masks", help="directory of annotator masks")
    p.add_argument("--category", type=int, required=True,
                   help="category of interest for the count map")
    p.add_argument("-o", "--out-dir", default=".", help="output directory")
    p.set_defaults(func=cmd_consensus)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--config", default=None, help="service config JSON")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--data-root", default=os.environ.get(DATA_ROOT_ENV),
                   help=f"dataset root (or ${DATA_ROOT_ENV})")
    p.add_argument("--rng-seed", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScribbleSegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (FileNotFoundError, NotADirectoryError, IsADirectoryError,
            json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # anything unexpected
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
