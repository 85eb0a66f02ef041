import argparse
import asyncio
import sys
from typing import Optional, Sequence

try:
    import uvloop
except ImportError:  # no uvloop wheels on Windows
    uvloop = None

from mvd_sr.entry import run
from mvd_sr.log import setup_logging
from mvd_sr.predictor.variants import PredictorKind
from mvd_sr.strings import get_string


def resolution(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(get_string("bad_resolution")) from None
    if value < 1:
        raise argparse.ArgumentTypeError(get_string("bad_resolution"))
    return value


def _carve_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("carving")
    group.add_argument("--smoothing-radius", dest="smoothing_radius", type=int)
    group.add_argument("--smoothing-threshold", dest="smoothing_threshold", type=float)
    group.add_argument("--agreement-votes", dest="agreement_votes", type=int)
    group.add_argument("--sil-threshold", dest="sil_threshold", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvd-sr",
        description="Voxel super-resolution from six orthographic depth maps.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("-q", "--quiet", action="count", default=0)
    parser.add_argument("--config", help="Path to a key=value config file")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen", help="Rasterize a shape spec to a voxel file")
    gen.add_argument("spec", help="Path to a JSON shape spec")
    gen.add_argument("--res", type=resolution, required=True)
    gen.add_argument("-o", "--out", required=True)

    odms = commands.add_parser("odms", help="Write the six ODMs of a voxel file")
    odms.add_argument("voxel")
    odms.add_argument("out_dir")

    carve = commands.add_parser("carve", help="Super-resolve a voxel file")
    carve.add_argument("voxel")
    carve.add_argument("--factor", type=int)
    carve.add_argument(
        "--predictor",
        default=PredictorKind.BASELINE.value,
        help="baseline, oracle, or the path of a model checkpoint",
    )
    carve.add_argument(
        "--variant",
        choices=[
            k.value
            for k in (
                PredictorKind.MVD,
                PredictorKind.DEPTH,
                PredictorKind.SILHOUETTE,
            )
        ],
        default=PredictorKind.MVD.value,
        help="Which learned networks a checkpoint predictor uses",
    )
    carve.add_argument("--gt", help="Directory of high resolution ODMs (oracle)")
    carve.add_argument("-o", "--out", required=True)
    _carve_flags(carve)

    train = commands.add_parser("train", help="Train both networks")
    train.add_argument("dataset", help="Dataset root or a directory of samples")
    train.add_argument("-o", "--out", required=True, help="Checkpoint path")
    train.add_argument("--steps", type=int)
    train.add_argument("--batch-size", dest="batch_size", type=int)
    train.add_argument("--lr", dest="learning_rate", type=float)
    train.add_argument("--seed", type=int)
    train.add_argument("--channels", type=int)
    train.add_argument("--conv-layers", dest="conv_layers", type=int)
    train.add_argument("--range-r", dest="range_r", type=float)
    train.add_argument("--lambda-tv", dest="lambda_tv", type=float)
    train.add_argument("--loss-log", dest="loss_log", help="Per-step loss CSV")
    train.add_argument("--progress", action="store_true")

    evaluate = commands.add_parser("eval", help="Score a prediction")
    evaluate.add_argument("pred")
    evaluate.add_argument("gt")
    evaluate.add_argument("--metric", choices=["iou", "f1"])
    evaluate.add_argument("--samples", type=int)
    evaluate.add_argument("--threshold-sq", dest="threshold_sq", type=float)
    evaluate.add_argument("--seed", type=int)
    evaluate.add_argument("--category")
    evaluate.add_argument("--csv", help="Append metric rows to this CSV file")

    export = commands.add_parser("export-obj", help="Write the exposed-face mesh")
    export.add_argument("voxel")
    export.add_argument("out")

    dataset = commands.add_parser("dataset", help="Generate paired training data")
    dataset.add_argument("out")
    dataset.add_argument("--count", type=int)
    dataset.add_argument("--res", dest="low_resolution", type=resolution)
    dataset.add_argument("--factor", type=int)
    dataset.add_argument("--seed", type=int)

    bench = commands.add_parser("bench", help="IoU table over predictor variants")
    bench.add_argument("dataset")
    bench.add_argument("--checkpoint")
    bench.add_argument("--split", choices=["train", "val", "test"], default="test")
    bench.add_argument("--category", default="object")
    bench.add_argument("--csv")
    _carve_flags(bench)

    return parser


async def main(args: argparse.Namespace) -> int:
    return await run(args)


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    setup_logging(args.verbose - args.quiet)

    if sys.version_info >= (3, 11):
        loop_factory = uvloop.new_event_loop if uvloop else None
        with asyncio.Runner(loop_factory=loop_factory) as runner:
            return runner.run(main(args))
    if uvloop:
        uvloop.install()
    return asyncio.run(main(args))


def entry() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    entry()
