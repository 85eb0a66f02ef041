import asyncio
import errno
import inspect
import logging
from argparse import Namespace
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Optional, Type, TypeVar

from asyncer import asyncify
from pydantic import BaseModel

from mvd_sr import guards
from mvd_sr.ablation import run_ablation
from mvd_sr.carving import carve as carve_grid
from mvd_sr.config import (
    CarveConfig,
    EvalConfig,
    Limits,
    PredictConfig,
    TrainConfig,
    resolve,
)
from mvd_sr.dataset import (
    DatasetInfo,
    generate_dataset,
    load_pairs,
    load_samples,
    split_dir,
)
from mvd_sr.errors import (
    ConfigError,
    ContractError,
    ResolutionMismatchError,
    TrainingError,
)
from mvd_sr.log import print_pairs
from mvd_sr.metrics import (
    EvalReport,
    exposed_face_mesh,
    f1_surface,
    format_csv,
    iou,
    write_obj,
)
from mvd_sr.odm import (
    OdmSet,
    ViewId,
    extract_all,
    extract_odm,
    read_odm_set,
    write_odm_set,
)
from mvd_sr.predictor import (
    PredictorKind,
    PredictorModel,
    StepLoss,
    init_model,
    load_model,
    make_predictor,
    save_model,
    train as train_model,
)
from mvd_sr.strings import get_string
from mvd_sr.voxel import load_shape_spec, rasterize, read_grid, solidify, write_grid

logger = logging.getLogger("mvd_sr.cli")

M = TypeVar("M", bound=BaseModel)


def _read_checkpoint(path: Optional[str]) -> Optional[PredictorModel]:
    if path is None:
        return None
    if not Path(path).is_file():
        raise FileNotFoundError(errno.ENOENT, get_string("missing_checkpoint"), path)
    return load_model(path)


def _append_csv(path: str, rows: Iterable[tuple]) -> None:
    path = Path(path)
    text = format_csv(rows, header=not path.exists())
    with path.open("a") as f:
        f.write(text)


@guards.exit_codes
async def gen(runner: "CommandRunner") -> None:
    args = runner.args
    spec = load_shape_spec(Path(args.spec).read_text())
    limit = runner.limits.max_resolution
    grid = await asyncify(lambda: solidify(rasterize(spec, args.res, limit)))()
    write_grid(args.out, grid)
    logger.info("wrote %s: %d^3, %d voxels", args.out, grid.resolution, grid.count)


@guards.exit_codes
async def odms(runner: "CommandRunner") -> None:
    args = runner.args
    grid = read_grid(args.voxel, runner.limits.max_resolution)
    maps = await asyncio.gather(
        *(asyncify(extract_odm)(grid, view) for view in ViewId)
    )
    paths = write_odm_set(args.out_dir, OdmSet.from_list(list(maps)))
    logger.info("wrote %d ODMs to %s", len(paths), args.out_dir)


def _predictor(runner: "CommandRunner", factor: int, model: Optional[PredictorModel]):
    args = runner.args
    match args.predictor:
        case PredictorKind.BASELINE:
            return make_predictor(PredictorKind.BASELINE, factor)
        case PredictorKind.ORACLE:
            if args.gt is None:
                raise ContractError(get_string("missing_truth"))
            truth = read_odm_set(args.gt, runner.limits.max_resolution)
            return make_predictor(PredictorKind.ORACLE, factor, truth=truth)
    threshold = runner.config(PredictConfig).sil_threshold
    return make_predictor(args.variant, factor, model=model, threshold=threshold)


@guards.exit_codes
async def carve(runner: "CommandRunner") -> None:
    args = runner.args
    grid = read_grid(args.voxel, runner.limits.max_resolution)
    model = None
    if args.predictor not in (PredictorKind.BASELINE, PredictorKind.ORACLE):
        model = _read_checkpoint(args.predictor)
    # a checkpoint knows its factor
    overrides = {}
    if model is not None and args.factor is None:
        overrides["factor"] = model.factor
    config = runner.config(CarveConfig, **overrides)
    predictor = _predictor(runner, config.factor, model)
    odms_high = await asyncify(predictor.predict_set)(extract_all(grid))
    carved = await asyncify(carve_grid)(grid, odms_high, config)
    write_grid(args.out, carved)
    logger.info(
        "carved %d^3 -> %d^3 (%d voxels) into %s",
        grid.resolution,
        carved.resolution,
        carved.count,
        args.out,
    )


@guards.exit_codes
async def train(runner: "CommandRunner") -> None:
    args = runner.args
    root = split_dir(args.dataset, "train")
    pairs = await asyncify(load_pairs)(root, runner.limits.max_resolution)
    if not pairs:
        raise TrainingError(get_string("empty_dataset"))
    low, high = pairs[0]
    if high.resolution % low.resolution:
        raise ResolutionMismatchError(
            high.resolution // low.resolution * low.resolution,
            high.resolution,
            what="high resolution ODM",
        )
    factor = high.resolution // low.resolution
    config = runner.config(TrainConfig)
    model = init_model(
        factor,
        channels=config.channels,
        conv_layers=config.conv_layers,
        range_r=config.range_r,
        lambda_tv=config.lambda_tv,
        seed=config.seed,
    )
    logger.info(
        "training on %d view pairs from %s, factor %d, %d parameters per network",
        len(pairs),
        root,
        factor,
        model.param_count,
    )
    history: list[StepLoss] = []
    trained = await asyncify(train_model)(
        model, pairs, config, history.append, args.progress
    )
    save_model(args.out, trained)
    if args.loss_log:
        with open(args.loss_log, "w") as f:
            f.write("step,loss_sil,loss_depth\n")
            f.writelines(
                f"{h.step},{h.loss_sil!r},{h.loss_depth!r}\n" for h in history
            )
    if history:
        last = history[-1]
        logger.info(
            "final loss_sil=%.6f loss_depth=%.6f", last.loss_sil, last.loss_depth
        )


@guards.exit_codes
async def evaluate(runner: "CommandRunner") -> None:
    args = runner.args
    limit = runner.limits.max_resolution
    pred = read_grid(args.pred, limit)
    gt = read_grid(args.gt, limit)
    config = runner.config(EvalConfig)
    match config.metric:
        case "iou":
            report = EvalReport(iou=iou(pred, gt), sample_count=1)
        case "f1":
            report = await asyncify(f1_surface)(
                pred, gt, config.samples, config.threshold_sq, config.seed
            )
    print_pairs(report.to_pairs())
    if args.csv:
        _append_csv(args.csv, report.csv_rows(config.category))


@guards.exit_codes
async def export_obj(runner: "CommandRunner") -> None:
    args = runner.args
    grid = read_grid(args.voxel, runner.limits.max_resolution)
    mesh = exposed_face_mesh(grid)
    if len(mesh) == 0:
        logger.warning(get_string("empty_mesh"))
    Path(args.out).write_text(write_obj(mesh))
    logger.info("wrote %d quads to %s", len(mesh), args.out)


@guards.exit_codes
async def dataset(runner: "CommandRunner") -> None:
    info = runner.config(DatasetInfo)
    await asyncify(generate_dataset)(
        runner.args.out,
        info.count,
        info.low_resolution,
        info.factor,
        info.seed,
        info.split,
        max_resolution=runner.limits.max_resolution,
    )


@guards.exit_codes
async def bench(runner: "CommandRunner") -> None:
    args = runner.args
    root = split_dir(args.dataset, args.split)
    samples = await asyncify(load_samples)(root, runner.limits.max_resolution)
    if not samples:
        raise TrainingError(get_string("empty_dataset"))
    factor = samples[0].high.resolution // samples[0].low.resolution
    model = _read_checkpoint(args.checkpoint)
    config = runner.config(CarveConfig, factor=factor)
    table = await asyncify(run_ablation)(
        samples, model, config, runner.config(PredictConfig)
    )
    print_pairs(table.to_pairs())
    if args.csv:
        _append_csv(args.csv, table.csv_rows(args.category))


class CommandRunner:
    """Dispatches a parsed command line to its handler.

    Handlers receive the runner, which carries the parsed arguments and the
    values of the config file.
    """

    def __init__(self, args: Namespace, file_values: dict[str, Any]) -> None:
        self.args = args
        self.file_values = file_values
        self._handlers = {}

        self._create_defaults()

    @cached_property
    def limits(self) -> Limits:
        return resolve(Limits, {}, self.file_values)

    def config(self, model: Type[M], **overrides: Any) -> M:
        flags = {**vars(self.args), **overrides}
        return resolve(model, flags, self.file_values)

    def add_command_handler(self, name: str, handler) -> None:
        self._handlers[name] = handler

    def _create_defaults(self) -> None:
        self.add_command_handler("gen", gen)
        self.add_command_handler("odms", odms)
        self.add_command_handler("carve", carve)
        self.add_command_handler("train", train)
        self.add_command_handler("eval", evaluate)
        self.add_command_handler("export-obj", export_obj)
        self.add_command_handler("dataset", dataset)
        self.add_command_handler("bench", bench)

    async def run(self, name: str) -> int:
        if name not in self._handlers:
            raise ConfigError(f"unknown command {name!r}")
        result = self._handlers[name](self)
        if inspect.isawaitable(result):
            result = await result
        return result
