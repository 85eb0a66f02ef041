import ast
import logging
import os
from pathlib import Path
from typing import Any, Literal, Mapping, Optional, Type, TypeVar

from appdirs import user_config_dir
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from mvd_sr.errors import ConfigError

logger = logging.getLogger(__name__)

APP_NAME = "mvd-sr"

M = TypeVar("M", bound=BaseModel)


class _Config(BaseModel):
    model_config = ConfigDict(frozen=True, extra="ignore")


class Limits(_Config):
    max_resolution: int = Field(1024, ge=1)


class CarveConfig(_Config):
    factor: int = Field(1, ge=1)
    smoothing_radius: int = Field(2, ge=0)
    smoothing_threshold: float = Field(0.5, gt=0)
    agreement_votes: int = Field(2, ge=1, le=6)

    @model_validator(mode="before")
    @classmethod
    def _default_threshold(cls, data: Any) -> Any:
        # threshold follows the factor unless given explicitly
        if isinstance(data, dict) and data.get("smoothing_threshold") is None:
            factor = data.get("factor", 1)
            if isinstance(factor, (int, float)) and not isinstance(factor, bool):
                data = {**data, "smoothing_threshold": factor / 2}
        return data


class PredictConfig(_Config):
    sil_threshold: float = Field(0.5, gt=0, lt=1)


class TrainConfig(_Config):
    steps: int = Field(2000, ge=0)
    batch_size: int = Field(8, ge=1)
    learning_rate: float = Field(1e-2, gt=0)
    seed: int = 0
    channels: int = Field(8, ge=8, le=32)
    conv_layers: int = Field(3, ge=3, le=5)
    range_r: Optional[float] = Field(None, gt=0)
    lambda_tv: float = Field(0.1, ge=0)
    log_every: int = Field(50, ge=1)


class EvalConfig(_Config):
    metric: Literal["iou", "f1"] = "iou"
    samples: int = Field(10_000, ge=1)
    threshold_sq: float = Field(1e-4, gt=0)
    seed: int = 0
    category: str = "object"


def default_config_path() -> Path:
    return Path(user_config_dir(APP_NAME)) / "config"


def parse_value(value: str) -> Any:
    try:
        return ast.literal_eval(value)
    except (SyntaxError, ValueError):
        return value


def parse_config_text(text: str) -> dict[str, Any]:
    values: dict[str, Any] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {number}: expected key=value, got {line!r}")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = parse_value(value.strip())
    return values


def load_config_file(path: Optional[os.PathLike] = None) -> dict[str, Any]:
    """Reads a flat key=value file.

    An explicit path must exist; the default location is optional.
    """
    if path is None:
        path = default_config_path()
        if not path.is_file():
            return {}
    path = Path(path)
    logger.debug("reading config %s", path)
    return parse_config_text(path.read_text())


def resolve(
    model: Type[M], flags: Mapping[str, Any], file_values: Mapping[str, Any]
) -> M:
    """Flags win over the config file, which wins over the model defaults."""
    merged = {k: v for k, v in file_values.items() if k in model.model_fields}
    merged.update({k: v for k, v in flags.items() if v is not None})
    try:
        return model.model_validate(merged)
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(part) for part in first["loc"]) or model.__name__
        raise ConfigError(f"{key}: {first['msg']}") from e
