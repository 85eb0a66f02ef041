import pytest

from mvd_sr.config import (
    CarveConfig,
    EvalConfig,
    Limits,
    TrainConfig,
    default_config_path,
    load_config_file,
    parse_config_text,
    resolve,
)
from mvd_sr.errors import ConfigError


def test_parse_config_text():
    values = parse_config_text(
        "# defaults for the lab machine\n"
        "smoothing-radius = 1\n"
        "learning_rate=0.05  # faster\n"
        "\n"
        "category = chair\n"
    )
    assert values == {"smoothing_radius": 1, "learning_rate": 0.05, "category": "chair"}


def test_parse_config_text_rejects_bare_words():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config_text("steps=3\nsteps\n")


def test_flags_beat_file_beat_defaults():
    file_values = {"smoothing_radius": 1, "agreement_votes": 3, "steps": 9}
    config = resolve(CarveConfig, {"factor": 4, "agreement_votes": 1}, file_values)
    assert config.factor == 4
    assert config.smoothing_radius == 1
    assert config.agreement_votes == 1
    assert config.smoothing_threshold == 2.0


def test_unset_flags_do_not_override():
    config = resolve(TrainConfig, {"steps": None, "seed": 4}, {"steps": 7})
    assert config.steps == 7
    assert config.seed == 4


@pytest.mark.parametrize(
    "model, values",
    [
        (CarveConfig, {"agreement_votes": 7}),
        (CarveConfig, {"smoothing_radius": -1}),
        (TrainConfig, {"channels": 4}),
        (TrainConfig, {"conv_layers": 6}),
        (EvalConfig, {"metric": "chamfer"}),
        (Limits, {"max_resolution": 0}),
    ],
)
def test_invalid_values_name_the_key(model, values):
    key = next(iter(values))
    with pytest.raises(ConfigError, match=key):
        resolve(model, values, {})


def test_config_file_locations(tmp_path, monkeypatch):
    monkeypatch.setattr(
        "mvd_sr.config.default_config_path", lambda: tmp_path / "missing"
    )
    assert load_config_file() == {}
    path = tmp_path / "config"
    path.write_text("threshold_sq=0.001\n")
    assert load_config_file(path) == {"threshold_sq": 0.001}
    with pytest.raises(FileNotFoundError):
        load_config_file(tmp_path / "nope")


def test_default_config_path_is_per_user():
    assert default_config_path().name == "config"
    assert "mvd-sr" in str(default_config_path())
