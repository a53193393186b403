from dataclasses import dataclass, field
from typing import List

import yaml

DEFAULT_BATTERY = ["data/psybrackets/X1.psy"]


@dataclass
class EnumerationConfig:
    """Bounds for exhaustive structure search."""

    max_carrier: int = 4


@dataclass
class WeresetConfig:
    """Settings for weighted resolution sets."""

    max_precrossings: int = 20
    battery: List[str] = field(default_factory=lambda: list(DEFAULT_BATTERY))


@dataclass
class MovesConfig:
    """Defaults for the move-invariance driver."""

    mode: str = "pseudo"
    length: int = 8
    seeds: str = "1..50"


@dataclass
class AppConfig:
    """Dataclass holding the toolkit configuration."""

    log_level: str = "INFO"
    jobs: int = 1
    enumeration: EnumerationConfig = field(default_factory=EnumerationConfig)
    wereset: WeresetConfig = field(default_factory=WeresetConfig)
    moves: MovesConfig = field(default_factory=MovesConfig)


def parse_seed_range(text: str) -> List[int]:
    """Parse `a..b` (inclusive) or a single integer into a list of seeds."""
    text = str(text).strip()
    try:
        if ".." in text:
            start, end = text.split("..", 1)
            low, high = int(start), int(end)
        else:
            low = high = int(text)
    except ValueError:
        raise ValueError(f"Invalid seed range: {text!r}")
    if high < low:
        raise ValueError(f"Empty seed range: {text!r}")
    return list(range(low, high + 1))


def load_config(path: str = "config.yml") -> AppConfig:
    """Loads configuration from a YAML file."""
    try:
        with open(path, "r") as f:
            raw_config = yaml.safe_load(f) or {}

        if not isinstance(raw_config, dict):
            raise ValueError("Configuration must be a mapping")

        enumeration_data = raw_config.get("enumeration") or {}
        wereset_data = raw_config.get("wereset") or {}
        moves_data = raw_config.get("moves") or {}

        mode = moves_data.get("mode", "pseudo")
        if mode not in ("pseudo", "singular"):
            raise ValueError(f"moves.mode must be 'pseudo' or 'singular', got {mode!r}")

        moves_config = MovesConfig(
            mode=mode,
            length=int(moves_data.get("length", 8)),
            seeds=str(moves_data.get("seeds", "1..50")),
        )
        parse_seed_range(moves_config.seeds)

        return AppConfig(
            log_level=raw_config.get("log_level", "INFO"),
            jobs=int(raw_config.get("jobs", 1)),
            enumeration=EnumerationConfig(
                max_carrier=int(enumeration_data.get("max_carrier", 4)),
            ),
            wereset=WeresetConfig(
                max_precrossings=int(wereset_data.get("max_precrossings", 20)),
                battery=list(wereset_data.get("battery", DEFAULT_BATTERY)),
            ),
            moves=moves_config,
        )
    except FileNotFoundError:
        raise FileNotFoundError(f"Configuration file not found at: {path}")
    except yaml.YAMLError as e:
        raise ValueError(f"Error parsing YAML file: {e}")
