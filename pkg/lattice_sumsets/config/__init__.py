"""Configuration: defaults, JSON loading and the typed view the toolkit consumes."""
import copy
import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

from ..exceptions import InputError
from ..services.sumset_service import BACKENDS

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

DEFAULT_CONFIG: Dict[str, Any] = {
    "budgets": {
        "max_enum": 10 ** 7,
        "max_subset": 18,
        "max_search": 2_000_000,
        "max_parallelepiped_points": 64,
        "max_parallelepiped_dim": 4,
        "max_oracle_nodes": 2_000_000,
    },
    "sweeps": {
        "seed": 0,
        "threads": 4,
    },
    "backend": "auto",
    "logging": {
        "level": "WARNING",
    },
}


@dataclass
class ToolkitConfig:
    """Validated configuration values."""
    max_enum: int = 10 ** 7
    max_subset: int = 18
    max_search: int = 2_000_000
    max_parallelepiped_points: int = 64
    max_parallelepiped_dim: int = 4
    max_oracle_nodes: int = 2_000_000
    seed: int = 0
    threads: int = 4
    backend: str = "auto"
    log_level: str = "WARNING"

    def __post_init__(self):
        for name in ("max_enum", "max_subset", "max_search", "max_parallelepiped_points",
                     "max_parallelepiped_dim", "max_oracle_nodes", "threads"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise InputError(f"Configuration value '{name}' must be a positive integer, got {value!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise InputError(f"Seed must be a non-negative integer, got {self.seed!r}")
        if self.backend not in BACKENDS:
            raise InputError(f"Unknown backend '{self.backend}'; expected one of {', '.join(BACKENDS)}")
        self.log_level = str(self.log_level).upper()
        if self.log_level not in LOG_LEVELS:
            raise InputError(f"Unknown log level '{self.log_level}'")

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "ToolkitConfig":
        merged = merge_config(DEFAULT_CONFIG, config)
        budgets = merged["budgets"]
        sweeps = merged["sweeps"]
        return cls(
            max_enum=budgets["max_enum"],
            max_subset=budgets["max_subset"],
            max_search=budgets["max_search"],
            max_parallelepiped_points=budgets["max_parallelepiped_points"],
            max_parallelepiped_dim=budgets["max_parallelepiped_dim"],
            max_oracle_nodes=budgets["max_oracle_nodes"],
            seed=sweeps["seed"],
            threads=sweeps["threads"],
            backend=merged["backend"],
            log_level=merged["logging"]["level"],
        )

    def with_overrides(self, **overrides: Optional[Any]) -> "ToolkitConfig":
        """Copy with every non-None override applied (command-line flags win over the file)."""
        values = dict(self.__dict__)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return ToolkitConfig(**values)


def merge_config(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively merge ``override`` into a copy of ``base``; unknown keys are rejected."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if key not in merged:
            raise InputError(f"Unknown configuration key '{key}'")
        if isinstance(merged[key], dict):
            if not isinstance(value, dict):
                raise InputError(f"Configuration key '{key}' must be an object")
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[str] = None) -> ToolkitConfig:
    """Load configuration from a JSON file, falling back to defaults when no path is given."""
    if config_path is None:
        return ToolkitConfig.from_dict({})
    try:
        with open(config_path, "r") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise InputError(f"Config file not found: {config_path}")
    except json.JSONDecodeError as e:
        raise InputError(f"Invalid JSON in config file: {e}")
    if not isinstance(data, dict):
        raise InputError("Config file must contain a JSON object")
    logger.info(f"Loaded configuration from {config_path}")
    return ToolkitConfig.from_dict(data)
