"""
Configuration manager for fibnormal
"""

import copy
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from fibnormal.engine.counters import MAX_CELLS, MAX_K
from fibnormal.errors import CapacityError, InvalidInputError
from fibnormal.sequence.digits import MAX_BASE

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "FIBNORMAL_OUTPUT_DIR"
FORMATS = ("json", "csv", "text")

# Default configuration
DEFAULT_CONFIG = {
    "analysis": {
        "base": 10,
        "terms": 10000,
        "k_max": 4,
        "positional": False,
        "chunk_digits": 1 << 22,
        "partitions": 1,
    },
    "per_term": {
        "k": 1,
        "epsilons": [0.05, 0.02, 0.01, 0.005, 0.002],
        "min_length": 10,
        "ratio_min_length": 200,
    },
    "baselines": {
        "monte_carlo_trials": 10 ** 6,
        "seed": 20240601,
    },
    "census": {
        "max_index": 40,
        "value_cap": 10 ** 9,
    },
    "output": {
        "format": "text",
        "output_dir": None,  # falls back to $FIBNORMAL_OUTPUT_DIR
    },
    "checkpoint": {
        "path": None,
        "every_terms": 0,
    },
}


class ConfigManager:
    """Manages configuration for fibnormal"""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize with configuration

        Args:
            config_path: Path to a JSON config file (None for the defaults)
        """
        self.config = copy.deepcopy(DEFAULT_CONFIG)
        self.config_path = config_path

        if config_path:
            self.load_from_file(config_path)
        if self.config["output"].get("output_dir") is None and os.environ.get(OUTPUT_DIR_ENV):
            self.config["output"]["output_dir"] = os.environ[OUTPUT_DIR_ENV]

    def load_from_file(self, config_path: str) -> None:
        """Load configuration from a file, section by section over the defaults"""
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                user_config = json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidInputError(f"config file {config_path} is not valid JSON: {e}") from e
        if not isinstance(user_config, dict):
            raise InvalidInputError(f"config file {config_path} must hold a JSON object")

        # Update config with user values, preserving defaults for missing keys
        for section, values in user_config.items():
            if section in self.config and isinstance(values, dict):
                self.config[section].update(values)
            else:
                self.config[section] = values
        logger.debug("loaded configuration from %s", config_path)

    def save_to_file(self, config_path: Optional[str] = None) -> None:
        """Save configuration to a file"""
        path = config_path or self.config_path or "fibnormal.json"
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.config, f, indent=2, sort_keys=True)
        self.config_path = path

    def get(self, section: str, key: str, default: Any = None) -> Any:
        """Get a configuration value"""
        try:
            return self.config[section][key]
        except KeyError:
            return default

    def set(self, section: str, key: str, value: Any) -> None:
        """Set a configuration value"""
        if section not in self.config:
            self.config[section] = {}
        self.config[section][key] = value

    def get_section(self, section: str) -> Dict[str, Any]:
        """Get an entire configuration section"""
        return self.config.get(section, {})


@dataclass
class RunConfig:
    """Everything one command needs, merged from configuration and arguments"""
    command: str
    base: int = 10
    N: int = 10000
    k_max: int = 4
    positional: bool = False
    epsilons: List[float] = field(default_factory=lambda: list(DEFAULT_CONFIG["per_term"]["epsilons"]))
    min_length: int = 10
    output_format: str = "text"
    output_path: Optional[str] = None
    checkpoint_path: Optional[str] = None
    checkpoint_every: int = 0
    resume: bool = False
    partitions: int = 1
    chunk_digits: int = 1 << 22

    @classmethod
    def from_config(cls, command: str, config: ConfigManager, **overrides) -> "RunConfig":
        """Defaults from the config sections, then every non-None override"""
        analysis = config.get_section("analysis")
        per_term = config.get_section("per_term")
        values = {
            "command": command,
            "base": analysis.get("base", 10),
            "N": analysis.get("terms", 10000),
            "k_max": analysis.get("k_max", 4),
            "positional": analysis.get("positional", False),
            "partitions": analysis.get("partitions", 1),
            "chunk_digits": analysis.get("chunk_digits", 1 << 22),
            "epsilons": list(per_term.get("epsilons", DEFAULT_CONFIG["per_term"]["epsilons"])),
            "min_length": per_term.get("min_length", 10),
            "output_format": config.get("output", "format", "text"),
            "checkpoint_path": config.get("checkpoint", "path"),
            "checkpoint_every": config.get("checkpoint", "every_terms", 0),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)

    def validate(self) -> "RunConfig":
        """Reject values outside the capacity bounds before any work starts"""
        if not isinstance(self.base, int) or not 2 <= self.base <= MAX_BASE:
            raise InvalidInputError(f"base must lie in 2..{MAX_BASE}, got {self.base}")
        if not isinstance(self.N, int) or self.N < 1:
            raise InvalidInputError(f"the term count must be at least 1, got {self.N}")
        if not 1 <= self.k_max <= MAX_K:
            raise InvalidInputError(f"k_max must lie in 1..{MAX_K}, got {self.k_max}")
        if self.base ** self.k_max > MAX_CELLS:
            raise CapacityError(f"{self.base}^{self.k_max} block counters exceed {MAX_CELLS}")
        if self.partitions < 1:
            raise InvalidInputError(f"partitions must be at least 1, got {self.partitions}")
        if self.chunk_digits < 1:
            raise InvalidInputError(f"chunk_digits must be positive, got {self.chunk_digits}")
        if any(eps <= 0 for eps in self.epsilons):
            raise InvalidInputError("epsilons must be positive")
        if self.min_length < 0:
            raise InvalidInputError(f"min_length must be non-negative, got {self.min_length}")
        if self.output_format not in FORMATS:
            raise InvalidInputError(f"output format must be one of {FORMATS}, got {self.output_format!r}")
        if self.checkpoint_every < 0:
            raise InvalidInputError("checkpoint interval must be non-negative")
        if self.resume and not self.checkpoint_path:
            raise InvalidInputError("--resume needs a checkpoint path")
        if self.checkpoint_path and self.partitions > 1:
            raise InvalidInputError("checkpoints are only supported for sequential runs (partitions=1)")
        return self
