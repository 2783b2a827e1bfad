"""Configuration management for shifted Yangian computations."""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml


@dataclass
class ComputeSettings:
    """Truncation and sampling defaults for the exact computations."""

    depth: int = 8
    series_order: int = 16
    sample_seed: int = 0
    n_max: int = 8

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError(f"depth must be at least 1, got {self.depth}")
        if self.series_order < self.depth:
            raise ValueError(
                f"series_order ({self.series_order}) must be >= depth ({self.depth})"
            )


@dataclass
class OutputSettings:
    """Report rendering settings."""

    format: str = "json"
    indent: int = 2

    def __post_init__(self) -> None:
        if self.format not in ("json", "text"):
            raise ValueError(f"Unsupported output format: {self.format}")


@dataclass
class LoggingSettings:
    """Log level and file name used by command-line runs."""

    level: str = "INFO"
    filename: str = "shifted_yangian.log"


@dataclass
class Config:
    """Configuration settings for the shifted Yangian toolkit."""

    # Override with environment variable if provided
    base_dir: Path = field(
        default_factory=lambda: Path(
            os.environ.get("SHIFTED_YANGIAN_BASE_DIR", Path.cwd())
        )
    )
    output_dir: Path = field(init=False)
    log_dir: Path = field(init=False)

    compute: ComputeSettings = field(default_factory=ComputeSettings)
    output: OutputSettings = field(default_factory=OutputSettings)
    logging: LoggingSettings = field(default_factory=LoggingSettings)

    def __post_init__(self) -> None:
        """Initialize derived paths."""
        self.base_dir = Path(self.base_dir)
        self.output_dir = self.base_dir / "output" / "reports"
        self.log_dir = self.base_dir / "logs"

    def ensure_directories(self) -> None:
        """Create output directories if they don't exist."""
        for directory in [self.output_dir, self.log_dir]:
            directory.mkdir(parents=True, exist_ok=True)

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "Config":
        """Create a Config instance from a dictionary."""
        config_dict = dict(config_dict)

        compute_dict = config_dict.pop("compute", {}) or {}
        compute = ComputeSettings(**compute_dict)

        output_dict = config_dict.pop("output", {}) or {}
        output = OutputSettings(**output_dict)

        logging_dict = config_dict.pop("logging", {}) or {}
        logging_settings = LoggingSettings(**logging_dict)

        base_dir = config_dict.pop("base_dir", None)

        return cls(
            base_dir=Path(base_dir) if base_dir else Path.cwd(),
            compute=compute,
            output=output,
            logging=logging_settings,
        )

    @classmethod
    def from_yaml(
        cls, path: Union[str, Path], base_dir: Optional[Path] = None
    ) -> "Config":
        """Load a Config from a YAML settings file.

        Args:
            path: Path to a settings file such as ``config/settings.yaml``.
            base_dir: Optional base directory overriding the file's value.

        Returns:
            Config built from the ``compute`` and ``output`` sections.
        """
        with open(path, "r", encoding="utf-8") as handle:
            raw = yaml.safe_load(handle) or {}
        if not isinstance(raw, dict):
            raise ValueError(f"Settings file {path} must contain a mapping")

        sections = ("compute", "output", "logging", "base_dir")
        wanted = {key: raw[key] for key in sections if key in raw}
        if base_dir is not None:
            wanted["base_dir"] = str(base_dir)
        return cls.from_dict(wanted)
