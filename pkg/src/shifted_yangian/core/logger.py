"""Logging configuration for the shifted Yangian toolkit."""

import logging
import logging.handlers
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from ..utils.security import is_safe_path, sanitize_filename

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


@dataclass
class FileLogConfig:
    """Rotating log file settings."""

    path: Union[str, Path]
    size_limit: int = 5_000_000
    backup_count: int = 3


try:
    import colorlog

    HAS_COLORLOG = True
except ImportError:
    HAS_COLORLOG = False


def _console_formatter() -> logging.Formatter:
    if HAS_COLORLOG:
        return colorlog.ColoredFormatter(
            "%(log_color)s" + LOG_FORMAT,
            log_colors={
                "DEBUG": "cyan",
                "INFO": "green",
                "WARNING": "yellow",
                "ERROR": "red",
                "CRITICAL": "red,bg_white",
            },
            datefmt=DATE_FORMAT,
        )
    return logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)


def setup_logger(
    name: str,
    level: int = logging.INFO,
    console: bool = True,
    file_config: Optional[FileLogConfig] = None,
) -> logging.Logger:
    """
    Create a logger writing to stderr (coloured when colorlog is present)
    and optionally to a rotating file.

    Args:
        name: Logger name, "" for the root logger
        level: Logging level
        console: Whether to log to the console
        file_config: Optional rotating file settings

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    if logger.handlers:
        logger.handlers.clear()

    logger.setLevel(level)
    logger.propagate = False

    if console:
        console_handler = logging.StreamHandler()
        console_handler.setFormatter(_console_formatter())
        logger.addHandler(console_handler)

    if file_config:
        log_path = Path(file_config.path)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.handlers.RotatingFileHandler(
            log_path,
            maxBytes=file_config.size_limit,
            backupCount=file_config.backup_count,
        )
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        logger.addHandler(file_handler)

    return logger


def configure_root_logger(
    level: int = logging.INFO,
    log_dir: Optional[Union[str, Path]] = None,
    log_filename: str = "shifted_yangian.log",
) -> None:
    """
    Configure the root logger for command-line runs.

    Args:
        level: Logging level
        log_dir: Directory for log files; no file logging when omitted
        log_filename: Name of the log file inside ``log_dir``
    """
    log_file = None
    if log_dir:
        log_path = Path(log_dir)
        log_path.mkdir(parents=True, exist_ok=True)

        # SECURITY: keep the log file inside log_dir
        log_file = log_path / sanitize_filename(log_filename)
        if not is_safe_path(log_path, log_file):
            log_file = log_path / "shifted_yangian.log"

    file_config = FileLogConfig(path=log_file) if log_file else None
    setup_logger(name="", level=level, file_config=file_config)
