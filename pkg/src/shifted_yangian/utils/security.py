"""Path safety helpers for report and log files."""

import logging
import re
from pathlib import Path

logger = logging.getLogger(__name__)


def sanitize_filename(filename: str, max_length: int = 200) -> str:
    """
    Sanitize a filename so it is safe to use as a single path component.

    Args:
        filename: Untrusted file name, e.g. taken from a command-line flag
        max_length: Maximum allowed length

    Returns:
        The sanitized name.
    """
    if not isinstance(filename, str):
        filename = str(filename)

    sanitized = re.sub(r"[^\w\-\.\s]", "_", filename)
    sanitized = re.sub(r"\.{2,}", "_", sanitized)
    sanitized = sanitized.strip(". ")

    if not sanitized:
        sanitized = "unknown"
    return sanitized[:max_length]


def is_safe_path(base_dir: Path, target_path: Path) -> bool:
    """
    Check that ``target_path`` resolves to a location inside ``base_dir``.

    Args:
        base_dir: The intended base directory.
        target_path: The path to verify.

    Returns:
        True if the target stays within the base directory.
    """
    try:
        return target_path.resolve().is_relative_to(base_dir.resolve())
    except (OSError, RuntimeError):
        return False


def resolve_output_path(base_dir: Path, requested: str) -> Path:
    """Resolve a report path given on the command line.

    Relative paths are anchored at ``base_dir``; only the final component is
    sanitized, so nested report directories stay usable.

    Raises:
        ValueError: If the resolved path escapes ``base_dir``.
    """
    candidate = Path(requested)
    if not candidate.is_absolute():
        candidate = base_dir / candidate
    candidate = candidate.parent / sanitize_filename(candidate.name)

    if not is_safe_path(base_dir, candidate):
        logger.error(f"SECURITY: output path outside {base_dir}: {candidate}")
        raise ValueError(f"Output path must stay inside {base_dir}: {requested}")
    return candidate
