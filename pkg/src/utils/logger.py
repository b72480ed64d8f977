"""
Logging utilities for apg-sets
"""

import logging
import sys
from pathlib import Path
from typing import Optional

LOG_FORMAT = '%(asctime)s | %(levelname)s | %(name)s | %(message)s'


def setup_logger(name: str, level: int = logging.WARNING,
                 log_file: Optional[str] = None) -> logging.Logger:
    """
    Setup logger with consistent formatting

    Handlers write to stderr; stdout carries set renderings, DOT text and
    harness reports.

    Args:
        name: Logger name
        level: Logging level
        log_file: Optional log file path

    Returns:
        Configured logger
    """
    logger = logging.getLogger(name)

    # Avoid duplicate handlers
    if logger.handlers:
        return logger

    logger.setLevel(level)
    formatter = logging.Formatter(LOG_FORMAT, datefmt='%H:%M:%S')

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        add_file_handler(logger, log_file)

    return logger


def add_file_handler(logger: logging.Logger, log_file: str) -> bool:
    """Attach a UTF-8 file handler; returns False if the file cannot be opened"""
    try:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_path, encoding='utf-8')
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt='%H:%M:%S'))
        logger.addHandler(file_handler)
        return True
    except Exception as e:
        logger.warning(f"Failed to setup file logging: {e}")
        return False


def set_package_level(level: int):
    """Apply one level to every logger created under the `src` package"""
    for name, candidate in logging.root.manager.loggerDict.items():
        if name.startswith('src') and isinstance(candidate, logging.Logger):
            candidate.setLevel(level)
