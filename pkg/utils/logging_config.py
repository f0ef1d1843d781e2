"""
This module configures logging for the application.
"""

import logging
from typing import List, Optional

DEFAULT_LOG_FILE = "demandcast.log"


def configure_logging(level: str = "INFO", log_file: Optional[str] = DEFAULT_LOG_FILE) -> None:
    """
    Configure the root logger for the application.

    Args:
        level: Name of the logging level, e.g. 'INFO' or 'DEBUG'.
        log_file: Path of the log file. An empty value logs to the stream only.
    """
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )
