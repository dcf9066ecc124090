"""Provide logging configuration for the skysplit command line."""

# Skysplit - skysplit_logger.py
# Copyright (C) 2026 The Skysplit Contributors

import logging
import sys
from datetime import datetime

RESET = "\033[0m"
DIM = "\033[2m"
RED = "\033[91m"
YELLOW = "\033[93m"
CYAN = "\033[96m"
WHITE = "\033[97m"


class SkysplitFormatter(logging.Formatter):
    """Handle color rules based on message content.

    Numerical fallbacks and excluded trials stand out in yellow so a long
    sweep log can be skimmed for the points that need a second look.
    """

    def format(self, record: logging.LogRecord) -> str:
        """Format the log message with a timestamp and appropriate icon."""
        timestamp = datetime.fromtimestamp(record.created).strftime(
            "%I:%M:%S%p",
        )

        msg = record.getMessage()
        lower_msg = msg.lower()

        if (
            record.levelno >= logging.ERROR
            or "error" in lower_msg
            or "failed" in lower_msg
        ):
            color = RED
            icon = "✖"
        elif (
            record.levelno >= logging.WARNING
            or "fallback" in lower_msg
            or "excluded" in lower_msg
        ):
            color = YELLOW
            icon = "!"
        elif (
            "converged" in lower_msg
            or "wrote" in lower_msg
            or "complete" in lower_msg
        ):
            color = CYAN
            icon = "✓"
        elif (
            "starting" in lower_msg
            or "sweep" in lower_msg
            or "building" in lower_msg
        ):
            color = YELLOW
            icon = "⟳"
        else:
            color = WHITE
            icon = "•"

        formatted_time = f"{DIM}{timestamp}{RESET}"
        formatted_msg = f"{color}{icon} {msg}{RESET}"

        return f"{formatted_time} {formatted_msg}"


def setup_logger(level: int = logging.INFO) -> None:
    """Configure the root logger to use our custom formatter.

    Records go to stderr; stdout is reserved for machine-readable output.
    """
    logger = logging.getLogger()
    logger.setLevel(level)

    if logger.hasHandlers():
        logger.handlers.clear()

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(SkysplitFormatter())
    logger.addHandler(handler)
