"""Exception hierarchy shared by the analytic, simulation and CLI layers.

Every error carries the process exit status the command line front-end
reports for it, so callers never map exception types to codes by hand.
"""

# Skysplit - errors.py
# Copyright (C) 2026 The Skysplit Contributors

from __future__ import annotations

import math


class SkysplitError(Exception):
    """Base class for every error raised by skysplit."""

    exit_code = 1


class DomainError(SkysplitError, ValueError):
    """An argument lies outside the domain of the called operation."""

    exit_code = 2


class ConfigurationError(SkysplitError, ValueError):
    """A network configuration is invalid or incomplete."""

    exit_code = 2


class UnsupportedByAnalysisError(ConfigurationError):
    """The configuration is valid but outside what the analysis covers.

    Raised when a finite mmWave NLoS intercept reaches an analytic
    operation; the Monte Carlo path handles such configurations.
    """


class ConvergenceError(SkysplitError, ArithmeticError):
    """A numerical kernel did not reach its tolerance."""

    exit_code = 3

    def __init__(
        self,
        message: str,
        *,
        estimate: float = math.nan,
        error_bound: float = math.inf,
    ) -> None:
        """Keep the best estimate and its error bound for the caller."""
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound
