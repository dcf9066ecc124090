"""Manage numerical tunables for skysplit via environment variables."""

# Skysplit - config.py
# Copyright (C) 2026 The Skysplit Contributors

import os


def _int(key: str, default: int) -> int:
    raw = os.environ.get(key)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


def _float(key: str, default: float) -> float:
    raw = os.environ.get(key)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        return default


def _bool(key: str, default: bool) -> bool:
    raw = os.environ.get(key)
    if raw is None:
        return default
    lowered = raw.strip().lower()
    if lowered in {"1", "true", "yes", "on"}:
        return True
    if lowered in {"0", "false", "no", "off"}:
        return False
    return default


# --- Adaptive quadrature ---
# Relative and absolute tolerance handed to every adaptive integral.
QUAD_REL_TOL = _float("SKYSPLIT_QUAD_REL_TOL", 1e-8)
QUAD_ABS_TOL = _float("SKYSPLIT_QUAD_ABS_TOL", 1e-12)

# Subinterval limit before an adaptive integral gives up.
QUAD_MAX_SUBDIVISIONS = _int("SKYSPLIT_QUAD_MAX_SUBDIVISIONS", 2000)

# --- Contour derivatives ---
# Trapezoid nodes on the Cauchy circle. The check run uses twice as many.
CONTOUR_NODES = _int("SKYSPLIT_CONTOUR_NODES", 64)

# Circle radius as a fraction of the evaluation point.
CONTOUR_RADIUS = _float("SKYSPLIT_CONTOUR_RADIUS", 0.4)

# Largest acceptable gap between the two contour runs.
CONTOUR_TOL = _float("SKYSPLIT_CONTOUR_TOL", 1e-7)

# Highest derivative order taken on the contour. Above it, coverage switches
# to the Gamma-mixture form (roundoff grows geometrically with the order).
MAX_CONTOUR_ORDER = _int("SKYSPLIT_MAX_CONTOUR_ORDER", 15)

# --- Inverse Laplace ---
# Contour nodes; the error estimate reruns with half as many.
LAPLACE_NODES = _int("SKYSPLIT_LAPLACE_NODES", 32)
LAPLACE_TOL = _float("SKYSPLIT_LAPLACE_TOL", 1e-6)

# --- Shot-process kernels ---
# Nodes of the precomputed LoS intensity integral.
ZETA_GRID_POINTS = _int("SKYSPLIT_ZETA_GRID_POINTS", 4096)

# Expected LoS count the precomputed grid must cover (exp(-40) tail left out).
ZETA_MASS = _float("SKYSPLIT_ZETA_MASS", 40.0)

# Trapezoid step in log(w), w the expected LoS count inside the serving
# distance. The rule spans w in [1e-12, ZETA_MASS].
DISTANCE_STEP = _float("SKYSPLIT_DISTANCE_STEP", 0.25)

# Interferer distance: log-spaced Gauss-Legendre panels (8 nodes each) up to
# the knee, then a power-law tail map. Panels are added once the log span
# would make any of them wider than INTERFERENCE_PANEL_WIDTH.
INTERFERENCE_PANELS = _int("SKYSPLIT_INTERFERENCE_PANELS", 32)
INTERFERENCE_PANEL_WIDTH = _float("SKYSPLIT_INTERFERENCE_PANEL_WIDTH", 2.0)
INTERFERENCE_TAIL_NODES = _int("SKYSPLIT_INTERFERENCE_TAIL_NODES", 32)

# Gauss-Legendre nodes over the serving beamforming gain (large arrays).
GAMMA_NODES = _int("SKYSPLIT_GAMMA_NODES", 48)

# Step of the trapezoid rule in log(s) for the rate integral.
RATE_STEP = _float("SKYSPLIT_RATE_STEP", 0.25)

# --- Monte Carlo ---
MC_TRIALS = _int("SKYSPLIT_MC_TRIALS", 10_000)

# Smallest simulation disc radius in meters.
MC_MIN_RADIUS = _float("SKYSPLIT_MC_MIN_RADIUS", 5000.0)

# Worker threads for trials and sweep points. 0 = os.cpu_count().
THREADS = _int("SKYSPLIT_THREADS", 0)

# --- Diagnostics ---
# Cross-check alternative analytic forms against each other on every call.
DEBUG = _bool("SKYSPLIT_DEBUG", False)


def worker_count(requested: int | None = None) -> int:
    """Resolve a thread count, falling back to the hardware concurrency."""
    count = THREADS if requested is None else requested
    if count <= 0:
        count = os.cpu_count() or 1
    return count
