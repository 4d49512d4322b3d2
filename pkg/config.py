"""Configuration management for the monotone duality toolkit."""
import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Toolkit configuration from environment variables."""

    # Output
    OUTPUT_DIR = os.getenv("DUALITY_OUTPUT_DIR") or None
    LOG_LEVEL = os.getenv("DUALITY_LOG_LEVEL", "INFO").upper()
    FIXTURE_OVERLAY = os.getenv("DUALITY_FIXTURE_OVERLAY") or None

    # Tolerances
    MEMBERSHIP_TOL = float(os.getenv("DUALITY_MEMBERSHIP_TOL", "1e-9"))
    ITERATION_TOL = float(os.getenv("DUALITY_ITERATION_TOL", "1e-8"))
    if MEMBERSHIP_TOL <= 0 or ITERATION_TOL <= 0:
        raise ValueError("DUALITY_MEMBERSHIP_TOL and DUALITY_ITERATION_TOL must be positive")

    # Iteration budget
    MAX_ITER = int(os.getenv("DUALITY_MAX_ITER", "100000"))
    if MAX_ITER < 1:
        raise ValueError("DUALITY_MAX_ITER must be at least 1")

    # Verification suites
    DEFAULT_SEED = int(os.getenv("DUALITY_DEFAULT_SEED", "42"))
    DEFAULT_SAMPLES = int(os.getenv("DUALITY_DEFAULT_SAMPLES", "1000"))
    SAMPLE_SCALE = float(os.getenv("DUALITY_SAMPLE_SCALE", "10.0"))
    GRID_SPACING = float(os.getenv("DUALITY_GRID_SPACING", "1e-3"))
    if DEFAULT_SAMPLES < 1 or SAMPLE_SCALE <= 0 or GRID_SPACING <= 0:
        raise ValueError("DUALITY_DEFAULT_SAMPLES, DUALITY_SAMPLE_SCALE and DUALITY_GRID_SPACING must be positive")

    # Sampled firm-nonexpansiveness guard on every constructed operator (debug/test builds)
    VALIDATE_OPERATORS = os.getenv("DUALITY_VALIDATE_OPERATORS", "false").lower() == "true"


config = Config()
