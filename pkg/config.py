"""
Configuration settings for the three-body integral toolkit
"""
import os
from pathlib import Path

from dotenv import load_dotenv

# ============================================================================
# PROJECT PATHS
# ============================================================================
PROJECT_ROOT = Path(__file__).parent

# Only environment variables are read from .env; there is no other config file
load_dotenv(PROJECT_ROOT / ".env")

# ============================================================================
# NUMERICS
# ============================================================================
# Default tolerance for the quadrature paths (basic B integral, oracle, ...)
DEFAULT_TOL = float(os.getenv("TBI_DEFAULT_TOL", "1e-12"))

# Working precision (decimal digits) of the optional mpmath accumulator
EXTENDED_DPS = 40

# Allowed values of the `precision` switch
PRECISIONS = ("standard", "extended")

# Relative slack when checking triangle conditions on relative coordinates
TRIANGLE_SLACK = 1e-12

# ============================================================================
# SERIES PARAMETERS
# ============================================================================
# Truncation rule: stop after STALL_COUNT consecutive terms with
# |term| <= REL_TOL * |partial sum|
SERIES_REL_TOL = 1e-15
SERIES_Q_MAX = 120       # single-Bessel series (q or kappa index)
SERIES_STALL_COUNT = 3
SERIES_P_MAX = 150       # two-Bessel series (outer p index)

# ============================================================================
# QUADRATURE
# ============================================================================
# Double-exponential rules: t ranges over [-T, T] before the map
DE_T_MAX_FINITE = 5.0
DE_T_MAX_HALF_LINE = 5.0
DE_T_MAX_TENSOR = 4.5
DE_START_STEP = 1.0
DE_MAX_LEVELS = 9        # step halvings for the adaptive 1D rules

# Brute-force 3D oracle (tensor Gauss-Laguerre per perimetric axis)
ORACLE_NODES = 32
ORACLE_MIN_NODES = 16
ORACLE_TOL = 1e-9
ORACLE_WORKERS = int(os.getenv("TBI_ORACLE_WORKERS", "4"))

# ============================================================================
# UEHLING POTENTIAL
# ============================================================================
FINE_STRUCTURE = 1.0 / 137.035999
XI_NODE_COUNT = 128
XI_MIN_NODES = 8
XI_TOL = 1e-10
XI_MAPPINGS = ("inverse", "shift")

# K0 switches from its power series to the cosh integral above this argument
K0_SERIES_MAX_Z = 2.0
KI_TOL = 1e-14

# ============================================================================
# OUTPUT & LOGGING
# ============================================================================
OUTPUT_DIGITS = 17
OUTPUT_FORMATS = ("csv", "json")
LOG_LEVEL = os.getenv("TBI_LOG_LEVEL", "WARNING").upper()
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Table reproduction tolerances (relative)
TABLE_I_RTOL = 1e-12
TABLE_II_RTOL = 1e-11
TABLE_WORKERS = 4


# ============================================================================
# UTILITY FUNCTIONS
# ============================================================================
def format_value(value: float) -> str:
    """Scientific notation with OUTPUT_DIGITS significant digits"""
    return f"{value:.{OUTPUT_DIGITS - 1}E}"


def print_config(stream=None):
    """Print current configuration"""
    lines = [
        "=" * 60,
        "THREE-BODY INTEGRALS - Configuration",
        "=" * 60,
        f"Default tolerance: {DEFAULT_TOL:g}",
        f"Series: rel_tol={SERIES_REL_TOL:g}, q_max={SERIES_Q_MAX}, "
        f"p_max={SERIES_P_MAX}, stall={SERIES_STALL_COUNT}",
        f"Oracle: nodes/axis={ORACLE_NODES}, tol={ORACLE_TOL:g}, workers={ORACLE_WORKERS}",
        f"Uehling: alpha={FINE_STRUCTURE:.12g}, xi nodes={XI_NODE_COUNT}, tol={XI_TOL:g}",
        f"Extended precision digits: {EXTENDED_DPS}",
        f"Log level: {LOG_LEVEL}",
        "=" * 60,
    ]
    print("\n".join(lines), file=stream)


if __name__ == "__main__":
    print_config()
