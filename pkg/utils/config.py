import os
import logging
from fractions import Fraction
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

TOOL_VERSION = "0.3.0"

# Logging
LOG_LEVEL = os.getenv("NETSLOPE_LOG_LEVEL", "WARNING").upper()

# Probe Configuration
DEFAULT_PROBE_HEIGHT = 12
OMIT_CHECK_HEIGHT = 12
DEFAULT_EQUATOR_HEIGHT = 12

# Photon Tracing
DEFAULT_OFFSET = Fraction(1, 3)
GENERICITY_ROUNDS = 12

# Random Presentations
RANDOM_RETRY_CAP = 2000
RANDOM_GREEN_WINDOW = 2
RANDOM_BASIS_WINDOW = 4

# Reports
REPORT_DIR = os.getenv("NETSLOPE_REPORT_DIR", "reports")

HALFSPACE_KINDS = [
    "Obstruction",
    "NetObstruction",
    "FixedPoint",
    "NetFixedPoint",
    "GeneralFixed",
]


def get_thread_count() -> int:
    """Worker count for probe evaluation, read from NETSLOPE_THREADS on every call."""
    raw = os.getenv("NETSLOPE_THREADS")
    if raw is None or not raw.strip():
        return 1
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring non-integer NETSLOPE_THREADS=%r", raw)
        return 1
    if value < 1:
        logger.warning("Ignoring non-positive NETSLOPE_THREADS=%r", raw)
        return 1
    return value
