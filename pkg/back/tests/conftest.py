"""
Global test fixtures for rotodo backend tests.

Provides settings isolation and the worked rotated odometers shared by the
service, controller and endpoint tests.
"""
import sys
from pathlib import Path
from typing import Callable, Dict, Tuple

import pytest

# Ensure the back/ directory is in the Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

# Define ROOT_DIR as the back/ directory
ROOT_DIR = Path(__file__).parent.parent


# (q, permutation text) of every worked system
WORKED_SYSTEMS: Dict[str, Tuple[int, str]] = {
    "q3_012": (3, "(012)"),
    "q3_021": (3, "(021)"),
    "q5_01234": (5, "(01234)"),
    "q5_02431": (5, "(02431)"),
    "q5_02413": (5, "(02413)"),
    "q7_0654321": (7, "(0654321)"),
    "q7_0516234": (7, "(0516234)"),
    "q7_0361425": (7, "(0361425)"),
}


# ============================================================================
# Settings Configuration
# ============================================================================

@pytest.fixture(scope="session", autouse=True)
def patch_settings():
    """Pin SETTINGS to the documented defaults for the whole session."""
    from shared.core.config import SETTINGS

    # Store original values
    original_convention = SETTINGS.N_CONVENTION
    original_seed = SETTINGS.EIGEN_SEED
    original_max_cells = SETTINGS.MAX_CELLS
    original_timings = SETTINGS.REPORT_INCLUDE_TIMINGS
    original_log_json = SETTINGS.LOG_JSON

    # Set test values
    SETTINGS.N_CONVENTION = "geq"
    SETTINGS.EIGEN_SEED = "ones"
    SETTINGS.MAX_CELLS = 2**26
    SETTINGS.REPORT_INCLUDE_TIMINGS = False
    SETTINGS.LOG_JSON = False

    yield SETTINGS

    # Restore original values
    SETTINGS.N_CONVENTION = original_convention
    SETTINGS.EIGEN_SEED = original_seed
    SETTINGS.MAX_CELLS = original_max_cells
    SETTINGS.REPORT_INCLUDE_TIMINGS = original_timings
    SETTINGS.LOG_JSON = original_log_json


# ============================================================================
# Worked Systems
# ============================================================================

@pytest.fixture(scope="session")
def make_system() -> Callable:
    """Build a RotatedOdometer from (q, permutation text)."""
    from shared.models.odometer import RotatedOdometer
    from shared.models.permutation import Permutation

    def build(q: int, perm: str, convention: str = "geq") -> RotatedOdometer:
        return RotatedOdometer.create(q, Permutation.parse(perm, q), convention)

    return build


@pytest.fixture(scope="session")
def renormalized(make_system) -> Callable:
    """Cached renormalization sequences, keyed by WORKED_SYSTEMS name or (q, perm)."""
    from api.services.renormalization_service import renorm_sequence

    cache = {}

    def get(name_or_q, perm: str = None):
        key = WORKED_SYSTEMS[name_or_q] if isinstance(name_or_q, str) else (name_or_q, perm)
        if key not in cache:
            cache[key] = renorm_sequence(make_system(*key))
        return cache[key]

    return get


@pytest.fixture(params=sorted(WORKED_SYSTEMS))
def worked_name(request) -> str:
    """Parametrizes a test over every worked system."""
    return request.param
