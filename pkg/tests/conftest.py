import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from krongraph.models import validate_generator  # noqa: E402
from krongraph.presets import PRESETS  # noqa: E402

GRAPH500 = validate_generator(0.57, 0.19, 0.19, 0.05)
UNIFORM = validate_generator(0.25, 0.25, 0.25, 0.25)
# t1/t2 = t3/t4 = 2 exactly (up to float rounding of 4/15 and 2/15)
RATIO = validate_generator(0.4, 0.2, 4 / 15, 2 / 15)
# all four entries distinct
SKEWED = validate_generator(0.45, 0.25, 0.2, 0.1)

ALL_GENERATORS = {
    "graph500": GRAPH500,
    "uniform": UNIFORM,
    **{name: p.generator for name, p in PRESETS.items() if name != "graph500"},
}


@pytest.fixture
def graph500():
    return GRAPH500
