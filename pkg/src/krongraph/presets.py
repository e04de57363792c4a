"""Published generator parameter sets."""

import math
from dataclasses import dataclass

from .models import SkgParams, validate_generator

GRAPH500_LEVELS = (26, 29, 32, 36, 39, 42)


@dataclass(frozen=True)
class Preset:
    name: str
    generator: object
    levels: int
    m: int
    noise: float = None
    # size of the real graph the parameters were fitted to, if any
    real_vertices: int = None
    real_edges: int = None
    snap_name: str = None

    def params(self, levels=None, m=None):
        levels = self.levels if levels is None else levels
        if m is None:
            m = graph500_edges(levels) if self.name == "graph500" else self.m
        return SkgParams(self.generator, levels, m)


def normalized(*digits):
    """Generator from rounded entries, rescaled to sum to 1."""
    total = math.fsum(digits)
    return validate_generator(*(x / total for x in digits))


def graph500_edges(levels):
    return 16 * (1 << levels)


PRESETS = {
    "graph500": Preset(
        "graph500", validate_generator(0.57, 0.19, 0.19, 0.05), 18, graph500_edges(18), noise=0.1,
    ),
    "soc-epinions": Preset(
        "soc-epinions", normalized(0.4668, 0.2486, 0.2243, 0.0603), 17, 811480,
        real_vertices=75879, real_edges=811480, snap_name="soc-Epinions1.txt",
    ),
    "ca-hepth": Preset(
        "ca-hepth", normalized(0.469455, 0.127350, 0.127350, 0.275846), 14, 51946,
        real_vertices=9875, real_edges=51946, snap_name="CA-HepTh.txt",
    ),
    "cit-hepph": Preset(
        "cit-hepph", normalized(0.429559, 0.189715, 0.153414, 0.227312), 15, 841754,
        real_vertices=34546, real_edges=841754, snap_name="Cit-HepPh.txt",
    ),
}


def get_preset(name):
    key = name.lower()
    if key.startswith("graph500-"):
        levels = int(key.split("-", 1)[1])
        base = PRESETS["graph500"]
        return Preset(base.name, base.generator, levels, graph500_edges(levels), noise=base.noise)
    try:
        return PRESETS[key]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
