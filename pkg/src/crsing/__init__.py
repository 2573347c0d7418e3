"""Local polynomial convexity at degenerate CR singularities, made executable."""

from .approx import MinimaxRegressor, sector_scan
from .complexcore import CircleGrid, Disc, Sector, minimal_enclosing_sector, sector_contains, wirtinger_fd
from .hull import HullProbe, hull_probe
from .sheets import SheetSystem, build_sheets
from .surface import Certificate, CRSurface, certify

__version__ = "0.1.0"

__all__ = [
    "CRSurface",
    "Certificate",
    "CircleGrid",
    "Disc",
    "HullProbe",
    "MinimaxRegressor",
    "Sector",
    "SheetSystem",
    "build_sheets",
    "certify",
    "hull_probe",
    "minimal_enclosing_sector",
    "sector_contains",
    "sector_scan",
    "wirtinger_fd",
]
