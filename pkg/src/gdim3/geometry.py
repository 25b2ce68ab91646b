"""The eight maximal three-dimensional model geometries."""
from __future__ import annotations

from enum import Enum


class Geometry(Enum):
    """Model geometries carried by closed prime 3-manifolds.

    The value strings are the wire names used by the JSON description
    format and the command line.
    """

    S3 = "S3"
    E3 = "E3"
    H3 = "H3"
    S2xE = "S2xE"
    H2xE = "H2xE"
    PSL2R = "PSL2R"
    NIL = "Nil"
    SOL = "Sol"

    def __str__(self) -> str:
        return self.value
