"""Chamber decompositions, crossing tests and cuttings for both backends."""
from .cutting import (Cutting, build_cutting, crosses, crossing_matrix, crossing_set,
                      cutting_budget, decompose, value_on)
from .interval1d import Decomposition1D, Interval
from .planar import Cell as Cell2D, Line, PlanarDecomposition

__all__ = ["Cutting", "build_cutting", "crosses", "crossing_matrix", "crossing_set", "cutting_budget",
           "decompose", "value_on", "Decomposition1D", "Interval", "Cell2D", "Line",
           "PlanarDecomposition"]
