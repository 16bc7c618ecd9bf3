from .expr import FUNCTIONS
from .limits import iterated_limit, projective_limit
from .parser import parse
from .sampling import random_rational_points, rational_grid
from .scalar import Mode, Point, Scalar, differentiate, evaluate, field_for, normalize

__all__ = [
    "FUNCTIONS", "Mode", "Point", "Scalar", "differentiate", "evaluate", "field_for",
    "iterated_limit", "normalize", "projective_limit", "parse", "random_rational_points", "rational_grid",
]
