# Type aliases
from typing import Union

import numpy as np


Meters = float  # Distance in meters
Radians = float  # Angle in radians
Degrees = float  # Angle in degrees
Seconds = float  # Duration in seconds
Cell = tuple[int, int]  # Grid cell as (row, col)
Point = tuple[float, float]  # World point as (x, y) in meters
Seed = Union[int, np.random.Generator, None]  # Anything as_generator() accepts
LabelId = int  # Semantic label id (0 = none)
