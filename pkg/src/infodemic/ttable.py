"""Two-tailed Student-t critical values, bundled as data.

Standard printed-table values (three decimals) for degrees of freedom
1..120 at significance levels 0.05 and 0.01. A fixed-alpha accept or
reject decision only needs the table, not a CDF implementation; above
df 120 the df=120 entry is used (the table's asymptotic tail).
"""

from __future__ import annotations

from .errors import DataError

MAX_DF = 120

_T_05 = (
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
    2.201, 2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
    2.080, 2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
    2.040, 2.037, 2.035, 2.032, 2.030, 2.028, 2.026, 2.024, 2.023, 2.021,
    2.020, 2.018, 2.017, 2.015, 2.014, 2.013, 2.012, 2.011, 2.010, 2.009,
    2.008, 2.007, 2.006, 2.005, 2.004, 2.003, 2.002, 2.002, 2.001, 2.000,
    2.000, 1.999, 1.998, 1.998, 1.997, 1.997, 1.996, 1.995, 1.995, 1.994,
    1.994, 1.993, 1.993, 1.993, 1.992, 1.992, 1.991, 1.991, 1.990, 1.990,
    1.990, 1.989, 1.989, 1.989, 1.988, 1.988, 1.988, 1.987, 1.987, 1.987,
    1.986, 1.986, 1.986, 1.986, 1.985, 1.985, 1.985, 1.984, 1.984, 1.984,
    1.984, 1.983, 1.983, 1.983, 1.983, 1.983, 1.982, 1.982, 1.982, 1.982,
    1.982, 1.981, 1.981, 1.981, 1.981, 1.981, 1.980, 1.980, 1.980, 1.980,
)

_T_01 = (
    63.657, 9.925, 5.841, 4.604, 4.032, 3.707, 3.499, 3.355, 3.250, 3.169,
    3.106, 3.055, 3.012, 2.977, 2.947, 2.921, 2.898, 2.878, 2.861, 2.845,
    2.831, 2.819, 2.807, 2.797, 2.787, 2.779, 2.771, 2.763, 2.756, 2.750,
    2.744, 2.738, 2.733, 2.728, 2.724, 2.719, 2.715, 2.712, 2.708, 2.704,
    2.701, 2.698, 2.695, 2.692, 2.690, 2.687, 2.685, 2.682, 2.680, 2.678,
    2.676, 2.674, 2.672, 2.670, 2.668, 2.667, 2.665, 2.663, 2.662, 2.660,
    2.659, 2.657, 2.656, 2.655, 2.654, 2.652, 2.651, 2.650, 2.649, 2.648,
    2.647, 2.646, 2.645, 2.644, 2.643, 2.642, 2.641, 2.640, 2.640, 2.639,
    2.638, 2.637, 2.636, 2.636, 2.635, 2.634, 2.634, 2.633, 2.632, 2.632,
    2.631, 2.630, 2.630, 2.629, 2.629, 2.628, 2.627, 2.627, 2.626, 2.626,
    2.625, 2.625, 2.624, 2.624, 2.623, 2.623, 2.623, 2.622, 2.622, 2.621,
    2.621, 2.620, 2.620, 2.620, 2.619, 2.619, 2.619, 2.618, 2.618, 2.617,
)

TABLES: dict[float, tuple[float, ...]] = {0.05: _T_05, 0.01: _T_01}


def critical_value(df: int, alpha: float = 0.05) -> float:
    """Two-tailed critical value for the given degrees of freedom."""
    if df < 1:
        raise DataError("t-test needs at least 1 degree of freedom")
    table = TABLES.get(alpha)
    if table is None:
        raise DataError(f"alpha must be one of {sorted(TABLES)}, got {alpha}")
    return table[min(df, MAX_DF) - 1]
