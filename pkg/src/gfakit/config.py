"""Numerical defaults shared across modules."""
import os

NMAX = 10**6
TAIL_POINTS = 24
TAIL_WINDOW = 8

# tail-fit decision thresholds
NEGLIGIBLE_EXPONENT = -3.0
RESIDUAL_TOL = 1e-3
# largest change of the fitted limit between the last two windows when the
# slope test is borderline (a pessimistic error estimate for the earlier window)
DRIFT_TOL = 1e-2
# growth rate of the local slopes dL/d(1/r) against 1/r (log-log)
DIVERGENT_SLOPE = 0.25
CONVERGENT_SLOPE = 0.05

# hard caps enforced by the experiment DSL
NMAX_CAP = 10**7
INDEX_CAP = 8
LEVEL_CAP = 12


def default_nmax() -> int:
    """``GFA_NMAX`` from the environment, else :data:`NMAX`."""
    raw = os.environ.get("GFA_NMAX")
    if raw:
        return int(float(raw))
    return NMAX
