"""Global numeric tolerances.

All quadratures in the package target QUAD_RTOL relative accuracy.  The
environment variable HEATBOUND_TOL overrides it; it is read lazily so tests can
monkeypatch the environment.
"""

import os

DEFAULT_QUAD_RTOL = 1e-10

# Hard cap on adaptive subdivisions per quadrature call.
QUAD_LIMIT = 300

# Negative-margin slack for the verification suites (absolute).  Accounts for
# quadrature and spectrum-truncation tolerances; larger violations are bugs.
MARGIN_SLACK = 1e-9


def quad_rtol() -> float:
    raw = os.environ.get("HEATBOUND_TOL")
    if raw is None:
        return DEFAULT_QUAD_RTOL
    try:
        val = float(raw)
    except ValueError:
        return DEFAULT_QUAD_RTOL
    return val if val > 0 else DEFAULT_QUAD_RTOL
