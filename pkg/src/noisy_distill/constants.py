"""Numerical tolerances shared by the whole package."""

# exact linear algebra on small matrices
EXACT_TOL = 1e-12
# slack for eigenvalue non-negativity
PSD_TOL = 1e-10
# equality of fidelity curves when clustering
CURVE_TOL = 1e-9
# denominators below this are treated as a failed post-selection
ZERO_PSUCC = 1e-15
