"""
CompoundCert.Configuration
~~~~~~~~~~~~

This module implements the package-wide configuration.
"""

# Configuration Class
class Configuration:
    """
    Configuration class holding the numerical constants of the package.

    Functions read these values at call time when the corresponding keyword argument is None,
    so changing an attribute here changes the default for every later call.
    """

    # Largest ambient dimension n accepted for index sets and compounds (C(n,k) grows quickly)
    MAX_DIMENSION: int = 20

    # Metzler tolerance, relative to max |a_ij| of the tested matrix
    METZLER_RELATIVE_TOL: float = 1e-12

    # Zero detection for sign variations, relative to the infinity norm of the vector
    ZERO_RELATIVE_TOL: float = 1e-9

    # Fraction of samples allowed to be reducible for strong k-positivity
    IRREDUCIBLE_EXCEPTION_FRACTION: float = 0.01

    # Contraction margins within this band (relative to the sample scale) are inconclusive
    MARGIN_TOL: float = 1e-12

    # Gauss-Legendre nodes for the variational matrix
    DEFAULT_QUAD_NODES: int = 8

    # Integrator steps
    DEFAULT_STEP: float = 1e-3
    THOMAS_STEP: float = 1e-2

    # Thomas benchmark horizons
    OPEN_LOOP_HORIZON: float = 2000.0
    EQUILIBRIUM_HORIZON: float = 200.0
    EQUILIBRIUM_TOL: float = 1e-6

    # Sign-regularity enumeration gets expensive past this dimension
    SIGN_REGULAR_WARN_DIMENSION: int = 10

    # Sample densities for certification grids
    DEFAULT_GRID_POINTS: int = 21
    DEFAULT_TIME_SAMPLES: int = 201

    # Largest imaginary residue, relative to the result norm, dropped from a real matrix power
    POWER_IMAG_RELATIVE_TOL: float = 1e-8
