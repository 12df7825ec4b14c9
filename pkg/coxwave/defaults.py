import math

EPS_GEOM = 1e-9
"""Geometric tolerance: Frobenius distance for matrix equality, distance to a
chamber wall, and the guard band around cell faces."""

MAX_GROUP_ORDER = 1024
"""Group closure gives up (with :class:`~exceptions.NonFiniteGroup`) once it
has produced this many elements."""

K_MAX = 40
"""Default number of dilation powers on each side of zero in multiplicative
tiling checks."""

DEFAULT_DEPTH = 16
"""Default truncation depth of the iterative wavelet set constructions."""

DEFAULT_RADIUS = 32
"""Default sup-norm truncation radius of the sampling series."""

DEFAULT_SAMPLES = 100_000
"""Default number of Monte Carlo samples."""

DEFAULT_SEED = 0
"""Default seed for every random stream."""

BLOCK_SIZE = 10_000
"""Samples per Monte Carlo block. Each block draws from its own substream."""

MAX_TRANSLATES = 100_000
"""Upper bound on lattice translates examined when splitting a scaling
set."""

ORDER_VECTOR_RETRIES = 8
"""How many perturbed order vectors are tried before giving up."""


def default_order_vector(dim: int) -> tuple[float, ...]:
    """The generic vector (1, 1/pi, 1/pi^2, ...) ordering the roots."""

    return tuple(math.pi**-k for k in range(dim))


EXIT_OK = 0
"""Every check passed."""

EXIT_CHECK_FAILED = 1
"""At least one verification check failed; the report was still written."""

EXIT_INVALID = 2
"""The input (config, scene, plan or signal) could not be used."""

SPECTRAL_DEFECT = 1e-10
"""Largest off-diagonal Gram entry a sampling plan may have before its lattice
is rejected as a spectrum of P."""
