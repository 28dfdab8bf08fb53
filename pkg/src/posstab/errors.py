"""Exception types shared across the package."""


class DimensionMismatchError(ValueError):
    """Vector or matrix dimensions do not match the declared cone/operator."""


class UnsupportedConeNormError(ValueError):
    """Cone/norm pairing for which no certified closed form is implemented."""


class NotALatticeError(ValueError):
    """Lattice operation requested under a cone without lattice structure."""


class SpectralProximityError(ValueError):
    """Resolvent requested at a point inside (or too close to) the spectral bracket."""


class DivergenceError(ArithmeticError):
    """A series or iteration was detected to diverge."""


class NoISSEstimateError(DivergenceError):
    """ISS constants requested for a system that is not exponentially stable."""
