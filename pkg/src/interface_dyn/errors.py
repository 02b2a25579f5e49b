"""Exception taxonomy for the interface evolution package."""


class InterfaceDynError(Exception):
    """Base class for all package-specific failures."""


class CurveDegenerate(InterfaceDynError):
    """Two distinct curve nodes coincide; the chord quadrature is undefined."""


class SelfIntersecting(InterfaceDynError):
    """A scenario produced a curve violating the arc-chord condition."""


class UnknownScenario(InterfaceDynError):
    """Requested scenario name is not registered."""


class ResolutionExceeded(InterfaceDynError):
    """Energy order k is too high for the grid (needs k <= N/4)."""


class ConfigError(InterfaceDynError):
    """Invalid or unparseable run configuration."""


class StepRejected(InterfaceDynError):
    """Adaptive control refused the requested dt; retry with suggested_dt."""

    def __init__(self, suggested_dt: float):
        super().__init__(f"step size above stability bound; retry with dt={suggested_dt:.3e}")
        self.suggested_dt = suggested_dt


class NoConvergence(InterfaceDynError):
    """Second-kind solve missed the residual target within the iteration cap."""

    def __init__(self, residual: float, iterations: int):
        super().__init__(
            f"second-kind solve stalled at residual {residual:.3e} after {iterations} matvecs")
        self.residual = residual
        self.iterations = iterations
