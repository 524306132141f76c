"""Exception types raised by the simulation layers."""


class InvalidConfig(ValueError):
    """A configuration label list or run configuration is malformed."""


class InvalidParam(ValueError):
    """A physical parameter lies outside its admissible range."""


class DimensionError(ValueError):
    """Two objects that must share a basis or grid do not."""


class ResourceError(RuntimeError):
    """A requested dense allocation or evolution exceeds the configured guard."""


class DegenerateEvolution(RuntimeError):
    """A period step produced a (numerically) zero-norm state."""


class NearDefective(RuntimeError):
    """The eigenbasis condition estimate exceeds the trust threshold."""


class WeakPairing(RuntimeError):
    """No dominant eigenstate pair with a gap near pi carries enough weight."""


class InsufficientData(ValueError):
    """Fewer usable points than a regression model needs."""


class NoTransitionDetected(RuntimeError):
    """A melting scan produced a variance curve with no usable peak."""
