"""Exception types shared across the package."""


class ClusterError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgument(ClusterError, ValueError):
    pass


class UnsupportedConfiguration(ClusterError, NotImplementedError):
    pass


class InconsistentInput(ClusterError, ValueError):
    """A numerical contract (e.g. symplecticity) is violated by the input."""


class MalformedNullifier(ClusterError, ValueError):
    pass


class InconsistentGraph(ClusterError, ValueError):
    """Two nullifiers disagree about the weight of a shared edge."""
