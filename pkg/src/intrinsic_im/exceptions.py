"""Exception hierarchy.

Everything raised for bad user input derives from :class:`ValidationError`
so the CLI can map it to a single exit code.
"""


class ValidationError(ValueError):
    """Invalid input to an operation."""


class NegativeWeight(ValidationError):
    pass


class ZeroRow(ValidationError):
    """A node has in-edges but their raw weights sum to zero."""

    def __init__(self, node):
        self.node = node
        super().__init__(f"in-edge weights of node {node!r} sum to zero")


class MissingEdge(ValidationError, KeyError):
    def __init__(self, src, dst):
        self.src, self.dst = src, dst
        super().__init__(f"no edge {src!r} -> {dst!r}")

    def __str__(self):
        return self.args[0]


class BudgetExceeded(ValidationError):
    """Exact enumeration would exceed the outcome budget."""


class InvalidK(ValidationError):
    pass


class InvalidP(ValidationError):
    pass


class EmptyList(ValidationError):
    pass


class NotConverged(RuntimeError):
    """An iterative solver hit its iteration cap above tolerance."""

    def __init__(self, residual, iterations):
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"did not converge after {iterations} iterations "
            f"(residual {residual:.3e})"
        )


class ExhaustedProviderWarning(UserWarning):
    """Snowball sampling could not reach the requested size."""
