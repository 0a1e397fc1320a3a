"""Exception types shared across the package.

Every error carries enough context to produce a single-line machine-readable
report on stderr (see cli.py for the exit-code mapping).
"""


class NetoscError(Exception):
    """Base class for all package errors."""

    exit_code = 4

    def payload(self) -> dict:
        return {"error": type(self).__name__, "detail": str(self)}


class InputError(NetoscError):
    """Malformed or illegal input data (exit code 2)."""

    exit_code = 2


class ParseError(InputError):
    def __init__(self, line_no, text):
        super().__init__(f"line {line_no}: cannot parse {text!r}")
        self.line_no = line_no
        self.text = text


class DuplicateEdge(InputError):
    def __init__(self, src, dst):
        super().__init__(f"duplicate edge {src}->{dst}")
        self.src = src
        self.dst = dst


class SelfLoop(InputError):
    def __init__(self, node):
        super().__init__(f"self-loop at node {node}")
        self.node = node


class NonPositiveWeight(InputError):
    def __init__(self, line_no, weight):
        super().__init__(f"line {line_no}: weight {weight} is not positive")
        self.line_no = line_no
        self.weight = weight


class NumericalFailure(NetoscError):
    """Numerical breakdown: solver non-convergence, overflow (exit code 3)."""

    exit_code = 3


class SqrtUndefined(NumericalFailure):
    def __init__(self, eigenvalue, reason):
        super().__init__(f"square root undefined at eigenvalue {eigenvalue}: {reason}")
        self.eigenvalue = eigenvalue
        self.reason = reason


class Diverged(NumericalFailure):
    """Trajectory exceeded the overflow guard; the truncated prefix is kept."""

    def __init__(self, t):
        super().__init__(f"state magnitude exceeded 1e12 at t={t}")
        self.t = t


class ModelViolation(NetoscError):
    """Request conflicts with a model precondition (exit code 4)."""


class NotSymmetrizable(ModelViolation):
    def __init__(self, reason, edge=None):
        msg = reason if edge is None else f"{reason} at edge {edge[0]}->{edge[1]}"
        super().__init__(msg)
        self.reason = reason
        self.edge = edge


class ZeroDegreeNode(ModelViolation):
    def __init__(self, node):
        super().__init__(
            f"node {node} has zero out-degree; 1/sqrt(d) is undefined "
            "(add a balancing reverse edge or drop sink nodes)"
        )
        self.node = node


class DimensionMismatch(ModelViolation):
    pass


class GridMismatch(ModelViolation):
    pass
