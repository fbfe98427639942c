"""Exception types shared across the package."""

from __future__ import annotations


class PersPruneError(Exception):
    """Base class for all library errors."""


class Inconsistent(PersPruneError):
    """A linear system has no solution."""


class MarginTooSmall(PersPruneError):
    """A shift would push nonzero data out of the grid box."""


class ConvexityViolation(PersPruneError):
    def __init__(self, p, q, r):
        super().__init__(f"{p} <= {q} <= {r} with {p}, {r} in the set but {q} missing")
        self.p, self.q, self.r = p, q, r


class DisconnectedParts(PersPruneError):
    def __init__(self, component_a, component_b):
        a = sorted(component_a)[:3]
        b = sorted(component_b)[:3]
        super().__init__(f"set splits into zigzag components starting {a} and {b}")
        self.component_a = component_a
        self.component_b = component_b


class CommutativityViolation(PersPruneError):
    def __init__(self, point, axes):
        super().__init__(f"square at {point} on axes {axes} does not commute")
        self.point, self.axes = point, axes


class NaturalityViolation(PersPruneError):
    def __init__(self, point, axis):
        super().__init__(f"naturality fails on edge from {point} along axis {axis}")
        self.point, self.axis = point, axis


class NotNested(PersPruneError):
    """Raised when a submodule is not contained in another."""

    def __init__(self, point=None):
        super().__init__(f"submodule not contained at point {point}")
        self.point = point


class Inconclusive(PersPruneError):
    """A decision procedure could not settle the question within its caps."""


class CertificationInconclusive(Inconclusive):
    """Indecomposability of a summand could not be certified."""


class CapExceeded(PersPruneError):
    """An exhaustive search was asked to run beyond its configured size."""


class NotAnInterleaving(PersPruneError):
    """The supplied morphism pair fails an interleaving identity."""


class ENViolation(PersPruneError):
    """An erosion-neighbourhood witness fails one of its containments."""

    def __init__(self, condition, point):
        super().__init__(f"{condition} fails at {point}")
        self.condition, self.point = condition, point


class EvenC(PersPruneError, ValueError):
    """Weakening is only defined for odd path lengths."""


class NotBenign(PersPruneError):
    """An interval lies outside the supported benign families."""


class NoFiniteMatching(PersPruneError):
    """No matching exists at any candidate shift."""


class ParseError(PersPruneError):
    def __init__(self, message, line=None, column=None):
        loc = "" if line is None else f"line {line}" + ("" if column is None else f", column {column}")
        super().__init__(f"{loc}: {message}" if loc else message)
        self.line, self.column = line, column
