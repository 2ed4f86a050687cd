"""Exception hierarchy for the solver, oracle and CLI."""

from __future__ import annotations


class EvacflowError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(EvacflowError):
    """An instance violates the network or supply model.

    Carries the full ValidationReport on the ``report`` attribute.
    """

    def __init__(self, report):
        super().__init__("; ".join(report.violations))
        self.report = report


class NegativeCycleError(EvacflowError):
    """The residual network contains a negative-cost cycle.

    This signals corrupted flow state: augmenting along shortest paths
    never creates one.
    """


class UnreachableSupplyError(EvacflowError):
    """A node with positive supply has no directed path to the sink."""


class NonIntegralTransitError(EvacflowError):
    """An operation requiring integer transit times met a fractional one."""


class StepMismatchError(EvacflowError):
    """The time step does not evenly divide a transit time or the horizon."""


class InstanceTooLargeError(EvacflowError):
    """The brute-force oracle refuses instances past its size guard."""


class NoForwardIntersectionError(EvacflowError):
    """The decomposition ray never left the feasible region.

    Indicates an inconsistent supply/vertex pair; cannot happen for
    supplies feasible at the computed horizon.
    """


class GridMismatchError(EvacflowError):
    """Two time-expanded objects disagree on step or horizon."""


class ChainViolationError(EvacflowError):
    """A decomposition step produced a non-nested tight-set chain."""
