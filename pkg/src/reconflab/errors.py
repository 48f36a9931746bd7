"""Error taxonomy shared by every module; the CLI maps these onto exit codes."""


class WorkbenchError(Exception):
    """Base class for everything this package raises on purpose."""


class MalformedInput(WorkbenchError):
    """Out-of-range ids, broken invariants, unparseable files.  CLI exit 2."""


class InfeasibleInstance(WorkbenchError):
    """A precondition on the problem instance fails (e.g. no dominating set).  CLI exit 2."""


class SizeCapExceeded(WorkbenchError):
    """An exponential verifier was asked to run beyond its instance-size cap.  CLI exit 3."""


class StateCapExceeded(WorkbenchError):
    """A state-space search passed its configurable state budget.  CLI exit 3."""


class RetryBudgetExceeded(WorkbenchError):
    """Rejection sampling did not hit the constraint within its retry budget.  CLI exit 3."""
