"""Exception hierarchy shared by every module."""


class TextileError(ValueError):
    """Base class for domain errors (CLI exit status 1)."""


class GraphError(TextileError):
    pass


class HomomorphismError(TextileError):
    pass


class PartitionError(TextileError):
    pass


class InjectivityError(TextileError):
    pass


class NotLRError(TextileError):
    """Raised when an LR system is required; carries the failing lift instances."""

    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = tuple(failures)


class TwoGraphError(TextileError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class PairingError(TextileError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class HypothesisError(TextileError):
    """A theorem hypothesis failed; `witness` names the offending vertex or edge."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SizeGuardError(TextileError):
    pass


class BlockMapError(TextileError):
    pass


class ParseError(TextileError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"line {ln}: {msg}" for ln, msg in self.errors))
