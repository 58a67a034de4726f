class QueueSimError(Exception):
    pass


class ConfigError(QueueSimError):
    """Raised when a QueueConfig breaks one or more of its invariants."""

    def __init__(self, violations: list[str]) -> None:
        self.violations = violations
        super().__init__(f"Invalid queue configuration: {'; '.join(violations)}")


class ContractViolation(QueueSimError):
    """A simulator invariant was broken. Always a bug, never a runtime condition."""
    pass


class PortBusyError(QueueSimError):
    pass


class InputError(QueueSimError):
    """Malformed command or trace input; `position` names the offending record."""

    unit = 'record'

    def __init__(self, position: int, message: str) -> None:
        self.position = position
        self.message = message
        super().__init__(f"{self.unit} {position}: {message}")
