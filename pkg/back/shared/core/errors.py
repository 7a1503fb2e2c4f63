"""Exception hierarchy shared by services, controllers, views and the CLI."""

from typing import Optional


class RotodoError(Exception):
    """Base class for every error raised on purpose by rotodo."""


class ParseError(RotodoError, ValueError):
    """Malformed permutation or point text."""

    def __init__(self, message: str, text: str = "", position: Optional[int] = None):
        self.text = text
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}: {text!r}" if text else f"{message}{where}")


class PreconditionError(RotodoError, ValueError):
    """An operation was called outside its domain."""


class StructuralError(RotodoError, ValueError):
    """A diagram path or substitution is internally inconsistent."""


class CapacityError(RotodoError):
    """The requested resolution needs more cells than the configured bound."""

    def __init__(self, required: int, limit: int):
        self.required = required
        self.limit = limit
        super().__init__(f"Cell map needs {required} cells, capacity is {limit}")
