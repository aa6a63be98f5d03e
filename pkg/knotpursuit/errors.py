from typing import Optional


class KnotPursuitError(Exception):
    """Base class for every error raised by the library."""


class InputError(KnotPursuitError, ValueError):
    pass


class ParseError(InputError):
    def __init__(self, message: str, row: Optional[int] = None, column: Optional[int] = None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(f"{message}{suffix}")


class StructureError(KnotPursuitError):
    """A polynomial references a layer entry that does not exist."""


class CapacityError(KnotPursuitError):
    pass
