class LeavittError(Exception):
    pass


class GraphError(LeavittError, ValueError):
    """Invalid graph data."""


class CapExceeded(LeavittError):
    """Exhaustive enumeration would exceed the configured vertex cap."""


class UnsupportedGraph(LeavittError):
    """Symbolic arithmetic requested on a graph with infinite emitters."""


class ParseError(LeavittError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}: " if column is None else f"line {line}, col {column}: "
        super().__init__(where + message)
