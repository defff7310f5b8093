"""Exception hierarchy shared across the workbench."""


class CtcError(Exception):
    """Base class for all workbench errors."""


class SourceError(CtcError):
    """A syntax or static error at a known position in source text."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class ComplementOfTau(CtcError):
    """The silent action has no complement."""


class ComplementaryPrefix(CtcError):
    """A multi-prefix may not contain an action together with its complement."""


class DuplicateDefinition(CtcError):
    def __init__(self, name: str):
        super().__init__(f"constant {name} is defined more than once")
        self.name = name


class UnboundConstant(CtcError):
    def __init__(self, name: str):
        super().__init__(f"constant {name} has no defining equation")
        self.name = name


class UnguardedRecursion(CtcError):
    def __init__(self, name: str):
        super().__init__(f"constant {name} is not weakly guarded in its definition")
        self.name = name


class StateBoundExceeded(CtcError):
    def __init__(self, bound: int, what: str = "states"):
        super().__init__(f"exceeded bound of {bound} {what}")
        self.bound = bound


class NonTerminatingTauClosure(CtcError):
    def __init__(self, bound: int):
        super().__init__(f"silent closure exceeded {bound} states")
        self.bound = bound
