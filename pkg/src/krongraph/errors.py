"""Exception types raised across krongraph."""


class KronGraphError(ValueError):
    pass


class NegativeEntry(KronGraphError):
    pass


class SumNotOne(KronGraphError):
    def __init__(self, total):
        super().__init__(f"generator entries sum to {total!r}, expected 1")
        self.total = total


class NoiseOutOfRange(KronGraphError):
    pass


class DegenerateMatrix(KronGraphError):
    pass


class ZeroTotalWeight(KronGraphError):
    pass


class MismatchedLevels(KronGraphError):
    pass


class ConvergenceFailure(RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class EmptyInput(KronGraphError):
    pass


class MalformedLine(KronGraphError):
    def __init__(self, line_no, text):
        super().__init__(f"line {line_no}: cannot parse {text!r}")
        self.line_no = line_no
