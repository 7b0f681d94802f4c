"""
Exception types shared by the integral modules
"""
from typing import Optional, Tuple


class IntegralDomainError(ValueError):
    """A precondition of an integral or special function is violated"""


class TermOverflowError(IntegralDomainError, OverflowError):
    """A single summand of a closed form does not fit in a float"""

    def __init__(self, message: str, term: Tuple[int, ...]):
        super().__init__(message)
        self.term = term


class ConvergenceError(RuntimeError):
    """A quadrature hit its refinement cap with strict checking enabled"""

    def __init__(self, message: str, result: Optional[object] = None):
        super().__init__(message)
        self.result = result
