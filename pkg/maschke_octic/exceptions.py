class WorkbenchException(Exception):
    """
    Base except which all maschke_octic errors extend
    """
    def __str__(self):
        return getattr(self, "message", super().__str__())

class FixtureError(WorkbenchException):
    """
    A fixture table is missing, unreadable or has a malformed row
    """
    def __init__(self,status_code: int, message: str):
        self.status_code = status_code
        self.message = message

class CheckpointError(WorkbenchException):
    """
    The checkpoint file exists but cannot be read back
    """
    def __init__(self,status_code: int, message: str):
        self.status_code = status_code
        self.message = message

class BadReductionError(WorkbenchException):
    """
    Error raised when a prime p <= 5 is requested, the surface has bad reduction there
    """
    def __init__(self,status_code: int, message: str):
        self.status_code = status_code
        self.message = message

class VerificationError(WorkbenchException):
    """
    Error raised when counts or traces are inconsistent with each other
    or with the fixture tables
    """
    def __init__(self,status_code: int, message: str):
        self.status_code = status_code
        self.message = message

class WeilBoundError(WorkbenchException):
    """
    An extracted Frobenius trace is outside of its Weil bound
    """
    def __init__(self,status_code: int, message: str):
        self.status_code = status_code
        self.message = message

class IntegralityError(WorkbenchException):
    """
    A trace, dimension or multiplicity that must be an integer is not
    """
    def __init__(self,status_code: int, message: str):
        self.status_code = status_code
        self.message = message

class ClosureBoundError(WorkbenchException):
    """
    Error raised when the closure of a set of generators grows past the configured bound
    """
    def __init__(self,status_code: int, message: str):
        self.status_code = status_code
        self.message = message

class SplitError(WorkbenchException):
    """
    No value of the unknown cubic trace makes the sextic split into quadratic factors
    """
    def __init__(self,status_code: int, message: str):
        self.status_code = status_code
        self.message = message
