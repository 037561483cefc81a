"""Exception hierarchy shared by the solvers and the command line."""


class CkpError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ParseError(CkpError):
    """Malformed instance document or rational literal."""

    exit_code = 3


class ContractError(CkpError):
    """An operation was called outside its precondition."""

    exit_code = 4


class InputError(ContractError):
    """A caller referenced something that does not exist (e.g. an item id)."""


class NeedsRationalMagnitude(ContractError):
    """The magnitude capacity C is irrational but the solver needs C itself."""

    def __init__(self, what="this solver"):
        super().__init__(f"{what} needs a rational magnitude capacity C (got only C^2)")


class ResourceError(CkpError):
    """A configured size or enumeration budget would be exceeded."""

    exit_code = 5


class OracleSizeError(ResourceError):
    pass
