"""
Exception hierarchy for fibnormal
"""

from typing import Optional


class FibNormalError(Exception):
    """Base class for every error raised by fibnormal"""


class InvalidInputError(FibNormalError, ValueError):
    """An argument lies outside the domain of the operation"""


class CapacityError(FibNormalError):
    """A request exceeds a declared desk-scale capacity bound"""


class IncompatibleBankError(FibNormalError):
    """Two counter banks cannot be merged"""


class CheckpointError(FibNormalError):
    """A checkpoint file cannot be used"""


class CheckpointIntegrityError(CheckpointError):
    """A checkpoint file is truncated or fails its checksum"""

    def __init__(self, message: str, offset: Optional[int] = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class CheckpointVersionError(CheckpointError):
    """A checkpoint was written by an incompatible format version"""
