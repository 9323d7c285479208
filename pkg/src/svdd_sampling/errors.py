"""Exception types shared across the package."""


class SvddSamplingError(Exception):
    """Base class for all errors raised by this package."""


class DataFormatError(SvddSamplingError):
    """A file could not be parsed into a dataset (bad cell, missing column, empty file)."""


class DegenerateDataError(SvddSamplingError):
    """The data has no usable spread (e.g. every feature is constant)."""


class DimensionMismatchError(SvddSamplingError):
    """Vector or matrix dimensions do not line up."""


class PipelineStageError(SvddSamplingError):
    """An evaluation pipeline stage failed; the message names the stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"stage '{stage}': {message}")
        self.stage = stage
