"""Exception types shared across the package."""


class FlowSceneError(Exception):
    """Base class for all package errors."""


class InputError(FlowSceneError):
    """Bad user input: unreadable files, invalid configuration, unknown ids."""


class ParseError(InputError):
    """A tabular source could not be parsed at all (missing header, empty stream)."""


class PipelineError(FlowSceneError):
    """The bundling pipeline could not produce a result from otherwise valid input."""
