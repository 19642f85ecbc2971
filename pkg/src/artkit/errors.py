"""Exception hierarchy shared by the toolkit.

The CLI maps each family onto an exit code, so raise the narrowest one.
"""


class ArtError(Exception):
    """Base class for every error raised by artkit."""


class ConfigError(ArtError, ValueError):
    """Invalid hyperparameters or an unsupported model configuration."""


class DataError(ArtError, ValueError):
    """Malformed input data: bad CSV, non-finite values, wrong dimension."""


class ModelError(ArtError):
    """Problems with a model state or a persisted model file."""


class VersionError(ModelError):
    """Model file written by an unsupported format version."""


class SchemaError(ModelError):
    """Model file does not match the expected document layout."""
