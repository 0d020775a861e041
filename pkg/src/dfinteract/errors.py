"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when an operation receives out-of-contract arguments."""


class EmptySceneError(InvalidInputError):
    """Raised when a distance query is made against zero shapes."""


class EmptyWindowError(InvalidInputError):
    """Raised when flattening an interaction window that was never pushed."""


class ResetFailureError(RuntimeError):
    """Raised when rejection sampling cannot place objects in a fresh episode."""


class StaleBatchError(RuntimeError):
    """Raised when a PPO update is fed a rollout batch from a different policy."""


class QualificationError(RuntimeError):
    """Raised when the scripted teacher fails its success-rate gate."""


class CheckpointError(RuntimeError):
    """Raised on checkpoint manifest or shape mismatches."""


class ConfigError(ValueError):
    """Raised on config parse or validation failures; message names the key."""
