"""dfinteract: distance-field interaction features, a 2D contact toy world,
and a three-stage policy training pipeline (cloning, adversarial-prior RL,
depth-scan distillation) with an evaluation harness."""

__version__ = "0.1.0"

from .config import Config, default_config, parse_config, validate_config, write_config

__all__ = ["Config", "default_config", "parse_config", "validate_config",
           "write_config", "__version__"]
