from sfqsim.config.run_config import RunConfig, evaluate_angle, load_config, parse_config
from sfqsim.config.settings import Settings, get_settings

__all__ = [
    "RunConfig",
    "Settings",
    "evaluate_angle",
    "get_settings",
    "load_config",
    "parse_config",
]
