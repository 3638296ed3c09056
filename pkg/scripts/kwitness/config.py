"""
Configuration Management

Handles loading of kwitness_config.yml: default ring and seed, generator
bounds, logging and output preferences.
"""

import os
import yaml
import logging
from dataclasses import dataclass, asdict
from typing import Dict, Any, Optional

from .errors import ConfigValidationError, RingDescriptorError
from .scalar import RingDescriptor

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")
SECTIONS = ("defaults", "generator", "logging", "output")


@dataclass
class AppSettings:
    """
    Application settings data structure.

    Holds every configurable value with its built-in default. Validation
    runs on construction, so an AppSettings instance is always usable.
    """
    ring: str = "ZZ"
    seed: int = 0
    max_blocks: int = 3
    max_rank: int = 2
    max_shift: int = 10
    max_grading: int = 2
    entry_bound: int = 3
    conjugation_steps: int = 6
    log_level: str = "WARNING"
    log_file: Optional[str] = None
    human: bool = False

    def __post_init__(self):
        self._validate()

    def _validate(self):
        """Validate configuration settings."""
        try:
            RingDescriptor.parse(self.ring)
        except RingDescriptorError as e:
            raise ConfigValidationError(f"defaults.ring: {e}")

        if self.seed < 0:
            raise ConfigValidationError("defaults.seed must be nonnegative")

        for name in ("max_blocks", "max_rank", "entry_bound"):
            if getattr(self, name) <= 0:
                raise ConfigValidationError(f"generator.{name} must be positive")
        for name in ("max_shift", "max_grading", "conjugation_steps"):
            if getattr(self, name) < 0:
                raise ConfigValidationError(f"generator.{name} must be nonnegative")

        if self.log_level.upper() not in LOG_LEVELS:
            raise ConfigValidationError(f"logging.level must be one of {', '.join(LOG_LEVELS)}")

    @property
    def ring_descriptor(self) -> RingDescriptor:
        return RingDescriptor.parse(self.ring)

    def to_dict(self) -> Dict[str, Any]:
        """Convert settings to dictionary format."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AppSettings':
        """Create AppSettings from dictionary data."""
        return cls(**data)


class AppConfig:
    """
    Application configuration manager.

    Reads the YAML configuration file and falls back to built-in defaults
    when the file is missing, empty or invalid. Never writes files.
    """

    def __init__(self, config_path: Optional[str] = None):
        self.settings: Optional[AppSettings] = None
        self.config_path = config_path or self._get_default_config_path()
        self.logger = logging.getLogger(__name__)

    def _get_default_config_path(self) -> str:
        """Get the default path to the configuration file."""
        return os.path.abspath(os.path.join(
            os.path.dirname(__file__),
            '..', '..', 'kwitness_config.yml'
        ))

    def _validate_config_file(self, config_data: Dict[str, Any]) -> None:
        """
        Validate the structure of configuration data.

        Args:
            config_data: Configuration data to validate

        Raises:
            ConfigValidationError: If configuration is invalid
        """
        if not isinstance(config_data, dict):
            raise ConfigValidationError("Configuration must be a dictionary")

        for section in config_data:
            if section not in SECTIONS:
                self.logger.warning(f"Ignoring unknown configuration section: {section}")

        for section in SECTIONS:
            if section in config_data and not isinstance(config_data[section], dict):
                raise ConfigValidationError(f"{section} section must be a dictionary")

    def load_config(self) -> bool:
        """
        Load configuration from the YAML file.

        Returns:
            True if the file was read and validated; False if defaults were used instead
        """
        try:
            if not os.path.exists(self.config_path):
                self.logger.info(f"Configuration file not found: {self.config_path}")
                self.settings = AppSettings()
                return True

            self.logger.info(f"Loading configuration from: {self.config_path}")

            with open(self.config_path, 'r', encoding='utf-8') as f:
                config_data = yaml.safe_load(f)

            if config_data is None:
                raise ConfigValidationError("Configuration file is empty")

            self._validate_config_file(config_data)

            defaults = config_data.get('defaults') or {}
            generator = config_data.get('generator') or {}
            logging_data = config_data.get('logging') or {}
            output = config_data.get('output') or {}

            base = AppSettings()
            self.settings = AppSettings(
                ring=str(defaults.get('ring', base.ring)),
                seed=int(defaults.get('seed', base.seed)),
                max_blocks=int(generator.get('max_blocks', base.max_blocks)),
                max_rank=int(generator.get('max_rank', base.max_rank)),
                max_shift=int(generator.get('max_shift', base.max_shift)),
                max_grading=int(generator.get('max_grading', base.max_grading)),
                entry_bound=int(generator.get('entry_bound', base.entry_bound)),
                conjugation_steps=int(generator.get('conjugation_steps', base.conjugation_steps)),
                log_level=str(logging_data.get('level', base.log_level)).upper(),
                log_file=logging_data.get('log_file', base.log_file),
                human=bool(output.get('human', base.human)),
            )

            self.logger.info("Configuration loaded successfully")
            return True

        except yaml.YAMLError as e:
            self.logger.warning(f"YAML parsing error: {e}")
            self._create_fallback_config()
            return False

        except ConfigValidationError as e:
            self.logger.warning(f"Configuration validation error: {e}")
            self._create_fallback_config()
            return False

        except (OSError, TypeError, ValueError) as e:
            self.logger.warning(f"Failed to load configuration: {e}")
            self._create_fallback_config()
            return False

    def _create_fallback_config(self):
        """Create fallback configuration when loading fails."""
        self.logger.warning("Using built-in default configuration")
        self.settings = AppSettings()

    def get_setting(self, key: str, default=None):
        """
        Get a specific setting value.

        Args:
            key: Setting key; the section prefix is optional, e.g. 'generator.max_rank',
                'max_rank' or 'logging.level'
            default: Default value if setting not found

        Returns:
            Setting value or default
        """
        if not self.settings:
            return default

        parts = key.split('.')
        if len(parts) == 2 and parts[0] in SECTIONS:
            name = parts[1]
        elif len(parts) == 1:
            name = parts[0]
        else:
            return default
        if parts[0] == 'logging' and name == 'level':
            name = 'log_level'
        return getattr(self.settings, name, default)

    def initialize(self) -> bool:
        """
        Initialize the configuration manager.

        Returns:
            True if the configuration file was used as-is
        """
        return self.load_config()
