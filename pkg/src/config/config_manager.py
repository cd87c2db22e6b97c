"""
Configuration Manager

This module handles loading, validating, and managing configuration settings
for trichain: decomposition options, isolation and dual space caps, thread
count, output format and logging.
"""

import copy
import logging
import os
import json
from fractions import Fraction
from typing import Dict, Any

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = 'trichain.json'
DEPTH_CAP_ENV = 'TRICHAIN_DEPTH_CAP'

DEFAULT_CONFIG: Dict[str, Any] = {
    'decomposition': {
        'split_rational_roots': True,
        'cache': True,
        'cache_entries': 128,
    },
    'isolation': {
        'depth_cap': 256,
        'width': None,
    },
    'dualspace': {
        'cap': 64,
    },
    'threads': 1,
    'output': {
        'format': 'text',
    },
    'corpus_path': 'corpus',
    'logging': {
        'level': 'WARNING',
        'log_file': '',
    },
}


def _positive_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value > 0


class ConfigManager:
    """
    Manages configuration settings for the application.
    """

    def __init__(self, config_path: str = DEFAULT_CONFIG_PATH):
        """
        Initialize the configuration manager.

        Args:
            config_path: Path to the configuration file; a missing file means defaults
        """
        self.config_path = config_path
        self.config: Dict[str, Any] = {}
        self.default_config = copy.deepcopy(DEFAULT_CONFIG)

        logger.debug(f"Initialized configuration manager with config path: {config_path}")

    def load_config(self) -> Dict[str, Any]:
        """
        Load configuration from file and environment.

        Returns:
            Dictionary containing configuration settings
        """
        self.config = copy.deepcopy(self.default_config)

        if os.path.exists(self.config_path):
            try:
                with open(self.config_path, 'r', encoding='utf-8') as f:
                    file_config = json.load(f)
                if not isinstance(file_config, dict):
                    raise ValueError("top level must be an object")

                self._update_config_recursive(self.config, file_config)
                logger.info(f"Loaded configuration from {self.config_path}")

            except (OSError, ValueError) as e:
                logger.warning(f"Error loading configuration from {self.config_path}: {str(e)}")
                logger.info("Using default configuration")
        else:
            logger.debug(f"Configuration file not found: {self.config_path}, using defaults")

        self._apply_environment()
        self._validate_and_fill_config()

        return self.config

    def get_config(self) -> Dict[str, Any]:
        """
        Get the current configuration. If configuration is not loaded yet, load it.
        """
        if not self.config:
            return self.load_config()
        return self.config

    def _update_config_recursive(self, target: Dict[str, Any], source: Dict[str, Any]) -> None:
        """
        Recursively update configuration dictionary.

        Args:
            target: Target dictionary to update
            source: Source dictionary with new values
        """
        for key, value in source.items():
            if key in target and isinstance(target[key], dict) and isinstance(value, dict):
                self._update_config_recursive(target[key], value)
            else:
                target[key] = value

    def _apply_environment(self) -> None:
        raw = os.environ.get(DEPTH_CAP_ENV)
        if raw is None or not raw.strip():
            return
        try:
            depth_cap = int(raw.strip())
        except ValueError:
            depth_cap = 0
        if depth_cap <= 0:
            logger.warning(f"Ignoring {DEPTH_CAP_ENV}={raw!r}: not a positive integer")
            return
        self.set_value('isolation.depth_cap', depth_cap)
        logger.debug(f"Isolation depth cap set to {depth_cap} from {DEPTH_CAP_ENV}")

    def _reset(self, key: str, reason: str) -> None:
        default = self.get_default(key)
        logger.warning(f"Invalid configuration value for {key} ({reason}); using {default!r}")
        self.set_value(key, copy.deepcopy(default))

    def get_default(self, key: str) -> Any:
        value = self.default_config
        for part in key.split('.'):
            value = value[part]
        return value

    def _validate_and_fill_config(self) -> None:
        """Validate configuration, replacing invalid values by their defaults."""
        for section in ('decomposition', 'isolation', 'dualspace', 'output', 'logging'):
            if not isinstance(self.config.get(section), dict):
                self._reset(section, "expected an object")

        for key in ('isolation.depth_cap', 'dualspace.cap', 'threads', 'decomposition.cache_entries'):
            if not _positive_int(self.get_value(key)):
                self._reset(key, "expected a positive integer")

        for key in ('decomposition.split_rational_roots', 'decomposition.cache'):
            if not isinstance(self.get_value(key), bool):
                self._reset(key, "expected true or false")

        width = self.get_value('isolation.width')
        if width is not None:
            try:
                if Fraction(str(width)) <= 0:
                    self._reset('isolation.width', "expected a positive rational")
            except (ValueError, ZeroDivisionError):
                self._reset('isolation.width', "expected a rational such as \"1/1024\"")

        if self.get_value('output.format') not in ('text', 'json'):
            self._reset('output.format', "expected \"text\" or \"json\"")

        level = self.get_value('logging.level')
        if not isinstance(level, str) or not isinstance(logging.getLevelName(level.upper()), int):
            self._reset('logging.level', "unknown level")

    def save_config(self) -> bool:
        """
        Save current configuration to file.

        Returns:
            True if successful, False otherwise
        """
        try:
            config_dir = os.path.dirname(self.config_path)
            if config_dir and not os.path.exists(config_dir):
                os.makedirs(config_dir, exist_ok=True)

            with open(self.config_path, 'w', encoding='utf-8') as f:
                json.dump(self.config, f, indent=2)

            logger.info(f"Saved configuration to {self.config_path}")
            return True

        except OSError as e:
            logger.error(f"Error saving configuration to {self.config_path}: {str(e)}", exc_info=True)
            return False

    def update_config(self, new_config: Dict[str, Any]) -> Dict[str, Any]:
        """
        Merge new values into the configuration and revalidate.

        Args:
            new_config: Dictionary containing new configuration values

        Returns:
            Updated configuration dictionary
        """
        self._update_config_recursive(self.config, new_config)
        self._validate_and_fill_config()
        return self.config

    def get_value(self, key: str, default: Any = None) -> Any:
        """
        Get a configuration value.

        Args:
            key: Configuration key (can use dot notation for nested keys)
            default: Default value to return if key not found

        Returns:
            Configuration value or default if not found
        """
        value = self.config
        for part in key.split('.'):
            if isinstance(value, dict) and part in value:
                value = value[part]
            else:
                return default
        return value

    def set_value(self, key: str, value: Any) -> None:
        """
        Set a configuration value.

        Args:
            key: Configuration key (can use dot notation for nested keys)
            value: Value to set
        """
        parts = key.split('.')
        config = self.config
        for part in parts[:-1]:
            if not isinstance(config.get(part), dict):
                config[part] = {}
            config = config[part]
        config[parts[-1]] = value
