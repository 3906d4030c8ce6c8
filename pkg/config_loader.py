"""
Centralized configuration loader for the speech cipher.
Loads settings from cipher_config.yaml and environment variables from .env file.
"""
import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

from errors import ConfigError

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "SPEECH_CIPHER_CONFIG"
DEFAULT_CONFIG_PATH = "cipher_config.yaml"

DEFAULTS: Dict[str, Dict[str, Any]] = {
    'cipher': {
        'block_size': 10,
        'dims': 1,
    },
    'stft': {
        'window_length': 512,
        'hop': 128,
    },
    'model': {
        'kernel_channels': 4,
        'kernel_seed': 0,
    },
    'verification': {
        'tolerance': 1.0e-9,
    },
    'robustness': {
        'trials': 100,
        'workers': 4,
        'block_sizes': [5, 10, 20, 128],
    },
    'logging': {
        'level': 'INFO',
    },
}


class ConfigLoader:
    """Loads and manages configuration from YAML and .env files."""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration loader.

        Args:
            config_path: Path to the YAML configuration file. Falls back to
                $SPEECH_CIPHER_CONFIG, then cipher_config.yaml.
        """
        self._load_env()
        self.config_path = Path(config_path or os.getenv(CONFIG_ENV_VAR, DEFAULT_CONFIG_PATH))
        self.config: Dict[str, Any] = copy.deepcopy(DEFAULTS)
        self._load_yaml()

    def _load_env(self):
        """Load environment variables from .env file."""
        env_path = Path(".env")
        if env_path.exists():
            load_dotenv(dotenv_path=env_path)
            logger.debug(f"Loaded environment variables from {env_path}")

    def _load_yaml(self):
        """Merge the YAML file over the built-in defaults."""
        if not self.config_path.exists():
            logger.debug(f"No configuration file at {self.config_path}, using defaults")
            return

        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                user_config = yaml.safe_load(f) or {}
        except (yaml.YAMLError, UnicodeDecodeError) as e:
            raise ConfigError(f"cannot parse {self.config_path}: {e}") from e

        if not isinstance(user_config, dict):
            raise ConfigError(f"Configuration file {self.config_path} must contain a mapping")

        for section, values in user_config.items():
            if not isinstance(values, dict):
                logger.warning(f"⚠️  Ignoring non-mapping section '{section}' in {self.config_path}")
                continue
            self.config.setdefault(section, {}).update(values)

        logger.info(f"✅ Loaded configuration from {self.config_path}")

    def get(self, section: str, key: str, default: Any = None) -> Any:
        """
        Get configuration value.

        Args:
            section: Configuration section (e.g., 'cipher', 'stft')
            key: Configuration key within the section
            default: Default value if key not found

        Returns:
            Configuration value or default

        Example:
            config.get('stft', 'hop', 128)
        """
        try:
            return self.config.get(section, {}).get(key, default)
        except (KeyError, AttributeError):
            return default

    def get_section(self, section: str) -> Dict[str, Any]:
        """
        Get entire configuration section.

        Args:
            section: Configuration section name

        Returns:
            Dictionary of section configuration
        """
        return self.config.get(section, {})

    def get_log_level(self) -> str:
        """Logging level; $SPEECH_CIPHER_LOG_LEVEL wins over the YAML value."""
        level = os.getenv("SPEECH_CIPHER_LOG_LEVEL") or self.get('logging', 'level', 'INFO')
        return str(level).upper()

    def get_workers(self) -> int:
        """Worker threads for robustness trials; $SPEECH_CIPHER_WORKERS wins."""
        env_workers = os.getenv("SPEECH_CIPHER_WORKERS")
        if env_workers:
            try:
                return max(1, int(env_workers))
            except ValueError:
                logger.warning(f"⚠️  Ignoring invalid SPEECH_CIPHER_WORKERS={env_workers!r}")
        return max(1, int(self.get('robustness', 'workers', 1)))


# Global config instance (lazy loaded)
_config_instance: Optional[ConfigLoader] = None


def get_config() -> ConfigLoader:
    """
    Get global configuration instance (singleton pattern).

    Returns:
        ConfigLoader instance
    """
    global _config_instance
    if _config_instance is None:
        _config_instance = ConfigLoader()
    return _config_instance


def reload_config(config_path: Optional[str] = None) -> ConfigLoader:
    """Reload configuration from files."""
    global _config_instance
    _config_instance = ConfigLoader(config_path)
    return _config_instance
