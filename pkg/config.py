"""
Configuration settings for the speech cipher.
Loads settings from cipher_config.yaml.

NOTE: Edit cipher_config.yaml (copy from cipher_config.yaml.template) to customize settings.
Values here are the CLI defaults; explicit flags always win.

Settings are read on first attribute access (``config.STFT_HOP``), so a
broken configuration file surfaces as a ConfigError inside the CLI's error
handling rather than at import time.
"""
from typing import Any, Callable, Dict

from config_loader import ConfigLoader, get_config
from errors import ConfigError

_SETTINGS: Dict[str, Callable[[ConfigLoader], Any]] = {
    # === CIPHER SETTINGS ===
    'DEFAULT_BLOCK_SIZE': lambda c: int(c.get('cipher', 'block_size', 10)),
    'DEFAULT_DIMS': lambda c: int(c.get('cipher', 'dims', 1)),

    # === STFT SETTINGS ===
    'STFT_WINDOW_LENGTH': lambda c: int(c.get('stft', 'window_length', 512)),
    'STFT_HOP': lambda c: int(c.get('stft', 'hop', 128)),

    # === MODEL SETTINGS ===
    'KERNEL_CHANNELS': lambda c: int(c.get('model', 'kernel_channels', 4)),
    'KERNEL_SEED': lambda c: int(c.get('model', 'kernel_seed', 0)),

    # === VERIFICATION SETTINGS ===
    'VERIFY_TOLERANCE': lambda c: float(c.get('verification', 'tolerance', 1.0e-9)),

    # === ROBUSTNESS SETTINGS ===
    'ROBUSTNESS_TRIALS': lambda c: int(c.get('robustness', 'trials', 100)),
    'ROBUSTNESS_WORKERS': lambda c: c.get_workers(),
    'SWEEP_BLOCK_SIZES': lambda c: [int(m) for m in c.get('robustness', 'block_sizes', [5, 10, 20, 128])],

    # === LOGGING ===
    'LOG_LEVEL': lambda c: c.get_log_level(),
}


def __getattr__(name: str) -> Any:
    try:
        read = _SETTINGS[name]
    except KeyError:
        raise AttributeError(f"module 'config' has no attribute {name!r}") from None
    try:
        return read(get_config())
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"invalid value for {name}: {e}") from e
