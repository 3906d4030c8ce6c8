"""
Error types for the speech cipher.

Every error carries a short ``category`` used in the CLI diagnostic line
(``error: <category>: <detail>``) and the process exit code.
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FORMAT = 2
EXIT_VERIFICATION = 3


class SpeechCipherError(Exception):
    """Base class for all errors raised by this project."""

    category = "error"
    exit_code = EXIT_USAGE


class UsageError(SpeechCipherError):
    category = "usage"


class ConfigError(UsageError, ValueError):
    """Unreadable or ill-typed cipher_config.yaml."""


class InvalidBlockSize(SpeechCipherError):
    category = "invalid-block-size"


class ShapeError(SpeechCipherError):
    category = "shape"


class PatchSizeMismatch(SpeechCipherError):
    category = "patch-size-mismatch"


class KeyMismatch(SpeechCipherError):
    category = "key-mismatch"


class UnsupportedSignal(SpeechCipherError):
    category = "unsupported-signal"


class TooShort(SpeechCipherError):
    category = "too-short"


class InvalidSignal(SpeechCipherError):
    category = "invalid-signal"
    exit_code = EXIT_FORMAT


class KeyFormatError(SpeechCipherError):
    category = "key-format"
    exit_code = EXIT_FORMAT


class WavFormatError(SpeechCipherError):
    category = "wav-format"
    exit_code = EXIT_FORMAT


class MatrixFormatError(SpeechCipherError):
    category = "matrix-format"
    exit_code = EXIT_FORMAT


class StreamError(SpeechCipherError):
    """I/O failure while streaming; ``position`` is the sample offset reached."""

    category = "io"
    exit_code = EXIT_FORMAT

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at sample {position})")
        self.position = position


class VerificationFailed(SpeechCipherError):
    category = "verification"
    exit_code = EXIT_VERIFICATION
