"""Block ciphers for signals and first-layer kernels."""
