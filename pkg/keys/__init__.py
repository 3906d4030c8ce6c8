"""Secret-key generation, storage and analysis."""
