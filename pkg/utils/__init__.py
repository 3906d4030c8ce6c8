"""Utility functions for block tiling and patch convolution."""
