"""Audio and matrix file handling plus the STFT front-end."""
