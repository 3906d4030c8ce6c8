#!/usr/bin/env python3
"""
Speech Cipher command line.
Generates keys, encrypts and decrypts signals and first-layer kernels, and
runs the verification and robustness experiments.

stdout carries only machine-readable results; logs and the one-line
``error: <category>: <detail>`` diagnostic go to stderr.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from audio.matrix_io import read_kernel_bank, read_matrix, read_matrix_signal, write_kernel_bank, write_matrix
from audio.spectrogram import StftConfig, stft_magnitude
from audio.wav_io import read_wav, write_wav
import config
from encryptors.block_cipher import decrypt, encrypt
from encryptors.kernel_encryptor import encrypt_kernel, verify_cancellation
from errors import EXIT_FORMAT, EXIT_OK, SpeechCipherError, UsageError, VerificationFailed
from keys.generator import keygen
from keys.keyfile import load_key, save_key
from keys.keyspace import keyspace_bits
from keys.secret_key import METHODS
from models import Kernel, KernelBank, Signal
from robustness import block_size_sweep, default_kernel_bank, wrong_key_sweep, write_report, write_table

logger = logging.getLogger(__name__)

MISMATCH_AVERAGE_KEYS = 5


class CipherArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports bad usage as a UsageError instead of exiting."""

    def error(self, message):
        raise UsageError(message)


def _block_sizes(text: str) -> List[int]:
    try:
        sizes = [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not sizes:
        raise argparse.ArgumentTypeError("at least one block size is required")
    return sizes


def _is_wav(path) -> bool:
    return Path(path).suffix.lower() == '.wav'


def load_signal(path) -> Signal:
    """WAV files become waveforms; anything else is read as an SPM1 matrix."""
    return read_wav(path) if _is_wav(path) else read_matrix_signal(path)


def save_signal(signal: Signal, path, as_wav: bool) -> None:
    if as_wav:
        write_wav(signal, path)
    else:
        write_matrix(signal, path)


def load_bank(source) -> KernelBank:
    """A kernel-bank directory, or a single SPM1 kernel file."""
    if Path(source).is_dir():
        return read_kernel_bank(source)
    return KernelBank([Kernel(read_matrix(source))])


# === SUBCOMMANDS ===

def cmd_keygen(args) -> int:
    key = keygen(args.method, args.block_size, args.dims, args.seed)
    logger.info(f"🔑 Generated {key.method} key (N={key.N}, seed={key.seed})")
    if args.out:
        save_key(key, args.out)
    else:
        logger.warning("⚠️  No --out given, key was not saved")
    print(keyspace_bits(args.method, args.block_size, args.dims))
    return EXIT_OK


def cmd_encrypt(args) -> int:
    key = load_key(args.key)
    signal = load_signal(args.input)
    encrypted = encrypt(signal, key)
    save_signal(encrypted, args.out, _is_wav(args.input))
    logger.info(f"✅ Encrypted {signal.F} x {signal.T} -> {encrypted.F} x {encrypted.T} with {key.method}")
    return EXIT_OK


def cmd_decrypt(args) -> int:
    key = load_key(args.key)
    signal = load_signal(args.input)
    decrypted = decrypt(signal, key)
    if args.trim_to is not None:
        if not 0 <= args.trim_to <= decrypted.T:
            raise UsageError(f"--trim-to {args.trim_to} is outside [0, {decrypted.T}]")
        decrypted = decrypted.with_data(decrypted.data[:, :args.trim_to])
    save_signal(decrypted, args.out, _is_wav(args.input))
    logger.info(f"✅ Decrypted to {decrypted.F} x {decrypted.T} with {key.method}")
    return EXIT_OK


def cmd_spectrogram(args) -> int:
    cfg = StftConfig(window_length=args.window, hop=args.hop)
    spectrogram = stft_magnitude(read_wav(args.input), cfg)
    write_matrix(spectrogram, args.out)
    return EXIT_OK


def cmd_encrypt_kernel(args) -> int:
    key = load_key(args.key)
    kernels = []
    for source in args.inputs:
        kernels.extend(load_bank(source).kernels)
    encrypted = encrypt_kernel(KernelBank(kernels), key)
    write_kernel_bank(encrypted, args.out_dir)
    return EXIT_OK


def cmd_verify(args) -> int:
    key = load_key(args.key)
    signal = load_signal(args.input)
    bank = read_kernel_bank(args.kernels) if args.kernels else default_kernel_bank(key)
    error = verify_cancellation(signal, bank, key)
    print(f"max_error: {error:.6e}")
    if error > args.tolerance:
        raise VerificationFailed(f"max cancellation error {error:.3e} exceeds {args.tolerance:.1e}")
    logger.info(f"✅ Cancellation holds for {key.method} (M={key.M}, dims={key.dims})")
    return EXIT_OK


def cmd_robustness(args) -> int:
    key = load_key(args.key)
    signal = load_signal(args.input)
    bank = read_kernel_bank(args.kernels) if args.kernels else default_kernel_bank(key)
    report = wrong_key_sweep(signal, key, args.trials, seed=args.seed, bank=bank, workers=args.workers)
    write_report(report, args.out)

    first = report.to_frame()['mismatch_divergence'].head(MISMATCH_AVERAGE_KEYS)
    logger.info(f"📊 Mean divergence over the first {len(first)} wrong keys: {first.mean():.4f}")
    logger.info(f"\n{report}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    signal = load_signal(args.input)
    table = block_size_sweep(signal, args.method, args.block_sizes, seed=args.seed)
    write_table(table, args.out)
    return EXIT_OK


def build_parser() -> CipherArgumentParser:
    parser = CipherArgumentParser(
        prog='cli.py',
        description='Block-wise speech encryption with Shuffling, Flipping and Random Orthogonal Matrix keys',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Generate a ROM key for waveforms with 10-sample blocks:
  python cli.py keygen --method rom --block-size 10 --dims 1 --seed 7 --out rom.key

  # Encrypt and decrypt a WAV file:
  python cli.py encrypt --key rom.key --in speech.wav --out speech_enc.wav
  python cli.py decrypt --key rom.key --in speech_enc.wav --out speech_dec.wav --trim-to 16000

  # Encrypt first-layer kernels and check the cancellation property:
  python cli.py encrypt-kernel --key rom.key --in kernels/ --out-dir kernels_enc/
  python cli.py verify --key rom.key --in speech.wav --kernels kernels/

  # Wrong-key experiment and block-size sweep:
  python cli.py robustness --in speech.wav --key rom.key --trials 1000 --out outputs/robustness.csv
  python cli.py sweep --in speech.wav --method rom --block-sizes 5,10,20,128 --out outputs/sweep.csv
        """
    )
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND', required=True)

    keygen_parser = subparsers.add_parser('keygen', help='Generate a secret key')
    keygen_parser.add_argument('--method', required=True, choices=METHODS, help='Encryption method')
    keygen_parser.add_argument('--block-size', type=int, default=config.DEFAULT_BLOCK_SIZE,
                               help=f'Block size M (default: {config.DEFAULT_BLOCK_SIZE})')
    keygen_parser.add_argument('--dims', type=int, choices=(1, 2), default=config.DEFAULT_DIMS,
                               help='1 for waveforms, 2 for spectrograms')
    keygen_parser.add_argument('--seed', type=int, help='Seed in [0, 2**64); drawn at random when omitted')
    keygen_parser.add_argument('--out', help='Key file to write')
    keygen_parser.set_defaults(handler=cmd_keygen)

    for name, handler, verb in (('encrypt', cmd_encrypt, 'Encrypt'), ('decrypt', cmd_decrypt, 'Decrypt')):
        sub = subparsers.add_parser(name, help=f'{verb} a WAV or SPM1 signal')
        sub.add_argument('--key', required=True, help='Key file')
        sub.add_argument('--in', dest='input', required=True, help='Input WAV or SPM1 file')
        sub.add_argument('--out', required=True, help='Output file (same format as the input)')
        if name == 'decrypt':
            sub.add_argument('--trim-to', type=int, help='Keep only the first T time samples or frames')
        sub.set_defaults(handler=handler)

    spec_parser = subparsers.add_parser('spectrogram', help='Magnitude STFT of a WAV file')
    spec_parser.add_argument('--in', dest='input', required=True, help='Input WAV file')
    spec_parser.add_argument('--window', type=int, default=config.STFT_WINDOW_LENGTH,
                             help=f'Window length in samples (default: {config.STFT_WINDOW_LENGTH})')
    spec_parser.add_argument('--hop', type=int, default=config.STFT_HOP,
                             help=f'Hop in samples (default: {config.STFT_HOP})')
    spec_parser.add_argument('--out', required=True, help='Output SPM1 file')
    spec_parser.set_defaults(handler=cmd_spectrogram)

    kernel_parser = subparsers.add_parser('encrypt-kernel', help='Encrypt first-layer kernels')
    kernel_parser.add_argument('--key', required=True, help='Key file')
    kernel_parser.add_argument('--in', dest='inputs', action='append', required=True,
                               help='SPM1 kernel file or kernel-bank directory (repeatable)')
    kernel_parser.add_argument('--out-dir', required=True, help='Directory for the encrypted kernel bank')
    kernel_parser.set_defaults(handler=cmd_encrypt_kernel)

    verify_parser = subparsers.add_parser('verify', help='Check the cancellation property')
    verify_parser.add_argument('--key', required=True, help='Key file')
    verify_parser.add_argument('--in', dest='input', required=True, help='Query WAV or SPM1 file')
    verify_parser.add_argument('--kernels', help='Plain kernel-bank directory (default: seeded random bank)')
    verify_parser.add_argument('--tolerance', type=float, default=config.VERIFY_TOLERANCE,
                               help=f'Largest accepted error (default: {config.VERIFY_TOLERANCE:g})')
    verify_parser.set_defaults(handler=cmd_verify)

    robust_parser = subparsers.add_parser('robustness', help='Wrong-key experiment')
    robust_parser.add_argument('--in', dest='input', required=True, help='Input WAV or SPM1 file')
    robust_parser.add_argument('--key', required=True, help='Correct key file')
    robust_parser.add_argument('--trials', type=int, default=config.ROBUSTNESS_TRIALS,
                               help=f'Number of wrong keys (default: {config.ROBUSTNESS_TRIALS})')
    robust_parser.add_argument('--seed', type=int, help="Base seed (default: the key's seed)")
    robust_parser.add_argument('--kernels', help='Plain kernel-bank directory (default: seeded random bank)')
    robust_parser.add_argument('--workers', type=int, default=config.ROBUSTNESS_WORKERS,
                               help=f'Worker threads (default: {config.ROBUSTNESS_WORKERS})')
    robust_parser.add_argument('--out', required=True, help='Output CSV (or .xlsx)')
    robust_parser.set_defaults(handler=cmd_robustness)

    sweep_parser = subparsers.add_parser('sweep', help='Distortion at several block sizes')
    sweep_parser.add_argument('--in', dest='input', required=True, help='Input WAV or SPM1 file')
    sweep_parser.add_argument('--method', required=True, choices=METHODS, help='Encryption method')
    sweep_parser.add_argument('--block-sizes', type=_block_sizes, default=config.SWEEP_BLOCK_SIZES,
                              help='Comma-separated block sizes (default: '
                                   f'{",".join(str(m) for m in config.SWEEP_BLOCK_SIZES)})')
    sweep_parser.add_argument('--seed', type=int, default=0, help='Key seed (default: 0)')
    sweep_parser.add_argument('--out', required=True, help='Output CSV (or .xlsx)')
    sweep_parser.set_defaults(handler=cmd_sweep)

    return parser


def _report_error(category: str, detail, exit_code: int) -> int:
    message = " ".join(str(detail).split())
    print(f"error: {category}: {message}", file=sys.stderr)
    return exit_code


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    logging.basicConfig(
        format='%(asctime)s - %(levelname)s - %(message)s',
        datefmt='%H:%M:%S',
        stream=sys.stderr,
    )
    try:
        logging.getLogger().setLevel(getattr(logging, config.LOG_LEVEL, logging.INFO))
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.handler(args)
    except SpeechCipherError as e:
        return _report_error(e.category, e, e.exit_code)
    except OSError as e:
        return _report_error('io', e, EXIT_FORMAT)


if __name__ == "__main__":
    sys.exit(main())
