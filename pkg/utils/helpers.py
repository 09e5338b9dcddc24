"""
Helper functions shared by the pipeline packages: seeded random streams,
file hashing and fraction parsing.
"""

import hashlib

import numpy as np

from utils.errors import InvalidParameterError


# Stream identifiers for the seeded generator hierarchy. Every random draw
# in the package comes from make_rng(seed, STREAM_*, ...).
STREAM_WALK_ORDER = 1
STREAM_WALK = 2
STREAM_INIT = 3
STREAM_EPOCH = 4
STREAM_SPLIT = 5
STREAM_REPEAT = 6
STREAM_NEGATIVES = 7


def make_rng(seed, *keys):
    """
    Create an independent numpy Generator for the stream (seed, *keys).

    Args:
        seed (int): The run seed (unsigned 64-bit).
        *keys (int): Stream path, e.g. (STREAM_WALK, node, walk_index).

    Returns:
        numpy.random.Generator: A PCG64 generator; equal inputs give equal streams.
    """
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.default_rng(sequence)


def derive_seed(seed, *keys):
    """Derive a child 64-bit seed for the stream (seed, *keys)."""
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def sha256_files(*paths):
    """
    Hash the bytes of several files, in order.

    Returns:
        str: Hex digest over all files.
    """
    digest = hashlib.sha256()
    for path in paths:
        with open(path, 'rb') as f:
            for chunk in iter(lambda: f.read(1 << 20), b''):
                digest.update(chunk)
        digest.update(b'\0')
    return digest.hexdigest()


def parse_fractions(text):
    """
    Parse a fraction list given as ``0.1..0.5`` (step 0.1) or ``0.1,0.3``.

    Args:
        text (str): The command-line value.

    Returns:
        list[float]: Fractions in the given order.
    """
    text = text.strip()
    try:
        if '..' in text:
            start, stop = (float(part) for part in text.split('..', 1))
            count = int(round((stop - start) / 0.1)) + 1
            if count < 1:
                raise InvalidParameterError(f'empty fraction range: {text}')
            values = [round(start + 0.1 * i, 10) for i in range(count)]
        else:
            values = [float(part) for part in text.split(',') if part.strip()]
    except ValueError as e:
        raise InvalidParameterError(f'cannot parse fractions {text!r}: {e}') from e
    if not values:
        raise InvalidParameterError('no fractions given')
    return values
