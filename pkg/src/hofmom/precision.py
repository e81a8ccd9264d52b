"""Precision policy helpers.

All public operations take a ``precision`` argument in bits. The default is
192 bits and can be overridden globally through the HOFMOM_PRECISION
environment variable.
"""

import math
import os

DEFAULT_PRECISION = 192
MIN_PRECISION = 64


def default_precision():
    raw = os.environ.get("HOFMOM_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    bits = int(raw)
    if bits < MIN_PRECISION:
        raise ValueError(f"HOFMOM_PRECISION must be >= {MIN_PRECISION}, got {bits}")
    return bits


def moment_precision(n, q, base=64):
    """Bits needed for an alternating sum of n-th powers of q edge energies.

    Alternating sums of n-th powers lose about 2n + log2(q) bits to
    cancellation once scaled by q^n.
    """
    return int(math.ceil(2 * n + math.log2(max(q, 2)))) + base
