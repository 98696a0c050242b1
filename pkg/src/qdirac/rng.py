"""Seeded random streams.

One 64-bit seed keys a counter-based generator; independent streams are
obtained by advancing the counter, so draws do not depend on the order in
which parallel jobs run.
"""
from __future__ import annotations

import numpy as np


def generator(seed, stream=0):
    bits = np.random.Philox(key=int(seed) & 0xFFFFFFFFFFFFFFFF, counter=[int(stream), 0, 0, 0])
    return np.random.Generator(bits)
