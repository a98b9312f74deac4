"""Named, reproducible random streams.

Every stream is a Philox4x32-10 counter-based generator keyed by a
``SeedSequence`` built from ``(seed, stream_id, chunk)``.  Chunks of a Monte
Carlo run therefore draw from disjoint substreams and can be processed in
any order, by any number of workers, with identical results.
"""
from __future__ import annotations

import zlib

import numpy as np

GENERATOR_NAME = "numpy.Philox4x32-10/SeedSequence"


def stream_key(stream_id: str) -> int:
    return zlib.crc32(stream_id.encode("utf-8"))


def make_stream(seed: int, stream_id: str = "default", chunk: int = 0) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seed must be non-negative")
    ss = np.random.SeedSequence(entropy=int(seed),
                                spawn_key=(stream_key(stream_id), int(chunk)))
    return np.random.Generator(np.random.Philox(ss))
