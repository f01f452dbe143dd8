"""Small shared helpers: stable seed derivation and wall-clock timing."""

from __future__ import annotations

import hashlib
import time


def derive_seed(*parts) -> int:
    """Mix arbitrary labels/ints into a 64-bit RNG seed.

    sha256-based so results are stable across processes and platforms
    (unlike hash(), which is salted per process).
    """
    blob = "\x1f".join(str(p) for p in parts).encode()
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


class Stopwatch:
    """Context manager recording elapsed wall time in .seconds."""

    def __enter__(self) -> "Stopwatch":
        self._t0 = time.perf_counter()
        self.seconds = 0.0
        return self

    def __exit__(self, *exc) -> None:
        self.seconds = time.perf_counter() - self._t0
