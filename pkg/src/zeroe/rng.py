"""Deterministic per-sample random streams.

Every attack draws from a ``RandomStream`` derived from the global seed and
the sample's index, so corpora come out byte-identical no matter how samples
are scheduled.  The construction is fixed: the 256-bit state is seeded with
four successive splitmix64 outputs of ``seed XOR (sample_index * GOLDEN)``,
and draws follow the xoshiro256** recurrence.  Changing any of this changes
every generated corpus, so don't.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# Raw 64-bit outputs are produced in blocks; block sizing only affects speed.
# Blocks start small (per-sample streams rarely need more than a few dozen
# draws) and double up to a cap for long-lived streams.
_BLOCK_MIN = 16
_BLOCK_MAX = 4096


def splitmix64(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state once; returns (new_state, output)."""
    state = (state + _GOLDEN) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    z = z ^ (z >> 31)
    return state, z


def _step(s: tuple[int, int, int, int]) -> tuple[tuple[int, int, int, int], int]:
    """One xoshiro256** step; returns (new state, output)."""
    s0, s1, s2, s3 = s
    m = _MASK64
    r = (s1 * 5) & m
    r = (((r << 7) | (r >> 57)) & m) * 9 & m
    t = (s1 << 17) & m
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = ((s3 << 45) | (s3 >> 19)) & m
    return (s0, s1, s2, s3), r


class RandomStream:
    """xoshiro256** generator confined to a single sample's processing."""

    __slots__ = (
        "_s0",
        "_s1",
        "_s2",
        "_s3",
        "_block_start",
        "_buf",
        "_pos",
        "_block",
        "origin",
    )

    def __init__(self, state: tuple[int, int, int, int], origin: tuple[int, int]):
        self._s0, self._s1, self._s2, self._s3 = state
        self._block_start = state
        self._buf: list[int] = []
        self._pos = 0
        self._block = _BLOCK_MIN
        self.origin = origin

    @property
    def state(self) -> tuple[int, int, int, int]:
        """Generator state at the logical position (buffered draws resolved)."""
        s = self._block_start
        for _ in range(self._pos):
            s = _step(s)[0]
        return s

    def _refill(self) -> None:
        # Hot loop: locals only, no attribute access per draw.
        s0, s1, s2, s3 = self._s0, self._s1, self._s2, self._s3
        self._block_start = (s0, s1, s2, s3)
        m = _MASK64
        buf = []
        append = buf.append
        block = self._block
        self._block = min(block * 2, _BLOCK_MAX)
        for _ in range(block):
            r = (s1 * 5) & m
            r = (((r << 7) | (r >> 57)) & m) * 9 & m
            t = (s1 << 17) & m
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= t
            s3 = ((s3 << 45) | (s3 >> 19)) & m
            append(r)
        self._s0, self._s1, self._s2, self._s3 = s0, s1, s2, s3
        self._buf = buf
        self._pos = 0

    def next_raw(self) -> int:
        """Next raw 64-bit output."""
        if self._pos >= len(self._buf):
            self._refill()
        v = self._buf[self._pos]
        self._pos += 1
        return v

    def uniform(self) -> float:
        """Uniform real in [0, 1): top 53 bits of the next raw draw."""
        if self._pos >= len(self._buf):
            self._refill()
        v = self._buf[self._pos]
        self._pos += 1
        return (v >> 11) * 1.1102230246251565e-16  # 2**-53

    def below(self, n: int) -> int:
        """Unbiased integer in [0, n) via rejection; always consumes >= 1 draw."""
        if n < 1:
            raise ValueError(f"below() needs n >= 1, got {n}")
        threshold = ((1 << 64) // n) * n
        while True:
            if self._pos >= len(self._buf):
                self._refill()
            v = self._buf[self._pos]
            self._pos += 1
            if v < threshold:
                return v % n


def derive_stream(seed: int, sample_index: int) -> RandomStream:
    """Stream for one sample; equal (seed, sample_index) gives equal draws."""
    x = (seed ^ ((sample_index * _GOLDEN) & _MASK64)) & _MASK64
    x, s0 = splitmix64(x)
    x, s1 = splitmix64(x)
    x, s2 = splitmix64(x)
    x, s3 = splitmix64(x)
    return RandomStream((s0, s1, s2, s3), origin=(seed, sample_index))
