"""Deterministic counter-based randomness.

Every certificate the toolkit emits must be reproducible from (prime, seed)
alone, independently of thread count or evaluation order.  The generator here
is a splitmix64-style counter PRF: stream keys are derived by hashing labels
into the seed, and each draw depends only on (key, counter).  Forked streams
never share state, so per-point randomness can be consumed in any order.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    # splitmix64 finalizer
    z &= _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def _fold(key: int, token) -> int:
    if isinstance(token, str):
        acc = _mix(len(token) + 1)
        for i, b in enumerate(token.encode("utf-8")):
            acc = _mix(acc ^ ((b + 1) * _GOLDEN + i))
        token_val = acc
    elif isinstance(token, int):
        token_val = _mix((token & _MASK64) ^ _GOLDEN)
    else:
        raise TypeError(f"rng labels must be int or str, got {type(token)!r}")
    return _mix((key + _GOLDEN) ^ token_val)


def derive_seed(seed, *labels) -> int:
    """Fixed splitting rule: hash labels into a seed, giving a child seed."""
    key = _mix(seed & _MASK64) if isinstance(seed, int) else _fold(0, seed)
    for lab in labels:
        key = _fold(key, lab)
    return key


class FieldRng:
    """Seeded stream of uniform draws; `fork` gives independent substreams."""

    __slots__ = ("_key", "_ctr")

    def __init__(self, seed, *labels):
        self._key = derive_seed(seed, *labels)
        self._ctr = 0

    def fork(self, *labels) -> "FieldRng":
        return FieldRng(self._key, "fork", *labels)

    def next_uint64(self) -> int:
        self._ctr += 1
        return _mix((self._key + self._ctr * _GOLDEN) & _MASK64)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n); exact via rejection sampling."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_uint64()
            if v < limit:
                return v % n
