"""Deterministic seed derivation and byte-stream randomness.

Every randomized operation in this package takes an explicit seed and is a
pure function of it.  All randomness flows through SHAKE128 streams keyed by
a label path, so independent trials derive independent seeds as
``derive(master, "trial", t)`` and whole experiments replay bit-for-bit.

No ambient randomness (``random``, ``os.urandom``) is used anywhere.
"""

from __future__ import annotations

import hashlib
import math

_DERIVE_TAG = b"weak-tt.derive.v1"

Label = str | int | bytes


def _encode_label(label: Label) -> bytes:
    if isinstance(label, bool):
        raise TypeError("bool labels are ambiguous; use int 0/1 explicitly")
    if isinstance(label, int):
        if label < 0:
            raise ValueError("integer labels must be non-negative")
        return b"\x00" + label.to_bytes(8, "big")
    if isinstance(label, str):
        raw = label.encode("utf-8")
        return b"\x01" + len(raw).to_bytes(2, "big") + raw
    if isinstance(label, bytes):
        return b"\x02" + len(label).to_bytes(4, "big") + label
    raise TypeError(f"unsupported label type: {type(label)!r}")


def _as_master_bytes(master: int | bytes) -> bytes:
    if isinstance(master, bytes):
        return master
    if isinstance(master, int):
        if master < 0 or master >= 2**64:
            raise ValueError("integer master seeds must fit in 64 bits")
        return master.to_bytes(8, "big")
    raise TypeError(f"unsupported master seed type: {type(master)!r}")


def derive(master: int | bytes, *labels: Label, nbytes: int = 16) -> bytes:
    """Collision-resistant seed derivation from a master seed and a label path.

    Identical (master, labels) always yield identical bytes; sibling label
    paths yield independent-looking seeds.
    """
    h = hashlib.shake_128()
    h.update(_DERIVE_TAG)
    mb = _as_master_bytes(master)
    h.update(len(mb).to_bytes(4, "big") + mb)
    for label in labels:
        h.update(_encode_label(label))
    return h.digest(nbytes)


class Stream:
    """Deterministic random stream backed by SHAKE128.

    Supplies uniform bits, bounded integers (by rejection, no modulo bias),
    and Gaussians (Box-Muller).  Two streams built from the same seed emit
    identical values in identical call order.
    """

    def __init__(self, seed: bytes) -> None:
        self._shake = hashlib.shake_128(b"weak-tt.stream.v1" + seed)
        self._have = 0  # bytes materialized so far
        self._buf = b""
        self._bitpos = 0  # bits consumed from _buf
        self._spare_gauss: float | None = None

    def _ensure_bits(self, nbits: int) -> None:
        need_bytes = (self._bitpos + nbits + 7) // 8
        if need_bytes > self._have:
            self._have = max(64, 2 * need_bytes)
            # SHAKE digests are prefix-consistent, so re-digesting a longer
            # output extends the stream without changing earlier bytes.
            self._buf = self._shake.digest(self._have)

    def bits(self, nbits: int) -> int:
        """Next ``nbits`` bits of the stream as a big-endian integer."""
        if nbits == 0:
            return 0
        self._ensure_bits(nbits)
        out = 0
        pos = self._bitpos
        for k in range(nbits):
            byte = self._buf[(pos + k) >> 3]
            out = (out << 1) | ((byte >> (7 - ((pos + k) & 7))) & 1)
        self._bitpos = pos + nbits
        return out

    def bit(self) -> int:
        return self.bits(1)

    def bytes(self, n: int) -> bytes:
        return self.bits(8 * n).to_bytes(n, "big")

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection over fixed-width chunks."""
        if n <= 0:
            raise ValueError("bound must be positive")
        if n == 1:
            return 0
        w = (n - 1).bit_length()
        while True:
            v = self.bits(w)
            if v < n:
                return v

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def uniform(self) -> float:
        """Uniform float in (0, 1] from 53 bits."""
        return (self.bits(53) + 1) / 2.0**53

    def gauss(self, sigma: float = 1.0) -> float:
        """Centered Gaussian via Box-Muller (deterministic given the stream)."""
        if self._spare_gauss is not None:
            z, self._spare_gauss = self._spare_gauss, None
            return sigma * z
        u1 = self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        self._spare_gauss = r * math.sin(2.0 * math.pi * u2)
        return sigma * r * math.cos(2.0 * math.pi * u2)


def stream(master: int | bytes, *labels: Label) -> Stream:
    """Stream keyed by a label path under a master seed."""
    return Stream(derive(master, *labels, nbytes=32))
