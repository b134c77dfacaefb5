"""Length-doubling PRG, GGM-tree PRFs, and one/two-point puncturing.

The PRG maps lambda/2-bit seeds to lambda-bit outputs and is pinned to
SHAKE128 with a fixed domain tag, so every derived object is reproducible
from its root seed.  PRFs are GGM trees over that PRG: tree nodes are
lambda/2-bit seeds, a node's children are the two halves of its PRG
expansion, and the leaf reached by the big-endian bit path of the input is
the raw PRF value.

Keys come in two output flavours:

* ``bits`` keys return the lambda/2-bit leaf seed itself (these hold the
  per-user secrets that are fed back into the PRG), and
* ``int`` keys map the leaf onto ``[range_size]`` by rejection sampling over
  fixed-width chunks of a leaf-keyed SHAKE stream, which is exactly uniform
  per leaf (no modulo bias).

Puncturing stores the seeds of the maximal subtrees that avoid the punctured
leaves (the copath).  Evaluation off the punctured set agrees with the parent
key exactly; on the set it returns ``None`` (the distinguished bottom value).

Domains here are polynomial by design: everything can be enumerated, which
is what the samplers below (surjective / conditioned / preimage) rely on.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .errors import InvariantViolationError, ParameterError, SamplingFailureError
from .seeding import Stream

_PRG_TAG = b"weak-tt.prg.v1"
_MAP_TAG = b"weak-tt.map.v1"

BOT = None  # the distinguished bottom value returned at punctured points


def seed_nbytes(lambda_bits: int) -> int:
    """Byte length of a PRG seed (lambda/2 bits)."""
    _check_lambda(lambda_bits)
    return lambda_bits // 16


def _check_lambda(lambda_bits: int) -> None:
    if lambda_bits <= 0 or lambda_bits % 16 != 0:
        raise ParameterError(f"lambda must be a positive multiple of 16 bits, got {lambda_bits}")


def prg_expand(seed: bytes, lambda_bits: int) -> bytes:
    """Expand a lambda/2-bit seed to lambda bits (pinned SHAKE128 stream)."""
    _check_lambda(lambda_bits)
    if len(seed) != lambda_bits // 16:
        raise ParameterError(
            f"seed must be {lambda_bits // 2} bits ({lambda_bits // 16} bytes), got {len(seed)} bytes"
        )
    h = hashlib.shake_128(_PRG_TAG + lambda_bits.to_bytes(2, "big") + seed)
    return h.digest(lambda_bits // 8)


def _children(seed: bytes, lambda_bits: int) -> tuple[bytes, bytes]:
    out = prg_expand(seed, lambda_bits)
    half = lambda_bits // 16
    return out[:half], out[half:]


def _tree_depth(domain_size: int) -> int:
    return (domain_size - 1).bit_length() if domain_size > 1 else 0


def _path_bits(x: int, depth: int) -> tuple[int, ...]:
    return tuple((x >> (depth - 1 - level)) & 1 for level in range(depth))


class _LeafChunks:
    """Fixed-width chunk stream keyed by a leaf seed, for range mapping."""

    def __init__(self, leaf: bytes, range_size: int) -> None:
        self._shake = hashlib.shake_128(_MAP_TAG + range_size.to_bytes(8, "big") + leaf)
        self._width = (range_size - 1).bit_length()
        self._have = 0
        self._buf = b""
        self._next = 0

    def take(self) -> int:
        w = self._width
        start = self._next
        need = (start + w + 7) // 8
        if need > self._have:
            self._have = max(16, 2 * need)
            self._buf = self._shake.digest(self._have)
        v = 0
        for k in range(w):
            byte = self._buf[(start + k) >> 3]
            v = (v << 1) | ((byte >> (7 - ((start + k) & 7))) & 1)
        self._next = start + w
        return v


def map_leaf_to_range(leaf: bytes, range_size: int) -> int:
    """Map a leaf seed to [range_size], exactly uniform via chunk rejection."""
    if range_size < 1:
        raise ParameterError("range_size must be >= 1")
    if range_size == 1:
        return 0
    chunks = _LeafChunks(leaf, range_size)
    while True:
        v = chunks.take()
        if v < range_size:
            return v


@dataclass(frozen=True)
class PrfKey:
    """GGM PRF key: a total deterministic function [domain_size] -> range.

    ``output`` selects the range: "int" maps leaves onto [range_size],
    "bits" returns the lambda/2-bit leaf seed (range_size is then
    2**(lambda/2), recorded for the serialized form).
    """

    root_seed: bytes
    domain_size: int
    range_size: int
    lambda_bits: int = 64
    output: str = "int"
    role: str = "generic"

    def __post_init__(self) -> None:
        _check_lambda(self.lambda_bits)
        if self.domain_size < 1 or self.range_size < 1:
            raise ParameterError("domain_size and range_size must be >= 1")
        if len(self.root_seed) != seed_nbytes(self.lambda_bits):
            raise ParameterError(
                f"root seed must be {self.lambda_bits // 2} bits, got {8 * len(self.root_seed)}"
            )
        if self.output not in ("int", "bits"):
            raise ParameterError(f"unknown output mode {self.output!r}")
        if self.output == "bits" and self.range_size != 2 ** (self.lambda_bits // 2):
            raise ParameterError("bits keys must declare range_size = 2**(lambda/2)")

    @property
    def depth(self) -> int:
        return _tree_depth(self.domain_size)

    def _check_point(self, x: int) -> None:
        if not isinstance(x, int) or x < 0 or x >= self.domain_size:
            raise ParameterError(f"point {x!r} outside domain [0, {self.domain_size})")

    def leaf(self, x: int) -> bytes:
        self._check_point(x)
        seed = self.root_seed
        for bit in _path_bits(x, self.depth):
            seed = _children(seed, self.lambda_bits)[bit]
        return seed

    def eval(self, x: int):
        leaf = self.leaf(x)
        if self.output == "bits":
            return leaf
        return map_leaf_to_range(leaf, self.range_size)

    def table(self) -> list:
        return [self.eval(x) for x in range(self.domain_size)]

    def preimages(self, y) -> list[int]:
        return [x for x in range(self.domain_size) if self.eval(x) == y]

    def puncture(self, points) -> "PuncturedPrfKey":
        return prf_puncture(self, points)

    def to_json(self) -> dict:
        d = {
            "lambda": self.lambda_bits,
            "domain": self.domain_size,
            "range": self.range_size,
            "root_seed": self.root_seed.hex(),
        }
        if self.output != "int":
            d["output"] = self.output
        if self.role != "generic":
            d["role"] = self.role
        return d

    @classmethod
    def from_json(cls, d: dict) -> "PrfKey":
        return cls(
            root_seed=bytes.fromhex(d["root_seed"]),
            domain_size=d["domain"],
            range_size=d["range"],
            lambda_bits=d["lambda"],
            output=d.get("output", "int"),
            role=d.get("role", "generic"),
        )

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class CopathEntry:
    level: int  # tree depth of the covering node = len(prefix)
    prefix: tuple[int, ...]  # bits from the root to the covering node
    seed: bytes


@dataclass(frozen=True)
class PuncturedPrfKey:
    """A PRF key punctured at one or two points.

    Holds the seeds of all maximal subtrees avoiding the punctured leaves.
    Evaluation agrees with the parent off the punctured set and returns
    ``None`` on it.
    """

    copath: tuple[CopathEntry, ...]
    punctured_points: frozenset[int]
    domain_size: int
    range_size: int
    lambda_bits: int = 64
    output: str = "int"
    role: str = "generic"

    def __post_init__(self) -> None:
        if len(self.punctured_points) not in (1, 2):
            raise ParameterError("punctured_points must have cardinality 1 or 2")

    @property
    def depth(self) -> int:
        return _tree_depth(self.domain_size)

    def eval(self, x: int):
        if not isinstance(x, int) or x < 0 or x >= self.domain_size:
            raise ParameterError(f"point {x!r} outside domain [0, {self.domain_size})")
        if x in self.punctured_points:
            return BOT
        bits = _path_bits(x, self.depth)
        for entry in self.copath:
            if bits[: entry.level] == entry.prefix:
                seed = entry.seed
                for bit in bits[entry.level :]:
                    seed = _children(seed, self.lambda_bits)[bit]
                if self.output == "bits":
                    return seed
                return map_leaf_to_range(seed, self.range_size)
        raise InvariantViolationError(f"no copath entry covers point {x}")

    def to_json(self) -> dict:
        d = {
            "lambda": self.lambda_bits,
            "domain": self.domain_size,
            "range": self.range_size,
            "copath": [
                {"level": e.level, "prefix": "".join(map(str, e.prefix)), "seed": e.seed.hex()}
                for e in self.copath
            ],
            "punctured": sorted(self.punctured_points),
        }
        if self.output != "int":
            d["output"] = self.output
        if self.role != "generic":
            d["role"] = self.role
        return d

    @classmethod
    def from_json(cls, d: dict) -> "PuncturedPrfKey":
        return cls(
            copath=tuple(
                CopathEntry(
                    level=e["level"],
                    prefix=tuple(int(b) for b in e["prefix"]),
                    seed=bytes.fromhex(e["seed"]),
                )
                for e in d["copath"]
            ),
            punctured_points=frozenset(d["punctured"]),
            domain_size=d["domain"],
            range_size=d["range"],
            lambda_bits=d["lambda"],
            output=d.get("output", "int"),
            role=d.get("role", "generic"),
        )

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def prf_eval(key: PrfKey, x: int):
    return key.eval(x)


def punctured_eval(key: PuncturedPrfKey, x: int):
    return key.eval(x)


def prf_puncture(key: PrfKey, points) -> PuncturedPrfKey:
    """Puncture at one or two distinct domain points.

    The copath holds exactly the sibling subtree seeds off the union of the
    punctured root-to-leaf paths, in left-to-right order.
    """
    requested = list(points)
    pts = sorted(set(requested))
    if len(pts) != len(requested):
        raise ParameterError("punctured points must be distinct")
    if len(pts) not in (1, 2):
        raise ParameterError("can puncture at 1 or 2 points only")
    for x in pts:
        key._check_point(x)

    depth = key.depth
    targets = {_path_bits(x, depth) for x in pts}
    copath: list[CopathEntry] = []

    def walk(prefix: tuple[int, ...], seed: bytes, live: set[tuple[int, ...]]) -> None:
        if not live:
            copath.append(CopathEntry(level=len(prefix), prefix=prefix, seed=seed))
            return
        if len(prefix) == depth:
            return  # a punctured leaf: store nothing
        left, right = _children(seed, key.lambda_bits)
        k = len(prefix)
        walk(prefix + (0,), left, {t for t in live if t[k] == 0})
        walk(prefix + (1,), right, {t for t in live if t[k] == 1})

    walk((), key.root_seed, targets)
    return PuncturedPrfKey(
        copath=tuple(copath),
        punctured_points=frozenset(pts),
        domain_size=key.domain_size,
        range_size=key.range_size,
        lambda_bits=key.lambda_bits,
        output=key.output,
        role=key.role,
    )


REJECTION_BUDGET = 10_000


@dataclass
class SurjectiveSample:
    """Result of surjective sampling: the key, the rejection count, and the
    preimage lists per range value (a by-product of the acceptance check)."""

    key: PrfKey
    rejections: int
    preimage_table: dict


def fresh_prf_key(
    seed: bytes,
    domain_size: int,
    range_size: int,
    lambda_bits: int = 64,
    output: str = "int",
    role: str = "generic",
) -> PrfKey:
    """A PRF key whose root seed is derived from ``seed`` (pure in it)."""
    root = hashlib.shake_128(b"weak-tt.prfroot.v1" + seed).digest(seed_nbytes(lambda_bits))
    return PrfKey(
        root_seed=root,
        domain_size=domain_size,
        range_size=range_size,
        lambda_bits=lambda_bits,
        output=output,
        role=role,
    )


def sample_surjective_prf(
    seed: bytes,
    domain_size: int,
    range_size: int,
    lambda_bits: int = 64,
    role: str = "generic",
    budget: int = REJECTION_BUDGET,
) -> SurjectiveSample:
    """Rejection-sample a key whose image covers every range value.

    Draws fresh root seeds and accepts the first whose full enumeration hits
    all ``range_size`` outputs.  Exceeding the budget signals that the domain
    is too small relative to the range, not a retryable event.
    """
    if domain_size < range_size:
        raise ParameterError(
            f"surjectivity impossible: domain {domain_size} < range {range_size}"
        )
    stream = Stream(b"weak-tt.surjective.v1" + seed)
    for attempt in range(budget):
        key = fresh_prf_key(
            stream.bytes(seed_nbytes(lambda_bits)),
            domain_size,
            range_size,
            lambda_bits=lambda_bits,
            role=role,
        )
        table: dict = {y: [] for y in range(range_size)}
        for x in range(domain_size):
            table[key.eval(x)].append(x)
        if all(table[y] for y in range(range_size)):
            return SurjectiveSample(key=key, rejections=attempt, preimage_table=table)
    raise SamplingFailureError(
        f"no surjective key onto [{range_size}] from [{domain_size}] in {budget} attempts"
    )


def sample_uniform_preimage(key: PrfKey, y, seed: bytes, table: dict | None = None) -> int:
    """Uniform element of PRF^{-1}(y), by full domain enumeration."""
    pre = table[y] if table is not None else key.preimages(y)
    if not pre:
        raise InvariantViolationError(f"range value {y!r} has an empty preimage")
    return Stream(b"weak-tt.preimage.v1" + seed).choice(pre)


def sample_conditioned_prf(
    seed: bytes,
    domain_size: int,
    range_size: int,
    constraint: tuple,
    lambda_bits: int = 64,
    role: str = "generic",
    budget: int = REJECTION_BUDGET,
) -> tuple[PrfKey, int]:
    """Rejection-sample a key with PRF(point) = value.

    Expected attempts are about ``range_size`` (geometric).  Returns the key
    and the number of rejected draws.
    """
    point, value = constraint
    stream = Stream(b"weak-tt.conditioned.v1" + seed)
    for attempt in range(budget):
        key = fresh_prf_key(
            stream.bytes(seed_nbytes(lambda_bits)),
            domain_size,
            range_size,
            lambda_bits=lambda_bits,
            role=role,
        )
        if key.eval(point) == value:
            return key, attempt
    raise SamplingFailureError(
        f"no key with PRF({point}) = {value!r} in {budget} attempts (range {range_size})"
    )
