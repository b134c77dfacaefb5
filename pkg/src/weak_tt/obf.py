"""Obfuscation interface with a transparent backend, plus program descriptors.

Programs are interpretable descriptors, one variant per decryption program of
the two schemes and per hybrid step of their security arguments.  Evaluation
follows each figure top to bottom; a failed guard short-circuits to ``None``
(the distinguished bottom value, never conflated with 0).

Only the ``transparent`` backend ships: it preserves functionality exactly
and hides nothing.  A white-box adversary can read the embedded key material
straight out of the payload and win every game; the test suite exercises
that adversary deliberately as a harness-sensitivity check.  The backend
registry exists so a real obfuscator could be plugged in behind the same
contract.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import CapacityError, ConfigurationError, ParameterError
from .primitives import PrfKey, PuncturedPrfKey, prg_expand, seed_nbytes
from .seeding import Stream

BOT = None

# Fields each variant hardcodes, exactly as in the corresponding figure.
_VARIANT_FIELDS = {
    "SC-P": ("prf_sk", "prf_enc"),
    "SC-P1": ("prf_sk", "prf_enc", "i_star", "x_star"),
    "SC-P2": ("prf_sk", "prf_enc", "i_star"),
    "SC-P3": ("prf_sk", "prf_enc", "i_star", "c0", "b0", "c1", "b1"),
    "SC-P4": ("prf_sk", "prf_enc", "i_star", "c0", "c1"),
    "SK-P": ("prf_sk", "prf_enc", "j"),
    "SK-P1": ("prf_sk", "prf_enc", "i_star", "b0", "s_star"),
    "SK-P2": ("prf_sk", "prf_enc", "i_star", "b0", "s_tilde"),
    "SK-P3": ("prf_sk", "prf_enc", "i_star", "b0", "s_tilde"),
    "SK-P4": ("prf_sk", "prf_enc", "i_star", "b0", "s_tilde"),
    "SK-P5": ("prf_sk", "prf_enc", "i_star"),
    "SK-P6": ("prf_sk", "prf_enc", "i_star"),
}

# Which variants carry a punctured key in which slot.
_PUNCTURED_SK = {"SC-P1", "SC-P2", "SC-P3", "SC-P4", "SK-P1", "SK-P2", "SK-P3", "SK-P4", "SK-P5", "SK-P6"}
_PUNCTURED_ENC = {"SC-P3", "SC-P4", "SK-P3", "SK-P4"}

_ALL_FIELDS = ("i_star", "x_star", "c0", "b0", "c1", "b1", "s_tilde", "s_star", "j")


@dataclass(frozen=True)
class ProgramDescriptor:
    """Interpretable description of a decryption program or hybrid.

    SC variants take inputs ``(c, i, s)`` with ``s`` a lambda/2-bit string;
    SK variants take ``(i, s)`` with ``s`` an integer in [m].  User indices
    ``i`` are 1-based as in the schemes; ciphertexts and SK secrets are
    0-based integers.
    """

    variant: str
    prf_sk: PrfKey | PuncturedPrfKey
    prf_enc: PrfKey | PuncturedPrfKey
    i_star: int | None = None
    x_star: bytes | None = None
    c0: int | None = None
    b0: int | None = None
    c1: int | None = None
    b1: int | None = None
    s_tilde: int | None = None
    s_star: int | None = None
    j: int | None = None

    def __post_init__(self) -> None:
        if self.variant not in _VARIANT_FIELDS:
            raise ParameterError(f"unknown program variant {self.variant!r}")
        required = _VARIANT_FIELDS[self.variant]
        for name in _ALL_FIELDS:
            value = getattr(self, name)
            if name in required and value is None:
                raise ParameterError(f"{self.variant} requires hardcoded {name}")
            if name not in required and value is not None:
                raise ParameterError(f"{self.variant} does not hardcode {name}")
        want_sk_punct = self.variant in _PUNCTURED_SK
        if isinstance(self.prf_sk, PuncturedPrfKey) != want_sk_punct:
            raise ParameterError(f"{self.variant}: user-key PRF puncturing mismatch")
        want_enc_punct = self.variant in _PUNCTURED_ENC
        if isinstance(self.prf_enc, PuncturedPrfKey) != want_enc_punct:
            raise ParameterError(f"{self.variant}: encryption PRF puncturing mismatch")
        if want_sk_punct and self.prf_sk.punctured_points != frozenset({self.i_star - 1}):
            raise ParameterError(f"{self.variant}: user-key PRF must be punctured exactly at i*")
        if want_enc_punct:
            if self.variant in ("SC-P3", "SC-P4"):
                expect = frozenset({self.c0, self.c1})
            else:  # SK-P3 / SK-P4: punctured at the flattened point (i*, s~)
                m = self.prf_enc.domain_size // self.prf_sk.domain_size
                expect = frozenset({(self.i_star - 1) * m + self.s_tilde})
            if self.prf_enc.punctured_points != expect:
                raise ParameterError(
                    f"{self.variant}: encryption PRF must be punctured exactly at the figure's points"
                )

    @property
    def family(self) -> str:
        return "SC" if self.variant.startswith("SC") else "SK"

    @property
    def n(self) -> int:
        return self.prf_sk.domain_size

    @property
    def lambda_bits(self) -> int:
        return self.prf_sk.lambda_bits

    def evaluate(self, inputs: tuple):
        if self.family == "SC":
            return _eval_sc(self, inputs)
        return _eval_sk(self, inputs)

    def to_json(self) -> dict:
        d: dict = {"variant": self.variant}
        d["prf_sk"] = self.prf_sk.to_json()
        d["prf_enc"] = self.prf_enc.to_json()
        for name in _VARIANT_FIELDS[self.variant]:
            if name in ("prf_sk", "prf_enc"):
                continue
            value = getattr(self, name)
            d[name] = value.hex() if isinstance(value, bytes) else value
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ProgramDescriptor":
        def load_key(kd: dict):
            return PuncturedPrfKey.from_json(kd) if "copath" in kd else PrfKey.from_json(kd)

        kwargs: dict = {}
        for name in _VARIANT_FIELDS[d["variant"]]:
            if name in ("prf_sk", "prf_enc"):
                continue
            value = d[name]
            kwargs[name] = bytes.fromhex(value) if name == "x_star" else value
        return cls(
            variant=d["variant"],
            prf_sk=load_key(d["prf_sk"]),
            prf_enc=load_key(d["prf_enc"]),
            **kwargs,
        )

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def _check_sc_inputs(desc: ProgramDescriptor, inputs: tuple) -> tuple:
    if len(inputs) != 3:
        raise ParameterError("SC programs take (c, i, s)")
    c, i, s = inputs
    m = desc.prf_enc.domain_size
    if not isinstance(c, int) or not 0 <= c < m:
        raise ParameterError(f"ciphertext {c!r} outside [0, {m})")
    if not isinstance(i, int) or not 1 <= i <= desc.n:
        raise ParameterError(f"user index {i!r} outside [1, {desc.n}]")
    if not isinstance(s, bytes) or len(s) != seed_nbytes(desc.lambda_bits):
        raise ParameterError("s must be a lambda/2-bit byte string")
    return c, i, s


def _prg_image_of_user(desc: ProgramDescriptor, i: int) -> bytes | None:
    leaf = desc.prf_sk.eval(i - 1)
    if leaf is BOT:
        return BOT
    return prg_expand(leaf, desc.lambda_bits)


def _eval_sc(desc: ProgramDescriptor, inputs: tuple):
    c, i, s = _check_sc_inputs(desc, inputs)
    prg_s = prg_expand(s, desc.lambda_bits)
    v = desc.variant
    if v == "SC-P":
        if prg_s != _prg_image_of_user(desc, i):
            return BOT
        return int(i <= desc.prf_enc.eval(c))
    if v == "SC-P1":
        if i == desc.i_star:
            if prg_s != desc.x_star:
                return BOT
        elif prg_s != _prg_image_of_user(desc, i):
            return BOT
        return int(i <= desc.prf_enc.eval(c))
    # SC-P2 / SC-P3 / SC-P4 all bail out unconditionally on i = i*.
    if i == desc.i_star:
        return BOT
    if prg_s != _prg_image_of_user(desc, i):
        return BOT
    if v == "SC-P2":
        return int(i <= desc.prf_enc.eval(c))
    if v == "SC-P3":
        if c == desc.c0:
            return int(i <= desc.i_star - desc.b0)
        if c == desc.c1:
            return int(i <= desc.i_star - desc.b1)
        return int(i <= desc.prf_enc.eval(c))
    if v == "SC-P4":
        if c in (desc.c0, desc.c1):
            return int(i <= desc.i_star)
        return int(i <= desc.prf_enc.eval(c))
    raise ParameterError(f"not an SC variant: {v}")


def _check_sk_inputs(desc: ProgramDescriptor, inputs: tuple) -> tuple:
    if len(inputs) != 2:
        raise ParameterError("SK programs take (i, s)")
    i, s = inputs
    n = desc.n
    m = desc.prf_enc.domain_size // n
    if not isinstance(i, int) or not 1 <= i <= n:
        raise ParameterError(f"user index {i!r} outside [1, {n}]")
    if not isinstance(s, int) or not 0 <= s < m:
        raise ParameterError(f"secret {s!r} outside [0, {m})")
    return i, s


def _eval_sk(desc: ProgramDescriptor, inputs: tuple):
    i, s = _check_sk_inputs(desc, inputs)
    n = desc.n
    m = desc.prf_enc.domain_size // n
    enc_at = lambda ii, ss: desc.prf_enc.eval((ii - 1) * m + ss)
    v = desc.variant
    if v == "SK-P":
        if s != desc.prf_sk.eval(i - 1):
            return enc_at(i, s)
        return int(i <= desc.j)
    special = desc.s_star if v == "SK-P1" else desc.s_tilde
    if v in ("SK-P1", "SK-P2", "SK-P3", "SK-P4"):
        if i == desc.i_star:
            if s != special:
                return enc_at(i, s)
            return 1 - desc.b0
        if s != desc.prf_sk.eval(i - 1):
            return enc_at(i, s)
        return int(i <= desc.i_star - 1)
    if v in ("SK-P5", "SK-P6"):
        if i == desc.i_star:
            return enc_at(i, s)
        if s != desc.prf_sk.eval(i - 1):
            return enc_at(i, s)
        return int(i <= desc.i_star - 1)
    raise ParameterError(f"not an SK variant: {v}")


@dataclass(frozen=True)
class ObfuscatedProgram:
    """Output of the obfuscation interface; evaluates exactly like its payload."""

    backend: str
    payload: ProgramDescriptor

    def evaluate(self, inputs: tuple):
        return self.payload.evaluate(inputs)

    def to_json(self) -> dict:
        return {"backend": self.backend, "program": self.payload.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "ObfuscatedProgram":
        return cls(backend=d["backend"], payload=ProgramDescriptor.from_json(d["program"]))

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


_BACKENDS = ("transparent",)


def obfuscate(descriptor: ProgramDescriptor, backend: str = "transparent", seed: bytes = b"") -> ObfuscatedProgram:
    """Obfuscate a descriptor.  The transparent backend returns the descriptor
    unchanged behind a marker: functionality preserved, nothing hidden."""
    if backend not in _BACKENDS:
        raise ConfigurationError(f"unknown obfuscation backend {backend!r}")
    del seed  # the transparent backend is deterministic
    return ObfuscatedProgram(backend=backend, payload=descriptor)


def evaluate_program(prog, inputs: tuple):
    """Evaluate a descriptor or obfuscated program on variant-shaped inputs."""
    return prog.evaluate(inputs)


def default_probe_seeds(*descriptors: ProgramDescriptor, extra: int = 64) -> tuple[bytes, ...]:
    """Canonical probe set for SC equivalence scans.

    The SC input coordinate ``s`` ranges over all lambda/2-bit strings, which
    is not enumerable; program behaviour depends on ``s`` only through PRG
    image comparisons.  The probe set covers every reachable comparison
    class: the honest seed of every user under each descriptor's user-key
    PRF (off its punctured points), plus ``extra`` pseudorandom seeds drawn
    from a fixed tag to represent the mismatch class.
    """
    seeds: set[bytes] = set()
    for desc in descriptors:
        for i in range(desc.n):
            leaf = desc.prf_sk.eval(i)
            if leaf is not BOT:
                seeds.add(leaf)
    nbytes = seed_nbytes(descriptors[0].lambda_bits)
    stream = Stream(b"weak-tt.probes.v1")
    for _ in range(extra):
        seeds.add(stream.bytes(nbytes))
    return tuple(sorted(seeds))


@dataclass(frozen=True)
class EquivalenceResult:
    equivalent: bool
    counterexample: tuple | None
    inputs_checked: int

    def __bool__(self) -> bool:
        return self.equivalent


def programs_equivalent(
    a: ProgramDescriptor,
    b: ProgramDescriptor,
    probe_seeds: tuple[bytes, ...] | None = None,
    max_inputs: int = 2**24,
) -> EquivalenceResult:
    """Exhaustively compare two programs on their joint input space.

    SK programs are compared on all of [n] x [m].  SC programs are compared
    on all (c, i) with ``s`` running over the probe seed set (defaulting to
    :func:`default_probe_seeds`), in lexicographic (c, i, s) order; the first
    disagreeing input is reported.
    """
    if a.family != b.family:
        raise ParameterError("programs have different input signatures")
    if a.n != b.n or a.prf_enc.domain_size != b.prf_enc.domain_size:
        raise ParameterError("programs have different input dimensions")
    n = a.n
    if a.family == "SK":
        m = a.prf_enc.domain_size // n
        if n * m > max_inputs:
            raise CapacityError(f"input space {n * m} exceeds limit {max_inputs}")
        checked = 0
        for i in range(1, n + 1):
            for s in range(m):
                checked += 1
                if a.evaluate((i, s)) != b.evaluate((i, s)):
                    return EquivalenceResult(False, (i, s), checked)
        return EquivalenceResult(True, None, checked)

    if probe_seeds is None:
        probe_seeds = default_probe_seeds(a, b)
    m = a.prf_enc.domain_size
    total = m * n * len(probe_seeds)
    if total > max_inputs:
        raise CapacityError(f"input space {total} exceeds limit {max_inputs}")
    checked = 0
    for c in range(m):
        for i in range(1, n + 1):
            for s in probe_seeds:
                checked += 1
                if a.evaluate((c, i, s)) != b.evaluate((c, i, s)):
                    return EquivalenceResult(False, (c, i, s), checked)
    return EquivalenceResult(True, None, checked)
