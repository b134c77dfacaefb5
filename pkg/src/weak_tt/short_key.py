"""Traitor-tracing scheme with two-integer user keys.

Here the parameters are reversed: a user key is the pair (i, s_i) in
[n] x [m], and a ciphertext is an obfuscated program with the target index
hardcoded.  Encryption samples a fresh binary PRF over [n] x [m] for every
ciphertext; its seed is derived from the encryption seed.

The hybrid chain of the security argument is exposed as
:func:`build_hybrid_sk`, including the conditioned-PRF sampling step and the
final index-independent form.  Hybrid levels 3..5 of the two-ciphertext game
share one s~ across both challenge ciphertexts; that pairing belongs to the
game harness, which passes the shared value in explicitly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ParameterError
from .obf import ObfuscatedProgram, ProgramDescriptor, obfuscate
from .primitives import PrfKey, fresh_prf_key, sample_conditioned_prf
from .seeding import derive, stream


def default_m(n: int, exponent: int = 6) -> int:
    return max(n**exponent * max(1, math.ceil(math.log2(n)) if n > 1 else 1) ** 2, 2)


@dataclass(frozen=True)
class SchemeParamsSK:
    n: int
    lambda_bits: int = 64
    m: int | None = None
    m_exponent: int = 6

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError("need at least one user")
        if self.m is None:
            object.__setattr__(self, "m", default_m(self.n, self.m_exponent))
        if self.m < 2:
            raise ParameterError("m must be at least 2")

    def to_json(self) -> dict:
        return {"scheme": "short-key", "n": self.n, "lambda": self.lambda_bits, "m": self.m}


@dataclass(frozen=True)
class UserKeySK:
    i: int
    s: int  # PRF_sk(i), an element of [m]

    @property
    def bit_length(self) -> int:
        return self.i.bit_length() + self.s.bit_length()

    def to_json(self) -> dict:
        return {"i": self.i, "s": self.s}

    @classmethod
    def from_json(cls, d: dict) -> "UserKeySK":
        return cls(i=d["i"], s=d["s"])


@dataclass(frozen=True)
class MasterKeySK:
    params: SchemeParamsSK
    prf_sk: PrfKey  # [n] -> [m]

    def user_key(self, i: int) -> UserKeySK:
        if not 1 <= i <= self.params.n:
            raise ParameterError(f"user index {i} outside [1, {self.params.n}]")
        return UserKeySK(i=i, s=self.prf_sk.eval(i - 1))

    def to_json(self) -> dict:
        return {"prf_sk": self.prf_sk.to_json()}


@dataclass(frozen=True)
class CiphertextSK:
    program: ObfuscatedProgram

    def to_json(self) -> dict:
        return self.program.to_json()

    @classmethod
    def from_json(cls, d: dict) -> "CiphertextSK":
        return cls(program=ObfuscatedProgram.from_json(d))

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class SetupSK:
    params: SchemeParamsSK
    users: tuple[UserKeySK, ...]
    master: MasterKeySK

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "users": [u.to_json() for u in self.users],
            "master": self.master.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "SetupSK":
        p = d["params"]
        params = SchemeParamsSK(n=p["n"], lambda_bits=p["lambda"], m=p["m"])
        master = MasterKeySK(params=params, prf_sk=PrfKey.from_json(d["master"]["prf_sk"]))
        return cls(
            params=params,
            users=tuple(UserKeySK.from_json(u) for u in d["users"]),
            master=master,
        )

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def setup(params: SchemeParamsSK, seed: bytes) -> SetupSK:
    prf_sk = fresh_prf_key(
        derive(seed, "sk", "prf_sk"),
        domain_size=params.n,
        range_size=params.m,
        lambda_bits=params.lambda_bits,
        role="sk-shortkey",
    )
    master = MasterKeySK(params=params, prf_sk=prf_sk)
    users = tuple(master.user_key(i) for i in range(1, params.n + 1))
    return SetupSK(params=params, users=users, master=master)


def _fresh_prf_enc(params: SchemeParamsSK, seed: bytes) -> PrfKey:
    return fresh_prf_key(
        seed,
        domain_size=params.n * params.m,
        range_size=2,
        lambda_bits=params.lambda_bits,
        role="enc-shortkey",
    )


def encrypt(master: MasterKeySK, j: int, seed: bytes) -> CiphertextSK:
    """Obfuscate the decryption program with hardcoded index j and a fresh
    per-ciphertext binary PRF over [n] x [m]."""
    params = master.params
    if not isinstance(j, int) or not 0 <= j <= params.n:
        raise ParameterError(f"index {j!r} outside 0..{params.n}")
    prf_enc = _fresh_prf_enc(params, derive(seed, "sk", "prf_enc"))
    desc = ProgramDescriptor(variant="SK-P", prf_sk=master.prf_sk, prf_enc=prf_enc, j=j)
    return CiphertextSK(program=obfuscate(desc))


def decrypt(user: UserKeySK, ct: CiphertextSK):
    return ct.program.evaluate((user.i, user.s))


@dataclass(frozen=True)
class SkHybridContext:
    """Everything the equivalence tests need to rebuild adjacent hybrids: the
    shared s~, the unpunctured encryption PRF the level was built from, and
    the hardcoded values."""

    level: int
    i_star: int
    b0: int | None
    s_star: int | None
    s_tilde: int | None
    prf_enc: PrfKey
    conditioning_rejections: int | None = None


def build_hybrid_sk(
    level: int,
    master: MasterKeySK,
    i_star: int,
    b0: int | None,
    seed: bytes,
    s_tilde: int | None = None,
    prf_enc: PrfKey | None = None,
) -> tuple[CiphertextSK, SkHybridContext]:
    """Ciphertext generated by hybrid level 1..6 of the encryption procedure.

    Level map: (1) hardcode s* = PRF_sk(i*) next to a punctured user-key PRF;
    (2) replace s* by uniform s~; (3) puncture the encryption PRF at
    (i*, s~); (4) sample the encryption PRF conditioned on
    PRF_enc(i*, s~) = 1 - b0; (5) drop the s~ branch, keeping the
    conditioned unpunctured PRF; (6) drop the conditioning -- the output no
    longer depends on b0 at all.

    ``s_tilde`` and ``prf_enc`` override the freshly sampled values so the
    game harness can share s~ across the two challenge ciphertexts and the
    equivalence tests can pin adjacent levels to one context.
    """
    params = master.params
    if not 1 <= i_star <= params.n:
        raise ParameterError(f"i* must be in [1, {params.n}]")
    if level not in (1, 2, 3, 4, 5, 6):
        raise ParameterError(f"hybrid level must be 1..6, got {level}")
    if level != 6 and b0 not in (0, 1):
        raise ParameterError("levels 1..5 need the challenge bit b0")

    prf_sk_p = master.prf_sk.puncture({i_star - 1})
    rejections = None

    if level == 6:
        prf_enc = prf_enc or _fresh_prf_enc(params, derive(seed, "skh", "enc6"))
        desc = ProgramDescriptor(variant="SK-P6", prf_sk=prf_sk_p, prf_enc=prf_enc, i_star=i_star)
        ctx = SkHybridContext(6, i_star, None, None, None, prf_enc)
        return CiphertextSK(obfuscate(desc)), ctx

    if level == 1:
        s_star = master.prf_sk.eval(i_star - 1)
        prf_enc = prf_enc or _fresh_prf_enc(params, derive(seed, "skh", "enc"))
        desc = ProgramDescriptor(
            variant="SK-P1", prf_sk=prf_sk_p, prf_enc=prf_enc, i_star=i_star, b0=b0, s_star=s_star
        )
        ctx = SkHybridContext(1, i_star, b0, s_star, None, prf_enc)
        return CiphertextSK(obfuscate(desc)), ctx

    if s_tilde is None:
        s_tilde = stream(seed, "skh", "s_tilde").below(params.m)
    point = (i_star - 1) * params.m + s_tilde

    if level in (2, 3):
        prf_enc = prf_enc or _fresh_prf_enc(params, derive(seed, "skh", "enc"))
        if level == 2:
            desc = ProgramDescriptor(
                variant="SK-P2", prf_sk=prf_sk_p, prf_enc=prf_enc, i_star=i_star, b0=b0, s_tilde=s_tilde
            )
        else:
            desc = ProgramDescriptor(
                variant="SK-P3",
                prf_sk=prf_sk_p,
                prf_enc=prf_enc.puncture({point}),
                i_star=i_star,
                b0=b0,
                s_tilde=s_tilde,
            )
        ctx = SkHybridContext(level, i_star, b0, None, s_tilde, prf_enc)
        return CiphertextSK(obfuscate(desc)), ctx

    # Levels 4 and 5: the encryption PRF is sampled conditioned on
    # PRF_enc(i*, s~) = 1 - b0.
    if prf_enc is None:
        prf_enc, rejections = sample_conditioned_prf(
            derive(seed, "skh", "enc"),
            domain_size=params.n * params.m,
            range_size=2,
            constraint=(point, 1 - b0),
            lambda_bits=params.lambda_bits,
            role="enc-shortkey",
        )
    if level == 4:
        desc = ProgramDescriptor(
            variant="SK-P4",
            prf_sk=prf_sk_p,
            prf_enc=prf_enc.puncture({point}),
            i_star=i_star,
            b0=b0,
            s_tilde=s_tilde,
        )
    else:
        desc = ProgramDescriptor(variant="SK-P5", prf_sk=prf_sk_p, prf_enc=prf_enc, i_star=i_star)
    ctx = SkHybridContext(level, i_star, b0, None, s_tilde, prf_enc, rejections)
    return CiphertextSK(obfuscate(desc)), ctx
