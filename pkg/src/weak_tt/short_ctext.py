"""Traitor-tracing scheme with single-integer ciphertexts.

User keys carry an obfuscated decryption program; the ciphertext for index
``j`` is a uniform element of the encryption PRF's preimage of ``j``.  The
encryption PRF maps [m] onto {0, ..., n}: index 0 is a legal target (the
tracing attack encrypts to both ends of the range), so surjectivity is
required over all n+1 values and m must be at least n+1.

The default ciphertext-space size is m(n) = n^7 * ceil(log2 n)^2, matching
the scheme's asymptotic parameterization; desk-scale runs override it (only
the m/n ratio drives the testable statistics).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .errors import ParameterError
from .obf import ObfuscatedProgram, ProgramDescriptor, obfuscate
from .primitives import (
    PrfKey,
    fresh_prf_key,
    prg_expand,
    sample_surjective_prf,
    sample_uniform_preimage,
)
from .seeding import derive, stream


def default_m(n: int, exponent: int = 7) -> int:
    # max(., n + 1) keeps degenerate n (where the log factor vanishes) valid.
    return max(n**exponent * max(1, math.ceil(math.log2(n)) if n > 1 else 1) ** 2, n + 1)


@dataclass(frozen=True)
class SchemeParamsSC:
    n: int
    lambda_bits: int = 64
    m: int | None = None
    m_exponent: int = 7

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError("need at least one user")
        if self.m is None:
            object.__setattr__(self, "m", default_m(self.n, self.m_exponent))
        if self.m < self.n + 1:
            raise ParameterError(
                f"m = {self.m} too small: the encryption PRF must cover all {self.n + 1} "
                f"indices 0..n, so m >= n + 1"
            )

    def to_json(self) -> dict:
        return {"scheme": "short-ctext", "n": self.n, "lambda": self.lambda_bits, "m": self.m}


@dataclass(frozen=True)
class UserKeySC:
    i: int
    s: bytes  # lambda/2-bit PRG seed, equal to PRF_sk(i) at setup
    program: ObfuscatedProgram

    def to_json(self) -> dict:
        return {"i": self.i, "s": self.s.hex(), "program": self.program.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "UserKeySC":
        return cls(i=d["i"], s=bytes.fromhex(d["s"]), program=ObfuscatedProgram.from_json(d["program"]))


@dataclass
class MasterKeySC:
    prf_enc: PrfKey  # [m] -> {0..n}, surjective
    preimage_table: dict | None = None

    def preimages(self, j: int) -> list[int]:
        if self.preimage_table is None:
            self.preimage_table = {
                y: [] for y in range(self.prf_enc.range_size)
            }
            for x in range(self.prf_enc.domain_size):
                self.preimage_table[self.prf_enc.eval(x)].append(x)
        return self.preimage_table[j]

    def to_json(self) -> dict:
        return {"prf_enc": self.prf_enc.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "MasterKeySC":
        return cls(prf_enc=PrfKey.from_json(d["prf_enc"]))


@dataclass(frozen=True)
class SetupSC:
    params: SchemeParamsSC
    users: tuple[UserKeySC, ...]
    master: MasterKeySC
    prf_sk: PrfKey  # retained for the hybrid constructions

    @property
    def program(self) -> ObfuscatedProgram:
        return self.users[0].program

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "users": [u.to_json() for u in self.users],
            "master": self.master.to_json(),
            "prf_sk": self.prf_sk.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "SetupSC":
        p = d["params"]
        return cls(
            params=SchemeParamsSC(n=p["n"], lambda_bits=p["lambda"], m=p["m"]),
            users=tuple(UserKeySC.from_json(u) for u in d["users"]),
            master=MasterKeySC.from_json(d["master"]),
            prf_sk=PrfKey.from_json(d["prf_sk"]),
        )

    def serialize(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def setup(params: SchemeParamsSC, seed: bytes) -> SetupSC:
    """Generate the n user keys (sharing one obfuscated program) and the
    master key wrapping the surjective encryption PRF."""
    lam = params.lambda_bits
    prf_sk = fresh_prf_key(
        derive(seed, "sc", "prf_sk"),
        domain_size=params.n,
        range_size=2 ** (lam // 2),
        lambda_bits=lam,
        output="bits",
        role="sk-shortctext",
    )
    sample = sample_surjective_prf(
        derive(seed, "sc", "prf_enc"),
        domain_size=params.m,
        range_size=params.n + 1,
        lambda_bits=lam,
        role="enc-shortctext",
    )
    program = obfuscate(ProgramDescriptor(variant="SC-P", prf_sk=prf_sk, prf_enc=sample.key))
    users = tuple(
        UserKeySC(i=i, s=prf_sk.eval(i - 1), program=program) for i in range(1, params.n + 1)
    )
    master = MasterKeySC(prf_enc=sample.key, preimage_table=sample.preimage_table)
    return SetupSC(params=params, users=users, master=master, prf_sk=prf_sk)


def encrypt(master: MasterKeySC, j: int, seed: bytes) -> int:
    """Uniform ciphertext from the preimage set of index j in {0, ..., n}."""
    n_plus_1 = master.prf_enc.range_size
    if not isinstance(j, int) or not 0 <= j <= n_plus_1 - 1:
        raise ParameterError(f"index {j!r} outside 0..{n_plus_1 - 1}")
    return sample_uniform_preimage(master.prf_enc, j, seed, table=master.preimage_table)


def decrypt(user: UserKeySC, c: int):
    """Evaluate the user's obfuscated program on (c, i, s_i); honest keys on
    honest ciphertexts yield the comparison bit, never bottom."""
    return user.program.evaluate((c, user.i, user.s))


@dataclass(frozen=True)
class ChallengeSC:
    """Challenge-ciphertext context consumed by hybrid levels 3 and 4."""

    c0: int
    b0: int
    c1: int
    b1: int


def build_hybrid_sc(
    level: int,
    keys: SetupSC,
    i_star: int,
    challenge: ChallengeSC | None = None,
    seed: bytes | None = None,
    fresh_x_star: bool = False,
) -> ProgramDescriptor:
    """Descriptor for hybrid level 1..4 of the decryption program.

    Level 1 hardcodes x* = PRG(PRF_sk(i*)) next to a user-key PRF punctured
    at i*; with ``fresh_x_star`` the hardcoded value is instead a fresh
    uniform lambda-bit string drawn from ``seed`` (the step that makes the
    PRG-image test unsatisfiable).  Levels 3 and 4 additionally hardcode the
    challenge ciphertexts and puncture the encryption PRF at them.
    """
    if not 1 <= i_star <= keys.params.n:
        raise ParameterError(f"i* must be in [1, {keys.params.n}]")
    prf_sk_p = keys.prf_sk.puncture({i_star - 1})
    prf_enc = keys.master.prf_enc
    if level == 1:
        if fresh_x_star:
            if seed is None:
                raise ParameterError("fresh x* substitution needs a seed")
            x_star = stream(seed, "sc", "x_star").bytes(keys.params.lambda_bits // 8)
        else:
            x_star = prg_expand(keys.prf_sk.eval(i_star - 1), keys.params.lambda_bits)
        return ProgramDescriptor(
            variant="SC-P1", prf_sk=prf_sk_p, prf_enc=prf_enc, i_star=i_star, x_star=x_star
        )
    if level == 2:
        return ProgramDescriptor(variant="SC-P2", prf_sk=prf_sk_p, prf_enc=prf_enc, i_star=i_star)
    if level in (3, 4):
        if challenge is None:
            raise ParameterError(f"hybrid level {level} needs the challenge context")
        points = {challenge.c0, challenge.c1}
        prf_enc_p = prf_enc.puncture(points)
        if level == 3:
            return ProgramDescriptor(
                variant="SC-P3",
                prf_sk=prf_sk_p,
                prf_enc=prf_enc_p,
                i_star=i_star,
                c0=challenge.c0,
                b0=challenge.b0,
                c1=challenge.c1,
                b1=challenge.b1,
            )
        return ProgramDescriptor(
            variant="SC-P4",
            prf_sk=prf_sk_p,
            prf_enc=prf_enc_p,
            i_star=i_star,
            c0=challenge.c0,
            c1=challenge.c1,
        )
    raise ParameterError(f"hybrid level must be 1..4, got {level}")
