"""Arithmetic contract used by the signature scheme and the protocol roles.

A PairingSuite bundles one parameter profile with scalar arithmetic mod q,
group operations, hashing into Z_q^*, fixed-length encodings, and a secure
scalar sampler. The four costed primitives (pairing, G1 scalar multiplication,
G2 exponentiation, hash-to-scalar) optionally record into an OpCounters
passed per call; everything else is uncounted plumbing.

Two profiles ship by default:

* ``default`` - 512-bit field prime, 160-bit group order; parameters frozen
  below with low-weight exponents so the Miller and final-exponentiation
  schedules stay short.
* ``toy``     - q = 103, small enough for exhaustive brute-force cross-checks.

Scalar arithmetic on secrets avoids secret-dependent branches (inversion is a
Fermat exponentiation, sampling is rejection-free); CPython big-integer
timing still varies with operand size, so this is hygiene, not a hard
constant-time guarantee.
"""

from __future__ import annotations

import hashlib
import secrets
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Tuple

from .counters import OpCounters
from .errors import MalformedEncoding, NotOnCurve, WrongSubgroup
from .pairing import FP2_ONE, Fp2Element, G1Point, TypeACurve

# Registered at the end of the module.
_PROFILES: dict[str, "SuiteProfile"] = {}
_SUITES: dict[str, "PairingSuite"] = {}

G1_FLAG_INFINITY = 0x00
G1_FLAG_EVEN = 0x02
G1_FLAG_ODD = 0x03


@dataclass(frozen=True)
class SuiteProfile:
    """Public description of one parameter set and its byte encodings."""

    name: str
    security_level_bits: int
    field_prime: int        # p, the base field modulus; p = 3 mod 4
    group_order: int        # q, prime order of G1 and G2; q * cofactor = p + 1
    cofactor: int
    scalar_bytes: int
    fp_bytes: int

    def __post_init__(self):
        if self.group_order <= (1 << self.security_level_bits):
            raise ValueError("group order must exceed 2^security_level_bits")

    @property
    def g1_bytes(self) -> int:
        return 1 + self.fp_bytes

    @property
    def g2_bytes(self) -> int:
        return 2 * self.fp_bytes


class PairingSuite:
    """Profile-bound arithmetic, hashing and serialization operations."""

    def __init__(self, profile: SuiteProfile):
        self.profile = profile
        self.q = profile.group_order
        self.curve = TypeACurve(profile.field_prime, profile.group_order, profile.cofactor)
        self.g1_generator: Tuple[int, int] = self.curve.generator
        self.g2_identity: Fp2Element = FP2_ONE

    # -------------------------------------------------------------- scalars

    def scalar_random_nonzero(self) -> int:
        """Uniform draw from [1, q-1]; zero is excluded by construction."""
        return secrets.randbelow(self.q - 1) + 1

    def scalar_add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def scalar_sub(self, a: int, b: int) -> int:
        return (a - b) % self.q

    def scalar_mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def scalar_inverse(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("zero has no inverse mod q")
        # Fermat inversion: fixed operation pattern for any nonzero input
        return pow(a, self.q - 2, self.q)

    def hash_to_scalar(self, domain_tag: bytes, payload: bytes,
                       rec: Optional[OpCounters] = None) -> int:
        """Deterministic hash into Z_q^*.

        SHA-256 over the length-prefixed tag and payload, reduced mod q; on
        the (astronomically rare) zero reduction a 4-byte retry counter is
        appended and the hash repeated.
        """
        if rec is not None:
            rec.hash += 1
        if len(domain_tag) > 255:
            raise ValueError("domain tag too long")
        prefix = bytes([len(domain_tag)]) + domain_tag + payload
        attempt = b""
        while True:
            digest = hashlib.sha256(prefix + attempt).digest()
            value = int.from_bytes(digest, "big") % self.q
            if value != 0:
                return value
            counter = 0 if not attempt else int.from_bytes(attempt, "big") + 1
            attempt = counter.to_bytes(4, "big")

    # --------------------------------------------------------------- groups

    def g1_scalar_mul(self, k: int, point: G1Point,
                      rec: Optional[OpCounters] = None) -> G1Point:
        if rec is not None:
            rec.sm += 1
        return self.curve.g1_mul(k, point)

    def g1_add(self, a: G1Point, b: G1Point) -> G1Point:
        return self.curve.g1_add(a, b)

    def g1_neg(self, point: G1Point) -> G1Point:
        return self.curve.g1_neg(point)

    def g1_is_identity(self, point: G1Point) -> bool:
        return point is None

    def g1_on_curve(self, point: G1Point) -> bool:
        return self.curve.on_curve(point)

    def g1_in_subgroup(self, point: G1Point) -> bool:
        return self.curve.in_subgroup(point)

    def pairing(self, u: G1Point, v: G1Point,
                rec: Optional[OpCounters] = None) -> Fp2Element:
        if rec is not None:
            rec.bp += 1
        return self.curve.pairing(u, v)

    def pairing_product(self, pairs: Sequence[Tuple[G1Point, G1Point]],
                        rec: Optional[OpCounters] = None) -> Fp2Element:
        """prod e(U_i, V_i); counted as one pairing per pair even though the
        backend shares a single Miller loop and final exponentiation."""
        pairs = list(pairs)
        if rec is not None:
            rec.bp += len(pairs)
        return self.curve.pairing_product(pairs)

    def g2_exp(self, base: Fp2Element, k: int,
               rec: Optional[OpCounters] = None) -> Fp2Element:
        if rec is not None:
            rec.exp += 1
        return self.curve.fp2_exp(base, int(k) % self.q)

    def g2_mul(self, a: Fp2Element, b: Fp2Element) -> Fp2Element:
        return self.curve.fp2_mul(a, b)

    def g2_inv(self, a: Fp2Element) -> Fp2Element:
        # G2 elements are unitary, so conjugation inverts them
        return self.curve.fp2_conj(a)

    def g2_in_subgroup(self, element: Fp2Element) -> bool:
        return (self.curve.fp2_norm(element) == 1
                and self.curve.fp2_exp(element, self.q) == FP2_ONE)

    # ------------------------------------------------------------ encodings

    def encode_scalar(self, value: int) -> bytes:
        if not 0 <= value < self.q:
            raise ValueError("scalar out of range")
        return value.to_bytes(self.profile.scalar_bytes, "big")

    def decode_scalar(self, raw: bytes) -> int:
        if len(raw) != self.profile.scalar_bytes:
            raise MalformedEncoding("scalar encoding has wrong length")
        value = int.from_bytes(raw, "big")
        if value >= self.q:
            raise MalformedEncoding("scalar not reduced mod q")
        return value

    def encode_g1(self, point: G1Point) -> bytes:
        """Compressed form: flag byte (infinity / y parity) then big-endian x."""
        size = self.profile.fp_bytes
        if point is None:
            return bytes([G1_FLAG_INFINITY]) + b"\x00" * size
        x, y = point
        flag = G1_FLAG_ODD if y & 1 else G1_FLAG_EVEN
        return bytes([flag]) + int(x).to_bytes(size, "big")

    def decode_g1(self, raw: bytes) -> G1Point:
        """Decode with full validation: on-curve and order-q subgroup checks."""
        size = self.profile.fp_bytes
        if len(raw) != 1 + size:
            raise MalformedEncoding("G1 encoding has wrong length")
        flag = raw[0]
        x = int.from_bytes(raw[1:], "big")
        if flag == G1_FLAG_INFINITY:
            if x != 0:
                raise MalformedEncoding("infinity encoding must zero the coordinate")
            return None
        if flag not in (G1_FLAG_EVEN, G1_FLAG_ODD):
            raise MalformedEncoding("unknown G1 flag byte")
        p = self.profile.field_prime
        if x >= p:
            raise MalformedEncoding("x-coordinate not reduced mod p")
        y = self.curve.fp_sqrt((x * x * x + x) % p)
        if y is None:
            raise NotOnCurve("no curve point with this x-coordinate")
        if (y & 1) != (flag & 1):
            y = p - y
        point = (x, y)
        if not self.curve.in_subgroup(point):
            raise WrongSubgroup("point is outside the order-q subgroup")
        return point

    def encode_g2(self, element: Fp2Element) -> bytes:
        size = self.profile.fp_bytes
        a, b = element
        return int(a).to_bytes(size, "big") + int(b).to_bytes(size, "big")

    def decode_g2(self, raw: bytes) -> Fp2Element:
        size = self.profile.fp_bytes
        if len(raw) != 2 * size:
            raise MalformedEncoding("G2 encoding has wrong length")
        a = int.from_bytes(raw[:size], "big")
        b = int.from_bytes(raw[size:], "big")
        p = self.profile.field_prime
        if a >= p or b >= p:
            raise MalformedEncoding("coordinate not reduced mod p")
        element = (a, b)
        if not self.g2_in_subgroup(element):
            raise WrongSubgroup("element is outside the order-q target subgroup")
        return element


# --------------------------------------------------------------- registry

# Frozen parameter search: q is the least prime 2^159 + 2^b + 1, the cofactor
# the least 2^352 + 2^c + 2^d divisible by 4 making p = cofactor * q - 1 a
# prime with p = 3 mod 4. Low-weight constants keep both exponentiation
# schedules short without affecting the group structure.
_DEFAULT_Q = (1 << 159) + (1 << 17) + 1
_DEFAULT_COFACTOR = (1 << 352) + (1 << 12) + (1 << 8)
_DEFAULT_P = _DEFAULT_COFACTOR * _DEFAULT_Q - 1

DEFAULT_PROFILE = SuiteProfile(
    name="default",
    security_level_bits=80,
    field_prime=_DEFAULT_P,
    group_order=_DEFAULT_Q,
    cofactor=_DEFAULT_COFACTOR,
    scalar_bytes=20,
    fp_bytes=64,
)

# Small enough that discrete logs fall to a linear scan (q = 103), while the
# group still satisfies every algebraic property the scheme relies on.
TOY_PROFILE = SuiteProfile(
    name="toy",
    security_level_bits=6,
    field_prime=823,
    group_order=103,
    cofactor=8,
    scalar_bytes=1,
    fp_bytes=2,
)


def register_profile(profile: SuiteProfile) -> None:
    if profile.name in _PROFILES:
        raise ValueError(f"profile {profile.name!r} already registered")
    _PROFILES[profile.name] = profile


def profile_names() -> list[str]:
    return sorted(_PROFILES)


def get_profile(name: str) -> SuiteProfile:
    try:
        return _PROFILES[name]
    except KeyError:
        raise MalformedEncoding(f"unknown profile {name!r}") from None


def get_suite(name: str) -> PairingSuite:
    """Suite instances are cached; generator derivation runs once per profile."""
    if name not in _SUITES:
        _SUITES[name] = PairingSuite(get_profile(name))
    return _SUITES[name]


register_profile(DEFAULT_PROFILE)
register_profile(TOY_PROFILE)
