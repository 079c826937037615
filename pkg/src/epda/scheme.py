"""Certificateless ring signatures for anonymous data authentication.

Roles and key material:

* setup() draws the manager's master secret s and publishes s * P.
* extract_partial_key() issues D = (1 / (s + hash(id))) * P to a client.
* client_keygen() folds a client-chosen secret x into the partial key,
  yielding the signing key S, the public key R and the roster index
  IND = hash(id) * R. The x and hash(id) factors cancel inside the pairing,
  so e(S, IND) = e(P, P) holds for every honestly generated client and is
  the sole validity anchor the verifier relies on.
* sign() hides the signer among a ring: every non-signer slot gets a random
  multiple of P, the commitment u blinds their aggregated pairing with a
  random power of e(P, P), and the signer's slot binds the message digest.
* verify() accepts iff e(P,P)^digest * u equals the product of the slot
  pairings against the ring's indexes.

Signing costs exactly 1 pairing, 2n-1 G1 scalar multiplications, 1 G2
exponentiation and 1 hash for a ring of n; verification costs n pairings,
1 exponentiation, 1 hash and no scalar multiplications. The counters in an
explicitly passed OpCounters record exactly these totals; defensive checks
(partial-key and key/ring validation) run uncounted since they are not part
of either stage's algorithm.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from .counters import OpCounters
from .errors import (
    DegenerateIdentity,
    DuplicateIdentity,
    InvalidPartialKey,
    KeyRingMismatch,
    LengthMismatch,
    MalformedElement,
    MalformedEncoding,
)
from .pairing import Fp2Element, G1Point
from .suite import PairingSuite, get_suite

IDENTITY_HASH_TAG = b"epda/v1/identity"
MESSAGE_HASH_TAG = b"epda/v1/message"

ScalarDraw = Optional[random.Random]


def _draw_nonzero(suite: PairingSuite, rng: ScalarDraw) -> int:
    if rng is None:
        return suite.scalar_random_nonzero()
    return rng.randrange(1, suite.q)


def identity_scalar(suite: PairingSuite, identity: bytes,
                    rec: Optional[OpCounters] = None) -> int:
    """Hash of a client identity into Z_q^* (never zero by construction)."""
    return suite.hash_to_scalar(IDENTITY_HASH_TAG, identity, rec)


# ----------------------------------------------------------------- records


@dataclass(frozen=True)
class SystemParams:
    """Public system parameters: the suite, the manager key and e(P, P)."""

    suite: PairingSuite
    nm_public_key: G1Point
    target_base: Fp2Element

    @property
    def generator(self) -> G1Point:
        return self.suite.g1_generator


@dataclass(frozen=True)
class NmSecret:
    """Network manager's master secret; nm_public_key = value * generator."""

    value: int


@dataclass(frozen=True)
class PartialKey:
    """Manager-issued key share (1 / (secret + identity hash)) * generator."""

    identity: bytes
    point: G1Point


@dataclass(frozen=True)
class ClientKeyMaterial:
    identity: bytes
    secret: int             # client-chosen, never leaves the client
    signing_key: G1Point
    public_key: G1Point
    index: G1Point          # published roster value; e(signing_key, index) = e(P, P)


@dataclass(frozen=True)
class Ring:
    """Anonymity set: identities and their indexes in one canonical order.

    Members are sorted by identity byte string so that signer and verifier
    serialize the ring identically and the ordering reveals nothing about
    who joined when.
    """

    identities: Tuple[bytes, ...]
    indexes: Tuple[G1Point, ...]

    @classmethod
    def from_members(cls, members: Iterable[Tuple[bytes, G1Point]]) -> "Ring":
        ordered = sorted(members, key=lambda m: m[0])
        identities = tuple(m[0] for m in ordered)
        if len(set(identities)) != len(identities):
            raise DuplicateIdentity("ring identities must be pairwise distinct")
        if not identities:
            raise MalformedElement("ring must have at least one member")
        return cls(identities, tuple(m[1] for m in ordered))

    def __len__(self) -> int:
        return len(self.identities)

    def position_of(self, identity: bytes) -> int:
        try:
            return self.identities.index(identity)
        except ValueError:
            raise KeyRingMismatch("identity is not a ring member") from None

    def members(self) -> Iterable[Tuple[bytes, G1Point]]:
        return zip(self.identities, self.indexes)


@dataclass(frozen=True)
class RingSignature:
    commitment: Fp2Element          # blinded pairing aggregate (target group)
    points: Tuple[G1Point, ...]     # one G1 point per ring slot
    timestamp: int                  # UTC seconds bound by the digest


# -------------------------------------------------------------- operations


def setup(suite: PairingSuite) -> Tuple[SystemParams, NmSecret]:
    secret = suite.scalar_random_nonzero()
    public = suite.g1_scalar_mul(secret, suite.g1_generator)
    base = suite.pairing(suite.g1_generator, suite.g1_generator)
    return SystemParams(suite, public, base), NmSecret(secret)


def extract_partial_key(nm: NmSecret, params: SystemParams, identity: bytes) -> PartialKey:
    suite = params.suite
    denom = (nm.value + identity_scalar(suite, identity)) % suite.q
    if denom == 0:
        raise DegenerateIdentity("identity hash cancels the master secret")
    point = suite.g1_scalar_mul(suite.scalar_inverse(denom), suite.g1_generator)
    return PartialKey(identity, point)


def validate_partial_key(params: SystemParams, partial: PartialKey) -> bool:
    """Client-side check e(D, nm_public_key + hash(id) * P) == e(P, P)."""
    suite = params.suite
    if not suite.g1_on_curve(partial.point) or partial.point is None:
        return False
    id_hash = identity_scalar(suite, partial.identity)
    anchor = suite.g1_add(params.nm_public_key,
                          suite.g1_scalar_mul(id_hash, params.generator))
    return suite.pairing(partial.point, anchor) == params.target_base


def client_keygen(params: SystemParams, partial: PartialKey,
                  rng: ScalarDraw = None) -> ClientKeyMaterial:
    suite = params.suite
    if not validate_partial_key(params, partial):
        raise InvalidPartialKey("partial key fails its pairing validity check")
    id_hash = identity_scalar(suite, partial.identity)
    secret = _draw_nonzero(suite, rng)
    signing_key = suite.g1_scalar_mul(
        suite.scalar_mul(secret, suite.scalar_inverse(id_hash)), partial.point)
    anchor = suite.g1_add(params.nm_public_key,
                          suite.g1_scalar_mul(id_hash, params.generator))
    public_key = suite.g1_scalar_mul(suite.scalar_inverse(secret), anchor)
    index = suite.g1_scalar_mul(id_hash, public_key)
    material = ClientKeyMaterial(partial.identity, secret, signing_key, public_key, index)
    if suite.pairing(signing_key, index) != params.target_base:
        raise InvalidPartialKey("generated key material is inconsistent")
    return material


def nm_index_for(params: SystemParams, identity: bytes, public_key: G1Point) -> G1Point:
    """Manager-side recomputation of the roster index from a client public key."""
    return params.suite.g1_scalar_mul(
        identity_scalar(params.suite, identity), public_key)


def message_digest(suite: PairingSuite, data: bytes, timestamp: int,
                   commitment: Fp2Element, ring: Ring,
                   rec: Optional[OpCounters] = None) -> int:
    """Scalar digest binding data, timestamp, commitment and the full ring.

    The serialization is injective: every variable-length field is length
    prefixed and ring members appear in canonical order.
    """
    parts = [
        len(data).to_bytes(8, "big"),
        data,
        timestamp.to_bytes(8, "big"),
        suite.encode_g2(commitment),
        len(ring).to_bytes(4, "big"),
    ]
    for identity, index in ring.members():
        parts.append(len(identity).to_bytes(2, "big"))
        parts.append(identity)
        parts.append(suite.encode_g1(index))
    return suite.hash_to_scalar(MESSAGE_HASH_TAG, b"".join(parts), rec)


def sign(params: SystemParams, ring: Ring, signer_pos: int, signing_key: G1Point,
         data: bytes, timestamp: int, rec: Optional[OpCounters] = None,
         rng: ScalarDraw = None) -> RingSignature:
    """Ring-sign data at the given position using the member's signing key.

    Cost per call: 1 pairing (single-pairing aggregate form), 2n-1 G1 scalar
    multiplications, 1 G2 exponentiation, 1 hash.
    """
    n = len(ring)
    if not 0 <= signer_pos < n:
        raise IndexError("signer position outside the ring")
    if not 0 <= timestamp < 1 << 64:
        raise MalformedElement("timestamp must fit in 64 bits")
    suite = params.suite
    # key/ring consistency precondition; deliberately uncounted (registration
    # material validation, not part of the signing algorithm)
    if suite.pairing(signing_key, ring.indexes[signer_pos]) != params.target_base:
        raise KeyRingMismatch("signing key does not match the claimed ring slot")

    points: list[G1Point] = [None] * n
    aggregate: G1Point = None
    for i in range(n):
        if i == signer_pos:
            continue
        blind = _draw_nonzero(suite, rng)
        points[i] = suite.g1_scalar_mul(blind, params.generator, rec)
        aggregate = suite.g1_add(
            aggregate, suite.g1_scalar_mul(blind, ring.indexes[i], rec))
    pair_part = suite.pairing(params.generator, aggregate, rec)

    while True:
        mask = _draw_nonzero(suite, rng)
        commitment = suite.g2_mul(suite.g2_exp(params.target_base, mask, rec), pair_part)
        digest = message_digest(suite, data, timestamp, commitment, ring, rec)
        bound = suite.scalar_add(digest, mask)
        if bound != 0:
            break
        # digest + mask = 0 would put the identity point in the signer slot
        # and leak the position; resample (probability 1/q)
    points[signer_pos] = suite.g1_scalar_mul(bound, signing_key, rec)
    return RingSignature(commitment, tuple(points), timestamp)


def verify(params: SystemParams, ring: Ring, data: bytes, sig: RingSignature,
           rec: Optional[OpCounters] = None) -> bool:
    """Check e(P,P)^digest * commitment == prod e(V_i, IND_i).

    Freshness of the timestamp is protocol policy and is not checked here.
    Cost per call: n pairings, 1 exponentiation, 1 hash, no scalar
    multiplications.
    """
    suite = params.suite
    if len(sig.points) != len(ring):
        raise LengthMismatch("signature and ring disagree on member count")
    if not 0 <= sig.timestamp < 1 << 64:
        raise MalformedElement("timestamp must fit in 64 bits")
    if suite.curve.fp2_norm(sig.commitment) != 1:
        raise MalformedElement("commitment is not a unit of the target field")
    for point in sig.points:
        if not suite.g1_on_curve(point):
            raise MalformedElement("signature point is off the curve")
    digest = message_digest(suite, data, sig.timestamp, sig.commitment, ring, rec)
    lhs = suite.g2_mul(suite.g2_exp(params.target_base, digest, rec), sig.commitment)
    rhs = suite.pairing_product(list(zip(sig.points, ring.indexes)), rec)
    return lhs == rhs


# ---------------------------------------------------------- serialization


def encode_signature(suite: PairingSuite, sig: RingSignature) -> bytes:
    """profile name, timestamp, commitment, member count, slot points."""
    name = suite.profile.name.encode("ascii")
    parts = [
        bytes([len(name)]),
        name,
        sig.timestamp.to_bytes(8, "big"),
        suite.encode_g2(sig.commitment),
        len(sig.points).to_bytes(4, "big"),
    ]
    parts.extend(suite.encode_g1(point) for point in sig.points)
    return b"".join(parts)


def decode_signature(suite: PairingSuite, raw: bytes) -> RingSignature:
    if len(raw) < 1:
        raise MalformedEncoding("signature too short")
    name_len = raw[0]
    offset = 1 + name_len
    if len(raw) < offset + 8 + suite.profile.g2_bytes + 4:
        raise MalformedEncoding("signature too short")
    name = raw[1:offset].decode("ascii", errors="replace")
    if name != suite.profile.name:
        raise MalformedEncoding(f"signature was produced under profile {name!r}")
    timestamp = int.from_bytes(raw[offset:offset + 8], "big")
    offset += 8
    commitment = suite.decode_g2(raw[offset:offset + suite.profile.g2_bytes])
    offset += suite.profile.g2_bytes
    count = int.from_bytes(raw[offset:offset + 4], "big")
    offset += 4
    point_size = suite.profile.g1_bytes
    if len(raw) != offset + count * point_size:
        raise MalformedEncoding("signature length does not match member count")
    points = []
    for i in range(count):
        points.append(suite.decode_g1(raw[offset:offset + point_size]))
        offset += point_size
    return RingSignature(commitment, tuple(points), timestamp)


def encode_ring(suite: PairingSuite, ring: Ring) -> bytes:
    """Member records in digest order: id length, id, index point."""
    parts = [len(ring).to_bytes(4, "big")]
    for identity, index in ring.members():
        if len(identity) > 0xFFFF:
            raise MalformedEncoding("identity longer than 65535 bytes")
        parts.append(len(identity).to_bytes(2, "big"))
        parts.append(identity)
        parts.append(suite.encode_g1(index))
    return b"".join(parts)


def decode_ring(suite: PairingSuite, raw: bytes) -> Ring:
    if len(raw) < 4:
        raise MalformedEncoding("ring encoding too short")
    count = int.from_bytes(raw[:4], "big")
    offset = 4
    members = []
    point_size = suite.profile.g1_bytes
    for _ in range(count):
        if len(raw) < offset + 2:
            raise MalformedEncoding("truncated ring entry")
        id_len = int.from_bytes(raw[offset:offset + 2], "big")
        offset += 2
        if len(raw) < offset + id_len + point_size:
            raise MalformedEncoding("truncated ring entry")
        identity = raw[offset:offset + id_len]
        offset += id_len
        index = suite.decode_g1(raw[offset:offset + point_size])
        offset += point_size
        members.append((identity, index))
    if offset != len(raw):
        raise MalformedEncoding("trailing bytes after ring entries")
    ring = Ring.from_members(members)
    if ring.identities != tuple(m[0] for m in members):
        raise MalformedEncoding("ring members are not in canonical order")
    return ring
