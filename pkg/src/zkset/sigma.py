"""Schnorr-style Sigma protocol for knowledge of a discrete logarithm.

Prover and verifier share ``(g, y)``; the prover knows ``x`` with
``g^x = y``.  One run is commit ``a = g^r``, challenge ``c``, response
``t = r + c*x`` and the check ``g^t == a * y^c``.  Over an RSA group the
response is reduced modulo ``phi(N)``, so the prover needs the
:class:`~zkset.group.SetupSecret`.

Besides the honest prover this module has the zero-knowledge simulator and
the special-soundness extractor, both as ordinary functions.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from . import group
from .errors import (
    DecodeError,
    ExtractionError,
    MissingSetupSecretError,
    NonInvertibleChallengeError,
    ParameterError,
)
from .group import Element, GroupParams, SetupSecret

CHALLENGE_BITS = 128
CHALLENGE_BYTES = 16


@dataclass(frozen=True)
class SigmaStatement:
    params: GroupParams
    g: Element
    y: Element

    @classmethod
    def for_generator(cls, params: GroupParams, y: Element) -> "SigmaStatement":
        return cls(params, params.generator, y)


@dataclass(frozen=True)
class SigmaWitness:
    x: int


@dataclass(frozen=True)
class ProverState:
    """Single-use prover memory between commit and respond."""

    r: int
    a: Element
    modulus: int | None

    def __repr__(self):
        return f"ProverState(a={self.a!r})"


@dataclass(frozen=True)
class Transcript:
    a: Element
    c: int
    t: int


def random_challenge(rng: random.Random, bits: int = CHALLENGE_BITS) -> int:
    return rng.getrandbits(bits)


def witness_consistent(stmt: SigmaStatement, witness: SigmaWitness) -> bool:
    return group.exp(stmt.params, stmt.g, witness.x) == stmt.y


def commit(stmt: SigmaStatement, rng: random.Random, secret: SetupSecret | None = None,
           *, r: int | None = None) -> ProverState:
    """First move.  ``r`` may be injected for worked examples."""
    params = stmt.params
    try:
        modulus = group.exponent_modulus(params, secret)
    except MissingSetupSecretError:
        raise MissingSetupSecretError("RSA prover needs the setup secret (prover key)") from None
    if r is None:
        r = rng.randrange(modulus)
    return ProverState(r=r, a=group.exp(params, stmt.g, r), modulus=modulus)


def respond(state: ProverState, witness: SigmaWitness, c: int) -> int:
    """Third move: ``t = r + c*x`` modulo the exponent modulus."""
    if state.modulus is None:
        raise MissingSetupSecretError("no exponent modulus in prover state")
    if c < 0:
        raise ParameterError("challenge must be non-negative")
    return (state.r + c * witness.x) % state.modulus


def verify(stmt: SigmaStatement, tr: Transcript, challenge_bits: int = CHALLENGE_BITS) -> bool:
    """Accept iff ``g^t == a * y^c``.

    Exactly two exponentiations and one group operation.
    """
    params = stmt.params
    if not 0 <= tr.c < (1 << challenge_bits):
        return False
    if not 0 <= tr.t < params.scalar_bound:
        return False
    lhs = group.exp(params, stmt.g, tr.t)
    rhs = group.op(params, tr.a, group.exp(params, stmt.y, tr.c))
    return lhs == rhs


def _simulation_bound(params: GroupParams, secret: SetupSecret | None) -> int:
    if params.kind == group.RSA and secret is None:
        # t uniform below N is within (p+q)/N of uniform below phi(N)
        return params.modulus
    return group.exponent_modulus(params, secret)


def simulate(stmt: SigmaStatement, c: int, rng: random.Random, secret: SetupSecret | None = None,
             *, t: int | None = None) -> Transcript:
    """Accepting transcript for challenge ``c`` produced without the witness."""
    params = stmt.params
    if t is None:
        t = rng.randrange(_simulation_bound(params, secret))
    gt = group.exp(params, stmt.g, t)
    a = group.op(params, gt, group.inverse(params, group.exp(params, stmt.y, c)))
    return Transcript(a, c, t)


def extract(stmt: SigmaStatement, tr1: Transcript, tr2: Transcript,
            secret: SetupSecret | None = None, challenge_bits: int = CHALLENGE_BITS) -> int:
    """Recover ``x`` from two accepting transcripts sharing ``a``.

    ``x = (t - t') / (c - c')`` modulo the exponent modulus.  For RSA the
    modulus is ``phi(N)``, which is composite, so the gap may fail to be
    invertible; that raises :class:`NonInvertibleChallengeError`.
    """
    if tr1.a != tr2.a:
        raise ExtractionError("transcripts do not share the first message")
    if tr1.c == tr2.c:
        raise ExtractionError("transcripts share the challenge; nothing to extract")
    if not (verify(stmt, tr1, challenge_bits) and verify(stmt, tr2, challenge_bits)):
        raise ExtractionError("both transcripts must be accepting")
    m = group.exponent_modulus(stmt.params, secret)
    gap = (tr1.c - tr2.c) % m
    if math.gcd(gap, m) != 1:
        raise NonInvertibleChallengeError("challenge gap shares a factor with the exponent modulus")
    return (tr1.t - tr2.t) * pow(gap, -1, m) % m


def transcript_size(params: GroupParams) -> int:
    return params.element_byte_len + CHALLENGE_BYTES + params.scalar_byte_len


def encode_transcript(params: GroupParams, tr: Transcript) -> bytes:
    """``a ‖ c (16 bytes, big-endian) ‖ t``."""
    return (group.encode_element(params, tr.a)
            + tr.c.to_bytes(CHALLENGE_BYTES, "big")
            + group.encode_scalar(params, tr.t))


def decode_transcript(params: GroupParams, data: bytes) -> Transcript:
    if len(data) != transcript_size(params):
        raise DecodeError(f"transcript must be {transcript_size(params)} bytes, got {len(data)}")
    el = params.element_byte_len
    a = group.decode_element(params, data[:el])
    c = int.from_bytes(data[el:el + CHALLENGE_BYTES], "big")
    t = group.decode_scalar(params, data[el + CHALLENGE_BYTES:])
    return Transcript(a, c, t)
