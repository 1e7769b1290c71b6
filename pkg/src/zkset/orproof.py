"""OR-composition of Sigma protocols over ``n`` branches.

The prover knows the discrete log of one ``y_b`` out of ``y_0 .. y_{n-1}``.
Every other branch is simulated with its own random challenge share; the
real branch takes ``c_b = c XOR (XOR of the other shares)`` so that all
shares XOR to the verifier's challenge ``c``.  Branch indices are 0-based.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce
from operator import xor
from typing import Callable, Sequence

from . import sigma
from .errors import DecodeError, MalformedProofError, ParameterError
from .group import Element, GroupParams, SetupSecret
from .sigma import CHALLENGE_BITS, CHALLENGE_BYTES, SigmaStatement, SigmaWitness, Transcript

# Receives the first messages a_0..a_{n-1}, returns the challenge c.
ChallengeSource = Callable[[Sequence[Element]], int]


@dataclass(frozen=True)
class ORStatement:
    params: GroupParams
    g: Element
    ys: tuple

    def __post_init__(self):
        if len(self.ys) < 1:
            raise ParameterError("an OR statement needs at least one branch")
        object.__setattr__(self, "ys", tuple(self.ys))

    @property
    def n(self) -> int:
        return len(self.ys)

    def branch(self, i: int) -> SigmaStatement:
        return SigmaStatement(self.params, self.g, self.ys[i])


@dataclass(frozen=True)
class ORWitness:
    index: int
    x: int


@dataclass(frozen=True)
class ORTranscript:
    c: int
    branches: tuple

    @property
    def n(self) -> int:
        return len(self.branches)


def or_prove(stmt: ORStatement, witness: ORWitness, challenge_source: ChallengeSource,
             rng: random.Random, secret: SetupSecret | None = None,
             challenge_bits: int = CHALLENGE_BITS) -> ORTranscript:
    """Prove knowledge of the witness for branch ``witness.index``.

    Non-witness challenge shares are drawn before ``challenge_source`` is
    asked for ``c``, as in the interactive protocol.  A witness that does
    not match its branch is not repaired; the proof will simply fail.
    """
    b = witness.index
    if not 0 <= b < stmt.n:
        raise ParameterError(f"witness index {b} outside 0..{stmt.n - 1}")
    sims: dict[int, Transcript] = {}
    for i in range(stmt.n):
        if i != b:
            ci = sigma.random_challenge(rng, challenge_bits)
            sims[i] = sigma.simulate(stmt.branch(i), ci, rng, secret)
    state = sigma.commit(stmt.branch(b), rng, secret)
    announcements = [state.a if i == b else sims[i].a for i in range(stmt.n)]
    c = challenge_source(announcements)
    cb = reduce(xor, (sims[i].c for i in sims), c)
    tb = sigma.respond(state, SigmaWitness(witness.x), cb)
    branches = tuple(Transcript(state.a, cb, tb) if i == b else sims[i] for i in range(stmt.n))
    return ORTranscript(c, branches)


def or_verify(stmt: ORStatement, tr: ORTranscript, challenge_bits: int = CHALLENGE_BITS) -> bool:
    """Shares XOR to ``c`` and every branch is an accepting transcript."""
    if tr.n != stmt.n:
        raise MalformedProofError(f"proof has {tr.n} branches, statement has {stmt.n}")
    if not 0 <= tr.c < (1 << challenge_bits):
        return False
    if reduce(xor, (br.c for br in tr.branches), 0) != tr.c:
        return False
    return all(sigma.verify(stmt.branch(i), br, challenge_bits) for i, br in enumerate(tr.branches))


def or_transcript_size(params: GroupParams, n: int) -> int:
    return 4 + CHALLENGE_BYTES + n * sigma.transcript_size(params)


def encode_or_transcript(params: GroupParams, tr: ORTranscript) -> bytes:
    """``n (4 bytes) ‖ c (16 bytes) ‖ n x (a_i ‖ c_i ‖ t_i)``."""
    parts = [tr.n.to_bytes(4, "big"), tr.c.to_bytes(CHALLENGE_BYTES, "big")]
    parts += [sigma.encode_transcript(params, br) for br in tr.branches]
    return b"".join(parts)


def decode_or_transcript(params: GroupParams, data: bytes) -> ORTranscript:
    if len(data) < 4 + CHALLENGE_BYTES:
        raise DecodeError("truncated OR transcript")
    n = int.from_bytes(data[:4], "big")
    if n < 1 or len(data) != or_transcript_size(params, n):
        raise DecodeError(f"OR transcript length {len(data)} does not match {n} branches")
    c = int.from_bytes(data[4:4 + CHALLENGE_BYTES], "big")
    w = sigma.transcript_size(params)
    base = 4 + CHALLENGE_BYTES
    branches = tuple(sigma.decode_transcript(params, data[base + i * w: base + (i + 1) * w]) for i in range(n))
    return ORTranscript(c, branches)
