"""Set-membership proofs over committed sets.

A set ``S = {x_1, .., x_n}`` of scalars is committed as ``y_i = g^{x_i}``
together with the aggregate ``y = y_1 * .. * y_n``.  Two proof modes exist:

``aggregate``
    A single Schnorr transcript for the statement ``g^X = y`` with
    ``X = sum(x_i)``.  Its size and verification cost do not depend on
    ``n``, but producing it requires knowing every element: it proves
    knowledge of the aggregate exponent rather than of one member.
``or``
    An ``n``-branch OR proof that the prover knows the exponent of one of
    the ``y_i``, hiding which.  This is a real membership proof; it grows
    linearly in ``n``.

Both modes are non-interactive by default (Fiat-Shamir).  Passing a
``challenge_source`` callable instead produces an interactive transcript
where the recorded challenge came from that callable.

Element commitments are kept sorted by their encoding so that the same set
always yields the same commitment, however it was built.
"""

from __future__ import annotations

import bisect
import hashlib
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

from . import group, orproof, sigma
from .errors import (
    DecodeError,
    DuplicateElementError,
    ElementMembershipError,
    EmptySetError,
    MalformedProofError,
    ParameterError,
    ParamsMismatchError,
)
from .group import Element, GroupParams, SetupSecret
from .orproof import ORStatement, ORTranscript, ORWitness
from .sigma import CHALLENGE_BITS, SigmaStatement, SigmaWitness, Transcript

AGGREGATE = "aggregate"
OR = "or"
INTERACTIVE = "interactive-recorded"
FIAT_SHAMIR = "fiat-shamir"

DEFAULT_LABEL = b"zkset/set-membership/v1"
BATCH_RANDOMIZER_BITS = 128

_MODE_TAGS = {AGGREGATE: 1, OR: 2}
_KIND_TAGS = {INTERACTIVE: 1, FIAT_SHAMIR: 2}
_FS_TAG = b"zkset/fiat-shamir/v1"
_KEY_FORMAT = "zkset-prover-key/1"


@dataclass(frozen=True)
class SetCommitment:
    """Public commitment to a set.

    ``element_commitments`` may be ``None`` when the commitment was loaded
    without its element list; such a commitment still verifies
    aggregate-mode proofs.
    """

    params: GroupParams
    n: int
    aggregate: Element
    element_commitments: tuple | None = None

    def is_consistent(self) -> bool:
        if self.element_commitments is None:
            return True
        return (len(self.element_commitments) == self.n
                and group.fold(self.params, self.element_commitments) == self.aggregate)

    def without_elements(self) -> "SetCommitment":
        return replace(self, element_commitments=None)


@dataclass(frozen=True)
class ProverKey:
    """Prover-side secrets; ``elements[i]`` opens ``element_commitments[i]``."""

    params: GroupParams
    elements: tuple = field(repr=False)
    aggregate_witness: int = field(repr=False)
    secret: SetupSecret | None = field(default=None, repr=False)

    @property
    def exponent_modulus(self) -> int:
        return group.exponent_modulus(self.params, self.secret)

    def index(self, x: int) -> int:
        x %= self.exponent_modulus
        try:
            return self.elements.index(x)
        except ValueError:
            raise ElementMembershipError("value is not in the committed set") from None


@dataclass(frozen=True)
class MembershipProof:
    mode: str
    challenge_kind: str
    params: GroupParams
    payload: Transcript | ORTranscript

    def to_bytes(self) -> bytes:
        return encode_proof(self)

    @classmethod
    def from_bytes(cls, data: bytes) -> "MembershipProof":
        return decode_proof(data)


@dataclass(frozen=True)
class BatchJob:
    """Aggregate-mode proofs to check together; all over one group."""

    entries: tuple
    randomizer_bits: int = BATCH_RANDOMIZER_BITS

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))


# -- setup ------------------------------------------------------------------

def _exp_chunk(params: GroupParams, xs: list[int]) -> list[Element]:
    g = params.generator
    return [group.exp(params, g, x) for x in xs]


def commit_elements(params: GroupParams, xs: Sequence[int], workers: int = 1) -> list[Element]:
    """``g^x`` for every ``x``, optionally spread over worker processes.

    The result does not depend on ``workers``.
    """
    xs = list(xs)
    if workers <= 1 or len(xs) < 2 * workers:
        return _exp_chunk(params, xs)
    size = -(-len(xs) // workers)
    chunks = [xs[i:i + size] for i in range(0, len(xs), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_exp_chunk, [params] * len(chunks), chunks)
        return [y for part in parts for y in part]


def _sort_key(params: GroupParams):
    def key(pair):
        return group.encode_element(params, pair[1]), pair[0]
    return key


def setup(params: GroupParams, elements: Iterable[int], secret: SetupSecret | None = None,
          *, workers: int = 1) -> tuple[SetCommitment, ProverKey]:
    """Commit to a set of scalars.  Returns ``(commitment, prover_key)``."""
    if params.kind == group.RSA and secret is None:
        raise group.MissingSetupSecretError("RSA setup needs the setup secret")
    m = group.exponent_modulus(params, secret)
    xs = []
    for x in elements:
        if not isinstance(x, int) or x < 0:
            raise ParameterError(f"set elements must be non-negative integers, got {x!r}")
        xs.append(x % m)
    if not xs:
        raise EmptySetError("cannot commit to an empty set")
    if len(set(xs)) != len(xs):
        raise DuplicateElementError("set contains a repeated element")
    ys = commit_elements(params, xs, workers)
    pairs = sorted(zip(xs, ys), key=_sort_key(params))
    xs = tuple(p[0] for p in pairs)
    ys = tuple(p[1] for p in pairs)
    commitment = SetCommitment(params, len(ys), group.fold(params, ys), ys)
    key = ProverKey(params, xs, sum(xs) % m, secret)
    return commitment, key


def add_element(commitment: SetCommitment, key: ProverKey, x_new: int) -> tuple[SetCommitment, ProverKey]:
    """Insert one element, updating the aggregate without a full rebuild."""
    params = commitment.params
    m = key.exponent_modulus
    x_new %= m
    if x_new in key.elements:
        raise ElementMembershipError("element already in the set")
    y_new = group.exp(params, params.generator, x_new)
    aggregate = group.op(params, commitment.aggregate, y_new)
    pairs = list(zip(key.elements, commitment.element_commitments or (None,) * commitment.n))
    keyf = _sort_key(params)
    if commitment.element_commitments is not None:
        pos = bisect.bisect_left([keyf(p) for p in pairs], keyf((x_new, y_new)))
        pairs.insert(pos, (x_new, y_new))
        ys = tuple(p[1] for p in pairs)
    else:
        pairs.append((x_new, None))
        ys = None
    new_c = SetCommitment(params, commitment.n + 1, aggregate, ys)
    new_k = ProverKey(params, tuple(p[0] for p in pairs), (key.aggregate_witness + x_new) % m, key.secret)
    return new_c, new_k


def remove_element(commitment: SetCommitment, key: ProverKey, x: int) -> tuple[SetCommitment, ProverKey]:
    """Inverse of :func:`add_element`."""
    params = commitment.params
    m = key.exponent_modulus
    i = key.index(x)
    x = key.elements[i]
    if commitment.n == 1:
        raise EmptySetError("removing the last element would empty the set")
    if commitment.element_commitments is not None:
        y = commitment.element_commitments[i]
        ys = commitment.element_commitments[:i] + commitment.element_commitments[i + 1:]
    else:
        y = group.exp(params, params.generator, x)
        ys = None
    aggregate = group.op(params, commitment.aggregate, group.inverse(params, y))
    new_c = SetCommitment(params, commitment.n - 1, aggregate, ys)
    new_k = ProverKey(params, key.elements[:i] + key.elements[i + 1:],
                      (key.aggregate_witness - x) % m, key.secret)
    return new_c, new_k


# -- challenges ---------------------------------------------------------------

def fiat_shamir_challenge(params: GroupParams, label: bytes, statement: Sequence[Element],
                          announcements: Sequence[Element], bits: int = CHALLENGE_BITS) -> int:
    """Low ``bits`` bits of SHA-256 over the length-prefixed transcript."""
    h = hashlib.sha256()

    def absorb(b: bytes) -> None:
        h.update(len(b).to_bytes(4, "big"))
        h.update(b)

    absorb(_FS_TAG)
    absorb(bytes(label))
    absorb(group.encode_header(params))
    absorb(len(statement).to_bytes(4, "big"))
    for e in statement:
        absorb(group.encode_element(params, e))
    absorb(len(announcements).to_bytes(4, "big"))
    for e in announcements:
        absorb(group.encode_element(params, e))
    return int.from_bytes(h.digest()[-16:], "big") & ((1 << bits) - 1)


def _challenge(params, label, statement, challenge_source, bits):
    if challenge_source is None:
        return FIAT_SHAMIR, lambda ann: fiat_shamir_challenge(params, label, statement, ann, bits)
    return INTERACTIVE, challenge_source


# -- proving ------------------------------------------------------------------

def prove_aggregate(commitment: SetCommitment, key: ProverKey, rng: random.Random | None = None, *,
                    challenge_source: Callable[[Sequence[Element]], int] | None = None,
                    label: bytes = DEFAULT_LABEL, challenge_bits: int = CHALLENGE_BITS,
                    nonce: int | None = None) -> MembershipProof:
    """Constant-size proof of knowledge of ``sum(x_i)`` for the aggregate."""
    params = commitment.params
    rng = rng or random.SystemRandom()
    stmt = SigmaStatement(params, params.generator, commitment.aggregate)
    kind, source = _challenge(params, label, [commitment.aggregate], challenge_source, challenge_bits)
    state = sigma.commit(stmt, rng, key.secret, r=nonce)
    c = source([state.a])
    t = sigma.respond(state, SigmaWitness(key.aggregate_witness), c)
    return MembershipProof(AGGREGATE, kind, params, Transcript(state.a, c, t))


def prove_or(commitment: SetCommitment, member_index: int, member_value: int,
             rng: random.Random | None = None, *, secret: SetupSecret | None = None,
             challenge_source: Callable[[Sequence[Element]], int] | None = None,
             label: bytes = DEFAULT_LABEL, challenge_bits: int = CHALLENGE_BITS) -> MembershipProof:
    """OR proof that the prover opens ``element_commitments[member_index]``."""
    params = commitment.params
    ys = _require_elements(commitment)
    if not 0 <= member_index < len(ys):
        raise ParameterError(f"member index {member_index} outside 0..{len(ys) - 1}")
    rng = rng or random.SystemRandom()
    stmt = ORStatement(params, params.generator, ys)
    kind, source = _challenge(params, label, ys, challenge_source, challenge_bits)
    tr = orproof.or_prove(stmt, ORWitness(member_index, member_value), source, rng, secret, challenge_bits)
    return MembershipProof(OR, kind, params, tr)


def _require_elements(commitment: SetCommitment) -> tuple:
    if commitment.element_commitments is None:
        raise ParameterError("OR-mode proofs need the element commitments, not just the aggregate")
    return commitment.element_commitments


# -- verification -------------------------------------------------------------

def verify(commitment: SetCommitment, proof: MembershipProof, *, label: bytes = DEFAULT_LABEL,
           challenge_bits: int = CHALLENGE_BITS) -> bool:
    """Check a proof against a commitment.

    Aggregate mode costs two exponentiations and one group operation for
    any set size.
    """
    params = commitment.params
    if proof.params != params:
        raise ParamsMismatchError("proof and commitment use different groups")
    if proof.mode == AGGREGATE:
        tr = proof.payload
        if not isinstance(tr, Transcript):
            raise MalformedProofError("aggregate proof without a Sigma transcript")
        if proof.challenge_kind == FIAT_SHAMIR:
            if tr.c != fiat_shamir_challenge(params, label, [commitment.aggregate], [tr.a], challenge_bits):
                return False
        return sigma.verify(SigmaStatement(params, params.generator, commitment.aggregate), tr, challenge_bits)
    if proof.mode == OR:
        tr = proof.payload
        if not isinstance(tr, ORTranscript):
            raise MalformedProofError("OR proof without an OR transcript")
        ys = _require_elements(commitment)
        stmt = ORStatement(params, params.generator, ys)
        if tr.n != stmt.n:
            raise MalformedProofError(f"proof has {tr.n} branches, set has {stmt.n} elements")
        if proof.challenge_kind == FIAT_SHAMIR:
            ann = [br.a for br in tr.branches]
            if tr.c != fiat_shamir_challenge(params, label, ys, ann, challenge_bits):
                return False
        return orproof.or_verify(stmt, tr, challenge_bits)
    raise MalformedProofError(f"unknown proof mode {proof.mode!r}")


def batch_verify(batch: BatchJob | Sequence[tuple[SetCommitment, MembershipProof]],
                 rng: random.Random | None = None, *, label: bytes = DEFAULT_LABEL,
                 challenge_bits: int = CHALLENGE_BITS) -> bool:
    """Verify many aggregate-mode proofs with one random linear combination.

    Checks ``g^(sum rho_j t_j) == prod a_j^rho_j * y_j^(rho_j c_j)`` for
    random 128-bit ``rho_j``.  Proofs against the same aggregate share one
    exponentiation of it.
    """
    if not isinstance(batch, BatchJob):
        batch = BatchJob(batch)
    if not batch.entries:
        raise ParameterError("empty batch")
    rng = rng or random.SystemRandom()
    params = batch.entries[0][0].params
    g = params.generator
    t_sum = 0
    bases: list[Element] = []
    exps: list[int] = []
    y_exps: dict = {}
    for commitment, proof in batch.entries:
        if commitment.params != params or proof.params != params:
            raise ParamsMismatchError("batch mixes groups")
        if proof.mode != AGGREGATE:
            raise ParameterError("batch verification covers aggregate-mode proofs only")
        tr = proof.payload
        if not (0 <= tr.c < (1 << challenge_bits) and 0 <= tr.t < params.scalar_bound):
            return False
        if proof.challenge_kind == FIAT_SHAMIR:
            if tr.c != fiat_shamir_challenge(params, label, [commitment.aggregate], [tr.a], challenge_bits):
                return False
        rho = rng.randrange(1, 1 << batch.randomizer_bits)
        t_sum += rho * tr.t
        bases.append(tr.a)
        exps.append(rho)
        y = commitment.aggregate
        y_exps[y] = y_exps.get(y, 0) + rho * tr.c
    for y, e in y_exps.items():
        bases.append(y)
        exps.append(e)
    return group.exp(params, g, t_sum) == group.multi_exp(params, bases, exps)


# -- wire formats -------------------------------------------------------------

def encode_commitment(commitment: SetCommitment, include_elements: bool = True) -> bytes:
    """``header ‖ n (8 bytes) ‖ aggregate ‖ [element commitments]``."""
    params = commitment.params
    out = [group.encode_header(params), commitment.n.to_bytes(8, "big"),
           group.encode_element(params, commitment.aggregate)]
    if include_elements and commitment.element_commitments is not None:
        out += [group.encode_element(params, y) for y in commitment.element_commitments]
    return b"".join(out)


def decode_commitment(data: bytes) -> SetCommitment:
    params, pos = group.decode_header(data)
    el = params.element_byte_len
    if len(data) < pos + 8 + el:
        raise DecodeError("truncated commitment")
    n = int.from_bytes(data[pos:pos + 8], "big")
    pos += 8
    if n < 1:
        raise DecodeError("commitment to an empty set")
    aggregate = group.decode_element(params, data[pos:pos + el])
    pos += el
    rest = len(data) - pos
    if rest == 0:
        return SetCommitment(params, n, aggregate, None)
    if rest != n * el:
        raise DecodeError(f"element list has {rest} bytes, expected {n * el}")
    ys = tuple(group.decode_element(params, data[pos + i * el:pos + (i + 1) * el]) for i in range(n))
    return SetCommitment(params, n, aggregate, ys)


def encode_proof(proof: MembershipProof) -> bytes:
    """``mode tag ‖ challenge-kind tag ‖ header ‖ payload``."""
    head = bytes([_MODE_TAGS[proof.mode], _KIND_TAGS[proof.challenge_kind]]) + group.encode_header(proof.params)
    if proof.mode == AGGREGATE:
        return head + sigma.encode_transcript(proof.params, proof.payload)
    return head + orproof.encode_or_transcript(proof.params, proof.payload)


def decode_proof(data: bytes) -> MembershipProof:
    data = bytes(data)
    if len(data) < 2:
        raise DecodeError("truncated proof")
    modes = {v: k for k, v in _MODE_TAGS.items()}
    kinds = {v: k for k, v in _KIND_TAGS.items()}
    mode, kind = modes.get(data[0]), kinds.get(data[1])
    if mode is None or kind is None:
        raise DecodeError("unknown proof mode or challenge kind tag")
    params, pos = group.decode_header(data[2:])
    body = data[2 + pos:]
    if mode == AGGREGATE:
        payload = sigma.decode_transcript(params, body)
    else:
        payload = orproof.decode_or_transcript(params, body)
    return MembershipProof(mode, kind, params, payload)


def aggregate_proof_size(params: GroupParams) -> int:
    return 2 + len(group.encode_header(params)) + sigma.transcript_size(params)


def encode_prover_key(key: ProverKey) -> bytes:
    """JSON form of a prover key.  Contains secrets; keep it private."""
    doc = {
        "format": _KEY_FORMAT,
        "header": group.encode_header(key.params).hex(),
        "elements": [format(x, "x") for x in key.elements],
        "aggregate_witness": format(key.aggregate_witness, "x"),
    }
    if key.secret is not None:
        doc["rsa_p"] = format(key.secret.p, "x")
        doc["rsa_q"] = format(key.secret.q, "x")
    return json.dumps(doc, indent=1).encode()


def decode_prover_key(data: bytes) -> ProverKey:
    try:
        doc = json.loads(data)
        if doc.get("format") != _KEY_FORMAT:
            raise DecodeError("not a zkset prover key")
        params, _ = group.decode_header(bytes.fromhex(doc["header"]))
        secret = None
        if "rsa_p" in doc:
            secret = SetupSecret(int(doc["rsa_p"], 16), int(doc["rsa_q"], 16))
        elements = tuple(int(x, 16) for x in doc["elements"])
        witness = int(doc["aggregate_witness"], 16)
    except (ValueError, KeyError, TypeError) as exc:
        raise DecodeError(f"bad prover key: {exc}") from None
    return ProverKey(params, elements, witness, secret)
