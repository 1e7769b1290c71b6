import random
from collections import Counter
from functools import reduce
from operator import xor

import pytest

from conftest import get_group
from zkset import group, orproof, sigma
from zkset.errors import DecodeError, MalformedProofError, ParameterError
from zkset.orproof import ORStatement, ORTranscript, ORWitness


class ScriptedRandom:
    """Replays fixed values for ``getrandbits`` and ``randrange`` in call order."""

    def __init__(self, values):
        self.values = list(values)

    def getrandbits(self, bits):
        return self.values.pop(0)

    def randrange(self, *args):
        return self.values.pop(0)


def _fixed(c):
    return lambda ann: c


def test_single_branch_is_plain_schnorr(toy):
    stmt = ORStatement(toy, 5, (20,))
    tr = orproof.or_prove(stmt, ORWitness(0, 5), _fixed(3), ScriptedRandom([4]))
    assert tr.c == 3 and tr.branches == (sigma.Transcript(4, 3, 19),)
    assert orproof.or_verify(stmt, tr)


def test_two_branch_toy_example(toy):
    stmt = ORStatement(toy, 5, (20, 8))
    r = random.Random(1)
    tr = orproof.or_prove(stmt, ORWitness(0, 5), _fixed(0xABCDEF), r)
    assert orproof.or_verify(stmt, tr)
    assert tr.branches[0].c ^ tr.branches[1].c == tr.c
    for i in range(2):
        assert sigma.verify(stmt.branch(i), tr.branches[i])
    tr2 = orproof.or_prove(stmt, ORWitness(1, 6), _fixed(0xABCDEF), r)
    assert orproof.or_verify(stmt, tr2)


def test_index_out_of_range(toy):
    stmt = ORStatement(toy, 5, (20, 8))
    with pytest.raises(ParameterError):
        orproof.or_prove(stmt, ORWitness(2, 5), _fixed(1), random.Random(1))
    with pytest.raises(ParameterError):
        ORStatement(toy, 5, ())


def test_wrong_witness_is_not_repaired(toy):
    stmt = ORStatement(toy, 5, (20, 8))
    tr = orproof.or_prove(stmt, ORWitness(0, 6), _fixed(5), random.Random(1))
    assert not orproof.or_verify(stmt, tr)


def test_branch_count_mismatch(toy):
    stmt = ORStatement(toy, 5, (20, 8))
    tr = orproof.or_prove(stmt, ORWitness(0, 5), _fixed(5), random.Random(1))
    with pytest.raises(MalformedProofError):
        orproof.or_verify(ORStatement(toy, 5, (20, 8, 2)), tr)


@pytest.mark.parametrize("name", ["toy-23-5", "ed25519", "rsa-1024"])
def test_completeness_every_position(name):
    params, secret = get_group(name)
    r = random.Random(3)
    m = group.exponent_modulus(params, secret)
    sizes = (1, 2, 3, 8) if params.kind != group.TOY else (1, 2, 3, 8, 64)
    for n in sizes:
        xs = [r.randrange(m) for _ in range(n)]
        stmt = ORStatement(params, params.generator, [group.exp(params, params.generator, x) for x in xs])
        for b in range(n):
            tr = orproof.or_prove(stmt, ORWitness(b, xs[b]), lambda ann: sigma.random_challenge(r), r, secret)
            assert orproof.or_verify(stmt, tr)
            assert reduce(xor, (br.c for br in tr.branches)) == tr.c


def test_size_is_linear(toy):
    r = random.Random(5)
    for n in (1, 2, 8, 64):
        stmt = ORStatement(toy, 5, [pow(5, i + 1, 23) for i in range(n)])
        tr = orproof.or_prove(stmt, ORWitness(0, 1), _fixed(9), r)
        data = orproof.encode_or_transcript(toy, tr)
        assert len(data) == n * sigma.transcript_size(toy) + 4 + 16 == orproof.or_transcript_size(toy, n)
        assert orproof.decode_or_transcript(toy, data) == tr


def test_decode_rejects_bad_lengths(toy):
    stmt = ORStatement(toy, 5, (20, 8))
    data = orproof.encode_or_transcript(toy, orproof.or_prove(stmt, ORWitness(0, 5), _fixed(1), random.Random(2)))
    for bad in (data[:10], data[:-1], data + b"\x00", (0).to_bytes(4, "big") + data[4:]):
        with pytest.raises(DecodeError):
            orproof.decode_or_transcript(toy, bad)


def test_random_response_mutation_rejects():
    params, _ = get_group("ed25519")
    r = random.Random(8)
    xs = [r.randrange(params.order) for _ in range(3)]
    stmt = ORStatement(params, params.generator, [group.exp(params, params.generator, x) for x in xs])
    tr = orproof.or_prove(stmt, ORWitness(1, xs[1]), _fixed(77), r)
    for _ in range(1000):
        i = r.randrange(3)
        br = tr.branches[i]
        t = r.randrange(params.order)
        if t == br.t:
            continue
        branches = list(tr.branches)
        branches[i] = sigma.Transcript(br.a, br.c, t)
        assert not orproof.or_verify(stmt, ORTranscript(tr.c, tuple(branches)))


def test_flipping_challenge_share_rejects(toy):
    stmt = ORStatement(toy, 5, (20, 8, 2))
    tr = orproof.or_prove(stmt, ORWitness(2, 2), _fixed(12345), random.Random(3))
    for i in range(3):
        for bit in range(128):
            branches = list(tr.branches)
            b = branches[i]
            branches[i] = sigma.Transcript(b.a, b.c ^ (1 << bit), b.t)
            assert not orproof.or_verify(stmt, ORTranscript(tr.c, tuple(branches)))


def _enumerate_transcripts(toy, stmt, witness, c, bits):
    out = Counter()
    for share in range(1 << bits):
        for t in range(22):
            for r in range(22):
                tr = orproof.or_prove(stmt, witness, _fixed(c), ScriptedRandom([share, t, r]), challenge_bits=bits)
                out[tr] += 1
    return out


def test_witness_position_hiding_exact(toy):
    # y_0 = 5^5 = 20, y_1 = 5^6 = 8
    stmt = ORStatement(toy, 5, (20, 8))
    bits = 3
    for c in (0, 5):
        left = _enumerate_transcripts(toy, stmt, ORWitness(0, 5), c, bits)
        right = _enumerate_transcripts(toy, stmt, ORWitness(1, 6), c, bits)
        assert left == right
        assert sum(left.values()) == (1 << bits) * 22 * 22


def test_composition_level_extraction(toy):
    r = random.Random(10)
    xs = [3, 7, 12]
    stmt = ORStatement(toy, 5, [pow(5, x, 23) for x in xs])
    # same randomness, different overall challenge: fork after the announcements
    seed_values = [r.getrandbits(20), r.randrange(22), r.getrandbits(20), r.randrange(22), r.randrange(22)]
    tr1 = orproof.or_prove(stmt, ORWitness(2, 12), _fixed(1), ScriptedRandom(seed_values), challenge_bits=20)
    tr2 = orproof.or_prove(stmt, ORWitness(2, 12), _fixed(4), ScriptedRandom(seed_values), challenge_bits=20)
    assert [b.a for b in tr1.branches] == [b.a for b in tr2.branches]
    differing = [i for i in range(3) if tr1.branches[i].c != tr2.branches[i].c]
    assert differing
    i = differing[0]
    x = sigma.extract(stmt.branch(i), tr1.branches[i], tr2.branches[i], challenge_bits=20)
    assert pow(5, x, 23) == stmt.ys[i]
