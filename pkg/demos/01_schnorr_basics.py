"""Schnorr identification on a tiny group, then on Ed25519.

Walks through commit, challenge and response by hand, shows the
simulator producing an accepting transcript without the witness, and
pulls the witness back out of two transcripts that share a commitment.
"""

import random

from zkset import group, sigma
from zkset.sigma import SigmaStatement, SigmaWitness

rng = random.Random(1)

# g = 5 generates Z_23^*, which has 22 elements
toy = group.make_toy_group(23, 5)
x = 7
stmt = SigmaStatement.for_generator(toy, group.exp(toy, 5, x))
print(f"toy group: y = 5^{x} mod 23 = {stmt.y}")

state = sigma.commit(stmt, rng, r=3)
c = 4
t = sigma.respond(state, SigmaWitness(x), c)
tr = sigma.Transcript(state.a, c, t)
print(f"a = 5^3 = {state.a}, c = {c}, t = 3 + {c}*{x} mod 22 = {t}")
print("verifies:", sigma.verify(stmt, tr, challenge_bits=6))

fake = sigma.simulate(stmt, c, rng)
print(f"simulated transcript {fake} verifies: {sigma.verify(stmt, fake, challenge_bits=6)}")

params, _ = group.make_group("ed25519")
secret_x = group.random_scalar(params, rng)
stmt = SigmaStatement.for_generator(params, group.exp(params, params.generator, secret_x))
state = sigma.commit(stmt, rng)
c1, c2 = sigma.random_challenge(rng), sigma.random_challenge(rng)
tr1 = sigma.Transcript(state.a, c1, sigma.respond(state, SigmaWitness(secret_x), c1))
tr2 = sigma.Transcript(state.a, c2, sigma.respond(state, SigmaWitness(secret_x), c2))
print(f"\ned25519 transcript: {sigma.transcript_size(params)} bytes, verifies: {sigma.verify(stmt, tr1)}")
print("witness recovered from a forked pair:", sigma.extract(stmt, tr1, tr2) == secret_x)
