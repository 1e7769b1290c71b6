"""Prove one committed element is yours without saying which.

OR composition runs one real Schnorr proof and simulates the rest.
Challenge shares must XOR to the verifier's challenge, so the prover
fixes every share except the one it can answer honestly.
"""

import random

from zkset import group, setmember

rng = random.Random(3)
params, _ = group.make_group("secp256r1")
ids = [group.hash_to_scalar(params, name.encode()) for name in ("alice", "bob", "carol", "dave")]
commitment, key = setmember.setup(params, ids)

i = key.index(group.hash_to_scalar(params, b"carol"))
proof = setmember.prove_or(commitment, i, key.elements[i], rng)
print(f"OR proof over {commitment.n} branches: {len(proof.to_bytes())} bytes")
print("verifies:", setmember.verify(commitment, proof))
shares = [br.c for br in proof.payload.branches]
print("every branch carries a challenge share; none marks the real one:")
for share in shares:
    print(f"  {share:032x}")

for n in (1, 8, 64):
    xs = [group.random_scalar(params, rng) for _ in range(n)]
    c, k = setmember.setup(params, xs)
    size = len(setmember.prove_or(c, 0, k.elements[0], rng).to_bytes())
    print(f"n={n:>2}: {size} bytes")
