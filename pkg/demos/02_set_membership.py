"""Commit to a set of device identifiers and prove membership.

The aggregate proof stays the same size whatever the set size. It
shows that the prover knows openings for the whole set, but not which
element is theirs.
"""

import random

from zkset import group, setmember

rng = random.Random(2)
params, _ = group.make_group("ed25519")

for n in (1, 10, 1000):
    ids = [group.hash_to_scalar(params, b"device-%d" % i) for i in range(n)]
    commitment, key = setmember.setup(params, ids)
    proof = setmember.prove_aggregate(commitment, key, rng)
    print(f"n={n:>5}: proof {len(proof.to_bytes())} bytes, verifies: {setmember.verify(commitment, proof)}")

# the commitment can be updated in place and matches a fresh setup
commitment, key = setmember.setup(params, ids[:3])
commitment, key = setmember.add_element(commitment, key, ids[3])
commitment, key = setmember.remove_element(commitment, key, ids[0])
fresh, _ = setmember.setup(params, ids[1:4])
print("incremental update equals fresh setup:",
      setmember.encode_commitment(commitment) == setmember.encode_commitment(fresh))

# wire format round trip; a verifier needs only the aggregate for this mode
wire = setmember.encode_commitment(commitment, include_elements=False)
proof = setmember.decode_proof(setmember.prove_aggregate(commitment, key, rng).to_bytes())
print(f"aggregate-only commitment: {len(wire)} bytes, verifies:",
      setmember.verify(setmember.decode_commitment(wire), proof))
