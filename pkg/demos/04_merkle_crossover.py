"""Where a constant-size proof beats a Merkle path.

A binary SHA-256 path grows by 32 bytes per level; the aggregate proof
does not grow at all.  A Patricia trie path grows faster still.
"""

from zkset import group, merkle, setmember

leaves = [b"device-%d" % i for i in range(1000)]
tree = merkle.build(leaves)
proof = merkle.prove(tree, 123)
print(f"merkle n=1000: {len(proof.to_bytes())} bytes, verifies: {merkle.verify(tree.root, leaves[123], proof)}")

patricia = merkle.PatriciaCostModel()
for backend in group.CURVE_IDS:
    params, _ = group.make_group(backend)
    size = setmember.aggregate_proof_size(params)
    print(f"{backend:>13}: {size:>4} bytes, beats binary merkle from n={merkle.crossover_point(size):>4}, "
          f"patricia from n={patricia.crossover_point(size)}")
