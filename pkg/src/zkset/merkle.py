"""Binary Merkle tree used as the logarithmic-size baseline.

Leaves hash as ``SHA256(0x00 ‖ leaf)`` and inner nodes as
``SHA256(0x01 ‖ left ‖ right)``.  A layer with an odd number of nodes
pairs its last node with itself.

:data:`PATRICIA_TABLE` carries published average path lengths and proof
sizes of a Patricia-Merkle trie.  It is a reporting model only: nothing
here builds or verifies such a trie.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

from .errors import DecodeError, EmptySetError, ParameterError

DIGEST_BYTES = 32
PROOF_HEADER_BYTES = 16


def hash_leaf(leaf: bytes) -> bytes:
    return hashlib.sha256(b"\x00" + leaf).digest()


def hash_node(left: bytes, right: bytes) -> bytes:
    return hashlib.sha256(b"\x01" + left + right).digest()


@dataclass(frozen=True)
class MerkleTree:
    layers: tuple  # layers[0] = leaf hashes, layers[-1] = (root,)

    @property
    def n(self) -> int:
        return len(self.layers[0])

    @property
    def root(self) -> bytes:
        return self.layers[-1][0]


@dataclass(frozen=True)
class MerkleProof:
    index: int
    siblings: tuple
    n: int

    def to_bytes(self) -> bytes:
        """``n (8 bytes) ‖ index (8 bytes) ‖ sibling digests``, bottom-up."""
        return self.n.to_bytes(8, "big") + self.index.to_bytes(8, "big") + b"".join(self.siblings)

    @classmethod
    def from_bytes(cls, data: bytes) -> "MerkleProof":
        if len(data) < PROOF_HEADER_BYTES:
            raise DecodeError("truncated Merkle proof")
        n = int.from_bytes(data[:8], "big")
        index = int.from_bytes(data[8:16], "big")
        body = data[16:]
        if n < 1 or index >= n:
            raise DecodeError("Merkle proof index out of range")
        if len(body) != DIGEST_BYTES * path_length(n):
            raise DecodeError("Merkle proof has the wrong number of siblings")
        sib = tuple(body[i:i + DIGEST_BYTES] for i in range(0, len(body), DIGEST_BYTES))
        return cls(index, sib, n)


def path_length(n: int) -> int:
    """Siblings in a proof for an ``n``-leaf tree, ``ceil(log2 n)``."""
    if n < 1:
        raise ParameterError("tree needs at least one leaf")
    return (n - 1).bit_length()


def build(leaves: list[bytes]) -> MerkleTree:
    if not leaves:
        raise EmptySetError("cannot build a Merkle tree without leaves")
    layer = [hash_leaf(bytes(x)) for x in leaves]
    layers = [tuple(layer)]
    while len(layer) > 1:
        if len(layer) % 2:
            layer = layer + [layer[-1]]
        layer = [hash_node(layer[i], layer[i + 1]) for i in range(0, len(layer), 2)]
        layers.append(tuple(layer))
    return MerkleTree(tuple(layers))


def prove(tree: MerkleTree, index: int) -> MerkleProof:
    if not 0 <= index < tree.n:
        raise ParameterError(f"leaf index {index} outside 0..{tree.n - 1}")
    siblings = []
    i = index
    for layer in tree.layers[:-1]:
        j = i ^ 1
        siblings.append(layer[j] if j < len(layer) else layer[i])
        i >>= 1
    return MerkleProof(index, tuple(siblings), tree.n)


def verify(root: bytes, leaf: bytes, proof: MerkleProof) -> bool:
    """Recompute the root from ``leaf`` and the path; accept only on equality."""
    if not 0 <= proof.index < proof.n or len(proof.siblings) != path_length(proof.n):
        return False
    h = hash_leaf(bytes(leaf))
    i = proof.index
    for sib in proof.siblings:
        h = hash_node(sib, h) if i & 1 else hash_node(h, sib)
        i >>= 1
    return h == root


def proof_size_bytes(n: int, header_bytes: int = PROOF_HEADER_BYTES) -> int:
    return DIGEST_BYTES * path_length(n) + header_bytes


def crossover_point(constant_proof_bytes: float, header_bytes: int = PROOF_HEADER_BYTES) -> int:
    """Least ``n`` whose binary-tree proof is larger than the constant proof."""
    if constant_proof_bytes < header_bytes:
        return 1
    # path length L needed: 32*L + header > constant
    need = math.floor((constant_proof_bytes - header_bytes) / DIGEST_BYTES) + 1
    return 2 ** (need - 1) + 1


# (set size, avg path length, avg proof bytes) for a Patricia-Merkle trie
PATRICIA_TABLE = (
    (100, 2.33, 41.7),
    (1_000, 3.19, 489.05),
    (10_000, 4.04, 890.47),
    (100_000, 4.85, 1270.88),
    (1_000_000, 5.65, 1695.27),
    (10_000_000, 6.46, 2104.16),
    (100_000_000, 7.31, 2513.06),
    (300_000_000, 7.72, 2921.95),
)


@dataclass(frozen=True)
class PatriciaCostModel:
    """Piecewise-linear interpolation of a (set size, proof bytes) table.

    Below the first row the model runs linearly from ``(0, 0)``; above the
    last row it is undefined.
    """

    rows: tuple = PATRICIA_TABLE

    def proof_bytes(self, n: float) -> float:
        pts = [(0, 0.0)] + [(r[0], r[2]) for r in self.rows]
        for (n0, b0), (n1, b1) in zip(pts, pts[1:]):
            if n0 <= n <= n1:
                return b0 + (b1 - b0) * (n - n0) / (n1 - n0)
        raise ParameterError(f"set size {n} outside the table")

    def crossover_point(self, constant_proof_bytes: float) -> int | None:
        """Least integer ``n`` with interpolated size above the constant."""
        pts = [(0, 0.0)] + [(r[0], r[2]) for r in self.rows]
        for (n0, b0), (n1, b1) in zip(pts, pts[1:]):
            if b1 > constant_proof_bytes:
                if b0 > constant_proof_bytes:
                    return max(n0, 1)
                n = n0 + (constant_proof_bytes - b0) * (n1 - n0) / (b1 - b0)
                cand = max(math.floor(n) + 1, 1)
                while self.proof_bytes(cand) <= constant_proof_bytes:
                    cand += 1
                return cand
        return None
