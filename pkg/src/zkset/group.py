"""Cyclic groups used by the proof systems.

Three kinds of group sit behind one interface:

* ``ec-prime-order``: a named elliptic curve (``ed25519``, ``secp256r1``,
  ``secp384r1``, ``secp521r1``, ``bls12-381-g1``); elements are affine
  points, scalars live modulo the prime order ``q``.
* ``rsa``: the multiplicative group modulo an RSA modulus ``N``.  The
  exponent modulus ``phi(N)`` is secret and travels separately in a
  :class:`SetupSecret`; whoever holds it is a trusted party.
* ``toy-modular``: the subgroup generated by ``g`` in ``Z_p^*`` for a small
  prime ``p``, used to enumerate protocols exhaustively in tests.

Group elements are plain Python values (``int`` for modular groups, ``(x, y)``
tuples for curves, ``None`` for the Weierstrass point at infinity) and
scalars are ``int``.  Arithmetic goes through the module functions
:func:`exp`, :func:`op` and friends so that :func:`count_operations` can
observe it.
"""

from __future__ import annotations

import contextvars
import functools
import hashlib
import math
import random
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import gmpy2

from . import _ec
from .errors import (
    DecodeError,
    MissingSetupSecretError,
    ParameterError,
    UnsupportedBackendError,
)

EC = "ec-prime-order"
RSA = "rsa"
TOY = "toy-modular"

CURVE_IDS = ("ed25519", "secp256r1", "secp384r1", "secp521r1", "bls12-381-g1")
RSA_SIZES = (1024, 2048, 3072, 4096)
RSA_TEST_FLOOR = 64
TOY_LIMIT = 1 << 20

Element = Any

_HEADER_MAGIC = b"ZKG\x01"
_KIND_CODES = {EC: 1, RSA: 2, TOY: 3}
_CURVE_CODES = {name: i + 1 for i, name in enumerate(CURVE_IDS)}
_H2S_TAG = b"zkset/hash-to-scalar/v1"


class _ModularBackend:
    """Multiplication modulo ``m``; doubles as internal and public form."""

    identity = 1

    def __init__(self, modulus: int, order: int | None):
        self.modulus = modulus
        self.order = order
        self.element_byte_len = (modulus.bit_length() + 7) // 8

    def to_internal(self, a):
        return a

    def from_internal(self, a):
        return a

    def normalize_many(self, xs):
        return list(xs)

    def internal_identity(self):
        return 1

    def is_internal_identity(self, a) -> bool:
        return a == 1

    def add(self, a, b):
        return a * b % self.modulus

    madd = add

    def dbl(self, a):
        return a * a % self.modulus

    def neg(self, a):
        return pow(a, -1, self.modulus)

    def mul(self, a, k: int):
        return int(gmpy2.powmod(a, k, self.modulus))

    mul_internal = mul

    def is_element(self, a) -> bool:
        if not isinstance(a, int) or not 0 < a < self.modulus:
            return False
        if math.gcd(a, self.modulus) != 1:
            return False
        if self.order is not None:
            return pow(a, self.order, self.modulus) == 1
        return True

    def encode(self, a) -> bytes:
        return a.to_bytes(self.element_byte_len, "big")

    def decode(self, data: bytes):
        if len(data) != self.element_byte_len:
            raise DecodeError(f"expected {self.element_byte_len} bytes, got {len(data)}")
        a = int.from_bytes(data, "big")
        if not self.is_element(a):
            raise DecodeError("value is not an element of the group")
        return a


def _ec_is_element(curve, P) -> bool:
    if P is None:
        return isinstance(curve, _ec.WeierstrassCurve)
    if not (isinstance(P, tuple) and len(P) == 2):
        return False
    return curve.is_on_curve(P) and curve.in_subgroup(P)


@dataclass(frozen=True)
class GroupParams:
    """Public description of a cyclic group with a fixed generator.

    ``order`` is the public group order (``None`` for RSA, whose exponent
    group is secret); ``modulus`` is ``N`` for RSA, ``p`` for toy groups and
    ``None`` for curves.
    """

    kind: str
    generator: Element
    order: int | None
    modulus: int | None
    element_byte_len: int
    scalar_byte_len: int
    curve_id: str | None = None
    backend: Any = field(default=None, repr=False, compare=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_cache"] = {}
        return state

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)

    @property
    def identity(self) -> Element:
        return self.backend.identity

    @property
    def scalar_bound(self) -> int:
        """Exclusive upper bound of encodable scalars."""
        return self.order if self.order is not None else self.modulus

    @property
    def name(self) -> str:
        if self.kind == EC:
            return self.curve_id
        if self.kind == RSA:
            return f"rsa-{self.modulus.bit_length()}"
        return f"toy-{self.modulus}"


@dataclass(frozen=True)
class SetupSecret:
    """Factorisation of an RSA modulus; never part of any public artifact."""

    p: int = field(repr=False)
    q: int = field(repr=False)

    @property
    def n(self) -> int:
        return self.p * self.q

    @property
    def phi(self) -> int:
        return (self.p - 1) * (self.q - 1)


@dataclass(frozen=True)
class FixedBaseTable:
    """Precomputed ``base^(d * 2^(w*k))`` for every window ``k`` and digit ``d``."""

    params: GroupParams
    base: Element
    window_bits: int
    rows: tuple = field(repr=False)

    @property
    def max_bits(self) -> int:
        return self.window_bits * len(self.rows)


# -- operation counting -----------------------------------------------------

_counter: contextvars.ContextVar[Counter | None] = contextvars.ContextVar("zkset_counter", default=None)


@contextmanager
def count_operations():
    """Count calls to :func:`exp`, :func:`op` and :func:`multi_exp` in the block.

    >>> with count_operations() as ops:
    ...     ...
    >>> ops["exp"], ops["op"]
    """
    c: Counter = Counter()
    token = _counter.set(c)
    try:
        yield c
    finally:
        _counter.reset(token)


def _tick(name: str, k: int = 1) -> None:
    c = _counter.get()
    if c is not None:
        c[name] += k


# -- constructors -----------------------------------------------------------

_EC_PARAMS: dict[str, "GroupParams"] = {}


def make_ec_group(curve_id: str) -> GroupParams:
    """Group of the named curve with its standard base point.

    Parameters are shared per curve so their precomputed tables are too.
    """
    cached = _EC_PARAMS.get(curve_id)
    if cached is not None:
        return cached
    try:
        curve = _ec.CURVES[curve_id]
    except KeyError:
        raise UnsupportedBackendError(f"unknown curve {curve_id!r}; choose from {CURVE_IDS}") from None
    params = GroupParams(
        kind=EC,
        generator=curve.generator,
        order=curve.order,
        modulus=None,
        element_byte_len=curve.element_byte_len,
        scalar_byte_len=(curve.order.bit_length() + 7) // 8,
        curve_id=curve_id,
        backend=curve,
    )
    return _EC_PARAMS.setdefault(curve_id, params)


def _random_prime(bits: int, rng: random.Random) -> int:
    while True:
        # top two bits set so that the product of two has exactly 2*bits bits
        c = rng.getrandbits(bits) | (3 << (bits - 2)) | 1
        if gmpy2.is_prime(c, 40):
            return c


def make_rsa_group(bits: int, rng: random.Random | None = None, *, test_mode: bool = False):
    """Generate an RSA modulus of exactly ``bits`` bits and a random unit.

    Only the benchmarked sizes (1024 to 4096) are accepted unless
    ``test_mode`` is set, which allows anything down to 64 bits.
    Returns ``(params, secret)``.
    """
    if bits < RSA_TEST_FLOOR:
        raise ParameterError(f"RSA modulus below {RSA_TEST_FLOOR} bits")
    if bits not in RSA_SIZES and not test_mode:
        raise ParameterError(f"RSA size must be one of {RSA_SIZES} (or use test_mode)")
    if bits % 2:
        raise ParameterError("RSA size must be even")
    rng = rng or random.SystemRandom()
    while True:
        p = _random_prime(bits // 2, rng)
        q = _random_prime(bits // 2, rng)
        if p != q and (p * q).bit_length() == bits:
            return rsa_group_from_primes(p, q, rng)


def rsa_group_from_primes(p: int, q: int, rng: random.Random | None = None):
    """RSA group over ``N = p*q`` for caller-chosen primes (test use)."""
    if p == q or not (gmpy2.is_prime(p) and gmpy2.is_prime(q)):
        raise ParameterError("p and q must be distinct primes")
    if abs(p.bit_length() - q.bit_length()) > 1:
        raise ParameterError("p and q must have equal bit length")
    rng = rng or random.SystemRandom()
    n = p * q
    while True:
        g = rng.randrange(2, n - 1)
        if math.gcd(g, n) == 1:
            break
    return _rsa_params(n, g), SetupSecret(p, q)


def _rsa_params(n: int, g: int) -> GroupParams:
    backend = _ModularBackend(n, None)
    width = backend.element_byte_len
    return GroupParams(
        kind=RSA,
        generator=g,
        order=None,
        modulus=n,
        element_byte_len=width,
        scalar_byte_len=width,
        backend=backend,
    )


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _multiplicative_order(g: int, p: int) -> int:
    order = p - 1
    for f in _prime_factors(p - 1):
        while order % f == 0 and pow(g, order // f, p) == 1:
            order //= f
    return order


def make_toy_group(p: int, g: int) -> GroupParams:
    """Subgroup of ``Z_p^*`` generated by ``g``; small enough to enumerate."""
    if not (2 < p < TOY_LIMIT) or not gmpy2.is_prime(p):
        raise ParameterError(f"toy modulus must be a prime below 2^20, got {p}")
    if not 0 < g < p:
        raise ParameterError(f"{g} is not a unit modulo {p}")
    if g == 1:
        raise ParameterError("generator must not be the identity")
    order = _multiplicative_order(g, p)
    backend = _ModularBackend(p, order)
    return GroupParams(
        kind=TOY,
        generator=g,
        order=order,
        modulus=p,
        element_byte_len=backend.element_byte_len,
        scalar_byte_len=(order.bit_length() + 7) // 8,
        backend=backend,
    )


def make_group(name: str, rng: random.Random | None = None):
    """Build a group from a backend id such as ``ed25519`` or ``rsa-2048``.

    Returns ``(params, secret)``; ``secret`` is ``None`` except for RSA.
    """
    if name.startswith("rsa-"):
        try:
            bits = int(name[4:])
        except ValueError:
            raise UnsupportedBackendError(f"bad RSA backend id {name!r}") from None
        return make_rsa_group(bits, rng, test_mode=bits not in RSA_SIZES)
    if name.startswith("toy-"):
        p, _, g = name[4:].partition("-")
        try:
            p, g = int(p), int(g) if g else 5
        except ValueError:
            raise UnsupportedBackendError(f"bad toy backend id {name!r}") from None
        return make_toy_group(p, g), None
    return make_ec_group(name), None


# -- arithmetic -------------------------------------------------------------

def exponent_modulus(params: GroupParams, secret: SetupSecret | None = None) -> int:
    """Modulus for exponent arithmetic: ``q`` or, for RSA, ``phi(N)``."""
    if params.kind == RSA:
        if secret is None:
            raise MissingSetupSecretError("RSA exponent arithmetic needs phi(N) from the setup secret")
        if secret.n != params.modulus:
            raise ParameterError("setup secret belongs to a different modulus")
        return secret.phi
    return params.order


def is_element(params: GroupParams, a: Element) -> bool:
    b = params.backend
    if params.kind == EC:
        return _ec_is_element(b, a)
    return b.is_element(a)


def _reduce(params: GroupParams, s: int) -> int:
    if s < 0:
        if params.order is None:
            raise ParameterError("negative exponent in a group of unknown order")
        return s % params.order
    if params.order is not None and s >= params.order:
        return s % params.order
    return s


def _generator_table(params: GroupParams) -> FixedBaseTable:
    table = params._cache.get("gtable")
    if table is None:
        window = 8 if params.kind == EC else 5
        table = precompute_base_table(params, params.generator, window)
        params._cache["gtable"] = table
    return table


def exp(params: GroupParams, base: Element, s: int) -> Element:
    """``base`` raised to ``s`` (scalar multiplication on curves)."""
    _tick("exp")
    s = _reduce(params, s)
    if base == params.generator and params.kind != TOY:
        table = _generator_table(params)
        if s.bit_length() <= table.max_bits:
            return _table_exp(table, s)
    return params.backend.mul(base, s)


def op(params: GroupParams, a: Element, b: Element) -> Element:
    """The group operation (modular product or point addition)."""
    _tick("op")
    be = params.backend
    return be.from_internal(be.add(be.to_internal(a), be.to_internal(b)))


def inverse(params: GroupParams, a: Element) -> Element:
    return params.backend.neg(a)


def fold(params: GroupParams, elements: Iterable[Element]) -> Element:
    """Group-operation fold of ``elements`` (the identity for none)."""
    be = params.backend
    acc = be.internal_identity()
    k = -1
    for k, e in enumerate(elements):
        acc = be.madd(acc, e)
    _tick("op", max(k, 0))
    return be.from_internal(acc)


def multi_exp(params: GroupParams, bases: Sequence[Element], scalars: Sequence[int]) -> Element:
    """Product of ``bases[i] ** scalars[i]`` with shared squarings."""
    _tick("multi_exp")
    if len(bases) != len(scalars):
        raise ParameterError("bases and scalars differ in length")
    be = params.backend
    w = 4
    mask = (1 << w) - 1
    scalars = [_reduce(params, s) for s in scalars]
    tables = []
    for b in bases:
        row = [be.internal_identity(), be.to_internal(b)]
        for _ in range(2, 1 << w):
            row.append(be.madd(row[-1], b))
        tables.append(row)
    nbits = max((s.bit_length() for s in scalars), default=0)
    acc = be.internal_identity()
    for k in range((nbits + w - 1) // w - 1, -1, -1):
        for _ in range(w):
            acc = be.dbl(acc)
        shift = k * w
        for s, row in zip(scalars, tables):
            d = (s >> shift) & mask
            if d:
                acc = be.add(acc, row[d])
    return be.from_internal(acc)


def precompute_base_table(params: GroupParams, base: Element, window_bits: int = 4) -> FixedBaseTable:
    """Fixed-base table for windowed exponentiation of ``base``."""
    if not 1 <= window_bits <= 8:
        raise ParameterError("window_bits must be between 1 and 8")
    be = params.backend
    nbits = params.scalar_bound.bit_length()
    nrows = max(1, (nbits + window_bits - 1) // window_bits)
    flat = []
    cur = be.to_internal(base)
    for _ in range(nrows):
        acc = be.internal_identity()
        row = [acc]
        for _ in range(1, 1 << window_bits):
            acc = be.add(acc, cur)
            row.append(acc)
        flat.extend(row)
        cur = be.add(acc, cur)
    affine = be.normalize_many(flat)
    width = 1 << window_bits
    rows = tuple(tuple(affine[i:i + width]) for i in range(0, len(affine), width))
    return FixedBaseTable(params, base, window_bits, rows)


def _table_exp(table: FixedBaseTable, s: int) -> Element:
    be = table.params.backend
    w = table.window_bits
    mask = (1 << w) - 1
    acc = be.internal_identity()
    k = 0
    while s:
        d = s & mask
        if d:
            acc = be.madd(acc, table.rows[k][d])
        s >>= w
        k += 1
    return be.from_internal(acc)


def exp_with_table(table: FixedBaseTable, s: int) -> Element:
    """Same result as ``exp(params, table.base, s)`` using the table."""
    s = _reduce(table.params, s)
    if s.bit_length() > table.max_bits:
        return table.params.backend.mul(table.base, s)
    return _table_exp(table, s)


def random_scalar(params: GroupParams, rng: random.Random, secret: SetupSecret | None = None) -> int:
    """Uniform scalar in ``[0, exponent modulus)``."""
    return rng.randrange(exponent_modulus(params, secret))


def hash_to_scalar(params: GroupParams, data: bytes) -> int:
    """Deterministically map bytes to a scalar below ``params.scalar_bound``.

    SHA-256 in counter mode, domain separated by a tag and the group header,
    expanded 128 bits past the bound before reduction.
    """
    bound = params.scalar_bound
    nbytes = (bound.bit_length() + 128 + 7) // 8
    prefix = _H2S_TAG + encode_header(params)
    out = b""
    counter = 0
    while len(out) < nbytes:
        out += hashlib.sha256(prefix + counter.to_bytes(4, "big") + bytes(data)).digest()
        counter += 1
    return int.from_bytes(out[:nbytes], "big") % bound


# -- encodings ----------------------------------------------------------------

def encode_element(params: GroupParams, a: Element) -> bytes:
    return params.backend.encode(a)


def decode_element(params: GroupParams, data: bytes) -> Element:
    return params.backend.decode(bytes(data))


def encode_scalar(params: GroupParams, s: int) -> bytes:
    if not 0 <= s < params.scalar_bound:
        raise ParameterError("scalar out of range for this group")
    return s.to_bytes(params.scalar_byte_len, "big")


def decode_scalar(params: GroupParams, data: bytes) -> int:
    if len(data) != params.scalar_byte_len:
        raise DecodeError(f"expected {params.scalar_byte_len} scalar bytes, got {len(data)}")
    s = int.from_bytes(data, "big")
    if s >= params.scalar_bound:
        raise DecodeError("scalar not reduced")
    return s


def encode_header(params: GroupParams) -> bytes:
    """Self-describing group header: kind, curve or modulus, generator."""
    cached = params._cache.get("header")
    if cached is not None:
        return cached
    out = _HEADER_MAGIC + bytes([_KIND_CODES[params.kind]])
    if params.kind == EC:
        out += bytes([_CURVE_CODES[params.curve_id]])
    else:
        m = params.modulus
        mb = m.to_bytes((m.bit_length() + 7) // 8, "big")
        out += len(mb).to_bytes(2, "big") + mb
    out += encode_element(params, params.generator)
    params._cache["header"] = out
    return out


@functools.lru_cache(maxsize=64)
def _modular_params(kind: str, m: int, g: int) -> GroupParams:
    # decoded files keep sharing one params object (and its tables)
    return make_toy_group(m, g) if kind == TOY else _rsa_params(m, g)


def decode_header(data: bytes) -> tuple[GroupParams, int]:
    """Parse a header from the front of ``data``; returns ``(params, length)``."""
    data = bytes(data)
    if data[:4] != _HEADER_MAGIC or len(data) < 6:
        raise DecodeError("missing group header")
    kinds = {v: k for k, v in _KIND_CODES.items()}
    kind = kinds.get(data[4])
    if kind is None:
        raise DecodeError(f"unknown group kind code {data[4]}")
    pos = 5
    if kind == EC:
        curves = {v: k for k, v in _CURVE_CODES.items()}
        curve_id = curves.get(data[pos])
        if curve_id is None:
            raise DecodeError(f"unknown curve code {data[pos]}")
        params = make_ec_group(curve_id)
        pos += 1
        end = pos + params.element_byte_len
        if data[pos:end] != encode_element(params, params.generator):
            raise DecodeError("header generator is not the standard base point")
        return params, end
    if len(data) < pos + 2:
        raise DecodeError("truncated group header")
    mlen = int.from_bytes(data[pos:pos + 2], "big")
    pos += 2
    if len(data) < pos + mlen:
        raise DecodeError("truncated group header")
    m = int.from_bytes(data[pos:pos + mlen], "big")
    pos += mlen
    end = pos + mlen
    if len(data) < end:
        raise DecodeError("truncated group header")
    g = int.from_bytes(data[pos:end], "big")
    try:
        params = _modular_params(kind, m, g)
    except ParameterError as exc:
        raise DecodeError(f"invalid group header: {exc}") from None
    if not is_element(params, g):
        raise DecodeError("header generator is not a unit")
    return params, end
