"""Elliptic-curve arithmetic over prime fields.

Two curve shapes are covered: short Weierstrass curves (NIST P-256/384/521
and the BLS12-381 G1 subgroup) in Jacobian coordinates, and the Ed25519
twisted Edwards curve in extended coordinates.  Public points are affine
tuples ``(x, y)``; the Weierstrass point at infinity is ``None``.

Nothing here is constant time.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2

from .errors import DecodeError

_WINDOW = 4


def _inv(a: int, p: int) -> int:
    return int(gmpy2.invert(a, p))


def _batch_inverse(values: list[int], p: int) -> list[int]:
    """Montgomery's trick: one field inversion for the whole list."""
    prefix = []
    acc = 1
    for v in values:
        prefix.append(acc)
        acc = acc * v % p
    inv = _inv(acc, p)
    out = [0] * len(values)
    for i in range(len(values) - 1, -1, -1):
        out[i] = prefix[i] * inv % p
        inv = inv * values[i] % p
    return out


def _window_digits(k: int, w: int) -> list[int]:
    digits = []
    mask = (1 << w) - 1
    while k:
        digits.append(k & mask)
        k >>= w
    return digits


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 = x^3 + a x + b over F_p with a prime-order base point."""

    name: str
    p: int
    a: int
    b: int
    order: int
    gx: int
    gy: int
    cofactor: int = 1
    # "sec1" (0x02/0x03 prefix) or "zcash" (flag bits in the top byte).
    encoding: str = "sec1"

    def __post_init__(self):
        # hot-path field arithmetic runs on gmpy2 integers
        object.__setattr__(self, "_pz", gmpy2.mpz(self.p))

    @property
    def field_bytes(self) -> int:
        return (self.p.bit_length() + 7) // 8

    @property
    def element_byte_len(self) -> int:
        return self.field_bytes + (1 if self.encoding == "sec1" else 0)

    @property
    def generator(self):
        return (self.gx, self.gy)

    identity = None
    _INF = (1, 1, 0)

    # -- affine helpers -------------------------------------------------
    def is_on_curve(self, P) -> bool:
        if P is None:
            return True
        x, y = P
        p = self.p
        if not (0 <= x < p and 0 <= y < p):
            return False
        return (y * y - (x * x * x + self.a * x + self.b)) % p == 0

    def neg(self, P):
        if P is None:
            return None
        return (P[0], (-P[1]) % self.p)

    # -- Jacobian internals ---------------------------------------------
    def to_internal(self, P):
        if P is None:
            return self._INF
        return (P[0], P[1], 1)

    def from_internal(self, J):
        X, Y, Z = J
        if Z == 0:
            return None
        p = self.p
        zi = _inv(Z, p)
        zi2 = zi * zi % p
        return (int(X * zi2 % p), int(Y * zi2 * zi % p))

    def normalize_many(self, Js):
        p = self.p
        zs = [J[2] for J in Js if J[2] != 0]
        invs = iter(_batch_inverse(zs, p)) if zs else iter(())
        out = []
        for X, Y, Z in Js:
            if Z == 0:
                out.append(None)
                continue
            zi = next(invs)
            zi2 = zi * zi % p
            out.append((int(X * zi2 % p), int(Y * zi2 * zi % p)))
        return out

    def dbl(self, J):
        X, Y, Z = J
        if Z == 0 or Y == 0:
            return self._INF
        p = self._pz
        YY = Y * Y % p
        S = 4 * X * YY % p
        ZZ = Z * Z % p
        M = (3 * X * X + self.a * ZZ * ZZ) % p
        X3 = (M * M - 2 * S) % p
        Y3 = (M * (S - X3) - 8 * YY * YY) % p
        Z3 = 2 * Y * Z % p
        return (X3, Y3, Z3)

    def add(self, J1, J2):
        X1, Y1, Z1 = J1
        X2, Y2, Z2 = J2
        if Z1 == 0:
            return J2
        if Z2 == 0:
            return J1
        p = self._pz
        Z1Z1 = Z1 * Z1 % p
        Z2Z2 = Z2 * Z2 % p
        U1 = X1 * Z2Z2 % p
        U2 = X2 * Z1Z1 % p
        S1 = Y1 * Z2 * Z2Z2 % p
        S2 = Y2 * Z1 * Z1Z1 % p
        if U1 == U2:
            if S1 != S2:
                return self._INF
            return self.dbl(J1)
        H = (U2 - U1) % p
        R = (S2 - S1) % p
        HH = H * H % p
        HHH = H * HH % p
        V = U1 * HH % p
        X3 = (R * R - HHH - 2 * V) % p
        Y3 = (R * (V - X3) - S1 * HHH) % p
        Z3 = Z1 * Z2 * H % p
        return (X3, Y3, Z3)

    def madd(self, J, P):
        """Jacobian + affine."""
        if P is None:
            return J
        X1, Y1, Z1 = J
        if Z1 == 0:
            return (P[0], P[1], 1)
        p = self._pz
        x2, y2 = P
        Z1Z1 = Z1 * Z1 % p
        U2 = x2 * Z1Z1 % p
        S2 = y2 * Z1 * Z1Z1 % p
        if X1 == U2:
            if Y1 != S2:
                return self._INF
            return self.dbl(J)
        H = (U2 - X1) % p
        R = (S2 - Y1) % p
        HH = H * H % p
        HHH = H * HH % p
        V = X1 * HH % p
        X3 = (R * R - HHH - 2 * V) % p
        Y3 = (R * (V - X3) - Y1 * HHH) % p
        Z3 = Z1 * H % p
        return (X3, Y3, Z3)

    def internal_identity(self):
        return self._INF

    def is_internal_identity(self, J) -> bool:
        return J[2] == 0

    def mul(self, P, k: int):
        return self.from_internal(self.mul_internal(self.to_internal(P), k))

    def mul_internal(self, J, k: int):
        if k < 0:
            raise ValueError("negative scalar")
        if k == 0 or J[2] == 0:
            return self._INF
        # fixed 4-bit window, odd and even multiples precomputed
        table = [self._INF, J]
        for _ in range(2, 1 << _WINDOW):
            table.append(self.add(table[-1], J))
        acc = self._INF
        for d in reversed(_window_digits(k, _WINDOW)):
            for _ in range(_WINDOW):
                acc = self.dbl(acc)
            if d:
                acc = self.add(acc, table[d])
        return acc

    # -- encoding ---------------------------------------------------------
    def _sqrt(self, a: int):
        p = self.p
        # every supported Weierstrass prime is 3 mod 4
        r = pow(a, (p + 1) // 4, p)
        return r if r * r % p == a % p else None

    def in_subgroup(self, P) -> bool:
        if P is None:
            return True
        if self.cofactor == 1:
            return self.is_on_curve(P)
        return self.mul_internal(self.to_internal(P), self.order)[2] == 0

    def encode(self, P) -> bytes:
        fb = self.field_bytes
        if self.encoding == "sec1":
            if P is None:
                return bytes(fb + 1)
            return bytes([2 | (P[1] & 1)]) + P[0].to_bytes(fb, "big")
        if P is None:
            return bytes([0xC0]) + bytes(fb - 1)
        flags = 0x80 | (0x20 if P[1] > (self.p - 1) // 2 else 0)
        raw = bytearray(P[0].to_bytes(fb, "big"))
        raw[0] |= flags
        return bytes(raw)

    def decode(self, data: bytes):
        fb = self.field_bytes
        if len(data) != self.element_byte_len:
            raise DecodeError(f"{self.name}: expected {self.element_byte_len} bytes, got {len(data)}")
        if self.encoding == "sec1":
            if not any(data):
                return None
            tag = data[0]
            if tag not in (2, 3):
                raise DecodeError(f"{self.name}: bad point prefix {tag:#x}")
            x = int.from_bytes(data[1:], "big")
            sign = tag & 1
        else:
            top = data[0]
            if not top & 0x80:
                raise DecodeError(f"{self.name}: uncompressed form not accepted")
            if top & 0x40:
                if top != 0xC0 or any(data[1:]):
                    raise DecodeError(f"{self.name}: non-canonical infinity")
                return None
            sign = 1 if top & 0x20 else 0
            x = int.from_bytes(bytes([top & 0x1F]) + data[1:], "big")
        if x >= self.p:
            raise DecodeError(f"{self.name}: x coordinate not reduced")
        y = self._sqrt((x * x * x + self.a * x + self.b) % self.p)
        if y is None:
            raise DecodeError(f"{self.name}: x is not on the curve")
        if self.encoding == "sec1":
            if y & 1 != sign:
                y = self.p - y
        else:
            if (y > (self.p - 1) // 2) != bool(sign):
                y = self.p - y
        P = (x, y)
        if not self.in_subgroup(P):
            raise DecodeError(f"{self.name}: point outside the prime-order subgroup")
        return P


@dataclass(frozen=True)
class EdwardsCurve:
    """-x^2 + y^2 = 1 + d x^2 y^2 (a = -1) with the prime-order subgroup."""

    name: str
    p: int
    d: int
    order: int
    gx: int
    gy: int
    cofactor: int = 8

    def __post_init__(self):
        # hot-path field arithmetic runs on gmpy2 integers
        object.__setattr__(self, "_pz", gmpy2.mpz(self.p))

    @property
    def field_bytes(self) -> int:
        return 32

    @property
    def element_byte_len(self) -> int:
        return 32

    @property
    def generator(self):
        return (self.gx, self.gy)

    identity = (0, 1)

    def is_on_curve(self, P) -> bool:
        x, y = P
        p = self.p
        if not (0 <= x < p and 0 <= y < p):
            return False
        xx, yy = x * x % p, y * y % p
        return (-xx + yy - 1 - self.d * xx * yy) % p == 0

    def neg(self, P):
        return ((-P[0]) % self.p, P[1])

    def to_internal(self, P):
        x, y = P
        return (x, y, 1, x * y % self.p)

    def from_internal(self, E):
        X, Y, Z, _ = E
        p = self.p
        zi = _inv(Z, p)
        return (int(X * zi % p), int(Y * zi % p))

    def normalize_many(self, Es):
        p = self.p
        invs = _batch_inverse([E[2] for E in Es], p)
        return [(int(E[0] * zi % p), int(E[1] * zi % p)) for E, zi in zip(Es, invs)]

    def internal_identity(self):
        return (0, 1, 1, 0)

    def is_internal_identity(self, E) -> bool:
        X, Y, Z, _ = E
        return X % self.p == 0 and (Y - Z) % self.p == 0

    def add(self, E1, E2):
        p = self._pz
        X1, Y1, Z1, T1 = E1
        X2, Y2, Z2, T2 = E2
        A = (Y1 - X1) * (Y2 - X2) % p
        B = (Y1 + X1) * (Y2 + X2) % p
        C = 2 * self.d * T1 * T2 % p
        D = 2 * Z1 * Z2 % p
        E, F, G, H = B - A, D - C, D + C, B + A
        return (E * F % p, G * H % p, F * G % p, E * H % p)

    def madd(self, E1, P):
        x2, y2 = P
        return self.add(E1, (x2, y2, 1, x2 * y2 % self.p))

    def dbl(self, E1):
        p = self._pz
        X1, Y1, Z1, _ = E1
        A = X1 * X1 % p
        B = Y1 * Y1 % p
        C = 2 * Z1 * Z1 % p
        H = A + B
        E = (H - (X1 + Y1) * (X1 + Y1)) % p
        G = A - B
        F = C + G
        return (E * F % p, G * H % p, F * G % p, E * H % p)

    def mul(self, P, k: int):
        return self.from_internal(self.mul_internal(self.to_internal(P), k))

    def mul_internal(self, E, k: int):
        if k < 0:
            raise ValueError("negative scalar")
        acc = self.internal_identity()
        if k == 0:
            return acc
        table = [acc, E]
        for _ in range(2, 1 << _WINDOW):
            table.append(self.add(table[-1], E))
        for d in reversed(_window_digits(k, _WINDOW)):
            for _ in range(_WINDOW):
                acc = self.dbl(acc)
            if d:
                acc = self.add(acc, table[d])
        return acc

    def in_subgroup(self, P) -> bool:
        return self.is_internal_identity(self.mul_internal(self.to_internal(P), self.order))

    def encode(self, P) -> bytes:
        x, y = P
        return (y | ((x & 1) << 255)).to_bytes(32, "little")

    def decode(self, data: bytes):
        if len(data) != 32:
            raise DecodeError(f"{self.name}: expected 32 bytes, got {len(data)}")
        p = self.p
        v = int.from_bytes(data, "little")
        sign = v >> 255
        y = v & ((1 << 255) - 1)
        if y >= p:
            raise DecodeError(f"{self.name}: y coordinate not reduced")
        u = (y * y - 1) % p
        w = (self.d * y * y + 1) % p
        x = u * pow(w, 3, p) * pow(u * pow(w, 7, p), (p - 5) // 8, p) % p
        if (w * x * x - u) % p != 0:
            x = x * pow(2, (p - 1) // 4, p) % p
            if (w * x * x - u) % p != 0:
                raise DecodeError(f"{self.name}: y is not on the curve")
        if x == 0 and sign:
            raise DecodeError(f"{self.name}: non-canonical encoding of x = 0")
        if x & 1 != sign:
            x = p - x
        P = (x, y)
        if not self.in_subgroup(P):
            raise DecodeError(f"{self.name}: point outside the prime-order subgroup")
        return P


def _p384() -> int:
    return 2**384 - 2**128 - 2**96 + 2**32 - 1


SECP256R1 = WeierstrassCurve(
    name="secp256r1",
    p=2**256 - 2**224 + 2**192 + 2**96 - 1,
    a=2**256 - 2**224 + 2**192 + 2**96 - 1 - 3,
    b=0x5AC635D8AA3A93E7B3EBBD55769886BC651D06B0CC53B0F63BCE3C3E27D2604B,
    order=0xFFFFFFFF00000000FFFFFFFFFFFFFFFFBCE6FAADA7179E84F3B9CAC2FC632551,
    gx=0x6B17D1F2E12C4247F8BCE6E563A440F277037D812DEB33A0F4A13945D898C296,
    gy=0x4FE342E2FE1A7F9B8EE7EB4A7C0F9E162BCE33576B315ECECBB6406837BF51F5,
)

SECP384R1 = WeierstrassCurve(
    name="secp384r1",
    p=_p384(),
    a=_p384() - 3,
    b=0xB3312FA7E23EE7E4988E056BE3F82D19181D9C6EFE8141120314088F5013875AC656398D8A2ED19D2A85C8EDD3EC2AEF,
    order=0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFC7634D81F4372DDF581A0DB248B0A77AECEC196ACCC52973,
    gx=0xAA87CA22BE8B05378EB1C71EF320AD746E1D3B628BA79B9859F741E082542A385502F25DBF55296C3A545E3872760AB7,
    gy=0x3617DE4A96262C6F5D9E98BF9292DC29F8F41DBD289A147CE9DA3113B5F0B8C00A60B1CE1D7E819D7A431D7C90EA0E5F,
)

SECP521R1 = WeierstrassCurve(
    name="secp521r1",
    p=2**521 - 1,
    a=2**521 - 1 - 3,
    b=0x0051953EB9618E1C9A1F929A21A0B68540EEA2DA725B99B315F3B8B489918EF109E156193951EC7E937B1652C0BD3BB1BF073573DF883D2C34F1EF451FD46B503F00,
    order=0x01FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFA51868783BF2F966B7FCC0148F709A5D03BB5C9B8899C47AEBB6FB71E91386409,
    gx=0x00C6858E06B70404E9CD9E3ECB662395B4429C648139053FB521F828AF606B4D3DBAA14B5E77EFE75928FE1DC127A2FFA8DE3348B3C1856A429BF97E7E31C2E5BD66,
    gy=0x011839296A789A3BC0045C8A5FB42C7D1BD998F54449579B446817AFBD17273E662C97EE72995EF42640C550B9013FAD0761353C7086A272C24088BE94769FD16650,
)

# G1 of BLS12-381; only the prime-order subgroup is exposed.
BLS12_381_G1 = WeierstrassCurve(
    name="bls12-381-g1",
    p=0x1A0111EA397FE69A4B1BA7B6434BACD764774B84F38512BF6730D2A0F6B0F6241EABFFFEB153FFFFB9FEFFFFFFFFAAAB,
    a=0,
    b=4,
    order=0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001,
    gx=0x17F1D3A73197D7942695638C4FA9AC0FC3688C4F9774B905A14E3A3F171BAC586C55E83FF97A1AEFFB3AF00ADB22C6BB,
    gy=0x08B3F481E3AAA0F1A09E30ED741D8AE4FCF5E095D5D00AF600DB18CB2C04B3EDD03CC744A2888AE40CAA232946C5E7E1,
    cofactor=0x396C8C005555E1568C00AAAB0000AAAB,
    encoding="zcash",
)

_ED_P = 2**255 - 19

ED25519 = EdwardsCurve(
    name="ed25519",
    p=_ED_P,
    d=-121665 * pow(121666, -1, _ED_P) % _ED_P,
    order=2**252 + 27742317777372353535851937790883648493,
    gx=15112221349535400772501151409588531511454012693041857206046113283949847762202,
    gy=46316835694926478169428394003475163141307993866256225615783033603165251855960,
)

CURVES = {c.name: c for c in (ED25519, SECP256R1, SECP384R1, SECP521R1, BLS12_381_G1)}
