"""Textbook affine curve arithmetic, written independently of the package.

Slow and simple on purpose: used only as an oracle.
"""


def w_add(curve, P, Q):
    p, a = curve["p"], curve["a"]
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and (y1 + y2) % p == 0:
        return None
    if P == Q:
        lam = (3 * x1 * x1 + a) * pow(2 * y1, p - 2, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, p - 2, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def e_add(curve, P, Q):
    p, d = curve["p"], curve["d"]
    (x1, y1), (x2, y2) = P, Q
    k = d * x1 * x2 * y1 * y2 % p
    x3 = (x1 * y2 + y1 * x2) * pow(1 + k, p - 2, p) % p
    y3 = (y1 * y2 + x1 * x2) * pow(1 - k, p - 2, p) % p
    return (x3, y3)


def mul(curve, P, k):
    add = e_add if "d" in curve else w_add
    R = (0, 1) if "d" in curve else None
    while k:
        if k & 1:
            R = add(curve, R, P)
        P = add(curve, P, P)
        k >>= 1
    return R


P256 = {
    "p": 2**256 - 2**224 + 2**192 + 2**96 - 1,
    "a": -3,
    "G": (0x6B17D1F2E12C4247F8BCE6E563A440F277037D812DEB33A0F4A13945D898C296,
          0x4FE342E2FE1A7F9B8EE7EB4A7C0F9E162BCE33576B315ECECBB6406837BF51F5),
}
BLS_G1 = {
    "p": int("1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f6241eabfffeb153ffffb9feffffffffaaab", 16),
    "a": 0,
    "G": (int("17f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac586c55e83ff97a1aeffb3af00adb22c6bb", 16),
          int("08b3f481e3aaa0f1a09e30ed741d8ae4fcf5e095d5d00af600db18cb2c04b3edd03cc744a2888ae40caa232946c5e7e1", 16)),
}
ED25519 = {
    "p": 2**255 - 19,
    "d": -121665 * pow(121666, 2**255 - 21, 2**255 - 19) % (2**255 - 19),
    "G": (15112221349535400772501151409588531511454012693041857206046113283949847762202,
          46316835694926478169428394003475163141307993866256225615783033603165251855960),
}
