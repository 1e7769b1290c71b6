import random
import zlib

import pytest

from zkset import group


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture(scope="session")
def toy():
    return group.make_toy_group(23, 5)


@pytest.fixture(scope="session")
def rsa_small():
    """512-bit RSA group for fast tests (test-only size)."""
    return group.make_rsa_group(512, random.Random(7), test_mode=True)


# Backends exercised by most round-trip tests.  RSA uses the smallest
# production size so the prover-side arithmetic is realistic.
BACKENDS = ["ed25519", "secp256r1", "secp384r1", "secp521r1", "bls12-381-g1", "rsa-1024", "toy-23-5"]

_GROUPS = {}


def get_group(name):
    if name not in _GROUPS:
        _GROUPS[name] = group.make_group(name, random.Random(zlib.crc32(name.encode())))
    return _GROUPS[name]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        ok, detail = RESULTS[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
