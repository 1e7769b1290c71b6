import csv
import json
import subprocess
import sys

import pytest

from zkset import __version__, bench, cli, setmember


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def elements(tmp_path):
    path = tmp_path / "ids.txt"
    path.write_text("sensor-1\nsensor-2\nsensor-3\n\nsensor-4\n", encoding="utf-8")
    return path


def _pipeline(capsys, tmp_path, elements, backend="ed25519", seed=1):
    d = tmp_path / f"{backend}-{seed}"
    d.mkdir(exist_ok=True)
    args = ["setup", "--backend", backend, "--out", d / "params.bin", "--seed", seed]
    if backend.startswith("rsa"):
        args += ["--secret-out", d / "secret.json"]
    assert run(capsys, *args)[0] == 0
    args = ["commit", "--params", d / "params.bin", "--elements", elements,
            "--out", d / "c.bin", "--key-out", d / "key.json"]
    if backend.startswith("rsa"):
        args += ["--secret", d / "secret.json"]
    assert run(capsys, *args)[0] == 0
    return d


@pytest.mark.parametrize("backend", ["ed25519", "secp256r1", "rsa-1024", "toy-1019-2"])
def test_round_trip_both_modes(capsys, tmp_path, elements, backend):
    d = _pipeline(capsys, tmp_path, elements, backend)
    for mode, extra in (("aggregate", []), ("or", ["--member", "sensor-3"])):
        code, _, _ = run(capsys, "prove", "--commitment", d / "c.bin", "--key", d / "key.json",
                         "--mode", mode, "--out", d / f"{mode}.bin", "--seed", 3, *extra)
        assert code == 0
        code, out, err = run(capsys, "verify", "--commitment", d / "c.bin", "--proof", d / f"{mode}.bin",
                             "--mode", mode)
        assert (code, out, err) == (0, "ACCEPT\n", "")
        proof = setmember.decode_proof((d / f"{mode}.bin").read_bytes())
        assert proof.challenge_kind == setmember.FIAT_SHAMIR


def test_reject_and_json(capsys, tmp_path, elements):
    d = _pipeline(capsys, tmp_path, elements)
    run(capsys, "prove", "--commitment", d / "c.bin", "--key", d / "key.json", "--mode", "aggregate",
        "--out", d / "p.bin")
    other = tmp_path / "other.txt"
    other.write_text("sensor-9\n")
    run(capsys, "commit", "--params", d / "params.bin", "--elements", other, "--out", d / "c2.bin",
        "--key-out", d / "k2.json")
    code, out, _ = run(capsys, "verify", "--commitment", d / "c2.bin", "--proof", d / "p.bin", "--mode", "aggregate")
    assert (code, out) == (1, "REJECT\n")
    code, out, _ = run(capsys, "verify", "--commitment", d / "c.bin", "--proof", d / "p.bin", "--mode", "or")
    assert (code, out) == (1, "REJECT\n")
    code, out, _ = run(capsys, "verify", "--commitment", d / "c.bin", "--proof", d / "p.bin",
                       "--mode", "aggregate", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["result"] == "ACCEPT" and doc["n"] == 4


def test_decode_and_io_errors(capsys, tmp_path, elements):
    d = _pipeline(capsys, tmp_path, elements)
    run(capsys, "prove", "--commitment", d / "c.bin", "--key", d / "key.json", "--mode", "aggregate",
        "--out", d / "p.bin")
    data = (d / "p.bin").read_bytes()
    (d / "short.bin").write_bytes(data[:-5])
    code, out, err = run(capsys, "verify", "--commitment", d / "c.bin", "--proof", d / "short.bin",
                         "--mode", "aggregate")
    assert code == 2 and out == "" and err
    code, out, err = run(capsys, "verify", "--commitment", d / "nope.bin", "--proof", d / "p.bin",
                         "--mode", "aggregate")
    assert code == 2 and err
    code, _, err = run(capsys, "setup", "--backend", "curve25519", "--out", d / "x.bin")
    assert code == 2 and "curve25519" in err
    code, _, err = run(capsys, "prove", "--commitment", d / "c.bin", "--key", d / "key.json", "--mode", "or",
                       "--out", d / "o.bin")
    assert code == 2
    code, _, err = run(capsys, "prove", "--commitment", d / "c.bin", "--key", d / "key.json", "--mode", "or",
                       "--member", "not-there", "--out", d / "o.bin")
    assert code == 2
    (d / "latin1.txt").write_bytes(b"caf\xe9\n")
    code, _, _ = run(capsys, "commit", "--params", d / "params.bin", "--elements", d / "latin1.txt",
                     "--out", d / "c3.bin", "--key-out", d / "k3.json")
    assert code == 2


def test_rsa_setup_requires_secret_out(capsys, tmp_path):
    code, _, err = run(capsys, "setup", "--backend", "rsa-1024", "--out", tmp_path / "p.bin", "--seed", 1)
    assert code == 2 and "secret" in err


@pytest.mark.parametrize("argv", [
    [],
    ["prove", "--commitment", "c", "--key", "k", "--out", "o"],
    ["verify", "--commitment", "c", "--proof", "p"],
    ["verify", "--commitment", "c", "--proof", "p", "--mode", "both"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2
    assert capsys.readouterr().out == ""


def test_raw_scalars(capsys, tmp_path):
    run(capsys, "setup", "--backend", "toy-23-5", "--out", tmp_path / "p.bin")
    (tmp_path / "xs.txt").write_text("2\n3\n")
    assert run(capsys, "commit", "--params", tmp_path / "p.bin", "--elements", tmp_path / "xs.txt", "--raw-scalars",
               "--out", tmp_path / "c.bin", "--key-out", tmp_path / "k.json")[0] == 0
    c = setmember.decode_commitment((tmp_path / "c.bin").read_bytes())
    assert c.aggregate == 20 and c.element_commitments == (2, 10)
    (tmp_path / "bad.txt").write_text("zz\n")
    assert run(capsys, "commit", "--params", tmp_path / "p.bin", "--elements", tmp_path / "bad.txt", "--raw-scalars",
               "--out", tmp_path / "c.bin", "--key-out", tmp_path / "k.json")[0] == 2


def test_aggregate_only_commitment(capsys, tmp_path, elements):
    d = _pipeline(capsys, tmp_path, elements)
    run(capsys, "commit", "--params", d / "params.bin", "--elements", elements, "--aggregate-only",
        "--out", d / "agg.bin", "--key-out", d / "k.json")
    run(capsys, "prove", "--commitment", d / "c.bin", "--key", d / "key.json", "--mode", "aggregate",
        "--out", d / "p.bin")
    assert len((d / "agg.bin").read_bytes()) < len((d / "c.bin").read_bytes())
    code, out, _ = run(capsys, "verify", "--commitment", d / "agg.bin", "--proof", d / "p.bin", "--mode", "aggregate")
    assert (code, out) == (0, "ACCEPT\n")


def test_batch_verify(capsys, tmp_path, elements):
    d = _pipeline(capsys, tmp_path, elements)
    paths = []
    for s in range(3):
        p = d / f"p{s}.bin"
        run(capsys, "prove", "--commitment", d / "c.bin", "--key", d / "key.json", "--mode", "aggregate",
            "--out", p, "--seed", s)
        paths.append(p)
    code, out, _ = run(capsys, "batch-verify", "--commitment", d / "c.bin", "--proofs", *paths, "--seed", 1)
    assert (code, out) == (0, "ACCEPT\n")
    data = bytearray(paths[1].read_bytes())
    data[-1] ^= 1
    paths[1].write_bytes(bytes(data))
    code, out, _ = run(capsys, "batch-verify", "--commitment", d / "c.bin", "--proofs", *paths, "--json")
    # low bit of t: still a well-formed scalar, so this is a reject, not a decode error
    assert code == 1 and json.loads(out)["result"] == "REJECT"


def test_seeded_outputs_are_byte_reproducible(capsys, tmp_path, elements):
    blobs = []
    for rep in range(2):
        d = tmp_path / f"rep{rep}"
        d.mkdir()
        run(capsys, "setup", "--backend", "rsa-1024", "--out", d / "p.bin", "--secret-out", d / "s.json", "--seed", 9)
        run(capsys, "commit", "--params", d / "p.bin", "--secret", d / "s.json", "--elements", elements,
            "--out", d / "c.bin", "--key-out", d / "k.json")
        run(capsys, "prove", "--commitment", d / "c.bin", "--key", d / "k.json", "--mode", "or", "--member",
            "sensor-1", "--out", d / "o.bin", "--seed", 4)
        blobs.append([(d / f).read_bytes() for f in ("p.bin", "s.json", "c.bin", "k.json", "o.bin")])
    assert blobs[0] == blobs[1]


def test_written_files_read_back(capsys, tmp_path, elements):
    d = _pipeline(capsys, tmp_path, elements, backend="rsa-1024")
    run(capsys, "prove", "--commitment", d / "c.bin", "--key", d / "key.json", "--mode", "aggregate",
        "--out", d / "p.bin")
    c = setmember.decode_commitment((d / "c.bin").read_bytes())
    k = setmember.decode_prover_key((d / "key.json").read_bytes())
    assert k.params == c.params and k.secret is not None
    assert setmember.verify(c, setmember.decode_proof((d / "p.bin").read_bytes()))


def test_bench_and_crossover(capsys, tmp_path):
    rows = []
    for rep in range(2):
        path = tmp_path / f"b{rep}.csv"
        code, _, _ = run(capsys, "bench", "--backends", "toy-1019-2", "--sizes", "10,100", "--reps", 2,
                         "--batch-sizes", "3", "--seed", 7, "--out", path, "--extra-columns")
        assert code == 0
        with open(path) as fh:
            rows.append([{k: v for k, v in r.items() if k not in ("gen_s", "verify_s") + bench.EXTRA_COLUMNS}
                         for r in csv.DictReader(fh)])
    assert rows[0] == rows[1]
    code, out, _ = run(capsys, "crossover", "--csv", tmp_path / "b0.csv")
    report = json.loads(out)
    assert code == 0 and 300 <= report["patricia_reference"]["160"] <= 460
    code, _, err = run(capsys, "crossover", "--csv", tmp_path / "missing.csv")
    assert code == 2


def test_bench_reference_tables(capsys, tmp_path):
    path = tmp_path / "ref.csv"
    run(capsys, "bench", "--backends", "toy-23-5", "--sizes", "5", "--methods", "aggregate", "--reps", 1,
        "--include-reference", "--out", path)
    text = path.read_text()
    assert "aggregate,ed25519,,0.026569,0.012125,160,100,paper-reference" in text


def test_version_and_module_entry():
    out = subprocess.run([sys.executable, "-m", "zkset", "--version"], capture_output=True, text=True)
    assert out.returncode == 0
    assert __version__ in out.stdout and "proof/1" in out.stdout
