"""Command-line front end.

Exit status: 0 on success or ACCEPT, 1 on REJECT, 2 on usage, decode or
I/O errors.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__, bench, group, setmember
from .errors import DecodeError, ZKSetError

FORMAT_VERSIONS = "group-header/1 proof/1 commitment/1 prover-key/1 csv/1"
_SECRET_FORMAT = "zkset-setup-secret/1"


def _rng(seed):
    return random.Random(seed) if seed is not None else random.SystemRandom()


def _read(path) -> bytes:
    return Path(path).read_bytes()


def _write(path, data: bytes) -> None:
    Path(path).write_bytes(data)


def _load_secret(path):
    if path is None:
        return None
    try:
        doc = json.loads(_read(path))
        if doc.get("format") != _SECRET_FORMAT:
            raise DecodeError("not a zkset setup secret")
        return group.SetupSecret(int(doc["p"], 16), int(doc["q"], 16))
    except (ValueError, KeyError, TypeError) as exc:
        raise DecodeError(f"bad setup secret file: {exc}") from None


def _element_values(params, lines, raw: bool) -> list[int]:
    if raw:
        try:
            return [int(s, 16) for s in lines]
        except ValueError as exc:
            raise DecodeError(f"bad hex scalar: {exc}") from None
    return [group.hash_to_scalar(params, s.encode("utf-8")) for s in lines]


def _read_lines(path) -> list[str]:
    text = _read(path).decode("utf-8")
    return [s for s in text.splitlines() if s.strip()]


def cmd_setup(args) -> int:
    params, secret = group.make_group(args.backend, _rng(args.seed))
    _write(args.out, group.encode_header(params))
    if secret is not None:
        if not args.secret_out:
            raise ZKSetError("RSA backends need --secret-out for the factorisation")
        doc = {"format": _SECRET_FORMAT, "p": format(secret.p, "x"), "q": format(secret.q, "x")}
        _write(args.secret_out, json.dumps(doc).encode())
    print(f"{params.name}: header written to {args.out}")
    return 0


def cmd_commit(args) -> int:
    params, _ = group.decode_header(_read(args.params))
    secret = _load_secret(args.secret)
    xs = _element_values(params, _read_lines(args.elements), args.raw_scalars)
    commitment, key = setmember.setup(params, xs, secret, workers=args.workers)
    _write(args.out, setmember.encode_commitment(commitment, include_elements=not args.aggregate_only))
    _write(args.key_out, setmember.encode_prover_key(key))
    print(f"committed {commitment.n} elements")
    return 0


def cmd_prove(args) -> int:
    commitment = setmember.decode_commitment(_read(args.commitment))
    key = setmember.decode_prover_key(_read(args.key))
    if key.params != commitment.params:
        raise ZKSetError("prover key and commitment use different groups")
    rng = _rng(args.seed)
    if args.mode == "aggregate":
        proof = setmember.prove_aggregate(commitment, key, rng)
    else:
        if args.member is None:
            raise ZKSetError("--member is required in or mode")
        x = _element_values(commitment.params, [args.member], args.raw_scalars)[0]
        i = key.index(x)
        proof = setmember.prove_or(commitment, i, key.elements[i], rng, secret=key.secret)
    data = setmember.encode_proof(proof)
    _write(args.out, data)
    print(f"{args.mode} proof: {len(data)} bytes")
    return 0


def _report(ok: bool, as_json: bool, **extra) -> int:
    verdict = "ACCEPT" if ok else "REJECT"
    if as_json:
        print(json.dumps({"result": verdict, **extra}))
    else:
        print(verdict)
    return 0 if ok else 1


def cmd_verify(args) -> int:
    commitment = setmember.decode_commitment(_read(args.commitment))
    proof = setmember.decode_proof(_read(args.proof))
    mode = setmember.AGGREGATE if args.mode == "aggregate" else setmember.OR
    ok = proof.mode == mode and setmember.verify(commitment, proof)
    return _report(ok, args.json, mode=args.mode, n=commitment.n, backend=commitment.params.name)


def cmd_batch_verify(args) -> int:
    commitment = setmember.decode_commitment(_read(args.commitment))
    proofs = [setmember.decode_proof(_read(p)) for p in args.proofs]
    ok = setmember.batch_verify([(commitment, p) for p in proofs], _rng(args.seed))
    return _report(ok, args.json, proofs=len(proofs))


def _ints(text: str) -> list[int]:
    return [int(float(s)) for s in text.split(",") if s]


def cmd_bench(args) -> int:
    cfg = bench.BenchConfig(
        backends=[b for b in args.backends.split(",") if b],
        sizes=_ints(args.sizes),
        methods=[m for m in args.methods.split(",") if m],
        repetitions=args.reps,
        batch_sizes=_ints(args.batch_sizes),
        workers=args.workers,
        include_reference=args.include_reference,
        seed=args.seed,
    )
    records = bench.run_suite(cfg)
    extra = bench.EXTRA_COLUMNS if args.extra_columns else ()
    bench.export_csv(records, args.out, extra)
    print(f"{len(records)} records written to {args.out}")
    return 0


def cmd_crossover(args) -> int:
    records = bench.read_csv(args.csv)
    report = bench.crossover_analysis(records)
    print(json.dumps(report, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zkset", description="Zero-knowledge set-membership proofs.")
    ap.add_argument("--version", action="version",
                    version=f"zkset {__version__} ({FORMAT_VERSIONS})")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="choose a group and write its header")
    p.add_argument("--backend", required=True,
                   help="ed25519, secp256r1, secp384r1, secp521r1, bls12-381-g1, rsa-<bits>, toy-<p>-<g>")
    p.add_argument("--out", required=True)
    p.add_argument("--secret-out", help="where to store the RSA factorisation")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("commit", help="commit to a set of elements")
    p.add_argument("--params", required=True)
    p.add_argument("--secret", help="RSA setup secret")
    p.add_argument("--elements", required=True, help="newline-delimited UTF-8 identifiers")
    p.add_argument("--raw-scalars", action="store_true", help="elements are hex scalars")
    p.add_argument("--out", required=True)
    p.add_argument("--key-out", required=True)
    p.add_argument("--aggregate-only", action="store_true", help="omit the element commitment list")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_commit)

    p = sub.add_parser("prove", help="produce a membership proof")
    p.add_argument("--commitment", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--mode", required=True, choices=("aggregate", "or"))
    p.add_argument("--member", help="element to prove (or mode)")
    p.add_argument("--raw-scalars", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("verify", help="check a proof; prints ACCEPT or REJECT")
    p.add_argument("--commitment", required=True)
    p.add_argument("--proof", required=True)
    p.add_argument("--mode", required=True, choices=("aggregate", "or"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("batch-verify", help="check several aggregate proofs at once")
    p.add_argument("--commitment", required=True)
    p.add_argument("--proofs", required=True, nargs="+")
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_batch_verify)

    p = sub.add_parser("bench", help="run the benchmark suite and write CSV")
    p.add_argument("--backends", default="ed25519")
    p.add_argument("--sizes", default="10,100,1000")
    p.add_argument("--methods", default=",".join(bench.METHODS))
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--batch-sizes", default="")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--include-reference", action="store_true")
    p.add_argument("--extra-columns", action="store_true", help="append setup and median-of-means columns")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("crossover", help="crossover analysis of a benchmark CSV")
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_crossover)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ZKSetError, OSError, UnicodeDecodeError) as exc:
        print(f"zkset {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
