"""Benchmark harness: proof sizes, generation and verification times.

:func:`run_suite` measures the aggregate and OR set-membership proofs and
the binary Merkle baseline; :func:`emit_reference_tables` returns the
published figures as records flagged ``source="paper-reference"`` so both
can be written to one CSV and overlaid.

Timings cover group arithmetic and hashing only; serialisation and file
I/O are outside the timed sections.
"""

from __future__ import annotations

import csv
import logging
import math
import random
import statistics
import time
from dataclasses import dataclass, field, fields
from typing import Iterable, Sequence

from . import group, merkle, setmember
from .errors import AnalysisIncompleteError, ParameterError

log = logging.getLogger(__name__)

AGGREGATE = "aggregate"
OR_BRANCH = "or-branch"
MERKLE = "merkle"
BATCH = "batch-aggregate"
SEQUENTIAL = "sequential-aggregate"
METHODS = (AGGREGATE, OR_BRANCH, MERKLE)

MEASURED = "measured"
REFERENCE = "paper-reference"
TRUNCATED = "truncated"

CSV_COLUMNS = ("method", "backend", "n", "gen_s", "verify_s", "proof_bytes", "reps", "source")
EXTRA_COLUMNS = ("setup_s", "gen_mom_s", "verify_mom_s")


@dataclass
class BenchConfig:
    backends: Sequence[str] = ("ed25519",)
    sizes: Sequence[int] = (10, 100, 1000)
    methods: Sequence[str] = METHODS
    repetitions: int = 100
    batch_sizes: Sequence[int] = ()
    workers: int = 1
    output: str | None = None
    include_reference: bool = False
    seed: int | None = None
    # OR proofs grow linearly; larger sets are skipped for that method
    or_max_n: int = 64
    warmup: int = 1

    def __post_init__(self):
        if self.repetitions < 1:
            raise ParameterError("repetitions must be at least 1")
        if any(n < 1 for n in self.sizes) or any(m < 1 for m in self.batch_sizes):
            raise ParameterError("set and batch sizes must be at least 1")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ParameterError(f"unknown methods {sorted(unknown)}")


@dataclass
class BenchRecord:
    method: str
    backend: str
    n: int | None
    gen_s: float | None
    verify_s: float | None
    proof_bytes: float | None
    reps: int | None
    source: str = MEASURED
    setup_s: float | None = None
    gen_mom_s: float | None = None
    verify_mom_s: float | None = None
    ref: str | None = field(default=None, compare=False)


def median_of_means(samples: Sequence[float], groups: int = 5) -> float:
    groups = max(1, min(groups, len(samples)))
    size = len(samples) // groups
    means = [statistics.fmean(samples[i * size:(i + 1) * size]) for i in range(groups)]
    return statistics.median(means)


def _timed(fn, reps: int, warmup: int):
    for _ in range(warmup):
        fn(0)
    out = []
    result = None
    for i in range(reps):
        t0 = time.perf_counter()
        result = fn(i)
        out.append(time.perf_counter() - t0)
    return out, result


def _elements(params, secret, n: int, rng: random.Random) -> list[int]:
    m = group.exponent_modulus(params, secret)
    if n > m:
        raise ParameterError(f"a set of {n} distinct scalars does not fit below {m}")
    seen: set[int] = set()
    while len(seen) < n:
        seen.add(rng.randrange(m))
    return sorted(seen)


def _record(method, backend, n, gen, ver, size, reps, setup_s=None) -> BenchRecord:
    return BenchRecord(
        method, backend, n,
        statistics.fmean(gen) if gen else None,
        statistics.fmean(ver) if ver else None,
        size, reps, MEASURED, setup_s,
        median_of_means(gen) if gen else None,
        median_of_means(ver) if ver else None,
    )


def _bench_aggregate(params, secret, backend, n, cfg, rng):
    xs = _elements(params, secret, n, rng)
    t0 = time.perf_counter()
    commitment, key = setmember.setup(params, xs, secret, workers=cfg.workers)
    setup_s = time.perf_counter() - t0
    proofs = []

    def gen(i):
        p = setmember.prove_aggregate(commitment, key, rng)
        proofs.append(p)
        return p

    gen_t, proof = _timed(gen, cfg.repetitions, cfg.warmup)
    proofs = proofs[cfg.warmup:]

    def ver(i):
        if not setmember.verify(commitment, proofs[i]):
            raise RuntimeError(f"{backend}: honest aggregate proof rejected")

    ver_t, _ = _timed(ver, cfg.repetitions, cfg.warmup)
    return _record(AGGREGATE, backend, n, gen_t, ver_t, len(setmember.encode_proof(proof)),
                   cfg.repetitions, setup_s)


def _bench_or(params, secret, backend, n, cfg, rng):
    xs = _elements(params, secret, n, rng)
    t0 = time.perf_counter()
    commitment, key = setmember.setup(params, xs, secret, workers=cfg.workers)
    setup_s = time.perf_counter() - t0
    proofs = []

    def gen(i):
        j = rng.randrange(n)
        p = setmember.prove_or(commitment, j, key.elements[j], rng, secret=secret)
        proofs.append(p)
        return p

    gen_t, proof = _timed(gen, cfg.repetitions, cfg.warmup)
    proofs = proofs[cfg.warmup:]

    def ver(i):
        if not setmember.verify(commitment, proofs[i]):
            raise RuntimeError(f"{backend}: honest OR proof rejected")

    ver_t, _ = _timed(ver, cfg.repetitions, cfg.warmup)
    return _record(OR_BRANCH, backend, n, gen_t, ver_t, len(setmember.encode_proof(proof)),
                   cfg.repetitions, setup_s)


def _bench_merkle(n, cfg, rng):
    leaves = [b"element-%d" % i for i in range(n)]
    t0 = time.perf_counter()
    tree = merkle.build(leaves)
    setup_s = time.perf_counter() - t0
    idx = [rng.randrange(n) for _ in range(cfg.repetitions + cfg.warmup)]
    proofs = []

    def gen(i):
        p = merkle.prove(tree, idx[len(proofs)])
        proofs.append(p)
        return p

    gen_t, proof = _timed(gen, cfg.repetitions, cfg.warmup)
    proofs = proofs[cfg.warmup:]
    root = tree.root

    def ver(i):
        p = proofs[i]
        if not merkle.verify(root, leaves[p.index], p):
            raise RuntimeError("honest Merkle proof rejected")

    ver_t, _ = _timed(ver, cfg.repetitions, cfg.warmup)
    return _record(MERKLE, "binary-sha256", n, gen_t, ver_t, len(proof.to_bytes()),
                   cfg.repetitions, setup_s)


def _bench_batch(params, secret, backend, m, cfg, rng):
    xs = _elements(params, secret, 4, rng)
    commitment, key = setmember.setup(params, xs, secret)
    t0 = time.perf_counter()
    proofs = [setmember.prove_aggregate(commitment, key, rng) for _ in range(m)]
    gen_s = time.perf_counter() - t0
    entries = [(commitment, p) for p in proofs]
    size = m * len(setmember.encode_proof(proofs[0]))

    def batch(i):
        if not setmember.batch_verify(entries, rng):
            raise RuntimeError(f"{backend}: honest batch rejected")

    def seq(i):
        if not all(setmember.verify(commitment, p) for p in proofs):
            raise RuntimeError(f"{backend}: honest proof rejected")

    reps = cfg.repetitions
    b_t, _ = _timed(batch, reps, cfg.warmup)
    s_t, _ = _timed(seq, reps, cfg.warmup)
    return [
        _record(BATCH, backend, m, [gen_s], b_t, size, reps),
        _record(SEQUENTIAL, backend, m, [gen_s], s_t, size, reps),
    ]


def run_suite(config: BenchConfig) -> list[BenchRecord]:
    """Measure every (method, backend, n) in ``config``.

    If memory runs out part way, the records gathered so far are returned
    followed by one record with ``source="truncated"`` naming where it stopped.
    """
    rng = random.Random(config.seed) if config.seed is not None else random.SystemRandom()
    records: list[BenchRecord] = []
    groups = {}
    stage = ("setup", ",".join(config.backends), None)
    try:
        for backend in config.backends:
            groups[backend] = group.make_group(backend, rng)
        for method in config.methods:
            if method == MERKLE:
                for n in config.sizes:
                    stage = (MERKLE, "binary-sha256", n)
                    log.info("bench %s n=%d", MERKLE, n)
                    records.append(_bench_merkle(n, config, rng))
                continue
            for backend in config.backends:
                params, secret = groups[backend]
                for n in config.sizes:
                    if method == OR_BRANCH and n > config.or_max_n:
                        continue
                    if n > group.exponent_modulus(params, secret):
                        log.warning("skipping %s n=%d: larger than the group", backend, n)
                        continue
                    stage = (method, backend, n)
                    log.info("bench %s %s n=%d", method, backend, n)
                    fn = _bench_aggregate if method == AGGREGATE else _bench_or
                    records.append(fn(params, secret, backend, n, config, rng))
        for backend in config.backends:
            params, secret = groups[backend]
            for m in config.batch_sizes:
                stage = (BATCH, backend, m)
                log.info("bench batch %s m=%d", backend, m)
                records.extend(_bench_batch(params, secret, backend, m, config, rng))
    except MemoryError:
        method, backend, n = stage
        records.append(BenchRecord(method, backend, n, None, None, None, None, TRUNCATED))
    if config.include_reference:
        records.extend(emit_reference_tables())
    if config.output:
        export_csv(records, config.output)
    return records


# -- analysis -----------------------------------------------------------------

def size_crossover(records: Iterable[BenchRecord], constant_method: str, baseline_method: str,
                   backend: str | None = None) -> int | None:
    """Least measured ``n`` where the baseline proof outgrows the constant one.

    ``None`` when the methods coincide or the baseline never grows past it.
    """
    if constant_method == baseline_method:
        return None
    records = [r for r in records if r.source == MEASURED]
    const = [r for r in records if r.method == constant_method and (backend is None or r.backend == backend)]
    base = sorted((r for r in records if r.method == baseline_method), key=lambda r: r.n)
    if not const or not base:
        raise AnalysisIncompleteError(f"need measured {constant_method} and {baseline_method} records")
    size = max(r.proof_bytes for r in const)
    for r in base:
        if r.proof_bytes > size:
            return r.n
    return None


def crossover_analysis(records: Sequence[BenchRecord],
                       reference_model: merkle.PatriciaCostModel | None = None,
                       reference_constant_bytes: Sequence[float] = (160, 224)) -> dict:
    """Proof-size and batch-verification crossover points.

    Keys of the returned report:

    ``binary_merkle``
        per measured backend, the constant proof size and the least ``n``
        whose binary Merkle proof is larger (closed form, checked against
        the measured Merkle sizes).
    ``patricia_reference``
        crossover of the Patricia cost model against each reference size.
    ``batch_verification``
        per backend, the least measured batch size where one batch check
        beats that many Merkle verifications, and the estimate that treats
        the smallest batch time as constant.
    """
    model = reference_model or merkle.PatriciaCostModel()
    measured = [r for r in records if r.source == MEASURED]
    agg = [r for r in measured if r.method == AGGREGATE]
    mk = [r for r in measured if r.method == MERKLE]
    if not agg or not mk:
        raise AnalysisIncompleteError("need measured aggregate and merkle records")
    for r in mk:
        if r.proof_bytes != merkle.proof_size_bytes(r.n):
            raise AnalysisIncompleteError(f"merkle record n={r.n} does not follow the closed form")

    report: dict = {"binary_merkle": {}, "patricia_reference": {}, "batch_verification": {}}
    for backend in sorted({r.backend for r in agg}):
        size = max(r.proof_bytes for r in agg if r.backend == backend)
        report["binary_merkle"][backend] = {
            "constant_proof_bytes": size,
            "merkle_header_bytes": merkle.PROOF_HEADER_BYTES,
            "crossover_n": merkle.crossover_point(size),
            "first_measured_n_larger": size_crossover(measured, AGGREGATE, MERKLE, backend),
        }
    for c in reference_constant_bytes:
        report["patricia_reference"][str(c)] = model.crossover_point(c)

    per_proof = max(mk, key=lambda r: r.n).verify_s
    for backend in sorted({r.backend for r in measured if r.method == BATCH}):
        batches = sorted((r for r in measured if r.method == BATCH and r.backend == backend), key=lambda r: r.n)
        first = next((r.n for r in batches if r.verify_s < r.n * per_proof), None)
        report["batch_verification"][backend] = {
            "merkle_verify_s": per_proof,
            "first_measured_batch_faster": first,
            "constant_time_estimate": math.ceil(batches[0].verify_s / per_proof),
        }
    report["batch_verification"]["published"] = math.ceil(0.012125 / 0.000176)
    return report


# -- CSV ------------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def export_csv(records: Iterable[BenchRecord], path, extra_columns: Sequence[str] = ()) -> None:
    """Write records with the fixed column order, plus optional extras."""
    cols = list(CSV_COLUMNS) + [c for c in extra_columns if c in EXTRA_COLUMNS]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in records:
            w.writerow([_fmt(getattr(r, c)) for c in cols])


def _parse(name: str, text: str):
    if text == "":
        return None
    if name in ("n", "reps"):
        return int(text)
    if name in ("method", "backend", "source"):
        return text
    v = float(text)
    return int(v) if name == "proof_bytes" and v.is_integer() and "." not in text else v


def read_csv(path) -> list[BenchRecord]:
    known = {f.name for f in fields(BenchRecord)}
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [BenchRecord(**{k: _parse(k, v) for k, v in row.items() if k in known}) for row in rows]


# -- published figures ------------------------------------------------------------

def _ref(table, method, backend, n, gen, ver, size, reps=100):
    return BenchRecord(method, backend, n, gen, ver, size, reps, REFERENCE, ref=table)


def _table1():
    rows = [(1024, 0.0202, 0.0101, 484), (2048, 0.1494, 0.0719, 900),
            (3072, 0.4329, 0.2180, 1308), (4096, 0.9640, 0.4761, 1716)]
    return [_ref("table1", AGGREGATE, f"rsa-{b}", None, g, v, s) for b, g, v, s in rows]


def _table2():
    rows = [("ed25519", 0.026569, 0.012125, 160), ("secp256r1", 0.058933, 0.022856, 160),
            ("bls12-381-g1", 0.084388, 0.041966, 224), ("secp384r1", 0.069323, 0.029178, 240),
            ("secp521r1", 0.222372, 0.092224, 330)]
    return [_ref("table2", AGGREGATE, b, None, g, v, s) for b, g, v, s in rows]


def _table3():
    out = []
    for n, _path, size in merkle.PATRICIA_TABLE:
        out.append(_ref("table3", MERKLE, "patricia", n, None, None, size, None))
        for backend, const in (("ed25519", 160), ("secp256r1", 160), ("bls12-381-g1", 224)):
            out.append(_ref("table3", AGGREGATE, backend, n, None, None, const, None))
    return out


def _table4():
    rows = [(100, 0.000118, 0.000099), (1_000, 0.000146, 0.000129), (10_000, 0.000215, 0.000145),
            (100_000, 0.000261, 0.000195), (1_000_000, 0.000300, 0.000176)]
    out = []
    for n, g, v in rows:
        out.append(_ref("table4", MERKLE, "patricia", n, g, v, None))
        out.append(_ref("table4", AGGREGATE, "ed25519", n, 0.026569, 0.012125, None))
    return out


def _table5():
    return [
        _ref("table5", "batch-merkle", "patricia", 1000, 0.300, 0.176, 2_920_000),
        _ref("table5", BATCH, "ed25519", 1000, 26.569, 0.012125, 160),
    ]


def _table6():
    rows = [(1, 2_920, 0.000176), (10, 29_200, 0.00176), (100, 292_000, 0.0176),
            (1_000, 2_920_000, 0.176), (10_000, 29_200_000, 1.76), (100_000, 292_000_000, 17.6)]
    out = []
    for m, size, v in rows:
        out.append(_ref("table6", "batch-merkle", "patricia", m, None, v, size))
        out.append(_ref("table6", BATCH, "ed25519", m, None, 0.012125, 160))
    return out


def _table7():
    rows = [
        (1_000, [("ed25519", AGGREGATE, 160, 0.026569, 0.012125), ("verkle", "verkle", 150, 0.0457, 0.0228),
                 ("stark", "stark", 46_080, 1.25, 0.62)]),
        (10_000, [("ed25519", AGGREGATE, 160, 0.026569, 0.012125), ("verkle", "verkle", 180, 0.0582, 0.0291),
                  ("stark", "stark", 71_680, 2.8, 0.95)]),
        (100_000, [("ed25519", AGGREGATE, 160, 0.026569, 0.012125), ("verkle", "verkle", 210, 0.0707, 0.0354),
                   ("stark", "stark", 112_640, 5.5, 1.4)]),
        (1_000_000, [("ed25519", AGGREGATE, 160, 0.026569, 0.012125), ("verkle", "verkle", 240, 0.0832, 0.0417),
                     ("stark", "stark", 174_080, 12.0, 2.1)]),
    ]
    # published as estimates, not repeated measurements
    return [_ref("table7", method, backend, n, g, v, s, None)
            for n, entries in rows for backend, method, s, g, v in entries]


_TABLES = {1: _table1, 2: _table2, 3: _table3, 4: _table4, 5: _table5, 6: _table6, 7: _table7}


def emit_reference_tables(tables: Iterable[int] = (1, 2, 3, 4, 5, 6, 7)) -> list[BenchRecord]:
    """Published figures as records with ``source="paper-reference"``.

    ``ref`` names the table each record comes from.  Sizes quoted in
    KB/MB are converted with decimal prefixes.
    """
    out = []
    for t in tables:
        out.extend(_TABLES[t]())
    return out
