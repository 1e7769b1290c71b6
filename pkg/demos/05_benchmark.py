"""A short benchmark run and the crossover report built from it.

Uses few repetitions so it finishes in seconds; ``zkset bench`` runs
the full sweep.
"""

import json
import logging

from zkset import bench

logging.basicConfig(level=logging.INFO, format="%(message)s")

cfg = bench.BenchConfig(backends=["ed25519", "rsa-1024"], sizes=[10, 100, 1000], repetitions=10,
                        batch_sizes=[20], seed=5)
records = bench.run_suite(cfg)
print(f"{'method':<22}{'backend':<16}{'n':>6}{'gen ms':>10}{'verify ms':>11}{'bytes':>8}")
for r in records:
    print(f"{r.method:<22}{r.backend:<16}{r.n:>6}{r.gen_s * 1e3:>10.3f}{r.verify_s * 1e3:>11.3f}"
          f"{r.proof_bytes if r.proof_bytes is not None else '':>8}")
print(json.dumps(bench.crossover_analysis(records), indent=2))
