"""Time the numba kernels against their numpy/python reference twins.

Run:  python benchmarks/bench_kernels.py [--repeats 5]

The same inputs go through both backends; the table reports best-of-N
wall time per call and the speedup. Expect the first numba call to pay
compilation cost (excluded here by a warmup call).
"""

import argparse
import time

import numpy as np

from clinli.kernels import _reference

try:
    from clinli.kernels import _jit
except ImportError:
    _jit = None


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        times.append(time.perf_counter() - started)
    return min(times)


def bench_levenshtein(rng):
    a = rng.integers(0, 30, size=400).astype(np.int64)
    b = rng.integers(0, 30, size=420).astype(np.int64)
    return {
        "name": f"levenshtein ({a.size}x{b.size})",
        "reference": lambda: _reference.levenshtein(a, b),
        "jit": (lambda: _jit.levenshtein(a, b)) if _jit else None,
    }


def bench_best_split(rng):
    x = rng.normal(size=(2000, 35))
    residual = rng.normal(size=2000)
    return {
        "name": "best_split (2000x35)",
        "reference": lambda: _reference.best_split(x, residual, 1),
        "jit": (lambda: _jit.best_split(x, residual, 1)) if _jit else None,
    }


def bench_sgns(rng):
    vocab, dim, buckets = 200, 50, 1024
    n_tokens, max_window, negatives = 5000, 5, 5
    tokens = rng.integers(0, vocab, size=n_tokens).astype(np.int64)
    offsets = np.arange(0, n_tokens + 1, 50, dtype=np.int64)
    ngram_ids = rng.integers(0, buckets, size=vocab * 4).astype(np.int64)
    ngram_offsets = np.arange(0, (vocab + 1) * 4, 4, dtype=np.int64)
    windows = rng.integers(1, max_window + 1, size=n_tokens).astype(np.int64)
    draws = rng.integers(0, vocab, size=n_tokens * 2 * max_window * negatives).astype(np.int64)

    def make_state():
        gen = np.random.default_rng(0)
        return (
            gen.normal(scale=0.1, size=(vocab, dim)),
            gen.normal(scale=0.1, size=(buckets, dim)),
            np.zeros((vocab, dim)),
        )

    def run(impl):
        word, ngram, out = make_state()
        impl.sgns_epoch(
            tokens, offsets, word, ngram, out, ngram_ids, ngram_offsets,
            windows, draws, negatives, max_window, 0.05, 0.0005, 0, n_tokens,
        )

    return {
        "name": f"sgns_epoch ({n_tokens} tokens, dim {dim})",
        "reference": lambda: run(_reference),
        "jit": (lambda: run(_jit)) if _jit else None,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    rng = np.random.default_rng(42)

    benches = [bench_levenshtein(rng), bench_best_split(rng), bench_sgns(rng)]
    print(f"{'kernel':<34} {'numpy ref':>12} {'numba':>12} {'speedup':>9}")
    for bench in benches:
        ref_time = best_of(bench["reference"], args.repeats)
        if bench["jit"] is None:
            print(f"{bench['name']:<34} {ref_time * 1e3:>10.2f}ms {'n/a':>12} {'n/a':>9}")
            continue
        bench["jit"]()  # warmup: compile outside the timed region
        jit_time = best_of(bench["jit"], args.repeats)
        print(
            f"{bench['name']:<34} {ref_time * 1e3:>10.2f}ms {jit_time * 1e3:>10.2f}ms "
            f"{ref_time / jit_time:>8.1f}x"
        )


if __name__ == "__main__":
    main()
