"""Benchmark the compiled kernels against the numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--n 20000] [--d 256] [--k 32] [--repeats 3]

Times each kernel on a dense workload and a tf-idf-like CSR workload, then
an end-to-end kmeans_fit on both backends.
"""

import argparse
import time

import numpy as np

from embtopics import _kernels as K
from embtopics.kmeans import KMeansConfig, kmeans_fit
from embtopics.tfidf import SparseMatrix


def make_dense(rng, n, d):
    return rng.normal(size=(n, d))


def make_csr(rng, n, d, nnz_per_row):
    indptr = [0]
    indices, data = [], []
    for _ in range(n):
        cols = np.sort(rng.choice(d, size=nnz_per_row, replace=False))
        vals = rng.normal(size=nnz_per_row)
        vals /= np.linalg.norm(vals)
        indices.extend(cols.tolist())
        data.extend(vals.tolist())
        indptr.append(len(indices))
    return SparseMatrix(n, d, np.asarray(indptr, np.int64),
                        np.asarray(indices, np.int64), np.asarray(data, np.float64))


def timeit(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--d", type=int, default=256)
    ap.add_argument("--k", type=int, default=32)
    ap.add_argument("--vocab", type=int, default=5000, help="CSR column count")
    ap.add_argument("--nnz", type=int, default=12, help="CSR nonzeros per row")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    backends = K.available_backends()
    if "c" not in backends:
        print("note: compiled kernels not built; only the numpy fallback is available")

    rng = np.random.default_rng(0)
    X = make_dense(rng, args.n, args.d)
    C = make_dense(rng, args.k, args.d)
    S = make_csr(rng, args.n, args.vocab, args.nnz)
    Cs = make_dense(rng, args.k, args.vocab)
    xsq = S.row_sqnorms()
    B = make_dense(rng, args.vocab, args.k)
    R = make_dense(rng, args.n, args.k)
    assign = K.dense_assign(X, C)[0]
    assign_s = K.csr_assign(S.indptr, S.indices, S.data, xsq, Cs)[0]

    cases = {
        f"dense_assign        {args.n}x{args.d}, k={args.k}":
            lambda: K.dense_assign(X, C),
        f"dense_update        {args.n}x{args.d}, k={args.k}":
            lambda: K.dense_update(X, assign, args.k),
        f"csr_assign          {args.n}x{args.vocab} nnz/row={args.nnz}, k={args.k}":
            lambda: K.csr_assign(S.indptr, S.indices, S.data, xsq, Cs),
        f"csr_update          {args.n}x{args.vocab} nnz/row={args.nnz}, k={args.k}":
            lambda: K.csr_update(S.indptr, S.indices, S.data, assign_s, args.k, args.vocab),
        f"csr_matmul          ({args.n}x{args.vocab}) @ ({args.vocab}x{args.k})":
            lambda: K.csr_matmul(S.indptr, S.indices, S.data, B),
        f"csr_tmatmul         ({args.vocab}x{args.n}) @ ({args.n}x{args.k})":
            lambda: K.csr_tmatmul(S.indptr, S.indices, S.data, R, args.vocab),
    }

    width = max(len(name) for name in cases) + 2
    header = f"{'kernel':<{width}}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, fn in cases.items():
        times = {}
        for backend in backends:
            K.set_backend(backend)
            times[backend] = timeit(fn, args.repeats)
        row = f"{name:<{width}}" + "".join(f"{times[b] * 1e3:>10.1f}ms" for b in backends)
        if len(backends) == 2:
            row += f"{times['py'] / times['c']:>9.1f}x"
        print(row)

    print()
    small = make_dense(rng, min(args.n, 5000), 64)
    small_csr = make_csr(rng, min(args.n, 5000), args.vocab, args.nnz)
    for label, data in (("kmeans_fit dense 5000x64 k=8", small),
                        (f"kmeans_fit csr 5000x{args.vocab} k=8", small_csr)):
        times = {}
        for backend in backends:
            K.set_backend(backend)
            times[backend] = timeit(
                lambda: kmeans_fit(data, KMeansConfig(k=8, n_init=2, seed=0)), 1)
        row = f"{label:<{width}}" + "".join(f"{times[b] * 1e3:>10.0f}ms" for b in backends)
        if len(backends) == 2:
            row += f"{times['py'] / times['c']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
