"""Compare the compiled and pure-Python enumeration walks.

    python3 benchmarks/bench_enumeration.py [--repeat N] [--fields -14,-43,-163]

Times ``minimal_data`` on the initial perfect form of each field, a deep
short-vector search, the bare tree walk, and a batch of random searches, once with the numba kernel and once with
the object-array fallback, and checks that both return identical results.
"""

import argparse
import random
import timeit

from bianchitess import lattice
from bianchitess.enumerate import minimal_data
from bianchitess.hermitian import gram_z4
from bianchitess.qfield import make_context
from bianchitess.voronoi import initial_perfect_form


def random_grams(n, seed=0):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        M = [[rng.randint(-6, 6) for _ in range(4)] for _ in range(4)]
        G = [[sum(M[k][i] * M[k][j] for k in range(4)) + (i == j) for j in range(4)] for i in range(4)]
        try:
            lattice.bareiss(G)
        except Exception:
            continue
        out.append(G)
    return out


def bench(label, fn, repeat):
    results = {}
    for flag in (True, False):
        lattice.set_numba_enabled(flag)
        fn()  # warm up (and compile)
        results[flag] = (min(timeit.repeat(fn, number=1, repeat=repeat)), fn())
    lattice.set_numba_enabled(True)
    (tc, rc), (tp, rp) = results[True], results[False]
    assert rc == rp, f"{label}: compiled and fallback results differ"
    print(f"{label:<28} numba {tc * 1e3:9.2f} ms   python {tp * 1e3:9.2f} ms   x{tp / tc:6.1f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--fields", default="-14,-43,-163,-403")
    args = ap.parse_args()
    if lattice.walk_numba is None:
        raise SystemExit("numba is not available")

    for d in (int(x) for x in args.fields.split(",")):
        phi = initial_perfect_form(make_context(d)).form
        bench(f"minimal_data d={d}", lambda: minimal_data(phi).vectors, args.repeat)
        G = gram_z4(phi)
        bench(f"short_vectors(3m) d={d}", lambda: lattice.short_vectors(G, 3), args.repeat)

    # a deep search where the tree walk itself dominates
    G = gram_z4(initial_perfect_form(make_context(-43)).form)
    bench("short_vectors(50m) d=-43", lambda: lattice.short_vectors(G, 50), args.repeat)
    Gi, L = lattice._scale_to_int(G)
    U, dv = lattice.bareiss(lattice.lll_gram(Gi)[1])
    bench("raw walk (50m) d=-43",
          lambda: lattice._walk(U, dv, 50 * L, lattice.numba_enabled()).tolist(), args.repeat)

    grams = random_grams(40)
    bench("40 random Grams, bound 60",
          lambda: [lattice.integer_short_vectors(G, 60) for G in grams], args.repeat)


if __name__ == "__main__":
    main()
