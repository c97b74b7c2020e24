"""Compare the numba kernels with their numpy twins.

    python benchmarks/bench_kernels.py [--vertices 400] [--repeat 20]

Prints one line per kernel with the best-of-``repeat`` time for each backend
and checks that both produce the same result.
"""
import argparse
import timeit

import numpy as np

from infrig import _kernels as K


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vertices", type=int, default=400)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed")

    rng = np.random.default_rng(args.seed)
    n = args.vertices
    pts = rng.normal(size=(n, 3))
    edges = [(i, j) for i in range(n) for j in range(i + 1, min(n, i + 8))]
    ei, ej = K._edge_arrays(edges)
    g = np.array([-1.0, 1.0, 1.0])
    mat = np.eye(4) + 0.3 * rng.normal(size=(4, 4))
    blocks = K.stat_matrices_numpy(mat, pts)
    vecs = rng.normal(size=pts.shape)

    cases = [
        ("edge_rows", lambda: K.edge_rows_numpy(pts, edges, g), lambda: K.edge_rows_numba(pts, ei, ej, g, True)),
        ("tangency_rows", lambda: K.tangency_rows_numpy(pts, g), lambda: K.tangency_rows_numba(pts, g)),
        ("equilibrium_matrix", lambda: K.equilibrium_matrix_numpy(pts), lambda: K.equilibrium_matrix_numba(pts)),
        ("stat_matrices", lambda: K.stat_matrices_numpy(mat, pts), lambda: K.stat_matrices_numba(mat, pts)),
        ("apply_blocks_kin", lambda: K.apply_blocks_numpy(blocks, vecs, True), lambda: K.apply_blocks_numba(blocks, vecs, True)),
    ]
    print(f"{n} vertices, {len(edges)} edges, best of {args.repeat}")
    print(f"{'kernel':20s} {'numpy ms':>10s} {'numba ms':>10s} {'speedup':>8s}")
    for name, np_fn, nb_fn in cases:
        a, b = np_fn(), nb_fn()  # also compiles the numba version
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12), name
        t_np, t_nb = best(np_fn, args.repeat), best(nb_fn, args.repeat)
        print(f"{name:20s} {1e3 * t_np:10.3f} {1e3 * t_nb:10.3f} {t_np / t_nb:8.2f}")


if __name__ == "__main__":
    main()
