"""Backend agreement: every kernel must give identical results on the
compiled and pure-Python paths, checked against independent numpy oracles
where one exists."""

import numpy as np
import pytest

from glfq import gf, kernels


def encode(mat, q):
    enc = 0
    for x in reversed([e for row in mat for e in row]):
        enc = enc * q + int(x)
    return enc


def decode(enc, n, q):
    out = []
    for _ in range(n * n):
        out.append(enc % q)
        enc //= q
    return [out[i * n:(i + 1) * n] for i in range(n)]


def random_mats(rng, count, n, q):
    return np.array([encode(rng.integers(0, q, (n, n)), q) for _ in range(count)],
                    dtype=np.int64)


CASES = [(2, 2), (2, 3), (3, 3), (2, 4), (4, 2), (3, 4), (2, 5), (2, 7), (4, 3)]


@pytest.mark.parametrize("n,q", CASES)
def test_backends_agree(n, q):
    sf = gf.small_field(q)
    rng = np.random.default_rng(12345 + 10 * n + q)
    A = random_mats(rng, 60, n, q)
    B = random_mats(rng, 60, n, q)
    impls = kernels.implementations()
    results = {}
    for name, mod in impls:
        results[name] = (
            mod.batch_matmul(A, B, n, sf),
            mod.batch_inverse(A, n, sf),
            mod.batch_charpoly(A, n, sf),
            mod.batch_poly_rank(A, np.array([0, 1], dtype=np.int64), n, n, sf),
            mod.trace_phi_histogram(A, int(B[0]), n, sf),
        )
    names = list(results)
    assert len(names) >= 1
    for other in names[1:]:
        for got, want in zip(results[other], results[names[0]]):
            assert np.array_equal(got, want)


def naive_matmul(a, b, F):
    n = len(a)
    return [[_dotsum(a, b, i, j, F) for j in range(n)] for i in range(n)]


def _dotsum(a, b, i, j, F):
    acc = 0
    for k in range(len(a)):
        acc = F.add(acc, F.mul(a[i][k], b[k][j]))
    return acc


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2), (2, 4), (4, 3)])
def test_matmul_against_field_ops(n, q):
    sf = gf.small_field(q)
    rng = np.random.default_rng(7)
    A = random_mats(rng, 30, n, q)
    B = random_mats(rng, 30, n, q)
    got = kernels.batch_matmul(A, B, n, sf)
    for a, b, g in zip(A, B, got):
        want = naive_matmul(decode(int(a), n, q), decode(int(b), n, q), sf.field)
        assert int(g) == encode(want, q)


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2), (3, 3), (4, 2)])
def test_inverse_roundtrip(n, q):
    sf = gf.small_field(q)
    rng = np.random.default_rng(11)
    A = random_mats(rng, 200, n, q)
    inv = kernels.batch_inverse(A, n, sf)
    eye = encode([[1 if i == j else 0 for j in range(n)] for i in range(n)], q)
    ok = inv >= 0
    prod = kernels.batch_matmul(A[ok], inv[ok], n, sf)
    assert np.all(prod == eye)
    # singular exactly when rank < n
    ranks = kernels.batch_poly_rank(A, np.array([0, 1], dtype=np.int64), 1, n, sf)
    assert np.array_equal(inv < 0, ranks < n)


def test_charpoly_2x2_formula():
    # c0 = det, c1 = -trace
    q, n = 5, 2
    sf = gf.small_field(q)
    rng = np.random.default_rng(3)
    A = random_mats(rng, 100, n, q)
    cps = kernels.batch_charpoly(A, n, sf)
    F = sf.field
    for a, cp in zip(A, cps):
        m = decode(int(a), n, q)
        det = F.sub(F.mul(m[0][0], m[1][1]), F.mul(m[0][1], m[1][0]))
        tr = F.add(m[0][0], m[1][1])
        assert int(cp) % q == det
        assert (int(cp) // q) % q == F.neg(tr)


def test_charpoly_cayley_hamilton():
    # f(M) = 0 for the computed charpoly, all backends
    for n, q in [(2, 3), (3, 3), (4, 2), (3, 4)]:
        sf = gf.small_field(q)
        rng = np.random.default_rng(n * q)
        A = random_mats(rng, 50, n, q)
        cps = kernels.batch_charpoly(A, n, sf)
        for a, cp in zip(A, cps):
            digs = [(int(cp) // q ** i) % q for i in range(n)] + [1]
            r = kernels.batch_poly_rank(np.array([a]), np.array(digs, dtype=np.int64),
                                        1, n, sf)
            assert r[0] == 0


def test_trace_phi_histogram_total():
    sf = gf.small_field(3)
    rng = np.random.default_rng(1)
    A = random_mats(rng, 81, 2, 3)
    h = kernels.trace_phi_histogram(A, int(A[0]), 2, sf)
    assert h.sum() == 81
