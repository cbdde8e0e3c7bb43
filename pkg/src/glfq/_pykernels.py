"""Pure-Python batch kernels for matrices over small finite fields.

Reference implementation; glfq._ckernels is the compiled twin with the
same signatures.  Matrices are int64-encoded: row-major base-q digits,
entry (i,j) at digit i*n+j.  Field ops come in as dense lookup tables.
"""

import numpy as np


def backend_name():
    return "python"


def _digits(enc, n2, q):
    out = [0] * n2
    for i in range(n2):
        out[i] = enc % q
        enc //= q
    return out


def _encode(digs, q):
    enc = 0
    for d in reversed(digs):
        enc = enc * q + d
    return enc


def _mat_mul(a, b, n, q, mul, add):
    c = [0] * (n * n)
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = add[acc][mul[a[i * n + k]][b[k * n + j]]]
            c[i * n + j] = acc
    return c


def _mat_inv(a, n, q, mul, add, inv, neg):
    """Gauss-Jordan; returns None when singular."""
    m = [row[:] for row in (a[i * n:(i + 1) * n] for i in range(n))]
    e = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = -1
        for row in range(col, n):
            if m[row][col]:
                piv = row
                break
        if piv < 0:
            return None
        m[col], m[piv] = m[piv], m[col]
        e[col], e[piv] = e[piv], e[col]
        s = inv[m[col][col]]
        m[col] = [mul[s][x] for x in m[col]]
        e[col] = [mul[s][x] for x in e[col]]
        for row in range(n):
            if row != col and m[row][col]:
                f = neg[m[row][col]]
                m[row] = [add[x][mul[f][y]] for x, y in zip(m[row], m[col])]
                e[row] = [add[x][mul[f][y]] for x, y in zip(e[row], e[col])]
    out = []
    for row in e:
        out.extend(row)
    return out


def _rank(a, n, q, mul, add, inv, neg):
    m = [list(a[i * n:(i + 1) * n]) for i in range(n)]
    r = 0
    for col in range(n):
        piv = -1
        for row in range(r, n):
            if m[row][col]:
                piv = row
                break
        if piv < 0:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = inv[m[r][col]]
        m[r] = [mul[s][x] for x in m[r]]
        for row in range(r + 1, n):
            if m[row][col]:
                f = neg[m[row][col]]
                m[row] = [add[x][mul[f][y]] for x, y in zip(m[row], m[r])]
        r += 1
    return r


def _det(a, n, q, mul, add, inv, neg):
    m = [list(a[i * n:(i + 1) * n]) for i in range(n)]
    det = 1
    for col in range(n):
        piv = -1
        for row in range(col, n):
            if m[row][col]:
                piv = row
                break
        if piv < 0:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = neg[det]
        det = mul[det][m[col][col]]
        s = inv[m[col][col]]
        for row in range(col + 1, n):
            if m[row][col]:
                f = neg[mul[s][m[row][col]]]
                m[row] = [add[x][mul[f][y]] for x, y in zip(m[row], m[col])]
    return det


def _tables(sf):
    mul = sf.mul.tolist()
    add = sf.add.tolist()
    inv = sf.inv.tolist()
    neg = sf.neg.tolist()
    return mul, add, inv, neg


def batch_matmul(A, B, n, sf):
    """Entrywise products of two equal-length arrays of encoded matrices."""
    q = sf.q
    mul, add, _, _ = _tables(sf)
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    out = np.empty(len(A), dtype=np.int64)
    n2 = n * n
    for idx in range(len(A)):
        a = _digits(int(A[idx]), n2, q)
        b = _digits(int(B[idx]), n2, q)
        out[idx] = _encode(_mat_mul(a, b, n, q, mul, add), q)
    return out


def batch_inverse(A, n, sf):
    """Encoded inverses; -1 marks singular input."""
    q = sf.q
    mul, add, inv, neg = _tables(sf)
    A = np.asarray(A, dtype=np.int64)
    out = np.empty(len(A), dtype=np.int64)
    n2 = n * n
    for idx in range(len(A)):
        a = _digits(int(A[idx]), n2, q)
        m = _mat_inv(a, n, q, mul, add, inv, neg)
        out[idx] = -1 if m is None else _encode(m, q)
    return out


def batch_charpoly(A, n, sf):
    """Encoded monic characteristic polynomials (digits c_0..c_{n-1})."""
    q = sf.q
    mul, add, inv, neg = _tables(sf)
    A = np.asarray(A, dtype=np.int64)
    out = np.empty(len(A), dtype=np.int64)
    n2 = n * n
    subsets = [[] for _ in range(n + 1)]
    for mask in range(1, 1 << n):
        idxs = [i for i in range(n) if mask >> i & 1]
        subsets[len(idxs)].append(idxs)
    for idx in range(len(A)):
        a = _digits(int(A[idx]), n2, q)
        # char(x) = sum_k (-1)^k e_k x^(n-k), e_k = sum of principal k-minors
        coeffs = [0] * n
        for k in range(1, n + 1):
            ek = 0
            for idxs in subsets[k]:
                sub = [a[i * n + j] for i in idxs for j in idxs]
                ek = add[ek][_det(sub, k, q, mul, add, inv, neg)]
            coeffs[n - k] = neg[ek] if k % 2 else ek
        out[idx] = _encode(coeffs, q)
    return out


def batch_poly_rank(A, poly, power, n, sf):
    """Rank of f(M)^power for each encoded matrix; poly includes the
    leading coefficient, little-endian."""
    q = sf.q
    mul, add, inv, neg = _tables(sf)
    A = np.asarray(A, dtype=np.int64)
    poly = [int(c) for c in poly]
    out = np.empty(len(A), dtype=np.int64)
    n2 = n * n
    eye = [1 if i % (n + 1) == 0 else 0 for i in range(n2)]
    for idx in range(len(A)):
        a = _digits(int(A[idx]), n2, q)
        p = [mul[poly[-1]][e] for e in eye]
        for c in reversed(poly[:-1]):
            p = _mat_mul(p, a, n, q, mul, add)
            if c:
                for i in range(n):
                    p[i * n + i] = add[p[i * n + i]][c]
        r = p
        for _ in range(power - 1):
            r = _mat_mul(r, p, n, q, mul, add)
        out[idx] = _rank(r, n, q, mul, add, inv, neg)
    return out


def class_mult_coeffs(elems, inv_elems, reps, class_of, n, sf):
    """a[i, j, k] = #{x in C_i : x^{-1} z_k in C_j} over the whole group."""
    q = sf.q
    mul, add, _, _ = _tables(sf)
    elems = np.asarray(elems, dtype=np.int64)
    inv_elems = np.asarray(inv_elems, dtype=np.int64)
    reps = np.asarray(reps, dtype=np.int64)
    class_of = np.asarray(class_of, dtype=np.int64)
    K = len(reps)
    out = np.zeros((K, K, K), dtype=np.int64)
    n2 = n * n
    rep_digits = [_digits(int(r), n2, q) for r in reps]
    for idx in range(len(elems)):
        i = int(class_of[elems[idx]])
        xinv = _digits(int(inv_elems[idx]), n2, q)
        for k in range(K):
            m = _mat_mul(xinv, rep_digits[k], n, q, mul, add)
            out[i, int(class_of[_encode(m, q)]), k] += 1
    return out


def trace_phi_histogram(X, y, n, sf):
    """Histogram of tr(X_i * y) in GF(q) over all encoded X_i."""
    q = sf.q
    mul, add, _, _ = _tables(sf)
    X = np.asarray(X, dtype=np.int64)
    n2 = n * n
    b = _digits(int(y), n2, q)
    hist = np.zeros(q, dtype=np.int64)
    for idx in range(len(X)):
        a = _digits(int(X[idx]), n2, q)
        t = 0
        for i in range(n):
            for k in range(n):
                t = add[t][mul[a[i * n + k]][b[k * n + i]]]
        hist[t] += 1
    return hist
