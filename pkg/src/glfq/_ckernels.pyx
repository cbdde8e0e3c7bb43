# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels for matrices over small finite fields.

Twin of glfq._pykernels: same signatures, same results.  Matrices are
int64-encoded (row-major base-q digits); GF(q) arithmetic arrives as
dense lookup tables so the kernels never see the field representation.
Matrix size is capped at n <= 6 by the fixed work buffers.
"""

import numpy as np

cimport cython
from libc.string cimport memcpy

ctypedef long long i64

DEF NMAX = 6
DEF N2MAX = 36


def backend_name():
    return "c"


cdef inline void c_digits(i64 enc, int n2, i64 q, i64 *out) noexcept nogil:
    cdef int i
    for i in range(n2):
        out[i] = enc % q
        enc //= q


cdef inline i64 c_encode(i64 *digs, int n2, i64 q) noexcept nogil:
    cdef i64 enc = 0
    cdef int i
    for i in range(n2 - 1, -1, -1):
        enc = enc * q + digs[i]
    return enc


cdef inline void c_matmul(i64 *a, i64 *b, i64 *c, int n,
                          const i64[:, :] mul, const i64[:, :] add) noexcept nogil:
    cdef int i, j, k
    cdef i64 acc
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = add[acc, mul[a[i * n + k], b[k * n + j]]]
            c[i * n + j] = acc


cdef inline int c_inverse(i64 *a, i64 *out, int n,
                          const i64[:, :] mul, const i64[:, :] add,
                          const i64[:] inv, const i64[:] neg) noexcept nogil:
    """Gauss-Jordan into out; returns 0 when singular."""
    cdef i64 m[N2MAX]
    cdef i64 e[N2MAX]
    cdef int i, j, col, row, piv
    cdef i64 s, f, t
    for i in range(n * n):
        m[i] = a[i]
        e[i] = 0
    for i in range(n):
        e[i * n + i] = 1
    for col in range(n):
        piv = -1
        for row in range(col, n):
            if m[row * n + col] != 0:
                piv = row
                break
        if piv < 0:
            return 0
        if piv != col:
            for j in range(n):
                t = m[col * n + j]; m[col * n + j] = m[piv * n + j]; m[piv * n + j] = t
                t = e[col * n + j]; e[col * n + j] = e[piv * n + j]; e[piv * n + j] = t
        s = inv[m[col * n + col]]
        for j in range(n):
            m[col * n + j] = mul[s, m[col * n + j]]
            e[col * n + j] = mul[s, e[col * n + j]]
        for row in range(n):
            if row != col and m[row * n + col] != 0:
                f = neg[m[row * n + col]]
                for j in range(n):
                    m[row * n + j] = add[m[row * n + j], mul[f, m[col * n + j]]]
                    e[row * n + j] = add[e[row * n + j], mul[f, e[col * n + j]]]
    for i in range(n * n):
        out[i] = e[i]
    return 1


cdef inline int c_rank(i64 *a, int n,
                       const i64[:, :] mul, const i64[:, :] add,
                       const i64[:] inv, const i64[:] neg) noexcept nogil:
    cdef i64 m[N2MAX]
    cdef int i, j, col, row, piv, r
    cdef i64 s, f, t
    for i in range(n * n):
        m[i] = a[i]
    r = 0
    for col in range(n):
        piv = -1
        for row in range(r, n):
            if m[row * n + col] != 0:
                piv = row
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                t = m[r * n + j]; m[r * n + j] = m[piv * n + j]; m[piv * n + j] = t
        s = inv[m[r * n + col]]
        for j in range(n):
            m[r * n + j] = mul[s, m[r * n + j]]
        for row in range(r + 1, n):
            if m[row * n + col] != 0:
                f = neg[m[row * n + col]]
                for j in range(n):
                    m[row * n + j] = add[m[row * n + j], mul[f, m[r * n + j]]]
        r += 1
    return r


cdef inline i64 c_det(i64 *a, int n,
                      const i64[:, :] mul, const i64[:, :] add,
                      const i64[:] inv, const i64[:] neg) noexcept nogil:
    cdef i64 m[N2MAX]
    cdef int i, j, col, row, piv
    cdef i64 s, f, t, det
    for i in range(n * n):
        m[i] = a[i]
    det = 1
    for col in range(n):
        piv = -1
        for row in range(col, n):
            if m[row * n + col] != 0:
                piv = row
                break
        if piv < 0:
            return 0
        if piv != col:
            for j in range(n):
                t = m[col * n + j]; m[col * n + j] = m[piv * n + j]; m[piv * n + j] = t
            det = neg[det]
        det = mul[det, m[col * n + col]]
        s = inv[m[col * n + col]]
        for row in range(col + 1, n):
            if m[row * n + col] != 0:
                f = neg[mul[s, m[row * n + col]]]
                for j in range(n):
                    m[row * n + j] = add[m[row * n + j], mul[f, m[col * n + j]]]
    return det


def batch_matmul(A, B, int n, sf):
    """Entrywise products of two equal-length arrays of encoded matrices."""
    cdef const i64[:, :] mul = sf.mul
    cdef const i64[:, :] add = sf.add
    cdef i64 q = sf.q
    cdef i64[:] Av = np.ascontiguousarray(A, dtype=np.int64)
    cdef i64[:] Bv = np.ascontiguousarray(B, dtype=np.int64)
    out = np.empty(len(A), dtype=np.int64)
    cdef i64[:] ov = out
    cdef i64 a[N2MAX]
    cdef i64 b[N2MAX]
    cdef i64 c[N2MAX]
    cdef Py_ssize_t idx
    cdef int n2 = n * n
    for idx in range(Av.shape[0]):
        c_digits(Av[idx], n2, q, a)
        c_digits(Bv[idx], n2, q, b)
        c_matmul(a, b, c, n, mul, add)
        ov[idx] = c_encode(c, n2, q)
    return out


def batch_inverse(A, int n, sf):
    """Encoded inverses; -1 marks singular input."""
    cdef const i64[:, :] mul = sf.mul
    cdef const i64[:, :] add = sf.add
    cdef const i64[:] inv = sf.inv
    cdef const i64[:] neg = sf.neg
    cdef i64 q = sf.q
    cdef i64[:] Av = np.ascontiguousarray(A, dtype=np.int64)
    out = np.empty(len(A), dtype=np.int64)
    cdef i64[:] ov = out
    cdef i64 a[N2MAX]
    cdef i64 e[N2MAX]
    cdef Py_ssize_t idx
    cdef int n2 = n * n
    for idx in range(Av.shape[0]):
        c_digits(Av[idx], n2, q, a)
        if c_inverse(a, e, n, mul, add, inv, neg):
            ov[idx] = c_encode(e, n2, q)
        else:
            ov[idx] = -1
    return out


def batch_charpoly(A, int n, sf):
    """Encoded monic characteristic polynomials (digits c_0..c_{n-1})."""
    cdef const i64[:, :] mul = sf.mul
    cdef const i64[:, :] add = sf.add
    cdef const i64[:] inv = sf.inv
    cdef const i64[:] neg = sf.neg
    cdef i64 q = sf.q
    cdef i64[:] Av = np.ascontiguousarray(A, dtype=np.int64)
    cdef i64[:] flatv
    cdef i64 nsub[NMAX + 1]
    cdef i64 a[N2MAX]
    cdef i64 sub[N2MAX]
    cdef i64 coeffs[NMAX]
    cdef Py_ssize_t idx
    cdef int n2 = n * n, k2, si, sj, k, off
    cdef i64 ek
    out = np.empty(len(A), dtype=np.int64)
    cdef i64[:] ov = out
    # enumerate index subsets grouped by size, padded to width n
    subs = [[] for _ in range(n + 1)]
    for mask in range(1, 1 << n):
        idxs = [i for i in range(n) if mask >> i & 1]
        subs[len(idxs)].append(idxs)
    flat = []
    nsub[0] = 0
    for kk in range(1, n + 1):
        nsub[kk] = len(subs[kk])
        for idxs in subs[kk]:
            flat.extend(idxs + [0] * (n - len(idxs)))
    flatv = np.array(flat, dtype=np.int64)
    for idx in range(Av.shape[0]):
        c_digits(Av[idx], n2, q, a)
        off = 0
        for k in range(1, n + 1):
            ek = 0
            for k2 in range(nsub[k]):
                for si in range(k):
                    for sj in range(k):
                        sub[si * k + sj] = a[flatv[off + k2 * n + si] * n
                                             + flatv[off + k2 * n + sj]]
                ek = add[ek, c_det(sub, k, mul, add, inv, neg)]
            coeffs[n - k] = neg[ek] if k % 2 else ek
            off += nsub[k] * n
        ov[idx] = c_encode(coeffs, n, q)
    return out


def batch_poly_rank(A, poly, int power, int n, sf):
    """Rank of f(M)^power for each encoded matrix; poly includes the
    leading coefficient, little-endian."""
    cdef const i64[:, :] mul = sf.mul
    cdef const i64[:, :] add = sf.add
    cdef const i64[:] inv = sf.inv
    cdef const i64[:] neg = sf.neg
    cdef i64 q = sf.q
    cdef i64[:] Av = np.ascontiguousarray(A, dtype=np.int64)
    cdef i64[:] pv = np.ascontiguousarray(poly, dtype=np.int64)
    out = np.empty(len(A), dtype=np.int64)
    cdef i64[:] ov = out
    cdef i64 a[N2MAX]
    cdef i64 p[N2MAX]
    cdef i64 r[N2MAX]
    cdef i64 t[N2MAX]
    cdef Py_ssize_t idx
    cdef int n2 = n * n, i, j, d = pv.shape[0] - 1, e
    cdef i64 c
    for idx in range(Av.shape[0]):
        c_digits(Av[idx], n2, q, a)
        for i in range(n2):
            p[i] = 0
        for i in range(n):
            p[i * n + i] = pv[d]
        for j in range(d - 1, -1, -1):
            c_matmul(p, a, t, n, mul, add)
            memcpy(p, t, n2 * sizeof(i64))
            c = pv[j]
            if c != 0:
                for i in range(n):
                    p[i * n + i] = add[p[i * n + i], c]
        memcpy(r, p, n2 * sizeof(i64))
        for e in range(power - 1):
            c_matmul(r, p, t, n, mul, add)
            memcpy(r, t, n2 * sizeof(i64))
        ov[idx] = c_rank(r, n, mul, add, inv, neg)
    return out


def class_mult_coeffs(elems, inv_elems, reps, class_of, int n, sf):
    """a[i, j, k] = #{x in C_i : x^{-1} z_k in C_j} over the whole group."""
    cdef const i64[:, :] mul = sf.mul
    cdef const i64[:, :] add = sf.add
    cdef i64 q = sf.q
    cdef i64[:] ev = np.ascontiguousarray(elems, dtype=np.int64)
    cdef i64[:] iv = np.ascontiguousarray(inv_elems, dtype=np.int64)
    cdef i64[:] rv = np.ascontiguousarray(reps, dtype=np.int64)
    cdef i64[:] cv = np.ascontiguousarray(class_of, dtype=np.int64)
    cdef int K = rv.shape[0]
    out = np.zeros((K, K, K), dtype=np.int64)
    cdef i64[:, :, :] ov = out
    cdef i64 xinv[N2MAX]
    cdef i64 m[N2MAX]
    rep_digits = np.empty((K, n * n), dtype=np.int64)
    cdef i64[:, :] rdv = rep_digits
    cdef int k, j, n2 = n * n
    cdef Py_ssize_t idx
    cdef i64 i_cls
    for k in range(K):
        c_digits(rv[k], n2, q, m)
        for idx in range(n2):
            rdv[k, idx] = m[idx]
    cdef i64 rbuf[N2MAX]
    for idx in range(ev.shape[0]):
        i_cls = cv[ev[idx]]
        c_digits(iv[idx], n2, q, xinv)
        for k in range(K):
            for j in range(n2):
                rbuf[j] = rdv[k, j]
            c_matmul(xinv, rbuf, m, n, mul, add)
            ov[i_cls, cv[c_encode(m, n2, q)], k] += 1
    return out


def trace_phi_histogram(X, y, int n, sf):
    """Histogram of tr(X_i * y) in GF(q) over all encoded X_i."""
    cdef const i64[:, :] mul = sf.mul
    cdef const i64[:, :] add = sf.add
    cdef i64 q = sf.q
    cdef i64[:] Xv = np.ascontiguousarray(X, dtype=np.int64)
    out = np.zeros(int(q), dtype=np.int64)
    cdef i64[:] ov = out
    cdef i64 a[N2MAX]
    cdef i64 b[N2MAX]
    cdef Py_ssize_t idx
    cdef int n2 = n * n, i, k
    cdef i64 t
    c_digits(int(y), n2, q, b)
    for idx in range(Xv.shape[0]):
        c_digits(Xv[idx], n2, q, a)
        t = 0
        for i in range(n):
            for k in range(n):
                t = add[t, mul[a[i * n + k], b[k * n + i]]]
        ov[t] += 1
    return out
