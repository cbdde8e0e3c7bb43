"""Fourier transforms on M_n(F_q) with the trace pairing:
fhat(Y) = sum_X f(X) phi(tr(XY)), no normalization on the forward
transform (inverse carries q^(-n^2) and the sign flip), so orbit
indicators transform to algebraic integers.

Functions come in three interchangeable forms: dense (one value per
encoded matrix), sparse (support dict) and invariant (one value per
conjugation orbit).  The dense transform is an axis-by-axis butterfly;
the invariant path goes through the orbit pairing kernel
K(O, O') = sum_{X in O} phi(tr(X Y_{O'})), computed by direct summation
(an independent route, and the one that scales past dense budgets).
"""

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import gf, kernels, matgrp

DENSE_BUDGET = 1 << 26
KERNEL_MAGIC = b"GLFQ-ORBIT-KERNEL-v1\n"


class NotInvariant(ValueError):
    pass


@lru_cache(maxsize=None)
def orbit_context(n, q):
    return OrbitContext(n, q)


class OrbitContext:
    """Conjugation orbits of M_n(F_q): labels, sizes, reps, and (when the
    dense budget allows) the orbit index of every encoded matrix."""

    def __init__(self, n, q):
        self.n = n
        self.q = q
        self.space = matgrp.mat_space(n, q)
        self.classes = matgrp.enumerate_classes(n, q, matgrp.MSD_ORBIT)
        self.labels = [c.label for c in self.classes]
        self.sizes = np.array([c.size for c in self.classes], dtype=np.int64)
        self.reps = np.array([c.rep for c in self.classes], dtype=np.int64)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self._orbit_map = None

    @property
    def num_orbits(self):
        return len(self.labels)

    def orbit_map(self):
        if self._orbit_map is None:
            if self.space.size > DENSE_BUDGET:
                raise matgrp.BudgetError("orbit map needs a dense sweep")
            labels = matgrp.classify_many(self.space, self.space.all_matrices(),
                                          kind=matgrp.MSD_ORBIT)
            self._orbit_map = np.array([self.index[l] for l in labels],
                                       dtype=np.int64)
        return self._orbit_map

    def orbit_elements(self, i):
        return np.flatnonzero(self.orbit_map() == i).astype(np.int64)

    def nilpotent_indices(self):
        x = (0, 1)
        return [i for i, lab in enumerate(self.labels)
                if all(p == x for p, _ in lab.pairs)]

    def semisimple_indices(self):
        return [i for i, lab in enumerate(self.labels)
                if all(set(lam) == {1} for _, lam in lab.pairs)]

    def zero_index(self):
        return self.index[matgrp.classify(self.space, 0, kind=matgrp.MSD_ORBIT)]


@dataclass
class MatFunction:
    """Complex function on M_n(F_q) in dense, sparse or invariant form."""
    n: int
    q: int
    form: str      # "dense" | "sparse" | "invariant"
    data: object

    @property
    def ctx(self):
        return orbit_context(self.n, self.q)

    @classmethod
    def dense(cls, n, q, values):
        values = np.asarray(values, dtype=np.complex128)
        assert len(values) == q ** (n * n)
        return cls(n, q, "dense", values)

    @classmethod
    def sparse(cls, n, q, support):
        return cls(n, q, "sparse", dict(support))

    @classmethod
    def invariant(cls, n, q, by_orbit):
        ctx = orbit_context(n, q)
        vec = np.zeros(ctx.num_orbits, dtype=np.complex128)
        for key, v in by_orbit.items():
            i = key if isinstance(key, int) else ctx.index[key]
            vec[i] = v
        return cls(n, q, "invariant", vec)

    def to_dense(self):
        if self.form == "dense":
            return self
        if self.form == "sparse":
            vec = np.zeros(self.q ** (self.n * self.n), dtype=np.complex128)
            for enc, v in self.data.items():
                vec[enc] = v
            return MatFunction.dense(self.n, self.q, vec)
        return MatFunction.dense(self.n, self.q, self.data[self.ctx.orbit_map()])

    def to_sparse(self):
        dense = self.to_dense().data
        sup = np.flatnonzero(dense != 0)
        return MatFunction.sparse(self.n, self.q,
                                  {int(e): dense[e] for e in sup})

    def to_invariant(self, tol=0.0):
        """Invariant form; tol=0 demands exact constancy per orbit (the
        conversion round-trip), a small tol accepts transform roundoff."""
        if self.form == "invariant":
            return self
        dense = self.to_dense().data
        ctx = self.ctx
        omap = ctx.orbit_map()
        vec = np.zeros(ctx.num_orbits, dtype=np.complex128)
        for i in range(ctx.num_orbits):
            vals = dense[omap == i]
            ref = dense[ctx.reps[i]]
            if np.abs(vals - ref).max() > tol:
                raise NotInvariant(
                    f"unequal values on conjugate matrices in orbit {ctx.labels[i]}")
            vec[i] = ref
        return MatFunction(self.n, self.q, "invariant", vec)

    def is_invariant(self, tol=0.0):
        try:
            self.to_invariant(tol=tol)
            return True
        except NotInvariant:
            return False

    def total_mass(self):
        if self.form == "invariant":
            return complex(np.sum(self.data * self.ctx.sizes))
        return complex(np.sum(self.to_dense().data))

    def norm_squared(self):
        if self.form == "invariant":
            return float(np.sum(np.abs(self.data) ** 2 * self.ctx.sizes))
        return float(np.sum(np.abs(self.to_dense().data) ** 2))

    def negate_argument(self):
        """f(-X) as a new function."""
        sfneg = gf.small_field(self.q).neg
        n2 = self.n * self.n
        idx = np.arange(self.q ** n2, dtype=np.int64)
        neg_idx = _digitwise_map(idx, n2, self.q, sfneg)
        dense = self.to_dense().data
        out = np.empty_like(dense)
        out[neg_idx] = dense
        return MatFunction.dense(self.n, self.q, out)


def _digitwise_map(encs, n2, q, table):
    out = np.zeros_like(encs)
    rest = encs.copy()
    pw = 1
    tab = np.asarray(table, dtype=np.int64)
    for _ in range(n2):
        out += tab[rest % q] * pw
        rest //= q
        pw *= q
    return out


@lru_cache(maxsize=None)
def _transpose_index(n, q):
    n2 = n * n
    idx = np.arange(q ** n2, dtype=np.int64)
    out = np.zeros_like(idx)
    rest = idx.copy()
    for k in range(n2):
        i, j = divmod(k, n)
        out += (rest % q) * q ** (j * n + i)
        rest //= q
    return out


@lru_cache(maxsize=None)
def _phi_matrix(q):
    sf = gf.small_field(q)
    W = np.empty((q, q), dtype=np.complex128)
    for a in range(q):
        for b in range(q):
            W[a, b] = sf.phi[sf.mul[a, b]]
    return W


def fourier(f, threads=None):
    """fhat(Y) = sum_X f(X) phi(tr(XY)).  Goes through the coordinate
    butterfly when the dense budget allows, else through the orbit
    kernel (invariant inputs only)."""
    if f.ctx.space.size > DENSE_BUDGET:
        if f.form != "invariant":
            raise matgrp.BudgetError("dense transform beyond budget; "
                                     "use an invariant-form input")
        return fourier_invariant(f, threads=threads)
    return fourier_dense(f.to_dense())


def fourier_dense(f):
    n, q = f.n, f.q
    n2 = n * n
    if q ** n2 > DENSE_BUDGET:
        raise matgrp.BudgetError(f"dense transform of size {q ** n2}")
    W = _phi_matrix(q)
    arr = np.asarray(f.to_dense().data, dtype=np.complex128).reshape((q,) * n2)
    # C-order reshape: axis t corresponds to digit n2-1-t
    for ax in range(n2):
        arr = np.moveaxis(np.tensordot(arr, W, axes=([ax], [0])), -1, ax)
    flat = arr.reshape(-1)
    # pairing couples digit (i,j) of X with digit (j,i) of Y
    return MatFunction.dense(n, q, flat[_transpose_index(n, q)])


def fourier_naive(f):
    """Quadratic-cost oracle for the dense transform (tests only)."""
    n, q = f.n, f.q
    n2 = n * n
    size = q ** n2
    if size > 6561:
        raise matgrp.BudgetError("naive transform oracle capped at q^(n^2) <= 6561")
    sf = gf.small_field(q)
    dense = f.to_dense().data
    out = np.zeros(size, dtype=np.complex128)
    tidx = _transpose_index(n, q)
    # tr(X Y): digits of X paired against digits of Y^T through mul table
    digits = np.empty((size, n2), dtype=np.int64)
    rest = np.arange(size, dtype=np.int64)
    for k in range(n2):
        digits[:, k] = rest % q
        rest //= q
    mul = sf.mul
    add = sf.add
    phi = sf.phi
    for y in range(size):
        yt = int(tidx[y])
        ydig = [(yt // q ** k) % q for k in range(n2)]
        t = np.zeros(size, dtype=np.int64)
        for k in range(n2):
            t = add[t, mul[digits[:, k], ydig[k]]]
        out[y] = np.sum(dense * phi[t])
    return MatFunction.dense(n, q, out)


# ---------------------------------------------------------------------------
# Orbit kernel path

def _cache_dir():
    env = os.environ.get("GLFQ_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "glfq"


def _kernel_cache_path(n, q):
    mod = gf.small_field(q).field.modulus
    tag = "-".join(str(c) for c in mod)
    return _cache_dir() / f"orbit-kernel-n{n}-q{q}-p{tag}.bin"


def orbit_kernel(n, q, threads=None, use_cache=True):
    """K[O, O'] = sum_{X in O} phi(tr(X Y_{O'})), computed by direct
    summation (integer histograms of tr(X Y) against the phi table)."""
    ctx = orbit_context(n, q)
    path = _kernel_cache_path(n, q)
    if use_cache and path.exists():
        K = _read_kernel(path, n, q, ctx.num_orbits)
        if K is not None:
            return K
    sf = gf.small_field(q)
    m = ctx.num_orbits
    K = np.zeros((m, m), dtype=np.complex128)
    orbit_elems = [ctx.orbit_elements(i) for i in range(m)]

    def row(i):
        out = np.zeros(m, dtype=np.complex128)
        for j in range(m):
            hist = kernels.trace_phi_histogram(orbit_elems[i], int(ctx.reps[j]),
                                               n, sf)
            out[j] = np.dot(hist, sf.phi)
        return out

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            rows = list(ex.map(row, range(m)))
    else:
        rows = [row(i) for i in range(m)]
    for i, r in enumerate(rows):
        K[i] = r
    if use_cache:
        _write_kernel(path, n, q, K)
    return K


def _write_kernel(path, n, q, K):
    path.parent.mkdir(parents=True, exist_ok=True)
    header = json.dumps({"n": n, "q": q,
                         "polynomial": list(gf.small_field(q).field.modulus),
                         "orbits": K.shape[0]}).encode() + b"\n"
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(KERNEL_MAGIC)
        fh.write(header)
        fh.write(np.ascontiguousarray(K).tobytes())
    os.replace(tmp, path)


def _read_kernel(path, n, q, m):
    try:
        with open(path, "rb") as fh:
            if fh.read(len(KERNEL_MAGIC)) != KERNEL_MAGIC:
                return None
            header = json.loads(fh.readline().decode())
            if (header.get("n"), header.get("q"), header.get("orbits")) != (n, q, m):
                return None
            buf = fh.read(m * m * 16)
        return np.frombuffer(buf, dtype=np.complex128).reshape(m, m).copy()
    except (OSError, ValueError, json.JSONDecodeError):
        return None


def fourier_invariant(f, threads=None, use_cache=True):
    """Invariant-path transform: fhat(O') = sum_O f(O) K(O, O')."""
    inv = f.to_invariant()
    K = orbit_kernel(f.n, f.q, threads=threads, use_cache=use_cache)
    return MatFunction(f.n, f.q, "invariant", inv.data @ K)


# ---------------------------------------------------------------------------
# Indicators and spectra

def orbit_indicator(n, q, label):
    ctx = orbit_context(n, q)
    if label not in ctx.index:
        raise KeyError(f"invalid orbit label {label} for M_{n}(F_{q})")
    return MatFunction.invariant(n, q, {ctx.index[label]: 1.0})


def cone_indicator(n, q):
    """Indicator of the nilpotent cone {X : X^n = 0}."""
    ctx = orbit_context(n, q)
    return MatFunction.invariant(n, q, {i: 1.0 for i in ctx.nilpotent_indices()})


def count_nilpotent_brute(n, q):
    """Independent count of X with X^n = 0 over the dense sweep."""
    space = matgrp.mat_space(n, q)
    ranks = kernels.batch_poly_rank(space.all_matrices(),
                                    np.array([0, 1], dtype=np.int64), n,
                                    n, space.sf)
    return int(np.sum(ranks == 0))


def invariant_spectrum(f, threads=None):
    """Coefficients of fhat in the orbit-indicator basis, one per orbit:
    [(label, coefficient, orbit_size), ...]."""
    inv = f.to_invariant(tol=1e-10)  # raises NotInvariant with the orbit
    ctx = inv.ctx
    if ctx.space.size <= DENSE_BUDGET:
        fhat = fourier_dense(inv.to_dense()).to_invariant(tol=1e-8)
        coeffs = fhat.data
    else:
        coeffs = fourier_invariant(inv, threads=threads).data
    return [(ctx.labels[i], complex(coeffs[i]), int(ctx.sizes[i]))
            for i in range(ctx.num_orbits)]


def parseval_check(f):
    """(lhs, rhs) of Parseval: sum |fhat|^2 = q^(n^2) sum |f|^2."""
    fhat = fourier_dense(f.to_dense())
    return fhat.norm_squared(), f.q ** (f.n * f.n) * f.norm_squared()
