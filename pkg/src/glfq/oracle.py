"""Brute-force character tables for small concrete GL_n(F_q) by the
numeric Dixon-Schneider method: class-multiplication matrices, common
eigenvector splitting over a deterministic seed sequence, characters
recovered from the central-character eigenvalues.

Ground truth for gl2_table (q <= 5) and for the GL_4(F_2) values of the
Deligne-Lusztig construction.
"""

from functools import lru_cache

import numpy as np

from . import gf, kernels, matgrp
from .classfun import ClassFunction, gl_group, verify_orthonormal

MAX_GROUP_ORDER = 10 ** 6
MAX_CLASSES = 64


class SmallGroup:
    """Exhaustively enumerated GL_n(F_q) with its class partition."""

    def __init__(self, n, q):
        order = matgrp.gl_order(n, q)
        if order > MAX_GROUP_ORDER:
            raise matgrp.BudgetError(
                f"|GL_{n}(F_{q})| = {order} exceeds the enumeration budget")
        self.n = n
        self.q = q
        self.space = matgrp.mat_space(n, q)
        self.elements = self.space.group_elements()
        assert len(self.elements) == order
        self.order = order
        self.index = {int(e): i for i, e in enumerate(self.elements)}
        self.inverses = kernels.batch_inverse(self.elements, n, self.space.sf)
        # class partition via labels; must agree with the label arithmetic
        self.group = gl_group(n, q)
        labels = matgrp.classify_many(self.space, self.elements)
        self.class_labels = self.group.labels
        lab_index = {lab: i for i, lab in enumerate(self.class_labels)}
        self.class_of = np.full(self.space.size, -1, dtype=np.int64)
        counts = np.zeros(len(self.class_labels), dtype=np.int64)
        for e, lab in zip(self.elements, labels):
            ci = lab_index[lab]
            self.class_of[int(e)] = ci
            counts[ci] += 1
        self.class_sizes = counts
        assert int(counts.sum()) == order
        for lab, cnt in zip(self.class_labels, counts):
            assert self.group.sizes[lab] == int(cnt), "class size mismatch"
        self.class_reps = np.array([self.group.reps[lab] for lab in self.class_labels],
                                   dtype=np.int64)
        self.identity_class = lab_index[self.group.identity_label]

    @property
    def num_classes(self):
        return len(self.class_labels)

    def spot_check_closure(self, trials=10 ** 4, seed=0):
        rng = np.random.default_rng(seed)
        ii = rng.integers(0, self.order, trials)
        jj = rng.integers(0, self.order, trials)
        prods = kernels.batch_matmul(self.elements[ii], self.elements[jj],
                                     self.n, self.space.sf)
        return all(int(p) in self.index for p in prods)


@lru_cache(maxsize=None)
def enumerate_group(n, q):
    return SmallGroup(n, q)


def _class_matrices(g):
    """M_i with (M_i)[j, k] = a_ijk = #{x in C_i : x^{-1} z_k in C_j};
    the vector (omega_k) of normalized central characters is a common
    eigenvector of every M_i with eigenvalue omega_i."""
    a = kernels.class_mult_coeffs(g.elements, g.inverses, g.class_reps,
                                  g.class_of, g.n, g.space.sf)
    return [a[i] for i in range(g.num_classes)]


def _split_subspaces(subspaces, M, tol):
    out = []
    for V in subspaces:
        d = V.shape[1]
        if d == 1:
            out.append(V)
            continue
        A = V.conj().T @ (M @ V)
        w, W = np.linalg.eig(A)
        order = np.argsort(w.real * 1e6 + w.imag)  # stable grouping order
        groups = []
        scale = 1e-6 * (1.0 + float(np.abs(w).max()))
        for idx in order:
            if groups and abs(w[idx] - w[groups[-1][-1]]) < scale:
                groups[-1].append(idx)
            else:
                groups.append([idx])
        for grp in groups:
            basis = V @ W[:, grp]
            Qb, _ = np.linalg.qr(basis)
            out.append(Qb)
    return out


def character_table(g, max_retries=8):
    """Complete orthonormal irreducible table, canonically ordered by
    (degree, rounded value vector).  Retries the eigenvector splitting
    with fresh random class-sum combinations on a deterministic seed
    sequence until the table passes orthonormality."""
    K = g.num_classes
    if K > MAX_CLASSES:
        raise matgrp.BudgetError(f"{K} classes exceeds the Dixon budget")
    mats = [M.astype(np.complex128) for M in _class_matrices(g)]
    sizes = g.class_sizes.astype(np.float64)
    for attempt in range(max_retries):
        rng = np.random.default_rng(1000 + attempt)
        subspaces = [np.linalg.qr(np.eye(K, dtype=np.complex128))[0]]
        # a few random combinations first, then individual class matrices
        for _ in range(3 + attempt):
            r = rng.uniform(1.0, 2.0, K)
            M = sum(ri * Mi for ri, Mi in zip(r, mats))
            subspaces = _split_subspaces(subspaces, M, 1e-6)
        for Mi in mats:
            if all(V.shape[1] == 1 for V in subspaces):
                break
            subspaces = _split_subspaces(subspaces, Mi, 1e-6)
        if not all(V.shape[1] == 1 for V in subspaces) or len(subspaces) != K:
            continue
        rows = []
        ok = True
        for V in subspaces:
            v = V[:, 0]
            if abs(v[g.identity_class]) < 1e-12:
                ok = False
                break
            omega = v / v[g.identity_class]
            s = float(np.sum(np.abs(omega) ** 2 / sizes))
            deg = (g.order / s) ** 0.5
            if abs(deg - round(deg)) > 1e-6 or round(deg) < 1:
                ok = False
                break
            deg = round(deg)
            chi = omega * deg / sizes
            rows.append((deg, chi))
        if not ok:
            continue
        rows.sort(key=lambda r: (r[0], tuple(np.round(r[1], 6).view(float))))
        table = []
        for i, (deg, chi) in enumerate(rows):
            values = {lab: complex(chi[k]) for k, lab in enumerate(g.class_labels)}
            table.append(ClassFunction(g.group, values, is_character=True,
                                       name=f"oracle[{i}]"))
        if verify_orthonormal(table):
            return table
    raise RuntimeError("Dixon eigenvector splitting failed to converge")


def match_row(table, f, tol=1e-6):
    """Index of the table row equal to f entrywise, or None."""
    for i, chi in enumerate(table):
        if all(abs(chi.values[l] - f.values[l]) <= tol for l in f.group.labels):
            return i
    return None
