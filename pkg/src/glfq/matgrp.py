"""GL_n(F_q) structure: conjugacy classes by elementary divisors,
centralizer orders, the (n,n)-parabolic of GL_2n, orbits in M_n(F_q),
and the embedded torus F_{q^n}^x < GL_n(F_q).

Matrices are int64-encoded (see glfq.kernels); classes are labelled by
the multiset of (irreducible polynomial, partition) pairs coming from
the kernel filtration of f(M)^j, which is a complete conjugation
invariant (rational canonical form).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

import numpy as np

from . import gf, kernels

GL_CLASS = "gl-class"
MSD_ORBIT = "msd-orbit"


class BudgetError(RuntimeError):
    """An exhaustive enumeration was asked for beyond the desk-scale cap."""


def gl_order(n, q):
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def gaussian_binomial(m, k, q):
    num = den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def partitions(k):
    """All partitions of k as descending tuples."""
    if k == 0:
        return [()]
    out = []

    def rec(rest, maxpart, cur):
        if rest == 0:
            out.append(tuple(cur))
            return
        for part in range(min(rest, maxpart), 0, -1):
            cur.append(part)
            rec(rest - part, part, cur)
            cur.pop()

    rec(k, k, [])
    return out


def conjugate_partition(lam):
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p >= j) for j in range(1, lam[0] + 1))


# ---------------------------------------------------------------------------
# Matrix space

@lru_cache(maxsize=None)
def mat_space(n, q):
    return MatSpace(n, q)


class MatSpace:
    """n x n matrices over F_q with int64 row-major base-q encoding."""

    def __init__(self, n, q):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.q = q
        self.sf = gf.small_field(q)
        self.size = q ** (n * n)
        self.identity = self.encode(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def encode(self, rows):
        enc = 0
        for x in reversed([e for row in rows for e in row]):
            enc = enc * self.q + int(x)
        return enc

    def decode(self, enc):
        n, q = self.n, self.q
        flat = []
        for _ in range(n * n):
            flat.append(enc % q)
            enc //= q
        return [flat[i * n:(i + 1) * n] for i in range(n)]

    def mul(self, a, b):
        return int(kernels.batch_matmul(
            np.array([a], dtype=np.int64), np.array([b], dtype=np.int64),
            self.n, self.sf)[0])

    def inv(self, a):
        r = int(kernels.batch_inverse(np.array([a], dtype=np.int64), self.n, self.sf)[0])
        if r < 0:
            raise ZeroDivisionError("matrix is singular")
        return r

    def conj(self, g, x):
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def trace(self, enc):
        F = self.sf.field
        acc = 0
        rows = self.decode(enc)
        for i in range(self.n):
            acc = F.add(acc, rows[i][i])
        return acc

    def transpose(self, enc):
        rows = self.decode(enc)
        return self.encode([[rows[j][i] for j in range(self.n)]
                            for i in range(self.n)])

    def all_matrices(self):
        if self.size > 1 << 26:
            raise BudgetError(f"dense enumeration of {self.size} matrices")
        return np.arange(self.size, dtype=np.int64)

    def group_elements(self):
        """All of GL_n(F_q), encoded (filters the full space)."""
        mats = self.all_matrices()
        inv = kernels.batch_inverse(mats, self.n, self.sf)
        return mats[inv >= 0]

    def random_matrices(self, rng, count):
        flat = rng.integers(0, self.q, size=(count, self.n * self.n))
        pows = self.q ** np.arange(self.n * self.n, dtype=np.int64)
        return (flat * pows).sum(axis=1).astype(np.int64)

    def block_diag(self, blocks):
        """blocks: list of (size, enc) in their own spaces."""
        total = sum(sz for sz, _ in blocks)
        rows = [[0] * total for _ in range(total)]
        off = 0
        for sz, enc in blocks:
            sub = mat_space(sz, self.q).decode(enc)
            for i in range(sz):
                for j in range(sz):
                    rows[off + i][off + j] = sub[i][j]
            off += sz
        assert total == self.n
        return self.encode(rows)

    def __repr__(self):
        return f"MatSpace({self.n}, GF({self.q}))"


@dataclass(frozen=True)
class Matrix:
    """Thin wrapper used at module boundaries; hot paths use raw encodings."""
    n: int
    q: int
    enc: int

    @property
    def rows(self):
        return tuple(tuple(r) for r in mat_space(self.n, self.q).decode(self.enc))

    @classmethod
    def from_rows(cls, rows, q):
        n = len(rows)
        return cls(n, q, mat_space(n, q).encode(rows))

    def __mul__(self, other):
        assert (self.n, self.q) == (other.n, other.q)
        return Matrix(self.n, self.q, mat_space(self.n, self.q).mul(self.enc, other.enc))


# ---------------------------------------------------------------------------
# Polynomials over F_q (little-endian tuples including the leading coeff)

def poly_divmod(a, b, F):
    a = list(a)
    db = len(b) - 1
    assert b[-1] == 1, "divisor must be monic"
    quot = [0] * max(0, len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            quot[k - db] = c
            for i in range(db + 1):
                a[k - db + i] = F.sub(a[k - db + i], F.mul(c, b[i]))
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return tuple(quot), tuple(a)


def poly_mul(a, b, F):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return tuple(out)


def poly_pow(a, e, F):
    out = (1,)
    for _ in range(e):
        out = poly_mul(out, a, F)
    return out


def poly_str(poly):
    terms = []
    for i in range(len(poly) - 1, -1, -1):
        c = poly[i]
        if not c and not (i == 0 and not terms):
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append("x" if c == 1 else f"{c}x")
        else:
            terms.append(f"x^{i}" if c == 1 else f"{c}x^{i}")
    return "+".join(terms) if terms else "0"


@lru_cache(maxsize=None)
def irreducible_polys(q, d):
    """All monic irreducibles of degree d over F_q, lexicographic order."""
    F = gf.small_field(q).field
    if d == 1:
        return tuple((c, 1) for c in range(q))
    lower = []
    for dd in range(1, d // 2 + 1):
        lower.extend(irreducible_polys(q, dd))
    out = []
    for enc in range(q ** d):
        coeffs = tuple((enc // q ** i) % q for i in range(d)) + (1,)
        if all(poly_divmod(coeffs, f, F)[1] != (0,) for f in lower):
            out.append(coeffs)
    return tuple(out)


@lru_cache(maxsize=None)
def factor_monic(q, poly):
    """Factor a monic polynomial into (irreducible, multiplicity) pairs."""
    F = gf.small_field(q).field
    rest = poly
    out = []
    d = 1
    while len(rest) > 1:
        if d > len(rest) - 1:
            raise AssertionError(f"factorization failed for {poly}")
        for f in irreducible_polys(q, d):
            mult = 0
            while True:
                quot, rem = poly_divmod(rest, f, F)
                if rem != (0,):
                    break
                rest = quot
                mult += 1
            if mult:
                out.append((f, mult))
            if len(rest) == 1:
                break
        d += 1
    return tuple(out)


# ---------------------------------------------------------------------------
# Class labels

@dataclass(frozen=True)
class ClassLabel:
    """Conjugation invariant: multiset of (irreducible poly, partition).

    kind 'gl-class' labels GL_n conjugacy classes (no factor x allowed);
    'msd-orbit' labels conjugation orbits of arbitrary square matrices.
    """
    kind: str
    pairs: tuple  # ((poly, partition), ...) canonically sorted

    def __post_init__(self):
        assert self.kind in (GL_CLASS, MSD_ORBIT)
        if self.kind == GL_CLASS:
            assert all(p[0][0] != 0 for p in self.pairs), \
                "gl-class label contains the polynomial x"

    @property
    def n(self):
        return sum((len(p) - 1) * sum(lam) for p, lam in self.pairs)

    def __str__(self):
        return " ".join(f"({poly_str(p)})^{list(lam)}" for p, lam in self.pairs)

    def to_json(self):
        return {"kind": self.kind,
                "pairs": [[list(p), list(lam)] for p, lam in self.pairs]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["kind"],
                   canonical_pairs([(tuple(p), tuple(lam)) for p, lam in obj["pairs"]]))


def canonical_pairs(pairs):
    return tuple(sorted(pairs, key=lambda fp: (len(fp[0]), fp[0], fp[1])))


def classify(space, enc, kind=GL_CLASS):
    """ClassLabel of one encoded matrix."""
    return classify_many(space, np.array([enc], dtype=np.int64), kind)[0]


def classify_many(space, encs, kind=GL_CLASS):
    """Labels for a batch, grouping by charpoly so the kernel filtration
    runs only on matrices with repeated factors."""
    n, q, sf = space.n, space.q, space.sf
    encs = np.asarray(encs, dtype=np.int64)
    cps = kernels.batch_charpoly(encs, n, sf)
    labels = np.empty(len(encs), dtype=object)
    order = np.argsort(cps, kind="stable")
    sorted_cps = cps[order]
    boundaries = np.flatnonzero(np.r_[True, sorted_cps[1:] != sorted_cps[:-1]])
    for b, e in zip(boundaries, np.r_[boundaries[1:], len(encs)]):
        idxs = order[b:e]
        cp_digits = tuple(int(sorted_cps[b] // q ** i) % q for i in range(n)) + (1,)
        factors = factor_monic(q, cp_digits)
        if kind == GL_CLASS and cp_digits[0] == 0:
            raise ValueError("singular matrix classified as gl-class")
        fixed = [(f, (1,)) for f, m in factors if m == 1]
        repeated = [(f, m) for f, m in factors if m > 1]
        if not repeated:
            label = ClassLabel(kind, canonical_pairs(fixed))
            for i in idxs:
                labels[i] = label
            continue
        # kernel filtration per repeated factor
        sub = encs[idxs]
        sig = [[] for _ in range(len(sub))]
        for f, m in repeated:
            degf = len(f) - 1
            kers = np.zeros((m + 1, len(sub)), dtype=np.int64)
            for j in range(1, m + 1):
                ranks = kernels.batch_poly_rank(
                    sub, np.array(f, dtype=np.int64), j, n, sf)
                kers[j] = n - ranks
            deltas = (kers[1:] - kers[:-1]) // degf  # parts >= j, per matrix
            for t in range(len(sub)):
                d = deltas[:, t]
                lam = []
                for j in range(1, m + 1):
                    nxt = d[j] if j < m else 0
                    lam.extend([j] * int(d[j - 1] - nxt))
                lam.sort(reverse=True)
                assert sum(lam) == m
                sig[t].append((f, tuple(lam)))
        for t, i in enumerate(idxs):
            labels[i] = ClassLabel(kind, canonical_pairs(fixed + sig[t]))
    return list(labels)


def centralizer_order(label, q):
    """|Z_{GL_n}(m)| for any m with this label (works for singular m too)."""
    total = Fraction(1)
    for poly, lam in label.pairs:
        Q = q ** (len(poly) - 1)
        conj = conjugate_partition(lam)
        part = Fraction(Q) ** sum(c * c for c in conj)
        mults = {}
        for p in lam:
            mults[p] = mults.get(p, 0) + 1
        for m in mults.values():
            for j in range(1, m + 1):
                part *= 1 - Fraction(1, Q ** j)
        total *= part
    assert total.denominator == 1
    return int(total)


def class_size(label, n, q):
    z = centralizer_order(label, q)
    g = gl_order(n, q)
    assert g % z == 0
    return g // z


def companion(poly, q):
    """Companion matrix encoding of a monic polynomial."""
    F = gf.small_field(q).field
    d = len(poly) - 1
    rows = [[0] * d for _ in range(d)]
    for i in range(d - 1):
        rows[i + 1][i] = 1
    for i in range(d):
        rows[i][d - 1] = F.neg(poly[i])
    return mat_space(d, q).encode(rows)


def representative(label, n, q):
    """Block-diagonal companion form, deterministic block order."""
    F = gf.small_field(q).field
    blocks = []
    for poly, lam in label.pairs:
        for part in sorted(lam, reverse=True):
            g = poly_pow(poly, part, F)
            blocks.append((len(g) - 1, companion(g, q)))
    return mat_space(n, q).block_diag(blocks)


@dataclass(frozen=True)
class ClassData:
    label: ClassLabel
    size: int
    rep: int


@lru_cache(maxsize=None)
def enumerate_classes(n, q, kind=GL_CLASS):
    """All labels with sizes and representatives, canonically ordered.

    Label arithmetic only; no group enumeration.  Sizes sum to |GL_n|
    for gl-class and to q^(n^2) for msd-orbit (checked in tests)."""
    polys = []
    for d in range(1, n + 1):
        for f in irreducible_polys(q, d):
            if kind == GL_CLASS and f[0] == 0:
                continue
            polys.append(f)
    out = []

    def rec(i, budget, chosen):
        if budget == 0:
            label = ClassLabel(kind, canonical_pairs(chosen))
            out.append(ClassData(label, class_size(label, n, q),
                                 representative(label, n, q)))
            return
        if i == len(polys):
            return
        f = polys[i]
        d = len(f) - 1
        rec(i + 1, budget, chosen)
        for w in range(1, budget // d + 1):
            for lam in partitions(w):
                rec(i + 1, budget - w * d, chosen + [(f, lam)])

    rec(0, n, [])
    out.sort(key=lambda c: tuple(c.label.pairs))
    return tuple(out)


def identity_label(n, q):
    one = gf.small_field(q).field.neg(1)  # constant of x - 1
    return ClassLabel(GL_CLASS, (((one, 1), (1,) * n),))


# ---------------------------------------------------------------------------
# (n,n)-parabolic of GL_2n

@lru_cache(maxsize=None)
def parabolic_data(n, q):
    return ParabolicData(n, q)


class ParabolicData:
    """Block upper-triangular P < G = GL_2n with Levi GL_n x GL_n and
    unipotent radical N = {u(X)}; coset representatives for G/P are the
    column-echelon bases of n-dimensional subspaces of F_q^2n, completed
    by standard basis vectors."""

    def __init__(self, n, q):
        self.n = n
        self.q = q
        self.space = mat_space(2 * n, q)
        self.levi_space = mat_space(n, q)
        self.coset_reps = self._build_transversal()
        assert len(self.coset_reps) == gaussian_binomial(2 * n, n, q)

    def _build_transversal(self):
        n, q = self.n, self.q
        m = 2 * n
        reps = []
        for pivots in combinations(range(m), n):
            free_pos = []
            for j, r in enumerate(pivots):
                for row in range(r + 1, m):
                    if row not in pivots:
                        free_pos.append((row, j))
            for vals in product(range(q), repeat=len(free_pos)):
                cols = [[0] * m for _ in range(n)]
                for j, r in enumerate(pivots):
                    cols[j][r] = 1
                for (row, j), v in zip(free_pos, vals):
                    cols[j][row] = v
                comp = [r for r in range(m) if r not in pivots]
                rows = [[0] * m for _ in range(m)]
                for j in range(n):
                    for i in range(m):
                        rows[i][j] = cols[j][i]
                for jj, r in enumerate(comp):
                    rows[r][n + jj] = 1
                reps.append(self.space.encode(rows))
        return np.array(reps, dtype=np.int64)

    def in_parabolic(self, enc):
        rows = self.space.decode(enc)
        n = self.n
        return all(rows[i][j] == 0 for i in range(n, 2 * n) for j in range(n))

    def levi_project(self, enc):
        rows = self.space.decode(enc)
        n = self.n
        a = [[rows[i][j] for j in range(n)] for i in range(n)]
        d = [[rows[n + i][n + j] for j in range(n)] for i in range(n)]
        return self.levi_space.encode(a), self.levi_space.encode(d)

    def u(self, x_enc):
        """Unipotent element with upper-right block X."""
        xrows = self.levi_space.decode(x_enc)
        n = self.n
        rows = [[1 if i == j else 0 for j in range(2 * n)] for i in range(2 * n)]
        for i in range(n):
            for j in range(n):
                rows[i][n + j] = xrows[i][j]
        return self.space.encode(rows)

    def diag(self, a_enc, d_enc):
        ar = self.levi_space.decode(a_enc)
        dr = self.levi_space.decode(d_enc)
        n = self.n
        rows = [[0] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            for j in range(n):
                rows[i][j] = ar[i][j]
                rows[n + i][n + j] = dr[i][j]
        return self.space.encode(rows)

    def unipotent_coords(self):
        """The bijection M_n(F_q) -> N on encodings: X -> u(X)."""
        return [(x, self.u(x)) for x in range(self.levi_space.size)]


# ---------------------------------------------------------------------------
# The torus F_{q^n}^x inside GL_n(F_q)

@lru_cache(maxsize=None)
def torus_embedding(n, q):
    return TorusEmbedding(n, q)


class TorusEmbedding:
    """Multiplication action of F_{q^n}^x on itself in the power basis
    {1, g, ..., g^(n-1)} over F_q: an injective homomorphism whose image
    is the unit group of the F_q-algebra generated by the companion
    matrix of the level's defining polynomial."""

    def __init__(self, n, q):
        p, f = gf.prime_power(q)
        self.n = n
        self.q = q
        self.tower = gf.build_tower(p, f, [n])
        self.space = mat_space(n, q)
        self._mat = {}
        self._elem = {}
        L = self.tower.level(1)
        for k in range(L.size - 1):
            x = int(L.exp[k])
            m = self._mult_matrix(x)
            self._mat[x] = m
            self._elem[m] = x
        assert len(self._elem) == L.size - 1, "embedding not injective"

    def _mult_matrix(self, x):
        n = self.n
        L = self.tower.level(1)
        cols = []
        for i in range(n):
            gi = L.pow(L.generator, i) if i else 1
            if n == 1:
                cols.append((self.tower.project(L.mul(x, gi), 1, 0),))
            else:
                cols.append(self.tower.to_coeffs(L.mul(x, gi), 1))
        rows = [[cols[j][i] for j in range(n)] for i in range(n)]
        return self.space.encode(rows)

    def matrix(self, x):
        """x: level-1 encoding of a nonzero element of F_{q^n}."""
        return self._mat[x]

    def element(self, enc):
        """Inverse map; None when the matrix is not in the torus."""
        return self._elem.get(enc)

    def matrices(self):
        return self._mat

    def transversal(self, group_elements):
        """Coset representatives of GL_n / T, by greedy sweep in encoding
        order (deterministic)."""
        seen = set()
        reps = []
        space = self.space
        torus = list(self._mat.values())
        for g in sorted(int(x) for x in group_elements):
            if g in seen:
                continue
            reps.append(g)
            for t in torus:
                seen.add(space.mul(g, t))
        assert len(reps) * len(torus) == len(group_elements)
        return np.array(reps, dtype=np.int64)
