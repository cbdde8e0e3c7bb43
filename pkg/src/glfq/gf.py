"""Finite field towers F_p < F_q < F_{q^n} < F_{q^2n} with characters.

Every level is represented directly over the prime field by its Conway
polynomial, so elements of F_{p^d} are integers in [0, p^d) whose base-p
digits are the coefficients of the residue polynomial (little-endian).
The polynomial variable x is a generator of the multiplicative group,
and full exp/log tables make multiplication, norms and embeddings cheap.

Conway compatibility gives canonical subfield embeddings by power maps:
if g_m, g_n are the canonical generators of F_{p^m} < F_{p^n} then
g_m -> g_n^((p^n-1)/(p^m-1)).  In particular Norm(g_n) = g_m on the
nose, which keeps all tower bookkeeping exponent arithmetic.
"""

from cmath import exp as cexp
from dataclasses import dataclass
from functools import lru_cache
from math import pi

import numpy as np

# Conway polynomials, little-endian, leading 1 implicit.  Regenerate with
# tools_gen_conway.py; out-of-range parameters fall back to the same
# search at runtime.
_CONWAY = {
    (2, 1): (1,),
    (2, 2): (1, 1),
    (2, 3): (1, 1, 0),
    (2, 4): (1, 1, 0, 0),
    (2, 5): (1, 0, 1, 0, 0),
    (2, 6): (1, 1, 0, 1, 1, 0),
    (2, 7): (1, 1, 0, 0, 0, 0, 0),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0),
    (2, 10): (1, 1, 1, 1, 0, 1, 1, 0, 0, 0),
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0),
    (2, 12): (1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0),
    (3, 1): (1,),
    (3, 2): (2, 2),
    (3, 3): (1, 2, 0),
    (3, 4): (2, 0, 0, 2),
    (3, 5): (1, 2, 0, 0, 0),
    (3, 6): (2, 2, 1, 0, 2, 0),
    (3, 7): (1, 0, 2, 0, 0, 0, 0),
    (3, 8): (2, 2, 2, 0, 1, 2, 0, 0),
    (5, 1): (3,),
    (5, 2): (2, 4),
    (5, 3): (3, 3, 0),
    (5, 4): (2, 4, 4, 0),
    (5, 5): (3, 4, 0, 0, 0),
    (5, 6): (2, 0, 1, 4, 1, 0),
    (7, 1): (4,),
    (7, 2): (3, 6),
    (7, 3): (4, 0, 6),
    (7, 4): (3, 4, 5, 0),
}

MAX_TOTAL_DEGREE = 12
MAX_FIELD_SIZE = 10 ** 6  # full exp/log tables must stay cheap


class FieldError(ValueError):
    pass


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def factorize(n):
    """Prime factorization as {prime: exponent}, trial division."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q):
    """Split q = p^f; raises FieldError if q is not a prime power."""
    f = factorize(q)
    if len(f) != 1:
        raise FieldError(f"q={q} is not a prime power")
    (p, e), = f.items()
    return p, e


# ---------------------------------------------------------------------------
# Conway polynomial search (also the out-of-table fallback)

def _poly_mulmod(a, b, mod, p):
    n = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    for k in range(len(res) - 1, n - 1, -1):
        c = res[k]
        if c:
            res[k] = 0
            for j in range(n):
                res[k - n + j] = (res[k - n + j] - c * mod[j]) % p
    res = res[:n]
    res += [0] * (n - len(res))
    return res


def _poly_powmod(a, e, mod, p):
    n = len(mod) - 1
    result = [1] + [0] * (n - 1)
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        e >>= 1
        base = _poly_mulmod(base, base, mod, p)
    return result


def _conway_search(p, n):
    """Least monic primitive degree-n polynomial over F_p compatible with
    the Conway polynomials of the maximal proper subfields, in the usual
    sign-alternating lexicographic candidate order."""
    order = p ** n - 1
    prime_divs = list(factorize(order))
    max_divs = sorted({n // ell for ell in factorize(n)}) if n > 1 else []
    subpolys = [(m, conway_polynomial(p, m)) for m in max_divs]
    for word in range(p ** n):
        digits = []
        w = word
        for _ in range(n):
            digits.append(w % p)
            w //= p
        digits.reverse()
        coeffs = [0] * n
        for k in range(1, n + 1):
            coeffs[n - k] = (digits[k - 1] * ((-1) ** k)) % p
        if coeffs[0] == 0:
            continue
        mod = coeffs + [1]
        if n == 1:
            root = (-coeffs[0]) % p
            powmod = lambda e: [pow(root, e, p)]
        else:
            powmod = lambda e: _poly_powmod([0, 1], e, mod, p)

        def _is_one(a):
            return a[0] == 1 and not any(a[1:])

        if not _is_one(powmod(order)):
            continue
        if any(_is_one(powmod(order // ell)) for ell in prime_divs):
            continue
        ok = True
        for m, sub in subpolys:
            r = powmod(order // (p ** m - 1))
            acc = [0] * n
            xp = [1] + [0] * (n - 1)
            for c in list(sub) + [1]:
                if c:
                    for i in range(n):
                        acc[i] = (acc[i] + c * xp[i]) % p
                xp = _poly_mulmod(xp, r, mod, p)
            if any(acc):
                ok = False
                break
        if ok:
            return tuple(coeffs)
    raise FieldError(f"no primitive compatible polynomial for p={p}, n={n}")


@lru_cache(maxsize=None)
def conway_polynomial(p, n):
    """Defining polynomial of F_{p^n}: frozen table, else runtime search."""
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    got = _CONWAY.get((p, n))
    if got is not None:
        return got
    if p ** n > MAX_FIELD_SIZE:
        raise FieldError(f"degree cap exceeded: p^n = {p ** n} > {MAX_FIELD_SIZE}")
    return _conway_search(p, n)


# ---------------------------------------------------------------------------
# One field level

@lru_cache(maxsize=None)
def prime_power_field(p, d):
    return PrimePowerField(p, d)


class PrimePowerField:
    """F_{p^d} with int-encoded elements and full exp/log tables."""

    def __init__(self, p, d):
        if p ** d > MAX_FIELD_SIZE:
            raise FieldError(f"degree cap exceeded for F_{p}^{d}")
        self.p = p
        self.d = d
        self.size = p ** d
        self.modulus = conway_polynomial(p, d)
        self._p_pows = [p ** i for i in range(d + 1)]
        self._build_tables()

    def _build_tables(self):
        p, d, size = self.p, self.d, self.size
        exp = np.zeros(size - 1, dtype=np.int64)
        log = np.full(size, -1, dtype=np.int64)
        if d == 1:
            g = (-self.modulus[0]) % p
            val = 1
            for k in range(size - 1):
                exp[k] = val
                log[val] = k
                val = (val * g) % p
        else:
            # multiply by x: shift digits, reduce by the monic modulus
            mod_digits = self.modulus
            val = [1] + [0] * (d - 1)
            enc = 1
            for k in range(size - 1):
                exp[k] = enc
                log[enc] = k
                lead = val[d - 1]
                val = [0] + val[:d - 1]
                if lead:
                    for j in range(d):
                        val[j] = (val[j] - lead * mod_digits[j]) % p
                enc = 0
                for j in range(d - 1, -1, -1):
                    enc = enc * p + val[j]
        if np.any(log[1:] < 0):
            raise FieldError("defining polynomial is not primitive")
        self.exp = exp
        self.log = log
        self.generator = int(exp[1]) if size > 2 else 1

    def digits(self, a):
        p = self.p
        out = []
        for _ in range(self.d):
            out.append(a % p)
            a //= p
        return out

    def undigits(self, ds):
        enc = 0
        for c in reversed(ds):
            enc = enc * self.p + c
        return enc

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        da, db = self.digits(a), self.digits(b)
        return self.undigits([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a):
        if self.p == 2:
            return a
        return self.undigits([(-x) % self.p for x in self.digits(a)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.size - 1)])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return int(self.exp[(-self.log[a]) % (self.size - 1)])

    def pow(self, a, k):
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("inverse of 0")
            return 0 if k else 1
        return int(self.exp[(self.log[a] * k) % (self.size - 1)])

    def frobenius(self, a, k=1):
        """a^(p^k)."""
        return self.pow(a, self.p ** k)

    def scalar_mul(self, c, a):
        """Multiply by c in the prime field (c an int mod p)."""
        return self.undigits([(c * x) % self.p for x in self.digits(a)])

    def element_order(self, a):
        if a == 0:
            raise FieldError("0 has no multiplicative order")
        n = self.size - 1
        k = int(self.log[a])
        from math import gcd
        return n // gcd(n, k)

    def absolute_trace(self, a):
        """Tr to F_p, as an integer mod p."""
        acc = 0
        for i in range(self.d):
            acc = self.add(acc, self.pow(a, self.p ** i))
        # the result is a constant: encoded value equals its digit
        assert acc < self.p
        return acc

    def elements(self):
        return range(self.size)

    def __repr__(self):
        return f"GF({self.p}^{self.d})"


# ---------------------------------------------------------------------------
# Towers

def build_tower(p, base_degree, multipliers):
    """Tower F_{p^b} < F_{p^(b*m1)} < ...  Levels indexed from 0."""
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if not multipliers:
        raise FieldError("multipliers must be nonempty")
    if base_degree < 1 or any(m < 1 for m in multipliers):
        raise FieldError("degrees must be positive")
    degrees = [base_degree]
    for m in multipliers:
        degrees.append(degrees[-1] * m)
    if degrees[-1] > MAX_TOTAL_DEGREE:
        raise FieldError(
            f"degree cap exceeded: total degree {degrees[-1]} > {MAX_TOTAL_DEGREE}")
    return FieldTower(p, degrees)


class FieldTower:
    """A chain of nested fields sharing the canonical (Conway) embeddings."""

    def __init__(self, p, degrees):
        self.p = p
        self.degrees = list(degrees)
        for lo, hi in zip(degrees, degrees[1:]):
            if hi % lo:
                raise FieldError(f"degrees {lo}, {hi} are not nested")
        self.levels = [prime_power_field(p, d) for d in degrees]
        self._rel_coeff_maps = {}

    @property
    def num_levels(self):
        return len(self.levels)

    def level(self, i):
        return self.levels[i]

    def size(self, i):
        return self.levels[i].size

    def generator(self, i):
        return FieldElem(self, i, self.levels[i].generator)

    def zero(self, i):
        return FieldElem(self, i, 0)

    def one(self, i):
        return FieldElem(self, i, 1)

    def elem(self, i, enc):
        if not 0 <= enc < self.size(i):
            raise FieldError(f"encoding {enc} out of range at level {i}")
        return FieldElem(self, i, enc)

    def _check_nested(self, lo, hi):
        if not (0 <= lo <= hi < len(self.levels)):
            raise FieldError(f"levels {lo}, {hi} not nested in the tower")

    def _step(self, lo, hi):
        return (self.size(hi) - 1) // (self.size(lo) - 1)

    def embed(self, enc, lo, hi):
        """Canonical embedding F_{p^d_lo} -> F_{p^d_hi} on encodings."""
        self._check_nested(lo, hi)
        if enc == 0 or lo == hi:
            return enc
        Llo, Lhi = self.levels[lo], self.levels[hi]
        return int(Lhi.exp[(int(Llo.log[enc]) * self._step(lo, hi)) % (Lhi.size - 1)])

    def project(self, enc, hi, lo):
        """Inverse of embed; raises if the element is not in the subfield."""
        self._check_nested(lo, hi)
        if enc == 0 or lo == hi:
            return enc
        Llo, Lhi = self.levels[lo], self.levels[hi]
        s = self._step(lo, hi)
        k = int(Lhi.log[enc])
        if k % s:
            raise FieldError("element does not lie in the subfield")
        return int(Llo.exp[k // s])

    def norm(self, enc, hi, lo):
        """Norm F_{q_hi} -> F_{q_lo}, multiplicative, Norm(0)=0."""
        self._check_nested(lo, hi)
        if enc == 0:
            return 0
        Lhi = self.levels[hi]
        return self.project(Lhi.pow(enc, self._step(lo, hi)), hi, lo)

    def trace(self, enc, hi, lo):
        """Trace F_{q_hi} -> F_{q_lo}: sum of Galois conjugates."""
        self._check_nested(lo, hi)
        Lhi = self.levels[hi]
        r = self.degrees[hi] // self.degrees[lo]
        qlo = self.size(lo)
        acc = 0
        for i in range(r):
            acc = Lhi.add(acc, Lhi.pow(enc, qlo ** i) if enc else 0)
        return self.project(acc, hi, lo)

    def absolute_trace(self, enc, level):
        return self.levels[level].absolute_trace(enc)

    def additive_character(self, enc, level=0):
        """phi(x) = exp(2 pi i Tr_{F_q/F_p}(x) / p), nontrivial."""
        t = self.absolute_trace(enc, level)
        return cexp(2j * pi * t / self.p)

    # -- relative coefficient vectors (level ell over level ell-1) ---------

    def _coeff_matrices(self, level):
        """Maps between flat F_p digit vectors at `level` and coefficient
        vectors over level-1 in the power basis {1, g, ..., g^(r-1)}."""
        if level in self._rel_coeff_maps:
            return self._rel_coeff_maps[level]
        if level == 0:
            raise FieldError("level 0 has no level below")
        p = self.p
        L = self.levels[level]
        dlo = self.degrees[level - 1]
        r = self.degrees[level] // dlo
        # columns: embed(g_lo^u) * g_hi^i for u < dlo, i < r
        cols = []
        for i in range(r):
            gi = L.pow(L.generator, i) if i else 1
            for u in range(dlo):
                base = self.embed(self.levels[level - 1].pow(
                    self.levels[level - 1].generator, u) if u else 1,
                    level - 1, level)
                cols.append(L.digits(L.mul(base, gi)))
        M = np.array(cols, dtype=np.int64).T % p  # d x d over F_p
        Minv = _invert_mod_p(M, p)
        self._rel_coeff_maps[level] = (M, Minv, r, dlo)
        return self._rel_coeff_maps[level]

    def to_coeffs(self, enc, level):
        """Coefficients over the level below, little-endian tuple."""
        M, Minv, r, dlo = self._coeff_matrices(level)
        v = np.array(self.levels[level].digits(enc), dtype=np.int64)
        c = (Minv @ v) % self.p
        Llo = self.levels[level - 1]
        out = []
        for i in range(r):
            out.append(Llo.undigits([int(x) for x in c[i * dlo:(i + 1) * dlo]]))
        return tuple(out)

    def from_coeffs(self, coeff_encs, level):
        """Inverse of to_coeffs."""
        M, Minv, r, dlo = self._coeff_matrices(level)
        if len(coeff_encs) != r:
            raise FieldError(f"need {r} coefficients at level {level}")
        Llo = self.levels[level - 1]
        v = []
        for c in coeff_encs:
            v.extend(Llo.digits(c))
        digs = (M @ np.array(v, dtype=np.int64)) % self.p
        return self.levels[level].undigits([int(x) for x in digs])

    # -- serialization ------------------------------------------------------

    def to_config(self):
        return {
            "p": self.p,
            "degrees": list(self.degrees),
            "polynomials": [list(L.modulus) + [1] for L in self.levels],
        }

    @classmethod
    def from_config(cls, cfg):
        tower = cls(cfg["p"], cfg["degrees"])
        for L, poly in zip(tower.levels, cfg["polynomials"]):
            if list(L.modulus) + [1] != list(poly):
                raise FieldError("config polynomial mismatch with canonical table")
        return tower

    def __repr__(self):
        return f"FieldTower(p={self.p}, degrees={self.degrees})"


def _invert_mod_p(M, p):
    n = M.shape[0]
    A = M.copy() % p
    I = np.eye(n, dtype=np.int64)
    for col in range(n):
        piv = None
        for row in range(col, n):
            if A[row, col] % p:
                piv = row
                break
        if piv is None:
            raise FieldError("singular coefficient matrix")
        if piv != col:
            A[[col, piv]] = A[[piv, col]]
            I[[col, piv]] = I[[piv, col]]
        inv = pow(int(A[col, col]), -1, p)
        A[col] = (A[col] * inv) % p
        I[col] = (I[col] * inv) % p
        for row in range(n):
            if row != col and A[row, col]:
                f = A[row, col]
                A[row] = (A[row] - f * A[col]) % p
                I[row] = (I[row] - f * I[col]) % p
    return I % p


@dataclass(frozen=True)
class FieldElem:
    """Element of one tower level.  Arithmetic stays within the level;
    cross-level moves go through tower.embed/project explicitly."""
    tower: FieldTower
    level: int
    enc: int

    def _field(self):
        return self.tower.levels[self.level]

    def _check(self, other):
        if self.tower is not other.tower or self.level != other.level:
            raise FieldError("cross-level arithmetic requires explicit embedding")

    def __add__(self, other):
        self._check(other)
        return FieldElem(self.tower, self.level, self._field().add(self.enc, other.enc))

    def __sub__(self, other):
        self._check(other)
        return FieldElem(self.tower, self.level, self._field().sub(self.enc, other.enc))

    def __mul__(self, other):
        self._check(other)
        return FieldElem(self.tower, self.level, self._field().mul(self.enc, other.enc))

    def __truediv__(self, other):
        self._check(other)
        f = self._field()
        return FieldElem(self.tower, self.level, f.mul(self.enc, f.inv(other.enc)))

    def __neg__(self):
        return FieldElem(self.tower, self.level, self._field().neg(self.enc))

    def __pow__(self, k):
        return FieldElem(self.tower, self.level, self._field().pow(self.enc, k))

    def __bool__(self):
        return self.enc != 0

    def __eq__(self, other):
        return (isinstance(other, FieldElem) and self.tower is other.tower
                and self.level == other.level and self.enc == other.enc)

    def __hash__(self):
        return hash((id(self.tower), self.level, self.enc))

    @property
    def coeffs(self):
        """Coefficient vector over the level below (FieldElem tuple); at
        level 0 the base-p digits are returned as plain ints."""
        if self.level == 0:
            return tuple(self._field().digits(self.enc))
        encs = self.tower.to_coeffs(self.enc, self.level)
        return tuple(FieldElem(self.tower, self.level - 1, e) for e in encs)

    def multiplicative_order(self):
        return self._field().element_order(self.enc)

    def __repr__(self):
        return f"<{self.enc} @ GF({self.tower.p}^{self.tower.degrees[self.level]})>"


class TorusCharacter:
    """Character of F_{q^m}^x: j-th power of the canonical generator's
    dual, i.e. value exp(2 pi i * j * log(x) / (q^m - 1))."""

    def __init__(self, tower, level, exponent):
        self.tower = tower
        self.level = level
        self.modulus = tower.size(level) - 1
        self.exponent = exponent % self.modulus if self.modulus else 0

    def __call__(self, x):
        if isinstance(x, FieldElem):
            if x.level != self.level or x.tower is not self.tower:
                raise FieldError("element not at the character's level")
            enc = x.enc
        else:
            enc = x
        if enc == 0:
            raise FieldError("torus character evaluated at 0")
        if self.modulus == 0:
            return 1.0 + 0j
        k = int(self.tower.levels[self.level].log[enc])
        return cexp(2j * pi * ((self.exponent * k) % self.modulus) / self.modulus)

    def is_trivial(self):
        return self.exponent == 0

    def is_regular(self, base_level=0):
        """Galois conjugates over the base level pairwise distinct."""
        q0 = self.tower.size(base_level)
        r = self.tower.degrees[self.level] // self.tower.degrees[base_level]
        if self.modulus == 0:
            return False
        seen = set()
        for i in range(r):
            seen.add((self.exponent * pow(q0, i, self.modulus)) % self.modulus)
        return len(seen) == r

    def galois_conjugate(self, base_level=0, i=1):
        q0 = self.tower.size(base_level)
        return TorusCharacter(self.tower, self.level,
                              (self.exponent * pow(q0, i, self.modulus)) % self.modulus)

    def __mul__(self, other):
        if other.level != self.level or other.tower is not self.tower:
            raise FieldError("character level mismatch")
        return TorusCharacter(self.tower, self.level, self.exponent + other.exponent)

    def __pow__(self, k):
        return TorusCharacter(self.tower, self.level, self.exponent * k)

    def restrict(self, lo):
        """Restriction along the canonical embedding F_{q_lo}^x -> F_{q_hi}^x."""
        if lo > self.level:
            raise FieldError("restriction target above the character's level")
        return TorusCharacter(self.tower, lo,
                              self.exponent % (self.tower.size(lo) - 1))

    def compose_norm(self, hi):
        """theta o Norm as a character of the level-hi units."""
        if hi < self.level:
            raise FieldError("norm source below the character's level")
        s = (self.tower.size(hi) - 1) // (self.modulus if self.modulus else 1)
        return TorusCharacter(self.tower, hi, self.exponent * s)

    def __repr__(self):
        return f"TorusCharacter(level={self.level}, j={self.exponent})"


# ---------------------------------------------------------------------------
# Small-field table bundle for the matrix kernels

@lru_cache(maxsize=None)
def small_field(q):
    """Dense GF(q) op tables (numpy) used by the batch matrix kernels."""
    p, f = prime_power(q)
    F = prime_power_field(p, f)
    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            add[a, b] = F.add(a, b)
            mul[a, b] = F.mul(a, b)
    inv = np.zeros(q, dtype=np.int64)
    neg = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = F.inv(a)
    for a in range(q):
        neg[a] = F.neg(a)
    phi = np.array([cexp(2j * pi * F.absolute_trace(a) / p) for a in range(q)],
                   dtype=np.complex128)
    return SmallField(q, p, f, F, add, mul, inv, neg, phi)


@dataclass(frozen=True)
class SmallField:
    q: int
    p: int
    f: int
    field: PrimePowerField
    add: np.ndarray
    mul: np.ndarray
    inv: np.ndarray
    neg: np.ndarray
    phi: np.ndarray

    def __hash__(self):
        return hash((self.q,))
