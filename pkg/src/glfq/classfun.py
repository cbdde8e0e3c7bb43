"""Class functions on GL_n(F_q), tori and Levi products: inner products,
Frobenius induction, the twisted and untwisted Jacquet operators along
the (n,n)-parabolic, and decomposition against an irreducible table.

Virtual class functions are first class: is_character is advisory and
only tightens checks (decomposition residual, integrality), it never
changes arithmetic.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import gf, kernels, matgrp

TOL_ORTHO = 1e-8
TOL_INT = 1e-6


class GroupMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# Group descriptors

class GLGroup:
    def __init__(self, n, q):
        self.kind = "gl"
        self.n = n
        self.q = q
        self.space = matgrp.mat_space(n, q)
        self.classes = matgrp.enumerate_classes(n, q, matgrp.GL_CLASS)
        self.labels = [c.label for c in self.classes]
        self.sizes = {c.label: c.size for c in self.classes}
        self.reps = {c.label: c.rep for c in self.classes}
        self.order = matgrp.gl_order(n, q)
        self.identity_label = matgrp.identity_label(n, q)

    def descriptor(self):
        return {"kind": "gl", "n": self.n, "q": self.q}

    def label_to_json(self, lab):
        return lab.to_json()

    def label_from_json(self, obj):
        return matgrp.ClassLabel.from_json(obj)

    def __repr__(self):
        return f"GL({self.n}, F_{self.q})"


class TorusGroup:
    """F_{q^m}^x as an abstract cyclic group; class labels are exponents
    of the canonical generator."""

    def __init__(self, m, q):
        self.kind = "torus"
        self.m = m
        self.q = q
        self.order = q ** m - 1
        self.labels = list(range(self.order))
        self.sizes = {k: 1 for k in self.labels}
        self.identity_label = 0

    def descriptor(self):
        return {"kind": "torus", "m": self.m, "q": self.q}

    def label_to_json(self, lab):
        return lab

    def label_from_json(self, obj):
        return int(obj)

    def __repr__(self):
        return f"F_{self.q}^{self.m} units"


class ProductGroup:
    def __init__(self, g1, g2):
        self.kind = "product"
        self.factors = (g1, g2)
        self.order = g1.order * g2.order
        self.labels = [(a, b) for a in g1.labels for b in g2.labels]
        self.sizes = {(a, b): g1.sizes[a] * g2.sizes[b]
                      for a in g1.labels for b in g2.labels}
        self.identity_label = (g1.identity_label, g2.identity_label)

    def descriptor(self):
        return {"kind": "product",
                "factors": [g.descriptor() for g in self.factors]}

    def label_to_json(self, lab):
        return [self.factors[0].label_to_json(lab[0]),
                self.factors[1].label_to_json(lab[1])]

    def label_from_json(self, obj):
        return (self.factors[0].label_from_json(obj[0]),
                self.factors[1].label_from_json(obj[1]))

    def __repr__(self):
        return f"{self.factors[0]} x {self.factors[1]}"


@lru_cache(maxsize=None)
def gl_group(n, q):
    return GLGroup(n, q)


@lru_cache(maxsize=None)
def torus_group(m, q):
    return TorusGroup(m, q)


@lru_cache(maxsize=None)
def product_gl_group(n, q):
    return ProductGroup(gl_group(n, q), gl_group(n, q))


def group_from_descriptor(desc):
    if desc["kind"] == "gl":
        return gl_group(desc["n"], desc["q"])
    if desc["kind"] == "torus":
        return torus_group(desc["m"], desc["q"])
    if desc["kind"] == "product":
        subs = [group_from_descriptor(d) for d in desc["factors"]]
        if all(g.kind == "gl" for g in subs) and subs[0] is subs[1]:
            return product_gl_group(subs[0].n, subs[0].q)
        return ProductGroup(*subs)
    raise ValueError(f"unknown group kind {desc['kind']}")


# ---------------------------------------------------------------------------
# Class functions

@dataclass
class ClassFunction:
    group: object
    values: dict
    is_character: bool = False
    name: str = ""

    def __post_init__(self):
        missing = [l for l in self.group.labels if l not in self.values]
        if missing:
            raise ValueError(f"class function missing {len(missing)} classes")

    def __call__(self, label):
        return self.values[label]

    @property
    def degree(self):
        return self.values[self.group.identity_label]

    def _binop(self, other, op, character=False):
        if isinstance(other, ClassFunction):
            if other.group is not self.group:
                raise GroupMismatch("class functions on different groups")
            return ClassFunction(self.group,
                                 {l: op(self.values[l], other.values[l])
                                  for l in self.group.labels},
                                 is_character=character)
        return ClassFunction(self.group,
                             {l: op(self.values[l], other) for l in self.group.labels})

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b,
                           character=self.is_character and getattr(other, "is_character", False))

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            return self._binop(other, lambda a, b: a * b,
                               character=self.is_character and other.is_character)
        return ClassFunction(self.group,
                             {l: self.values[l] * other for l in self.group.labels})

    __rmul__ = __mul__

    def conjugate(self):
        return ClassFunction(self.group,
                             {l: self.values[l].conjugate() for l in self.group.labels},
                             is_character=self.is_character)

    def to_json(self):
        return {
            "group": self.group.descriptor(),
            "classes": [self.group.label_to_json(l) for l in self.group.labels],
            "values": [[self.values[l].real, self.values[l].imag]
                       for l in self.group.labels],
            "is_character": self.is_character,
            "name": self.name,
        }

    @classmethod
    def from_json(cls, obj):
        group = group_from_descriptor(obj["group"])
        labels = [group.label_from_json(l) for l in obj["classes"]]
        values = {l: complex(re, im) for l, (re, im) in zip(labels, obj["values"])}
        return cls(group, values, is_character=obj.get("is_character", False),
                   name=obj.get("name", ""))

    def __repr__(self):
        tag = self.name or ("char" if self.is_character else "classfun")
        return f"<{tag} on {self.group}, deg={self.degree:.6g}>"


def zero_function(group):
    return ClassFunction(group, {l: 0j for l in group.labels})


def trivial_character(group):
    return ClassFunction(group, {l: 1 + 0j for l in group.labels},
                         is_character=True, name="1")


def regular_character(group):
    vals = {l: 0j for l in group.labels}
    vals[group.identity_label] = complex(group.order)
    return ClassFunction(group, vals, is_character=True, name="regular")


def inner_product(f, g):
    """(1/|G|) sum_C |C| f(C) conj(g(C))."""
    if f.group is not g.group:
        raise GroupMismatch("inner product across different groups")
    G = f.group
    acc = 0j
    for l in G.labels:
        acc += G.sizes[l] * f.values[l] * g.values[l].conjugate()
    return acc / G.order


def norm(f):
    return abs(inner_product(f, f)) ** 0.5


def verify_orthonormal(table, tol=TOL_ORTHO):
    for i, a in enumerate(table):
        for j, b in enumerate(table):
            want = 1.0 if i == j else 0.0
            got = inner_product(a, b)
            if abs(got - want) > tol:
                return False
    return True


# ---------------------------------------------------------------------------
# Induction (Frobenius formula over an explicit transversal)

def induce(G, transversal, space, eval_fn, is_character=True, name=""):
    """(Ind f)(g) = sum over coset reps x of f(x^-1 g x), where eval_fn
    returns f(h) for h in the subgroup and None off the subgroup.
    The degree is checked against [G:H] afterwards by the caller."""
    reps = np.asarray(transversal, dtype=np.int64)
    inv_reps = kernels.batch_inverse(reps, space.n, space.sf)
    assert np.all(inv_reps >= 0)
    values = {}
    for c in G.classes:
        g = c.rep
        garr = np.full(len(reps), g, dtype=np.int64)
        conj = kernels.batch_matmul(
            kernels.batch_matmul(inv_reps, garr, space.n, space.sf),
            reps, space.n, space.sf)
        acc = 0j
        for h in conj:
            v = eval_fn(int(h))
            if v is not None:
                acc += v
        values[c.label] = acc
    return ClassFunction(G, values, is_character=is_character, name=name)


def induce_from_torus(n, q, theta, name=""):
    """Ind_{F_{q^n}^x}^{GL_n(F_q)} theta, theta a TorusCharacter at the
    F_{q^n} level of the embedding tower."""
    te = matgrp.torus_embedding(n, q)
    G = gl_group(n, q)
    if G.order > 10 ** 6:
        raise matgrp.BudgetError("torus transversal needs group enumeration")
    els = G.space.group_elements()
    transversal = te.transversal(els)

    def eval_fn(enc):
        t = te.element(enc)
        return None if t is None else theta(t)

    out = induce(G, transversal, G.space, eval_fn, name=name)
    want = len(transversal) * 1.0
    if abs(out.degree - want) > 1e-6:
        raise AssertionError("induced degree mismatch: transversal incomplete")
    return out


def induce_from_parabolic(n, q, chi_a, chi_d, name=""):
    """Ind_P^{GL_2n}(chi_a . chi_d) for the (n,n)-parabolic, the inducing
    character inflated from the Levi GL_n x GL_n."""
    pd = matgrp.parabolic_data(n, q)
    G = gl_group(2 * n, q)
    lut_a = chi_a.values
    lut_d = chi_d.values
    levi = pd.levi_space

    def eval_fn(enc):
        if not pd.in_parabolic(enc):
            return None
        a, d = pd.levi_project(enc)
        la = matgrp.classify(levi, a)
        ld = matgrp.classify(levi, d)
        return lut_a[la] * lut_d[ld]

    out = induce(G, pd.coset_reps, pd.space, eval_fn, name=name)
    want = len(pd.coset_reps) * chi_a.degree * chi_d.degree
    if abs(out.degree - want) > 1e-6:
        raise AssertionError("induced degree mismatch: transversal incomplete")
    return out


# ---------------------------------------------------------------------------
# Jacquet operators along the (n,n)-parabolic

@lru_cache(maxsize=None)
def _jacquet_tables(n, q):
    """Per-(n,q) precomputation: u(X) encodings, psi(X) = phi(tr X), and
    the additive character values."""
    pd = matgrp.parabolic_data(n, q)
    xs = np.arange(pd.levi_space.size, dtype=np.int64)
    u_encs = np.array([pd.u(int(x)) for x in xs], dtype=np.int64)
    sf = gf.small_field(q)
    psi = np.array([sf.phi[pd.levi_space.trace(int(x))] for x in xs],
                   dtype=np.complex128)
    return pd, u_encs, psi


def _jacquet_values(chi, pd, u_encs, weights, diag_pairs):
    """Common core: for each Levi pair (a, d), average chi(diag(a,d) u(X))
    against the weights (conj(psi) or all-ones)."""
    space = pd.space
    out = []
    for a, d in diag_pairs:
        diag = pd.diag(a, d)
        encs = kernels.batch_matmul(
            np.full(len(u_encs), diag, dtype=np.int64), u_encs, space.n, space.sf)
        labels = matgrp.classify_many(space, encs)
        acc = 0j
        for w, lab in zip(weights, labels):
            acc += w * chi.values[lab]
        out.append(acc / len(u_encs))
    return out


def twisted_jacquet(chi, n=None):
    """J(chi)(g) = (1/|N|) sum_X conj(phi(tr X)) chi(diag(g,g) u(X)),
    a class function on GL_n(F_q) for chi on GL_2n(F_q)."""
    G2 = chi.group
    if G2.kind != "gl" or G2.n % 2:
        raise ValueError("twisted Jacquet needs a class function on GL_2n")
    n = G2.n // 2
    q = G2.q
    pd, u_encs, psi = _jacquet_tables(n, q)
    Gn = gl_group(n, q)
    reps = [Gn.reps[l] for l in Gn.labels]
    vals = _jacquet_values(chi, pd, u_encs, psi.conjugate(),
                           [(r, r) for r in reps])
    return ClassFunction(Gn, dict(zip(Gn.labels, vals)),
                         is_character=chi.is_character,
                         name=f"J({chi.name})" if chi.name else "")


def untwisted_jacquet(chi):
    """Same averaging with psi = 1, on Levi pairs (g1, g2); vanishes iff
    chi has no N-invariants (cuspidality test)."""
    G2 = chi.group
    if G2.kind != "gl" or G2.n % 2:
        raise ValueError("untwisted Jacquet needs a class function on GL_2n")
    n = G2.n // 2
    q = G2.q
    pd, u_encs, _ = _jacquet_tables(n, q)
    GG = product_gl_group(n, q)
    Gn = GG.factors[0]
    ones = np.ones(len(u_encs), dtype=np.complex128)
    pairs = [(Gn.reps[a], Gn.reps[b]) for a, b in GG.labels]
    vals = _jacquet_values(chi, pd, u_encs, ones, pairs)
    return ClassFunction(GG, dict(zip(GG.labels, vals)),
                         is_character=chi.is_character)


# ---------------------------------------------------------------------------
# Decomposition

@dataclass
class Decomposition:
    basis: list          # names or labels of the table rows
    multiplicities: list
    residual_norm: float

    def __getitem__(self, i):
        return self.multiplicities[i]

    def nonzero(self):
        return [(b, m) for b, m in zip(self.basis, self.multiplicities) if m]


def decompose(f, table, check_residual=None):
    """Multiplicities <f, chi_i> rounded to integers; the residual must
    vanish when f is (flagged) a character."""
    if not table:
        raise ValueError("empty table")
    if not verify_orthonormal(table):
        raise ValueError("table is not orthonormal")
    mults = []
    exact = []
    for chi in table:
        m = inner_product(f, chi)
        exact.append(m)
        mi = round(m.real)
        if f.is_character and (abs(m.imag) > TOL_INT or abs(m.real - mi) > TOL_INT):
            raise ValueError(f"non-integral multiplicity {m} against {chi.name!r}")
        mults.append(mi)
    resid = f
    for m, chi in zip(mults, table):
        resid = resid - m * chi
    rnorm = norm(resid)
    must_check = f.is_character if check_residual is None else check_residual
    if must_check and rnorm > 1e-6:
        raise ValueError(f"decomposition residual {rnorm:.3g}: table incomplete "
                         "or input genuinely virtual")
    return Decomposition([chi.name or str(i) for i, chi in enumerate(table)],
                         mults, rnorm)


def restrict_to_torus(f, te):
    """Restriction of a GL_n class function along the torus embedding,
    as a class function on the abstract torus group."""
    Gn = f.group
    T = torus_group(te.n, te.q)
    L = te.tower.level(1)
    vals = {}
    for k in T.labels:
        enc = int(L.exp[k])
        lab = matgrp.classify(te.space, te.matrix(enc))
        vals[k] = f.values[lab]
    return ClassFunction(T, vals, is_character=f.is_character)


def torus_character_function(theta, m, q):
    """TorusCharacter -> ClassFunction on the abstract torus group."""
    T = torus_group(m, q)
    N = T.order
    L = theta.tower.level(theta.level)
    assert L.size - 1 == N
    vals = {k: theta(int(L.exp[k])) for k in T.labels}
    return ClassFunction(T, vals, is_character=True)
