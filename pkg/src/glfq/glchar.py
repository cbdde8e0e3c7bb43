"""Distinguished characters of GL_m(F_q): the explicit GL_2 table,
Deligne-Lusztig virtual characters R(T,theta) for the anisotropic torus
(m <= 4, via Green functions from the Hall-Littlewood/charge transition),
principal series pi x pi, the St_2/Sp_2 pipeline, and the exact-sequence
identity suite for the twisted Jacquet modules.

Sign convention: dl_character returns (-1)^(m-1) times the classically
normalized virtual character, so that for regular theta it IS the
irreducible cuspidal character (positive dimension), and
dl = St_2 - Sp_2 holds on the nose for theta = theta0 o Norm.
"""

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import gf, matgrp
from .classfun import (ClassFunction, gl_group, induce_from_parabolic,
                       induce_from_torus, inner_product, twisted_jacquet)


class NoAdmissibleTheta(ValueError):
    """Raised when (n, q) leaves no nondegenerate theta0 (e.g. n=1, q=2)."""


@lru_cache(maxsize=None)
def standard_tower(n, q):
    """F_q < F_{q^n} < F_{q^2n}, the tower every section-3 object lives on."""
    p, f = gf.prime_power(q)
    return gf.build_tower(p, f, [n, 2])


def theta0_character(n, q, exponent):
    return gf.TorusCharacter(standard_tower(n, q), 1, exponent)


def admissible_theta0(n, q, exponent):
    """Nondegenerate theta0: full Galois orbit over F_q and nontrivial.
    (For n=1 every character is its own orbit, so nontriviality is the
    binding constraint; q=2, n=1 admits none.)"""
    th = theta0_character(n, q, exponent)
    return not th.is_trivial() and th.is_regular(0)


def admissible_exponents(n, q):
    N = q ** n - 1
    return [e for e in range(N) if admissible_theta0(n, q, e)]


def regular_top_exponents(n, q):
    """Exponents of regular characters of F_{q^2n}^x, one per Galois
    orbit, smallest representative first."""
    tower = standard_tower(n, q)
    N = tower.size(2) - 1
    out = []
    seen = set()
    for e in range(1, N):
        if e in seen:
            continue
        orbit = {(e * pow(q, i, N)) % N for i in range(2 * n)}
        seen |= orbit
        if len(orbit) == 2 * n:
            out.append(e)
    return out


# ---------------------------------------------------------------------------
# Green functions of the anisotropic (Coxeter) torus via charge

def _ssyt(shape, content):
    """Semistandard tableaux of the given shape and content, as row lists."""
    rows = [[0] * r for r in shape]
    counts = list(content)
    out = []

    cells = [(i, j) for i, r in enumerate(shape) for j in range(r)]

    def rec(idx):
        if idx == len(cells):
            out.append([row[:] for row in rows])
            return
        i, j = cells[idx]
        lo = 1
        if j > 0:
            lo = max(lo, rows[i][j - 1])
        if i > 0:
            lo = max(lo, rows[i - 1][j] + 1)
        for v in range(lo, len(counts) + 1):
            if counts[v - 1]:
                counts[v - 1] -= 1
                rows[i][j] = v
                rec(idx + 1)
                counts[v - 1] += 1
        rows[i][j] = 0

    rec(0)
    return out


def _charge(word):
    """Lascoux-Schutzenberger charge: extract standard subwords scanning
    right-to-left cyclically; each wrap while hunting the next letter
    bumps the index."""
    w = list(word)
    total = 0
    while w:
        maxl = max(w)
        pos = None
        ind = 0
        chosen = []
        for letter in range(1, maxl + 1):
            idxs = [i for i, c in enumerate(w) if c == letter]
            if pos is None:
                pick = max(idxs)
            else:
                lower = [i for i in idxs if i < pos]
                if lower:
                    pick = max(lower)
                else:
                    pick = max(idxs)
                    ind += 1
            total += ind
            chosen.append(pick)
            pos = pick
        for i in sorted(chosen, reverse=True):
            w.pop(i)
    return total


@lru_cache(maxsize=None)
def kostka_foulkes(shape, content):
    """K_{shape,content}(t) as {exponent: coefficient}."""
    out = {}
    for T in _ssyt(shape, content):
        word = []
        for row in reversed(T):
            word.extend(row)
        c = _charge(word)
        out[c] = out.get(c, 0) + 1
    return out


def n_stat(lam):
    return sum(i * part for i, part in enumerate(lam))


@lru_cache(maxsize=None)
def coxeter_green(k, Q):
    """Green functions of GL_k(F_Q) for the Coxeter torus on unipotent
    classes: {partition: integer value}.  Built from the hook expansion
    of the full cycle in the Hall-Littlewood basis:
    X^mu_[k](t) = sum_r (-1)^r K_{(k-r,1^r),mu}(t), and
    Q^mu_[k](Q) = Q^n(mu) X^mu_[k](1/Q)."""
    out = {}
    for mu in matgrp.partitions(k):
        acc = Fraction(0)
        for r in range(k):
            hook = (k - r,) + (1,) * r
            sign = -1 if r % 2 else 1
            for e, c in kostka_foulkes(hook, mu).items():
                acc += sign * c * Fraction(1, Q) ** e
        val = Fraction(Q) ** n_stat(mu) * acc
        assert val.denominator == 1
        out[mu] = int(val)
    # anchors: regular unipotent value 1; identity value is the
    # anisotropic dimension formula up to the epsilon sign
    assert out[(k,)] == 1
    dim = 1
    for i in range(1, k):
        dim *= Q ** i - 1
    assert out[(1,) * k] == (1 if k % 2 else -1) * dim
    return out


# ---------------------------------------------------------------------------
# Deligne-Lusztig characters for the anisotropic torus

def _poly_roots_in(tower, level, poly, q_level):
    """Roots in the level field of a polynomial with F_q coefficients
    (encoded ints), embedding coefficients along the tower."""
    L = tower.level(level)
    emb = [tower.embed(c, q_level, level) for c in poly]
    roots = []
    for y in range(L.size):
        acc = 0
        for c in reversed(emb):
            acc = L.add(L.mul(acc, y), c)
        if acc == 0:
            roots.append(y)
    return roots


def dl_character(m, q, theta, name=""):
    """R(T, theta) for the anisotropic torus T = F_{q^m}^x of GL_m(F_q),
    normalized with the sign (-1)^(m-1) (see module docstring); virtual
    in general, the cuspidal character when theta is regular."""
    if m not in (1, 2, 3, 4):
        raise ValueError(f"unsupported m={m}")
    tower = theta.tower
    level = theta.level
    if tower.size(level) != q ** m:
        raise ValueError("theta does not live on F_{q^m}")
    q_level = next(i for i, L in enumerate(tower.levels) if L.size == q)
    G = gl_group(m, q)
    sign = 1 if m % 2 else -1
    values = {}
    for lab in G.labels:
        if len(lab.pairs) != 1:
            values[lab] = 0j  # semisimple part not conjugate into T
            continue
        (f, lam), = lab.pairs
        d = len(f) - 1
        k = sum(lam)
        roots = _poly_roots_in(tower, level, f, q_level)
        assert len(roots) == d
        theta_sum = sum(theta(y) for y in roots)
        values[lab] = sign * theta_sum * coxeter_green(k, q ** d)[lam]
    return ClassFunction(G, values, is_character=False, name=name or f"R({m},{q})")


# ---------------------------------------------------------------------------
# The explicit GL_2(F_q) character table

@dataclass
class Gl2Row:
    family: str      # "onedim" | "steinberg" | "principal" | "cuspidal"
    data: tuple      # defining character exponents
    chi: ClassFunction


class Gl2Table:
    """All irreducibles of GL_2(F_q), values on all q^2-1 classes."""

    def __init__(self, q):
        if q < 2:
            raise ValueError("q must be a prime power >= 2")
        gf.prime_power(q)
        self.q = q
        self.tower = standard_tower(1, q)  # F_q < F_q < F_{q^2}
        self.group = gl_group(2, q)
        self.rows = []
        self._build()
        self.table = [r.chi for r in self.rows]

    def _params(self, lab):
        """Class parameters: kind plus eigenvalue data."""
        F = gf.small_field(self.q).field
        pairs = lab.pairs
        if len(pairs) == 2:
            a = F.neg(pairs[0][0][0])
            b = F.neg(pairs[1][0][0])
            return ("split", a, b)
        (f, lam), = pairs
        if len(f) == 3:
            return ("elliptic", f)
        a = F.neg(f[0])
        return ("central", a) if lam == (1, 1) else ("nonss", a)

    def _build(self):
        q = self.q
        tower = self.tower
        F = gf.small_field(q).field
        params = {lab: self._params(lab) for lab in self.group.labels}
        ell_roots = {}
        for lab, pr in params.items():
            if pr[0] == "elliptic":
                ell_roots[pr[1]] = _poly_roots_in(tower, 2, pr[1], 0)

        def alpha(j):
            return gf.TorusCharacter(tower, 0, j)

        def theta2(j):
            return gf.TorusCharacter(tower, 2, j)

        def det_of(pr):
            if pr[0] in ("central", "nonss"):
                return F.mul(pr[1], pr[1])
            if pr[0] == "split":
                return F.mul(pr[1], pr[2])
            x = ell_roots[pr[1]][0]
            return tower.norm(x, 2, 0)

        def add_row(family, data, values, name):
            chi = ClassFunction(self.group, values, is_character=True, name=name)
            self.rows.append(Gl2Row(family, data, chi))

        for j in range(q - 1):
            al = alpha(j)
            vals, st = {}, {}
            for lab, pr in params.items():
                adet = al(det_of(pr))
                if pr[0] == "central":
                    vals[lab] = adet
                    st[lab] = q * adet
                elif pr[0] == "nonss":
                    vals[lab] = adet
                    st[lab] = 0j
                elif pr[0] == "split":
                    vals[lab] = adet
                    st[lab] = adet
                else:
                    vals[lab] = adet
                    st[lab] = -adet
            add_row("onedim", (j,), vals, f"det^{j}")
            add_row("steinberg", (j,), st, f"St*det^{j}")

        for j in range(q - 1):
            for k in range(j + 1, q - 1):
                a1, a2 = alpha(j), alpha(k)
                vals = {}
                for lab, pr in params.items():
                    if pr[0] == "central":
                        a = pr[1]
                        vals[lab] = (q + 1) * a1(a) * a2(a)
                    elif pr[0] == "nonss":
                        a = pr[1]
                        vals[lab] = a1(a) * a2(a)
                    elif pr[0] == "split":
                        a, b = pr[1], pr[2]
                        vals[lab] = a1(a) * a2(b) + a1(b) * a2(a)
                    else:
                        vals[lab] = 0j
                add_row("principal", (j, k), vals, f"PS({j},{k})")

        N = q * q - 1
        seen = set()
        for j in range(N):
            if j in seen:
                continue
            orbit = {j, (j * q) % N}
            seen |= orbit
            if len(orbit) != 2:
                continue  # theta = theta^q: not regular
            th = theta2(j)
            vals = {}
            for lab, pr in params.items():
                if pr[0] == "central":
                    vals[lab] = (q - 1) * th(tower.embed(pr[1], 0, 2))
                elif pr[0] == "nonss":
                    vals[lab] = -th(tower.embed(pr[1], 0, 2))
                elif pr[0] == "split":
                    vals[lab] = 0j
                else:
                    x, xq = ell_roots[pr[1]]
                    vals[lab] = -(th(x) + th(xq))
            add_row("cuspidal", (j,), vals, f"cusp({j})")

    def family(self, name):
        return [r for r in self.rows if r.family == name]

    def cuspidal_for(self, theta_exp):
        """The cuspidal row attached to a regular character of F_{q^2}^x."""
        N = self.q ** 2 - 1
        orbit = {theta_exp % N, (theta_exp * self.q) % N}
        for r in self.family("cuspidal"):
            if r.data[0] in orbit:
                return r
        raise KeyError(f"no cuspidal for exponent {theta_exp}")


@lru_cache(maxsize=None)
def gl2_table(q):
    if q not in (2, 3, 4, 5, 7):
        raise ValueError(f"gl2_table tested for q in 2,3,4,5,7 only (got {q})")
    return Gl2Table(q)


@lru_cache(maxsize=None)
def gl1_table(q):
    """Characters of GL_1(F_q) = F_q^x as class functions."""
    G = gl_group(1, q)
    F = gf.small_field(q).field
    p, f = gf.prime_power(q)
    tower = standard_tower(1, q)
    rows = []
    for j in range(q - 1):
        al = gf.TorusCharacter(tower, 0, j)
        vals = {}
        for lab in G.labels:
            a = F.neg(lab.pairs[0][0][0])
            vals[lab] = al(a)
        rows.append(ClassFunction(G, vals, is_character=True, name=f"chi^{j}"))
    return rows


def gl_table(n, q):
    if n == 1:
        return gl1_table(q)
    if n == 2:
        return gl2_table(q).table
    raise ValueError("irreducible tables available for GL_1 and GL_2 only")


# ---------------------------------------------------------------------------
# Gelfand-Graev multiplicity (Whittaker dimension)

def gelfand_graev_multiplicity(chi):
    """<chi, Ind_U^G psi_U> by Frobenius reciprocity: averaged over the
    full upper unitriangular U with the nondegenerate character
    psi_U(u) = phi(sum of superdiagonal entries)."""
    G = chi.group
    m, q = G.n, G.q
    space = G.space
    sf = gf.small_field(q)
    positions = [(i, j) for i in range(m) for j in range(i + 1, m)]
    k = len(positions)
    encs = []
    psis = []
    F = sf.field
    for idx in range(q ** k):
        rows = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        t = idx
        s = 0
        for (i, j) in positions:
            rows[i][j] = t % q
            t //= q
            if j == i + 1:
                s = F.add(s, rows[i][j])
        encs.append(space.encode(rows))
        psis.append(sf.phi[s])
    labels = matgrp.classify_many(space, np.array(encs, dtype=np.int64))
    acc = 0j
    for lab, psi in zip(labels, psis):
        acc += chi.values[lab] * psi.conjugate()
    return acc / q ** k


# ---------------------------------------------------------------------------
# Principal series and the St_2 / Sp_2 pipeline

def cuspidal_character(n, q, theta0):
    """chi_pi for pi = the cuspidal of GL_n attached to theta0 (regular,
    nontrivial); equals the sign-normalized DL character."""
    chi = dl_character(n, q, theta0, name=f"pi(theta0={theta0.exponent})")
    chi.is_character = True
    return chi


def principal_series_pi_pi(n, q, theta0_exp):
    """Character of pi x pi = Ind_P^{GL_2n}(pi . pi), pi cuspidal."""
    if not admissible_theta0(n, q, theta0_exp):
        raise NoAdmissibleTheta(
            f"theta0 exponent {theta0_exp} is not nondegenerate for (n={n}, q={q})")
    theta0 = theta0_character(n, q, theta0_exp)
    chi_pi = cuspidal_character(n, q, theta0)
    out = induce_from_parabolic(n, q, chi_pi, chi_pi,
                                name=f"pi x pi (theta0={theta0_exp})")
    return out


def st2_sp2(n, q, theta0_exp):
    """(St_2(pi), Sp_2(pi)) from the exact sequence: halves of
    chi_{pi x pi} +- R(T, theta0 o Norm).  The generic half is identified
    independently by the Gelfand-Graev pairing; a swap or non-integral
    half signals a sign-convention bug and raises."""
    chi_pp = principal_series_pi_pi(n, q, theta0_exp)
    theta0 = theta0_character(n, q, theta0_exp)
    theta = theta0.compose_norm(2)
    R = dl_character(2 * n, q, theta, name="R(theta0 o Norm)")
    st = 0.5 * (chi_pp + R)
    sp = 0.5 * (chi_pp - R)
    for half, tag in ((st, "St_2"), (sp, "Sp_2")):
        d = half.degree
        if abs(d.imag) > 1e-8 or abs(d.real - round(d.real)) > 1e-6 or d.real <= 0:
            raise AssertionError(
                f"{tag} degree {d} not a positive integer: inconsistent R sign")
        if abs(inner_product(half, half) - 1) > 1e-6:
            raise AssertionError(f"{tag} is not irreducible: <chi,chi> != 1")
    st.is_character = sp.is_character = True
    st.name = f"St_2(theta0={theta0_exp})"
    sp.name = f"Sp_2(theta0={theta0_exp})"
    g_st = gelfand_graev_multiplicity(st)
    g_sp = gelfand_graev_multiplicity(sp)
    if not (abs(g_st - 1) < 1e-6 and abs(g_sp) < 1e-6):
        raise AssertionError(
            f"genericity test failed: <St,Gamma>={g_st}, <Sp,Gamma>={g_sp}")
    return st, sp


def induced_theta_squared(n, q, theta0_exp):
    """Ind_{F_{q^n}^x}^{GL_n} theta0^2 (the difference-identity right side;
    theta^2 restricted to the fixed field is theta0^2)."""
    te = matgrp.torus_embedding(n, q)
    theta0_sq = gf.TorusCharacter(te.tower, 1, 2 * theta0_exp)
    return induce_from_torus(n, q, theta0_sq,
                             name=f"Ind theta0^2 (theta0={theta0_exp})")


def induced_theta_restriction(n, q, theta_exp):
    """Ind_{F_{q^n}^x}^{GL_n}(theta|_{F_{q^n}^x}) for theta on F_{q^2n}^x."""
    te = matgrp.torus_embedding(n, q)
    rest = gf.TorusCharacter(te.tower, 1, theta_exp % (q ** n - 1))
    return induce_from_torus(n, q, rest, name=f"Ind theta| (theta={theta_exp})")


def sp2_jacquet_formula(n, q, theta0_exp):
    """Sp_2(pi)_{N,psi} computed literally as
    ((pi x pi)_{N,psi} - Ind theta0^2) / 2, cross-checked against the
    direct twisted Jacquet of Sp_2; returns the class function."""
    chi_pp = principal_series_pi_pi(n, q, theta0_exp)
    j_pp = twisted_jacquet(chi_pp)
    ind2 = induced_theta_squared(n, q, theta0_exp)
    formula = 0.5 * (j_pp - ind2)
    _, sp = st2_sp2(n, q, theta0_exp)
    direct = twisted_jacquet(sp)
    dev = max(abs(formula.values[l] - direct.values[l])
              for l in formula.group.labels)
    if dev > 1e-8:
        raise AssertionError(
            f"Sp_2 Jacquet formula disagrees with the direct route by {dev}")
    d = formula.degree
    if abs(d.imag) > 1e-8 or abs(d.real - round(d.real)) > 1e-6 or round(d.real) < 0:
        raise AssertionError(f"Sp_2 Jacquet dimension {d} fails integrality")
    formula.is_character = True
    formula.name = f"Sp_2(theta0={theta0_exp})_(N,psi)"
    return formula


# ---------------------------------------------------------------------------
# Identity verification report

def _max_dev(f, g):
    return max(abs(f.values[l] - g.values[l]) for l in f.group.labels)


def verify_identities(n, q, theta0_exp, tol=1e-8):
    """Checks the four displayed identities; returns a report dict."""
    tower = standard_tower(n, q)
    report = {
        "n": n,
        "q": q,
        "theta0_exponent": theta0_exp,
        "tower": tower.to_config(),
        "identities": [],
    }
    if not admissible_theta0(n, q, theta0_exp):
        report["admissible"] = False
        report["reason"] = "no admissible theta0" if not admissible_exponents(n, q) \
            else f"theta0 exponent {theta0_exp} is degenerate"
        return report
    report["admissible"] = True

    def run(name, fn):
        t0 = time.perf_counter()
        passed, dev = fn()
        report["identities"].append({
            "name": name,
            "pass": bool(passed),
            "max_abs_deviation": float(dev),
            "elapsed_ms": (time.perf_counter() - t0) * 1000.0,
        })

    chi_pp = principal_series_pi_pi(n, q, theta0_exp)
    st, sp = st2_sp2(n, q, theta0_exp)
    j_pp = twisted_jacquet(chi_pp)
    j_st = twisted_jacquet(st)
    j_sp = twisted_jacquet(sp)

    def sum_identity():
        dev = _max_dev(j_pp, j_st + j_sp)
        return dev <= tol, dev

    def difference_identity():
        ind2 = induced_theta_squared(n, q, theta0_exp)
        dev = _max_dev(ind2, j_st - j_sp)
        return dev <= tol, dev

    def dimension_identity():
        dst = round(st.degree.real)
        dsp = round(sp.degree.real)
        dev = abs(dst - q ** n * dsp)
        return dev == 0, float(dev)

    def equation_one():
        worst = 0.0
        for e in regular_top_exponents(n, q)[:3]:
            theta = gf.TorusCharacter(tower, 2, e)
            cusp = cuspidal_character(2 * n, q, theta)
            lhs = twisted_jacquet(cusp)
            rhs = induced_theta_restriction(n, q, e)
            worst = max(worst, _max_dev(lhs, rhs))
        return worst <= tol, worst

    run("sum: (pi x pi)_(N,psi) = St_2 + Sp_2 Jacquet", sum_identity)
    run("difference: Ind theta0^2 = St_2 - Sp_2 Jacquet", difference_identity)
    run("dimension: dim St_2 = q^n dim Sp_2", dimension_identity)
    run("equation (1): cuspidal Jacquet = Ind theta|", equation_one)
    return report
