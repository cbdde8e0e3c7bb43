import cmath
import math

import pytest

from glfq import gf


def brute_order(F, a):
    """Independent multiplicative order by direct powering."""
    x, k = a, 1
    while x != 1:
        x = F.mul(x, a)
        k += 1
        assert k <= F.size
    return k


def test_build_tower_f2_f4():
    t = gf.build_tower(2, 1, [2])
    assert [L.size for L in t.levels] == [2, 4]


def test_build_tower_degree_one_step():
    t = gf.build_tower(3, 1, [1, 2])
    assert [L.size for L in t.levels] == [3, 3, 9]
    # the middle level really is the base: embedding is the identity
    for e in range(3):
        assert t.embed(e, 0, 1) == e


def test_build_tower_f16_generator_order():
    t = gf.build_tower(2, 1, [2, 2])
    assert [L.size for L in t.levels] == [2, 4, 16]
    assert brute_order(t.level(2), t.level(2).generator) == 15


def test_build_tower_errors():
    with pytest.raises(gf.FieldError):
        gf.build_tower(4, 1, [2])  # p not prime
    with pytest.raises(gf.FieldError):
        gf.build_tower(2, 1, [])
    with pytest.raises(gf.FieldError):
        gf.build_tower(2, 1, [7, 2])  # total degree 14 > cap


@pytest.mark.parametrize("p,d", [(2, 2), (2, 4), (3, 2), (3, 4), (5, 2), (7, 2)])
def test_defining_polynomial_irreducible(p, d):
    # trial division against every monic polynomial of lower degree >= 1
    mod = list(gf.conway_polynomial(p, d)) + [1]
    for deg in range(1, d):
        for enc in range(p ** deg):
            div = [(enc // p ** i) % p for i in range(deg)] + [1]
            # long division remainder
            rem = list(mod)
            while len(rem) >= len(div) and any(rem):
                while rem and rem[-1] == 0:
                    rem.pop()
                if len(rem) < len(div):
                    break
                c = rem[-1]
                off = len(rem) - len(div)
                for i, dc in enumerate(div):
                    rem[off + i] = (rem[off + i] - c * dc) % p
            assert any(c % p for c in rem), f"{div} divides the modulus"


@pytest.mark.parametrize("p,d", [(2, 1), (2, 2), (2, 4), (3, 1), (3, 2),
                                 (3, 4), (5, 2), (7, 2)])
def test_generator_order_exact(p, d):
    F = gf.prime_power_field(p, d)
    n = F.size - 1
    g = F.generator
    assert F.pow(g, n) == 1
    for ell in gf.factorize(n):
        assert F.pow(g, n // ell) != 1


def test_trace_f4_f2():
    t = gf.build_tower(2, 1, [2])
    assert t.trace(1, 1, 0) == 0          # 1 + 1 = 0 in char 2
    x = t.level(1).generator              # root of the defining quadratic
    assert t.trace(x, 1, 0) == 1          # x + x^2 = x + (x+1) = 1
    assert t.trace(0, 1, 0) == 0


def test_trace_norm_transitive_f16():
    t = gf.build_tower(2, 1, [2, 2])
    for e in range(16):
        via_mid = t.trace(t.trace(e, 2, 1), 1, 0)
        assert t.trace(e, 2, 0) == via_mid
        via_mid_n = t.norm(t.norm(e, 2, 1), 1, 0)
        assert t.norm(e, 2, 0) == via_mid_n


def test_norm_examples():
    t = gf.build_tower(3, 1, [1, 2])
    assert t.norm(1, 2, 0) == 1
    g = t.level(2).generator
    ng = t.norm(g, 2, 1)
    # Norm(g) = g^(1+3) = g^4 has order 8/gcd(8,4) = 2
    assert t.level(1).mul(ng, ng) == 1 and ng != 1
    # elements of the fixed field get squared by the relative norm
    t2 = gf.build_tower(2, 1, [2, 2])
    for e in range(1, 4):
        emb = t2.embed(e, 1, 2)
        assert t2.norm(emb, 2, 1) == t2.level(1).mul(e, e)


def test_additive_character_values():
    t3 = gf.build_tower(3, 1, [2])
    assert t3.additive_character(0) == 1
    assert abs(t3.additive_character(1) - cmath.exp(2j * math.pi / 3)) < 1e-12
    t4 = gf.build_tower(2, 2, [2])
    assert abs(t4.additive_character(1) - 1) < 1e-12  # Tr_{F4/F2}(1) = 0
    t2 = gf.build_tower(2, 1, [2])
    assert abs(t2.additive_character(1) + 1) < 1e-12


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_additive_character_nontrivial(q):
    p, f = gf.prime_power(q)
    t = gf.build_tower(p, f, [2])
    total = sum(t.additive_character(e) for e in range(q))
    assert abs(total) < 1e-10
    for a in range(q):
        for b in range(q):
            lhs = t.additive_character(t.level(0).add(a, b))
            rhs = t.additive_character(a) * t.additive_character(b)
            assert abs(lhs - rhs) < 1e-10


@pytest.mark.parametrize("p,f,mult", [(2, 1, [2, 2]), (3, 1, [2]), (3, 1, [2, 2]),
                                      (2, 2, [2])])
def test_torus_character_multiplicative(p, f, mult):
    t = gf.build_tower(p, f, mult)
    top = t.num_levels - 1
    n = t.size(top) - 1
    theta = gf.TorusCharacter(t, top, 1 if n > 1 else 0)
    F = t.level(top)
    for a in range(1, F.size):
        for b in range(1, F.size):
            lhs = theta(F.mul(a, b))
            assert abs(lhs - theta(a) * theta(b)) < 1e-10


def test_torus_character_regularity():
    t = gf.build_tower(3, 1, [2])
    # F9 over F3: j regular iff j != 3j mod 8, i.e. j not in {0, 4}
    regs = [j for j in range(8) if gf.TorusCharacter(t, 1, j).is_regular(0)]
    assert regs == [1, 2, 3, 5, 6, 7]


def test_compose_norm_and_restrict():
    t = gf.build_tower(3, 1, [2])     # F3 < F9
    theta0 = gf.TorusCharacter(t, 0, 1)
    theta = theta0.compose_norm(1)
    for e in range(1, 9):
        assert abs(theta(e) - theta0(t.norm(e, 1, 0))) < 1e-12
    # restriction undoes the norm composition on the subfield
    res = theta.restrict(0)
    for e in range(1, 3):
        assert abs(res(e) - theta0(t.level(0).mul(e, e))) < 1e-12


def test_field_elem_coeffs_roundtrip():
    t = gf.build_tower(2, 1, [2, 2])
    for enc in range(16):
        x = t.elem(2, enc)
        cs = x.coeffs
        assert len(cs) == 2 and all(c.level == 1 for c in cs)
        back = t.from_coeffs(tuple(c.enc for c in cs), 2)
        assert back == enc
    # arithmetic consistency: coeffs are in the power basis {1, g}
    g = t.generator(2)
    for enc in range(16):
        x = t.elem(2, enc)
        c0, c1 = x.coeffs
        e0 = t.embed(c0.enc, 1, 2)
        e1 = t.embed(c1.enc, 1, 2)
        rebuilt = t.level(2).add(e0, t.level(2).mul(e1, g.enc))
        assert rebuilt == enc


def test_field_elem_cross_level_rejected():
    t = gf.build_tower(2, 1, [2])
    with pytest.raises(gf.FieldError):
        _ = t.elem(0, 1) + t.elem(1, 1)


def test_elem_arithmetic_matches_field():
    t = gf.build_tower(3, 1, [2])
    F = t.level(1)
    for a in range(9):
        for b in range(9):
            x, y = t.elem(1, a), t.elem(1, b)
            assert (x + y).enc == F.add(a, b)
            assert (x * y).enc == F.mul(a, b)
            if b:
                assert ((x / y) * y).enc == a


def test_tower_config_roundtrip():
    t = gf.build_tower(3, 1, [2, 2])
    cfg = t.to_config()
    assert cfg["p"] == 3 and cfg["degrees"] == [1, 2, 4]
    t2 = gf.FieldTower.from_config(cfg)
    assert [L.size for L in t2.levels] == [3, 9, 81]


def test_small_field_tables():
    sf = gf.small_field(4)
    assert sf.p == 2 and sf.f == 2
    # tables agree with the field object
    for a in range(4):
        for b in range(4):
            assert sf.add[a, b] == sf.field.add(a, b)
            assert sf.mul[a, b] == sf.field.mul(a, b)
    assert abs(sf.phi[1] - 1) < 1e-12
