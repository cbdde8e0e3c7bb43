import numpy as np
import pytest

from glfq import fourier, gf, matgrp


@pytest.fixture(autouse=True)
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("GLFQ_CACHE_DIR", str(tmp_path / "kernels"))


def random_mat_function(n, q, rng, sparse=False):
    size = q ** (n * n)
    if sparse:
        k = int(rng.integers(1, max(2, size // 4)))
        sup = rng.choice(size, size=k, replace=False)
        return fourier.MatFunction.sparse(
            n, q, {int(e): complex(rng.normal(), rng.normal()) for e in sup})
    return fourier.MatFunction.dense(
        n, q, rng.normal(size=size) + 1j * rng.normal(size=size))


def test_delta_and_constant():
    ctx = fourier.orbit_context(2, 3)
    zero = fourier.orbit_indicator(2, 3, ctx.labels[ctx.zero_index()])
    assert np.allclose(fourier.fourier(zero).to_dense().data, 1.0)
    ones = fourier.MatFunction.dense(2, 3, np.ones(81))
    oh = fourier.fourier(ones).to_dense().data
    assert abs(oh[0] - 81) < 1e-9 and np.abs(oh[1:]).max() < 1e-9


def test_one_by_one_semisimple_orbit():
    # n=1: orbit {a}, a != 0: fhat(y) = phi(a y)
    sf = gf.small_field(5)
    ctx = fourier.orbit_context(1, 5)
    for i, lab in enumerate(ctx.labels):
        a = int(ctx.reps[i])
        f = fourier.orbit_indicator(1, 5, lab)
        fh = fourier.fourier(f).to_dense().data
        for y in range(5):
            assert abs(fh[y] - sf.phi[sf.mul[a, y]]) < 1e-12


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (1, 5), (2, 4), (1, 7)])
def test_butterfly_equals_naive(n, q):
    rng = np.random.default_rng(n * 10 + q)
    for _ in range(3):
        f = random_mat_function(n, q, rng)
        a = fourier.fourier_dense(f).data
        b = fourier.fourier_naive(f).data
        assert np.abs(a - b).max() < 1e-9


@pytest.mark.parametrize("n,q", [(1, 2), (1, 3), (1, 5), (2, 2), (2, 3),
                                 (2, 5), (3, 2), (3, 3)])
def test_parseval_and_inversion(n, q):
    rng = np.random.default_rng(7 * n + q)
    size = q ** (n * n)
    cases = [random_mat_function(n, q, rng, sparse=True) for _ in range(50)]
    ctx = fourier.orbit_context(n, q)
    cases += [fourier.orbit_indicator(n, q, lab) for lab in ctx.labels]
    for f in cases:
        lhs, rhs = fourier.parseval_check(f)
        assert abs(lhs - rhs) <= 1e-8 * max(1.0, abs(rhs))
        fhh = fourier.fourier_dense(fourier.fourier_dense(f.to_dense())).data
        want = size * f.negate_argument().data
        assert np.abs(fhh - want).max() < 1e-8 * max(1.0, np.abs(want).max())


@pytest.mark.parametrize("n,q", [(2, 2), (2, 3), (2, 5), (3, 2), (3, 3)])
def test_dense_vs_orbit_kernel_paths(n, q):
    ctx = fourier.orbit_context(n, q)
    for lab in ctx.labels:
        ind = fourier.orbit_indicator(n, q, lab)
        a = fourier.fourier_dense(ind.to_dense()).to_invariant(tol=1e-8).data
        b = fourier.fourier_invariant(ind).data
        assert np.abs(a - b).max() < 1e-8, (n, q, str(lab))


def test_ad_invariance_of_transform():
    n, q = 2, 3
    sp = matgrp.mat_space(n, q)
    rng = np.random.default_rng(3)
    els = sp.group_elements()
    cone = fourier.cone_indicator(n, q)
    fh = fourier.fourier(cone).to_dense().data
    for _ in range(100):
        g = int(els[rng.integers(len(els))])
        y = int(rng.integers(sp.size))
        assert abs(fh[sp.conj(g, y)] - fh[y]) < 1e-9


def test_orbit_indicator_masses():
    # nilpotent [2] in M_2(F_3): 8 matrices
    lab = matgrp.ClassLabel(matgrp.MSD_ORBIT, (((0, 1), (2,)),))
    ind = fourier.orbit_indicator(2, 3, lab)
    assert ind.total_mass().real == 8
    # semisimple diag(0,1) in M_2(F_2): orbit size 6, by enumeration
    sp = matgrp.mat_space(2, 2)
    d01 = sp.encode([[0, 0], [0, 1]])
    lab2 = matgrp.classify(sp, d01, kind=matgrp.MSD_ORBIT)
    ind2 = fourier.orbit_indicator(2, 2, lab2)
    orbit = {sp.conj(int(g), d01) for g in sp.group_elements()}
    assert ind2.total_mass().real == len(orbit) == 6
    # zero orbit: mass 1
    ctx = fourier.orbit_context(2, 2)
    z = fourier.orbit_indicator(2, 2, ctx.labels[ctx.zero_index()])
    assert z.total_mass().real == 1


@pytest.mark.parametrize("n,q,mass", [(1, 3, 1), (2, 2, 4), (2, 3, 9),
                                      (2, 5, 25), (3, 2, 64), (3, 3, 729)])
def test_cone_masses(n, q, mass):
    cone = fourier.cone_indicator(n, q)
    assert cone.total_mass().real == mass == q ** (n * (n - 1))
    assert fourier.count_nilpotent_brute(n, q) == mass


def test_conversion_roundtrips_exact():
    rng = np.random.default_rng(11)
    ctx = fourier.orbit_context(2, 3)
    inv = fourier.MatFunction.invariant(
        2, 3, {i: complex(rng.normal(), rng.normal())
               for i in range(ctx.num_orbits)})
    dense = inv.to_dense()
    back = dense.to_invariant()  # exact
    assert np.array_equal(back.data, inv.data)
    sp = dense.to_sparse()
    assert np.array_equal(sp.to_dense().data, dense.data)


def test_not_invariant_detected():
    vec = np.zeros(81, dtype=np.complex128)
    vec[matgrp.mat_space(2, 3).encode([[0, 1], [0, 0]])] = 1.0  # one point of an 8-orbit
    f = fourier.MatFunction.dense(2, 3, vec)
    with pytest.raises(fourier.NotInvariant):
        fourier.invariant_spectrum(f)


def test_invariant_spectrum_reconstruction():
    cone = fourier.cone_indicator(2, 3)
    spec = fourier.invariant_spectrum(cone)
    ctx = cone.ctx
    # reconstruction: sum of coefficients times indicators equals fhat
    fhat = fourier.fourier_dense(cone.to_dense()).data
    recon = np.zeros_like(fhat)
    omap = ctx.orbit_map()
    for lab, coeff, size in spec:
        recon[omap == ctx.index[lab]] += coeff
    assert np.abs(recon - fhat).max() < 1e-8
    # Parseval cross-check in the orbit basis
    total = sum(abs(c) ** 2 * s for _, c, s in spec)
    assert abs(total - 81 * 9) < 1e-6


def test_zero_indicator_spectrum_all_ones():
    # fhat of the delta at 0 is the constant 1 = sum of all indicators
    for n, q in [(1, 3), (2, 3)]:
        ctx = fourier.orbit_context(n, q)
        z = fourier.orbit_indicator(n, q, ctx.labels[ctx.zero_index()])
        spec = fourier.invariant_spectrum(z)
        assert all(abs(c - 1) < 1e-9 for _, c, _ in spec)


def test_kernel_cache_roundtrip(tmp_path, monkeypatch):
    monkeypatch.setenv("GLFQ_CACHE_DIR", str(tmp_path))
    K1 = fourier.orbit_kernel(2, 3)
    files = list(tmp_path.glob("orbit-kernel-*.bin"))
    assert len(files) == 1
    K2 = fourier.orbit_kernel(2, 3)
    assert np.array_equal(K1, K2)
    # corrupt magic -> recomputed, not trusted
    files[0].write_bytes(b"garbage")
    K3 = fourier.orbit_kernel(2, 3)
    assert np.abs(K3 - K1).max() < 1e-12


def test_kernel_threads_deterministic():
    K1 = fourier.orbit_kernel(2, 3, threads=1, use_cache=False)
    K8 = fourier.orbit_kernel(2, 3, threads=8, use_cache=False)
    assert np.array_equal(K1, K8)


def test_dense_budget_guard():
    # invariant-form construction is label arithmetic and always fine;
    # the transforms enforce the dense sweep budget
    f = fourier.MatFunction.invariant(4, 5, {0: 1.0})
    with pytest.raises(matgrp.BudgetError):
        fourier.fourier_dense(f)
    with pytest.raises(matgrp.BudgetError):
        f.to_dense()
