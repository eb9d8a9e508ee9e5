import math

import numpy as np
import pytest

import kscars


def test_basis_dimension():
    assert len(kscars.build_basis(16, "pxp")) == 2207
    assert kscars.lucas_dimension(16) == 2207
    b = kscars.build_basis(4, "pxp")
    assert [b.to_bitstring(s) for s in b.states()][:3] == ["0000", "1000", "0100"]


def test_paramagnetic_lanczos():
    b = kscars.build_basis(8, "full")
    h = kscars.build_operator(b, "param")
    tri = kscars.run_lanczos(h, kscars.product_state(b, "Z2"), kmax=20)
    assert tri.krylov_dim == 9
    assert tri.terminated_naturally
    expect = [math.sqrt(n * (9 - n)) for n in range(1, 9)]
    np.testing.assert_allclose(tri.b, expect, rtol=1e-12)


def test_dense_matches_hermitian():
    b = kscars.build_basis(8, "pxp")
    d = kscars.build_operator(b, "pxp1", lam=0.108).to_dense()
    assert d.shape == (47, 47)
    np.testing.assert_allclose(d, d.T, rtol=0, atol=1e-14)


def test_evolution_and_fit():
    b = kscars.build_basis(12, "pxp")
    h = kscars.build_operator(b, "pxp")
    v0 = kscars.product_state(b, "Z2")
    tri = kscars.run_lanczos(h, v0, kmax=14, store_vectors=True)
    grid = kscars.uniform_grid(1.0, 0.1)
    a = kscars.evolve_tridiagonal(tri, grid)
    f = kscars.evolve_full(h, v0, grid, tri)
    assert np.max(np.abs(np.asarray(a.psi)[:, :8] - np.asarray(f.psi)[:, :8])) < 1e-6
    fit = kscars.fit_q_alpha(tri.b_by_index(), 12, window="table")
    assert abs(fit.q - 0.78047) < 1e-3
    assert abs(fit.alpha - 0.40059) < 1e-3


def test_analytic():
    assert kscars.q_number(2, 0.8) == pytest.approx(2.05)
    assert kscars.lanczos_suq2(1, 1.0, 1.0, 0.8) == pytest.approx(math.sqrt(2.05))
    assert abs(kscars.su2_wavefunction(0, 0.4, 8.0, 1.0)) == pytest.approx(math.cos(0.4) ** 16)


def test_errors_carry_kind():
    with pytest.raises(kscars.KscarsError) as info:
        kscars.product_state(kscars.build_basis(4, "pxp"), "1100")
    assert info.value.kind == "invalid_state"
    with pytest.raises(kscars.KscarsError) as info:
        kscars.q_number(1, -1.0)
    assert info.value.kind == "domain"
