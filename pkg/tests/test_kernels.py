"""The numba and numpy paths of every kernel must agree bit for bit (up to rounding order)."""
import numpy as np
import pytest

from qdirac import kernels
from qdirac.rng import generator


def _tables(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    d = rng.normal(size=n) + 1j * rng.normal(size=n)
    v[rng.integers(0, n, size=n // 4)] = 0
    return v, d


@pytest.mark.parametrize("d1, d2", [(0, 0), (1, -1), (-1, 1), (2, -3), (-2, -1), (3, 2)])
@pytest.mark.parametrize("limits", [(None, None, None, None), (5, 7, 9, 11), (0, 100, 3, 100)])
def test_shift_product_paths_agree(d1, d2, limits):
    rng = generator(11, abs(d1) * 10 + abs(d2))
    K, ext = 12, 20
    av, ad = _tables(rng, ext)
    bv, bd = _tables(rng, ext)
    a0, b0 = 0.5 + 0.25j, -1.0
    out_nb = kernels.shift_product(av, ad, bv, bd, a0, b0, d1, d2, K, *limits, use_numba=True)
    out_np = kernels.shift_product(av, ad, bv, bd, a0, b0, d1, d2, K, *limits, use_numba=False)
    np.testing.assert_allclose(out_nb[0], out_np[0], rtol=0, atol=1e-14)
    np.testing.assert_allclose(out_nb[1], out_np[1], rtol=0, atol=1e-14)
    assert out_nb[2:] == out_np[2:]


@pytest.mark.parametrize("shift, dt", [(0, 0), (1, 1), (-1, 2), (2, 0)])
def test_twosided_paths_agree(shift, dt):
    rng = generator(5, shift + 3 + 10 * dt)
    K, M = 7, 2
    ldeg = np.array([-1, 0, 2])
    rdeg = np.array([1, -2])
    ltab = rng.normal(size=(3, K + 4)) + 1j * rng.normal(size=(3, K + 4))
    rtab = rng.normal(size=(2, K + 4)) + 0j
    import scipy.sparse as sp

    mats = []
    for nb in (True, False):
        r, c, v = kernels.twosided_coo(ldeg, ltab, rdeg, rtab, K, M, shift, 0.5 - 1j, dt, use_numba=nb)
        n = (2 * M + 1) * K * K
        mats.append(sp.coo_matrix((v, (r, c)), shape=(n, n)).toarray())
    np.testing.assert_allclose(mats[0], mats[1], rtol=0, atol=1e-14)
    assert np.any(mats[0] != 0)


def test_twosided_matches_dense_left_right_product():
    rng = generator(2)
    K, M = 6, 1
    L = np.zeros((K, K), complex)
    R = np.zeros((K, K), complex)
    ltab = rng.normal(size=(1, K + 2)) + 0j
    rtab = rng.normal(size=(1, K + 2)) + 0j
    for j in range(K - 1):  # degree +1 left: entries (j+1, j)
        L[j + 1, j] = ltab[0, j]
    for k in range(K):  # degree 0 right
        R[k, k] = rtab[0, k]
    r, c, v = kernels.twosided_coo([1], ltab, [0], rtab, K, M)
    import scipy.sparse as sp

    n = (2 * M + 1) * K * K
    A = sp.coo_matrix((v, (r, c)), shape=(n, n)).tocsr()
    psi = rng.normal(size=(2 * M + 1, K, K)) + 0j
    out = (A @ psi.ravel()).reshape(psi.shape)
    for m in range(2 * M + 1):
        np.testing.assert_allclose(out[m], L @ psi[m] @ R, atol=1e-14)


def test_basis_index_layout():
    K, M = 4, 2
    assert kernels.basis_index(-M, 0, 0, K, M) == 0
    assert kernels.basis_index(M, K - 1, K - 1, K, M) == (2 * M + 1) * K * K - 1
    assert kernels.basis_index(0, 1, 2, K, M) == (2 * K + 1) * K + 2
