import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdirac import disc
from qdirac.disc import INF, make_generator, mul, star, sigma, to_matrix
from qdirac.errors import ParameterError, UnboundedSymbolError
from qdirac.rng import generator

Q = 0.5


def gen(kind, q=Q, K=16, **kw):
    return make_generator(kind, q, K, **kw)


def rand(seed, q=Q, K=16, support=6, maxdeg=2):
    return disc.random_f0(q, K, generator(seed), support=support, maxdeg=maxdeg)


# -- generators ---------------------------------------------------------------

def test_y_table():
    y = gen("y", K=4)
    assert y.degrees == [0]
    np.testing.assert_allclose(y.table(0), [1, 0.5, 0.25, 0.125])
    assert y.boundary[0] == 0


def test_one_table():
    one = gen("one", K=5)
    np.testing.assert_array_equal(one.table(0), np.ones(5))
    assert one.boundary[0] == 1


def test_z_table():
    z = gen("z", K=4)
    assert z.degrees == [-1]
    expect = [np.sqrt(1 - Q ** (2 * n)) for n in range(1, 5)]
    np.testing.assert_allclose(z.table(-1), expect, rtol=0, atol=1e-15)
    assert z.boundary[-1] == 1


def test_z_matrix_entries():
    K = 6
    Z = to_matrix(gen("z", K=K))
    for n in range(1, K):
        assert Z[n - 1, n] == pytest.approx(np.sqrt(1 - Q ** (2 * n)), abs=1e-15)
    assert np.count_nonzero(Z) == K - 1


def test_inverse_power_has_infinite_boundary():
    yinv = gen("y_pow", beta=-1)
    assert yinv.boundary[0] == INF
    assert not yinv.bounded
    np.testing.assert_allclose(yinv.table(0), Q ** -np.arange(16.0))


def test_sqrt_y():
    r = gen("y_pow", beta=0.5)
    assert disc.distance(mul(r, r), gen("y")) < 1e-15


@pytest.mark.parametrize("q, K", [(0.0, 4), (1.0, 4), (-0.3, 4), (0.5, 0), (1.5, 3)])
def test_bad_params(q, K):
    with pytest.raises(ParameterError):
        make_generator("one", q, K)


def test_unknown_kind_and_indicator_range():
    with pytest.raises(ParameterError):
        gen("w")
    with pytest.raises(ParameterError):
        gen("indicator", k=16)


# -- relations (exact) ----------------------------------------------------------

@pytest.mark.parametrize("q", [0.3, 0.5, 0.9])
def test_disc_relation(q):
    K = 32
    z, zs, one = gen("z", q, K), gen("z_star", q, K), gen("one", q, K)
    r = mul(z, zs) - (q * q) * mul(zs, z) - (1 - q * q) * one
    assert disc.distance(r, disc.zero(q, K)) <= 1e-15
    assert not r.approx_flag


@pytest.mark.parametrize("q", [0.3, 0.9])
def test_zy_commutation(q):
    z, y = gen("z", q), gen("y", q)
    assert disc.distance(mul(z, y), q * mul(y, z)) < 1e-15


def test_shift_relations():
    s, ss, one = gen("s"), gen("s_star"), gen("one")
    assert disc.distance(mul(ss, s), one) == 0.0
    assert disc.distance(mul(s, ss), one - gen("indicator", k=0)) == 0.0


def test_s_sstar_matches_matrix_product():
    K = 10
    S, Ss = to_matrix(gen("s", K=K)), to_matrix(gen("s_star", K=K))
    np.testing.assert_array_equal(to_matrix(mul(gen("s", K=K), gen("s_star", K=K)))[:K - 1, :K - 1],
                                  (S @ Ss)[:K - 1, :K - 1])


def test_zstar_z():
    z, zs, y, one = gen("z"), gen("z_star"), gen("y"), gen("one")
    assert disc.distance(mul(zs, z), one - mul(y, y)) < 1e-15


# -- star, sigma --------------------------------------------------------------------

def test_star_of_z():
    assert disc.distance(star(gen("z")), gen("z_star")) == 0.0


def test_star_of_product_matches_matrix_adjoint():
    K = 12
    z, y = gen("z", K=K), gen("y", K=K)
    lhs = to_matrix(star(mul(z, y)))
    rhs = to_matrix(mul(z, y)).conj().T
    np.testing.assert_allclose(lhs[:K - 1, :K - 1], rhs[:K - 1, :K - 1], atol=1e-15)
    assert disc.distance(star(mul(z, y)), mul(y, gen("z_star", K=K))) < 1e-15


@pytest.mark.parametrize("alpha", [1.0, 2.0, 0.7])
def test_sigma_on_generators(alpha):
    assert disc.distance(sigma(gen("s"), alpha), Q ** -alpha * gen("s")) < 1e-15
    assert disc.distance(sigma(gen("s_star"), alpha), Q ** alpha * gen("s_star")) < 1e-15
    assert disc.distance(sigma(gen("y"), alpha), gen("y")) == 0.0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32), st.sampled_from([1.0, 2.0]))
def test_star_sigma_relation(seed, alpha):
    a = rand(seed)
    assert disc.distance(star(sigma(a, alpha)), sigma(star(a), -alpha)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_star_is_involution(seed):
    a = rand(seed)
    assert disc.distance(star(star(a)), a) == 0.0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_star_reverses_products(seed):
    a, b = rand(seed), rand(seed + 1)
    assert disc.distance(star(mul(a, b)), mul(star(b), star(a))) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32), st.sampled_from([1.0, 2.0]))
def test_sigma_is_multiplicative(seed, alpha):
    a, b = rand(seed), rand(seed + 7)
    lhs, rhs = sigma(mul(a, b), alpha), mul(sigma(a, alpha), sigma(b, alpha))
    scale = max(np.max(np.abs(t)) for t in lhs.values.values())
    assert disc.distance(lhs, rhs) <= 1e-12 * scale


# -- products against dense matrices -----------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_product_matches_matrix_product(seed):
    K = 20
    a, b = rand(seed, K=K, support=8), rand(seed + 3, K=K, support=8)
    n = K - a.maxdeg - b.maxdeg
    A, B = to_matrix(a), to_matrix(b)
    np.testing.assert_allclose(to_matrix(mul(a, b))[:n, :n], (A @ B)[:n, :n], atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_associativity(seed):
    a, b, c = rand(seed), rand(seed + 1), rand(seed + 2)
    lhs, rhs = to_matrix(mul(mul(a, b), c)), to_matrix(mul(a, mul(b, c)))
    np.testing.assert_allclose(lhs[:10, :10], rhs[:10, :10], atol=1e-12 * np.max(np.abs(lhs)))


def test_from_matrix_roundtrip():
    a = rand(3)
    b = disc.from_matrix(to_matrix(a), Q)
    np.testing.assert_array_equal(to_matrix(b), to_matrix(a))


def test_generator_product_is_exact_with_headroom():
    z, zs = gen("z", K=24), gen("z_star", K=24)
    w = mul(mul(z, zs), mul(z, z))
    assert not w.approx_flag
    n = 24 - 4
    Z, Zs = to_matrix(z), to_matrix(zs)
    np.testing.assert_allclose(to_matrix(w)[:n, :n], (Z @ Zs @ Z @ Z)[:n, :n], atol=1e-15)


def test_reading_past_the_grid_sets_flag():
    # the degree-2 entry at index 7 needs index 8 of a degree-1 factor whose
    # table is still changing at the edge
    tab = np.linspace(1, 2, 8).astype(complex)
    a = disc.from_tables(Q, 8, {1: tab})
    p = mul(a, a)
    assert p.approx_flag
    assert p.valid < 8
    exact = mul(gen("s", K=8), gen("s", K=8))
    assert not exact.approx_flag and exact.valid == 8


def test_mismatched_parameters():
    with pytest.raises(ParameterError):
        mul(gen("y", K=8), gen("y", K=9))
    with pytest.raises(ParameterError):
        mul(gen("y", q=0.5), gen("y", q=0.6))


# -- symbol -------------------------------------------------------------------------

def test_symbols():
    assert disc.symbol(gen("z")).coeffs == {-1: 1.0}
    assert disc.symbol(gen("s")).coeffs == {1: 1.0}
    assert disc.symbol(gen("indicator", k=3)).coeffs == {}
    assert disc.symbol(gen("y")).coeffs == {}


def test_symbol_of_unbounded_raises():
    with pytest.raises(UnboundedSymbolError):
        disc.symbol(gen("y_pow", beta=-1))


def test_symbol_is_multiplicative():
    words = [gen("z"), gen("z_star"), gen("s") + gen("y"), mul(gen("z"), gen("z")) + 2.0 * gen("one")]
    for a in words:
        for b in words:
            assert disc.symbol(mul(a, b)).distance(disc.symbol(a) * disc.symbol(b)) < 1e-15


def test_circle_element_star_and_eval():
    u = disc.CircleElement({1: 2 + 1j, -2: 3})
    assert u.star().coeffs == {-1: 2 - 1j, 2: 3}
    t = np.linspace(0, 1, 5)
    np.testing.assert_allclose(u.star()(t), np.conj(u(t)))
