"""Weighted Hilbert space of matrix units, L2(D_q, mu_alpha), and the trace functional."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import disc
from .disc import DiscElement, INF
from .errors import DivergenceError, ParameterError

# q above this makes the geometric tail bound of the integral decay slowly
NEAR_ONE = 0.95


def weights(q, K, alpha):
    """Squared norms (1-q) q^(alpha k) of the matrix units, indexed by column k."""
    return (1.0 - q) * q ** (alpha * np.arange(K, dtype=float))


def _warn_near_one(q):
    if q > NEAR_ONE:
        warnings.warn(f"q={q} is close to 1; truncation tails decay slowly", RuntimeWarning, stacklevel=3)


@dataclass(frozen=True, eq=False)
class L2Vector:
    q: float
    K: int
    alpha: float
    coeffs: np.ndarray

    def __post_init__(self):
        disc.check_params(self.q, self.K)
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.shape != (self.K, self.K):
            raise ParameterError(f"coefficients must be {self.K}x{self.K}, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def _like(self, coeffs):
        return L2Vector(self.q, self.K, self.alpha, coeffs)

    def _same(self, other):
        if (self.q, self.K, self.alpha) != (other.q, other.K, other.alpha):
            raise ParameterError("vectors live in different spaces")

    def __add__(self, other):
        self._same(other)
        return self._like(self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._same(other)
        return self._like(self.coeffs - other.coeffs)

    def __mul__(self, c):
        return self._like(self.coeffs * complex(c))

    __rmul__ = __mul__

    def inner(self, other):
        return inner(self, other)

    def norm(self):
        return float(np.sqrt(max(inner(self, self).real, 0.0)))


def inner(f, g):
    """<f, g> = (1-q) sum_jk conj(f_jk) g_jk q^(alpha k), antilinear in f."""
    f._same(g)
    w = weights(f.q, f.K, f.alpha)
    return complex(np.sum(np.conj(f.coeffs) * g.coeffs * w[None, :]))


def matrix_unit(j, k, q, K, alpha):
    if not (0 <= j < K and 0 <= k < K):
        raise ParameterError(f"matrix unit ({j}, {k}) outside truncation {K}")
    c = np.zeros((K, K), dtype=np.complex128)
    c[j, k] = 1.0
    return L2Vector(q, K, alpha, c)


def from_disc(f, alpha):
    return L2Vector(f.q, f.K, alpha, disc.to_matrix(f))


def to_disc(v):
    return disc.from_matrix(v.coeffs, v.q)


def lmul(x, v):
    return v._like(disc.to_matrix(x, v.K) @ v.coeffs)


def rmul(x, v):
    return v._like(v.coeffs @ disc.to_matrix(x, v.K))


@dataclass(frozen=True)
class Integral:
    value: complex
    tail_bound: float


def integrate(f, alpha):
    """(1-q) sum_k f_0(q^k) q^(alpha k) with a bound on the omitted tail.

    Off-diagonal degrees have zero trace and do not contribute.
    """
    q, K = f.q, f.K
    _warn_near_one(q)
    tab = f.table(0)
    b = f.boundary.get(0, 0j)
    w = weights(q, K, alpha)
    if alpha <= 0:
        if b == INF or abs(b) > 0 or np.any(tab[K // 2:] != 0):
            raise DivergenceError(f"trace with weight y^{alpha} diverges for this element")
        return Integral(complex(np.sum(tab * w)), 0.0)
    if b == INF:
        # unbounded at 0: summable only if f_0(q^k) q^(alpha k) still decays
        terms = np.abs(tab * w)
        if terms[-1] >= terms[-2]:
            raise DivergenceError(f"trace with weight y^{alpha} diverges for this element")
        sup = float(terms[-1] / w[-1])
        ratio = float(terms[-1] / terms[-2])
        tail = float(terms[-1] * ratio / (1.0 - ratio))
        return Integral(complex(np.sum(tab * w)), tail)
    sup = max(float(np.max(np.abs(tab))), abs(b))
    tail = (1.0 - q) * sup * q ** (alpha * K) / (1.0 - q ** alpha)
    return Integral(complex(np.sum(tab * w)), tail)


def random_vector(q, K, alpha, rng, margin=0):
    """Gaussian vector, orthonormal-coordinate distributed, supported on j, k < K - margin."""
    n = K - margin
    if n <= 0:
        raise ParameterError(f"margin {margin} leaves no interior at K={K}")
    xi = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    c = np.zeros((K, K), dtype=np.complex128)
    c[:n, :n] = xi / np.sqrt(weights(q, n, alpha))[None, :]
    return L2Vector(q, K, alpha, c)


# -- mode arrays: L2(D_q) (x) span{e^{imt} : |m| <= M} ------------------------

def mode_weights(q, K, M, alpha):
    return np.broadcast_to(weights(q, K, alpha)[None, None, :], (2 * M + 1, K, K))


def mode_inner(psi, phi, q, alpha):
    K = psi.shape[-1]
    w = weights(q, K, alpha)
    return complex(np.sum(np.conj(psi) * phi * w))


def mode_norm(psi, q, alpha):
    return float(np.sqrt(max(mode_inner(psi, psi, q, alpha).real, 0.0)))


def random_modes(q, K, M, alpha, rng, margin=0, mode_margin=0):
    """Random mode array supported on j, k < K - margin and |m| <= M - mode_margin."""
    n = K - margin
    mm = M - mode_margin
    if n <= 0 or mm < 0:
        raise ParameterError("interior is empty for this margin")
    shape = (2 * mm + 1, n, n)
    xi = rng.normal(size=shape) + 1j * rng.normal(size=shape)
    out = np.zeros((2 * M + 1, K, K), dtype=np.complex128)
    out[mode_margin:2 * M + 1 - mode_margin, :n, :n] = xi / np.sqrt(weights(q, n, alpha))[None, None, :]
    return out
