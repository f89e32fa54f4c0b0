"""Chebyshev series machinery: exact T_n coefficients, tensor-product
Gauss-Lobatto fitting, and conversion to monomial form.

Series live on a per-axis interval (default [-1, 1]); fitting on another
interval composes the affine map into every downstream identity, so the
classical facts about T_n (recursion, the 2^n coefficient bound) are used
only on [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def cheb_poly_coeffs(n):
    """Monomial coefficients of T_n from T_{n+1} = 2x T_n - T_{n-1}.

    Computed in exact integer arithmetic and returned as floats; degrees
    above 60 are rejected (coefficients leave the exactly representable
    double range well before that point matters downstream).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > 60:
        raise ValueError("degree above 60 rejected: coefficients overflow doubles")
    prev = [1]
    if n == 0:
        return np.array(prev, dtype=np.float64)
    cur = [0, 1]
    for _ in range(n - 1):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return np.array(cur, dtype=np.float64)


@dataclass
class ChebyshevSeries:
    """Tensor-product series sum_k a_k T_{k1}(t_1) ... T_{kd}(t_d) with
    t_a the affine image of x_a from domain[a] onto [-1, 1]."""

    coeffs: np.ndarray
    domain: tuple = None

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("series coefficients must be finite")
        if self.domain is None:
            self.domain = tuple((-1.0, 1.0) for _ in range(self.coeffs.ndim))
        self.domain = tuple((float(lo), float(hi)) for lo, hi in self.domain)
        if len(self.domain) != self.coeffs.ndim:
            raise ValueError("domain must give one interval per axis")

    @property
    def d(self):
        return self.coeffs.ndim

    @property
    def degrees(self):
        return tuple(s - 1 for s in self.coeffs.shape)

    def evaluate(self, x):
        """Evaluate at points of shape (n, d) (or (n,) when d == 1)."""
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x[:, None]
        if x.shape[1] != self.d:
            raise ValueError(f"expected points with {self.d} coordinates")
        vs = []
        for a in range(self.d):
            lo, hi = self.domain[a]
            t = 2.0 * (x[:, a] - lo) / (hi - lo) - 1.0
            vs.append(_cheb_vander(t, self.coeffs.shape[a] - 1))
        if self.d == 1:
            return vs[0] @ self.coeffs
        if self.d == 2:
            return np.einsum("ni,nj,ij->n", vs[0], vs[1], self.coeffs)
        if self.d == 3:
            return np.einsum("ni,nj,nk,ijk->n", vs[0], vs[1], vs[2], self.coeffs)
        raise ValueError("evaluation supported up to d = 3")


def _cheb_vander(t, deg):
    v = np.empty((len(t), deg + 1))
    v[:, 0] = 1.0
    if deg >= 1:
        v[:, 1] = t
    for k in range(2, deg + 1):
        v[:, k] = 2.0 * t * v[:, k - 1] - v[:, k - 2]
    return v


def _lobatto_transform(n):
    """Matrix taking values at nodes cos(j pi / n) to Chebyshev coefficients."""
    if n == 0:
        return np.array([[1.0]])
    j = np.arange(n + 1)
    m = np.cos(np.pi * np.outer(j, j) / n) * (2.0 / n)
    m[:, 0] *= 0.5
    m[:, n] *= 0.5
    m[0, :] *= 0.5
    m[n, :] *= 0.5
    return m


def cheb_fit(target, degrees, domain=None):
    """Interpolate on the tensor Chebyshev-Gauss-Lobatto grid.

    `target` is a callable taking points of shape (n, d), or any object with
    such an `evaluate` method.  Exact (to rounding) for polynomial targets of
    per-axis degree at most the fitted degree.
    """
    fn = target.evaluate if hasattr(target, "evaluate") else target
    degrees = tuple(int(n) for n in degrees)
    d = len(degrees)
    if d < 1 or d > 3:
        raise ValueError("cheb_fit supports 1 <= d <= 3")
    if any(n < 0 for n in degrees):
        raise ValueError("degrees must be nonnegative")
    if domain is None:
        domain = tuple((-1.0, 1.0) for _ in range(d))
    axes = []
    for a, n in enumerate(degrees):
        t = np.cos(np.pi * np.arange(n + 1) / n) if n > 0 else np.array([1.0])
        lo, hi = domain[a]
        axes.append(lo + (hi - lo) * (t + 1.0) / 2.0)
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.column_stack([g.ravel() for g in grids])
    vals = np.asarray(fn(pts), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        bad = pts[~np.isfinite(vals)][0]
        raise ValueError(f"target returned a non-finite value at node {tuple(bad)}")
    coeffs = vals.reshape([n + 1 for n in degrees])
    for a, n in enumerate(degrees):
        coeffs = np.moveaxis(
            np.tensordot(_lobatto_transform(n), coeffs, axes=(1, a)), 0, a
        )
    return ChebyshevSeries(coeffs, tuple(domain))


@dataclass
class MonomialPolynomial:
    """Finite polynomial sum_k c_k x^k keyed by multi-index tuples."""

    d: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, c in self.terms.items():
            k = tuple(int(i) for i in k)
            if len(k) != self.d or any(i < 0 for i in k):
                raise ValueError(f"bad multi-index {k} for d={self.d}")
            c = float(c)
            if not np.isfinite(c):
                raise ValueError(f"non-finite coefficient at {k}")
            if c != 0.0:
                clean[k] = c
        self.terms = clean

    @property
    def degree(self):
        return max((sum(k) for k in self.terms), default=0)

    def coeff_l1(self):
        return float(sum(abs(c) for c in self.terms.values()))

    def evaluate(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x[:, None]
        out = np.zeros(x.shape[0])
        for k, c in self.terms.items():
            term = np.full(x.shape[0], c)
            for axis, count in enumerate(k):
                if count:
                    term = term * x[:, axis] ** count
            out += term
        return out


def _affine_cheb_monomials(n, lo, hi):
    """Monomial coefficients of T_n(alpha x + beta) mapping [lo,hi] to [-1,1]."""
    alpha = 2.0 / (hi - lo)
    beta = -(hi + lo) / (hi - lo)
    base = cheb_poly_coeffs(n)
    out = np.zeros(n + 1)
    power = np.array([1.0])
    for i in range(n + 1):
        out[: len(power)] += base[i] * power
        if i < n:
            power = np.convolve(power, [beta, alpha])
    return out


def cheb_to_monomial(series, gamma):
    """Rewrite the series (truncated to total degree <= gamma) in monomials.

    Tensor coefficients with |k|_1 > gamma are dropped first; each surviving
    product T_{k1}...T_{kd} is expanded exactly through the affine domain
    map, so the result is a polynomial identity with the truncated series.
    """
    coeffs = series.coeffs
    d = series.d
    cache = {}
    terms = {}
    for k in np.ndindex(coeffs.shape):
        c = coeffs[k]
        if c == 0.0 or sum(k) > gamma:
            continue
        vecs = []
        for a, ka in enumerate(k):
            key = (ka, series.domain[a])
            if key not in cache:
                cache[key] = _affine_cheb_monomials(ka, *series.domain[a])
            vecs.append(cache[key])
        for j in np.ndindex(tuple(len(v) for v in vecs)):
            val = c
            for a in range(d):
                val *= vecs[a][j[a]]
            if val != 0.0:
                terms[j] = terms.get(j, 0.0) + val
    return MonomialPolynomial(d, terms)
