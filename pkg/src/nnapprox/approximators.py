"""Analytic-function approximators built on the all-monomials network.

Two routes produce a network approximating f on a box:

* power series: given coefficients a_k with sum |a_k| <= F, truncate at
  total degree gamma = ceil((1/delta) ln(1/eps)) and append the coefficient
  row to build_mon(m, gamma+1, d) with m = ceil(log2(1/eps)).  Certified on
  (0, 1-delta]^d (intersected with the monomial variant's domain).
* Chebyshev: fit a tensor Gauss-Lobatto series of per-axis degree
  gamma = m = ceil(log2(1/eps)) on [0,1]^d, truncate to total degree gamma,
  convert to monomials and append the row.

Both return (network, certificate); certificates carry the claimed bounds
next to measured quantities and are JSON-ready dicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chebyshev import MonomialPolynomial, cheb_fit, cheb_to_monomial
from .constructions import (
    MultVariant,
    LITERAL,
    build_mon,
    count_monomials,
    enumerate_multi_indices,
    monomial_values,
)
from .network import Network, append_layer, evaluate, path_norm


class MissingCoefficientError(ValueError):
    """The supplied series generator failed to produce a needed coefficient."""


@dataclass
class AnalyticTarget:
    """A function on [0,1]^d with whatever analyticity data the caller declares.

    fn maps an (n, d) array to an (n,) array.  F bounds either sup|f| or the
    l1 norm of the power-series coefficients depending on the route; rho is
    the declared ellipse parameter and is carried as metadata only.  Set
    concurrent_safe=False for evaluators that must be called serially.
    """

    name: str
    d: int
    fn: callable
    F: float = None
    rho: float = None
    concurrent_safe: bool = True

    def evaluate(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x[:, None]
        if x.shape[1] != self.d:
            raise ValueError(f"target {self.name} expects d={self.d} coordinates")
        return np.asarray(self.fn(x), dtype=np.float64)


def target_inv_two_minus_x():
    """f(x) = 1/(2-x) = sum_k x^k / 2^(k+1); F = 1 for the series route."""
    return AnalyticTarget("inv2mx", 1, lambda p: 1.0 / (2.0 - p[:, 0]), F=1.0, rho=3.0 + 2.0 * math.sqrt(2.0))


def target_exp_sum(d=1):
    return AnalyticTarget(f"exp-sum-{d}d", d, lambda p: np.exp(np.sum(p, axis=1)), F=float(np.exp(d)))


def target_runge():
    """1/(1 + 25 x^2); poles at +-i/5 make this a stress case for rho."""
    return AnalyticTarget("runge", 1, lambda p: 1.0 / (1.0 + 25.0 * p[:, 0] ** 2), F=1.0)


def builtin_target(name, d=1):
    reg = {
        "inv2mx": lambda: target_inv_two_minus_x(),
        "exp-sum": lambda: target_exp_sum(d),
        "runge": lambda: target_runge(),
    }
    if name not in reg:
        raise ValueError(f"unknown builtin target {name!r} (have {sorted(reg)})")
    return reg[name]()


def series_inv_two_minus_x():
    """Coefficient generator for 1/(2-x): a_k = 2^-(k+1)."""
    return lambda k: 0.5 ** (k[0] + 1)


BUILTIN_SERIES = {"inv2mx": (series_inv_two_minus_x, 1, 1.0)}


def _coefficient_row(series, indices, d):
    """Row of coefficients for the listed multi-indices, in order."""
    if isinstance(series, MonomialPolynomial):
        if series.d != d:
            raise ValueError("polynomial dimension does not match d")
        return np.array([series.terms.get(k, 0.0) for k in indices])
    row = np.empty(len(indices))
    for j, k in enumerate(indices):
        try:
            c = series(k)
        except Exception as e:
            raise MissingCoefficientError(f"no coefficient for {k}: {e}") from e
        if c is None or not np.isfinite(c):
            raise MissingCoefficientError(f"no finite coefficient for {k}")
        row[j] = c
    return row


def power_series_path_bound(d, F, gamma, variant):
    bound = 144.0 * (d + 1) * F * (gamma + 2) ** 5
    if MultVariant.parse(variant) is not LITERAL:
        bound *= 16.0 * (gamma + 2)
    return bound


def build_power_series_net(series, eps, delta, variant, d=None, F=None):
    """Network approximating sum a_k x^k on (0, 1-delta]^d.

    `series` is a MonomialPolynomial (absent terms are zero) or a callable
    from multi-index tuples to coefficients.  Returns (network, certificate).
    """
    if not (0.0 < eps < 1.0 and 0.0 < delta < 1.0):
        raise ValueError("eps and delta must lie in (0, 1)")
    variant = MultVariant.parse(variant)
    if isinstance(series, MonomialPolynomial):
        d = series.d
    elif d is None:
        raise ValueError("d is required when series is a callable")
    gamma = max(1, math.ceil((1.0 / delta) * math.log(1.0 / eps)))
    m = max(1, math.ceil(math.log2(1.0 / eps)))
    indices = enumerate_multi_indices(d, gamma + 1)
    row = _coefficient_row(series, indices, d)
    if F is None:
        F = float(np.sum(np.abs(row)))
        if isinstance(series, MonomialPolynomial):
            F = max(F, series.coeff_l1())
    mon = build_mon(m, gamma + 1, d, variant)
    lit = variant is LITERAL
    meta = {
        "construction": "power-series-net",
        "d": d,
        "m": m,
        "gamma": gamma,
        "variant": variant.value,
        "F": F,
    }
    net = append_layer(mon, row.reshape(1, -1), meta=meta)
    pn = path_norm(net)
    bound = power_series_path_bound(d, F, gamma, variant)
    assert pn <= bound or F == 0.0
    lo_dom = min(0.5, 1.0 - delta) if lit else 1.0 - delta
    cert = {
        "route": "power-series",
        "d": d,
        "eps": eps,
        "delta": delta,
        "gamma": gamma,
        "m": m,
        "variant": variant.value,
        "F": F,
        "claimed_error": (2.0 if lit else 6.0) * F * eps / delta**2,
        "claimed_domain": f"(0, {lo_dom}]^{d}",
        "path_norm": pn,
        "path_norm_bound": bound,
        "claimed_depth_bound": math.ceil(math.log2(gamma + 1)) * (2 * m + 5) + 2,
        "claimed_width_bound": 6 * (gamma + 1) * (m + 2) * count_monomials(d, gamma + 1),
        "depth": net.depth,
        "max_width": net.max_width,
    }
    return net, cert


def build_cheb_net(target, eps, variant, measure_grid=513):
    """Network approximating an analytic target on [0,1]^d via its Chebyshev
    truncation; returns (network, certificate) with the measured sup error."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    variant = MultVariant.parse(variant)
    d = target.d
    gamma = m = max(1, math.ceil(math.log2(1.0 / eps)))
    series = cheb_fit(target, (gamma,) * d, domain=((0.0, 1.0),) * d)
    poly = cheb_to_monomial(series, gamma)
    indices = enumerate_multi_indices(d, gamma + 1)
    row = np.array([poly.terms.get(k, 0.0) for k in indices])
    mon = build_mon(m, gamma + 1, d, variant)
    meta = {
        "construction": "cheb-net",
        "target": target.name,
        "d": d,
        "m": m,
        "gamma": gamma,
        "variant": variant.value,
    }
    net = append_layer(mon, row.reshape(1, -1), meta=meta)

    per_axis = max(2, int(round(measure_grid ** (1.0 / d))))
    axes = [np.linspace(0.0, 1.0, per_axis)] * d
    grid = np.column_stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")])
    inp = np.column_stack([np.ones(len(grid)), grid])
    measured = float(np.abs(evaluate(net, inp)[:, 0] - target.evaluate(grid)).max())
    cert = {
        "route": "chebyshev",
        "target": target.name,
        "d": d,
        "eps": eps,
        "gamma": gamma,
        "m": m,
        "variant": variant.value,
        "rho": target.rho,
        "measured_sup_error": measured,
        "grid": {"points_per_axis": per_axis, "domain": "[0,1]^%d" % d},
        "claimed_orders": {
            "depth": "O(log2(1/eps))^2",
            "width": f"O(log2(1/eps))^{d + 2}",
            "path_norm": f"O(log2(1/eps))^{2 * d + 5}",
        },
        "claimed_depth_bound": math.ceil(math.log2(gamma + 1)) * (2 * m + 5) + 2,
        "claimed_width_bound": 6 * (gamma + 1) * (m + 2) * count_monomials(d, gamma + 1),
        "depth": net.depth,
        "max_width": net.max_width,
        "path_norm": path_norm(net),
    }
    return net, cert


def l1_param_budget(net):
    """Parameter counts and l1 mass, compared against (L+1) * max_width^2."""
    count = net.param_count()
    bound = (net.depth + 1) * net.max_width**2
    return {
        "param_count": count,
        "l1_total": float(sum(lay.l1() for lay in net.layers)),
        "depth": net.depth,
        "max_width": net.max_width,
        "param_count_bound": bound,
        "within_bound": count <= bound,
    }


def power_series_tail_bound(F, delta, gamma):
    """(1-delta)^gamma * F, the truncation tail on (0, 1-delta]^d."""
    return (1.0 - delta) ** gamma * F
