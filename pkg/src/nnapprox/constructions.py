"""Exact builders for the squaring, multiplication, product-tree and
all-monomials networks, plus their closed-form reference oracles.

Everything here uses the absolute-value activation.  The squaring chain
realizes f_m(x) = x - sum_s g_s(x)/4^s where g is the unit tent wave
g(x) = 1 - 2|x - 1/2| and g_s its s-fold composition; f_m equals the
piecewise-linear interpolant of x^2 on the dyadic grid of step 2^-m, so
|f_m(x) - x^2| <= 2^(-2m-2) on [0,1].

Multiplication comes in two variants:

* LITERAL wires xy = ((x+y)^2 - x^2 - y^2)/2 verbatim.  The squaring
  chain is only a square approximation on [0,1], so the bound holds on
  {x, y >= 0, x + y <= 1} and product trees are certified on [0, 1/2]^r.
* RESCALED wires xy = 2((x+y)/2)^2 - x^2/2 - y^2/2, keeping every squared
  argument in [0,1]; the bound holds on all of [0,1]^2 ([0,1]^r for trees)
  at the cost of a factor 2 in the error constant.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .network import (
    ABS,
    BlockDiagonal,
    Network,
    identity_chain,
    parallel,
    path_matrix,
    prepend_layer,
)


class MultVariant(Enum):
    LITERAL = "literal"
    RESCALED = "rescaled"

    @classmethod
    def parse(cls, v):
        if isinstance(v, cls):
            return v
        key = str(v).strip().lower().replace("-", "").replace("_", "")
        if key in ("literal", "unscaled"):
            return cls.LITERAL
        if key == "rescaled":
            return cls.RESCALED
        raise ValueError(f"unknown mult variant {v!r}")


LITERAL = MultVariant.LITERAL
RESCALED = MultVariant.RESCALED


# ---------------------------------------------------------------------------
# closed-form oracles


def tent(x):
    """Unit tent wave 1 - 2|x - 1/2|; total on R, triangle on [0,1]."""
    return 1.0 - 2.0 * np.abs(np.asarray(x, dtype=np.float64) - 0.5)


def tent_iter(s, x):
    """s-fold composition of the tent wave (2^s teeth on [0,1])."""
    if s < 1:
        raise ValueError("s must be a positive integer")
    y = np.asarray(x, dtype=np.float64)
    for _ in range(s):
        y = tent(y)
    return y


def fm_ref(m, x):
    """Closed-form f_m(x) = x - sum_{s=1..m} g_s(x)/4^s.

    On [0,1] this is the piecewise-linear interpolant of x^2 at step 2^-m
    and the exact value computed by build_sq(m)."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    y = np.asarray(x, dtype=np.float64)
    total = y.copy()
    g = y
    for s in range(1, m + 1):
        g = tent(g)
        total -= g / 4.0**s
    return total if total.ndim else float(total)


def sq_error_bound(m):
    return 2.0 ** (-2 * m - 2)


def mult_error_bound(m, variant):
    variant = MultVariant.parse(variant)
    if variant is LITERAL:
        return 3.0 * 2.0 ** (-2 * m - 3)
    return 3.0 * 2.0 ** (-2 * m - 2)


def multr_error_bound(m, r, variant):
    variant = MultVariant.parse(variant)
    if variant is LITERAL:
        return r * r * 4.0**-m
    return 3.0 * r * r * 4.0**-m


def mon_error_bound(m, gamma, variant):
    variant = MultVariant.parse(variant)
    if variant is LITERAL:
        return gamma * gamma * 4.0**-m
    return 3.0 * gamma * gamma * 4.0**-m


def sq_path_row(m):
    """Closed form of |S|...|A2| for the squaring chain."""
    a = sum((2.0 ** (k + 1) - 2.0) / 4.0**k for k in range(1, m + 1))
    return np.array([a, 2.0 - 2.0**-m])


def mult_path_row(m):
    """Closed form of the 1x3 path matrix of the literal Mult network."""
    a = 3.0 * sum((2.0**k - 1.0) / 4.0**k for k in range(1, m + 1))
    b = 2.0 - 2.0**-m
    return np.array([a, b, b])


# ---------------------------------------------------------------------------
# squaring network


def _sq_matrices(m):
    """Chain [A2, B3, A3, B4, ..., A_{m+1}, B_{m+2}, S_{m+2}].

    A_k appends (last coordinate - 1/2) below the identity; B_k replaces the
    last coordinate by 1 - 2*(last), turning |g - 1/2| into the next tent
    iterate; S reads off x - sum g_s/4^s.
    """
    mats = []
    for k in range(2, m + 2):
        a = np.zeros((k + 1, k))
        a[:k, :k] = np.eye(k)
        a[k, 0] = -0.5
        a[k, k - 1] = 1.0
        b = np.zeros((k + 1, k + 1))
        b[:k, :k] = np.eye(k)
        b[k, 0] = 1.0
        b[k, k] = -2.0
        mats.append(a)
        mats.append(b)
    s = np.zeros((1, m + 2))
    s[0, 1] = 1.0
    for j in range(1, m + 1):
        s[0, j + 1] = -(4.0**-j)
    mats.append(s)
    return mats


def build_sq(m):
    """Network mapping (1, x) to f_m(x); equals fm_ref exactly on [0,1]."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    mats = _sq_matrices(m)
    net = Network(
        ABS,
        mats,
        meta={
            "construction": "sq",
            "m": m,
            "input": "(1, x)",
            "claimed_error_bound": sq_error_bound(m),
            "claimed_domain": "x in [0,1]",
        },
    )
    assert net.max_width == m + 2
    return net


# ---------------------------------------------------------------------------
# multiplication network


def _block3(mat):
    out = np.zeros((3 * mat.shape[0], 3 * mat.shape[1]))
    for i in range(3):
        out[
            i * mat.shape[0] : (i + 1) * mat.shape[0],
            i * mat.shape[1] : (i + 1) * mat.shape[1],
        ] = mat
    return out


def _mult_matrices(m, variant):
    lit = variant is LITERAL
    c = np.zeros((6, 3))
    c[0, 0] = 1.0
    c[1, 1] = 1.0
    c[2, 0] = 1.0
    c[3, 2] = 1.0
    c[4, 0] = 1.0
    c[5, 1] = c[5, 2] = 1.0 if lit else 0.5
    out = np.array([[-0.5, -0.5, 0.5 if lit else 2.0]])
    return [c] + [_block3(mat) for mat in _sq_matrices(m)] + [out]


def build_mult(m, variant=RESCALED):
    """Network mapping (1, x, y) to an approximation of xy.

    The first layer forms (1, x, 1, y, 1, z) with z = x+y (literal) or
    z = (x+y)/2 (rescaled); three squaring chains run in parallel and the
    output row combines them into the polarization identity for xy.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    variant = MultVariant.parse(variant)
    net = Network(
        ABS,
        _mult_matrices(m, variant),
        meta={
            "construction": "mult",
            "m": m,
            "variant": variant.value,
            "input": "(1, x, y)",
            "claimed_error_bound": mult_error_bound(m, variant),
            "claimed_domain": "x,y>=0 and x+y<=1"
            if variant is LITERAL
            else "[0,1]^2",
        },
    )
    assert net.max_width <= 3 * m + 6
    assert net.depth <= 2 * m + 3
    return net


# ---------------------------------------------------------------------------
# pairwise product levels and product trees


def _pairing_matrices(m, n_factors, variant):
    """One tree level: (1, x_1..x_j) -> (1, x1x2, x3x4, ..., [carried x_j]).

    Even-indexed factors are multiplied pairwise by parallel Mult networks;
    when j is odd the last factor rides through on identity rows (values in
    [0,1] survive the abs activation unchanged).
    """
    pairs = n_factors // 2
    odd = n_factors % 2
    t = np.zeros((1 + 3 * pairs + odd, n_factors + 1))
    t[0, 0] = 1.0
    r = 1
    for l in range(pairs):
        t[r, 0] = 1.0
        t[r + 1, 1 + 2 * l] = 1.0
        t[r + 2, 2 + 2 * l] = 1.0
        r += 3
    if odd:
        t[r, n_factors] = 1.0
    layers = [t]
    for mat in _mult_matrices(m, variant):
        blocks = [np.eye(1)] + [mat] * pairs
        if odd:
            blocks.append(np.eye(1))
        layers.append(blocks)
    return layers


def _layers_to_network(layers, meta):
    built = [
        lay if isinstance(lay, np.ndarray) else BlockDiagonal(lay) for lay in layers
    ]
    return Network(ABS, built, meta=meta)


def build_pairing_layer(m, k, variant=RESCALED):
    """Network mapping (1, x_1, ..., x_2k) to (1, ~x1x2, ..., ~x_{2k-1}x_{2k})."""
    if m < 1 or k < 1:
        raise ValueError("m and k must be positive integers")
    variant = MultVariant.parse(variant)
    net = _layers_to_network(
        _pairing_matrices(m, 2 * k, variant),
        meta={
            "construction": "pairing",
            "m": m,
            "k": k,
            "variant": variant.value,
        },
    )
    assert len(net.layers) == 2 * m + 4
    assert net.out_dim == k + 1
    return net


def build_multr(m, r, variant=RESCALED):
    """Network mapping (1, x_1, ..., x_r) to an approximation of prod x_i.

    Pairing levels halve the factor count until one product remains; an odd
    factor at any level is carried by identity rows instead of being paired
    with a constant, which keeps every multiplication inside the variant's
    valid domain.  The final row selects the product channel.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    if m < 1:
        raise ValueError("m must be a positive integer")
    variant = MultVariant.parse(variant)
    layers = []
    factors = r
    levels = 0
    while factors > 1:
        layers.extend(_pairing_matrices(m, factors, variant))
        factors = (factors + 1) // 2
        levels += 1
    layers.append(np.array([[0.0, 1.0]]))
    q = math.ceil(math.log2(r))
    assert levels == q
    net = _layers_to_network(
        layers,
        meta={
            "construction": "multr",
            "m": m,
            "r": r,
            "variant": variant.value,
            "input": f"(1, x_1..x_{r})",
            "claimed_error_bound": multr_error_bound(m, r, variant),
            "claimed_domain": f"[0,0.5]^{r}" if variant is LITERAL else f"[0,1]^{r}",
        },
    )
    assert net.depth <= (2 * m + 5) * q + 1
    assert net.max_width <= 6 * r * (m + 2) + 1
    pmax = float(np.max(path_matrix(net)))
    if variant is LITERAL:
        assert pmax <= 144.0 * r**4
    else:
        assert pmax <= 2304.0 * r**5
    return net


# ---------------------------------------------------------------------------
# multi-index enumeration and the all-monomials network


def _compositions(d, total):
    if d == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(d - 1, total - first):
            yield (first,) + rest


def enumerate_multi_indices(d, gamma):
    """All multi-indices k with |k|_1 < gamma in graded lexicographic order."""
    if d < 1 or gamma < 1:
        raise ValueError("d and gamma must be positive integers")
    out = []
    for total in range(gamma):
        out.extend(_compositions(d, total))
    return out


def count_monomials(d, gamma):
    """C_{d,gamma}: how many d-variate monomials have degree < gamma."""
    return math.comb(gamma - 1 + d, d)


def build_mon(m, gamma, d, variant=RESCALED):
    """Network mapping (1, x) to all monomials x^k with |k|_1 < gamma.

    Output channels follow enumerate_multi_indices(d, gamma).  The first
    layer is the 0/1 replication matrix producing (1, x, x_{k})-stacks; one
    parallel product tree per index of degree > 1 does the rest, while the
    constant and degree-1 channels ride through on identity rows.
    """
    if m < 1 or d < 1 or gamma < 2:
        raise ValueError("need m >= 1, d >= 1, gamma >= 2")
    variant = MultVariant.parse(variant)
    indices = enumerate_multi_indices(d, gamma)
    deg1 = [k for k in indices if sum(k) == 1]
    high = [k for k in indices if sum(k) > 1]

    n_rows = 1 + d + sum(sum(k) + 1 for k in high)
    g = np.zeros((n_rows, d + 1))
    g[0, 0] = 1.0
    for j, k in enumerate(deg1):
        g[1 + j, 1 + k.index(1)] = 1.0
    r = 1 + d
    for k in high:
        g[r, 0] = 1.0
        r += 1
        for axis, count in enumerate(k):
            for _ in range(count):
                g[r, 1 + axis] = 1.0
                r += 1

    meta = {
        "construction": "mon",
        "m": m,
        "gamma": gamma,
        "d": d,
        "variant": variant.value,
        "input": f"(1, x_1..x_{d})",
        "n_outputs": len(indices),
        "claimed_error_bound": mon_error_bound(m, gamma, variant),
        "claimed_domain": f"[0,0.5]^{d}" if variant is LITERAL else f"[0,1]^{d}",
    }
    if not high:
        return Network(ABS, [g], meta=meta)

    trees = [build_multr(m, sum(k), variant) for k in high]
    depth_mats = max(len(t.layers) for t in trees)
    stack = parallel([identity_chain(d + 1, depth_mats)] + trees)
    net = prepend_layer(stack, g, meta=meta)

    assert net.depth <= math.ceil(math.log2(gamma)) * (2 * m + 5) + 2
    assert net.max_width <= 6 * gamma * (m + 2) * count_monomials(d, gamma)
    pmax = float(np.max(path_matrix(net)))
    if variant is LITERAL:
        assert pmax <= 144.0 * (gamma + 1) ** 5
    else:
        assert pmax <= 2304.0 * (gamma + 1) ** 6
    return net


def monomial_values(indices, x):
    """Brute-force x^k for each index; x of shape (n, d) -> (n, len(indices))."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((x.shape[0], len(indices)))
    for j, k in enumerate(indices):
        col = np.ones(x.shape[0])
        for axis, count in enumerate(k):
            if count:
                col = col * x[:, axis] ** count
        out[:, j] = col
    return out
