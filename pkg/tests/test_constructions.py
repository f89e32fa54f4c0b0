import math

import numpy as np
import pytest

from nnapprox import (
    LITERAL,
    RESCALED,
    MultVariant,
    build_mon,
    build_mult,
    build_multr,
    build_pairing_layer,
    build_sq,
    count_monomials,
    enumerate_multi_indices,
    evaluate,
    fm_ref,
    mon_error_bound,
    mult_error_bound,
    mult_path_row,
    multr_error_bound,
    path_matrix,
    path_norm,
    sq_error_bound,
    sq_path_row,
    tent,
    tent_iter,
)
from nnapprox.constructions import monomial_values


def _aug(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    return np.column_stack([np.ones(len(x)), x])


# ---------------------------------------------------------------------------
# oracles


def test_tent_endpoints():
    assert tent(0.0) == 0.0
    assert tent(0.5) == 1.0
    assert tent(1.0) == 0.0


def test_tent_iter_counts_teeth():
    x = np.linspace(0, 1, 4097)
    for s in (1, 2, 3):
        v = tent_iter(s, x)
        peaks = np.sum((v[1:-1] > v[:-2]) & (v[1:-1] > v[2:]))
        assert peaks == 2 ** (s - 1)


def test_fm_ref_at_half():
    assert fm_ref(1, 0.5) == 0.25


def test_fm_ref_square_error_bound():
    x = np.linspace(0, 1, 10000)
    for m in range(1, 11):
        assert np.abs(fm_ref(m, x) - x * x).max() <= sq_error_bound(m)


def test_variant_parsing():
    assert MultVariant.parse("literal") is LITERAL
    assert MultVariant.parse("unscaled") is LITERAL
    assert MultVariant.parse("rescaled") is RESCALED
    with pytest.raises(ValueError):
        MultVariant.parse("bogus")


# ---------------------------------------------------------------------------
# squaring network


def test_sq_rejects_bad_m():
    with pytest.raises(ValueError):
        build_sq(0)


def test_sq_values_at_ends():
    assert evaluate(build_sq(1), [1.0, 0.0])[0] == 0.0
    assert evaluate(build_sq(3), [1.0, 1.0])[0] == 1.0


def test_sq_path_matrix_closed_form():
    for m in (1, 2, 3, 7):
        assert np.array_equal(path_matrix(build_sq(m))[0], sq_path_row(m))
    assert np.array_equal(sq_path_row(2), [0.875, 1.75])


def test_sq_matches_fm_ref_on_grid():
    x = np.linspace(0, 1, 10000)
    inp = _aug(x)
    for m in range(1, 11):
        net = build_sq(m)
        v = evaluate(net, inp)[:, 0]
        assert np.abs(v - fm_ref(m, x)).max() <= 1e-11
        assert net.max_width == m + 2
        assert len(net.layers) == 2 * m + 1


# ---------------------------------------------------------------------------
# multiplication


def test_mult_path_matrix_closed_form_exact():
    for m in range(1, 11):
        got = path_matrix(build_mult(m, LITERAL))[0]
        want = mult_path_row(m)
        assert np.abs(got - want).max() <= 1e-13 * np.abs(want).max()
    assert np.allclose(mult_path_row(2), [1.3125, 1.75, 1.75])


def test_mult_path_norm_m1():
    assert path_norm(build_mult(1, LITERAL)) == pytest.approx(3.75)


def test_mult_zero_input():
    # the +-f_m terms cancel exactly in the literal wiring; the rescaled one
    # leaves 2 f_m(y/2) - f_m(y)/2, zero only up to the interpolation error
    ys = np.linspace(0, 1, 11)
    inp = np.column_stack([np.ones_like(ys), np.zeros_like(ys), ys])
    assert np.abs(evaluate(build_mult(3, LITERAL), inp)).max() == 0.0
    v = evaluate(build_mult(3, RESCALED), inp)
    assert np.abs(v).max() <= mult_error_bound(3, RESCALED)


def test_mult_literal_grid_bound():
    net = build_mult(4, LITERAL)
    n = 100
    xs = np.arange(n + 1) / n
    gx, gy = np.meshgrid(xs, xs, indexing="ij")
    mask = gx + gy <= 1.0
    px, py = gx[mask], gy[mask]
    v = evaluate(net, np.column_stack([np.ones_like(px), px, py]))[:, 0]
    assert np.abs(v - px * py).max() <= 3 * 2.0**-11


def test_mult_rescaled_corner():
    v = evaluate(build_mult(3, RESCALED), [1.0, 1.0, 1.0])[0]
    assert abs(v - 1.0) <= 3 * 2.0**-8


def test_mult_shapes():
    for m in (1, 4):
        net = build_mult(m, RESCALED)
        assert net.in_dim == 3 and net.out_dim == 1
        assert net.max_width <= 3 * m + 6
        assert net.depth <= 2 * m + 3


def test_mult_error_propagation_inequality(rng=np.random.default_rng(7)):
    # |Mult(1,x,y) - t z| <= eps_m + |x - t| + |y - z| on the valid domain
    for variant in (LITERAL, RESCALED):
        m = 4
        net = build_mult(m, variant)
        eps_m = mult_error_bound(m, variant)
        if variant is LITERAL:
            x = rng.uniform(0, 0.5, 10000)
            y = rng.uniform(0, 0.5, 10000)
            t = rng.uniform(0, 0.5, 10000)
            z = rng.uniform(0, 0.5, 10000)
        else:
            x, y, t, z = rng.uniform(0, 1, (4, 10000))
        v = evaluate(net, np.column_stack([np.ones_like(x), x, y]))[:, 0]
        lhs = np.abs(v - t * z)
        rhs = eps_m + np.abs(x - t) + np.abs(y - z)
        assert np.all(lhs <= rhs + 1e-12)


# ---------------------------------------------------------------------------
# pairing layers and product trees


def test_pairing_k1_matches_mult(rng=np.random.default_rng(1)):
    pair = build_pairing_layer(3, 1, RESCALED)
    mult = build_mult(3, RESCALED)
    xy = rng.uniform(0, 1, (200, 2))
    inp = _aug(xy)
    got = evaluate(pair, inp)
    want = evaluate(mult, inp)[:, 0]
    assert np.abs(got[:, 0] - 1.0).max() <= 1e-12
    assert np.abs(got[:, 1] - want).max() <= 1e-12


def test_pairing_path_matrix_banded():
    m = 3
    net = build_pairing_layer(m, 2, LITERAL)
    a = 3 * sum((2.0**k - 1) / 4.0**k for k in range(1, m + 1))
    b = 2 - 2.0**-m
    expect = np.array(
        [[1, 0, 0, 0, 0], [a, b, b, 0, 0], [a, 0, 0, b, b]], dtype=float
    )
    assert np.array_equal(path_matrix(net), expect)


def test_pairing_values_close_to_products():
    net = build_pairing_layer(3, 2, RESCALED)
    out = evaluate(net, np.array([1.0, 0.2, 0.3, 0.4, 0.5]))
    bound = mult_error_bound(3, RESCALED)
    assert out[0] == 1.0
    assert abs(out[1] - 0.06) <= bound
    assert abs(out[2] - 0.20) <= bound


def test_multr_rejects_bad_params():
    with pytest.raises(ValueError):
        build_multr(3, 1)
    with pytest.raises(ValueError):
        build_multr(0, 4)


def test_multr_grid_bound_rescaled():
    net = build_multr(5, 4, RESCALED)
    xs = np.linspace(0, 1, 11)
    grid = np.stack(np.meshgrid(*[xs] * 4, indexing="ij"), axis=-1).reshape(-1, 4)
    v = evaluate(net, _aug(grid))[:, 0]
    assert np.abs(v - np.prod(grid, axis=1)).max() <= 3 * 16 * 4.0**-5


def test_multr_literal_small_domain():
    net = build_multr(6, 3, LITERAL)
    rng = np.random.default_rng(2)
    x = rng.uniform(0, 0.5, (20000, 3))
    v = evaluate(net, _aug(x))[:, 0]
    assert np.abs(v - np.prod(x, axis=1)).max() <= 9 * 4.0**-6


def test_multr_zero_factor():
    net = build_multr(5, 4, RESCALED)
    rng = np.random.default_rng(3)
    x = rng.uniform(0, 1, (2000, 4))
    x[:, 2] = 0.0
    v = evaluate(net, _aug(x))[:, 0]
    assert np.abs(v).max() <= multr_error_bound(5, 4, RESCALED)


def test_multr_structure_bounds():
    for r in (2, 3, 5, 8):
        for m in (1, 4):
            net = build_multr(m, r, RESCALED)
            q = math.ceil(math.log2(r))
            assert net.depth <= (2 * m + 5) * q + 1
            assert net.max_width <= 6 * r * (m + 2) + 1
            assert net.in_dim == r + 1 and net.out_dim == 1


def test_multr_path_infinity_bounds():
    for r in (2, 3, 8):
        m = 5
        lit = np.max(path_matrix(build_multr(m, r, LITERAL)))
        res = np.max(path_matrix(build_multr(m, r, RESCALED)))
        assert lit <= 144 * r**4
        assert res <= 2304 * r**5


# ---------------------------------------------------------------------------
# multi-indices and monomial networks


def test_enumerate_graded_lex_d2():
    assert enumerate_multi_indices(2, 3) == [
        (0, 0),
        (0, 1),
        (1, 0),
        (0, 2),
        (1, 1),
        (2, 0),
    ]


def test_enumerate_d1():
    assert enumerate_multi_indices(1, 5) == [(k,) for k in range(5)]


def test_count_monomials():
    for d in range(1, 5):
        for gamma in range(1, 11):
            count = count_monomials(d, gamma)
            assert count == len(enumerate_multi_indices(d, gamma))
            assert count < (gamma + 1) ** d


def test_mon_gamma2_exact():
    net = build_mon(3, 2, 1, RESCALED)
    out = evaluate(net, np.array([[1.0, 0.37], [1.0, 0.9]]))
    assert np.array_equal(out, [[1.0, 0.37], [1.0, 0.9]])


def test_mon_rejects_bad_params():
    with pytest.raises(ValueError):
        build_mon(0, 3, 2)
    with pytest.raises(ValueError):
        build_mon(3, 1, 2)


def test_mon_channel_order_matches_enumeration():
    net = build_mon(5, 4, 2, RESCALED)
    idx = enumerate_multi_indices(2, 4)
    rng = np.random.default_rng(4)
    pts = rng.uniform(0, 1, (300, 2))
    got = evaluate(net, _aug(pts))
    want = monomial_values(idx, pts)
    bound = mon_error_bound(5, 4, RESCALED)
    # each channel must match its own monomial far better than any other
    assert got.shape == want.shape
    assert np.abs(got - want).max() <= bound
    for j, k in enumerate(idx):
        others = [o for o in range(len(idx)) if o != j]
        own = np.abs(got[:, j] - want[:, j]).max()
        cross = min(np.abs(got[:, j] - want[:, o]).max() for o in others)
        assert own < cross


def test_mon_error_bounds_both_variants():
    for variant, hi in ((LITERAL, 0.5), (RESCALED, 1.0)):
        net = build_mon(6, 3, 2, variant)
        xs = np.linspace(0, hi, 51)
        gx, gy = np.meshgrid(xs, xs, indexing="ij")
        pts = np.column_stack([gx.ravel(), gy.ravel()])
        got = evaluate(net, _aug(pts))
        want = monomial_values(enumerate_multi_indices(2, 3), pts)
        assert np.abs(got - want).max() <= mon_error_bound(6, 3, variant)


def test_mon_structure_and_path_bounds():
    net = build_mon(6, 3, 2, LITERAL)
    assert net.depth <= math.ceil(math.log2(3)) * (2 * 6 + 5) + 2
    assert net.max_width <= 6 * 3 * (6 + 2) * count_monomials(2, 3)
    assert np.max(path_matrix(net)) <= 144 * 4**5


def test_builder_metadata():
    net = build_multr(3, 4, RESCALED)
    assert net.meta["construction"] == "multr"
    assert net.meta["variant"] == "rescaled"
    assert net.meta["claimed_error_bound"] == multr_error_bound(3, 4, RESCALED)
    net = build_mon(3, 3, 1, LITERAL)
    assert net.meta["claimed_domain"] == "[0,0.5]^1"
