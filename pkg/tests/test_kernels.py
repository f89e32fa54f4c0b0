import numpy as np
import pytest

from nnapprox import ABS, RELU, IDENTITY, build_mon, build_multr, evaluate
from nnapprox import _kernels
from conftest import random_dense_net

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@needs_numba
def test_backends_agree_on_dense_nets(rng):
    for act in (ABS, RELU, IDENTITY):
        for _ in range(10):
            net = random_dense_net(rng, act)
            x = rng.normal(size=(33, net.in_dim))
            a = evaluate(net, x, backend="numba")
            b = evaluate(net, x, backend="numpy")
            assert np.allclose(a, b, rtol=1e-13, atol=1e-13)


@needs_numba
def test_backends_agree_on_block_diagonal_nets(rng):
    net = build_multr(3, 5, "rescaled")
    x = np.column_stack([np.ones(200), rng.uniform(0, 1, (200, 5))])
    a = evaluate(net, x, backend="numba")
    b = evaluate(net, x, backend="numpy")
    assert np.allclose(a, b, rtol=1e-13, atol=1e-14)

    net = build_mon(4, 3, 2, "literal")
    x = np.column_stack([np.ones(100), rng.uniform(0, 0.5, (100, 2))])
    assert np.allclose(
        evaluate(net, x, backend="numba"), evaluate(net, x, backend="numpy")
    )


@needs_numba
def test_greedy_cover_backends_agree(rng):
    v = rng.normal(size=(500, 16))
    a = _kernels.greedy_cover(v, 1.0, backend="numba")
    b = _kernels.greedy_cover(v, 1.0, backend="numpy")
    assert np.array_equal(a, b)


def test_greedy_cover_strict_inequality():
    v = np.array([[0.0, 0.0], [1.0, 1.0]])
    # distance is exactly 1, not < 1, so both rows become centers
    got = _kernels.greedy_cover(v, 1.0, backend="numpy")
    assert len(got) == 2
    got = _kernels.greedy_cover(v, 1.0000001, backend="numpy")
    assert len(got) == 1


def test_greedy_cover_monotone_in_eps(rng):
    v = rng.normal(size=(300, 8))
    sizes = [len(_kernels.greedy_cover(v, e)) for e in (0.1, 0.3, 1.0, 3.0)]
    assert sizes == sorted(sizes, reverse=True)


def test_backend_name():
    assert _kernels.backend_name() in ("numba", "numpy")
