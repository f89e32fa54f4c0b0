import math

import numpy as np
import pytest

from nnapprox import (
    AnalyticTarget,
    RegressionConfig,
    fit,
    generate_data,
    lambda_auto,
    oracle_rhs,
    path_norm_grads,
    target_inv_two_minus_x,
)
from nnapprox.regression import _augment, _risk_grads


def _linear_target():
    return AnalyticTarget("lin", 1, lambda p: 1.0 + 2.0 * p[:, 0])


def _square_target():
    return AnalyticTarget("sq", 1, lambda p: p[:, 0] ** 2)


# ---------------------------------------------------------------------------
# lambda_auto


def test_lambda_auto_example():
    assert lambda_auto(16, (1, 2, 2, 1)) == pytest.approx(16 * math.sqrt(2))


def test_lambda_auto_width_one_hidden_is_zero():
    assert lambda_auto(100, (3, 1, 1, 1)) == 0.0


def test_lambda_auto_linear_in_c():
    base = lambda_auto(64, (2, 4, 1), c=1.0)
    assert lambda_auto(64, (2, 4, 1), c=3.5) == pytest.approx(3.5 * base)


def test_lambda_auto_rejects_tiny_n():
    with pytest.raises(ValueError):
        lambda_auto(1, (1, 2, 1))


# ---------------------------------------------------------------------------
# data generation


def test_generate_data_noise_free():
    cfg = RegressionConfig(n=32, d=1, target=_linear_target(), noise_sd=0.0, seed=5)
    ds = generate_data(cfg)
    assert np.array_equal(ds.Y, cfg.target.evaluate(ds.X))


def test_generate_data_clt_sanity():
    zero = AnalyticTarget("zero", 1, lambda p: np.zeros(len(p)))
    cfg = RegressionConfig(n=10000, d=1, target=zero, noise_sd=1.0, seed=11)
    ds = generate_data(cfg)
    assert abs(ds.Y.mean()) <= 5.0 / math.sqrt(cfg.n)


def test_generate_data_seed_replay():
    cfg = RegressionConfig(n=64, d=2, target=AnalyticTarget("z", 2, lambda p: p.sum(1)), noise_sd=0.3, seed=9)
    a = generate_data(cfg)
    b = generate_data(cfg)
    assert np.array_equal(a.X, b.X) and np.array_equal(a.Y, b.Y)


# ---------------------------------------------------------------------------
# gradients


def test_penalty_gradient_matches_central_differences(rng):
    for _ in range(100):
        arch = [int(w) for w in rng.integers(1, 5, size=int(rng.integers(2, 5)))]
        ws = [rng.uniform(-1, 1, (arch[i + 1], arch[i])) for i in range(len(arch) - 1)]
        # keep entries away from zero where |.| is not differentiable
        ws = [np.where(np.abs(w) < 1e-2, np.sign(w + 1e-30) * 1e-2 + (w == 0) * 1e-2, w) for w in ws]
        pn, grads = path_norm_grads(ws)
        i = int(rng.integers(0, len(ws)))
        a = int(rng.integers(0, ws[i].shape[0]))
        b = int(rng.integers(0, ws[i].shape[1]))
        h = 1e-6
        wp = [w.copy() for w in ws]
        wm = [w.copy() for w in ws]
        wp[i][a, b] += h
        wm[i][a, b] -= h
        fd = (path_norm_grads(wp)[0] - path_norm_grads(wm)[0]) / (2 * h)
        if abs(fd) > 1e-8:
            assert grads[i][a, b] == pytest.approx(fd, rel=1e-4)


def test_risk_gradient_matches_central_differences(rng):
    for _ in range(40):
        arch = (2, 3, 2, 1)
        ws = [rng.uniform(-1, 1, (arch[i + 1], arch[i])) for i in range(len(arch) - 1)]
        x = rng.uniform(0, 1, (16, 1))
        xa = _augment(x)
        y = rng.normal(size=16)
        # skip configurations with pre-activations near the kink
        from nnapprox.regression import _forward

        _, pres, _ = _forward(ws, xa)
        if min(np.abs(p).min() for p in pres[:-1]) < 1e-6:
            continue
        risk, grads = _risk_grads(ws, xa, y)
        i = int(rng.integers(0, len(ws)))
        a = int(rng.integers(0, ws[i].shape[0]))
        b = int(rng.integers(0, ws[i].shape[1]))
        h = 1e-6
        wp = [w.copy() for w in ws]
        wm = [w.copy() for w in ws]
        wp[i][a, b] += h
        wm[i][a, b] -= h
        fd = (_risk_grads(wp, xa, y)[0] - _risk_grads(wm, xa, y)[0]) / (2 * h)
        if abs(fd) > 1e-7:
            assert grads[i][a, b] == pytest.approx(fd, rel=1e-4)


# ---------------------------------------------------------------------------
# fitting


def test_fit_l0_recovers_least_squares():
    cfg = RegressionConfig(
        n=64, d=1, target=_linear_target(), noise_sd=0.0, widths=(), lam=0.0,
        max_epochs=3000, seed=1,
    )
    net, rep = fit(cfg, generate_data(cfg))
    assert rep.risk <= 1e-6
    assert rep.objective == pytest.approx(rep.risk + rep.penalty)


def test_fit_huge_lambda_crushes_path_norm():
    cfg = RegressionConfig(
        n=64, d=1, target=_linear_target(), noise_sd=0.0, widths=(4,), lam=1e6,
        max_epochs=1500, seed=1,
    )
    _, rep = fit(cfg, generate_data(cfg))
    assert rep.path_norm <= 1e-3


def test_fit_beats_constant_predictor_on_square():
    # lambda "auto" with the default scale c=1 is ~97 at n=512, which crushes
    # the fit to a near-zero predictor; the exposed scale constant is used
    # (see decisions ledger), exercising the same auto formula
    cfg = RegressionConfig(
        n=512, d=1, target=_square_target(), noise_sd=0.0, widths=(8, 8, 8),
        lam="auto", lambda_scale=1e-4, max_epochs=1500, seed=2,
    )
    ds = generate_data(cfg)
    net, rep = fit(cfg, ds)
    best_const_mse = float(np.var(ds.Y))
    assert rep.holdout_mse < best_const_mse


def test_fit_report_objective_identity(rng):
    cfg = RegressionConfig(
        n=32, d=1, target=_square_target(), noise_sd=0.1, widths=(4,), lam=0.01,
        max_epochs=200, seed=3,
    )
    _, rep = fit(cfg, generate_data(cfg))
    assert rep.objective == pytest.approx(rep.risk + rep.penalty, rel=1e-12)


def test_fit_lambda_path_monotone():
    pns = []
    for lam in (0.0, 0.003, 0.03, 0.3, 3.0):
        cfg = RegressionConfig(
            n=64, d=1, target=_square_target(), noise_sd=0.0, widths=(4, 4),
            lam=lam, max_epochs=1500, seed=3,
        )
        _, rep = fit(cfg, generate_data(cfg))
        pns.append(rep.path_norm)
    for a, b in zip(pns, pns[1:]):
        assert b <= a + 1e-12


# ---------------------------------------------------------------------------
# oracle RHS


def test_oracle_rhs_zero_for_representable_target():
    from nnapprox import Network, ABS

    f0 = _linear_target()
    cand = Network(ABS, [np.array([[1.0, 2.0]])])  # exactly f0 on (1, x)
    cfg = RegressionConfig(n=128, d=1, target=f0, lam=0.0, oracle_c=0.0)
    assert oracle_rhs(cfg, cand) == pytest.approx(0.0, abs=1e-24)


def test_oracle_rhs_c_doubling_adds_exact_term():
    f0 = _square_target()
    cfg = RegressionConfig(n=128, d=1, target=f0, lam=0.1, widths=(4, 4))
    from nnapprox import Network, ABS

    rng = np.random.default_rng(0)
    cand = Network(ABS, [rng.uniform(-1, 1, (4, 2)), rng.uniform(-1, 1, (4, 4)), rng.uniform(-1, 1, (1, 4))])
    r1 = oracle_rhs(cfg, cand, c_const=1.0)
    r2 = oracle_rhs(cfg, cand, c_const=2.0)
    hidden_sum = 8
    assert r2 - r1 == pytest.approx(hidden_sum * math.log2(128) ** 3 / 128)


def test_oracle_rhs_finite_for_plugin(rng):
    from nnapprox import build_cheb_net

    f0 = target_inv_two_minus_x()
    net, _ = build_cheb_net(f0, 1.0 / 128, "rescaled", measure_grid=2)
    cfg = RegressionConfig(n=128, d=1, target=f0, widths=tuple(net.widths[1:-1]), lam="auto", seed=0)
    val = oracle_rhs(cfg, net)
    assert np.isfinite(val) and val > 0
