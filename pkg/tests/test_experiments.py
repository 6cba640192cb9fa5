import numpy as np
import pytest

from groupavg import UsageError
from groupavg.errors import TrainingFailureError
from groupavg.experiments.mlp import (
    MlpConfig,
    SignAveragedMlp,
    averaged_predictions,
    draw_sign_subsets,
    epoch_csv,
    mlp_experiment,
    subset_csv,
)
from groupavg.experiments.regression import (
    RegressionConfig,
    regression_csv,
    regression_risk,
)
from groupavg.experiments.rotation import (
    RotationDemoConfig,
    averaged_field,
    grid_csv,
    rotation_averaging_demo,
    scalar_field,
    summary_json,
)


# -- rotation demo ---------------------------------------------------------


def test_rotation_full_subset_distance_zero():
    cfg = RotationDemoConfig(n_rotations=40, grid=50, subset_sizes=(1, 5, 40), seed=11)
    res = rotation_averaging_demo(cfg)
    assert res.rel_l2_to_full[40] == 0.0
    assert res.rel_l2_to_full[5] > 0.0


def test_rotation_single_subset_is_rotated_field():
    cfg = RotationDemoConfig(n_rotations=10, grid=30, subset_sizes=(1,), seed=3)
    res = rotation_averaging_demo(cfg)
    theta = res.subset_angles[1][0]
    gx, gy = np.meshgrid(res.xs, res.ys)
    c, s = np.cos(theta), np.sin(theta)
    expect = scalar_field(c * gx + s * gy, -s * gx + c * gy)
    assert np.abs(res.grids[1] - expect).max() == 0.0


def test_rotation_full_average_is_invariant():
    n, grid = 24, 31
    xs = np.linspace(-1, 1, grid)
    ys = np.linspace(-1, 1, grid)
    angles = 2 * np.pi * np.arange(n) / n
    base = averaged_field(xs, ys, angles)
    # querying at group-rotated points only permutes the summed angles
    for k in (1, 7):
        theta = 2 * np.pi * k / n
        c, s = np.cos(theta), np.sin(theta)
        gx, gy = np.meshgrid(xs, ys)
        rx, ry = c * gx + s * gy, -s * gx + c * gy
        rotated = np.zeros_like(base)
        for a in angles:
            ca, sa = np.cos(a), np.sin(a)
            rotated += scalar_field(ca * rx + sa * ry, -sa * rx + ca * ry)
        rotated /= n
        assert np.abs(rotated - base).max() < 1e-12


def test_rotation_qualitative_subset_ordering():
    wins = 0
    for seed in range(30):
        cfg = RotationDemoConfig(n_rotations=100, grid=40, subset_sizes=(1, 5), seed=seed)
        res = rotation_averaging_demo(cfg)
        wins += res.rel_l2_to_full[5] < res.rel_l2_to_full[1]
    assert wins >= 27


def test_rotation_csv_and_summary():
    cfg = RotationDemoConfig(n_rotations=8, grid=5, subset_sizes=(1, 8), seed=0)
    res = rotation_averaging_demo(cfg)
    csv = grid_csv(res.xs, res.ys, res.grids[8])
    lines = csv.strip().splitlines()
    assert lines[0] == "x,y,value" and len(lines) == 1 + 25
    summary = summary_json(res)
    assert summary["rel_l2_to_full"]["8"] == 0.0
    with pytest.raises(UsageError):
        RotationDemoConfig(subset_sizes=(200,))


# -- regression ------------------------------------------------------------


def test_regression_noiseless_interpolates():
    cfg = RegressionConfig(group_spec="signflip:2", sigma=0.0, n_samples=64, trials=20, seed=1)
    res = regression_risk(cfg)
    for name in ("erm", "exact", "weak"):
        assert res.risks[name] <= 1e-18


def test_regression_ratio_matches_dimension_count():
    cfg = RegressionConfig(group_spec="signflip:2", sigma=1.0, n_samples=400, trials=800, seed=0)
    res = regression_risk(cfg)
    assert res.m == 4 and res.m_triv == 1
    ratio = res.risks["erm"] / res.risks["exact"]
    assert 3.0 <= ratio <= 5.0
    assert res.risks["weak"] == res.risks["exact"]  # uniform scheme, same matrix


def test_regression_exact_never_worse():
    for spec in ("signflip:2", "cyclic:6"):
        cfg = RegressionConfig(group_spec=spec, sigma=0.5, n_samples=200, trials=1000, seed=3)
        res = regression_risk(cfg)
        assert res.risks["exact"] <= res.risks["erm"] + 2 * res.stderrs["erm"]


def test_regression_weak_scheme_between():
    cfg = RegressionConfig(group_spec="signflip:3", sigma=1.0, n_samples=800, trials=300, eps=0.05, seed=5)
    res = regression_risk(cfg)
    assert res.scheme_eps <= 0.05
    assert res.risks["weak"] <= res.risks["erm"]


def test_regression_usage_errors():
    with pytest.raises(UsageError):
        regression_risk(RegressionConfig(group_spec="cyclic:12", n_samples=6, trials=5))


def test_regression_csv_layout():
    cfg = RegressionConfig(group_spec="signflip:2", sigma=0.0, n_samples=32, trials=3, seed=1)
    csv = regression_csv(regression_risk(cfg))
    lines = csv.strip().splitlines()
    assert lines[0] == "estimator,risk,stderr,m,m_triv,n,sigma,eps"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["erm", "exact", "weak"]


# -- mlp ---------------------------------------------------------------------


def _tiny_cfg(**kw):
    base = dict(
        input_dim=6,
        n_train=512,
        n_test=256,
        widths=(16, 8),
        epochs=3,
        batch_size=64,
        subset_exponents=(0, 2),
        curve_subset_exponent=2,
        epoch_eval_size=128,
        seed=0,
    )
    base.update(kw)
    return MlpConfig(**base)


def test_mlp_identity_subset_equals_plain():
    cfg = _tiny_cfg()
    res = mlp_experiment(cfg)
    model_losses = res.loss_by_subset
    assert set(model_losses) == {1, 4}
    # |S| = 1 pinned to the identity pattern: equals unaveraged evaluation
    subsets = draw_sign_subsets(6, (0,), np.random.default_rng(0))
    assert np.array_equal(subsets[0], np.ones((1, 6)))


def test_mlp_full_group_averaging_is_invariant():
    rng = np.random.default_rng(7)
    model = SignAveragedMlp(4, (12, 6), rng)
    signs = draw_sign_subsets(4, (4,), np.random.default_rng(1))[4]
    assert signs.shape == (16, 4)
    x = rng.normal(size=(20, 4))
    base = averaged_predictions(model, x, signs)
    for row in ((1, -1, 1, -1), (-1, -1, -1, -1)):
        flipped = averaged_predictions(model, x * np.array(row), signs)
        assert np.abs(flipped - base).max() < 1e-10


def test_mlp_averaging_invariant_predictor_unchanged():
    rng = np.random.default_rng(3)
    model = SignAveragedMlp(5, (8, 4), rng)
    x = np.abs(rng.normal(size=(10, 5)))  # evaluate on the positive orthant

    class AbsWrapped:
        def forward(self, z):
            return model.forward(np.abs(z))

    signs = draw_sign_subsets(5, (3,), np.random.default_rng(5))[3]
    averaged = averaged_predictions(AbsWrapped(), x, signs)
    assert np.abs(averaged - model.forward(x)).max() < 1e-12


def test_mlp_training_reduces_loss_and_is_deterministic():
    cfg = _tiny_cfg(epochs=6)
    res1 = mlp_experiment(cfg)
    res2 = mlp_experiment(cfg)
    assert res1.loss_by_subset == res2.loss_by_subset
    assert res1.epoch_losses_plain == res2.epoch_losses_plain
    assert res1.epoch_losses_plain[-1] < res1.epoch_losses_plain[0]


def test_mlp_divergence_raises():
    cfg = _tiny_cfg(learning_rate=1e6, epochs=4)
    with pytest.raises(TrainingFailureError):
        mlp_experiment(cfg)


def test_mlp_csv_layout():
    res = mlp_experiment(_tiny_cfg())
    s_lines = subset_csv(res).strip().splitlines()
    assert s_lines[0] == "subset_size,test_loss"
    e_lines = epoch_csv(res).strip().splitlines()
    assert e_lines[0] == "epoch,test_loss_plain,test_loss_averaged"
    assert len(e_lines) == 1 + res.config.epochs


def test_mlp_config_validation():
    with pytest.raises(UsageError):
        _tiny_cfg(batch_size=10_000)
    with pytest.raises(UsageError):
        _tiny_cfg(subset_exponents=(9,))
