"""Sign-flip-invariant regression with a small ReLU network.

Trains a plain-SGD multilayer perceptron on Gaussian inputs labeled by
an invariant target, then averages predictions at evaluation time over
fixed random subsets of the sign-flip group acting on the input, and
records test loss versus subset size and versus training epoch.
Training never sees the subsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import TrainingFailureError, UsageError

INIT_SCALE = 1.0  # weights/biases ~ U(-c/sqrt(fan_in), +c/sqrt(fan_in)) with c = 1


@dataclass
class MlpConfig:
    input_dim: int = 20
    n_train: int = 50_000
    n_test: int = 50_000
    widths: tuple[int, int] = (128, 64)
    learning_rate: float = 1e-3
    batch_size: int = 256
    epochs: int = 500
    subset_exponents: tuple[int, ...] = tuple(range(11))
    curve_subset_exponent: int = 5  # |S| = 32 for the per-epoch curves
    epoch_eval_size: int = 2000  # subsample used for per-epoch curves
    seed: int = 0

    def __post_init__(self):
        if min(self.widths) < 1:
            raise UsageError("hidden widths must be >= 1")
        if self.batch_size > self.n_train:
            raise UsageError("batch size cannot exceed the training set")
        if max(self.subset_exponents, default=0) > self.input_dim:
            raise UsageError("subset exponent exceeds the group size exponent")


class SignAveragedMlp:
    """d -> h1 -> h2 -> 1 rectifier network trained with plain SGD."""

    def __init__(self, input_dim: int, widths: tuple[int, int], rng: np.random.Generator):
        dims = [input_dim, widths[0], widths[1], 1]
        self.weights = []
        self.biases = []
        for fan_in, fan_out in zip(dims[:-1], dims[1:]):
            bound = INIT_SCALE / np.sqrt(fan_in)
            self.weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            self.biases.append(rng.uniform(-bound, bound, size=fan_out))

    def forward(self, x: np.ndarray) -> np.ndarray:
        h = x
        for w, b in zip(self.weights[:-1], self.biases[:-1]):
            h = np.maximum(h @ w + b, 0.0)
        return (h @ self.weights[-1] + self.biases[-1]).ravel()

    def sgd_step(self, x: np.ndarray, y: np.ndarray, lr: float) -> float:
        h1_pre = x @ self.weights[0] + self.biases[0]
        h1 = np.maximum(h1_pre, 0.0)
        h2_pre = h1 @ self.weights[1] + self.biases[1]
        h2 = np.maximum(h2_pre, 0.0)
        pred = (h2 @ self.weights[2] + self.biases[2]).ravel()
        err = pred - y
        with np.errstate(over="ignore", invalid="ignore"):  # divergence -> inf, handled upstream
            loss = float((err**2).mean())
        batch = x.shape[0]
        grad_out = (2.0 / batch) * err[:, None]
        gw2 = h2.T @ grad_out
        gb2 = grad_out.sum(axis=0)
        gh2 = (grad_out @ self.weights[2].T) * (h2_pre > 0.0)
        gw1 = h1.T @ gh2
        gb1 = gh2.sum(axis=0)
        gh1 = (gh2 @ self.weights[1].T) * (h1_pre > 0.0)
        gw0 = x.T @ gh1
        gb0 = gh1.sum(axis=0)
        for w, g in zip(self.weights, (gw0, gw1, gw2)):
            w -= lr * g
        for b, g in zip(self.biases, (gb0, gb1, gb2)):
            b -= lr * g
        return loss


def averaged_predictions(
    model: SignAveragedMlp, x: np.ndarray, signs: np.ndarray, chunk: int = 32
) -> np.ndarray:
    """Mean prediction over sign patterns applied to the inputs."""
    total = np.zeros(x.shape[0])
    for start in range(0, signs.shape[0], chunk):
        block = signs[start : start + chunk]
        flipped = x[None, :, :] * block[:, None, :]
        flat = flipped.reshape(-1, x.shape[1])
        total += model.forward(flat).reshape(block.shape[0], x.shape[0]).sum(axis=0)
    return total / signs.shape[0]


def draw_sign_subsets(
    input_dim: int, exponents: tuple[int, ...], rng: np.random.Generator
) -> dict[int, np.ndarray]:
    """Fixed random sign-pattern subsets of sizes 2**k, one draw per k.

    k = 0 is pinned to the identity pattern (no flips); larger subsets
    are drawn without replacement from all 2**d patterns.
    """
    out: dict[int, np.ndarray] = {}
    n_patterns = 1 << input_dim
    shifts = input_dim - 1 - np.arange(input_dim)
    for k in sorted(set(exponents)):
        size = 1 << k
        if k == 0:
            out[k] = np.ones((1, input_dim))
            continue
        codes = rng.choice(n_patterns, size=size, replace=False)
        bits = (codes[:, None] >> shifts[None, :]) & 1
        out[k] = 1.0 - 2.0 * bits
    return out


@dataclass
class MlpResult:
    config: MlpConfig
    loss_by_subset: dict[int, float]  # subset size -> final test loss
    epoch_losses_plain: list[float]
    epoch_losses_averaged: list[float]
    final_train_loss: float
    subsets: dict[int, np.ndarray] = field(repr=False, default_factory=dict)


def mlp_experiment(cfg: MlpConfig) -> MlpResult:
    """Train once, then evaluate subset-averaged predictions.

    The invariant target is <w, |x|> with Gaussian w and inputs; the
    network and data derive from disjoint seeded streams, and the
    subsets are fixed before training starts.
    """
    root = np.random.SeedSequence(cfg.seed)
    data_rng, init_rng, shuffle_rng, subset_rng = (
        np.random.default_rng(s) for s in root.spawn(4)
    )
    d = cfg.input_dim
    w_star = data_rng.normal(size=d)
    x_train = data_rng.normal(size=(cfg.n_train, d))
    y_train = np.abs(x_train) @ w_star
    x_test = data_rng.normal(size=(cfg.n_test, d))
    y_test = np.abs(x_test) @ w_star

    subsets = draw_sign_subsets(d, tuple(cfg.subset_exponents) + (cfg.curve_subset_exponent,), subset_rng)
    model = SignAveragedMlp(d, cfg.widths, init_rng)

    eval_count = min(cfg.epoch_eval_size, cfg.n_test)
    x_eval, y_eval = x_test[:eval_count], y_test[:eval_count]
    curve_signs = subsets[cfg.curve_subset_exponent]
    epoch_plain: list[float] = []
    epoch_avg: list[float] = []
    last_loss = float("nan")
    for epoch in range(cfg.epochs):
        order = shuffle_rng.permutation(cfg.n_train)
        for start in range(0, cfg.n_train, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            last_loss = model.sgd_step(x_train[batch], y_train[batch], cfg.learning_rate)
            if not np.isfinite(last_loss):
                raise TrainingFailureError(f"training loss diverged at epoch {epoch}", epoch)
        plain = float(((model.forward(x_eval) - y_eval) ** 2).mean())
        avg = float(((averaged_predictions(model, x_eval, curve_signs) - y_eval) ** 2).mean())
        if not (np.isfinite(plain) and np.isfinite(avg)):
            raise TrainingFailureError(f"evaluation loss diverged at epoch {epoch}", epoch)
        epoch_plain.append(plain)
        epoch_avg.append(avg)

    loss_by_subset: dict[int, float] = {}
    for k in sorted(set(cfg.subset_exponents)):
        preds = averaged_predictions(model, x_test, subsets[k])
        loss_by_subset[1 << k] = float(((preds - y_test) ** 2).mean())
    return MlpResult(
        config=cfg,
        loss_by_subset=loss_by_subset,
        epoch_losses_plain=epoch_plain,
        epoch_losses_averaged=epoch_avg,
        final_train_loss=last_loss,
        subsets=subsets,
    )


def subset_csv(result: MlpResult) -> str:
    lines = ["subset_size,test_loss"]
    for size in sorted(result.loss_by_subset):
        lines.append(f"{size},{result.loss_by_subset[size]:.17g}")
    return "\n".join(lines) + "\n"


def epoch_csv(result: MlpResult) -> str:
    lines = ["epoch,test_loss_plain,test_loss_averaged"]
    for i, (p, a) in enumerate(zip(result.epoch_losses_plain, result.epoch_losses_averaged)):
        lines.append(f"{i},{p:.17g},{a:.17g}")
    return "\n".join(lines) + "\n"
