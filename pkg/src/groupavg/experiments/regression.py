"""Monte Carlo risk of plain vs symmetrized least squares.

The domain is the group itself with the uniform measure and the
orthonormal indicator basis, the group acting on functions by left
translation.  The target is an invariant function of unit norm; the
plain least-squares coefficients are post-multiplied either by the full
group average (exact symmetrization) or by the averaging matrix of a
scheme certified at a requested shrink factor (weak symmetrization).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import SearchFailureError, UsageError
from ..groups import Group, parse_group_spec
from ..reps import Representation, regular_rep, invariant_dimension
from ..schemes import (
    AveragingScheme,
    apply_scheme,
    certify_weak,
    random_scheme,
    required_sample_count,
    uniform_scheme,
)

_MAX_REDRAWS = 64
_MAX_SCHEME_TRIES = 256


@dataclass
class RegressionConfig:
    group_spec: str = "signflip:2"
    sigma: float = 1.0
    n_samples: int = 400
    trials: int = 2000
    eps: float = 0.0  # 0 -> uniform scheme for the weak estimator
    seed: int = 0
    invariant_perturbation: float = 0.0

    def __post_init__(self):
        if self.trials < 1:
            raise UsageError("need at least one trial")
        if self.sigma < 0:
            raise UsageError("noise level must be nonnegative")


@dataclass
class RegressionResult:
    config: RegressionConfig
    m: int
    m_triv: int
    risks: dict[str, float]
    stderrs: dict[str, float]
    scheme_eps: float
    scheme_size: int

    def rows(self) -> list[dict]:
        out = []
        for name in ("erm", "exact", "weak"):
            out.append(
                {
                    "estimator": name,
                    "risk": self.risks[name],
                    "stderr": self.stderrs[name],
                    "m": self.m,
                    "m_triv": self.m_triv,
                    "n": self.config.n_samples,
                    "sigma": self.config.sigma,
                    "eps": self.config.eps,
                }
            )
        return out


def find_certified_scheme(
    group: Group, rep: Representation, eps: float, delta: float, seed
) -> AveragingScheme:
    """Random schemes at the sufficient draw count until one certifies eps."""
    n = required_sample_count(group.order, eps, delta)
    for attempt in range(_MAX_SCHEME_TRIES):
        scheme = random_scheme(group, n, np.random.SeedSequence(entropy=seed, spawn_key=(attempt,)))
        if certify_weak(scheme, rep) <= eps:
            return scheme
    raise SearchFailureError(f"no random scheme certified eps={eps} in {_MAX_SCHEME_TRIES} tries")


def regression_risk(cfg: RegressionConfig, group: Optional[Group] = None) -> RegressionResult:
    """Monte Carlo excess risks of the three estimators.

    Exact symmetrization multiplies coefficients by the averaging matrix
    of the uniform scheme (the invariant projector); the weak estimator
    uses a scheme certified at ``cfg.eps``.  Risks are mean squared
    coefficient-space distances to the target.
    """
    if group is None:
        group = parse_group_spec(cfg.group_spec)
    rep = regular_rep(group)
    m = rep.dim
    if cfg.n_samples < m:
        raise UsageError(f"need n >= {m} samples for a full-rank design, got {cfg.n_samples}")
    m_triv = invariant_dimension(rep)

    projector = apply_scheme(uniform_scheme(group), rep).real
    if cfg.eps <= 0.0:
        scheme = uniform_scheme(group)
    else:
        scheme = find_certified_scheme(group, rep, cfg.eps, 0.1, cfg.seed)
    scheme_eps = certify_weak(scheme, rep)
    averaging = apply_scheme(scheme, rep).real

    target = np.full(m, 1.0 / np.sqrt(m))
    if cfg.invariant_perturbation:
        rng0 = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(1,)))
        bump = projector @ rng0.normal(size=m)
        target = target + cfg.invariant_perturbation * bump
        target /= np.linalg.norm(target)

    rng = np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(2,)))
    scale = np.sqrt(m)  # indicator basis normalized against the uniform measure
    sq = {name: np.empty(cfg.trials) for name in ("erm", "exact", "weak")}
    for t in range(cfg.trials):
        for _ in range(_MAX_REDRAWS):
            draws = rng.integers(0, m, size=cfg.n_samples)
            counts = np.bincount(draws, minlength=m)
            if counts.min() > 0:  # diagonal design: full rank iff all elements hit
                break
        else:
            raise UsageError("could not draw a full-rank design; increase n_samples")
        y = scale * target[draws] + (
            rng.normal(0.0, cfg.sigma, size=cfg.n_samples) if cfg.sigma > 0 else 0.0
        )
        # normal equations; X^T X = m * diag(counts), X^T y accumulates per element
        xty = scale * np.bincount(draws, weights=y, minlength=m)
        coef = xty / (m * counts)
        sq["erm"][t] = float(((coef - target) ** 2).sum())
        sq["exact"][t] = float(((projector @ coef - target) ** 2).sum())
        sq["weak"][t] = float(((averaging @ coef - target) ** 2).sum())
    risks = {k: float(v.mean()) for k, v in sq.items()}
    stderrs = {k: float(v.std(ddof=1) / np.sqrt(cfg.trials)) if cfg.trials > 1 else 0.0 for k, v in sq.items()}
    return RegressionResult(
        config=cfg,
        m=m,
        m_triv=m_triv,
        risks=risks,
        stderrs=stderrs,
        scheme_eps=float(scheme_eps),
        scheme_size=scheme.size,
    )


def regression_csv(result: RegressionResult) -> str:
    lines = ["estimator,risk,stderr,m,m_triv,n,sigma,eps"]
    for row in result.rows():
        lines.append(
            f"{row['estimator']},{row['risk']:.17g},{row['stderr']:.17g},{row['m']},"
            f"{row['m_triv']},{row['n']},{row['sigma']:.17g},{row['eps']:.17g}"
        )
    return "\n".join(lines) + "\n"
