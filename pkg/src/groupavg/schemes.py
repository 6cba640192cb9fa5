"""Averaging schemes: construction, certification, and size minimization.

A scheme is a sparse real weighting on group elements with unit sum
(negative weights allowed).  Certification measures how strongly the
induced averaging operator shrinks the non-symmetric component of a
function class, either from a concrete representation (projector path)
or from Fourier coefficient norms over an irrep table (fourier path).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import GroupMismatchError, NumericalConsistencyError, UsageError
from .fourier import (
    FourierCoefficients,
    GroupSignal,
    fourier_transform,
    max_nontrivial_norm,
    per_irrep_norms,
    spectral_norm,
)
from .groups import Group, sample_uniform
from .irreps import IrrepTable
from .reps import Representation, invariant_dimension, invariant_projector

WEIGHT_SUM_TOL = 1e-12
SUPPORT_EPS = 1e-15
SANDWICH_SLACK = 1e-9


@dataclass
class AveragingScheme:
    """Sparse unit-sum weighting on group elements.

    ``support`` holds sorted distinct element indices and ``weights`` the
    matching values; entries below the support threshold are dropped.
    The weight sum must be 1 within 1e-12.
    """

    group: Group
    support: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        support = np.asarray(self.support, dtype=np.int64)
        weights = np.asarray(self.weights, dtype=np.float64)
        if support.shape != weights.shape or support.ndim != 1:
            raise UsageError("support and weights must be matching 1-d arrays")
        if support.size and (support.min() < 0 or support.max() >= self.group.order):
            raise UsageError("support index out of range")
        # merge duplicates, sort, drop numerically-zero weights
        merged: dict[int, float] = {}
        for g, w in zip(support.tolist(), weights.tolist()):
            merged[g] = merged.get(g, 0.0) + w
        items = sorted((g, w) for g, w in merged.items() if abs(w) > SUPPORT_EPS)
        self.support = np.array([g for g, _ in items], dtype=np.int64)
        self.weights = np.array([w for _, w in items], dtype=np.float64)
        total = float(self.weights.sum())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise UsageError(f"weights sum to {total!r}, expected 1")

    @property
    def size(self) -> int:
        return int(self.support.size)

    def to_signal(self) -> GroupSignal:
        dense = np.zeros(self.group.order)
        dense[self.support] = self.weights
        return GroupSignal(group=self.group, weights=dense)


@dataclass
class CertificationReport:
    """Certified shrink factors for a scheme on a function class.

    ``eps_weak`` bounds the average-over-group shrink, ``eps_strong`` the
    per-element worst case; the sandwich eps_weak <= eps_strong <=
    4*eps_weak holds up to numerical slack.  ``degenerate`` marks classes
    with no non-symmetric component (both values vacuously 0).
    """

    eps_weak: float
    eps_strong: float
    method: str
    per_irrep_norms: Optional[dict[str, float]] = None
    degenerate: bool = False

    def __post_init__(self):
        if self.eps_weak > self.eps_strong + SANDWICH_SLACK:
            raise NumericalConsistencyError(
                f"eps_weak {self.eps_weak} exceeds eps_strong {self.eps_strong}"
            )
        if self.eps_strong > 4.0 * self.eps_weak + SANDWICH_SLACK:
            raise NumericalConsistencyError(
                f"eps_strong {self.eps_strong} exceeds 4 * eps_weak {self.eps_weak}"
            )

    def to_json(self) -> dict:
        return {
            "eps_weak": float(self.eps_weak),
            "eps_strong": float(self.eps_strong),
            "method": self.method,
            "per_irrep_norms": self.per_irrep_norms,
            "degenerate": self.degenerate,
            "tolerances": {"sandwich_slack": SANDWICH_SLACK, "weight_sum": WEIGHT_SUM_TOL},
        }


# -- constructors ----------------------------------------------------------


def uniform_scheme(group: Group) -> AveragingScheme:
    n = group.order
    return AveragingScheme(group, np.arange(n), np.full(n, 1.0 / n))


def delta_scheme(group: Group, g: int) -> AveragingScheme:
    if not 0 <= g < group.order:
        raise UsageError(f"element index {g} out of range")
    return AveragingScheme(group, np.array([g]), np.array([1.0]))


def random_scheme(group: Group, n: int, seed) -> AveragingScheme:
    """Empirical measure of n i.i.d. uniform draws; collisions merge."""
    draws = sample_uniform(group, n, seed)
    support, counts = np.unique(draws, return_counts=True)
    return AveragingScheme(group, support, counts / float(n))


def required_sample_count(order: int, eps: float, delta: float) -> int:
    """Draw count sufficient for a random scheme to certify eps w.p. 1 - delta.

    ceil(2.67 * (ln(order) + ln(1/delta) + 0.7) / eps), natural logs; the
    constant comes from the exp(-3 n eps / 8) tail of the matrix
    concentration bound behind the construction.
    """
    if not 0.0 < eps < 1.0:
        raise UsageError(f"eps must lie in (0, 1), got {eps}")
    if not 0.0 < delta < 1.0:
        raise UsageError(f"delta must lie in (0, 1), got {delta}")
    if order < 1:
        raise UsageError("order must be positive")
    return int(math.ceil(2.67 * (math.log(order) + math.log(1.0 / delta) + 0.7) / eps))


# -- certification ----------------------------------------------------------


def apply_scheme(scheme: AveragingScheme, rep: Representation) -> np.ndarray:
    """Matrix of the averaging operator on the representation space."""
    if scheme.group != rep.group:
        raise GroupMismatchError("scheme and representation are over different groups")
    return np.einsum("s,sij->ij", scheme.weights.astype(np.complex128), rep.mats[scheme.support])


def certify_weak(scheme: AveragingScheme, rep: Representation) -> float:
    """Tight average-case shrink factor of the scheme on this class.

    Squared spectral norm of the averaging operator compressed to the
    orthogonal complement of the fixed subspace; 0 when that complement
    is trivial (degenerate class).
    """
    if invariant_dimension(rep) == rep.dim:
        return 0.0
    proj = invariant_projector(rep)
    comp = np.eye(rep.dim) - proj
    return spectral_norm(comp @ apply_scheme(scheme, rep) @ comp) ** 2


def certify_strong(scheme: AveragingScheme, rep: Representation) -> float:
    """Tight worst-case-over-elements shrink factor on this class.

    Half the squared spectral norm of (rho(g) - I) M (I - Pi), maximized
    over g.
    """
    if invariant_dimension(rep) == rep.dim:
        return 0.0
    proj = invariant_projector(rep)
    averaged = apply_scheme(scheme, rep) @ (np.eye(rep.dim) - proj)
    worst = 0.0
    for g in range(rep.group.order):
        worst = max(worst, spectral_norm(rep.mats[g] @ averaged - averaged) ** 2)
    return 0.5 * worst


def _fourier_eps_strong(coeffs: FourierCoefficients, table: IrrepTable, restrict_to) -> float:
    worst = 0.0
    for i, (rep, mat) in enumerate(zip(table.irreps, coeffs.mats)):
        if i == table.trivial_index:
            continue
        if restrict_to is not None and restrict_to[i] < 1:
            continue
        block = mat.conj().T  # operator induced on the irrep block
        for g in range(table.group.order):
            worst = max(worst, spectral_norm(rep.mats[g] @ block - block) ** 2)
    return 0.5 * worst


def certify(
    scheme: AveragingScheme,
    target: Union[Representation, IrrepTable],
    multiplicities: Optional[np.ndarray] = None,
) -> CertificationReport:
    """Full certification report via the projector or fourier path.

    A Representation target uses the projector path; an IrrepTable target
    uses Fourier coefficient norms, optionally restricted to irreps with
    nonzero entries of ``multiplicities`` (all irreps by default, which
    matches the regular action).
    """
    if isinstance(target, Representation):
        weak = certify_weak(scheme, target)
        degenerate = invariant_dimension(target) == target.dim
        strong = certify_strong(scheme, target)
        return CertificationReport(
            eps_weak=weak, eps_strong=strong, method="projector_path", degenerate=degenerate
        )
    if isinstance(target, IrrepTable):
        coeffs = fourier_transform(scheme.to_signal(), target)
        weak = max_nontrivial_norm(coeffs, target, restrict_to=multiplicities)
        strong = _fourier_eps_strong(coeffs, target, multiplicities)
        if multiplicities is None:
            degenerate = len(target) == 1
        else:
            degenerate = not any(
                multiplicities[i] >= 1 for i in range(len(target)) if i != target.trivial_index
            )
        return CertificationReport(
            eps_weak=weak,
            eps_strong=strong,
            method="fourier_path",
            per_irrep_norms=per_irrep_norms(coeffs, target),
            degenerate=degenerate,
        )
    raise UsageError("certification target must be a Representation or IrrepTable")


def certify_weak_target(
    scheme: AveragingScheme,
    target: Union[Representation, IrrepTable],
    multiplicities: Optional[np.ndarray] = None,
) -> float:
    """Weak certificate only (cheaper than the full report)."""
    if isinstance(target, Representation):
        return certify_weak(scheme, target)
    if isinstance(target, IrrepTable):
        coeffs = fourier_transform(scheme.to_signal(), target)
        return max_nontrivial_norm(coeffs, target, restrict_to=multiplicities)
    raise UsageError("certification target must be a Representation or IrrepTable")


# -- minimization ------------------------------------------------------------


@dataclass
class MinimizeResult:
    """Outcome of the scheme-size search."""

    scheme: AveragingScheme
    eps: float
    status: str  # "ok" | "search_failure"
    eps_target: float
    trace: list[dict] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.status == "ok"

    @property
    def size(self) -> int:
        return self.scheme.size


def _candidate_key(eps: float, scheme: AveragingScheme):
    return (scheme.size, eps, tuple(scheme.support.tolist()))


def minimize_scheme(
    group: Group,
    target: Union[Representation, IrrepTable],
    eps_target: float,
    trial_budget: int = 40,
    seed: int = 0,
    swap_budget: int = 200,
    multiplicities: Optional[np.ndarray] = None,
    threads: int = 1,
) -> MinimizeResult:
    """Heuristic search for a small scheme certifying at most ``eps_target``.

    Binary search over the draw count with ``trial_budget`` random
    schemes per count, followed by local support swaps that keep the
    certificate from increasing.  The uniform scheme is always a
    feasible fallback, so the search-failure status is reserved for
    degenerate call patterns.  Global optimality is not claimed.

    Deterministic given ``seed``: ties break toward lower certified eps,
    then lexicographically smaller support.
    """
    if not 0.0 < eps_target < 1.0:
        raise UsageError(f"eps_target must lie in (0, 1), got {eps_target}")
    if trial_budget < 0 or swap_budget < 0:
        raise UsageError("budgets must be nonnegative")

    def cert(s: AveragingScheme) -> float:
        return certify_weak_target(s, target, multiplicities)

    trace: list[dict] = []
    best_scheme = uniform_scheme(group)
    best_eps = cert(best_scheme)
    best_feasible = best_eps <= eps_target
    trace.append(
        {"phase": "fallback", "size": best_scheme.size, "eps": best_eps, "feasible": best_feasible}
    )

    def trials_at(n: int):
        seeds = [np.random.SeedSequence(entropy=seed, spawn_key=(n, t)) for t in range(trial_budget)]
        schemes = [random_scheme(group, n, s) for s in seeds]
        if threads > 1 and schemes:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                epss = list(pool.map(cert, schemes))
        else:
            epss = [cert(s) for s in schemes]
        return list(zip(schemes, epss))

    lo, hi = 1, group.order
    while lo < hi:
        mid = (lo + hi) // 2
        results = trials_at(mid)
        feasible = [(s, e) for s, e in results if e <= eps_target]
        trace.append(
            {
                "phase": "search",
                "draws": mid,
                "trials": len(results),
                "feasible_trials": len(feasible),
                "best_eps": min((e for _, e in results), default=None),
            }
        )
        if feasible:
            cand_scheme, cand_eps = min(feasible, key=lambda se: _candidate_key(se[1], se[0]))
            if not best_feasible or _candidate_key(cand_eps, cand_scheme) < _candidate_key(
                best_eps, best_scheme
            ):
                best_scheme, best_eps, best_feasible = cand_scheme, cand_eps, True
            hi = mid
        else:
            lo = mid + 1

    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(0xABCD,)))
    accepted = 0
    for _ in range(swap_budget):
        if best_scheme.size <= 1:
            break
        pos = int(rng.integers(0, best_scheme.size))
        replacement = int(rng.integers(0, group.order))
        support = best_scheme.support.copy()
        if replacement == support[pos]:
            continue
        support[pos] = replacement
        try:
            candidate = AveragingScheme(group, support, best_scheme.weights.copy())
        except UsageError:
            continue
        cand_eps = cert(candidate)
        if cand_eps <= best_eps and (not best_feasible or cand_eps <= eps_target):
            if _candidate_key(cand_eps, candidate) < _candidate_key(best_eps, best_scheme):
                best_scheme, best_eps = candidate, cand_eps
                best_feasible = best_feasible or cand_eps <= eps_target
                accepted += 1
    trace.append({"phase": "swaps", "accepted": accepted, "size": best_scheme.size, "eps": best_eps})

    status = "ok" if best_feasible else "search_failure"
    return MinimizeResult(
        scheme=best_scheme, eps=best_eps, status=status, eps_target=eps_target, trace=trace
    )


# -- serialization ------------------------------------------------------------


def scheme_to_json(scheme: AveragingScheme) -> dict:
    from .groups import group_spec_string

    return {
        "group": {
            "spec": group_spec_string(scheme.group),
            "family": scheme.group.family,
            "order": scheme.group.order,
        },
        "support": [int(g) for g in scheme.support],
        "weights": [float(w) for w in scheme.weights],
        "size": scheme.size,
    }


def scheme_from_json(data: dict, group: Optional[Group] = None) -> AveragingScheme:
    from .groups import parse_group_spec

    if group is None:
        group = parse_group_spec(data["group"]["spec"])
    if group.order != data["group"]["order"]:
        raise UsageError("scheme JSON order does not match the supplied group")
    return AveragingScheme(
        group, np.array(data["support"], dtype=np.int64), np.array(data["weights"])
    )
