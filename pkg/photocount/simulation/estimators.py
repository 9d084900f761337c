"""Monte-Carlo estimators built as reductions of a J sample array."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.special import gammaln, xlogy

from photocount.exceptions import ContractViolationError
from photocount.moments import ModelParams
from photocount.simulation.trajectory import sample_energies

logger = logging.getLogger(__name__)

MIN_SAMPLES = 1000


@dataclass(frozen=True)
class MCEstimate:
    value: float
    stderr: float
    n_samples: int
    seed: int
    steps: int

    def to_dict(self) -> Dict[str, float]:
        return {
            "value": self.value,
            "stderr": self.stderr,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "steps": self.steps,
        }


def summarize(values: np.ndarray, seed: int, steps: int) -> MCEstimate:
    """Sample mean with stderr = sd / sqrt(n)."""
    n = values.size
    stderr = float(np.std(values, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return MCEstimate(value=float(np.mean(values)), stderr=stderr, n_samples=n, seed=seed, steps=steps)


def _energies(
    params: ModelParams,
    n_samples: int,
    steps: int,
    seed: int,
    energies: Optional[np.ndarray],
    options: dict,
) -> np.ndarray:
    if n_samples < MIN_SAMPLES:
        raise ContractViolationError("estimate", f"n_samples must be at least {MIN_SAMPLES}, got {n_samples}")
    if energies is not None:
        if energies.shape != (n_samples,):
            raise ContractViolationError("estimate", f"expected {n_samples} energies, got shape {energies.shape}")
        return energies
    return sample_energies(params, n_samples, steps, seed, **options)


def estimate_moments(
    params: ModelParams,
    max_n: int,
    n_samples: int,
    steps: int,
    seed: int,
    *,
    energies: Optional[np.ndarray] = None,
    **options,
) -> List[MCEstimate]:
    """Sample means of J^n for n = 0..max_n."""
    j = _energies(params, n_samples, steps, seed, energies, options)
    return [summarize(j ** n, seed, steps) for n in range(max_n + 1)]


def poisson_weights(j: np.ndarray, n: int) -> np.ndarray:
    """J^n e^{−J} / n!, with 0^0 == 1."""
    return np.exp(xlogy(n, j) - j - gammaln(n + 1))


def estimate_pn(
    params: ModelParams,
    n_max: int,
    n_samples: int,
    steps: int,
    seed: int,
    *,
    energies: Optional[np.ndarray] = None,
    **options,
) -> List[MCEstimate]:
    """P_n estimated as the sample mean of the conditional Poisson mass J^n e^{−J}/n!."""
    j = _energies(params, n_samples, steps, seed, energies, options)
    return [summarize(poisson_weights(j, n), seed, steps) for n in range(n_max + 1)]


def estimate_laplace(
    params: ModelParams,
    lam: float,
    n_samples: int,
    steps: int,
    seed: int,
    *,
    energies: Optional[np.ndarray] = None,
    **options,
) -> MCEstimate:
    """Sample mean of exp(−lam J)."""
    if not (math.isfinite(lam) and lam >= 0):
        raise ContractViolationError("estimate_laplace", f"lambda must be finite and non-negative, got {lam!r}")
    j = _energies(params, n_samples, steps, seed, energies, options)
    return summarize(np.exp(-lam * j), seed, steps)


def quadrature_second_moment(params: ModelParams, steps: int) -> float:
    """E[J_K^2] for the trapezoidal J_K on K = steps intervals, in closed form.

    Uses E[|ζ_i|^2 |ζ_j|^2] = s^2 (1 + exp(−2 nu |t_i − t_j|)) with s = sigma / nu.
    """
    if steps < 1:
        raise ContractViolationError("quadrature_second_moment", f"steps must be at least 1, got {steps}")
    dt = params.t_phys / steps
    weights = np.full(steps + 1, dt)
    weights[[0, -1]] = dt / 2.0
    times = np.linspace(0.0, params.t_phys, steps + 1)
    kernel = 1.0 + np.exp(-2.0 * params.nu * np.abs(times[:, None] - times[None, :]))
    s = params.sigma / params.nu
    return float(s * s * weights @ kernel @ weights)


def richardson_ratio(estimate: Callable[[int], float], steps: int) -> float:
    """|est(K) − est(2K)| / |est(2K) − est(4K)|; close to 4 for an O(Δ^2) bias."""
    coarse, mid, fine = (estimate(steps * f) for f in (1, 2, 4))
    denominator = abs(mid - fine)
    if denominator == 0:
        return math.inf
    return abs(coarse - mid) / denominator


def ladder_ratio(ladder: Dict[int, np.ndarray], power: int = 1) -> float:
    """Richardson ratio of mean J^power over coupled samples from ``sample_energy_ladder``."""
    keys = sorted(ladder)
    if len(keys) != 3:
        raise ContractViolationError("ladder_ratio", f"expected three grid levels, got {keys}")
    means = {k: float(np.mean(ladder[k] ** power)) for k in keys}
    return richardson_ratio(lambda k: means[k], keys[0])
