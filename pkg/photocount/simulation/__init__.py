"""Monte-Carlo ground truth for the moment and distribution engines."""

from photocount.simulation.estimators import (
    MCEstimate,
    estimate_laplace,
    estimate_moments,
    estimate_pn,
    ladder_ratio,
    poisson_weights,
    quadrature_second_moment,
    richardson_ratio,
    summarize,
)
from photocount.simulation.trajectory import (
    Trajectory,
    block_generator,
    energy_block,
    sample_energies,
    sample_energies_async,
    sample_energy_ladder,
    sample_energy_ladder_async,
    sample_trajectory,
)

__all__ = [
    "MCEstimate",
    "Trajectory",
    "block_generator",
    "energy_block",
    "estimate_laplace",
    "estimate_moments",
    "estimate_pn",
    "ladder_ratio",
    "poisson_weights",
    "quadrature_second_moment",
    "richardson_ratio",
    "sample_energies",
    "sample_energies_async",
    "sample_energy_ladder",
    "sample_energy_ladder_async",
    "sample_trajectory",
    "summarize",
]
