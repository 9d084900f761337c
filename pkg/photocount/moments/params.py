"""Physical parameters of the noise model and Laplace evaluation points.

Public entry points take the physical triple (nu, sigma, t_phys); every
internal formula works with the dimensionless pair (tau, theta) derived here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from pydantic import BaseModel, ConfigDict, Field

from photocount.exceptions import DomainError


class ModelParams(BaseModel):
    """Ornstein-Uhlenbeck noise parameters and registration time."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    nu: float = Field(gt=0, description="Relaxation rate (1/time)")
    sigma: float = Field(gt=0, description="Noise intensity (energy * rate)")
    t_phys: float = Field(ge=0, description="Registration time")

    @property
    def tau(self) -> float:
        """Dimensionless time nu * T."""
        return self.nu * self.t_phys

    @property
    def theta(self) -> float:
        """Dimensionless energy scale 2 sigma / nu^2."""
        return 2.0 * self.sigma / (self.nu * self.nu)

    @property
    def mean_energy(self) -> float:
        """E[J] = sigma T / nu, the Poisson-limit mean photocount."""
        return self.sigma * self.t_phys / self.nu

    @property
    def stationary_variance(self) -> float:
        """Variance sigma / (2 nu) of each real field component."""
        return self.sigma / (2.0 * self.nu)

    @classmethod
    def from_dimensionless(cls, tau: float, sigma_ratio: float, nu: float = 1.0) -> "ModelParams":
        """Build parameters from tau and the ratio sigma / nu^2."""
        return cls(nu=nu, sigma=sigma_ratio * nu * nu, t_phys=tau / nu)


@dataclass(frozen=True)
class EvalPoint:
    """Laplace variable lambda with its derived z, q and r."""

    lam: float
    z: float
    q: float
    r: float

    @classmethod
    def at(cls, lam: float, params: ModelParams) -> "EvalPoint":
        z = params.theta * lam
        q_squared = 1.0 + z
        if not q_squared > 0:
            raise DomainError(
                "gen_func", f"1 + theta*lambda must be positive, got {q_squared!r}",
                {"lambda": lam, "theta": params.theta},
            )
        q = math.sqrt(q_squared)
        return cls(lam=lam, z=z, q=q, r=params.nu * q)
