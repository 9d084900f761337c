"""
Exact-discretization sampling of the complex Ornstein-Uhlenbeck field.

Each real component follows the AR(1) recursion

    x_{k+1} = a x_k + s e_k,   a = exp(−nu Δ),   s^2 = sigma (1 − a^2) / (2 nu),

started from the stationary law N(0, sigma / (2 nu)). The absorbed energy J is
the trapezoidal integral of xi^2 + eta^2 over the grid.

Random numbers come from counter-based Philox streams, one per fixed-size
block of trajectories, so the sample set depends only on (seed, n_samples,
steps, block_size) and never on the worker count.
"""
from __future__ import annotations

import asyncio
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.integrate import trapezoid
from scipy.signal import lfilter
from tqdm import tqdm

from photocount.config import get_settings
from photocount.exceptions import ContractViolationError, SimulationError
from photocount.moments import ModelParams

logger = logging.getLogger(__name__)

# Philox counter word reserved for the block index
_BLOCK_COUNTER_WORD = 2


@dataclass(frozen=True, eq=False)
class Trajectory:
    params: ModelParams
    times: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    j_value: float

    @property
    def steps(self) -> int:
        return len(self.times) - 1


def block_generator(seed: int, block: int) -> np.random.Generator:
    """Independent Philox stream for one block of trajectories."""
    counter = [0, 0, 0, 0]
    counter[_BLOCK_COUNTER_WORD] = block
    return np.random.Generator(np.random.Philox(key=seed, counter=counter))


def _check_grid(params: ModelParams, steps: int) -> None:
    if steps < 1:
        raise ContractViolationError("sample_trajectory", f"steps must be at least 1, got {steps}")


def _component_paths(params: ModelParams, steps: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Array (2, count, steps + 1) of xi and eta paths."""
    dt = params.t_phys / steps
    a = math.exp(-params.nu * dt)
    stationary_sd = math.sqrt(params.stationary_variance)
    innovation_sd = stationary_sd * math.sqrt(-math.expm1(-2.0 * params.nu * dt))

    noise = rng.standard_normal((2, count, steps + 1))
    noise[..., 0] *= stationary_sd
    noise[..., 1:] *= innovation_sd
    return lfilter([1.0], [1.0, -a], noise, axis=-1)


def _energies(paths: np.ndarray, dt: float, strides: Sequence[int]) -> np.ndarray:
    intensity = paths[0] ** 2 + paths[1] ** 2
    return np.stack([trapezoid(intensity[:, ::s], dx=dt * s, axis=-1) for s in strides])


def sample_trajectory(params: ModelParams, steps: int, rng: np.random.Generator) -> Trajectory:
    """One trajectory of the field on the uniform grid 0..t_phys."""
    _check_grid(params, steps)
    paths = _component_paths(params, steps, 1, rng)
    dt = params.t_phys / steps
    j_value = float(_energies(paths, dt, (1,))[0, 0])
    times = np.linspace(0.0, params.t_phys, steps + 1)
    return Trajectory(params=params, times=times, xi=paths[0, 0], eta=paths[1, 0], j_value=j_value)


def energy_block(
    params: ModelParams,
    steps: int,
    seed: int,
    block: int,
    count: int,
    strides: Sequence[int] = (1,),
) -> np.ndarray:
    """J for `count` trajectories of one block; one row per quadrature stride."""
    paths = _component_paths(params, steps, count, block_generator(seed, block))
    return _energies(paths, params.t_phys / steps, strides)


def _block_sizes(n_samples: int, block_size: int) -> list[int]:
    full, rest = divmod(n_samples, block_size)
    return [block_size] * full + ([rest] if rest else [])


async def sample_energy_ladder_async(
    params: ModelParams,
    n_samples: int,
    steps: int,
    seed: int,
    *,
    strides: Sequence[int] = (1,),
    block_size: Optional[int] = None,
    workers: Optional[int] = None,
    progress: Optional[bool] = None,
) -> np.ndarray:
    """J samples for each stride, shape (len(strides), n_samples).

    Coarser quadratures reuse the fine-grid paths, so rows are coupled.
    """
    _check_grid(params, steps)
    if n_samples < 1:
        raise ContractViolationError("sample_energies", f"n_samples must be positive, got {n_samples}")
    if any(steps % s for s in strides):
        raise ContractViolationError("sample_energies", f"strides {list(strides)} must divide steps={steps}")
    settings = get_settings().simulation
    block_size = block_size or settings.block_size
    workers = workers or settings.workers
    show_progress = settings.progress if progress is None else progress
    sizes = _block_sizes(n_samples, block_size)

    logger.debug(
        "sampling %d trajectories in %d blocks of %d on %d workers",
        n_samples, len(sizes), block_size, workers,
    )
    started = time.perf_counter()
    loop = asyncio.get_running_loop()
    bar = tqdm(total=len(sizes), desc="blocks", unit="block", disable=not show_progress)
    try:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = []
            for block, count in enumerate(sizes):
                future = loop.run_in_executor(pool, energy_block, params, steps, seed, block, count, tuple(strides))
                future.add_done_callback(lambda _: bar.update(1))
                futures.append(future)
            # gather keeps block order, so the merge is independent of scheduling
            parts = await asyncio.gather(*futures)
    except (ValueError, FloatingPointError, MemoryError) as exc:
        raise SimulationError(f"trajectory sampling failed: {exc}", {"seed": seed, "steps": steps}) from exc
    finally:
        bar.close()

    energies = np.concatenate(parts, axis=1)
    logger.info("sampled %d energies in %.2fs", n_samples, time.perf_counter() - started)
    return energies


async def sample_energies_async(
    params: ModelParams,
    n_samples: int,
    steps: int,
    seed: int,
    **options,
) -> np.ndarray:
    return (await sample_energy_ladder_async(params, n_samples, steps, seed, **options))[0]


def _run(coro):
    try:
        return asyncio.run(coro)
    except RuntimeError as exc:
        coro.close()
        if "running event loop" in str(exc):
            raise SimulationError("called from a running event loop; await the *_async variant instead") from exc
        raise


def sample_energies(params: ModelParams, n_samples: int, steps: int, seed: int, **options) -> np.ndarray:
    """Synchronous facade over :func:`sample_energies_async`."""
    return _run(sample_energies_async(params, n_samples, steps, seed, **options))


def sample_energy_ladder(
    params: ModelParams,
    n_samples: int,
    steps: int,
    seed: int,
    levels: int = 3,
    **options,
) -> Dict[int, np.ndarray]:
    """Coupled J samples at steps, steps/2, ..., steps/2^(levels−1)."""
    strides = tuple(2 ** i for i in range(levels))
    rows = _run(sample_energy_ladder_async(params, n_samples, steps, seed, strides=strides, **options))
    return {steps // s: rows[i] for i, s in enumerate(strides)}
